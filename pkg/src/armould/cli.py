"""Batch front door: subcommands over JSON/CSV for every module.

Outputs are deterministic (fixed enumeration orders, no unseeded randomness)
and numbers in JSON payloads are strings: exact rationals where the value is
exact, full-precision reprs for floats.  Exit codes: 0 success, 1 a declared
tolerance failed (with a machine-readable failure record on stdout), 2 bad
usage or parse error.
"""

from __future__ import annotations

import argparse
import cmath
import json
import sys
from fractions import Fraction

from .moulds import (
    Mould,
    arborify,
    builtin_mould,
    check_symmetry,
    mould_compose,
    mould_mul,
    words_over,
)
from .monomials import (
    ContourSpec,
    borel_pole_probe,
    growth_scan,
    hyperlog_V_eval,
    paralog_forest_eval,
    paralog_variants,
)
from .kernels import KernelParams, f_closed_form_oracle, f_eval, g_eval, g_sup_bound
from .synthesis import (
    InvariantFamily,
    SynthesisConfig,
    build_theta,
    conjugate_normal_field,
    linear_rh_synthesize,
)
from .values import format_exact, parse_exact
from .words import (
    contracting_covers,
    contracting_shuffle,
    letter,
    linear_extensions,
    parse_forest,
    parse_word,
    shuffle,
)


def _fnum(x) -> str:
    """Full-precision decimal encoding; never a raw float in payloads."""
    if isinstance(x, complex):
        return f"{x.real!r}{'+' if x.imag >= 0 else '-'}{abs(x.imag)!r}i"
    return repr(float(x))


def _emit(payload, fmt: str):
    if fmt == "json":
        print(json.dumps(payload, indent=2, sort_keys=True))
    elif fmt == "csv":
        rows = payload.get("rows", [])
        header = payload.get("header")
        if header:
            print(",".join(header))
        for row in rows:
            print(",".join(str(c) for c in row))
    else:  # text-table
        for k, v in payload.items():
            print(f"{k}: {v}")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="armould", description="mould calculus and paralogarithmic synthesis toolkit")
    parser.add_argument("--threads", type=int, default=1, help="cap on internal parallelism (evaluations are deterministic regardless)")
    sub = parser.add_subparsers(dest="command", required=True)

    p_sh = sub.add_parser("shuffle", help="shuffle or contracting-shuffle two words")
    p_sh.add_argument("word1")
    p_sh.add_argument("word2")
    p_sh.add_argument("--contracting", action="store_true")
    p_sh.add_argument("--format", default="text-table", choices=["json", "csv", "text-table"])

    p_m = sub.add_parser("mould", help="mould operations")
    msub = p_m.add_subparsers(dest="mould_command", required=True)
    p_mc = msub.add_parser("check", help="symmetry check")
    p_mc.add_argument("--builtin", required=True)
    p_mc.add_argument("--kind", required=True, choices=["symmetral", "symmetrel", "alternal", "alternel"])
    p_mc.add_argument("--cap", type=int, default=4)
    p_mc.add_argument("--alphabet", default="1,2")
    for name, fn in (("mul", None), ("compose", None)):
        p_mx = msub.add_parser(name, help=f"mould {name} on JSON tables")
        p_mx.add_argument("table1")
        p_mx.add_argument("table2")
        p_mx.add_argument("--cap", type=int, default=None)
    p_ma = msub.add_parser("arborify", help="arborified values on a forest")
    p_ma.add_argument("--builtin", required=True)
    p_ma.add_argument("--forest", required=True)
    p_ma.add_argument("--mode", default="simple", choices=["simple", "contracting"])
    p_ma.add_argument("--counting", default="merges", choices=["merges", "surjections"])

    p_f = sub.add_parser("forest", help="forest order morphisms")
    fsub = p_f.add_subparsers(dest="forest_command", required=True)
    p_fe = fsub.add_parser("extensions")
    p_fe.add_argument("forest")
    p_fe.add_argument("--contracting", action="store_true")
    p_fe.add_argument("--counting", default="merges", choices=["merges", "surjections"])

    p_k = sub.add_parser("kernel", help="kernel evaluations")
    ksub = p_k.add_subparsers(dest="kernel_command", required=True)
    p_ke = ksub.add_parser("eval")
    p_ke.add_argument("--c", type=float, required=True)
    p_ke.add_argument("--omega", type=float, required=True)
    p_ke.add_argument("--y", type=str, default=None)
    p_ke.add_argument("--x", type=str, default=None)
    p_ke.add_argument("--oracle", action="store_true", help="also evaluate the Bessel closed form and compare")

    p_mo = sub.add_parser("monomial", help="monomial evaluations")
    mosub = p_mo.add_subparsers(dest="monomial_command", required=True)
    p_me = mosub.add_parser("eval")
    p_me.add_argument("--word", default=None, help='word literal, e.g. "(1,2)"')
    p_me.add_argument("--forest", default=None, help='forest literal, e.g. "1(2,3)"')
    p_me.add_argument("--z", type=str, required=True)
    p_me.add_argument("--c", type=float, required=True)
    p_me.add_argument("--family", default="paralog", choices=["paralog", "hyperlog"])
    p_me.add_argument("--json", action="store_true")
    p_me.add_argument("--csv", action="store_true")
    p_gs = mosub.add_parser("growth-scan")
    p_gs.add_argument("--c-grid", default="0.5,1,2,4")
    p_gs.add_argument("--norm-cap", type=int, default=4)
    p_gs.add_argument("--z", type=str, default="-2")
    p_gs.add_argument("--forests", action="store_true")
    p_pp = mosub.add_parser("pole-probe")
    p_pp.add_argument("--omega", type=float, required=True)
    p_pp.add_argument("--c", type=float, required=True)

    p_sy = sub.add_parser("synthesize", help="saddle-node synthesis from invariants")
    p_sy.add_argument("--invariants", required=True, help='JSON file: {"A": {"1": "0.25"}, "H": 1.0}')
    p_sy.add_argument("--c", type=float, required=True)
    p_sy.add_argument("--caps", default="6,6,4", help="N_u,N_z,R_max")
    p_sy.add_argument("--z-ray", default="pi", help="ray angle (radians, or 'pi')")
    p_sy.add_argument("--z-moduli", default="2", help="comma list of |z| samples on the ray")
    p_sy.add_argument("--out", default=None, help="write the JSON report here as well")
    p_sy.add_argument("--tol-automorphism", type=float, default=1e-6)
    p_sy.add_argument("--tol-derivation", type=float, default=1e-6)

    p_rh = sub.add_parser("linear-rh", help="rank-two linear inverse problem demo")
    p_rh.add_argument("--lambda1", type=str, default="1")
    p_rh.add_argument("--lambda2", type=str, default="0")
    p_rh.add_argument("--a12", type=str, required=True)
    p_rh.add_argument("--a21", type=str, required=True)
    p_rh.add_argument("--c", type=float, required=True)
    p_rh.add_argument("--r-max", type=int, default=4)

    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0

    try:
        return _dispatch(args)
    except (ValueError, KeyError, OSError) as exc:
        print(json.dumps({"error": str(exc)}), file=sys.stderr)
        return 2


def _dispatch(args) -> int:
    if args.command == "shuffle":
        w1, w2 = parse_word(args.word1), parse_word(args.word2)
        table = contracting_shuffle(w1, w2) if args.contracting else shuffle(w1, w2)
        rows = [(str(w), m) for w, m in sorted(table.items(), key=lambda kv: (kv[0].length, kv[0].sort_key()))]
        if args.format == "json":
            _emit({"entries": {w: m for w, m in rows}}, "json")
        else:
            for w, m in rows:
                print(f"{w}  x{m}")
        return 0

    if args.command == "mould":
        return _dispatch_mould(args)

    if args.command == "forest":
        f = parse_forest(args.forest)
        table = contracting_covers(f, counting=args.counting) if args.contracting else linear_extensions(f)
        for w, m in sorted(table.items(), key=lambda kv: (kv[0].length, kv[0].sort_key())):
            print(f"{w}  x{m}")
        return 0

    if args.command == "kernel":
        p = KernelParams(args.c, args.omega)
        payload = {"c": _fnum(args.c), "omega": _fnum(args.omega), "sup_bound": _fnum(g_sup_bound(p))}
        if args.y is not None:
            y = complex(args.y.replace("i", "j"))
            payload["g"] = _fnum(g_eval(p, y))
        if args.x is not None:
            x = complex(args.x.replace("i", "j"))
            v, err = f_eval(p, x)
            payload["f"] = _fnum(v)
            payload["f_error_estimate"] = _fnum(err)
            if args.oracle:
                ref = f_closed_form_oracle(p, x)
                payload["f_oracle"] = _fnum(ref)
                payload["f_vs_oracle_rel"] = _fnum(abs(v - ref) / abs(ref))
        _emit(payload, "json")
        return 0

    if args.command == "monomial":
        return _dispatch_monomial(args)

    if args.command == "synthesize":
        return _dispatch_synthesize(args)

    if args.command == "linear-rh":
        l1 = complex(args.lambda1.replace("i", "j"))
        l2 = complex(args.lambda2.replace("i", "j"))
        a12 = complex(args.a12.replace("i", "j"))
        a21 = complex(args.a21.replace("i", "j"))
        rep = linear_rh_synthesize((l1, l2), a12, a21, c=args.c, r_max=args.r_max)
        payload = {
            "omega_12": _fnum(l1 - l2),
            "c": _fnum(args.c),
            "term_norms": {str(r): _fnum(v) for r, v in sorted(rep.term_norms.items())},
            "geometric_decay": rep.geometric_decay,
        }
        _emit(payload, "json")
        return 0

    raise ValueError(f"unknown command {args.command!r}")


def _dispatch_mould(args) -> int:
    if args.mould_command == "check":
        m = builtin_mould(args.builtin)
        alphabet = [letter(parse_exact(tok)) for tok in args.alphabet.split(",")]
        rep = check_symmetry(m, args.kind, args.cap, alphabet)
        print(str(rep))
        return 0 if rep.passed else 1
    if args.mould_command in ("mul", "compose"):
        m1 = Mould.from_json(open(args.table1).read())
        m2 = Mould.from_json(open(args.table2).read())
        op = mould_mul if args.mould_command == "mul" else mould_compose
        out = op(m1, m2)
        cap = args.cap if args.cap is not None else min(m1.cap, m2.cap)
        entries = {}
        for w in words_over(m1.alphabet, cap):
            entries[str(w)] = format_exact(out.value(w))
        _emit({"cap": cap, "entries": entries}, "json")
        return 0
    if args.mould_command == "arborify":
        m = builtin_mould(args.builtin)
        arb = arborify(m, args.mode, counting=args.counting)
        f = parse_forest(args.forest)
        print(format_exact(arb.value(f)))
        return 0
    raise ValueError(f"unknown mould command {args.mould_command!r}")


def _parse_z(text: str) -> complex:
    return complex(text.replace("i", "j"))


def _dispatch_monomial(args) -> int:
    if args.monomial_command == "eval":
        z = _parse_z(args.z)
        spec = ContourSpec()
        if args.family == "hyperlog":
            if args.word is None:
                raise ValueError("hyperlog evaluation needs --word")
            mv = hyperlog_V_eval(parse_word(args.word), z)
            label = f"V{args.word}"
            rows = [(label, _fnum(z), _fnum(0.0), _fnum(mv.value.real), _fnum(mv.value.imag), _fnum(mv.error))]
        elif args.forest is not None:
            f = parse_forest(args.forest)
            mv = paralog_forest_eval(f, z, args.c, spec)
            rows = [(str(f), _fnum(z), _fnum(args.c), _fnum(mv.value.real), _fnum(mv.value.imag), _fnum(mv.error))]
        else:
            if args.word is None:
                raise ValueError("monomial eval needs --word or --forest")
            w = parse_word(args.word)
            ua, uc, ue = paralog_variants(w, z, args.c, spec)
            rows = [
                (f"Ua{args.word}", _fnum(z), _fnum(args.c), _fnum(ua.value.real), _fnum(ua.value.imag), _fnum(ua.error)),
                (f"Uc{args.word}", _fnum(z), _fnum(args.c), _fnum(uc.value.real), _fnum(uc.value.imag), _fnum(uc.error)),
                (f"Ue{args.word}", _fnum(z), _fnum(args.c), _fnum(ue.value.real), _fnum(ue.value.imag), _fnum(ue.error)),
            ]
        if args.csv:
            print("label,z,c,re,im,error")
            for row in rows:
                print(",".join(row))
        else:
            payload = {row[0]: {"z": row[1], "c": row[2], "re": row[3], "im": row[4], "error": row[5]} for row in rows}
            _emit(payload, "json")
        return 0
    if args.monomial_command == "growth-scan":
        cs = [float(tok) for tok in args.c_grid.split(",")]
        rep = growth_scan(cs, args.norm_cap, _parse_z(args.z), include_forests=args.forests)
        payload = {
            "z": _fnum(rep.z),
            "norm_cap": rep.norm_cap,
            "khat": {f"{c:g}": _fnum(v) for c, v in sorted(rep.khat.items())},
            "monotone_decreasing": rep.monotone_decreasing,
            "fit_slope": _fnum(rep.fit_slope),
            "fit_r2": _fnum(rep.fit_r2),
        }
        _emit(payload, "json")
        ok = rep.monotone_decreasing and rep.fit_slope < 0 and rep.fit_r2 >= 0.9
        return 0 if ok else 1
    if args.monomial_command == "pole-probe":
        loc, res = borel_pole_probe(args.omega, args.c)
        payload = {
            "expected_location": _fnum(-args.omega),
            "location": _fnum(loc),
            "residue": _fnum(res),
            "location_error": _fnum(abs(loc + args.omega)),
            "residue_error": _fnum(abs(res - 1.0)),
        }
        _emit(payload, "json")
        ok = abs(loc + args.omega) <= 1e-3 and abs(res - 1.0) <= 1e-4
        return 0 if ok else 1
    raise ValueError(f"unknown monomial command {args.monomial_command!r}")


def _dispatch_synthesize(args) -> int:
    data = json.loads(open(args.invariants).read())
    coeffs = {}
    for k, v in data.get("A", {}).items():
        if isinstance(v, str):
            coeffs[int(k)] = complex(parse_exact(v))
        else:
            coeffs[int(k)] = complex(v)
    growth = float(data.get("H", 1.0))
    inv = InvariantFamily(coeffs, growth_bound=growth)
    nu, nz, rmax = (int(tok) for tok in args.caps.split(","))
    theta_ray = cmath.pi if args.z_ray.strip() in ("pi", "PI") else float(args.z_ray)
    moduli = [float(tok) for tok in args.z_moduli.split(",")]
    z_samples = tuple(m * cmath.exp(1j * theta_ray) for m in moduli)
    z_samples = tuple(complex(round(z.real, 12), round(z.imag, 12)) for z in z_samples)
    cfg = SynthesisConfig(c=args.c, nu=nu, nz=nz, r_max=rmax, z_samples=z_samples)
    expansions = build_theta(inv, cfg)
    samples = [conjugate_normal_field(e) for e in expansions]
    rows = []
    for s in samples:
        for deg in sorted(s.action_on_u):
            v = s.action_on_u[deg]
            rows.append((_fnum(s.z), deg, _fnum(v.real), _fnum(v.imag)))
    worst_auto = max((s.automorphism_defect for s in samples), default=0.0)
    worst_deriv = max((s.derivation_defect for s in samples), default=0.0)
    tail_ratios = {}
    for e in expansions:
        for n, r in e.tail_ratios().items():
            tail_ratios[str(n)] = _fnum(max(r, float(tail_ratios.get(str(n), "0") or 0)))
    report = {
        "invariants": {str(n): _fnum(a) for n, a in sorted(inv.coefficients.items())},
        "c": _fnum(args.c),
        "caps": {"nu": nu, "nz": nz, "r_max": rmax},
        "z_samples": [_fnum(z) for z in cfg.z_samples],
        "tolerances": {
            "automorphism": _fnum(args.tol_automorphism),
            "derivation": _fnum(args.tol_derivation),
        },
        "automorphism_defect": _fnum(worst_auto),
        "derivation_defect": _fnum(worst_deriv),
        "tail_ratios": tail_ratios,
        "coefficient_rows_header": ["z", "u_degree", "re", "im"],
        "coefficient_rows": rows,
    }
    failures = []
    if worst_auto > args.tol_automorphism:
        failures.append({"check": "automorphism_defect", "value": _fnum(worst_auto), "tolerance": _fnum(args.tol_automorphism)})
    if worst_deriv > args.tol_derivation:
        failures.append({"check": "derivation_defect", "value": _fnum(worst_deriv), "tolerance": _fnum(args.tol_derivation)})
    report["failures"] = failures
    text = json.dumps(report, indent=2, sort_keys=True)
    print(text)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
