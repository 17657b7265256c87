"""Mould algebra over a commutative value algebra.

A mould is a map from words to values; values may be exact (Fraction,
GaussianRational), complex floats, or truncated z^{-1}-series — anything
with ring operations.  Moulds are rule-backed with memoisation; table-backed
moulds refuse queries beyond their cap instead of inventing zeros.
"""

from __future__ import annotations

import itertools
import json
import threading
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .values import GaussianRational, as_gaussian, format_exact, parse_exact
from .words import (
    EMPTY_WORD,
    Forest,
    Letter,
    Word,
    contracting_covers,
    contracting_shuffle,
    forests_of_norm,
    letter,
    linear_extensions,
    parse_word,
    shuffle,
    word,
)


class Mould:
    """Rule-backed mould with a memo table.

    ``alphabet`` (optional) declares which letters the mould is meant for;
    composition closes it additively up to the length cap.
    """

    def __init__(self, rule: Callable[[Word], object], name: str = "", alphabet: Sequence[Letter] | None = None, cap: int | None = None):
        self._rule = rule
        self.name = name
        self.alphabet = tuple(alphabet) if alphabet is not None else None
        self.cap = cap
        self._memo: dict[Word, object] = {}
        self._lock = threading.Lock()

    def value(self, w: Word):
        try:
            return self._memo[w]
        except KeyError:
            pass
        if self.cap is not None and w.length > self.cap:
            raise KeyError(f"mould {self.name or '<anon>'} queried beyond cap {self.cap}: {w}")
        v = self._rule(w)
        with self._lock:
            self._memo.setdefault(w, v)
        return v

    def __call__(self, w: Word):
        return self.value(w)

    @classmethod
    def from_table(cls, entries: dict[Word, object], cap: int, alphabet: Sequence[Letter], name: str = "") -> "Mould":
        table = dict(entries)

        def rule(w: Word):
            try:
                return table[w]
            except KeyError:
                raise KeyError(f"table mould {name or '<anon>'} has no entry for {w}") from None

        return cls(rule, name=name, alphabet=alphabet, cap=cap)

    def to_json(self) -> str:
        """Serialize a table-backed mould: exact values as literal strings."""
        if self.cap is None or self.alphabet is None:
            raise ValueError("only capped moulds with a declared alphabet serialize")
        entries = {}
        for w in words_over(self.alphabet, self.cap):
            entries[str(w)] = format_exact(self.value(w))
        payload = {
            "alphabet": [format_exact(a.value) for a in self.alphabet],
            "cap": self.cap,
            "entries": entries,
        }
        return json.dumps(payload, indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str, name: str = "") -> "Mould":
        payload = json.loads(text)
        alphabet = [letter(parse_exact(a)) for a in payload["alphabet"]]
        entries = {parse_word(k): _exact_or_zero(v) for k, v in payload["entries"].items()}
        return cls.from_table(entries, payload["cap"], alphabet, name=name)


def _exact_or_zero(text: str):
    return parse_exact(text)


class ArMould:
    """Map from canonical forests to values."""

    def __init__(self, rule: Callable[[Forest], object], name: str = ""):
        self._rule = rule
        self.name = name
        self._memo: dict[Forest, object] = {}
        self._lock = threading.Lock()

    def value(self, f: Forest):
        try:
            return self._memo[f]
        except KeyError:
            pass
        v = self._rule(f)
        with self._lock:
            self._memo.setdefault(f, v)
        return v

    def __call__(self, f: Forest):
        return self.value(f)


def words_over(alphabet: Sequence[Letter], max_length: int) -> list[Word]:
    """All words (including the empty one) over the alphabet up to a length."""
    out = [EMPTY_WORD]
    layer = [EMPTY_WORD]
    for _ in range(max_length):
        nxt = []
        for w in layer:
            for a in alphabet:
                nxt.append(w + Word((a,)))
        out.extend(nxt)
        layer = nxt
    return out


def words_of_norm_at_most(alphabet: Sequence[Letter], max_norm: int) -> list[Word]:
    """All nonempty words over positive-integer letters with norm <= max_norm."""
    values = sorted({int(a.value.re) for a in alphabet})
    if any(v < 1 for v in values):
        raise ValueError("norm enumeration needs positive integer letters")
    out: list[Word] = []

    def rec(prefix: tuple, budget: int):
        for v in values:
            if v <= budget:
                w = prefix + (v,)
                out.append(word(*w))
                rec(w, budget - v)

    rec((), max_norm)
    out.sort(key=lambda w: (int(w.norm.re), w.length, w.sort_key()))
    return out


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------


def mould_mul(m: Mould, n: Mould, name: str = "") -> Mould:
    """Mould product: P^w = sum over splits w = uv of M^u N^v."""

    def rule(w: Word):
        total = None
        for i in range(w.length + 1):
            term = m.value(w[:i]) * n.value(w[i:])
            total = term if total is None else total + term
        return total

    return Mould(rule, name=name or f"({m.name}x{n.name})", alphabet=m.alphabet, cap=_min_cap(m, n))


def mould_compose(m: Mould, n: Mould, name: str = "") -> Mould:
    """Mould composition: Q^w = sum over partitions of w into consecutive
    nonempty blocks w = w1...ws of M^{(|w1|,...,|ws|)} N^{w1}...N^{ws},
    where |wi| is the block norm."""

    def rule(w: Word):
        if w.length == 0:
            return m.value(EMPTY_WORD)
        total = None
        for blocks in _block_partitions(w):
            norm_word = Word(tuple(Letter(b.norm) for b in blocks))
            term = m.value(norm_word)
            for b in blocks:
                term = term * n.value(b)
            total = term if total is None else total + term
        return total

    return Mould(rule, name=name or f"({m.name}o{n.name})", alphabet=None, cap=_min_cap(m, n))


def _block_partitions(w: Word):
    r = w.length
    if r == 0:
        return
    # cut positions encoded by bitmask over the r-1 gaps
    for mask in range(1 << (r - 1)):
        blocks = []
        start = 0
        for gap in range(r - 1):
            if mask & (1 << gap):
                blocks.append(w[start : gap + 1])
                start = gap + 1
        blocks.append(w[start:r])
        yield blocks


def _min_cap(m: Mould, n: Mould):
    caps = [c for c in (m.cap, n.cap) if c is not None]
    return min(caps) if caps else None


def mould_inverse_mul(m: Mould, cap: int, name: str = "") -> Mould:
    """Two-sided inverse for the mould product up to the length cap."""
    e = m.value(EMPTY_WORD)
    inv_e = 1 / e if not isinstance(e, GaussianRational) else GaussianRational(1) / e
    out = Mould(lambda w: None, name=name or f"inv({m.name})", alphabet=m.alphabet, cap=cap)

    def rule(w: Word):
        if w.length == 0:
            return inv_e
        total = None
        for i in range(1, w.length + 1):
            term = m.value(w[:i]) * out.value(w[i:])
            total = term if total is None else total + term
        return -(total * inv_e)

    out._rule = rule
    return out


def mould_inverse_comp(m: Mould, cap: int, name: str = "") -> Mould:
    """Composition inverse on moulds with M^empty = 0, up to the length cap."""
    if m.value(EMPTY_WORD) != 0:
        raise ValueError("composition inverse needs M^empty = 0")
    out = Mould(lambda w: None, name=name or f"cinv({m.name})", alphabet=m.alphabet, cap=cap)
    identity = builtin_mould("identityI")

    def rule(w: Word):
        if w.length == 0:
            return Fraction(0)
        head = m.value(Word((Letter(w.norm),)))
        if head == 0:
            raise ZeroDivisionError(f"single-letter value of {m.name} vanishes at norm {w.norm}")
        acc = identity.value(w)
        for blocks in _block_partitions(w):
            if len(blocks) == 1:
                continue
            norm_word = Word(tuple(Letter(b.norm) for b in blocks))
            term = m.value(norm_word)
            for b in blocks:
                term = term * out.value(b)
            acc = acc - term
        return acc * (1 / head if not isinstance(head, GaussianRational) else GaussianRational(1) / head)

    out._rule = rule
    return out


# ---------------------------------------------------------------------------
# symmetry checks
# ---------------------------------------------------------------------------


@dataclass
class SymmetryReport:
    kind: str
    passed: bool
    pairs_checked: int
    worst_violation: float
    first_violation: tuple[Word, Word] | None = None
    detail: str = ""

    def __str__(self):
        status = "pass" if self.passed else "FAIL"
        s = f"[{status}] {self.kind}: {self.pairs_checked} pairs, worst violation {self.worst_violation:.3e}"
        if self.first_violation:
            s += f", first at {self.first_violation[0]} / {self.first_violation[1]}"
        if self.detail:
            s += f" ({self.detail})"
        return s


def check_symmetry(m: Mould, kind: str, cap: int, alphabet: Sequence[Letter] | None = None, tol: float | None = None) -> SymmetryReport:
    """Verify the shuffle/contracting-shuffle symmetry up to combined length cap.

    Exact values compare with equality (tol=None); float-valued moulds use a
    relative tolerance (default 1e-9) and the report carries the worst
    violation seen, not just the first.
    """
    if kind not in ("symmetral", "symmetrel", "alternal", "alternel"):
        raise ValueError(f"unknown symmetry kind {kind!r}")
    alphabet = tuple(alphabet) if alphabet is not None else m.alphabet
    if alphabet is None:
        raise ValueError("symmetry check needs an alphabet")
    shuffler = shuffle if kind in ("symmetral", "alternal") else contracting_shuffle
    multiplicative = kind in ("symmetral", "symmetrel")
    if tol is None and not _is_exact(m.value(EMPTY_WORD)):
        tol = 1e-9

    worst = 0.0
    first = None
    pairs = 0
    # empty-word normalisation
    e = m.value(EMPTY_WORD)
    expected_e = 1 if multiplicative else 0
    if _violation(e, expected_e, tol) > (tol or 0):
        return SymmetryReport(kind, False, 0, _violation(e, expected_e, tol), None, "empty-word value")

    nonempty = [w for w in words_over(alphabet, cap - 1) if w.length >= 1]
    for w1 in nonempty:
        for w2 in nonempty:
            if w1.length + w2.length > cap:
                continue
            pairs += 1
            lhs = m.value(w1) * m.value(w2) if multiplicative else 0
            rhs = None
            for w, mult in shuffler(w1, w2).items():
                term = m.value(w) * mult
                rhs = term if rhs is None else rhs + term
            v = _violation(rhs, lhs, tol)
            if v > worst:
                worst = v
                if v > (tol or 0):
                    first = first or (w1, w2)
    passed = worst <= (tol or 0)
    return SymmetryReport(kind, passed, pairs, worst, None if passed else first)


def _is_exact(x):
    return isinstance(x, (int, Fraction, GaussianRational))


def _violation(a, b, tol):
    if tol is None:
        return 0.0 if a == b else 1.0
    fa, fb = complex(a), complex(b)
    scale = max(abs(fa), abs(fb), 1e-300)
    return abs(fa - fb) / scale if scale > 0 else 0.0


# ---------------------------------------------------------------------------
# arborification
# ---------------------------------------------------------------------------


def arborify(m: Mould, mode: str = "simple", counting: str = "merges", name: str = "") -> ArMould:
    """Arborified (mode='simple') or contracted arborified (mode='contracting')
    of a mould: sum of mould values over linear extensions / contracting
    covers of the forest.

    For the contracting mode the cover multiplicities follow ``counting``
    (see :func:`armould.words.contracting_covers`).
    """
    if mode not in ("simple", "contracting"):
        raise ValueError(f"unknown arborification mode {mode!r}")

    def rule(f: Forest):
        if not f.trees:
            return m.value(EMPTY_WORD)
        if mode == "simple":
            cover = linear_extensions(f)
        else:
            cover = contracting_covers(f, counting=counting)
        total = None
        for w, mult in cover.items():
            term = m.value(w) * mult
            total = term if total is None else total + term
        return total

    return ArMould(rule, name=name or f"{mode}-arb({m.name})")


@dataclass
class SeparativityReport:
    passed: bool
    pairs_checked: int
    worst_violation: float
    first_violation: tuple[Forest, Forest] | None = None

    def __str__(self):
        status = "pass" if self.passed else "FAIL"
        s = f"[{status}] separative: {self.pairs_checked} pairs, worst violation {self.worst_violation:.3e}"
        if self.first_violation:
            s += f", first at {self.first_violation[0]} | {self.first_violation[1]}"
        return s


def check_separative(a: ArMould, alphabet: Sequence[Letter], cap: int, tol: float | None = None) -> SeparativityReport:
    """Verify M^{F'F''} = M^{F'} M^{F''} for all forest pairs with total nodes <= cap."""
    singles = forests_of_norm(alphabet, cap, max_nodes=cap)
    if tol is None and not _is_exact(a.value(Forest(()))):
        tol = 1e-9
    worst = 0.0
    first = None
    pairs = 0
    for f1 in singles:
        for f2 in singles:
            if f1.node_count + f2.node_count > cap:
                continue
            pairs += 1
            lhs = a.value(f1 * f2)
            rhs = a.value(f1) * a.value(f2)
            v = _violation(lhs, rhs, tol)
            if v > worst:
                worst = v
                if v > (tol or 0):
                    first = first or (f1, f2)
    passed = worst <= (tol or 0)
    return SeparativityReport(passed, pairs, worst, None if passed else first)


# ---------------------------------------------------------------------------
# built-in moulds
# ---------------------------------------------------------------------------


def builtin_mould(name: str) -> Mould:
    """Built-ins: unit1, identityI, standard_log, exp, redom, ledom.

    standard_log is (-1)^(r-1)/r — the transition mould of the directional
    logarithm; exp is 1/r! with empty value 0, its composition inverse.
    redom/ledom are the organic transition moulds
    redom^w = (-1)^r (omega_1+omega_r) / (2 ||w||) = -ledom^w.
    """
    if name == "unit1":
        return Mould(lambda w: Fraction(1 if w.length == 0 else 0), name="unit1")
    if name == "identityI":
        return Mould(lambda w: Fraction(1 if w.length == 1 else 0), name="identityI")
    if name == "standard_log":

        def rule_log(w: Word):
            r = w.length
            if r == 0:
                return Fraction(0)
            return Fraction((-1) ** (r - 1), r)

        return Mould(rule_log, name="standard_log")
    if name == "exp":

        def rule_exp(w: Word):
            r = w.length
            if r == 0:
                return Fraction(0)
            f = 1
            for k in range(2, r + 1):
                f *= k
            return Fraction(1, f)

        return Mould(rule_exp, name="exp")
    if name in ("redom", "ledom"):
        sign = 1 if name == "redom" else -1

        def rule_org(w: Word):
            r = w.length
            if r == 0:
                return GaussianRational(0)
            total = w.norm
            if not total:
                raise ZeroDivisionError(f"{name} undefined on zero-norm word {w}")
            val = (w[0].value + w[r - 1].value) / (total * 2)
            return val * ((-1) ** r * sign)

        return Mould(rule_org, name=name)
    raise ValueError(f"unknown builtin mould {name!r}")


def symmetral_from_letter_weights(weights: dict[Letter, object], name: str = "") -> Mould:
    """M^w = (prod of letter weights)/r!; the exponential of a single-letter
    (alternal) mould, hence symmetral."""
    wt = {letter(k): v for k, v in weights.items()}

    def rule(w: Word):
        r = w.length
        if r == 0:
            return Fraction(1)
        acc = Fraction(1, 1)
        for a in w:
            acc = acc * wt[a]
        f = 1
        for k in range(2, r + 1):
            f *= k
        return acc / f

    return Mould(rule, name=name or "symmetral-letterweights", alphabet=tuple(wt))


def symmetrel_geometric(x, name: str = "") -> Mould:
    """M^w = (-1)^r (-x)^{||w||}, a quasi-shuffle character, hence symmetrel.

    Needs positive-integer decorations so (-x)^{||w||} is polynomial in x.
    """
    xg = as_gaussian(x)

    def rule(w: Word):
        r = w.length
        if r == 0:
            return GaussianRational(1)
        n = w.norm
        if not n.is_positive_integer:
            raise ValueError("geometric symmetrel mould needs positive integer norms")
        acc = GaussianRational(1)
        for _ in range(int(n.re)):
            acc = acc * (-xg)
        return acc * ((-1) ** r)

    return Mould(rule, name=name or f"symmetrel-geom({x})")


# ---------------------------------------------------------------------------
# transition moulds acting on alien words
# ---------------------------------------------------------------------------


@dataclass
class AlienWordExpansion:
    """Formal expansion of an alien operator at a given norm as a weighted sum
    of lateral-operator words; purely symbolic, never applied to functions."""

    target: Letter
    terms: dict[Word, object] = field(default_factory=dict)

    def by_norm(self) -> dict:
        out: dict = {}
        for w, c in self.terms.items():
            out.setdefault(format_exact(w.norm), {})[w] = c
        return out

    def __str__(self):
        bits = []
        for w in sorted(self.terms, key=lambda w: (w.length, w.sort_key())):
            bits.append(f"{format_exact(self.terms[w])} * D+{w}")
        return f"Gamma[{self.target}] = " + (" + ".join(bits) if bits else "0")


def transition_apply(led: Mould, target_norm) -> AlienWordExpansion:
    """Expand an alien operator of the given positive-integer norm through the
    lateral operators: sum over compositions (omega_1,...,omega_r) of the norm
    of led^{(omega_1,...,omega_r)} D+_{omega_r} ... D+_{omega_1}."""
    target = letter(target_norm)
    if not target.is_positive_integer:
        raise ValueError("transition expansion needs a positive integer norm")
    n = int(target.value.re)
    terms: dict[Word, object] = {}
    for comp in _compositions(n):
        w = word(*comp)
        terms[w] = led.value(w)
    return AlienWordExpansion(target=target, terms=terms)


def _compositions(n: int):
    if n == 0:
        yield ()
        return
    for first in range(1, n + 1):
        for rest in _compositions(n - first):
            yield (first,) + rest


# ---------------------------------------------------------------------------
# organic growth report
# ---------------------------------------------------------------------------


@dataclass
class OrganicGrowthReport:
    max_nodes: int
    decorations: tuple
    counting: str
    sup_by_nodes: dict  # r -> sup over r-node forests of |redom^F|^(1/r)
    forest_counts: dict

    @property
    def bound(self) -> float:
        return max(self.sup_by_nodes.values())

    def __str__(self):
        rows = ", ".join(f"r={r}: {v:.4f} ({self.forest_counts[r]} forests)" for r, v in sorted(self.sup_by_nodes.items()))
        return f"organic growth ({self.counting}): {rows}; measured bound {self.bound:.4f}"


def organic_growth_report(max_nodes: int = 6, decorations: Sequence[int] = (1, 2, 3), counting: str = "merges") -> OrganicGrowthReport:
    """Exhaustive growth scan of the contracted arborified of redom:
    sup over r-node forests of |redom^F|^{1/r} for r <= max_nodes.

    redom^{(w_1..w_s)} = (-1)^s (w_1 + w_s) / (2 ||w||) depends only on the
    first letter, the last letter, the length and the (fixed) norm, so the
    cover sum is accumulated directly over fiber chains without
    materialising cover words; everything runs on plain integers/floats.
    """
    if counting not in ("merges", "surjections"):
        raise ValueError(f"unknown counting {counting!r}")
    decs = tuple(sorted(set(int(d) for d in decorations)))
    fact = [1]
    for k in range(1, max_nodes + 1):
        fact.append(fact[-1] * k)

    # canonical tree = (decoration, sorted tuple of child trees)
    trees_by_nodes: dict[int, list] = {1: [(d, ()) for d in decs]}
    forests_cache: dict[int, list] = {}

    def forests_exact(n: int, max_tree: tuple | None = None) -> list:
        # multisets of trees with total nodes n, each tree <= max_tree (for
        # canonical non-decreasing assembly); returns tuples sorted ascending
        out = []
        for k in range(1, n + 1):
            for t in trees_by_nodes.get(k, []):
                if max_tree is not None and t > max_tree:
                    continue
                if k == n:
                    out.append((t,))
                else:
                    for rest in forests_exact(n - k, t):
                        out.append(rest + (t,))
        return out

    for n in range(2, max_nodes + 1):
        acc = []
        for d in decs:
            for sub in forests_exact(n - 1):
                acc.append((d, sub))
        trees_by_nodes[n] = acc
    for n in range(1, max_nodes + 1):
        forests_cache[n] = forests_exact(n)

    def cover_value(forest) -> float:
        # accumulate sum over strict-order-preserving fiber chains of
        # weight * (-1)^len (first + last) / (2 norm)
        kids: list[list[int]] = []
        labels: list[int] = []

        def load(tree, parent):
            idx = len(labels)
            labels.append(tree[0])
            kids.append([])
            if parent is not None:
                kids[parent].append(idx)
            for c in tree[1]:
                load(c, idx)
            return idx

        roots = []
        for t in forest:
            roots.append(load(t, None))
        total_norm = sum(labels)
        n_nodes = len(labels)
        acc = 0.0 + 0.0j

        def rec(avail: tuple, first_letter, length: int, weight: float, prev_sum: int):
            nonlocal acc
            avail_list = sorted(avail)
            m = len(avail_list)
            for size in range(1, m + 1):
                for combo in itertools.combinations(avail_list, size):
                    s = sum(labels[i] for i in combo)
                    w = weight * (fact[size] if counting == "merges" else 1)
                    nxt = set(avail)
                    for i in combo:
                        nxt.discard(i)
                        nxt.update(kids[i])
                    first = first_letter if first_letter is not None else s
                    if not nxt:
                        sign = -1.0 if (length + 1) % 2 else 1.0
                        acc += w * sign * (first + s) / (2.0 * total_norm)
                    else:
                        rec(tuple(nxt), first, length + 1, w, s)

        rec(tuple(roots), None, 0, 1.0, 0)
        return abs(acc)

    sup_by_nodes: dict = {}
    counts: dict = {}
    for r in range(1, max_nodes + 1):
        sup = 0.0
        forests_r = forests_cache[r]
        counts[r] = len(forests_r)
        for f in forests_r:
            v = cover_value(f)
            if v > 0:
                sup = max(sup, v ** (1.0 / r))
        sup_by_nodes[r] = sup
    return OrganicGrowthReport(
        max_nodes=max_nodes, decorations=decs, counting=counting, sup_by_nodes=sup_by_nodes, forest_counts=counts
    )
