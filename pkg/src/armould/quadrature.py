"""Shared quadrature rules: double-exponential half-line rule, composite
Gauss-Legendre on segments, and adaptive trapezoid on exponential variables.

Node tables are cached per rule parameters and shared read-only.
"""

from __future__ import annotations

import math
import os
from functools import lru_cache
from pathlib import Path

import numpy as np

CACHE_DIR_ENV = "ARMOULD_CACHE_DIR"


def _cache_dir() -> Path | None:
    path = os.environ.get(CACHE_DIR_ENV)
    if not path:
        return None
    p = Path(path)
    p.mkdir(parents=True, exist_ok=True)
    return p


@lru_cache(maxsize=64)
def _gauss_legendre(n: int):
    cache = _cache_dir()
    if cache is not None:
        f = cache / f"leggauss_{n}.npz"
        if f.exists():
            data = np.load(f)
            return data["x"], data["w"]
    x, w = np.polynomial.legendre.leggauss(n)
    if cache is not None:
        np.savez(cache / f"leggauss_{n}.npz", x=x, w=w)
    return x, w


def segment_quad(f, a: complex, b: complex, n: int = 64, pieces: int = 1) -> complex:
    """Composite Gauss-Legendre along the straight segment [a, b]."""
    x, w = _gauss_legendre(n)
    total = 0.0 + 0.0j
    for p in range(pieces):
        lo = a + (b - a) * (p / pieces)
        hi = a + (b - a) * ((p + 1) / pieces)
        mid = (lo + hi) / 2
        half = (hi - lo) / 2
        nodes = mid + half * x
        total += half * np.sum(w * f(nodes))
    return complex(total)


@lru_cache(maxsize=128)
def _expsinh_nodes(level: int, lo: float, hi: float):
    # t = exp((pi/2) sinh(u)); nodes for int_0^inf
    h = 1.0 / (1 << level)
    ks = np.arange(lo / h, hi / h + 1)
    u = ks * h
    s = (math.pi / 2) * np.sinh(u)
    t = np.exp(s)
    w = t * (math.pi / 2) * np.cosh(u) * h
    return t, w


def de_halfline(f, scale: float = 1.0, rel_tol: float = 1e-12, max_level: int = 9):
    """Integrate f over (0, inf) with the exp-sinh double-exponential rule.

    ``scale`` stretches the nodes to the integrand's decay length.  Returns
    (value, error_estimate); the estimate is the last refinement delta.
    """
    lo, hi = -3.6, 3.6  # u-range: t spans ~ [1e-180, 1e180] relative to scale
    prev = None
    value = 0.0 + 0.0j
    err = math.inf
    for level in range(3, max_level + 1):
        t, w = _expsinh_nodes(level, lo, hi)
        ts = t * scale
        vals = f(ts)
        value = complex(np.sum(vals * w) * scale)
        if prev is not None:
            err = abs(value - prev)
            if err <= rel_tol * max(abs(value), 1e-300):
                break
        prev = value
    return value, err


def adaptive_exp_trapezoid(f, t_lo: float, t_hi: float, start_nodes: int = 129, rel_tol: float = 1e-13, max_nodes: int = 40000):
    """Trapezoid on [t_lo, t_hi] with halving until the value settles.

    Intended for integrands that decay (at least) exponentially at both ends
    after an exponential substitution; endpoint weights are irrelevant at the
    stated decay, full weights are used anyway.
    """
    n = start_nodes
    prev = None
    err = math.inf
    value = 0.0 + 0.0j
    while True:
        t = np.linspace(t_lo, t_hi, n)
        h = t[1] - t[0]
        vals = f(t)
        value = complex(np.sum(vals) * h - (vals[0] + vals[-1]) * h / 2)
        if prev is not None:
            err = abs(value - prev)
            if err <= rel_tol * max(abs(value), 1e-300):
                break
        if 2 * (n - 1) + 1 > max_nodes:
            break
        prev = value
        n = 2 * (n - 1) + 1
    return value, err
