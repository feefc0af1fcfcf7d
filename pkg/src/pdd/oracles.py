"""Slow, independent reference implementations used to cross-check the fast paths.

Nothing here shares code with ``counting`` or the builders beyond the plain
data containers.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from .sets import GridSet


def naive_count_translates(A: GridSet, P, d: int, wraparound: bool = False) -> int:
    """Count base points by direct membership tests over Python tuples.

    Every base point x has x + d*y0 in A for the first pattern point y0, so the
    candidates are a - d*y0 over members a.
    """
    pts = [(p,) if isinstance(p, (int, np.integer)) else tuple(p) for p in P]
    members = {(q,) if A.r == 1 else tuple(q) for q in A.points()}
    N = A.N
    y0 = pts[0]
    bases = set()
    for a in members:
        x = tuple(ai - d * c for ai, c in zip(a, y0))
        if wraparound:
            x = tuple((v - 1) % N + 1 for v in x)
        bases.add(x)
    total = 0
    for x in bases:
        ok = True
        for y in pts:
            q = tuple(xi + d * c for xi, c in zip(x, y))
            if wraparound:
                q = tuple((v - 1) % N + 1 for v in q)
            if q not in members:
                ok = False
                break
        total += ok
    return total


def naive_phase_expectation(values, ks, d: int) -> float:
    N = len(values)
    return math.fsum(values[t] * math.prod(values[(t + k * d) % N] for k in ks) for t in range(N)) / N


def einsum_beta_counts(L: int, lam) -> dict:
    """Triforce configuration counts from a dense indicator tensor and einsum contractions."""
    F = np.zeros((L, L, L), dtype=np.int64)
    for x in range(L):
        for a in lam:
            F[x, (x + a) % L, (x + 2 * a) % L] = 1
    # variables: x0=a y0=b z0=c x1=d z1=e y1=f x2,y2,z2 (case 1 free block)
    c1 = int(np.einsum("abc,dbe,afe->", F, F, F, optimize=True)) * int(F.sum())
    c2 = int(np.einsum("abc,dbe,afe,dgh->", F, F, F, F, optimize=True))
    c3 = int(np.einsum("abc,dbe,afe,dfg->", F, F, F, F, optimize=True))
    return {1: c1, 2: c2, 3: c3}


def naive_triangles(L: int, lam) -> set:
    lam = set(lam)
    out = set()
    for x, y, z in itertools.product(range(L), repeat=3):
        if (y - x) % L in lam and (z - y) % L in lam and (z - x) % L in {2 * a % L for a in lam}:
            out.add((x, y, z))
    return out


def naive_is_3ap_free(elements, modulus: int | None = None) -> bool:
    els = sorted(set(elements))
    s = set(els)
    for a, b in itertools.combinations(els, 2):
        if modulus is None:
            if (a + b) % 2 == 0 and (a + b) // 2 in s:
                return False
        elif any((2 * c - a - b) % modulus == 0 for c in els):
            return False
    return True


def naive_is_eq_free(elements, coeffs, modulus: int | None = None) -> bool:
    for t in itertools.product(sorted(set(elements)), repeat=4):
        if len(set(t)) == 1:
            continue
        v = sum(c * x for c, x in zip(coeffs, t))
        if (v % modulus if modulus else v) == 0:
            return False
    return True


def naive_p_eval(sig, a, k) -> tuple[int, int, int]:
    """(p1, p2, p3) of a signature at numeric a, k: coefficients of T^2, T*D, D^2 in sum a_ij (T + k_j D)^2."""
    kk = (0, *k)
    aa = [a[abs(i) - 1] * (1 if i > 0 else -1) if i else 0 for i in sig]
    p1 = sum(aa)
    p2 = sum(2 * c * kj for c, kj in zip(aa, kk))
    p3 = sum(c * kj * kj for c, kj in zip(aa, kk))
    return p1, p2, p3
