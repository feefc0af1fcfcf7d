"""Dilate-stacked sets in (Z/NZ)^r and the box blow-up of a 1-D avoiding set."""

from __future__ import annotations

import itertools
from typing import Iterable, Sequence

import numpy as np
from sympy import isprime

from ..eqfree import FreeSet
from ..sets import GridSet


def _base_points(base, r_base: int) -> list[tuple]:
    if isinstance(base, FreeSet):
        return [(int(v),) for v in base.elements]
    pts = []
    for s in base:
        s = (int(s),) if np.isscalar(s) else tuple(int(c) for c in s)
        if len(s) != r_base:
            raise ValueError("base points must have r' coordinates")
        pts.append(s)
    return pts


def blowup_construction(base, r: int, N: int, r_base: int = 1) -> GridSet:
    """{(i1*s, i1, i2, ..., i_{r-r'}) : i1 != 0, s in base} inside (Z/NZ)^r.

    Residue 0 is stored at coordinate N so the set lives on [N]^r.
    """
    if not isprime(N):
        raise ValueError(f"N = {N} is not prime")
    if not 0 < r_base < r <= 2:
        raise ValueError("need 0 < r' < r <= 2")
    pts = _base_points(base, r_base)
    g = GridSet.empty(r, N)
    free = r - r_base - 1
    for s in pts:
        for i1 in range(1, N):
            for rest in itertools.product(range(N), repeat=free):
                coords = [(i1 * c) % N for c in s] + [i1] + list(rest)
                g.members[tuple((c - 1) % N for c in coords)] = True
    return g


def box_blowup(lam: FreeSet, N: int, pattern: Sequence[int]) -> tuple[GridSet, dict]:
    """Blow each lambda into the middle 1/C_P part of a box of width floor(N/L).

    C_P = 2 * (diameter of P + 1).  Returns the set and the parameters used.
    """
    L = lam.L
    width = N // L
    if width < 1:
        raise ValueError("N must be at least L")
    c_p = 2 * (max(pattern) - min(pattern) + 1)
    inner = max(width // c_p, 1)
    offset = (width - inner) // 2
    g = GridSet.empty(1, N)
    for v in lam.elements:
        start = v * width + offset
        g.members[start:start + inner] = True
    return g, {"box_width": width, "C_P": c_p, "inner_width": inner}
