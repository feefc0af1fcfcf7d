"""Triforce graphs on three copies of Z/LZ and the random sets sampled from them."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

import numpy as np

from ..counting import DifferenceProfile
from ..eqfree import FreeSet, ThreeAP, TooLargeForExhaustive, behrend_3apfree, has_3ap
from ..sets import GridSet

ENUMERATION_LIMIT = 10**8

# four f-factors per case, each a (x, y, z) triple of variable names
CASE_FACTORS = {
    1: (("x0", "y0", "z0"), ("x1", "y0", "z1"), ("x0", "y1", "z1"), ("x2", "y2", "z2")),
    2: (("x0", "y0", "z0"), ("x1", "y0", "z1"), ("x0", "y1", "z1"), ("x1", "y2", "z2")),
    3: (("x0", "y0", "z0"), ("x1", "y0", "z1"), ("x0", "y1", "z1"), ("x1", "y1", "z2")),
}


def case_variables(case: int) -> list[str]:
    seen: list[str] = []
    for fac in CASE_FACTORS[case]:
        for v in fac:
            if v not in seen:
                seen.append(v)
    return seen


@dataclass
class TriforceSystem:
    L: int
    lam: FreeSet
    k1: Fraction
    k2: Fraction
    triangles: frozenset = field(default_factory=frozenset)

    def edges_xy(self):
        return {(x, (x + a) % self.L) for x in range(self.L) for a in self.lam.elements}

    def edges_yz(self):
        return self.edges_xy()

    def edges_xz(self):
        return {(x, (x + 2 * a) % self.L) for x in range(self.L) for a in self.lam.elements}

    def indicator(self) -> np.ndarray:
        """Dense L x L x L table of f on grid cells."""
        t = np.zeros((self.L,) * 3, dtype=bool)
        for tri in self.triangles:
            t[tri] = True
        return t

    @property
    def alpha(self) -> Fraction:
        return Fraction(len(self.triangles), self.L**3)

    @property
    def case(self) -> int:
        ones = (self.k1 == 1) + (self.k2 == 1)
        return {0: 1, 1: 2, 2: 3}[ones]


def scan_triangles(L: int, lam: Sequence[int]) -> set:
    """All (x, y, z) with (x, y), (y, z), (x, z) edges, by exhaustive search."""
    lam = list(lam)
    xy = {(x, (x + a) % L) for x in range(L) for a in lam}
    xz = {(x, (x + 2 * a) % L) for x in range(L) for a in lam}
    out = set()
    for x, y in xy:
        for a in lam:
            z = (y + a) % L
            if (x, z) in xz:
                out.add((x, y, z))
    return out


def triforce_invariants(L: int, lam: Sequence[int], triangles: set) -> dict:
    edges = {}
    for x, y, z in triangles:
        for e in (("xy", x, y), ("yz", y, z), ("xz", x, z)):
            edges[e] = edges.get(e, 0) + 1
    per_vertex = {}
    for x, y, z in triangles:
        for v in (("x", x), ("y", y), ("z", z)):
            per_vertex[v] = per_vertex.get(v, 0) + 1
    lam_set = set(lam)
    form_ok = all((y - x) % L in lam_set and (z - x) % L == (2 * (y - x)) % L for x, y, z in triangles)
    return {
        "triangle_count": len(triangles),
        "expected_count": L * len(lam),
        "edge_disjoint": all(c == 1 for c in edges.values()),
        "vertex_degrees": sorted(set(per_vertex.values())),
        "form_ok": form_ok,
    }


def build_triforce(L: int, k1=2, k2=3, lam: FreeSet | None = None) -> TriforceSystem:
    """Triforce system over Z/LZ; invariants are checked exhaustively when L <= 100."""
    if L < 3:
        raise ValueError("L must be at least 3")
    k1, k2 = Fraction(k1), Fraction(k2)
    if k1 <= 0 or k2 <= 0 or k1 + k2 == 1:
        raise ValueError("need positive k1, k2 with k1 + k2 != 1")
    if lam is None:
        lam = behrend_3apfree(L, cyclic=True)
    if has_3ap(lam.elements, L) is not None:
        raise ValueError("lambda is not 3-AP-free in Z/LZ")
    triangles = {(x, (x + a) % L, (x + 2 * a) % L) for x in range(L) for a in lam.elements}
    if L <= 100:
        found = scan_triangles(L, lam.elements)
        inv = triforce_invariants(L, lam.elements, found)
        if (found != triangles or not inv["edge_disjoint"] or not inv["form_ok"]
                or inv["vertex_degrees"] not in ([len(lam)], [])):
            raise AssertionError(f"triforce invariants fail: {inv}")
    return TriforceSystem(L, FreeSet(L, lam.elements, ThreeAP(True)), k1, k2, frozenset(triangles))


def count_configurations(triangles, factors, L: int, limit: int = ENUMERATION_LIMIT) -> int:
    """Assignments of the factor variables in Z/LZ making every factor a triangle.

    Backtracking over factors; each step extends the partial assignment by the
    triangles compatible with the variables already fixed.
    """
    triangles = list(triangles)
    variables = []
    for fac in factors:
        for v in fac:
            if v not in variables:
                variables.append(v)
    # order factors so each later one shares as many fixed variables as possible
    order, fixed = [], set()
    remaining = list(factors)
    while remaining:
        nxt = max(remaining, key=lambda f: sum(v in fixed for v in f))
        remaining.remove(nxt)
        order.append(nxt)
        fixed.update(nxt)
    index: dict = {}
    for mask in range(8):
        table: dict = {}
        for tri in triangles:
            key = tuple(tri[i] for i in range(3) if mask >> i & 1)
            table.setdefault(key, []).append(tri)
        index[mask] = table
    # worst-case work estimate
    per_vertex = max((len(v) for v in index[1].values()), default=0)
    work, fixed = 1, set()
    for fac in order:
        work *= len(triangles) if not any(v in fixed for v in fac) else max(per_vertex, 1)
        fixed.update(fac)
    if work > limit:
        raise TooLargeForExhaustive(f"estimated {work} configurations")

    def rec(i: int, assign: dict) -> int:
        if i == len(order):
            return 1
        fac = order[i]
        mask = sum(1 << j for j, v in enumerate(fac) if v in assign)
        key = tuple(assign[v] for v in fac if v in assign)
        total = 0
        for tri in index[mask].get(key, ()):
            new = dict(assign)
            ok = True
            for v, val in zip(fac, tri):
                if new.setdefault(v, val) != val:  # repeated variable inside one factor
                    ok = False
                    break
            if ok:
                total += rec(i + 1, new)
        return total

    free_vars = len(set(variables)) - len({v for f in factors for v in f})
    return rec(0, {}) * L**free_vars


def triforce_beta_counts(sys: TriforceSystem, case: int) -> int:
    return count_configurations(sys.triangles, CASE_FACTORS[case], sys.L)


def expected_beta_count(L: int, lam_size: int, case: int) -> int:
    return {1: L * L * lam_size**2, 2: L * lam_size**2, 3: L * lam_size}[case]


def modulus_constraint(k1, k2) -> tuple[int, int]:
    """(M, denominator lcm): group orders must be coprime to both.

    M is the product of the nonzero numerators of k1-1, k2-1, k1+k2-1 once
    all three are written over a common denominator.
    """
    vals = [Fraction(k1) - 1, Fraction(k2) - 1, Fraction(k1) + Fraction(k2) - 1]
    den = lcm(*(v.denominator for v in vals), Fraction(k1).denominator, Fraction(k2).denominator)
    M = 1
    for v in vals:
        n = int(v * den)
        if n:
            M *= abs(n)
    return M, den


def group_order_ok(G: int, k1, k2) -> bool:
    M, den = modulus_constraint(k1, k2)
    return gcd(G, M) == 1 and gcd(G, den) == 1


def _residue(k: Fraction, G: int) -> int:
    return k.numerator * pow(k.denominator, -1, G) % G


@dataclass
class MandacheSample:
    S: GridSet
    residues: np.ndarray  # S indexed by group residues (g, h)
    alpha_S: float
    alpha: Fraction
    beta_profile: DifferenceProfile
    beta_expected: Fraction | None
    seed: int
    generator: str = "numpy MT19937"

    def summary(self) -> dict:
        return {
            "G_order": self.S.N,
            "seed": self.seed,
            "generator": self.generator,
            "alpha_S": self.alpha_S,
            "alpha": str(self.alpha),
            "alpha_deviation": abs(self.alpha_S - float(self.alpha)),
            "beta_expected": None if self.beta_expected is None else float(self.beta_expected),
            "beta_max": self.beta_profile.max_value,
            "beta_max_d": self.beta_profile.max_d,
        }


def beta_profile(residues: np.ndarray, k1: int, k2: int) -> dict:
    """beta(S, d) for every nonzero d in Z/GZ, exactly, from the residue-indexed array."""
    G = residues.shape[0]
    s = residues.astype(bool)
    out = {}
    for d in range(1, G):
        # S(g+d, h), S(g, h+d), S(g+k1 d, h+k2 d) as rolls of the residue array
        t = s & np.roll(s, -d, axis=0) & np.roll(s, -d, axis=1)
        t &= np.roll(np.roll(s, -(k1 * d) % G, axis=0), -(k2 * d) % G, axis=1)
        out[d] = float(np.count_nonzero(t)) / (G * G)
    return out


def sample_mandache_set(sys: TriforceSystem, G_order: int, seed: int, table: np.ndarray | None = None) -> MandacheSample:
    """Sample S in G x G with P[(g, h) in S] = f(X_g, Y_h, Z_{g+h}).

    ``table`` overrides the triforce indicator with any L x L x L array of values in
    [0, 1] (used for degenerate fixtures).
    """
    if G_order < 10:
        raise ValueError("G_order must be at least 10")
    if not group_order_ok(G_order, sys.k1, sys.k2):
        raise ValueError(f"group order {G_order} not coprime to the pattern constant")
    L = sys.L
    f = sys.indicator().astype(float) if table is None else np.asarray(table, dtype=float)
    rng = np.random.Generator(np.random.MT19937(seed))
    X, Y, Z = rng.random(G_order), rng.random(G_order), rng.random(G_order)
    W = rng.random((G_order, G_order))
    cx, cy, cz = (np.minimum((L * v).astype(np.int64), L - 1) for v in (X, Y, Z))
    g = np.arange(G_order)
    F = f[cx[:, None], cy[None, :], cz[(g[:, None] + g[None, :]) % G_order]]
    res = W < F
    members = np.roll(res, -1, axis=(0, 1))  # residue g lives at coordinate g (0 at N)
    k1, k2 = _residue(sys.k1, G_order), _residue(sys.k2, G_order)
    prof = beta_profile(res, k1, k2)
    dp = DifferenceProfile.from_values(G_order, prof, float(res.mean()), "wraparound")
    if table is None:
        alpha = sys.alpha
        beta = Fraction(expected_beta_count(L, len(sys.lam), sys.case), L ** len(case_variables(sys.case)))
    else:
        alpha, beta = Fraction(float(f.mean())).limit_denominator(10**9), None
    return MandacheSample(GridSet(2, G_order, members), res, float(res.mean()), alpha, dp, beta, seed)
