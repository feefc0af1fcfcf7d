"""Box-union sets behind the two transfer lemmas.

psi is always a rational u/q here (``psi_mode = rational-substitute``), so the
1-D membership test is exact integer arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm

import numpy as np
from sympy import isprime

from ..counting import box_coords_2d, box_members_1d, in_box_union
from ..eqfree import EXHAUSTIVE_LIMIT, EquationSpec, FreeSet, find_solution
from ..sets import GridSet
from .complex_triple import ComplexTriple
from .split_primes import P_values

PSI_MODE = "rational-substitute"


@dataclass(frozen=True)
class TransferParams:
    variant: str  # "1d" or "2d"
    L: int
    lam: FreeSet
    psi: Fraction
    theta1: int | None = None
    theta2: int | None = None
    theta3: int | None = None
    m: int | None = None
    box_scale: int | None = None
    a: tuple | None = None
    psi_mode: str = PSI_MODE
    notes: dict = field(default_factory=dict, compare=False)

    @classmethod
    def one_dim(cls, a, L: int, lam: FreeSet, psi, theta1: int | None = None,
                theta3: int | None = None) -> "TransferParams":
        """Parameters for the pattern {0, a1, a2, a3}; theta1 defaults to sum |P_j(a)|.

        Overriding theta1 below that sum (optionally pinning theta3) gives
        fixtures outside the lemma's hypotheses.
        """
        a = tuple(int(v) for v in (a if not hasattr(a, "a1") else (a.a1, a.a2, a.a3)))
        a1, a2, a3 = a
        coeffs = P_values(a1, a2, a3)
        t1 = sum(abs(c) for c in coeffs) if theta1 is None else int(theta1)
        t2 = abs(2 * (a1 - a2) * (a2 - a3) * (a3 - a1))
        spread = abs(a2 * a2 - a3 * a3) + abs(a3 * a3 - a1 * a1) + abs(a1 * a1 - a2 * a2)
        t3 = max(1, -(-spread // (t1 * t1))) if theta3 is None else int(theta3)
        if min(t1, t2) < 1:
            raise ValueError("degenerate pattern: a1, a2, a3 must be distinct")
        return cls("1d", L, lam, _psi(psi), t1, t2, t3, a=a)

    @classmethod
    def two_dim(cls, triple: ComplexTriple, L: int, lam: FreeSet, psi, box_scale: int | None = None) -> "TransferParams":
        return cls("2d", L, lam, _psi(psi), m=triple.m, box_scale=triple.m if box_scale is None else int(box_scale))

    @property
    def coeffs(self) -> tuple | None:
        return P_values(*self.a) if self.a else None

    @property
    def valid(self) -> bool:
        """Whether the lemma's hypotheses on the box sizes hold (adversarial fixtures break them)."""
        if self.variant == "1d":
            return self.theta1 >= sum(abs(c) for c in self.coeffs)
        return self.box_scale >= self.m

    def to_dict(self) -> dict:
        out = {"variant": self.variant, "L": self.L, "lambda": list(self.lam.elements),
               "psi": str(self.psi), "psi_mode": self.psi_mode, "valid": self.valid}
        if self.variant == "1d":
            out.update(theta1=self.theta1, theta2=self.theta2, theta3=self.theta3,
                       a=list(self.a), coeffs=list(self.coeffs))
        else:
            out.update(m=self.m, box_scale=self.box_scale)
        return out


def _psi(psi) -> Fraction:
    psi = Fraction(str(psi)) if isinstance(psi, float) else Fraction(psi)
    if psi.numerator and not isprime(psi.denominator):
        raise ValueError(f"psi denominator {psi.denominator} is not prime")
    return psi


def _check_free(lam: FreeSet, coeffs) -> None:
    c = [int(v) for v in coeffs]
    g = 0
    for v in c:
        g = gcd(g, v)
    spec = EquationSpec(tuple(v // g for v in c))
    if len(lam) ** 4 <= EXHAUSTIVE_LIMIT:
        sol = find_solution(lam.elements, spec)
        if sol is not None:
            raise ValueError(f"lambda has the nontrivial solution {sol} to {spec.describe()}")


def build_1d_special_set_from_params(params: TransferParams, N: int, a=None) -> GridSet:
    """{x in [N] : frac(psi x^2) in the box union}, exactly."""
    if params.variant != "1d":
        raise ValueError("need 1-D parameters")
    if a is not None:
        a = tuple(a) if not hasattr(a, "a1") else (a.a1, a.a2, a.a3)
        if a != params.a:
            raise ValueError("pattern does not match the parameters")
    xs = list(range(1, N + 1))
    members = box_members_1d(params.psi, xs, params.theta1, params.L, params.lam.elements)
    return GridSet(1, N, members)


def build_1d_special_set(data, L: int, N: int, psi, params: TransferParams) -> GridSet:
    """1-D special set for split-prime data (or any triple a1, a2, a3).

    Requires N prime, coprime to lcm(1..L) and to theta2, and lambda free of
    P1 w + P2 x + P3 y + P4 z = 0 over the integers.
    """
    if L != params.L or _psi(psi) != params.psi:
        raise ValueError("L and psi must match the parameters")
    if not isprime(N):
        raise ValueError(f"N = {N} is not prime")
    if gcd(N, lcm(*range(1, L + 1))) != 1 or gcd(N, params.theta2) != 1:
        raise ValueError(f"N = {N} shares a factor with lcm(1..L) or theta2")
    _check_free(params.lam, params.coeffs)
    return build_1d_special_set_from_params(params, N, data)


def nonconvex_members(triple: ComplexTriple, L: int, N: int, psi, lam, box_scale: int | None = None) -> np.ndarray:
    m = triple.m
    if abs((triple.B / triple.A).imag) <= 1e-9:
        raise ValueError("ill-conditioned (A, B) basis")
    lam = list(lam)
    out = np.zeros((N, N), dtype=bool)
    if not lam:
        return out
    n = np.arange(1, N + 1, dtype=float)
    psi = float(psi)
    for i, n1 in enumerate(n):  # row by row keeps memory flat
        z = psi * triple.f(n1, n)
        s, t = box_coords_2d(z, triple.A, triple.B)
        out[i] = in_box_union(s, m, L, lam, box_scale) & in_box_union(t, m, L, lam, box_scale)
    return out


def build_2d_nonconvex_set(triple: ComplexTriple, L: int, N: int, psi, lam: FreeSet,
                           box_scale: int | None = None, check: bool = True) -> GridSet:
    """{(n1, n2) in [N]^2 : psi f(n1, n2) in the box union mod A Z + B Z}.

    Boxes sit at (j1, j2)/(mL) for (j1, j2) in lambda^2 with side 1/(m^2 L)
    (``box_scale`` replaces the m in the side length for adversarial fixtures).
    """
    if N < L:
        raise ValueError("need N >= L")
    if check and len(lam):
        _check_free(lam, (triple.m2 * triple.m3, triple.m1 * triple.m4, triple.m1 * triple.m2, -triple.m))
    return GridSet(2, N, nonconvex_members(triple, L, N, _psi(psi), lam.elements, box_scale))
