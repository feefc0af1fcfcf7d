"""Primes splitting completely in Q(zeta_12, 3^(1/6)) and the mod-p solutions built from them."""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from fractions import Fraction

from sympy import isprime, nthroot_mod, primerange

SEARCH_CAP = 10**6
TARGET_RESIDUES = (-1, 3, -1, -1)


class SearchExhausted(RuntimeError):
    pass


def P_values(x, y, z) -> tuple:
    """(P1, P2, P3, P4) = ((x-y)(y-z)(z-x), yz(y-z), zx(z-x), xy(x-y))."""
    return ((x - y) * (y - z) * (z - x), y * z * (y - z), z * x * (z - x), x * y * (x - y))


def is_split_prime(p: int) -> bool:
    return isprime(p) and p % 12 == 1 and pow(3, (p - 1) // 6, p) == 1


def _primitive_12th_roots(p: int) -> list[int]:
    return [w for w in range(2, p) if pow(w, 12, p) == 1 and pow(w, 6, p) != 1 and pow(w, 4, p) != 1]


@dataclass(frozen=True)
class SplitPrimeData:
    p: int
    omega12: int
    s6: int
    a1: int
    a2: int
    a3: int

    @property
    def residues(self) -> tuple:
        return tuple(_signed(v % self.p, self.p) for v in P_values(self.a1, self.a2, self.a3))

    @property
    def coeffs(self) -> tuple:
        """Integer values P_j(a1, a2, a3)."""
        return P_values(self.a1, self.a2, self.a3)

    def to_dict(self) -> dict:
        return {"p": self.p, "omega12": self.omega12, "s6": self.s6,
                "a": [self.a1, self.a2, self.a3], "residues": list(self.residues),
                "coeffs": list(self.coeffs)}


def _signed(v: int, p: int) -> int:
    return v - p if v > p // 2 else v


def _images(p: int, w: int, s: int) -> tuple[int, int, int]:
    half = pow(2, -1, p)
    z1 = pow(s, -1, p) * pow(w, 5, p)
    z2 = half * (s * s * w * w + pow(s, 5, p) * pow(w, 5, p))
    z3 = half * (-s * s * w * w + pow(s, 5, p) * pow(w, 5, p))
    # representatives in [1, p]
    return tuple((z % p) or p for z in (z1, z2, z3))


def split_prime_data(p: int) -> SplitPrimeData:
    if not is_split_prime(p):
        raise ValueError(f"{p} does not split completely")
    w = min(_primitive_12th_roots(p))
    s = min(nthroot_mod(3, 6, p, all_roots=True))
    data = SplitPrimeData(p, w, s, *_images(p, w, s))
    if data.residues != TARGET_RESIDUES:
        raise ArithmeticError(f"residues {data.residues} at p = {p}")
    return data


def find_split_prime(min_p: int = 13) -> SplitPrimeData:
    if min_p < 13:
        raise ValueError("min_p must be at least 13")
    for p in primerange(min_p, min_p + SEARCH_CAP):
        if is_split_prime(p):
            return split_prime_data(p)
    raise SearchExhausted(f"no split prime in [{min_p}, {min_p + SEARCH_CAP})")


def split_prime_density(limit: int) -> Fraction:
    if limit < 10**4:
        raise ValueError("limit must be at least 10^4")
    total = hits = 0
    for p in primerange(2, limit + 1):
        total += 1
        hits += p % 12 == 1 and pow(3, (p - 1) // 6, p) == 1
    return Fraction(hits, total)


def complex_z() -> tuple[complex, complex, complex]:
    """z1 = 3^(-1/6) w^5, z2 = (3^(1/3) w^2 + 3^(5/6) w^5)/2, z3 = (-3^(1/3) w^2 + 3^(5/6) w^5)/2 with w = e^(2 pi i/12)."""
    w = cmath.exp(2j * cmath.pi / 12)
    r = 3 ** (1 / 6)
    return (w**5 / r, (r**2 * w**2 + r**5 * w**5) / 2, (-(r**2) * w**2 + r**5 * w**5) / 2)


def complex_residual() -> float:
    vals = P_values(*complex_z())
    return max(abs(v - t) for v, t in zip(vals, TARGET_RESIDUES))
