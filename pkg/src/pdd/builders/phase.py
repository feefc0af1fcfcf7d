"""Quadratic-phase weight functions f(t) = alpha * (1 + sum 2 gamma_k cos(2 pi a_k t^2 / N))."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np
from sympy import isprime

from ..signatures import Pattern1D4


def as_fraction(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, float):
        return Fraction(str(v))
    return Fraction(v)


@dataclass(frozen=True)
class PhaseFunction:
    N: int
    alpha: Fraction
    terms: tuple  # ((a_k, gamma_k), ...)

    def __post_init__(self):
        if not isprime(self.N):
            raise ValueError(f"N = {self.N} is not prime")
        if any(2 * abs(a) >= self.N for a, _ in self.terms):
            raise ValueError("N must exceed 2 max|a_k|")
        if not 0 <= self.alpha <= Fraction(1, 2):
            raise ValueError("alpha must lie in [0, 1/2]")
        if sum(2 * abs(g) for _, g in self.terms) > 1:
            raise ValueError("weights too large: sum 2|gamma_k| must be <= 1")

    def values(self) -> np.ndarray:
        t = np.arange(self.N, dtype=np.int64)
        sq = (t * t) % self.N
        acc = np.ones(self.N)
        for a, g in self.terms:
            if g:
                acc += 2 * float(g) * np.cos(2 * np.pi * ((a * sq) % self.N) / self.N)
        return float(self.alpha) * acc

    def to_json(self) -> str:
        return json.dumps({
            "N": self.N,
            "alpha": str(self.alpha),
            "terms": [{"a": a, "gamma_num": g.numerator, "gamma_den": g.denominator} for a, g in self.terms],
        }, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "PhaseFunction":
        d = json.loads(text)
        terms = tuple((t["a"], Fraction(t["gamma_num"], t["gamma_den"])) for t in d["terms"])
        return cls(d["N"], Fraction(d["alpha"]), terms)


def build_phase_function(pattern: Pattern1D4, N: int, alpha, gammas: Sequence) -> PhaseFunction:
    gammas = tuple(as_fraction(g) for g in gammas)
    if len(gammas) != 4 or any(abs(g) > Fraction(1, 8) for g in gammas):
        raise ValueError("need four gammas with |gamma_k| <= 1/8")
    return PhaseFunction(N, as_fraction(alpha), tuple(zip(pattern.a_primitive, gammas)))
