"""Complex numbers A, B, C solving BC(B-C) = m2m3, CA(C-A) = m1m4, AB(A-B) = m1m2."""

from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

TOL = 1e-9


class ResidualTooLarge(ArithmeticError):
    pass


@dataclass(frozen=True)
class ComplexTriple:
    m1: int
    m2: int
    m3: int
    m4: int
    A: complex
    B: complex
    C: complex
    R: complex
    u: complex
    v: complex
    w: complex
    t: complex

    @property
    def m(self) -> int:
        return self.m2 * self.m3 + self.m1 * self.m4 + self.m1 * self.m2

    @property
    def residuals(self) -> tuple[float, float, float]:
        A, B, C = self.A, self.B, self.C
        return (abs(B * C * (B - C) - self.m2 * self.m3),
                abs(C * A * (C - A) - self.m1 * self.m4),
                abs(A * B * (A - B) - self.m1 * self.m2))

    @property
    def linear_residual(self) -> float:
        return abs(self.m2 * self.m3 * self.A + self.m1 * self.m4 * self.B + self.m1 * self.m2 * self.C)

    def f(self, x, y):
        """(m2 A x + m1 B y)^2 / A, vectorized."""
        return (self.m2 * self.A * x + self.m1 * self.B * y) ** 2 / self.A

    def to_dict(self) -> dict:
        c = lambda z: [z.real, z.imag]
        return {"m": [self.m1, self.m2, self.m3, self.m4], "m_sum": self.m,
                "A": c(self.A), "B": c(self.B), "C": c(self.C), "R": c(self.R),
                "residuals": list(self.residuals), "linear_residual": self.linear_residual}


def solve_complex_triple(m1: int, m2: int, m3: int, m4: int) -> ComplexTriple:
    ms = (m1, m2, m3, m4)
    if any(int(v) != v or v < 1 for v in ms):
        raise ValueError("m1..m4 must be positive integers")
    m = m2 * m3 + m1 * m4 + m1 * m2
    R = m1 * m2 * cmath.sqrt(-m3 * m4 / m)
    u = 1 - m1 * m4 / R
    v = 1 + m2 * m3 / R
    w = 1 + m1 * m2 * m3 * m4 / R**2
    q = R / (u * v * w)
    t = cmath.exp(cmath.log(q) / 3)  # principal cube root
    tri = ComplexTriple(m1, m2, m3, m4, t * u, t * v, t * w, R, u, v, w, t)
    worst = max(*tri.residuals, tri.linear_residual)
    if worst > TOL:
        raise ResidualTooLarge(f"residual {worst:.3e} for m = {ms}")
    if abs((tri.B / tri.A).imag) <= TOL:
        raise ResidualTooLarge(f"B/A is numerically real for m = {ms}")
    return tri


def alg_id_residuals(triple: ComplexTriple, n1, n2, d) -> np.ndarray:
    """Normalized residual of the four-term identity at each (n1, n2, d)."""
    n1, n2, d = (np.asarray(a, dtype=float) for a in (n1, n2, d))
    T = triple
    terms = (
        T.m2 * T.m3 * T.f(n1 + T.m1 * d, n2),
        T.m1 * T.m4 * T.f(n1, n2 + T.m2 * d),
        T.m1 * T.m2 * T.f(n1 - T.m3 * d, n2 - T.m4 * d),
        -T.m * T.f(n1, n2),
    )
    total = sum(terms)
    scale = np.maximum.reduce([np.abs(x) for x in terms])
    return np.where(scale > 0, np.abs(total) / np.where(scale > 0, scale, 1), np.abs(total))


def verify_alg_id(triple: ComplexTriple, trials: int, seed: int) -> float:
    """Max normalized residual over ``trials`` random integer (n1, n2, d) in [-100, 100]."""
    rng = np.random.Generator(np.random.MT19937(seed))
    n1, n2, d = rng.integers(-100, 101, size=(3, trials))
    return float(alg_id_residuals(triple, n1, n2, d).max(initial=0.0))


def batch_triples(ms: np.ndarray) -> dict:
    """Vectorized solve for an (n, 4) array of positive integer tuples.

    Same formulas and principal branches as ``solve_complex_triple``; returns the
    arrays A, B, C, m and the residuals without raising.
    """
    m1, m2, m3, m4 = (ms[:, i].astype(float) for i in range(4))
    m = m2 * m3 + m1 * m4 + m1 * m2
    R = m1 * m2 * np.sqrt((-m3 * m4 / m).astype(complex))
    u = 1 - m1 * m4 / R
    v = 1 + m2 * m3 / R
    w = 1 + m1 * m2 * m3 * m4 / R**2
    t = np.exp(np.log(R / (u * v * w)) / 3)
    A, B, C = t * u, t * v, t * w
    res = np.stack([np.abs(B * C * (B - C) - m2 * m3),
                    np.abs(C * A * (C - A) - m1 * m4),
                    np.abs(A * B * (A - B) - m1 * m2)], axis=1)
    return {"A": A, "B": B, "C": C, "m": m, "residuals": res,
            "linear": np.abs(m2 * m3 * A + m1 * m4 * B + m1 * m2 * C),
            "im_ratio": np.abs((B / A).imag)}


def batch_alg_id(ms: np.ndarray, trials: int, seed: int, chunk: int = 2000) -> np.ndarray:
    """Max normalized alg-id residual per tuple, over one shared set of random (n1, n2, d)."""
    rng = np.random.Generator(np.random.MT19937(seed))
    n1, n2, d = (a[None, :].astype(float) for a in rng.integers(-100, 101, size=(3, trials)))
    out = np.empty(len(ms))
    for start in range(0, len(ms), chunk):
        sub = ms[start:start + chunk]
        sol = batch_triples(sub)
        A, B = sol["A"][:, None], sol["B"][:, None]
        m1, m2, m3, m4 = (sub[:, i, None].astype(float) for i in range(4))
        f = lambda x, y: (m2 * A * x + m1 * B * y) ** 2 / A
        terms = (m2 * m3 * f(n1 + m1 * d, n2), m1 * m4 * f(n1, n2 + m2 * d),
                 m1 * m2 * f(n1 - m3 * d, n2 - m4 * d), -sol["m"][:, None] * f(n1, n2))
        total = np.abs(sum(terms))
        scale = np.maximum.reduce([np.abs(x) for x in terms])
        ratio = np.where(scale > 0, total / np.where(scale > 0, scale, 1), total)
        out[start:start + chunk] = ratio.max(axis=1)
    return out
