"""Exact multivariate polynomials with integer coefficients.

Polynomials live over an ordered subset of the variables ``X, Y, Z, T, D``
and store a sparse map from exponent vectors to nonzero Python ints, so the
arithmetic is exact at any coefficient size.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Union

import numpy as np

ALL_VARS = ("X", "Y", "Z", "T", "D")

Number = Union[int, Fraction]


class VariableMismatch(ValueError):
    pass


class IntPoly:
    """Sparse integer polynomial over a fixed, ordered variable tuple."""

    __slots__ = ("vars", "terms", "_hash")

    def __init__(self, vars: Iterable[str], terms: Mapping[tuple, int] | None = None):
        vars = tuple(vars)
        for v in vars:
            if v not in ALL_VARS:
                raise ValueError(f"unknown variable {v!r}")
        if len(set(vars)) != len(vars):
            raise ValueError("repeated variable")
        self.vars = vars
        clean = {}
        for exps, c in (terms or {}).items():
            exps = tuple(exps)
            if len(exps) != len(vars):
                raise ValueError("exponent vector has wrong length")
            if c:
                clean[exps] = int(c)
        self.terms = clean
        self._hash = None

    # construction helpers

    @classmethod
    def zero(cls, vars=("X", "Y", "Z")) -> IntPoly:
        return cls(vars)

    @classmethod
    def const(cls, c: int, vars=("X", "Y", "Z")) -> IntPoly:
        return cls(vars, {(0,) * len(vars): c})

    @classmethod
    def var(cls, name: str, vars=("X", "Y", "Z")) -> IntPoly:
        vars = tuple(vars)
        exps = tuple(1 if v == name else 0 for v in vars)
        if name not in vars:
            raise VariableMismatch(f"{name} not in {vars}")
        return cls(vars, {exps: 1})

    @classmethod
    def parse(cls, text: str, vars=("X", "Y", "Z")) -> IntPoly:
        """Parse ``2*X^2 + X*Z - Y*Z`` style input (also accepts ``**`` and implicit ``2X``)."""
        vars = tuple(vars)
        s = text.replace(" ", "").replace("**", "^").replace("−", "-")
        if not s:
            raise ValueError("empty polynomial")
        if s[0] not in "+-":
            s = "+" + s
        out = cls(vars)
        for sign, body in re.findall(r"([+-])([^+-]+)", s):
            coef = 1
            exps = [0] * len(vars)
            for factor in re.findall(r"\d+|[A-Z](?:\^\d+)?", body):
                if factor.isdigit():
                    coef *= int(factor)
                    continue
                name, _, power = factor.partition("^")
                if name not in vars:
                    raise VariableMismatch(f"{name} not in {vars}")
                exps[vars.index(name)] += int(power) if power else 1
            if re.sub(r"\d+|[A-Z](?:\^\d+)?|\*", "", body):
                raise ValueError(f"cannot parse term {body!r}")
            term = cls(vars, {tuple(exps): -coef if sign == "-" else coef})
            out = out + term
        return out

    # basic protocol

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, int):
            return self == IntPoly.const(other, self.vars)
        if not isinstance(other, IntPoly):
            return NotImplemented
        return self.vars == other.vars and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.vars, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self):
        return f"IntPoly({self.to_text()!r}, vars={self.vars})"

    def __str__(self):
        return self.to_text()

    def degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def content(self) -> int:
        from math import gcd

        g = 0
        for c in self.terms.values():
            g = gcd(g, c)
        return g

    def coefficients(self) -> list[int]:
        return [self.terms[e] for e in sorted(self.terms, key=_order_key)]

    # arithmetic

    def _check(self, other: IntPoly):
        if self.vars != other.vars:
            raise VariableMismatch(f"{self.vars} vs {other.vars}")

    def _lift(self, other) -> IntPoly:
        if isinstance(other, int):
            return IntPoly.const(other, self.vars)
        return other

    def __add__(self, other):
        other = self._lift(other)
        self._check(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, 0) + c
        return IntPoly(self.vars, terms)

    __radd__ = __add__

    def __neg__(self):
        return IntPoly(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if isinstance(other, int):
            return IntPoly(self.vars, {e: c * other for e, c in self.terms.items()})
        self._check(other)
        terms: dict[tuple, int] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, 0) + c1 * c2
        return IntPoly(self.vars, terms)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = IntPoly.const(1, self.vars)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # serialization

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, key=_order_key):
            c = self.terms[e]
            mono = "*".join(
                v if k == 1 else f"{v}^{k}" for v, k in zip(self.vars, e) if k
            )
            body = f"{abs(c)}*{mono}" if mono else str(abs(c))
            if not parts:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append(("- " if c < 0 else "+ ") + body)
        return " ".join(parts)


def _order_key(exps: tuple) -> tuple:
    # graded lex, X < Y < Z < T < D: total degree, then the most significant variable first
    return (sum(exps), tuple(reversed(exps)))


@dataclass(frozen=True)
class SignCensus:
    n_positive: int
    n_negative: int
    n_zero_poly: bool

    @property
    def single_signed(self) -> bool:
        return not self.n_zero_poly and (self.n_positive == 0 or self.n_negative == 0)


def poly_add(p: IntPoly, q: IntPoly) -> IntPoly:
    return p + q


def poly_mul(p: IntPoly, q: IntPoly) -> IntPoly:
    return p * q


def poly_substitute(p: IntPoly, assignment: Mapping[str, IntPoly]) -> IntPoly:
    """Compose ``p`` with the images in ``assignment`` (all over one variable set)."""
    missing = [v for v in p.vars if v not in assignment]
    if missing:
        raise KeyError(f"no image for {missing}")
    images = [assignment[v] for v in p.vars]
    target = images[0].vars if images else p.vars
    for img in images:
        if img.vars != target:
            raise VariableMismatch("images live over different variable sets")
    # cache powers per variable; degrees here are small
    powers: list[dict[int, IntPoly]] = [{0: IntPoly.const(1, target)} for _ in images]

    def power(i, k):
        cache = powers[i]
        if k not in cache:
            cache[k] = power(i, k - 1) * images[i]
        return cache[k]

    out = IntPoly(target)
    for e, c in p.terms.items():
        term = IntPoly.const(c, target)
        for i, k in enumerate(e):
            if k:
                term = term * power(i, k)
        out = out + term
    return out


def poly_eval(p: IntPoly, point: Mapping[str, Number]) -> Number:
    """Exact value at a rational point; returns an int when every coordinate is an int."""
    vals = [point[v] for v in p.vars]
    total = 0
    for e, c in p.terms.items():
        term = c
        for v, k in zip(vals, e):
            if k:
                term *= v**k
        total += term
    if isinstance(total, Fraction) and total.denominator == 1:
        return int(total)
    return total


def sign_census(p: IntPoly) -> SignCensus:
    pos = sum(1 for c in p.terms.values() if c > 0)
    return SignCensus(pos, len(p.terms) - pos, p.is_zero())


def _leading(p: IntPoly):
    e = max(p.terms, key=_order_key)
    return e, p.terms[e]


def poly_divides(d: IntPoly, p: IntPoly) -> tuple[bool, IntPoly | None]:
    """Exact division test over Z: returns ``(True, q)`` with ``p == d*q``, else ``(False, None)``.

    Plain multivariate division by a single divisor in graded-lex order; a leading
    term that ``LT(d)`` does not divide (or a non-integral coefficient ratio) means
    ``d`` does not divide ``p`` with an integer cofactor.
    """
    if d.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    d._check(p)
    de, dc = _leading(d)
    rem = p
    q_terms: dict[tuple, int] = {}
    while not rem.is_zero():
        re_, rc = _leading(rem)
        shift = tuple(a - b for a, b in zip(re_, de))
        if min(shift) < 0 or rc % dc:
            return False, None
        c = rc // dc
        q_terms[shift] = q_terms.get(shift, 0) + c
        rem = rem - d * IntPoly(p.vars, {shift: c})
    return True, IntPoly(p.vars, q_terms)


def strip_factor(p: IntPoly, d: IntPoly) -> tuple[IntPoly, int]:
    """Divide ``d`` out of ``p`` as many times as it goes; returns (cofactor, multiplicity)."""
    k = 0
    if p.is_zero():
        return p, 0
    while True:
        ok, q = poly_divides(d, p)
        if not ok or d.degree() == 0:
            return p, k
        p, k = q, k + 1


XYZ = ("X", "Y", "Z")
X = IntPoly.var("X")
Y = IntPoly.var("Y")
Z = IntPoly.var("Z")


def eval_grid(p: IntPoly, axes: Mapping[str, np.ndarray]) -> np.ndarray:
    """Evaluate ``p`` on a broadcastable grid of integer arrays, exactly.

    Uses int64 when a crude magnitude bound fits, otherwise Python-int object
    arrays. ``axes`` maps each variable to an integer ndarray.
    """
    arrays = [np.asarray(axes[v]) for v in p.vars]
    bound = 1
    for arr in arrays:
        bound = max(bound, int(np.abs(arr).max()) if arr.size else 1)
    magnitude = sum(abs(c) for c in p.terms.values()) * bound ** max(p.degree(), 0)
    dtype = np.int64 if magnitude < 2**62 else object
    arrays = [arr.astype(dtype) for arr in arrays]
    shape = np.broadcast_shapes(*(a.shape for a in arrays)) if arrays else ()
    out = np.zeros(shape, dtype=dtype)
    cache: dict[tuple[int, int], np.ndarray] = {}
    for e, c in p.terms.items():
        term = np.full(shape, c, dtype=dtype) if dtype is object else c
        for i, k in enumerate(e):
            if k:
                if (i, k) not in cache:
                    cache[(i, k)] = arrays[i] ** k
                term = term * cache[(i, k)]
        out = out + term
    return out
