"""Sets with no nontrivial solutions to a 3-term progression or a 4-variable linear equation.

Conventions: a 4-variable equation c_w*w + c_x*x + c_y*y + c_z*z = 0 has
coefficients summing to zero, so constant tuples always solve it; those are
the trivial solutions.  A 3-AP is x + z = 2y with x != z.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

EXHAUSTIVE_LIMIT = 10**8


class InfeasibleBase(ValueError):
    pass


class TooLargeForExhaustive(RuntimeError):
    pass


@dataclass(frozen=True)
class EquationSpec:
    coeffs: tuple
    modulus: int | None = None

    def __post_init__(self):
        c = tuple(int(v) for v in self.coeffs)
        if len(c) != 4:
            raise ValueError("need exactly four coefficients")
        if sum(c) != 0:
            raise ValueError("coefficients must sum to zero")
        object.__setattr__(self, "coeffs", c)
        if self.modulus is not None and self.modulus < 2:
            raise ValueError("modulus must be at least 2")

    def describe(self) -> str:
        s = " + ".join(f"{c}*{v}" for c, v in zip(self.coeffs, "wxyz"))
        return s + (f" = 0 mod {self.modulus}" if self.modulus else " = 0")


@dataclass(frozen=True)
class ThreeAP:
    """x + z = 2y with x != z, in the integers or in Z/LZ when ``cyclic``."""

    cyclic: bool = False

    def describe(self) -> str:
        return "3AP mod L" if self.cyclic else "3AP"


Spec = Union[EquationSpec, ThreeAP]


@dataclass(frozen=True)
class FreeSet:
    L: int
    elements: tuple
    spec: Spec

    def __post_init__(self):
        els = tuple(sorted(set(int(v) for v in self.elements)))
        if els and (els[0] < 0 or els[-1] >= self.L):
            raise ValueError(f"elements must lie in [0, {self.L - 1}]")
        object.__setattr__(self, "elements", els)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, v):
        return v in set(self.elements)

    def with_spec(self, spec: Spec, L: int | None = None) -> "FreeSet":
        return FreeSet(self.L if L is None else L, self.elements, spec)


# ----------------------------------------------------------------- oracle


def has_3ap(elements: Sequence[int], modulus: int | None = None) -> tuple | None:
    """Some (a, c, b) with a + b = 2c and a != b, or None."""
    arr = np.array(sorted(set(elements)), dtype=np.int64)
    if len(arr) < 2:
        return None
    if modulus is None:
        targets = set((2 * arr).tolist())
        for i in range(len(arr)):
            sums = arr[i] + arr[i + 1:]
            hit = np.nonzero(np.isin(sums, list(targets)))[0]
            if len(hit):
                b = int(arr[i + 1 + hit[0]])
                return (int(arr[i]), (int(arr[i]) + b) // 2, b)
        return None
    doubles = {}
    for c in arr.tolist():
        doubles.setdefault((2 * c) % modulus, c)
    keys = np.array(sorted(doubles), dtype=np.int64)
    for i in range(len(arr)):
        sums = (arr[i] + arr[i + 1:]) % modulus
        hit = np.nonzero(np.isin(sums, keys))[0]
        if len(hit):
            b = int(arr[i + 1 + hit[0]])
            return (int(arr[i]), doubles[(int(arr[i]) + b) % modulus], b)
    return None


def find_solution(elements: Sequence[int], spec: EquationSpec) -> tuple | None:
    """A nontrivial (w, x, y, z) from ``elements`` solving ``spec``, or None.

    Meet in the middle: pair sums c_w*w + c_x*x against -(c_y*y + c_z*z).
    """
    els = np.array(sorted(set(elements)), dtype=object if _big(elements, spec) else np.int64)
    n = len(els)
    if n < 2:
        return None
    cw, cx, cy, cz = spec.coeffs
    left = (cw * els[:, None] + cx * els[None, :]).ravel()
    right = (-(cy * els[:, None] + cz * els[None, :])).ravel()
    if spec.modulus:
        left = left % spec.modulus
        right = right % spec.modulus
    index: dict = {}
    for j, v in enumerate(right.tolist()):
        index.setdefault(v, []).append(j)
    for i, v in enumerate(left.tolist()):
        for j in index.get(v, ()):
            w, x = els[i // n], els[i % n]
            y, z = els[j // n], els[j % n]
            if not (w == x == y == z):
                return (int(w), int(x), int(y), int(z))
    return None


def _big(elements, spec) -> bool:
    top = max((abs(int(v)) for v in elements), default=0)
    return top * sum(abs(c) for c in spec.coeffs) >= 2**62


def verify_free(fs: FreeSet) -> bool:
    """Exhaustive freeness check; raises TooLargeForExhaustive past the size budget."""
    n = len(fs)
    if isinstance(fs.spec, ThreeAP):
        if n * n > EXHAUSTIVE_LIMIT:
            raise TooLargeForExhaustive(f"|set|^2 = {n * n}")
        return has_3ap(fs.elements, fs.L if fs.spec.cyclic else None) is None
    if n**4 > EXHAUSTIVE_LIMIT:
        raise TooLargeForExhaustive(f"|set|^4 = {n ** 4}")
    return find_solution(fs.elements, fs.spec) is None


def sample_check(fs: FreeSet, trials: int, seed: int) -> tuple | None:
    """Random-tuple search for a nontrivial solution; returns one if found."""
    if len(fs) < 2:
        return None
    rng = np.random.Generator(np.random.MT19937(seed))
    els = np.array(fs.elements, dtype=np.int64)
    if isinstance(fs.spec, ThreeAP):
        a, b = rng.choice(els, size=(2, trials))
        hits = set(fs.elements)
        for u, v in zip(a.tolist(), b.tolist()):
            if u == v:
                continue
            if fs.spec.cyclic:
                if any((2 * c - u - v) % fs.L == 0 for c in hits):
                    return (u, v)
            elif (u + v) % 2 == 0 and (u + v) // 2 in hits:
                return (u, (u + v) // 2, v)
        return None
    q = rng.choice(els, size=(trials, 4))
    vals = q @ np.array(fs.spec.coeffs, dtype=np.int64)
    if fs.spec.modulus:
        vals %= fs.spec.modulus
    for row in np.nonzero(vals == 0)[0]:
        t = tuple(int(v) for v in q[row])
        if len(set(t)) > 1:
            return t
    return None


# ----------------------------------------------------------------- Behrend


def _digit_vectors(b: int, n: int, base: int, limit: int) -> tuple[np.ndarray, np.ndarray]:
    """Values < limit of digit vectors in {0..b-1}^n read in ``base``, with squared norms."""
    vals = np.zeros(1, dtype=np.int64)
    norms = np.zeros(1, dtype=np.int64)
    place = 1
    for _ in range(n):
        d = np.arange(b, dtype=np.int64)
        vals = (vals[:, None] + d[None, :] * place).ravel()
        norms = (norms[:, None] + d[None, :] ** 2).ravel()
        keep = vals < limit
        vals, norms = vals[keep], norms[keep]
        place *= base
    return vals, norms


def _sphere_set(L: int, carry_weight: int) -> tuple[list[int], dict]:
    """Best digit-sphere subset of {0..L-1} for digit sums weighted by ``carry_weight``.

    Digits are < b in base carry_weight*(b-1)+1, so no carries occur.  For b = 2 the
    whole {0,1}-digit cube is already free; otherwise the most populous norm shell
    is used (ties to the smallest radius).
    """
    best_vals = np.zeros(1, dtype=np.int64)
    best_info: dict = {"b": 1, "n": 1, "base": 1, "radius": 0}
    for b in range(2, L + 1):
        base = carry_weight * (b - 1) + 1
        n = 1
        while base ** (n - 1) < L:
            vals, norms = _digit_vectors(b, n, base, L)
            radius = None
            if b > 2:
                counts = Counter(norms.tolist())
                radius = min(counts, key=lambda r: (-counts[r], r))
                vals = vals[norms == radius]
            if len(vals) > len(best_vals):
                best_vals = vals
                best_info = {"b": b, "n": n, "base": base, "radius": radius}
            n += 1
        if b * b > 4 * L:  # only n = 1 remains, which gives single points
            break
    return sorted(int(v) for v in best_vals), best_info


def behrend_sphere(L: int, b: int, n: int, carry_weight: int = 2, radius: int | None = None) -> list[int]:
    """One norm shell of the digit cube {0..b-1}^n in base carry_weight*(b-1)+1, cut to values < L.

    ``radius`` defaults to the most populous shell (ties to the smallest radius).
    """
    base = carry_weight * (b - 1) + 1
    vals, norms = _digit_vectors(b, n, base, L)
    if radius is None:
        counts = Counter(norms.tolist())
        radius = min(counts, key=lambda r: (-counts[r], r))
    return sorted(int(v) for v in vals[norms == radius])


def behrend_3apfree(L: int, cyclic: bool = False) -> FreeSet:
    """Digit-sphere 3-AP-free subset of {0..L-1}.

    With ``cyclic`` the set is free of 3-APs in Z/LZ; it is built inside
    {0..ceil(L/2)-1} so sums never wrap.
    """
    if L < 1:
        raise ValueError("L must be positive")
    size = -(-L // 2) if cyclic else L
    els, _ = _sphere_set(size, 2)
    return FreeSet(L, els, ThreeAP(cyclic))


def _normalize_one_vs_three(spec: EquationSpec) -> tuple[int, tuple]:
    """Return (index of the lone coefficient, coefficients signed so the other three are positive)."""
    c = spec.coeffs
    pos = [i for i, v in enumerate(c) if v > 0]
    neg = [i for i, v in enumerate(c) if v < 0]
    if len(pos) == 3 and len(neg) == 1:
        return neg[0], c
    if len(neg) == 3 and len(pos) == 1:
        return pos[0], tuple(-v for v in c)
    raise InfeasibleBase(f"{spec.describe()} is not of the form c1*x + c2*y + c3*z = m*w with c_i > 0")


def behrend_eqfree(L: int, spec: EquationSpec) -> FreeSet:
    """Digit-sphere subset of {0..L-1} without nontrivial solutions to ``spec``.

    For a modular spec the set is built inside {0..L'-1} with m*(L'-1) < modulus,
    so every congruence between elements is an integer equation.
    """
    if L < 1:
        raise ValueError("L must be positive")
    _, c = _normalize_one_vs_three(spec)
    weight = sum(v for v in c if v > 0)
    size = L
    if spec.modulus:
        size = min(L, (spec.modulus - 1) // weight + 1)
        if size < 1:
            raise InfeasibleBase("modulus too small for the coefficients")
    els, _ = _sphere_set(size, weight)
    return FreeSet(L, els, spec)


def greedy_free(L: int, spec: Spec) -> FreeSet:
    """Greedy subset of {0..L-1}: add each candidate unless it creates a nontrivial solution."""
    chosen: list[int] = []
    for v in range(L):
        trial = chosen + [v]
        if isinstance(spec, ThreeAP):
            bad = has_3ap(trial, L if spec.cyclic else None) is not None
        else:
            bad = find_solution(trial, spec) is not None
        if not bad:
            chosen.append(v)
    return FreeSet(L, chosen, spec)


def digit_tensor_set(p: int, base_set: FreeSet, n: int, spec: Spec | None = None) -> FreeSet:
    """All x in {0..p^n - 1} whose base-p digits lie in ``base_set``."""
    if n < 1:
        raise ValueError("n must be at least 1")
    if any(v >= p for v in base_set.elements):
        raise ValueError("base set must lie in {0..p-1}")
    digits = list(base_set.elements)
    out = []
    for combo in itertools.product(digits, repeat=n):
        out.append(sum(d * p**i for i, d in enumerate(combo)))
    return FreeSet(p**n, out, spec if spec is not None else base_set.spec)


def affine_image(fs: FreeSet, a: int, b: int) -> list[int]:
    return [a * v + b for v in fs.elements]
