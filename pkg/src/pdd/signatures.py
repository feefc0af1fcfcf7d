"""Signature polynomials for 4-point patterns {0, k1, k2, k3} and their classification.

A signature I = (i1, i2, i3, i4) with entries in [-4, 4] selects coefficients
a_{i1}, ..., a_{i4} (a_0 = 0, a_{-j} = -a_j).  Expanding

    a_{i1} T^2 + a_{i2} (T + k1 D)^2 + a_{i3} (T + k2 D)^2 + a_{i4} (T + k3 D)^2

with the a's and k's written in the (x, y, z) parametrization gives
p1 T^2 + p2 T D + p3 D^2.  Everything here is exact integer arithmetic except
the bounded searches, which are exhaustive over finite boxes and say so.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Sequence

import numpy as np

from .intpoly import XYZ, IntPoly, eval_grid, poly_divides, poly_eval, poly_substitute, sign_census, strip_factor

SIG_VALUES = tuple(range(-4, 5))
TRIVIAL = ((0, 0, 0, 0), (1, 2, 3, 4), (-1, -2, -3, -4))

BOTH_ZERO = "BothZero"
P1_ZERO_ONLY = "P1ZeroOnly"
P2_ZERO_ONLY = "P2ZeroOnly"
NEITHER_ZERO = "NeitherZero"


class UnverifiableSignature(RuntimeError):
    pass


class ExtraSolutionFound(RuntimeError):
    pass


class BoundNotMet(RuntimeError):
    pass


class CommonZeroFound(RuntimeError):
    pass


def _P(text: str) -> IntPoly:
    return IntPoly.parse(text, XYZ)


_X, _Y, _Z = (IntPoly.var(v, XYZ) for v in XYZ)
W_FACTOR = 2 * _X + _Y + _Z

# coefficient and offset polynomials in x, y, z
A_POLYS = {
    1: -_Y * (_X + _Z) * (_X + _Y + _Z),
    2: (_X + _Y) * (_X + _Z) * (2 * _X + _Y + _Z),
    3: -_X * (2 * _X + _Y + _Z) * (_X + _Y + _Z),
    4: _X * _Y * (_X + _Y),
}
K_POLYS = (IntPoly.zero(XYZ), _X, _X + _Y, 2 * _X + _Y + _Z)

# sign-mixed factors allowed in the factor-list certificate
HIGH_DEG_CURVES = tuple(
    _P(s)
    for s in (
        "2X^3 + 2X^2Y + 3X^2Z + XYZ + XZ^2 - Y^2Z",
        "2X^3 + 2X^2Y + X^2Z - XYZ - Y^2Z - YZ^2",
        "2X^4 + 2X^3Y + 3X^3Z - X^2YZ + X^2Z^2 - 4XY^2Z - 3XYZ^2 - Y^3Z - 2Y^2Z^2 - YZ^3",
        "2X^4 + 2X^3Y + 5X^3Z + 3X^2YZ + 4X^2Z^2 - 2XY^2Z + XYZ^2 + XZ^3 - Y^3Z - Y^2Z^2",
        "2X^4 + 4X^3Y + 3X^3Z + 2X^2Y^2 + 2X^2YZ + X^2Z^2 - 2XYZ^2 - Y^2Z^2 - YZ^3",
        "2X^4 + 4X^3Y + 5X^3Z + 2X^2Y^2 + 5X^2YZ + 4X^2Z^2 - XY^2Z + 2XYZ^2 + XZ^3 - Y^3Z - Y^2Z^2",
    )
)
LINEAR_FACTORS = tuple(_P(s) for s in ("X", "Y", "Z", "Y+Z", "X+Z", "X+Y", "X+Y+Z", "2X+Y+Z", "2X+2Y+Z"))

LOCUS_Q = _P("2X^2 + XZ - YZ")
LOCUS_XX_YZ = _P("X^2 - YZ")
LOCUS_C = _P("X^2 + XZ - Y^2")
LOCUS_CUBIC_A = _P("2X^3 + 4X^2Y + X^2Z + 2XY^2 - Y^2Z - YZ^2")
LOCUS_CUBIC_B = _P("4X^3 + 4X^2Y + 4X^2Z + 2XYZ + XZ^2 - Y^2Z")


def _pm(sig, value):
    neg = tuple(-v for v in sig)
    return {sig: value, neg: value}


# exceptional signatures with p1 == 0 and the locus dividing p2
A4_EXCEPTIONS = {
    **_pm((3, 2, 1, 4), LOCUS_Q),
    **_pm((3, -3, -1, 1), LOCUS_XX_YZ),
    **_pm((2, 3, -2, -3), LOCUS_C),
    **_pm((2, 1, -2, -1), LOCUS_CUBIC_A),
    **_pm((3, -1, 1, -3), LOCUS_CUBIC_B),
}
A5_EXCEPTIONS = _pm((3, 2, 3, 4), LOCUS_Q)
GCD_121 = (_X + _Y + _Z) * LOCUS_Q
A7_CURVE = _pm((1, 2, 1, 4), LOCUS_Q)
A7_RAYS = {
    **_pm((1, -3, 1, 0), (1, 1, 1)),
    **_pm((1, 0, -3, 1), (1, 1, 1)),
    **_pm((0, 3, 2, 3), (1, 3, 2)),
    **_pm((3, 0, -1, 3), (1, 4, 4)),
    **_pm((4, 0, 1, 4), (2, 1, 1)),
}
# the seven signature pairs compared pairwise for disjoint pattern sets
A8_SIGNATURES = ((3, 2, 1, 4), (3, -3, -1, 1), (2, 3, -2, -3), (2, 1, -2, -1), (3, -1, 1, -3), (3, 2, 3, 4), (1, 2, 1, 4))


def a8_locus(sig) -> IntPoly:
    sig = tuple(sig)
    for table in (A4_EXCEPTIONS, A5_EXCEPTIONS, A7_CURVE):
        if sig in table:
            return table[sig]
    raise KeyError(sig)


# ----------------------------------------------------------------- patterns


@dataclass(frozen=True)
class Pattern1D4:
    """The pattern {0, x, x+y, 2x+y+z} for positive integers x, y, z."""

    x: int
    y: int
    z: int

    def __post_init__(self):
        if min(self.x, self.y, self.z) <= 0:
            raise ValueError("x, y, z must be positive")

    @classmethod
    def from_points(cls, points: Sequence[int]) -> "Pattern1D4":
        """Normalize four distinct integers to {0, k1, k2, k3} with k1 + k2 < k3.

        The pattern is translated to start at 0 and reflected if needed; patterns
        with k1 + k2 == k3 (symmetric ones) have no such parametrization.
        """
        pts = sorted(set(int(p) for p in points))
        if len(pts) != 4:
            raise ValueError("need four distinct points")
        k = [p - pts[0] for p in pts[1:]]
        if k[0] + k[1] < k[2]:
            k1, k2, k3 = k
        else:
            k1, k2, k3 = k[2] - k[1], k[2] - k[0], k[2]
            if k1 + k2 >= k3:
                raise ValueError("symmetric pattern (k1 + k2 == k3) has no (x, y, z) form")
        return cls(k1, k2 - k1, k3 - k1 - k2)

    @property
    def k(self) -> tuple[int, int, int]:
        return (self.x, self.x + self.y, 2 * self.x + self.y + self.z)

    @property
    def points(self) -> tuple[int, int, int, int]:
        return (0, *self.k)

    @property
    def a(self) -> tuple[int, int, int, int]:
        x, y, z = self.x, self.y, self.z
        return (
            -y * (x + z) * (x + y + z),
            (x + y) * (x + z) * (2 * x + y + z),
            -x * (2 * x + y + z) * (x + y + z),
            x * y * (x + y),
        )

    @property
    def content(self) -> int:
        return gcd(*self.a)

    @property
    def a_primitive(self) -> tuple[int, int, int, int]:
        g = self.content
        return tuple(v // g for v in self.a)

    def xyz(self) -> tuple[int, int, int]:
        return (self.x, self.y, self.z)


def signature_a(a: Sequence[int], j: int) -> int:
    """a_j with a_0 = 0 and a_{-j} = -a_j."""
    if j == 0:
        return 0
    return a[j - 1] if j > 0 else -a[-j - 1]


def validate_signature(sig: Iterable[int]) -> tuple[int, int, int, int]:
    sig = tuple(int(v) for v in sig)
    if len(sig) != 4 or any(v < -4 or v > 4 for v in sig):
        raise ValueError(f"bad signature {sig}")
    return sig


# ----------------------------------------------------------------- symbolic build


@lru_cache(maxsize=1)
def _blocks():
    """(p1, p2, p3) contribution of coefficient a_j sitting at position s."""
    V = ("X", "Y", "Z", "T", "D")
    lift = {v: IntPoly.var(v, V) for v in XYZ}
    T, D = IntPoly.var("T", V), IntPoly.var("D", V)
    out = {}
    for s in range(4):
        k = poly_substitute(K_POLYS[s], lift) if s else IntPoly.zero(V)
        sq = (T + k * D) ** 2
        for j in range(1, 5):
            expr = poly_substitute(A_POLYS[j], lift) * sq
            parts = [{}, {}, {}]
            for e, c in expr.terms.items():
                slot = e[4]  # power of D: T^2 -> 0, TD -> 1, D^2 -> 2
                parts[slot][e[:3]] = parts[slot].get(e[:3], 0) + c
            polys = tuple(IntPoly(XYZ, t) for t in parts)
            out[s, j] = polys
            out[s, -j] = tuple(-p for p in polys)
        out[s, 0] = (IntPoly.zero(XYZ),) * 3
    return out


def build_signature_polys(sig: Iterable[int]) -> tuple[IntPoly, IntPoly, IntPoly]:
    """(p1, p2, p3) with p2 the full TD coefficient."""
    sig = validate_signature(sig)
    blocks = _blocks()
    acc = [IntPoly.zero(XYZ)] * 3
    for s, j in enumerate(sig):
        acc = [acc[i] + blocks[s, j][i] for i in range(3)]
    return tuple(acc)


@dataclass(frozen=True)
class PatternSet:
    kind: str  # All | CurveLocus | Ray | Empty
    locus: IntPoly | None = None
    ray: tuple | None = None

    def describe(self) -> str:
        if self.kind == "CurveLocus":
            return f"CurveLocus({self.locus.to_text()})"
        if self.kind == "Ray":
            return f"Ray{self.ray}"
        return self.kind

    def contains(self, x: int, y: int, z: int) -> bool:
        if self.kind == "All":
            return True
        if self.kind == "CurveLocus":
            return poly_eval(self.locus, {"X": x, "Y": y, "Z": z}) == 0
        if self.kind == "Ray":
            return _on_ray((x, y, z), self.ray)
        return False


def _on_ray(p, ray) -> bool:
    a, b, c = ray
    x, y, z = p
    return x * b == y * a and y * c == z * b and x * c == z * a


def stated_pattern_set(sig) -> PatternSet:
    """Pattern set of a signature as listed in the classification table."""
    sig = tuple(sig)
    if sig in TRIVIAL:
        return PatternSet("All")
    for table in (A4_EXCEPTIONS, A5_EXCEPTIONS, A7_CURVE):
        if sig in table:
            return PatternSet("CurveLocus", locus=table[sig])
    if sig in A7_RAYS:
        return PatternSet("Ray", ray=A7_RAYS[sig])
    return PatternSet("Empty")


@dataclass(frozen=True)
class SignatureRecord:
    signature: tuple
    p1: IntPoly
    p2: IntPoly
    p3: IntPoly
    cls: str
    pattern_set: PatternSet

    def to_dict(self) -> dict:
        return {
            "signature": list(self.signature),
            "class": self.cls,
            "p1": self.p1.to_text(),
            "p2": self.p2.to_text(),
            "p3": self.p3.to_text(),
            "pattern_set": self.pattern_set.describe(),
        }


def classify(p1: IntPoly, p2: IntPoly) -> str:
    if p1.is_zero() and p2.is_zero():
        return BOTH_ZERO
    if p1.is_zero():
        return P1_ZERO_ONLY
    if p2.is_zero():
        return P2_ZERO_ONLY
    return NEITHER_ZERO


def make_record(sig) -> SignatureRecord:
    sig = validate_signature(sig)
    p1, p2, p3 = build_signature_polys(sig)
    return SignatureRecord(sig, p1, p2, p3, classify(p1, p2), stated_pattern_set(sig))


@lru_cache(maxsize=1)
def _census() -> tuple[SignatureRecord, ...]:
    return tuple(make_record(sig) for sig in itertools.product(SIG_VALUES, repeat=4))


def census_all_signatures() -> list[SignatureRecord]:
    """All 9^4 records in lexicographic signature order."""
    return list(_census())


def mixed_sign_polys(record: SignatureRecord):
    """Yield f1..f5 of the mixed-sign test; p2 enters as half the TD coefficient."""
    w4 = W_FACTOR**4
    f1 = w4 * record.p1
    yield f1
    half = IntPoly(XYZ, {e: c // 2 for e, c in record.p2.terms.items()})
    f2 = w4 * half
    yield f2
    yield (_X + _Y) * f1 - f2
    yield W_FACTOR * f1 - f2
    yield _X * f1 - f2


def single_signed_witness(record: SignatureRecord) -> int | None:
    """Index (1..5) of the first nonzero single-signed f_j, or None when all are mixed or zero."""
    for i, f in enumerate(mixed_sign_polys(record), start=1):
        if sign_census(f).single_signed:
            return i
    return None


def in_I0(record: SignatureRecord) -> bool:
    return record.cls == NEITHER_ZERO and single_signed_witness(record) is None


def I0_signatures() -> list[tuple]:
    return [r.signature for r in _census() if in_I0(r)]


# ----------------------------------------------------------------- certificates


@dataclass
class Certificate:
    claim_id: str
    status: str  # verified | bounded | failed
    witnesses: dict = field(default_factory=dict)
    parameters: dict = field(default_factory=dict)
    timing: float = 0.0

    def to_dict(self) -> dict:
        return {
            "claim_id": self.claim_id,
            "status": self.status,
            "witnesses": self.witnesses,
            "parameters": self.parameters,
            "timing": self.timing,
        }


def _strip_all(p: IntPoly, factors: Sequence[IntPoly]):
    used = []
    for f in factors:
        p, k = strip_factor(p, f)
        if k:
            used.append([f.to_text(), k])
    return p, used


def verify_claim_a4_a5(record: SignatureRecord) -> Certificate:
    """Certify the pattern set of a signature where exactly one of p1, p2 vanishes."""
    t0 = time.perf_counter()
    if record.cls == P1_ZERO_ONLY:
        claim, poly, exceptions = "a4", record.p2, A4_EXCEPTIONS
    elif record.cls == P2_ZERO_ONLY:
        claim, poly, exceptions = "a5", record.p1, A5_EXCEPTIONS
    else:
        raise ValueError(f"{record.signature} has class {record.cls}")
    wit: dict = {"signature": list(record.signature)}
    sig = record.signature
    if sig in exceptions:
        locus = exceptions[sig]
        ok, q = poly_divides(locus, poly)
        if not ok or not sign_census(q).single_signed:
            raise UnverifiableSignature(f"{sig}: stated locus does not certify")
        wit.update(route="locus", locus=locus.to_text(), cofactor=q.to_text())
    elif sign_census(W_FACTOR * W_FACTOR * poly).single_signed:
        wit.update(route="single-signed", multiplier="(2X+Y+Z)^2")
    else:
        rest, used = _strip_all(poly, LINEAR_FACTORS + HIGH_DEG_CURVES)
        if rest.degree() != 0:
            raise UnverifiableSignature(f"{sig}: no certificate applies")
        wit.update(route="factor-list", factors=used, unit=rest.to_text())
    return Certificate(claim, "verified", wit, {}, time.perf_counter() - t0)


def _grid(bound: int):
    r = np.arange(1, bound + 1, dtype=np.int64)
    return {"X": r[:, None, None], "Y": r[None, :, None], "Z": r[None, None, :]}


def common_zeros(polys: Sequence[IntPoly], bound: int) -> list[tuple[int, int, int]]:
    """All (x, y, z) in [1, bound]^3 where every polynomial vanishes."""
    axes = _grid(bound)
    mask = np.ones((bound, bound, bound), dtype=bool)
    for p in polys:
        mask &= eval_grid(p, axes) == 0
    return [tuple(int(v) + 1 for v in idx) for idx in zip(*np.nonzero(mask))]


def verify_claim_a6_a7(record: SignatureRecord, search_bound: int = 40) -> Certificate:
    """Certify the pattern set of a signature with both p1 and p2 nonzero."""
    t0 = time.perf_counter()
    if record.cls != NEITHER_ZERO:
        raise ValueError(f"{record.signature} has class {record.cls}")
    sig = record.signature
    wit: dict = {"signature": list(sig)}
    params = {"search_bound": search_bound}
    witness = single_signed_witness(record)
    if witness is not None:
        wit.update(route="single-signed", f_index=witness, pattern_set="Empty")
        return Certificate("a6", "verified", wit, params, time.perf_counter() - t0)

    stated = stated_pattern_set(sig)
    half_p2 = IntPoly(XYZ, {e: c // 2 for e, c in record.p2.terms.items()})
    if sig in A7_CURVE:
        for name, p in (("p1", record.p1), ("p2", record.p2)):
            ok, q = poly_divides(GCD_121, p)
            if not ok:
                raise ExtraSolutionFound(f"{sig}: common factor does not divide {name}")
            wit[f"{name}_cofactor"] = q.to_text()
        wit.update(route="exact-division", common_factor=GCD_121.to_text())
    elif sig in A7_RAYS:
        # substitute the parametrized family l*(a, b, c); both polys must vanish identically in l
        V = ("X", "Y", "Z")
        ell = IntPoly.var("X", V)
        fam = {v: ell * c for v, c in zip(XYZ, A7_RAYS[sig])}
        for name, p in (("p1", record.p1), ("p2", record.p2)):
            if not poly_substitute(p, fam).is_zero():
                raise ExtraSolutionFound(f"{sig}: {name} does not vanish on the stated ray")
        wit.update(route="ray-substitution", ray=list(A7_RAYS[sig]))
    else:
        wit.update(route="bounded-search-only", rigor="bounded")

    zeros = common_zeros([record.p1, half_p2], search_bound)
    extras = [p for p in zeros if not stated.contains(*p)]
    if extras:
        raise ExtraSolutionFound(f"{sig}: extra common zeros {extras[:5]}")
    wit.update(pattern_set=stated.describe(), zeros_in_box=len(zeros), extra_zeros=0,
               rigor="bounded", note="zero-dimensionality replaced by exhaustive search")
    return Certificate("a7", "bounded", wit, params, time.perf_counter() - t0)


def verify_claim_a8(bound: int = 40) -> Certificate:
    """Pairwise: equal loci or no common positive zero in [1, bound]^3."""
    if bound < 10:
        raise ValueError("bound must be at least 10")
    t0 = time.perf_counter()
    axes = _grid(bound)
    sigs = [s for base in A8_SIGNATURES for s in (base, tuple(-v for v in base))]
    zero_masks = {}
    for s in sigs:
        locus = a8_locus(s)
        if locus not in zero_masks:
            zero_masks[locus] = eval_grid(locus, axes) == 0
    pairs = []
    for s1, s2 in itertools.combinations(sigs, 2):
        l1, l2 = a8_locus(s1), a8_locus(s2)
        if l1 == l2:
            pairs.append({"pair": [list(s1), list(s2)], "result": "Equal"})
            continue
        hits = np.argwhere(zero_masks[l1] & zero_masks[l2])
        if len(hits):
            raise CommonZeroFound(f"{s1} and {s2} share {tuple(int(v) + 1 for v in hits[0])}")
        pairs.append({"pair": [list(s1), list(s2)], "result": "Disjoint"})
    return Certificate("a8", "bounded", {"pairs": pairs, "rigor": "bounded"}, {"bound": bound},
                       time.perf_counter() - t0)


# ----------------------------------------------------------------- degeneracy


# (case number, label, expected extra signatures)
CASES = (
    (1, "Ray(1,1,1)", [(1, -3, 1, 0), (1, 0, -3, 1), (3, -3, -1, 1)]),
    (2, "Ray(1,3,2)", [(0, 3, 2, 3)]),
    (3, "Ray(1,4,4)", [(3, 0, -1, 3)]),
    (4, "Ray(2,1,1)", [(4, 0, 1, 4)]),
    (5, "Curve(2x^2+xz-yz)", [(1, 2, 1, 4), (3, 2, 1, 4), (3, 2, 3, 4)]),
    (6, "Curve(x^2-yz)", [(3, -3, -1, 1)]),
    (7, "Curve(x^2+xz-y^2)", [(2, 3, -2, -3)]),
    (8, "Curve(2x^3+4x^2y+x^2z+2xy^2-y^2z-yz^2)", [(2, 1, -2, -1)]),
    (9, "Curve(4x^3+4x^2y+4x^2z+2xyz+xz^2-y^2z)", [(3, -1, 1, -3)]),
    (10, "Otherwise", []),
)
_CASE_TESTS = {
    1: ("ray", (1, 1, 1)),
    2: ("ray", (1, 3, 2)),
    3: ("ray", (1, 4, 4)),
    4: ("ray", (2, 1, 1)),
    5: ("curve", LOCUS_Q),
    6: ("curve", LOCUS_XX_YZ),
    7: ("curve", LOCUS_C),
    8: ("curve", LOCUS_CUBIC_A),
    9: ("curve", LOCUS_CUBIC_B),
}


def _with_negatives(sigs):
    out = set()
    for s in sigs:
        out.add(tuple(s))
        out.add(tuple(-v for v in s))
    return out


def expected_extras(case_number: int) -> set:
    return _with_negatives(CASES[case_number - 1][2])


def match_case(x: int, y: int, z: int) -> tuple[int, str]:
    """First case of the table whose condition holds; rays before curves."""
    for number, label, _ in CASES[:-1]:
        kind, obj = _CASE_TESTS[number]
        if kind == "ray":
            if _on_ray((x, y, z), obj):
                return number, label
        elif poly_eval(obj, {"X": x, "Y": y, "Z": z}) == 0:
            return number, label
    return 10, "Otherwise"


_SIG_GRID = np.array(list(itertools.product(SIG_VALUES, repeat=4)), dtype=np.int64)


def _degenerate_mask(a_rows: np.ndarray, k_rows: np.ndarray) -> np.ndarray:
    """Boolean (batch, 6561) mask of p1 == p2 == 0 for a batch of patterns.

    ``a_rows`` has shape (batch, 9) holding a_j for j = -4..4; ``k_rows`` holds
    (0, k1, k2, k3) per pattern.
    """
    a = a_rows
    b = a_rows[:, :, None] * k_rows[:, None, 1:]  # (batch, 9, 3): a_j * k_s
    n = len(a_rows)
    p1 = (a[:, :, None, None, None] + a[:, None, :, None, None]
          + a[:, None, None, :, None] + a[:, None, None, None, :])
    p2 = (b[:, None, :, None, None, 0] + b[:, None, None, :, None, 1] + b[:, None, None, None, :, 2])
    return ((p1 == 0) & (p2 == 0)).reshape(n, -1)


def _a_row(a) -> list[int]:
    return [signature_a(a, j) for j in SIG_VALUES]


def degenerate_signatures(x: int, y: int, z: int) -> list[tuple]:
    pat = Pattern1D4(x, y, z)
    a = pat.a
    k = (0, *pat.k)
    if max(abs(v) for v in a) * max(k) * 4 < 2**62:
        mask = _degenerate_mask(np.array([_a_row(a)], dtype=np.int64), np.array([k], dtype=np.int64))[0]
        return [tuple(int(v) for v in _SIG_GRID[i]) for i in np.nonzero(mask)[0]]
    out = []  # exact fallback for very large parameters
    for sig in itertools.product(SIG_VALUES, repeat=4):
        c = [signature_a(a, j) for j in sig]
        if sum(c) == 0 and sum(ci * ki for ci, ki in zip(c, k)) == 0:
            out.append(sig)
    return out


def p3_value(sig, pattern: Pattern1D4) -> int:
    a = pattern.a
    k = (0, *pattern.k)
    return sum(signature_a(a, j) * ks * ks for j, ks in zip(sig, k))


@dataclass
class DegeneracyReport:
    pattern: Pattern1D4
    degenerate_signatures: list
    case_number: int
    case_label: str
    p3_values: dict

    @property
    def extras(self) -> list:
        return [s for s in self.degenerate_signatures if s not in TRIVIAL]

    def to_dict(self) -> dict:
        return {
            "xyz": list(self.pattern.xyz()),
            "points": list(self.pattern.points),
            "case_number": self.case_number,
            "case_label": self.case_label,
            "degenerate_signatures": [list(s) for s in self.degenerate_signatures],
            "p3_values": {",".join(map(str, s)): v for s, v in self.p3_values.items()},
        }


def degeneracy_set(pattern: Pattern1D4) -> DegeneracyReport:
    x, y, z = pattern.xyz()
    sigs = sorted(degenerate_signatures(x, y, z))
    number, label = match_case(x, y, z)
    p3 = {s: p3_value(s, pattern) for s in sigs}
    return DegeneracyReport(pattern, sigs, number, label, p3)


@dataclass
class AtlasResult:
    bound: int
    labels: dict  # (x, y, z) -> case number
    mismatches: list
    case_counts: dict
    p3_failures: list

    @property
    def ok(self) -> bool:
        return not self.mismatches and not self.p3_failures


def _case_numbers(xs: np.ndarray, ys: np.ndarray, zs: np.ndarray) -> np.ndarray:
    case = np.full(xs.shape, 10, dtype=np.int64)
    axes = {"X": xs, "Y": ys, "Z": zs}
    for number in range(9, 0, -1):  # later assignments win, so go backwards
        kind, obj = _CASE_TESTS[number]
        if kind == "ray":
            a, b, c = obj
            hit = (xs * b == ys * a) & (ys * c == zs * b)
        else:
            hit = eval_grid(obj, axes) == 0
        case[hit] = number
    return case


def run_atlas(bound: int = 40, batch: int = 1000) -> AtlasResult:
    """Degenerate signatures for every 1 <= x, y, z <= bound against the case table."""
    r = np.arange(1, bound + 1, dtype=np.int64)
    xs, ys, zs = (g.ravel() for g in np.meshgrid(r, r, r, indexing="ij"))
    w = 2 * xs + ys + zs
    a = np.stack([-ys * (xs + zs) * (xs + ys + zs), (xs + ys) * (xs + zs) * w, -xs * w * (xs + ys + zs),
                  xs * ys * (xs + ys)], axis=1)
    a_rows = np.concatenate([-a[:, ::-1], np.zeros((len(xs), 1), dtype=np.int64), a], axis=1)
    k_rows = np.stack([np.zeros_like(xs), xs, xs + ys, w], axis=1)
    cases = _case_numbers(xs, ys, zs)
    sig_index = {tuple(int(v) for v in row): i for i, row in enumerate(_SIG_GRID)}
    expected = np.zeros((11, len(_SIG_GRID)), dtype=bool)
    for number in range(1, 11):
        for s in expected_extras(number) | set(TRIVIAL):
            expected[number, sig_index[s]] = True
    mismatches, p3_failures = [], []
    for start in range(0, len(xs), batch):
        sl = slice(start, start + batch)
        mask = _degenerate_mask(a_rows[sl], k_rows[sl])
        bad_rows = np.nonzero((mask != expected[cases[sl]]).any(axis=1))[0]
        for row in bad_rows:
            i = start + int(row)
            found = {tuple(int(v) for v in _SIG_GRID[j]) for j in np.nonzero(mask[row])[0]}
            mismatches.append({"xyz": (int(xs[i]), int(ys[i]), int(zs[i])), "case": int(cases[i]),
                               "found": sorted(found - set(TRIVIAL))})
    for i in np.nonzero(cases == 5)[0]:
        pat = Pattern1D4(int(xs[i]), int(ys[i]), int(zs[i]))
        bad = [s for s in expected_extras(5) if p3_value(s, pat) != 0]
        if bad:
            p3_failures.append({"xyz": pat.xyz(), "signatures": sorted(bad)})
    labels = {(int(x), int(y), int(z)): int(c) for x, y, z, c in zip(xs, ys, zs, cases)}
    counts = {int(n): int(np.count_nonzero(cases == n)) for n in range(1, 11)}
    return AtlasResult(bound, labels, mismatches, counts, p3_failures)


# ----------------------------------------------------------------- gammas

F = Fraction
_GAMMA_TABLE = {
    1: (F(-1, 512), F(1, 8), F(1, 8), F(1, 8)),
    2: (F(1, 8), F(1, 8), F(-1, 512), F(1, 8)),
    3: (F(1, 8), F(1, 8), F(-1, 512), F(1, 8)),
    4: (F(1, 8), F(1, 8), F(1, 8), F(-1, 512)),
    5: (F(1, 8), F(-1, 8), F(1, 8), F(1, 8)),
    6: (F(-1, 512), F(1, 8), F(1, 8), F(1, 8)),
    7: (F(1, 8), F(1, 8), F(-1, 512), F(1, 8)),
    8: (F(-1, 512), F(1, 8), F(1, 8), F(1, 8)),
    9: (F(-1, 512), F(1, 8), F(1, 8), F(1, 8)),
}
DEFAULT_GAMMAS = (F(1, 8), F(1, 8), F(1, 8), F(-1, 8))


def gamma_of(sig, gammas) -> Fraction:
    out = F(1)
    for j in sig:
        out *= 1 if j == 0 else gammas[abs(j) - 1]
    return out


@dataclass(frozen=True)
class GammaChoice:
    gammas: tuple
    bound: Fraction
    crude_bound: Fraction
    refined: bool

    def to_dict(self) -> dict:
        return {
            "gammas": [str(g) for g in self.gammas],
            "certified_bound": str(self.bound),
            "crude_bound": str(self.crude_bound),
            "refined": self.refined,
        }


def certified_bounds(report: DegeneracyReport, gammas) -> tuple[Fraction, Fraction]:
    """(crude, refined) upper bounds on the normalized main term.

    The crude one takes |gamma_I| for every extra signature; the refined one uses
    the exact value gamma_I wherever p3 vanishes (the phase is then identically 1).
    """
    base = 1 + 2 * gammas[0] * gammas[1] * gammas[2] * gammas[3]
    crude = base + sum(abs(gamma_of(s, gammas)) for s in report.extras)
    refined = base + sum(
        gamma_of(s, gammas) if report.p3_values[s] == 0 else abs(gamma_of(s, gammas)) for s in report.extras
    )
    return crude, refined


def choose_gammas(report: DegeneracyReport) -> GammaChoice:
    if not report.extras:
        gammas = DEFAULT_GAMMAS
    else:
        gammas = _GAMMA_TABLE[report.case_number]
    crude, refined = certified_bounds(report, gammas)
    use_refined = report.case_number == 5
    bound = refined if use_refined else crude
    if bound >= 1:
        raise BoundNotMet(f"case {report.case_number}: bound {bound} >= 1")
    return GammaChoice(gammas, bound, crude, use_refined)


# ----------------------------------------------------------------- curves


@dataclass
class CurveReport:
    curve: str
    height_bound: int
    positive_solutions: list
    small_height_points: list
    local_solubility: dict
    rigor: str = "bounded"

    def to_dict(self) -> dict:
        return {
            "curve": self.curve,
            "height_bound": self.height_bound,
            "positive_solutions": [list(p) for p in self.positive_solutions],
            "small_height_points": [list(p) for p in self.small_height_points],
            "local_solubility": {str(k): v for k, v in self.local_solubility.items()},
            "rigor": self.rigor,
        }


def _primitive(p):
    g = gcd(*p)
    return tuple(v // g for v in p)


def _projective_key(p):
    p = _primitive(p)
    for v in p:
        if v:
            return p if v > 0 else tuple(-c for c in p)
    return p


def local_points_nonzero(curve: IntPoly, p: int) -> int:
    """Number of projective points mod p with all coordinates nonzero (scaled to X = 1)."""
    r = np.arange(1, p, dtype=np.int64)
    axes = {"X": np.ones((1, 1), dtype=np.int64), "Y": r[:, None], "Z": r[None, :]}
    reduced = IntPoly(curve.vars, {e: c % p for e, c in curve.terms.items()})
    vals = eval_grid(reduced, axes)
    return int(np.count_nonzero(vals % p == 0))


def curve_search(curve: IntPoly, height_bound: int = 200, primes: Sequence[int] = (5, 7, 11, 13),
                 small_height: int = 12) -> CurveReport:
    """Bounded-height search for positive rational points plus local point counts.

    Positive points are searched exhaustively in [1, height_bound]^3; all-sign points
    are listed up to ``small_height`` for context.
    """
    if not curve.is_homogeneous():
        raise ValueError("curve must be homogeneous")
    positive = set()
    r = np.arange(1, height_bound + 1, dtype=np.int64)
    yz = {"Y": r[:, None], "Z": r[None, :]}
    for x in range(1, height_bound + 1):
        vals = eval_grid(curve, {"X": np.full((1, 1), x, dtype=np.int64), **yz})
        for iy, iz in np.argwhere(vals == 0):
            positive.add(_primitive((x, int(iy) + 1, int(iz) + 1)))
    s = np.arange(-small_height, small_height + 1, dtype=np.int64)
    vals = eval_grid(curve, {"X": s[:, None, None], "Y": s[None, :, None], "Z": s[None, None, :]})
    small = set()
    for idx in np.argwhere(vals == 0):
        pt = tuple(int(v) - small_height for v in idx)
        if any(pt):
            small.add(_projective_key(pt))
    local = {int(p): local_points_nonzero(curve, int(p)) for p in primes}
    return CurveReport(curve.to_text(), height_bound, sorted(positive), sorted(small), local)
