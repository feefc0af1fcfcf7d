"""Exact translate counting, phase expectation profiles and transfer-lemma scans.

Two semantics are supported everywhere: ``wraparound`` counts base points in
(Z/NZ)^r, boxed counts base points x in Z^r with x + d*P inside [N]^r.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .sets import GridSet
from .signatures import Pattern1D4, degeneracy_set

# ----------------------------------------------------------------- profiles


@dataclass
class DifferenceProfile:
    N: int
    per_d: dict
    max_d: int | None
    max_value: float
    density: float
    semantics: str

    @staticmethod
    def pick_max(per_d: dict) -> tuple:
        """Largest value; ties go to the smallest |d|, then to positive d."""
        if not per_d:
            return None, 0
        d = max(per_d, key=lambda k: (per_d[k], -abs(k), k > 0))
        return d, per_d[d]

    @classmethod
    def from_values(cls, N: int, per_d: dict, density: float, semantics: str) -> "DifferenceProfile":
        per_d = dict(sorted(per_d.items()))
        d, v = cls.pick_max(per_d)
        return cls(N, per_d, d, v, density, semantics)

    def to_csv(self) -> str:
        rows = ["d,value"] + [f"{d},{_fmt(v)}" for d, v in self.per_d.items()]
        return "\n".join(rows) + "\n"

    def summary(self) -> dict:
        return {"N": self.N, "alpha": self.density, "max_d": self.max_d,
                "max_value": _fmt(self.max_value), "semantics": self.semantics}


def _fmt(v):
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, Fraction):
        return str(v)
    return repr(float(v))


# ----------------------------------------------------------------- counting


def pattern_array(P, r: int) -> np.ndarray:
    pts = [(int(p),) if np.isscalar(p) else tuple(int(c) for c in p) for p in P]
    if not pts:
        raise ValueError("pattern must be nonempty")
    arr = np.array(pts, dtype=np.int64)
    if arr.shape[1] != r:
        raise ValueError(f"pattern points must have {r} coordinates")
    return arr


def translate_mask(A: GridSet, P, d: int, wraparound: bool) -> tuple[np.ndarray, tuple]:
    """Boolean array of base points x with x + d*y in A for all y in P.

    Returns (mask, origin) where ``origin`` is the coordinate of mask index 0.
    Wraparound masks are indexed like A itself.
    """
    pts = pattern_array(P, A.r)
    M = A.members
    if wraparound:
        mask = np.ones_like(M)
        for y in pts:
            mask &= np.roll(M, tuple(-(d * c) % A.N for c in y), axis=tuple(range(A.r)))
        return mask, (1,) * A.r
    lo = [1 - int((d * pts[:, a]).min()) for a in range(A.r)]
    hi = [A.N - int((d * pts[:, a]).max()) for a in range(A.r)]
    if any(h < l for l, h in zip(lo, hi)):
        return np.zeros((0,) * A.r, dtype=bool), tuple(lo)
    mask = np.ones(tuple(h - l + 1 for l, h in zip(lo, hi)), dtype=bool)
    for y in pts:
        sl = tuple(slice(l + d * c - 1, h + d * c) for l, h, c in zip(lo, hi, y))
        mask &= M[sl]
    return mask, tuple(lo)


def count_translates(A: GridSet, P, d: int, wraparound: bool = False) -> int:
    if d == 0:
        raise ValueError("d must be nonzero")
    mask, _ = translate_mask(A, P, d, wraparound)
    return int(np.count_nonzero(mask))


def admissible_ds(N: int, P, r: int, wraparound: bool) -> list[int]:
    if wraparound:
        return list(range(1, N))
    pts = pattern_array(P, r)
    spread = int((pts.max(axis=0) - pts.min(axis=0)).max())
    top = N - 1 if spread == 0 else (N - 1) // spread
    return [d for d in range(-top, top + 1) if d]


def difference_profile(A: GridSet, P, wraparound: bool = False) -> DifferenceProfile:
    per_d = {d: count_translates(A, P, d, wraparound) for d in admissible_ds(A.N, P, A.r, wraparound)}
    return DifferenceProfile.from_values(A.N, per_d, A.density, "wraparound" if wraparound else "boxed")


# ----------------------------------------------------------------- phases


def phase_expectation_profile(f, pattern: Pattern1D4, chunk: int = 256) -> DifferenceProfile:
    """E_t f(t) f(t+k1 d) f(t+k2 d) f(t+k3 d) for d = 1..N-1, with compensated sums."""
    N = f.N
    vals = f.values()
    t = np.arange(N, dtype=np.int64)
    per_d = {}
    for start in range(1, N, chunk):
        ds = np.arange(start, min(start + chunk, N), dtype=np.int64)
        prod = np.broadcast_to(vals, (len(ds), N)).copy()
        for k in pattern.k:
            prod *= vals[(t[None, :] + k * ds[:, None]) % N]
        for d, row in zip(ds.tolist(), prod):
            per_d[d] = math.fsum(row) / N
    return DifferenceProfile.from_values(N, per_d, math.fsum(vals) / N, "wraparound")


def gamma_product(sig, gammas) -> Fraction:
    out = Fraction(1)
    for j in sig:
        if j:
            out *= Fraction(gammas[abs(j) - 1])
    return out


def predict_phase_expectation(pattern: Pattern1D4, gammas, d: int, N: int, alpha=1, report=None) -> float:
    """alpha^4 (1 + 2 g1 g2 g3 g4 + sum over extra degenerate I of gamma_I omega^{p3_I d^2}).

    p3 is taken for the primitive coefficient vector, matching the phase function.
    """
    report = report if report is not None else degeneracy_set(pattern)
    g = [Fraction(v) for v in gammas]
    content = pattern.content
    total = complex(1 + 2 * g[0] * g[1] * g[2] * g[3])
    for sig in report.extras:
        p3 = report.p3_values[sig]
        if p3 % content:
            raise ArithmeticError("p3 not divisible by the coefficient content")
        e = (p3 // content) * d * d % N
        total += float(gamma_product(sig, g)) * cmath.exp(2j * math.pi * e / N)
    return float(Fraction(alpha) ** 4) * total.real


def gauss_sum_check(N: int, a: int, trials: int, seed: int = 0) -> float:
    """max |E_t omega^{a t^2 + b t}| over b = 0 and ``trials`` - 1 random b."""
    if a % N == 0:
        raise ValueError("a must be nonzero mod N")
    rng = np.random.Generator(np.random.MT19937(seed))
    bs = [0] + rng.integers(0, N, size=max(trials - 1, 0)).tolist()
    t = np.arange(N, dtype=np.int64)
    q = (a * t * t) % N
    best = 0.0
    for b in bs:
        ph = (q + b * t) % N
        z = np.exp(2j * np.pi * ph / N).sum() / N
        best = max(best, abs(z))
    return best


# ----------------------------------------------------------------- transfer lemmas


def box_members_1d(psi: Fraction, xs: Sequence[int], theta1: int, L: int, lam: Sequence[int]) -> np.ndarray:
    """frac(psi * x^2) in the union of [k/(theta1 L), k/(theta1 L) + 1/(theta1^2 L)), exactly."""
    psi = Fraction(psi)
    u, q = psi.numerator, psi.denominator
    lam = set(lam)
    out = np.zeros(len(xs), dtype=bool)
    for i, x in enumerate(xs):
        v = (u * x * x) % q  # frac = v / q
        k = v * theta1 * L // q
        out[i] = k in lam and v * theta1 * theta1 * L - k * theta1 * q < q
    return out


def box_coords_2d(z: np.ndarray, A: complex, B: complex) -> tuple[np.ndarray, np.ndarray]:
    """Real (s, t) with z = s*A + t*B."""
    det = A.real * B.imag - B.real * A.imag
    s = (z.real * B.imag - z.imag * B.real) / det
    t = (A.real * z.imag - A.imag * z.real) / det
    return s, t


def in_box_union(c: np.ndarray, m: int, L: int, lam: Sequence[int], scale: int | None = None) -> np.ndarray:
    """frac(c) in the union of [j/(mL), j/(mL) + 1/(scale^2 L)) over j in lam (scale defaults to m)."""
    scale = m if scale is None else scale
    fr = c - np.floor(c)
    j = np.floor(fr * m * L).astype(np.int64)
    ok = np.isin(j, np.array(sorted(lam), dtype=np.int64))
    return ok & (fr - j / (m * L) < 1.0 / (scale * scale * L))


@dataclass
class TransferCheck:
    violations: int
    events: int
    worst: float = 0.0
    details: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"violations": self.violations, "events": self.events, "worst_ratio": self.worst}


def _a_triple(data) -> tuple[int, int, int]:
    if hasattr(data, "a1"):
        return (data.a1, data.a2, data.a3)
    return tuple(int(v) for v in data)


def transfer_check_1d(params, data, N: int) -> TransferCheck:
    """Scan every (n, d) with n, n + a_j d in the special set and test the norm conclusion."""
    from .builders.transfer import build_1d_special_set_from_params

    a = _a_triple(data)
    A = build_1d_special_set_from_params(params, N, a)
    u, q = params.psi.numerator, params.psi.denominator
    P = [0, *a]
    violations = events = 0
    worst = 0.0
    details = []
    for d in admissible_ds(N, P, 1, False):
        mask, (lo,) = translate_mask(A, P, d, False)
        for i in np.nonzero(mask)[0]:
            n = lo + int(i)
            events += 1
            r = params.theta2 * u * n * d % q
            dist = min(r, q - r)
            worst = max(worst, dist * params.L / (params.theta3 * q))
            if dist * params.L >= params.theta3 * q:
                violations += 1
                if len(details) < 10:
                    details.append((n, d))
    return TransferCheck(violations, events, worst, details)


def transfer_check_2d(params, triple, N: int, margin: float = 1e-9) -> TransferCheck:
    """Scan every (n1, n2, d) with all four pattern points in the 2-D set and test the norm conclusion."""
    from .builders.transfer import build_2d_nonconvex_set

    A = build_2d_nonconvex_set(triple, params.L, N, params.psi, params.lam,
                               box_scale=params.box_scale, check=params.valid)
    m1, m2, m3, m4, m = triple.m1, triple.m2, triple.m3, triple.m4, triple.m
    P = [(0, 0), (m1, 0), (0, m2), (-m3, -m4)]
    psi = float(params.psi)
    bound = 1.0 / (m * m * params.L)  # the conclusion; box_scale only changes the set
    violations = events = 0
    worst = 0.0
    details = []
    for d in admissible_ds(N, P, 2, False):
        mask, (lo1, lo2) = translate_mask(A, P, d, False)
        idx = np.argwhere(mask)
        if not len(idx):
            continue
        n1 = (idx[:, 0] + lo1).astype(float)
        n2 = (idx[:, 1] + lo2).astype(float)
        v = (2 * m1 * m2 * (m2 * triple.A * n1 + m1 * triple.B * n2) * d * psi
             + m1 * m1 * m2 * m2 * triple.A * d * d * psi)
        s, t = box_coords_2d(v, triple.A, triple.B)
        norm = np.maximum(np.abs(s - np.round(s)), np.abs(t - np.round(t)))
        events += len(idx)
        worst = max(worst, float(norm.max() / bound))
        bad = norm >= bound + margin
        violations += int(np.count_nonzero(bad))
        for row in idx[bad][: max(0, 10 - len(details))]:
            details.append((int(row[0] + lo1), int(row[1] + lo2), d))
    return TransferCheck(violations, events, worst, details)


# ----------------------------------------------------------------- affine maps


@dataclass(frozen=True)
class AffineMap:
    r: int
    matrix: tuple
    shift: tuple

    def __post_init__(self):
        M = [[Fraction(v) for v in row] for row in self.matrix]
        if len(M) != self.r or any(len(row) != self.r for row in M):
            raise ValueError("matrix must be r x r")
        object.__setattr__(self, "matrix", tuple(tuple(row) for row in M))
        object.__setattr__(self, "shift", tuple(Fraction(v) for v in self.shift))
        if self.det() == 0:
            raise ValueError("map is not invertible")

    def det(self) -> Fraction:
        M = self.matrix
        return M[0][0] if self.r == 1 else M[0][0] * M[1][1] - M[0][1] * M[1][0]

    def apply(self, p) -> tuple:
        p = (p,) if np.isscalar(p) else tuple(p)
        return tuple(sum(self.matrix[i][j] * p[j] for j in range(self.r)) + self.shift[i] for i in range(self.r))

    def linear(self, p) -> tuple:
        p = (p,) if np.isscalar(p) else tuple(p)
        return tuple(sum(self.matrix[i][j] * p[j] for j in range(self.r)) for i in range(self.r))

    def map_pattern(self, P) -> list:
        """Image of a pattern under the linear part (translates of patterns are immaterial)."""
        out = []
        for p in P:
            q = self.linear(p)
            if any(c.denominator != 1 for c in q):
                raise ValueError("pattern image is not integral")
            out.append(int(q[0]) if self.r == 1 else tuple(int(c) for c in q))
        return out


@dataclass
class AffineResult:
    image: GridSet
    retained: int
    total: int
    translate: tuple

    @property
    def retained_fraction(self) -> float:
        return self.retained / self.total if self.total else 0.0


def apply_affine(A: GridSet, amap: AffineMap, target_N: int) -> AffineResult:
    """phi(A) moved into [target_N]^r by the densest translate of the target box.

    Image points must be integral.  Candidate translates are the multiples of
    target_N covering the image bounding box; the one holding the most points
    is kept (ties to the lexicographically smallest offset).
    """
    if A.r != amap.r:
        raise ValueError("dimension mismatch")
    pts = A.points()
    imgs = []
    for p in pts:
        q = amap.apply(p)
        if any(c.denominator != 1 for c in q):
            raise ValueError(f"image of {p} is not integral")
        imgs.append(tuple(int(c) for c in q))
    out = GridSet.empty(A.r, target_N)
    if not imgs:
        return AffineResult(out, 0, 0, (0,) * A.r)
    arr = np.array(imgs, dtype=np.int64)
    buckets: dict = {}
    for row in arr:
        key = tuple(int((c - 1) // target_N) for c in row)
        buckets[key] = buckets.get(key, 0) + 1
    best = min(buckets, key=lambda k: (-buckets[k], k))
    offset = tuple(k * target_N for k in best)
    for row in arr:
        q = tuple(int(c) - o for c, o in zip(row, offset))
        if all(1 <= c <= target_N for c in q):
            out.members[tuple(c - 1 for c in q)] = True
    return AffineResult(out, buckets[best], len(imgs), offset)
