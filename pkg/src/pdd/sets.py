"""Dense grid sets in [N]^r and the ``pdd-set v1`` text format."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

import numpy as np

from .eqfree import EquationSpec, FreeSet, ThreeAP

MAGIC = "pdd-set v1"


@dataclass
class GridSet:
    """Subset of [N]^r (1-indexed); ``members[i, j]`` is the point (i+1, j+1)."""

    r: int
    N: int
    members: np.ndarray

    def __post_init__(self):
        if self.r not in (1, 2):
            raise ValueError("r must be 1 or 2")
        self.members = np.asarray(self.members, dtype=bool)
        if self.members.shape != (self.N,) * self.r:
            raise ValueError(f"members must have shape {(self.N,) * self.r}")

    @classmethod
    def empty(cls, r: int, N: int) -> "GridSet":
        return cls(r, N, np.zeros((N,) * r, dtype=bool))

    @classmethod
    def full(cls, r: int, N: int) -> "GridSet":
        return cls(r, N, np.ones((N,) * r, dtype=bool))

    @classmethod
    def from_points(cls, r: int, N: int, points: Iterable) -> "GridSet":
        g = cls.empty(r, N)
        for p in points:
            p = (p,) if r == 1 and np.isscalar(p) else tuple(p)
            if len(p) != r or any(c < 1 or c > N for c in p):
                raise ValueError(f"point {p} outside [N]^{r}")
            g.members[tuple(c - 1 for c in p)] = True
        return g

    def points(self) -> list:
        idx = np.argwhere(self.members) + 1
        if self.r == 1:
            return [int(v[0]) for v in idx]
        return [tuple(int(c) for c in v) for v in idx]

    def __len__(self):
        return int(self.members.sum())

    @property
    def density(self) -> float:
        return len(self) / self.N**self.r

    def __eq__(self, other):
        return (isinstance(other, GridSet) and self.r == other.r and self.N == other.N
                and bool(np.array_equal(self.members, other.members)))


def gridset_to_text(g: GridSet) -> str:
    lines = [MAGIC, f"r={g.r} N={g.N} kind=gridset"]
    for p in g.points():
        lines.append(str(p) if g.r == 1 else f"{p[0]} {p[1]}")
    return "\n".join(lines) + "\n"


def _spec_tag(spec) -> str:
    if isinstance(spec, ThreeAP):
        return "3ap-cyclic" if spec.cyclic else "3ap"
    tag = "eq:" + ",".join(str(c) for c in spec.coeffs)
    return tag + (f"@{spec.modulus}" if spec.modulus else "")


def _parse_spec(tag: str):
    if tag == "3ap":
        return ThreeAP(False)
    if tag == "3ap-cyclic":
        return ThreeAP(True)
    if tag.startswith("eq:"):
        body, _, mod = tag[3:].partition("@")
        return EquationSpec(tuple(int(c) for c in body.split(",")), int(mod) if mod else None)
    raise ValueError(f"unknown spec tag {tag!r}")


def freeset_to_text(fs: FreeSet) -> str:
    lines = [MAGIC, f"r=1 N={fs.L} kind=freeset spec={_spec_tag(fs.spec)}"]
    lines += [str(v) for v in fs.elements]
    return "\n".join(lines) + "\n"


def _header(text: str) -> tuple[dict, list[str]]:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != MAGIC:
        raise ValueError("not a pdd-set v1 file")
    fields = dict(tok.split("=", 1) for tok in lines[1].split())
    return fields, lines[2:]


def parse_set(text: str):
    """Parse either kind; returns a GridSet or a FreeSet."""
    fields, body = _header(text)
    r, N = int(fields["r"]), int(fields["N"])
    if fields["kind"] == "gridset":
        pts = [int(ln) if r == 1 else tuple(int(c) for c in ln.split()) for ln in body]
        return GridSet.from_points(r, N, pts)
    if fields["kind"] == "freeset":
        spec = _parse_spec(fields.get("spec", "3ap"))
        return FreeSet(N, [int(ln) for ln in body], spec)
    raise ValueError(f"unknown kind {fields['kind']!r}")


def write_set(path, obj) -> Path:
    path = Path(path)
    text = gridset_to_text(obj) if isinstance(obj, GridSet) else freeset_to_text(obj)
    path.write_text(text)
    return path


def read_set(path):
    return parse_set(Path(path).read_text())
