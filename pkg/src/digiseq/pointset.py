"""Exact rational point sets in the unit cube.

Every coordinate is stored as an integer numerator over a per-coordinate
denominator.  Digital sequences use ``b**m`` for every coordinate; Halton
points carry ``b_j**m`` per coordinate, and arbitrary rationals are brought
to a common denominator per coordinate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

__all__ = ["DigitalPoint", "PointSet", "write_csv", "read_csv"]


@dataclass(frozen=True)
class DigitalPoint:
    numerators: tuple
    denominators: tuple

    def __post_init__(self):
        if len(self.numerators) != len(self.denominators):
            raise ValueError("numerators and denominators differ in length")
        for a, d in zip(self.numerators, self.denominators):
            if not 0 <= a < d:
                raise ValueError(f"coordinate {a}/{d} outside [0, 1)")

    @property
    def dim(self) -> int:
        return len(self.numerators)

    @property
    def coords(self) -> tuple:
        return tuple(Fraction(a, d) for a, d in zip(self.numerators, self.denominators))

    def __iter__(self):
        return iter(self.coords)


@dataclass(frozen=True)
class PointSet:
    """Ordered multiset of points ``x_n = numerators[n] / denominators``."""

    numerators: tuple
    denominators: tuple
    base: object = None
    precision: int | None = None
    tag: str = ""
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        s = len(self.denominators)
        if s < 1:
            raise ValueError("point set must have dimension >= 1")
        for row in self.numerators:
            if len(row) != s:
                raise ValueError("all points must share the dimension")
            for a, d in zip(row, self.denominators):
                if not 0 <= a < d:
                    raise ValueError(f"coordinate {a}/{d} outside [0, 1)")

    @classmethod
    def from_points(cls, points: Sequence[DigitalPoint], base=None, precision=None, tag="") -> "PointSet":
        if not points:
            raise ValueError("cannot infer denominators from an empty point list")
        dens = points[0].denominators
        for p in points:
            if p.denominators != dens:
                raise ValueError("points have differing denominators")
        return cls(tuple(p.numerators for p in points), dens, base, precision, tag)

    @classmethod
    def from_fractions(cls, rows: Iterable[Sequence], tag: str = "") -> "PointSet":
        rows = [tuple(Fraction(v) for v in r) for r in rows]
        if not rows:
            raise ValueError("empty point set")
        s = len(rows[0])
        dens = tuple(math.lcm(*(r[j].denominator for r in rows)) for j in range(s))
        nums = tuple(tuple(int(r[j] * dens[j]) for j in range(s)) for r in rows)
        return cls(nums, dens, tag=tag)

    @property
    def N(self) -> int:
        return len(self.numerators)

    @property
    def dim(self) -> int:
        return len(self.denominators)

    def __len__(self):
        return self.N

    def __getitem__(self, n: int) -> DigitalPoint:
        return DigitalPoint(self.numerators[n], self.denominators)

    def fractions(self) -> list[tuple]:
        return [tuple(Fraction(a, d) for a, d in zip(r, self.denominators)) for r in self.numerators]

    def as_array(self) -> np.ndarray:
        """Coordinates as an (N, s) float64 array (correctly rounded)."""
        if "array" not in self._cache:
            arr = np.array(
                [[a / d for a, d in zip(r, self.denominators)] for r in self.numerators],
                dtype=float,
            ).reshape(self.N, self.dim)
            arr.setflags(write=False)
            self._cache["array"] = arr
        return self._cache["array"]

    def prefix(self, N: int) -> "PointSet":
        if not 0 < N <= self.N:
            raise ValueError(f"prefix length {N} outside 1..{self.N}")
        return PointSet(self.numerators[:N], self.denominators, self.base, self.precision, self.tag)

    def slice(self, start: int, stop: int) -> "PointSet":
        return PointSet(self.numerators[start:stop], self.denominators, self.base, self.precision, self.tag)

    def project(self, coords: Sequence[int]) -> "PointSet":
        """Projection onto the (0-based) coordinate indices ``coords``."""
        coords = tuple(coords)
        base = self.base
        if isinstance(base, tuple):
            base = tuple(base[j] for j in coords)
        return PointSet(
            tuple(tuple(r[j] for j in coords) for r in self.numerators),
            tuple(self.denominators[j] for j in coords),
            base,
            self.precision,
            self.tag,
        )

    def reversed(self) -> "PointSet":
        return PointSet(self.numerators[::-1], self.denominators, self.base, self.precision, self.tag)


def _base_str(base) -> str:
    if isinstance(base, tuple):
        return ",".join(str(b) for b in base)
    return "?" if base is None else str(base)


def write_csv(P: PointSet, path=None, exact: bool = True) -> str:
    """Serialize with a ``# base=.. dim=.. prec=.. N=..`` header.

    ``exact`` writes ``a/d`` fractions; otherwise decimals with 17 significant
    digits, which round-trip IEEE doubles.
    """
    prec = "?" if P.precision is None else P.precision
    lines = [f"# base={_base_str(P.base)} dim={P.dim} prec={prec} N={P.N}"]
    for row in P.numerators:
        if exact:
            cells = (f"{a}/{d}" for a, d in zip(row, P.denominators))
        else:
            cells = (f"{a / d:.17g}" for a, d in zip(row, P.denominators))
        lines.append(",".join(cells))
    text = "\n".join(lines) + "\n"
    if path is not None:
        with open(path, "w") as fh:
            fh.write(text)
    return text


def _parse_cell(tok: str) -> Fraction:
    tok = tok.strip()
    if "/" in tok:
        num, den = tok.split("/", 1)
        if "^" in den:
            b, e = den.split("^", 1)
            return Fraction(int(num), int(b) ** int(e))
        return Fraction(int(num), int(den))
    return Fraction(tok)


def read_csv(source) -> PointSet:
    """Parse text produced by :func:`write_csv` (a path or the text itself)."""
    if "\n" not in str(source):
        with open(source) as fh:
            text = fh.read()
    else:
        text = source
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("#"):
        raise ValueError("missing '# base=.. dim=.. prec=.. N=..' header")
    header = dict(tok.split("=", 1) for tok in lines[0][1:].split())
    rows = [tuple(_parse_cell(c) for c in ln.split(",")) for ln in lines[1:]]
    if int(header["N"]) != len(rows):
        raise ValueError(f"header says N={header['N']} but found {len(rows)} rows")
    dim = int(header["dim"])
    if any(len(r) != dim for r in rows):
        raise ValueError("row length does not match header dim")
    P = PointSet.from_fractions(rows)
    base = header.get("base", "?")
    if base == "?":
        base = None
    elif "," in base:
        base = tuple(int(x) for x in base.split(","))
    else:
        base = int(base)
    prec = header.get("prec", "?")
    prec = None if prec == "?" else int(prec)
    # keep declared denominators b^m when they are consistent with the data
    dens = P.denominators
    if prec is not None and base is not None:
        bases = base if isinstance(base, tuple) else (base,) * dim
        declared = tuple(b**prec for b in bases)
        if all(dd % d == 0 for dd, d in zip(declared, dens)):
            nums = tuple(tuple(a * (dd // d) for a, d, dd in zip(r, dens, declared)) for r in P.numerators)
            return PointSet(nums, declared, base, prec)
    return PointSet(P.numerators, dens, base, prec)
