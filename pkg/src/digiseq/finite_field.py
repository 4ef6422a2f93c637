"""Arithmetic and exact linear algebra over prime fields F_b.

Elements are plain residues ``0 <= v < b``.  Matrices are immutable,
row-major tuples of residues at a declared finite precision; entries outside
the stored block are zero, which is how conceptually infinite generating
matrices with finitely many nonzero entries per column are represented.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

__all__ = [
    "FieldError",
    "FieldElement",
    "FieldMatrix",
    "is_prime",
    "check_prime",
    "fe_add",
    "fe_sub",
    "fe_mul",
    "fe_inv",
    "mat_vec",
    "rank",
    "submatrix_upper_left",
    "parse_matrix",
    "parse_matrices",
    "row_rank",
    "format_matrix",
]

MAX_BASE = 1 << 16


class FieldError(ValueError):
    """Raised for invalid field operations (base mismatch, zero inverse...)."""


@lru_cache(maxsize=256)
def is_prime(b: int) -> bool:
    if b < 2:
        return False
    if b < 4:
        return True
    if b % 2 == 0:
        return False
    k = 3
    while k * k <= b:
        if b % k == 0:
            return False
        k += 2
    return True


def check_prime(b: int) -> int:
    if not isinstance(b, int) or isinstance(b, bool):
        raise FieldError(f"base must be an integer, got {b!r}")
    if not 2 <= b < MAX_BASE or not is_prime(b):
        raise FieldError(f"base must be a prime below 2^16, got {b}")
    return b


@dataclass(frozen=True)
class FieldElement:
    value: int
    base: int

    def __post_init__(self):
        check_prime(self.base)
        if not 0 <= self.value < self.base:
            raise FieldError(f"{self.value} is not a residue mod {self.base}")

    @classmethod
    def of(cls, value: int, base: int) -> "FieldElement":
        return cls(value % base, base)

    def _coerce(self, other) -> "FieldElement":
        if isinstance(other, int):
            return FieldElement.of(other, self.base)
        if other.base != self.base:
            raise FieldError(f"base mismatch: {self.base} vs {other.base}")
        return other

    def __add__(self, other):
        return fe_add(self, self._coerce(other))

    def __sub__(self, other):
        return fe_sub(self, self._coerce(other))

    def __mul__(self, other):
        return fe_mul(self, self._coerce(other))

    __radd__ = __add__
    __rmul__ = __mul__

    def __neg__(self):
        return FieldElement((-self.value) % self.base, self.base)

    def inv(self) -> "FieldElement":
        return fe_inv(self)

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"{self.value} (mod {self.base})"


def _same_base(a: FieldElement, c: FieldElement) -> int:
    if a.base != c.base:
        raise FieldError(f"base mismatch: {a.base} vs {c.base}")
    return a.base


def fe_add(a: FieldElement, c: FieldElement) -> FieldElement:
    b = _same_base(a, c)
    return FieldElement((a.value + c.value) % b, b)


def fe_sub(a: FieldElement, c: FieldElement) -> FieldElement:
    b = _same_base(a, c)
    return FieldElement((a.value - c.value) % b, b)


def fe_mul(a: FieldElement, c: FieldElement) -> FieldElement:
    b = _same_base(a, c)
    return FieldElement((a.value * c.value) % b, b)


def fe_inv(a: FieldElement) -> FieldElement:
    if a.value == 0:
        raise ZeroDivisionError(f"0 has no inverse in F_{a.base}")
    return FieldElement(pow(a.value, -1, a.base), a.base)


@dataclass(frozen=True)
class FieldMatrix:
    """Matrix over F_b stored as ``rows`` tuples of length ``cols``.

    Reads outside the stored block return 0.
    """

    base: int
    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        check_prime(self.base)
        if self.rows < 0 or self.cols < 0:
            raise FieldError("matrix dimensions must be nonnegative")
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise FieldError(f"entries do not match declared shape {self.rows}x{self.cols}")
        for r in self.entries:
            for v in r:
                if not 0 <= v < self.base:
                    raise FieldError(f"entry {v} is not a residue mod {self.base}")

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[int]], base: int) -> "FieldMatrix":
        data = tuple(tuple(int(v) % base for v in r) for r in rows)
        ncols = len(data[0]) if data else 0
        return cls(base, len(data), ncols, data)

    @classmethod
    def zeros(cls, rows: int, cols: int, base: int) -> "FieldMatrix":
        return cls(base, rows, cols, tuple((0,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, m: int, base: int) -> "FieldMatrix":
        return cls(base, m, m, tuple(tuple(int(i == k) for k in range(m)) for i in range(m)))

    def __getitem__(self, key):
        i, k = key
        if 0 <= i < self.rows and 0 <= k < self.cols:
            return self.entries[i][k]
        if i < 0 or k < 0:
            raise IndexError(key)
        return 0

    def row(self, i: int, length: int | None = None) -> tuple:
        length = self.cols if length is None else length
        if i >= self.rows:
            return (0,) * length
        r = self.entries[i]
        if length <= self.cols:
            return r[:length]
        return r + (0,) * (length - self.cols)

    def transpose(self) -> "FieldMatrix":
        return FieldMatrix(self.base, self.cols, self.rows, tuple(zip(*self.entries)) if self.rows else ())

    def resized(self, rows: int, cols: int) -> "FieldMatrix":
        return FieldMatrix(self.base, rows, cols, tuple(self.row(i, cols) for i in range(rows)))

    def __matmul__(self, other: "FieldMatrix") -> "FieldMatrix":
        if self.base != other.base:
            raise FieldError(f"base mismatch: {self.base} vs {other.base}")
        b = self.base
        cols = list(zip(*other.entries)) if other.rows else [()] * other.cols
        out = []
        for r in self.entries:
            rr = r[: other.rows] + (0,) * max(0, other.rows - self.cols)
            out.append(tuple(sum(x * y for x, y in zip(rr, c)) % b for c in cols))
        return FieldMatrix(b, self.rows, other.cols, tuple(out))

    def __str__(self):
        return format_matrix(self)


def mat_vec(M: FieldMatrix, v: Sequence[int], base: int | None = None) -> tuple:
    """Exact product ``M v`` over F_b; ``v`` is zero-padded to ``M.cols``."""
    if base is not None and base != M.base:
        raise FieldError(f"base mismatch: {M.base} vs {base}")
    if len(v) > M.cols and any(v[M.cols:]):
        raise FieldError(f"vector of length {len(v)} does not fit {M.cols} columns")
    b = M.base
    n = min(len(v), M.cols)
    return tuple(sum(r[k] * v[k] for k in range(n)) % b for r in M.entries)


def row_rank(rows: Sequence[Sequence[int]], base: int) -> int:
    """Rank of a list of row vectors over F_base by Gaussian elimination."""
    work = [list(r) for r in rows if any(r)]
    if not work:
        return 0
    ncols = len(work[0])
    rank = 0
    for col in range(ncols):
        pivot = None
        for i in range(rank, len(work)):
            if work[i][col]:
                pivot = i
                break
        if pivot is None:
            continue
        work[rank], work[pivot] = work[pivot], work[rank]
        prow = work[rank]
        inv = pow(prow[col], -1, base)
        if inv != 1:
            prow = [(x * inv) % base for x in prow]
            work[rank] = prow
        for i in range(rank + 1, len(work)):
            f = work[i][col]
            if f:
                ri = work[i]
                work[i] = [(x - f * y) % base for x, y in zip(ri, prow)]
        rank += 1
        if rank == len(work):
            break
    return rank


def rank(M: FieldMatrix) -> int:
    return row_rank(M.entries, M.base)


def submatrix_upper_left(M: FieldMatrix, m: int) -> FieldMatrix:
    """The upper-left m x m block, zero-filled past the stored precision."""
    if m < 1:
        raise FieldError("m must be at least 1")
    return M.resized(m, m)


def format_matrix(M: FieldMatrix) -> str:
    lines = [f"base={M.base} rows={M.rows} cols={M.cols}"]
    lines.extend(" ".join(str(v) for v in r) for r in M.entries)
    return "\n".join(lines) + "\n"


def parse_matrix(text: str) -> FieldMatrix:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise FieldError("empty matrix text")
    try:
        header = dict(tok.split("=", 1) for tok in lines[0].split())
        base, nrows, ncols = int(header["base"]), int(header["rows"]), int(header["cols"])
    except (KeyError, ValueError) as exc:
        raise FieldError(f"bad matrix header: {lines[0]!r}") from exc
    body = lines[1:]
    if len(body) != nrows:
        raise FieldError(f"expected {nrows} rows, found {len(body)}")
    data = []
    for ln in body:
        vals = tuple(int(tok) for tok in ln.split())
        if len(vals) != ncols:
            raise FieldError(f"expected {ncols} columns in row {ln!r}")
        data.append(vals)
    return FieldMatrix(base, nrows, ncols, tuple(data))


def parse_matrices(text: str) -> list[FieldMatrix]:
    """Split a file holding several matrices, each starting at a header line."""
    blocks: list[list[str]] = []
    for ln in text.splitlines():
        if ln.strip().startswith("base="):
            blocks.append([ln])
        elif ln.strip():
            if not blocks:
                raise FieldError("matrix data before first header")
            blocks[-1].append(ln)
    return [parse_matrix("\n".join(b)) for b in blocks]
