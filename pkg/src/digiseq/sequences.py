"""Digital sequences over F_b from generating matrices, plus named presets.

A :class:`GeneratorSet` stores one ``rows x cols`` truncation per coordinate:
``cols`` is how many base-b digits of the index can be consumed and ``rows``
is how many output digits are produced.  Both are explicit; asking for an
index that needs more than ``cols`` digits raises instead of wrapping.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

import numpy as np

from .finite_field import FieldError, FieldMatrix, check_prime, mat_vec
from .laurent import LaurentSeries, PrecisionError
from .pointset import DigitalPoint, PointSet

__all__ = [
    "PRESETS",
    "GeneratorSet",
    "PrecisionError",
    "digits",
    "generate",
    "generate_points",
    "radical_inverse",
    "preset",
    "faure_matrix",
    "halton",
    "halton_points",
    "kronecker_matrices",
    "kronecker_direct",
    "interlace2",
    "deinterlace2",
]

PRESETS = ("vdc", "identity", "umatrix", "faure", "random")


def digits(n: int, b: int) -> tuple:
    """Little-endian base-b digits of n, without trailing zeros."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    out = []
    while n:
        n, r = divmod(n, b)
        out.append(r)
    return tuple(out)


@dataclass(frozen=True)
class GeneratorSet:
    matrices: tuple

    def __post_init__(self):
        if not self.matrices:
            raise FieldError("need at least one generating matrix")
        C0 = self.matrices[0]
        if C0.rows < 1 or C0.cols < 1:
            raise FieldError("generating matrices must be at least 1x1")
        for C in self.matrices:
            if C.base != C0.base:
                raise FieldError("generating matrices must share the base")
            if (C.rows, C.cols) != (C0.rows, C0.cols):
                raise FieldError("generating matrices must share the shape")

    @classmethod
    def of(cls, matrices: Sequence[FieldMatrix]) -> "GeneratorSet":
        return cls(tuple(matrices))

    @property
    def base(self) -> int:
        return self.matrices[0].base

    @property
    def dim(self) -> int:
        return len(self.matrices)

    @property
    def precision(self) -> int:
        """Number of output digits per coordinate."""
        return self.matrices[0].rows

    @property
    def index_digits(self) -> int:
        """Number of index digits the stored columns can consume."""
        return self.matrices[0].cols

    @property
    def capacity(self) -> int:
        return self.base**self.index_digits

    def __iter__(self):
        return iter(self.matrices)

    def __len__(self):
        return len(self.matrices)


def _check_index(G: GeneratorSet, n: int):
    if n < 0:
        raise ValueError("index must be nonnegative")
    if n >= G.capacity:
        raise PrecisionError(
            f"index {n} needs more than {G.index_digits} base-{G.base} digits; "
            "increase the precision"
        )


def generate(G: GeneratorSet, n: int) -> DigitalPoint:
    """The n-th point: coordinate j has digits ``C_j * digits(n)``."""
    _check_index(G, n)
    b, m = G.base, G.precision
    dv = digits(n, b)
    nums = []
    for C in G.matrices:
        acc = 0
        for y in mat_vec(C, dv):
            acc = acc * b + y
        nums.append(acc)
    return DigitalPoint(tuple(nums), (b**m,) * G.dim)


def generate_points(G: GeneratorSet, N: int, start: int = 0, tag: str = "") -> PointSet:
    """Points ``start, ..., start + N - 1`` as an exact :class:`PointSet`."""
    if N < 1:
        raise ValueError("N must be positive")
    _check_index(G, start + N - 1)
    b, m, L = G.base, G.precision, G.index_digits
    idx = np.arange(start, start + N, dtype=np.int64) if b**L < 2**62 else None
    if idx is not None and b**m < 2**62 and (b - 1) ** 2 * L < 2**62:
        # digit matrix D[n, l] = l-th digit of index n
        D = np.empty((N, L), dtype=np.int64)
        rest = idx.copy()
        for col in range(L):
            D[:, col] = rest % b
            rest //= b
        weights = np.array([b ** (m - 1 - k) for k in range(m)], dtype=np.int64)
        cols = []
        for C in G.matrices:
            A = np.array(C.entries, dtype=np.int64).reshape(m, L)
            Y = (D @ A.T) % b
            cols.append(Y @ weights)
        nums = tuple(zip(*(c.tolist() for c in cols)))
    else:
        nums = tuple(generate(G, n).numerators for n in range(start, start + N))
    return PointSet(nums, (b**m,) * G.dim, b, m, tag)


def radical_inverse(n: int, b: int, m: int) -> int:
    """Numerator over ``b^m`` of the base-b radical inverse of ``n < b^m``."""
    if n >= b**m:
        raise PrecisionError(f"index {n} needs more than {m} base-{b} digits")
    acc = 0
    for _ in range(m):
        n, r = divmod(n, b)
        acc = acc * b + r
    return acc


def faure_matrix(j: int, b: int, m: int) -> FieldMatrix:
    """``P^{j-1}`` truncated to m x m; entry (k, l) = C(l-1, k-1) (j-1)^(l-k)."""
    c = j - 1
    rows = []
    for k in range(1, m + 1):
        row = []
        for l in range(1, m + 1):
            if l < k:
                row.append(0)
            else:
                # 0**0 == 1 keeps the diagonal for j = 1
                row.append(math.comb(l - 1, k - 1) * pow(c, l - k, b) % b)
        rows.append(row)
    return FieldMatrix.from_rows(rows, b)


def _umatrix(b: int, m: int) -> FieldMatrix:
    return FieldMatrix.from_rows([[int(l >= k) for l in range(m)] for k in range(m)], b)


def preset(name: str, s: int, b: int, m: int, seed: int | None = None) -> GeneratorSet:
    """Named generator sets: vdc | identity | umatrix | faure | random.

    ``vdc`` and ``identity`` both give identity matrices in every coordinate.
    ``random`` draws i.i.d. uniform digits for each m x m truncation from a
    generator seeded with ``seed``.
    """
    check_prime(b)
    if s < 1 or m < 1:
        raise ValueError("dimension and precision must be positive")
    name = name.lower()
    if name.startswith("random(") and name.endswith(")"):
        seed = int(name[7:-1])
        name = "random"
    if name in ("vdc", "identity"):
        mats = [FieldMatrix.identity(m, b)] * s
    elif name == "umatrix":
        mats = [_umatrix(b, m)] * s
    elif name == "faure":
        if b < s:
            raise ValueError(f"Faure matrices need a prime base b >= s (got b={b}, s={s})")
        mats = [faure_matrix(j, b, m) for j in range(1, s + 1)]
    elif name == "random":
        rng = np.random.default_rng(seed)
        mats = [FieldMatrix.from_rows(rng.integers(0, b, size=(m, m)).tolist(), b) for _ in range(s)]
    else:
        raise ValueError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}")
    return GeneratorSet(tuple(mats))


def _check_coprime(bases: Sequence[int]):
    if not bases:
        raise ValueError("need at least one base")
    for b in bases:
        if b < 2:
            raise ValueError(f"Halton bases must be >= 2, got {b}")
    for a, c in combinations(bases, 2):
        if math.gcd(a, c) != 1:
            raise ValueError(f"Halton bases {a} and {c} are not coprime")


def halton(n: int, bases: Sequence[int], m: int) -> DigitalPoint:
    """Radical inverses of n in each base, m digits each."""
    _check_coprime(bases)
    return DigitalPoint(
        tuple(radical_inverse(n, b, m) for b in bases),
        tuple(b**m for b in bases),
    )


def halton_points(N: int, bases: Sequence[int], m: int) -> PointSet:
    _check_coprime(bases)
    bases = tuple(bases)
    nums = tuple(tuple(radical_inverse(n, b, m) for b in bases) for n in range(N))
    return PointSet(nums, tuple(b**m for b in bases), bases, m, f"halton{list(bases)}")


def _hankel(f: LaurentSeries, m: int) -> FieldMatrix:
    if f.last < 2 * m - 1:
        raise PrecisionError(
            f"Laurent series known up to t^-{f.last}; a {m}x{m} Hankel matrix needs t^-{2 * m - 1}"
        )
    return FieldMatrix.from_rows(
        [[f.coefficient(k + l - 1) for l in range(1, m + 1)] for k in range(1, m + 1)], f.base
    )


def kronecker_matrices(f: Sequence[LaurentSeries], m: int) -> GeneratorSet:
    """Hankel generating matrices: ``C_j(k, l)`` is the coefficient of ``t^{-(k+l-1)}`` in f_j."""
    if not f:
        raise ValueError("need at least one Laurent series")
    b = f[0].base
    if any(g.base != b for g in f):
        raise FieldError("Laurent series must share the base")
    return GeneratorSet(tuple(_hankel(g, m) for g in f))


def kronecker_direct(f: Sequence[LaurentSeries], n: int, m: int) -> DigitalPoint:
    """``{n f}`` evaluated at ``t = b`` to m digits, via series multiplication."""
    b = f[0].base
    if n >= b**m:
        raise PrecisionError(f"index {n} needs more than {m} base-{b} digits")
    dn = digits(n, b)
    return DigitalPoint(
        tuple(g.mul_poly(dn).evaluate_digits(m) for g in f),
        (b**m,) * len(f),
    )


def interlace2(C: Sequence[FieldMatrix], m: int) -> list:
    """Order-2 interlacing of 2s matrices into s matrices with 2m rows.

    Row ``2u + v`` of E_j (1-based) is row ``u + 1`` of ``C_{2(j-1)+v}``.
    """
    if len(C) % 2:
        raise ValueError(f"interlacing needs an even number of matrices, got {len(C)}")
    if not C:
        raise ValueError("need at least two matrices")
    b, cols = C[0].base, C[0].cols
    for M in C:
        if M.base != b:
            raise FieldError("matrices must share the base")
        if M.rows < m or M.cols != cols:
            raise ValueError(f"each matrix needs at least {m} rows and {cols} columns")
    out = []
    for j in range(1, len(C) // 2 + 1):
        rows = []
        for u in range(m):
            for v in (1, 2):
                rows.append(C[2 * (j - 1) + v - 1].entries[u])
        out.append(FieldMatrix(b, 2 * m, cols, tuple(rows)))
    return out


def deinterlace2(E: Sequence[FieldMatrix]) -> list:
    """Inverse row map of :func:`interlace2`: s matrices back to 2s."""
    out = []
    for M in E:
        if M.rows % 2:
            raise ValueError("interlaced matrices have an even row count")
        out.append(FieldMatrix(M.base, M.rows // 2, M.cols, M.entries[0::2]))
        out.append(FieldMatrix(M.base, M.rows // 2, M.cols, M.entries[1::2]))
    return out
