"""Structural certificates for digital sequences.

* t-values from the rank condition on row prefixes of ``C_j(m)``;
* (t, m, s)-net verification by counting points in elementary intervals;
* d-admissibility of a finite prefix.

All comparisons are exact integer arithmetic.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterator

from .finite_field import row_rank
from .laurent import PrecisionError
from .pointset import PointSet
from .sequences import GeneratorSet, generate_points

__all__ = [
    "TValueReport",
    "AdmissibilityReport",
    "NetCheck",
    "compositions",
    "t_value_at_m",
    "exact_t",
    "verify_net",
    "min_net_t",
    "block_net_scan",
    "d_admissibility",
    "badic_norm_exponent_int",
    "badic_norm_exponent_frac",
]

VECTOR_NORM_NOTE = (
    "vector b-adic norm taken as the product of coordinate norms; "
    "other conventions change d"
)


def compositions(total: int, parts: int) -> Iterator[tuple]:
    """Weak compositions of ``total`` into ``parts`` nonnegative parts, colex order.

    Colex: the last part varies slowest, so ``(total, 0, ..., 0)`` comes first.
    """
    if parts == 1:
        yield (total,)
        return
    for last in range(total + 1):
        for head in compositions(total - last, parts - 1):
            yield head + (last,)


def _prefix_rank_ok(rows_by_coord: list, d: tuple, base: int) -> bool:
    stacked = [r for rows, dj in zip(rows_by_coord, d) for r in rows[:dj]]
    return row_rank(stacked, base) == len(stacked)


def t_value_at_m(G: GeneratorSet, m: int) -> tuple:
    """Smallest t in [0, m] satisfying the rank condition at this m.

    Returns ``(t, witness)`` where ``witness`` is a composition
    ``(d_1, ..., d_s)`` of ``m - t + 1`` whose row prefixes are dependent
    (the reason t - 1 fails), or ``None`` when t = 0.
    """
    if m < 1:
        raise ValueError("m must be positive")
    if m > G.precision or m > G.index_digits:
        raise PrecisionError(f"m={m} exceeds the stored precision {min(G.precision, G.index_digits)}")
    b = G.base
    rows_by_coord = [[C.row(k, m) for k in range(m)] for C in G.matrices]
    witness = None
    for t in range(m + 1):
        failed = None
        for d in compositions(m - t, G.dim):
            if not _prefix_rank_ok(rows_by_coord, d, b):
                failed = d
                break
        if failed is None:
            return t, witness
        witness = failed
    raise AssertionError("t = m always satisfies the condition")


@dataclass
class TValueReport:
    base: int
    dim: int
    m_max: int
    rows: list = field(default_factory=list)  # (m, t_m, witness)

    @property
    def t_star(self) -> int:
        return max(t for _, t, _ in self.rows)

    def records(self) -> list:
        return [{"m": m, "t": t, "witness": list(w) if w else None} for m, t, w in self.rows]

    def to_dict(self) -> dict:
        return {
            "base": self.base,
            "dim": self.dim,
            "m_max": self.m_max,
            "t_star": self.t_star,
            "records": self.records(),
            "note": f"certified only for m <= {self.m_max}; larger m are not checked",
        }


def exact_t(G: GeneratorSet, m_max: int) -> TValueReport:
    report = TValueReport(G.base, G.dim, m_max)
    for m in range(1, m_max + 1):
        t, w = t_value_at_m(G, m)
        report.rows.append((m, t, w))
    return report


@dataclass
class NetCheck:
    ok: bool
    t: int
    m: int
    violation: dict | None = None

    def __bool__(self):
        return self.ok

    def to_dict(self) -> dict:
        return {"ok": self.ok, "t": self.t, "m": self.m, "violation": self.violation}


def _digital_base(P: PointSet) -> int:
    b = P.base
    if not isinstance(b, int):
        raise ValueError("net verification needs a single common base")
    return b


def verify_net(P: PointSet, t: int, m: int, base: int | None = None) -> NetCheck:
    """Check that every elementary interval of volume ``b^(t-m)`` holds ``b^t`` points."""
    b = base if base is not None else _digital_base(P)
    if P.N != b**m:
        raise ValueError(f"a (t,{m},s)-net in base {b} has {b**m} points, got {P.N}")
    if not 0 <= t <= m:
        raise ValueError("need 0 <= t <= m")
    s = P.dim
    want = b**t
    for d in compositions(m - t, s):
        # cell index a_j = floor(x_j b^{d_j}) = floor(num_j b^{d_j} / den_j)
        keys = Counter(
            tuple((a * b**dj) // den for a, dj, den in zip(row, d, P.denominators)) for row in P.numerators
        )
        ncells = b ** (m - t)
        if len(keys) != ncells or any(c != want for c in keys.values()):
            for cell, c in sorted(keys.items()):
                if c != want:
                    break
            else:
                # some cell is empty; report the first one in lexicographic order
                cell = next(
                    cell for cell in _cells(d, b) if cell not in keys
                )
                c = 0
            return NetCheck(False, t, m, {"shape": list(d), "cell": list(cell), "count": c, "expected": want})
    return NetCheck(True, t, m)


def _cells(d: tuple, b: int) -> Iterator[tuple]:
    if not d:
        yield ()
        return
    for head in _cells(d[:-1], b):
        for a in range(b ** d[-1]):
            yield head + (a,)


def min_net_t(P: PointSet, m: int, base: int | None = None) -> int:
    """Smallest t for which :func:`verify_net` accepts P (counting criterion)."""
    for t in range(m + 1):
        if verify_net(P, t, m, base):
            return t
    raise AssertionError("t = m always holds")


def block_net_scan(G: GeneratorSet, m: int, k_max: int, t: int | None = None) -> list:
    """Net checks of the blocks ``x_{k b^m}, ..., x_{(k+1) b^m - 1}`` for k <= k_max.

    ``t`` defaults to the exact t-value at this m.
    """
    b = G.base
    if (k_max + 1) * b**m > G.capacity:
        raise PrecisionError(f"blocks up to k={k_max} need indices beyond {G.capacity - 1}")
    if t is None:
        t = exact_t(G, m).t_star
    out = []
    for k in range(k_max + 1):
        block = generate_points(G, b**m, start=k * b**m)
        out.append(verify_net(block, t, m))
    return out


def badic_norm_exponent_int(n: int, k: int, b: int) -> int | None:
    """e with ``||n (-) k||_b = b^e``: position of the top nonzero digit of the digitwise difference."""
    e, top = 0, None
    while n or k:
        n, dn = divmod(n, b)
        k, dk = divmod(k, b)
        if (dn - dk) % b:
            top = e
        e += 1
    return top


def badic_norm_exponent_frac(a: int, c: int, b: int, m: int) -> int | None:
    """e with ``||x (-) y||_b = b^e`` for ``x = a/b^m``, ``y = c/b^m``; None if equal."""
    for pos in range(1, m + 1):
        da = (a // b ** (m - pos)) % b
        dc = (c // b ** (m - pos)) % b
        if da != dc:
            return -pos
    return None


@dataclass
class AdmissibilityReport:
    N: int
    base: int
    admissible: bool
    d_empirical: int | None
    infimum_exponent: int | None  # infimum is base ** infimum_exponent; None means 0 (coincident pair) or no pairs
    argmin: tuple | None
    note: str = VECTOR_NORM_NOTE

    @property
    def infimum(self):
        from fractions import Fraction

        if self.infimum_exponent is None:
            return None if self.admissible else Fraction(0)
        return Fraction(self.base) ** self.infimum_exponent

    def to_dict(self) -> dict:
        return {
            "N": self.N,
            "base": self.base,
            "admissible": self.admissible,
            "d": self.d_empirical,
            "infimum": "inf" if self.infimum is None else str(self.infimum),
            "argmin": list(self.argmin) if self.argmin else None,
            "note": self.note,
        }


def d_admissibility(P: PointSet, N: int | None = None) -> AdmissibilityReport:
    """Smallest integer d with ``inf_{0<=k<n<N} ||n-k||_b ||x_n - x_k||_b >= b^-d``."""
    b = _digital_base(P)
    N = P.N if N is None else N
    if not 1 <= N <= P.N:
        raise ValueError(f"N must lie in 1..{P.N}")
    m = P.precision
    dens = P.denominators
    if m is None or any(d != b**m for d in dens):
        raise ValueError("admissibility needs digital coordinates over b^m")
    best, arg = None, None
    zero_pair = None
    for n in range(1, N):
        xn = P.numerators[n]
        for k in range(n):
            e = badic_norm_exponent_int(n, k, b)
            xk = P.numerators[k]
            for a, c in zip(xn, xk):
                ej = badic_norm_exponent_frac(a, c, b, m)
                if ej is None:
                    e = None
                    break
                e += ej
            if e is None:
                zero_pair = (n, k)
                break
            if best is None or e < best:
                best, arg = e, (n, k)
        if zero_pair:
            break
    if zero_pair:
        return AdmissibilityReport(N, b, False, None, None, zero_pair)
    if best is None:
        # N == 1: no pairs, infimum over an empty set
        return AdmissibilityReport(N, b, True, None, None, None, VECTOR_NORM_NOTE + "; no pairs for N=1")
    return AdmissibilityReport(N, b, True, -best, best, arg)
