"""Norms of the local discrepancy function of a finite point set.

``Delta(t) = #{n : x_n in [0, t)} / N - t_1 ... t_s``

* :func:`star_disc_exact` - the sup norm, exactly, by enumerating the
  critical grid with open and closed box counts;
* :func:`l2_warnock` - the L2 norm via Warnock's closed form;
* :func:`lp_quadrature` - any L_p norm, integrating |Delta|^p cell by cell
  (the count is constant on each cell of the coordinate grid), with a Monte
  Carlo fallback for large s;
* :func:`weighted_star` - the weighted star discrepancy via projections.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .pointset import PointSet

__all__ = [
    "ResourceError",
    "LocalDiscrepancyEval",
    "StarDiscrepancy",
    "LpResult",
    "WeightSequence",
    "WeightedStar",
    "local_disc",
    "star_disc_exact",
    "l2_warnock",
    "l2_warnock_prefixes",
    "lp_quadrature",
    "weighted_star",
    "sum_of_digits",
    "bound_helpers",
    "bejian_faure_bound",
]

MAX_CORNERS = 10**8
MAX_CELLS = 5 * 10**6
_INT_SAFE = 2**62
# float objective error is below (s + 2) * 2^-53; anything within this of the
# float maximum is re-evaluated exactly
_CERT_TOL = 1e-12


class ResourceError(RuntimeError):
    """The exact computation would enumerate too many grid corners or cells."""


@dataclass(frozen=True)
class LocalDiscrepancyEval:
    anchor: tuple
    count: int
    N: int
    value: Fraction

    def __float__(self):
        return float(self.value)


def local_disc(P: PointSet, t: Sequence) -> LocalDiscrepancyEval:
    """Exact ``Delta(t)``; ``t`` may hold ints, Fractions, or floats."""
    if len(t) != P.dim:
        raise ValueError(f"anchor has dimension {len(t)}, point set has {P.dim}")
    t = tuple(Fraction(v) for v in t)
    if any(not 0 <= v <= 1 for v in t):
        raise ValueError("anchor must lie in [0, 1]^s")
    # x_j < t_j  <=>  a_j < t_j * D_j
    count = sum(
        all(a < tj * d for a, tj, d in zip(row, t, P.denominators)) for row in P.numerators
    )
    vol = math.prod(t, start=Fraction(1))
    return LocalDiscrepancyEval(t, count, P.N, Fraction(count, P.N) - vol)


@dataclass(frozen=True)
class StarDiscrepancy:
    value: Fraction
    corner: tuple
    side: str  # "open": vol - A_open/N attains the sup; "closed": A_closed/N - vol
    count: int
    N: int
    corners_checked: int

    def __float__(self):
        return float(self.value)

    def to_dict(self) -> dict:
        return {
            "norm": "star",
            "value": float(self.value),
            "exact_fraction": str(self.value),
            "certificate": {
                "corner": [str(c) for c in self.corner],
                "side": self.side,
                "count": self.count,
                "N": self.N,
                "corners_checked": self.corners_checked,
                "method": "critical-grid enumeration with open/closed box counts, exact rationals",
            },
        }


def _star_1d(P: PointSet) -> StarDiscrepancy:
    N, D = P.N, P.denominators[0]
    nums = [row[0] for row in P.numerators]
    use_int64 = (N + 1) * D < _INT_SAFE
    dtype = np.int64 if use_int64 else object
    xs = np.sort(np.array(nums, dtype=dtype))
    grid = np.array(sorted(set(nums) | {D}), dtype=dtype)
    a_open = np.searchsorted(xs, grid, side="left")
    a_closed = np.searchsorted(xs, grid, side="right")
    if not use_int64:
        a_open = a_open.astype(object)
        a_closed = a_closed.astype(object)
    # scaled by N * D: vol - A/N -> N*y - A*D
    open_gap = N * grid - a_open * D
    closed_gap = a_closed * D - N * grid
    io, ic = int(np.argmax(open_gap)), int(np.argmax(closed_gap))
    if open_gap[io] >= closed_gap[ic]:
        i, side, best, count = io, "open", open_gap[io], a_open[io]
    else:
        i, side, best, count = ic, "closed", closed_gap[ic], a_closed[ic]
    return StarDiscrepancy(
        Fraction(int(best), N * D), (Fraction(int(grid[i]), D),), side, int(count), N, len(grid)
    )


def _grids(P: PointSet):
    grids, index = [], []
    for j, D in enumerate(P.denominators):
        vals = sorted({row[j] for row in P.numerators} | {D})
        pos = {v: k for k, v in enumerate(vals)}
        grids.append(vals)
        index.append(np.array([pos[row[j]] for row in P.numerators], dtype=np.int64))
    return grids, index


def star_disc_exact(P: PointSet, max_corners: int = MAX_CORNERS) -> StarDiscrepancy:
    """Exact star discrepancy ``sup_t |Delta(t)|``.

    The sup over half-open anchored boxes is attained in the limit at grid
    corners y (coordinates drawn from the point coordinates and 1), either as
    ``vol(y) - #[0, y)/N`` or as ``#[0, y]/N - vol(y)``.  Counts come from a
    cumulative histogram; corners are screened in floating point and every
    corner within ``1e-12`` of the float maximum is re-evaluated with exact
    rationals, so the returned value is exact.
    """
    if P.N < 1:
        raise ValueError("empty point set")
    if P.dim == 1:
        return _star_1d(P)
    N, s = P.N, P.dim
    grids, index = _grids(P)
    shape = tuple(len(g) for g in grids)
    ncorners = math.prod(shape)
    if ncorners > max_corners:
        raise ResourceError(
            f"{ncorners} grid corners exceed the limit {max_corners}; "
            "use lp_quadrature(..., mc=...) or a star-discrepancy estimator instead"
        )
    fgrids = [np.array([v / D for v in g]) for g, D in zip(grids, P.denominators)]
    rest_shape = shape[1:]
    rest_vol = fgrids[1]
    for g in fgrids[2:]:
        rest_vol = np.multiply.outer(rest_vol, g)
    rest_size = math.prod(rest_shape)
    block = max(1, min(shape[0], 4_000_000 // max(rest_size, 1)))

    order = np.argsort(index[0], kind="stable")
    sorted_first = index[0][order]
    carry = np.zeros(rest_shape, dtype=np.int64)  # A_closed at previous first-axis index
    gmax = -np.inf
    candidates = []  # (first_index, rest_flat_index, side)
    for start in range(0, shape[0], block):
        stop = min(start + block, shape[0])
        lo, hi = np.searchsorted(sorted_first, [start, stop])
        H = np.zeros((stop - start,) + rest_shape, dtype=np.int64)
        sel = order[lo:hi]
        np.add.at(H, (index[0][sel] - start,) + tuple(ix[sel] for ix in index[1:]), 1)
        for ax in range(1, s):
            H = np.cumsum(H, axis=ax)
        H = np.cumsum(H, axis=0) + carry
        closed = H
        prev = np.concatenate([carry[None], closed[:-1]], axis=0)
        # open count at (i, g') is closed count at (i-1, g'-1)
        opened = np.zeros_like(prev)
        src = (slice(None),) + (slice(None, -1),) * (s - 1)
        dst = (slice(None),) + (slice(1, None),) * (s - 1)
        opened[dst] = prev[src]
        if start == 0:
            opened[0] = 0
        vol = np.multiply.outer(fgrids[0][start:stop], rest_vol)
        f_open = vol - opened / N
        f_closed = closed / N - vol
        carry = closed[-1].copy()
        bmax = max(f_open.max(), f_closed.max())
        if bmax > gmax:
            gmax = bmax
            candidates = [c for c in candidates if c[3] >= gmax - _CERT_TOL]
        for side, F, A in (("open", f_open, opened), ("closed", f_closed, closed)):
            hit = np.nonzero(F.reshape(len(F), -1) >= gmax - _CERT_TOL)
            for i, r in zip(*hit):
                candidates.append((start + int(i), int(r), side, float(F.reshape(len(F), -1)[i, r]),
                                   int(A.reshape(len(A), -1)[i, r])))
    best = None
    denom = math.prod(P.denominators)
    for i0, r, side, _, count in candidates:
        if _ < gmax - _CERT_TOL:
            continue
        idx = (i0,) + (np.unravel_index(r, rest_shape) if rest_shape else ())
        nums = [grids[j][int(idx[j])] for j in range(s)]
        vol = Fraction(math.prod(nums), denom)
        val = vol - Fraction(count, N) if side == "open" else Fraction(count, N) - vol
        if best is None or val > best[0]:
            corner = tuple(Fraction(a, D) for a, D in zip(nums, P.denominators))
            best = (val, corner, side, count)
    return StarDiscrepancy(best[0], best[1], best[2], best[3], N, ncorners)


def l2_warnock(P: PointSet, exact: bool = False):
    """L2 discrepancy by Warnock's formula, O(N^2 s).

    ``L2^2 = 3^-s - (2/N) sum_n prod_j (1 - x_nj^2)/2
             + N^-2 sum_{n,n'} prod_j (1 - max(x_nj, x_n'j))``
    With ``exact=True`` the square is accumulated in rationals and the
    returned value is ``(L2^2 as Fraction, L2 as float)``.
    """
    N, s = P.N, P.dim
    if exact:
        X = P.fractions()
        t1 = sum(math.prod(((1 - x * x) / 2 for x in row), start=Fraction(1)) for row in X)
        t2 = sum(
            math.prod((1 - max(x, y) for x, y in zip(r, q)), start=Fraction(1)) for r in X for q in X
        )
        sq = Fraction(1, 3**s) - 2 * t1 / N + t2 / (N * N)
        return sq, math.sqrt(sq)
    X = P.as_array()
    t1 = np.prod((1.0 - X**2) / 2.0, axis=1).sum()
    t2 = 0.0
    chunk = max(1, 2_000_000 // max(N * s, 1))
    for a in range(0, N, chunk):
        Y = X[a : a + chunk]
        t2 += np.prod(1.0 - np.maximum(Y[:, None, :], X[None, :, :]), axis=2).sum()
    sq = 3.0**-s - 2.0 * t1 / N + t2 / N**2
    return math.sqrt(max(sq, 0.0))


def l2_warnock_prefixes(P: PointSet) -> np.ndarray:
    """L2 discrepancy of every prefix ``x_0..x_{N-1}``, N = 1..len(P), in O(N^2 s) total."""
    X = P.as_array()
    Ntot, s = X.shape
    single = np.prod((1.0 - X**2) / 2.0, axis=1)
    out = np.empty(Ntot)
    t1 = 0.0
    t2 = 0.0
    for n in range(Ntot):
        t1 += single[n]
        if n:
            cross = np.prod(1.0 - np.maximum(X[:n], X[n]), axis=1).sum()
        else:
            cross = 0.0
        t2 += 2.0 * cross + np.prod(1.0 - X[n])
        N = n + 1
        out[n] = math.sqrt(max(3.0**-s - 2.0 * t1 / N + t2 / N**2, 0.0))
    return out


@dataclass
class LpResult:
    p: float
    value: float
    method: str
    order: int | None = None
    stderr: float | None = None
    convergence: list = field(default_factory=list)  # (order, value) pairs
    exact_fraction: str | None = None

    def __float__(self):
        return self.value

    def to_dict(self) -> dict:
        cert = {"method": self.method}
        if self.order is not None:
            cert["order"] = self.order
            cert["convergence"] = [{"order": o, "value": v} for o, v in self.convergence]
        if self.stderr is not None:
            cert["stderr"] = self.stderr
        return {
            "norm": f"L{self.p:g}",
            "value": self.value,
            "exact_fraction": self.exact_fraction,
            "certificate": cert,
        }


def _gl(order: int):
    x, w = np.polynomial.legendre.leggauss(order)
    return (x + 1.0) / 2.0, w / 2.0


def _antideriv(u, p):
    # d/du of sign(u)|u|^(p+1) / (p+1) is |u|^p
    return np.sign(u) * np.abs(u) ** (p + 1.0)


def _split_nodes(lo, hi, brk, order):
    """GL nodes on [lo, hi] split at the breakpoints (clipped into the interval).

    lo, hi: shape (...,); brk: shape (..., q).  Returns nodes and weights of
    shape (..., (q + 1) * order).
    """
    xg, wg = _gl(order)
    if brk is None or brk.shape[-1] == 0:
        ends = np.stack([lo, hi], axis=-1)
    else:
        b = np.clip(brk, lo[..., None], hi[..., None])
        ends = np.concatenate([lo[..., None], np.sort(b, axis=-1), hi[..., None]], axis=-1)
    a, c = ends[..., :-1], ends[..., 1:]
    width = (c - a)[..., None]
    nodes = a[..., None] + width * xg
    weights = width * wg
    shp = nodes.shape[:-2] + (-1,)
    return nodes.reshape(shp), weights.reshape(shp)


def _safe_div(a, b):
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(b > 0, a / np.where(b > 0, b, 1.0), np.inf)


def _safe_ratio(num, den):
    # den == 0 only on zero-width pieces, whose weights vanish
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(den > 0, num / np.where(den > 0, den, 1.0), 0.0)


def _cell_integral(lo, hi, a, p, order, split):
    """Sum over cells of the integral of |a - prod t|^p; last axis integrated exactly."""
    s = lo.shape[-1]
    if s == 1:
        return ((_antideriv(a - lo[:, 0], p) - _antideriv(a - hi[:, 0], p)) / (p + 1.0)).sum()
    if s == 2:
        brk = np.stack([_safe_div(a, lo[:, 1]), _safe_div(a, hi[:, 1])], axis=-1) if split else None
        t1, w1 = _split_nodes(lo[:, 0], hi[:, 0], brk, order)
        aa = a[:, None]
        num = _antideriv(aa - t1 * lo[:, 1:2], p) - _antideriv(aa - t1 * hi[:, 1:2], p)
        return (w1 * _safe_ratio(num, t1 * (p + 1.0))).sum()
    if s == 3:
        if split:
            c2 = [lo[:, 1], hi[:, 1]]
            c3 = [lo[:, 2], hi[:, 2]]
            brk1 = np.stack([_safe_div(a, x * y) for x in c2 for y in c3], axis=-1)
        else:
            brk1 = None
        t1, w1 = _split_nodes(lo[:, 0], hi[:, 0], brk1, order)  # (M, Q1)
        Q1 = t1.shape[1]
        lo2 = np.repeat(lo[:, 1:2], Q1, axis=1)
        hi2 = np.repeat(hi[:, 1:2], Q1, axis=1)
        aa = np.repeat(a[:, None], Q1, axis=1)
        if split:
            brk2 = np.stack(
                [_safe_div(aa, t1 * lo[:, 2:3]), _safe_div(aa, t1 * hi[:, 2:3])], axis=-1
            )
        else:
            brk2 = None
        t2, w2 = _split_nodes(lo2, hi2, brk2, order)  # (M, Q1, Q2)
        pi = t1[:, :, None] * t2
        a3 = a[:, None, None]
        l3 = lo[:, 2][:, None, None]
        h3 = hi[:, 2][:, None, None]
        num = _antideriv(a3 - pi * l3, p) - _antideriv(a3 - pi * h3, p)
        inner = _safe_ratio(num, pi * (p + 1.0))
        return (w1[:, :, None] * w2 * inner).sum()
    raise ValueError("cell quadrature supports s <= 3")


def _lp_cells(P: PointSet, p: float, order: int) -> float:
    X = P.as_array()
    N, s = X.shape
    grids, idx = [], []
    for j in range(s):
        g = np.unique(np.concatenate([[0.0], X[:, j], [1.0]]))
        grids.append(g)
        idx.append(np.searchsorted(g, X[:, j]))
    # cell k covers (g_k, g_{k+1}); a point counts iff its grid index <= k
    shape = tuple(len(g) - 1 for g in grids)
    H = np.zeros(shape, dtype=np.int64)
    np.add.at(H, tuple(idx), 1)
    for ax in range(s):
        H = np.cumsum(H, axis=ax)
    a = (H / N).reshape(-1)
    mesh = np.meshgrid(*[np.arange(k) for k in shape], indexing="ij")
    flat = [m.reshape(-1) for m in mesh]
    lo = np.stack([grids[j][flat[j]] for j in range(s)], axis=-1)
    hi = np.stack([grids[j][flat[j] + 1] for j in range(s)], axis=-1)
    split = not (float(p).is_integer() and int(p) % 2 == 0)
    total = 0.0
    per = {1: 1, 2: 3 * order, 3: 15 * order * order}[s]
    chunk = max(1, 4_000_000 // per)
    for c in range(0, len(a), chunk):
        total += _cell_integral(lo[c : c + chunk], hi[c : c + chunk], a[c : c + chunk], p, order, split)
    return float(max(total, 0.0) ** (1.0 / p))


def _lp_mc(P: PointSet, p: float, samples: int, seed: int):
    X = P.as_array()
    N, s = X.shape
    rng = np.random.default_rng(seed)
    vals = np.empty(samples)
    chunk = max(1, 2_000_000 // max(N * s, 1))
    for c in range(0, samples, chunk):
        T = rng.random((min(chunk, samples - c), s))
        inside = np.all(X[None, :, :] < T[:, None, :], axis=2).sum(axis=1)
        vals[c : c + len(T)] = np.abs(inside / N - T.prod(axis=1)) ** p
    mean = vals.mean()
    se_mean = vals.std(ddof=1) / math.sqrt(samples) if samples > 1 else float("inf")
    value = mean ** (1.0 / p)
    # delta method for mean -> mean^(1/p)
    se = se_mean * value / (p * mean) if mean > 0 else se_mean
    return value, se


def lp_quadrature(
    P: PointSet,
    p: float,
    order: int = 4,
    mc: int | None = None,
    seed: int = 0,
    max_cells: int = MAX_CELLS,
) -> LpResult:
    """L_p discrepancy by cell-wise quadrature (s <= 3) or Monte Carlo.

    On each cell of the grid spanned by the coordinates the count is constant,
    so |Delta|^p is smooth there apart from the surface ``prod t = count/N``.
    The innermost coordinate is integrated in closed form; outer coordinates
    use Gauss-Legendre of the given order on pieces split where that surface
    crosses the cell, which makes the rule exact for even integer p once
    ``order >= p/2 + 1`` and rapidly convergent otherwise.

    ``p = inf`` delegates to :func:`star_disc_exact`.  With ``mc`` set, or when
    s > 3 or the cell count is too large, a Monte Carlo estimate with standard
    error is returned instead.
    """
    if isinstance(p, str) and p.lower() in ("inf", "infinity"):
        p = math.inf
    p = float(p)
    if math.isnan(p) or p < 1:
        raise ValueError(f"p must be >= 1 (or inf), got {p}")
    if math.isinf(p):
        sd = star_disc_exact(P)
        return LpResult(p, float(sd.value), "star_disc_exact", exact_fraction=str(sd.value))
    if order < 1:
        raise ValueError("quadrature order must be positive")
    ncells = math.prod(len({row[j] for row in P.numerators} | {0}) for j in range(P.dim))
    if mc is None and (P.dim > 3 or ncells > max_cells):
        mc = 200_000
    if mc is not None:
        value, se = _lp_mc(P, p, mc, seed)
        return LpResult(p, value, "monte_carlo", stderr=se)
    value = _lp_cells(P, p, order)
    low = max(1, order // 2)
    conv = [(low, _lp_cells(P, p, low)), (order, value)] if low != order else [(order, value)]
    return LpResult(p, value, "cell_gauss_legendre", order=order, convergence=conv)


class WeightSequence(tuple):
    """Positive weights gamma_1, gamma_2, ...; stored as Fractions when possible."""

    def __new__(cls, gammas):
        vals = []
        for g in gammas:
            v = Fraction(g)
            if v <= 0:
                raise ValueError(f"weights must be positive, got {g}")
            vals.append(v)
        return super().__new__(cls, vals)

    def product(self, subset) -> Fraction:
        """gamma_u for a subset of 1-based coordinate indices (empty -> 1)."""
        return math.prod((self[j - 1] for j in subset), start=Fraction(1))

    @classmethod
    def power_law(cls, s: int, exponent) -> "WeightSequence":
        """gamma_j = j^(-exponent), exact for integer exponents."""
        e = Fraction(exponent)
        if e.denominator == 1:
            return cls(Fraction(1, j ** int(e)) for j in range(1, s + 1))
        return cls(Fraction(j ** -float(e)) for j in range(1, s + 1))


@dataclass(frozen=True)
class WeightedStar:
    value: Fraction
    subset: tuple  # 1-based coordinate indices
    per_subset: dict

    def __float__(self):
        return float(self.value)

    def to_dict(self) -> dict:
        return {
            "norm": "weighted_star",
            "value": float(self.value),
            "exact_fraction": str(self.value),
            "certificate": {
                "argmax_subset": list(self.subset),
                "terms": {",".join(map(str, u)): str(v) for u, v in self.per_subset.items()},
            },
        }


def weighted_star(P: PointSet, gammas, max_dim: int = 12) -> WeightedStar:
    """``max_{u != {}} gamma_u D*(projection of P onto u)``.

    Anchoring ``y_j = 1`` off u counts every point in those coordinates, so
    ``sup_alpha |Delta(alpha_u, 1)|`` is the star discrepancy of the
    projected multiset.  Since ``D* < 1``, a subset with ``gamma_u`` no larger
    than the best value so far cannot win and is skipped (exact pruning);
    skipped subsets are absent from ``per_subset``.
    """
    gam = gammas if isinstance(gammas, WeightSequence) else WeightSequence(gammas)
    s = P.dim
    if len(gam) < s:
        raise ValueError(f"need {s} weights, got {len(gam)}")
    if s > max_dim:
        raise ResourceError(f"{2**s - 1} coordinate subsets exceed the limit for s <= {max_dim}")
    subsets = [u for r in range(1, s + 1) for u in itertools.combinations(range(1, s + 1), r)]
    subsets.sort(key=lambda u: (-gam.product(u), -len(u)))
    terms = {}
    best_val, best_u = Fraction(-1), ()
    for u in subsets:
        g = gam.product(u)
        if g <= best_val:
            continue
        val = g * star_disc_exact(P.project([j - 1 for j in u])).value
        terms[u] = val
        # prefer the larger subset on ties so gamma = 1 reports [s]
        if val > best_val or (val == best_val and len(u) > len(best_u)):
            best_val, best_u = val, u
    return WeightedStar(best_val, best_u, dict(sorted(terms.items(), key=lambda kv: (len(kv[0]), kv[0]))))


def sum_of_digits(N: int, b: int = 2) -> int:
    total = 0
    while N:
        N, r = divmod(N, b)
        total += r
    return total


def bejian_faure_bound(N: int) -> float:
    return math.log(N) / (3.0 * math.log(2.0)) + 1.0


def bound_helpers(N: int, b: int = 2) -> dict:
    """Upper bounds for N D*_N of the base-2 van der Corput sequence."""
    if N < 1:
        raise ValueError("N must be positive")
    sod = sum_of_digits(N, b)
    return {
        "bejian_faure": bejian_faure_bound(N),
        "sod": sod,
        "sod_bound": Fraction(sod, N),
    }
