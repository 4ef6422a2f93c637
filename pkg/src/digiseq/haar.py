"""Dyadic Haar analysis of the local discrepancy function.

Haar functions are L-infinity normalized: ``h_{j,m}`` is +1 on the left half
and -1 on the right half of ``[m 2^-j, (m+1) 2^-j)``, and ``h_{-1,0} = 1`` on
[0, 1).  Tensor products give ``h_{j,m}`` on the cube, with
``||h_{j,m}||_2^2 = 2^-|j|`` where ``|j| = sum max(j_l, 0)``.

Coefficients of Delta use the closed form

    <Delta, h_{j,m}> = (1/N) sum_n prod_l phi(x_nl; j_l, m_l) - prod_l psi(j_l)

with ``phi(x) = int_x^1 h(t) dt`` and ``psi = int_0^1 t h(t) dt``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .discrepancy import lp_quadrature
from .pointset import PointSet

__all__ = [
    "HaarIndex",
    "HaarCoefficient",
    "haar_coeff",
    "haar_level",
    "haar_energy",
    "littlewood_paley_rhs",
    "bmo_seminorm_dyadic",
    "orlicz_estimate",
]


@dataclass(frozen=True)
class HaarIndex:
    levels: tuple
    shifts: tuple

    def __post_init__(self):
        if len(self.levels) != len(self.shifts) or not self.levels:
            raise ValueError("levels and shifts must be nonempty and of equal length")
        for j, m in zip(self.levels, self.shifts):
            if j < -1:
                raise ValueError(f"level {j} < -1")
            if j == -1 and m != 0:
                raise ValueError("level -1 only has shift 0")
            if j >= 0 and not 0 <= m < 2**j:
                raise ValueError(f"shift {m} outside 0..{2**j - 1} at level {j}")

    @property
    def order(self) -> int:
        """|j| = sum of max(j_l, 0)."""
        return sum(max(j, 0) for j in self.levels)


@dataclass(frozen=True)
class HaarCoefficient:
    index: HaarIndex
    value: object  # Fraction (L-infinity normalization) or float (L2)
    normalization: str = "linf"

    def __float__(self):
        return float(self.value)


def _psi(j: int) -> Fraction:
    return Fraction(1, 2) if j == -1 else -Fraction(1, 4 ** (j + 1))


def _phi(x: Fraction, j: int, m: int) -> Fraction:
    if j == -1:
        return 1 - x
    a = Fraction(m, 2**j)
    half = Fraction(1, 2 ** (j + 1))
    if a <= x < a + half:
        return a - x
    if a + half <= x < a + 2 * half:
        return -(a + 2 * half - x)
    return Fraction(0)


def haar_coeff(P: PointSet, idx: HaarIndex, normalization: str = "linf") -> HaarCoefficient:
    """Exact Haar coefficient of Delta at one index."""
    if len(idx.levels) != P.dim:
        raise ValueError(f"index has dimension {len(idx.levels)}, point set has {P.dim}")
    acc = Fraction(0)
    for row in P.fractions():
        term = Fraction(1)
        for x, j, m in zip(row, idx.levels, idx.shifts):
            term *= _phi(x, j, m)
            if not term:
                break
        acc += term
    value = acc / P.N - math.prod((_psi(j) for j in idx.levels), start=Fraction(1))
    if normalization == "linf":
        return HaarCoefficient(idx, value)
    if normalization == "l2":
        return HaarCoefficient(idx, float(value) * 2.0 ** (idx.order / 2), "l2")
    raise ValueError(f"unknown normalization {normalization!r}")


def haar_level(P: PointSet, levels: Sequence[int]) -> np.ndarray:
    """All coefficients at a fixed level vector, as an array indexed by shifts.

    Float arithmetic; exact for dyadic coordinates with moderate precision.
    """
    X = P.as_array()
    N, s = X.shape
    if len(levels) != s:
        raise ValueError("level vector does not match dimension")
    shape = tuple(2 ** max(j, 0) for j in levels)
    prod = np.ones(N)
    shifts = []
    for l, j in enumerate(levels):
        x = X[:, l]
        if j == -1:
            prod *= 1.0 - x
            shifts.append(np.zeros(N, dtype=np.int64))
            continue
        scale = 2.0**j
        m = np.floor(x * scale).astype(np.int64)
        a = m / scale
        mid = a + 0.5 / scale
        prod *= np.where(x < mid, a - x, x - (a + 1.0 / scale))
        shifts.append(m)
    out = np.zeros(shape)
    np.add.at(out, tuple(shifts), prod)
    vol = math.prod(float(_psi(j)) for j in levels)
    return out / N - vol


def _level_vectors(s: int, lo: int, j_max: int):
    return itertools.product(range(lo, j_max + 1), repeat=s)


def haar_energy(P: PointSet, j_max: int) -> float:
    """Truncated Parseval sum ``sum_{j_l <= j_max} 2^|j| sum_m <Delta, h_{j,m}>^2``."""
    total = 0.0
    for lv in _level_vectors(P.dim, -1, j_max):
        c = haar_level(P, lv)
        total += 2.0 ** sum(max(j, 0) for j in lv) * float(np.sum(c * c))
    return total


def littlewood_paley_rhs(P: PointSet, p: float, j_max: int) -> dict:
    """Partial sum of ``sum_j 2^{2|j|(1-1/pbar)} (sum_m |c_{j,m}|^pbar)^{2/pbar}``.

    Levels run over ``{-1, ..., j_max}^s``; ``pbar = max(p, 2)``.  The shell
    of level vectors with ``max_l j_l = j_max`` is returned separately as a
    truncation indicator.
    """
    if p <= 1:
        raise ValueError(f"p must exceed 1, got {p}")
    if j_max < 0:
        raise ValueError("j_max must be nonnegative")
    pbar = max(float(p), 2.0)
    shells = {}
    for lv in _level_vectors(P.dim, -1, j_max):
        c = haar_level(P, lv)
        order = sum(max(j, 0) for j in lv)
        term = 2.0 ** (2 * order * (1 - 1 / pbar)) * float(np.sum(np.abs(c) ** pbar)) ** (2 / pbar)
        key = max(lv)
        shells[key] = shells.get(key, 0.0) + term
    ordered = [shells[k] for k in sorted(shells)]
    total = math.fsum(ordered)
    return {
        "p": float(p),
        "pbar": pbar,
        "j_max": j_max,
        "rhs": total,
        "shells": {int(k): shells[k] for k in sorted(shells)},
        "last_shell": shells[j_max],
    }


def bmo_seminorm_dyadic(P: PointSet, j_max: int, L: int) -> dict:
    """Lower bound for the dyadic BMO semi-norm of Delta.

    The sup over measurable U is restricted to dyadic boxes with side
    lengths ``2^-k_l``, ``k_l <= L``, and the level sum to ``j in {0..j_max}^s``;
    each restriction can only lower the value, so the result is a certified
    lower bound for the true semi-norm.
    """
    if L < 0 or j_max < L:
        raise ValueError("need 0 <= L <= j_max")
    s = P.dim
    boxes: dict = {}
    for lv in _level_vectors(s, 0, j_max):
        c = haar_level(P, lv)
        E = 2.0 ** sum(lv) * c * c
        for k in itertools.product(*(range(min(j, L) + 1) for j in lv)):
            # supp(h_{j,m}) inside box (k, u)  <=>  m_l >> (j_l - k_l) == u_l
            shape = []
            for j, kk in zip(lv, k):
                shape.extend([2**kk, 2 ** (j - kk)])
            agg = E.reshape(shape).sum(axis=tuple(range(1, 2 * s, 2)))
            if k in boxes:
                boxes[k] += agg
            else:
                boxes[k] = agg.copy()
    best, arg = -1.0, None
    for k, B in boxes.items():
        vals = B * 2.0 ** sum(k)
        i = int(np.argmax(vals))
        if vals.flat[i] > best:
            best = float(vals.flat[i])
            arg = (k, tuple(int(v) for v in np.unravel_index(i, B.shape)))
    return {
        "value": math.sqrt(best),
        "value_squared": best,
        "box": {"levels": list(arg[0]), "shifts": list(arg[1])},
        "j_max": j_max,
        "L": L,
        "bound": "lower",
    }


def orlicz_estimate(P: PointSet, beta: float, p_grid: Sequence[float], order: int = 6) -> dict:
    """``max_{p in grid} p^(-1/beta) ||Delta||_p``, up to unknown equivalence constants."""
    if beta <= 0:
        raise ValueError("beta must be positive")
    if not p_grid:
        raise ValueError("p_grid must be nonempty")
    terms = {}
    for p in p_grid:
        if p <= 1:
            raise ValueError(f"grid values must exceed 1, got {p}")
        terms[float(p)] = float(p) ** (-1.0 / beta) * lp_quadrature(P, p, order=order).value
    p_best = max(terms, key=terms.get)
    return {
        "beta": float(beta),
        "value": terms[p_best],
        "argmax_p": p_best,
        "terms": terms,
        "note": "equivalent to the exp(L^beta) norm only up to unknown constants",
    }
