import itertools
import math
from fractions import Fraction

import numpy as np
import pytest

from oracles import haar_quadrature, points_array

from digiseq.discrepancy import l2_warnock, lp_quadrature
from digiseq.haar import (
    HaarIndex,
    bmo_seminorm_dyadic,
    haar_coeff,
    haar_energy,
    haar_level,
    littlewood_paley_rhs,
    orlicz_estimate,
)
from digiseq.pointset import PointSet
from digiseq.sequences import generate_points, preset

ZERO = PointSet(((0,),), (2,), 2, 1)
HALF = PointSet(((1,),), (2,), 2, 1)


def random_set(seed, N, s, m=6):
    rng = np.random.default_rng(seed)
    nums = tuple(tuple(int(v) for v in r) for r in rng.integers(0, 2**m, size=(N, s)))
    return PointSet(nums, (2**m,) * s, 2, m)


def test_index_validation():
    assert HaarIndex((2, -1, 0), (3, 0, 0)).order == 2
    for bad in [((-2,), (0,)), ((-1,), (1,)), ((2,), (4,)), ((1, 1), (0,))]:
        with pytest.raises(ValueError):
            HaarIndex(*bad)


def test_coefficient_examples():
    assert haar_coeff(ZERO, HaarIndex((-1,), (0,))).value == Fraction(1, 2)
    vdc2 = generate_points(preset("vdc", 1, 2, 1), 2)
    assert haar_coeff(vdc2, HaarIndex((0,), (0,))).value == 0
    # no point inside the support: only the volume term remains
    for j in range(1, 5):
        c = haar_coeff(ZERO, HaarIndex((j,), (2**j - 1,))).value
        assert c == Fraction(1, 4 ** (j + 1))


def test_l2_normalization_flag():
    P = random_set(1, 5, 2)
    idx = HaarIndex((2, 1), (1, 0))
    c = haar_coeff(P, idx)
    c2 = haar_coeff(P, idx, normalization="l2")
    assert c2.value == pytest.approx(float(c.value) * 2 ** 1.5)
    with pytest.raises(ValueError):
        haar_coeff(P, idx, normalization="weird")


@pytest.mark.parametrize("s,N,seed", [(1, 7, 0), (2, 6, 1), (3, 4, 2)])
def test_coefficients_match_quadrature(s, N, seed):
    P = random_set(seed, N, s, m=5)
    X = points_array(P)
    for lv in itertools.product(range(-1, 3), repeat=s):
        for sh in itertools.product(*(range(2 ** max(j, 0)) for j in lv)):
            exact = float(haar_coeff(P, HaarIndex(lv, sh)).value)
            assert exact == pytest.approx(haar_quadrature(X, lv, sh), abs=1e-12)


def test_level_arrays_match_exact():
    P = random_set(3, 9, 2)
    for lv in [(-1, -1), (0, 3), (2, 1), (4, -1)]:
        arr = haar_level(P, lv)
        for sh in itertools.product(*(range(2 ** max(j, 0)) for j in lv)):
            key = tuple(0 if j == -1 else m for j, m in zip(lv, sh))
            assert arr[key] == pytest.approx(float(haar_coeff(P, HaarIndex(lv, sh)).value), abs=1e-15)


def test_fine_levels_reduce_to_volume_term():
    # dyadic precision m: at level j >= m each point sits at a left endpoint, phi vanishes there
    P = random_set(6, 10, 1, m=4)
    for j in (4, 5, 6):
        arr = haar_level(P, (j,))
        assert np.allclose(arr, 4.0 ** -(j + 1))


def test_parseval_converges_from_below():
    for P in (generate_points(preset("vdc", 1, 2, 5), 19), random_set(4, 11, 1), random_set(5, 6, 2)):
        target = float(l2_warnock(P, exact=True)[0])
        prev = 0.0
        for j in range(0, 9):
            e = haar_energy(P, j)
            assert prev - 1e-15 <= e <= target + 1e-12
            prev = e
        if P.dim == 1:
            assert prev >= 0.99 * target


def test_littlewood_paley_examples():
    res = littlewood_paley_rhs(ZERO, 2, 0)
    c_m1 = float(haar_coeff(ZERO, HaarIndex((-1,), (0,))).value)
    c_0 = float(haar_coeff(ZERO, HaarIndex((0,), (0,))).value)
    assert res["rhs"] == pytest.approx(c_m1**2 + c_0**2)
    assert set(res["shells"]) == {-1, 0}
    P = random_set(2, 8, 2)
    prev = 0.0
    for j in range(5):
        r = littlewood_paley_rhs(P, 3.0, j)
        assert r["rhs"] >= prev and r["pbar"] == 3.0
        assert r["last_shell"] == r["shells"][j]
        prev = r["rhs"]
    assert littlewood_paley_rhs(P, 1.5, 2)["pbar"] == 2.0
    with pytest.raises(ValueError):
        littlewood_paley_rhs(P, 1.0, 2)


def test_littlewood_paley_p2_is_parseval():
    P = generate_points(preset("vdc", 1, 2, 4), 16)
    r = littlewood_paley_rhs(P, 2, 10)["rhs"]
    assert r == pytest.approx(haar_energy(P, 10))
    ratio = lp_quadrature(P, 2).value ** 2 / r
    assert 0.99 < ratio < 1.01


def test_bmo_includes_unit_cube_and_is_monotone():
    P = random_set(7, 8, 2)
    j_max = 3
    full = sum(
        2.0 ** sum(lv) * float(np.sum(haar_level(P, lv) ** 2))
        for lv in itertools.product(range(j_max + 1), repeat=2)
    )
    res = bmo_seminorm_dyadic(P, j_max, 0)
    assert res["value_squared"] == pytest.approx(full)
    assert res["bound"] == "lower"
    vals = [[bmo_seminorm_dyadic(P, j, L)["value"] for L in range(j + 1)] for j in range(4)]
    for j in range(4):
        assert all(a <= b + 1e-15 for a, b in zip(vals[j], vals[j][1:]))
        if j:
            assert all(vals[j - 1][L] <= vals[j][L] + 1e-15 for L in range(j))
    with pytest.raises(ValueError):
        bmo_seminorm_dyadic(P, 1, 2)


def test_bmo_exhaustive_single_point():
    j_max = 2
    coeffs = {}
    for j in range(j_max + 1):
        for m in range(2**j):
            coeffs[(j, m)] = float(haar_coeff(ZERO, HaarIndex((j,), (m,))).value)
    best = 0.0
    for k in range(j_max + 1):
        for u in range(2**k):
            lo, hi = u / 2**k, (u + 1) / 2**k
            tot = sum(2.0**j * c * c for (j, m), c in coeffs.items() if lo <= m / 2**j and (m + 1) / 2**j <= hi)
            best = max(best, tot * 2**k)
    assert bmo_seminorm_dyadic(ZERO, j_max, j_max)["value"] == pytest.approx(math.sqrt(best))


def test_bmo_invariant_under_duplication():
    P = random_set(8, 5, 2)
    D = PointSet(P.numerators * 2, P.denominators, P.base, P.precision)
    assert bmo_seminorm_dyadic(D, 3, 2)["value"] == pytest.approx(bmo_seminorm_dyadic(P, 3, 2)["value"])


def test_orlicz_examples():
    res = orlicz_estimate(HALF, 2, [2, 4, 8])
    # |Delta| = t on [0, 1/2) and 1 - t on [1/2, 1): ||Delta||_p^p = 2 (1/2)^(p+1) / (p+1)
    for p, term in res["terms"].items():
        exact = (2 * 0.5 ** (p + 1) / (p + 1)) ** (1 / p) * p ** -0.5
        assert term == pytest.approx(exact, rel=1e-12)
    assert res["value"] == max(res["terms"].values())
    finer = orlicz_estimate(HALF, 2, [2, 3, 4, 6, 8])
    assert finer["value"] >= res["value"]
    big = orlicz_estimate(HALF, 1e9, [2, 4, 8])
    assert big["value"] == pytest.approx(max(lp_quadrature(HALF, p).value for p in (2, 4, 8)), rel=1e-8)
    with pytest.raises(ValueError):
        orlicz_estimate(HALF, 0, [2])
    with pytest.raises(ValueError):
        orlicz_estimate(HALF, 1, [1])
