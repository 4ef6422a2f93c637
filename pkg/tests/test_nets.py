import json
from fractions import Fraction
from math import comb

import numpy as np
import pytest

from oracles import count_net_t

from digiseq.finite_field import FieldMatrix, row_rank
from digiseq.laurent import LaurentSeries, PrecisionError
from digiseq.nets import (
    block_net_scan,
    compositions,
    d_admissibility,
    exact_t,
    min_net_t,
    t_value_at_m,
    verify_net,
)
from digiseq.pointset import PointSet
from digiseq.sequences import GeneratorSet, generate_points, kronecker_matrices, preset


def test_compositions_count_and_order():
    for total in range(5):
        for parts in range(1, 4):
            cs = list(compositions(total, parts))
            assert len(cs) == comb(total + parts - 1, parts - 1)
            assert len(set(cs)) == len(cs) and all(sum(c) == total for c in cs)
    # colex: compare reversed tuples
    cs = list(compositions(3, 3))
    assert cs == sorted(cs, key=lambda c: tuple(reversed(c)))


def test_t_value_examples():
    for m in range(1, 7):
        assert t_value_at_m(preset("identity", 1, 3, 6), m) == (0, None)
    Z = GeneratorSet((FieldMatrix.zeros(4, 4, 2),))
    for m in range(1, 5):
        t, witness = t_value_at_m(Z, m)
        assert t == m and witness == (1,)
    for m in range(1, 9):
        assert t_value_at_m(preset("faure", 2, 2, 8), m)[0] == 0
    with pytest.raises(PrecisionError):
        t_value_at_m(preset("vdc", 1, 2, 3), 4)


def test_kronecker_single_coefficient_t_values():
    # Hankel of t^-1 at m=2 is [[1,0],[0,0]]: the first row alone is independent, so t_2 = 1
    G = kronecker_matrices([LaurentSeries.from_coeffs([1] + [0] * 7, 2)], 4)
    rep = exact_t(G, 4)
    assert [t for _, t, _ in rep.rows] == [0, 1, 2, 3]
    # counting agrees: 0, 1/2, 0, 1/2 is a (1,2,1)-net but not a (0,2,1)-net
    P = generate_points(G, 4)
    assert verify_net(P, 1, 2).ok and not verify_net(P, 0, 2).ok


def test_witness_certifies_failure():
    G = preset("random", 3, 2, 6, seed=3)
    for m in range(1, 7):
        t, w = t_value_at_m(G, m)
        if t:
            assert sum(w) == m - t + 1
            rows = [C.row(i, m) for C, d in zip(G.matrices, w) for i in range(d)]
            assert row_rank(rows, 2) < m - t + 1


def test_exact_t_report_json():
    rep = exact_t(preset("random", 3, 2, 6, seed=0), 6)
    d = json.loads(json.dumps(rep.to_dict()))
    assert [r["m"] for r in d["records"]] == list(range(1, 7))
    assert d["t_star"] == max(r["t"] for r in d["records"])
    assert "6" in d["note"]


@pytest.mark.parametrize("b,s", [(2, 1), (2, 2), (2, 3), (3, 2)])
def test_rank_matches_independent_counting(b, s):
    for seed in range(3):
        G = preset("random", s, b, 5, seed=seed)
        for m in range(1, 5 if b == 2 else 4):
            pts = [tuple(row) for row in generate_points(G, b**m).fractions()]
            assert t_value_at_m(G, m)[0] == count_net_t(pts, b, m)


def test_t_monotone_in_condition():
    rng = np.random.default_rng(0)
    for _ in range(10):
        G = preset("random", 2, 2, 5, seed=int(rng.integers(1 << 30)))
        P = generate_points(G, 32)
        t = min_net_t(P, 5)
        assert all(verify_net(P, u, 5).ok for u in range(t, 6))


def test_verify_net_examples():
    vdc = generate_points(preset("vdc", 1, 2, 2), 4)
    assert verify_net(vdc, 0, 2).ok
    diag = PointSet(tuple((a, a) for (a,) in vdc.numerators), (4, 4), 2, 2)
    chk = verify_net(diag, 0, 2)
    assert not chk.ok and chk.violation["expected"] == 1
    assert verify_net(generate_points(preset("faure", 2, 3, 3), 27), 0, 3).ok
    with pytest.raises(ValueError):
        verify_net(vdc.prefix(3), 0, 2)


def test_verify_net_t_equals_m_always_holds():
    for seed in range(5):
        P = generate_points(preset("random", 3, 3, 3, seed=seed), 27)
        assert verify_net(P, 3, 3).ok


def test_block_scan_examples():
    assert all(block_net_scan(preset("vdc", 1, 2, 5), 3, 3, t=0))
    Z = GeneratorSet((FieldMatrix.zeros(4, 4, 2),))
    assert not any(block_net_scan(Z, 2, 0, t=0))
    assert all(block_net_scan(preset("faure", 2, 2, 4), 2, 2, t=0))
    with pytest.raises(PrecisionError):
        block_net_scan(preset("vdc", 1, 2, 3), 2, 2)


def test_admissibility_examples():
    P = PointSet(((0,), (1,)), (2,), 2, 1)
    rep = d_admissibility(P)
    assert rep.admissible and rep.infimum == Fraction(1, 2) and rep.d_empirical == 1
    const = PointSet(((3,),) * 4, (8,), 2, 3)
    rep = d_admissibility(const)
    assert not rep.admissible and rep.infimum == 0
    single = d_admissibility(P, 1)
    assert single.to_dict()["infimum"] == "inf"


def _badic_norm(x: Fraction, b: int) -> Fraction:
    # b^floor(log_b x) for x > 0
    e = 0
    while x >= b:
        x /= b
        e += 1
    while x < 1:
        x *= b
        e -= 1
    return Fraction(b) ** e


def _digit_diff(x: Fraction, y: Fraction, b: int, m: int) -> Fraction:
    a, c = int(x * b**m), int(y * b**m)
    out = 0
    for k in range(m):
        da, dc = (a // b**k) % b, (c // b**k) % b
        out += ((da - dc) % b) * b**k
    return Fraction(out, b**m)


def _int_digit_diff(n: int, k: int, b: int) -> int:
    out, p = 0, 1
    while n or k:
        out += ((n % b - k % b) % b) * p
        n, k, p = n // b, k // b, p * b
    return out


@pytest.mark.parametrize("name,s", [("vdc", 1), ("faure", 2), ("random", 2)])
def test_admissibility_matches_pair_scan(name, s):
    b, m = 2, 5
    P = generate_points(preset(name, s, b, m, seed=7), 16)
    F = P.fractions()
    best = None
    for n in range(16):
        for k in range(n):
            val = _badic_norm(Fraction(_int_digit_diff(n, k, b)), b)
            for j in range(s):
                diff = _digit_diff(F[n][j], F[k][j], b, m)
                val = val * _badic_norm(diff, b) if diff else Fraction(0)
            best = val if best is None else min(best, val)
    rep = d_admissibility(P)
    assert rep.infimum == best
    if best:
        assert Fraction(2) ** -rep.d_empirical <= best < Fraction(2) ** -(rep.d_empirical - 1)


def test_admissibility_deterministic_and_labelled():
    P = generate_points(preset("random", 2, 2, 6, seed=1), 32)
    assert d_admissibility(P) == d_admissibility(P)
    assert "product" in d_admissibility(P).note
    # reversal re-pairs index differences with point differences
    Q = generate_points(preset("random", 2, 2, 6, seed=5), 12)
    assert d_admissibility(Q).infimum == Fraction(1, 8)
    assert d_admissibility(Q.reversed()).infimum == Fraction(1, 16)
