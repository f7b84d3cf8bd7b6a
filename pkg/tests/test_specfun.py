import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cyclic_monopole import specfun as sf


def rel(a, b):
    return abs(a - b) / abs(b)


# oracles first

@pytest.mark.parametrize("x, expected", [(1.0, 1.0), (0.5, math.sqrt(math.pi))])
def test_gamma_classical_values(x, expected):
    assert rel(sf.gamma(x), expected) < 1e-13


def test_gamma_one_sixth_against_mpmath():
    ref = float(mp.gamma(mp.mpf(1) / 6))
    assert rel(sf.gamma(1 / 6), ref) < 1e-13


@pytest.mark.parametrize("x", [0.0, -1.0, -2.5])
def test_gamma_domain(x):
    with pytest.raises(sf.DomainError):
        sf.gamma(x)


@given(st.floats(min_value=0.05, max_value=30.0))
def test_gamma_recurrence(x):
    assert rel(sf.gamma(x + 1), x * sf.gamma(x)) < 1e-13


FAMILIES = [(1 / 3, 2 / 3, 1.0), (1 / 3, 1 / 3, 1.0), (0.2, 0.7, 1.9), (0.5, 0.5, 1.0), (0.3, 1.4, 2.2)]
POINTS = [-1e8, -500.0, -30.0, -2.0, -0.9, -0.4, 0.0, 0.1, 0.45, 0.55, 0.9, 0.999, 1 - 1e-9, 1 - 1e-15]


@pytest.mark.parametrize("a, b, c", FAMILIES)
@pytest.mark.parametrize("z", POINTS)
def test_gauss_2f1_against_mpmath(a, b, c, z):
    ref = float(mp.hyp2f1(a, b, c, mp.mpf(z)))
    assert rel(sf.gauss_2f1(a, b, c, z), ref) < 1e-12


def test_gauss_2f1_examples():
    assert sf.gauss_2f1(1 / 3, 2 / 3, 1.0, 0.0) == 1.0
    with pytest.raises(sf.DivergenceError):
        sf.gauss_2f1(1 / 3, 2 / 3, 1.0, 1.0)
    ref = float(mp.gamma(mp.mpf(1) / 3) / mp.gamma(mp.mpf(2) / 3) ** 2)
    assert rel(sf.gauss_2f1(sf.HypergeometricQuery(1 / 3, 1 / 3, 1.0, 1.0)), ref) < 1e-12


def test_gauss_2f1_domain():
    with pytest.raises(sf.DomainError):
        sf.gauss_2f1(0.2, 0.3, 0.5, 1.5)
    with pytest.raises(sf.DomainError):
        sf.HypergeometricQuery(0.2, 0.3, -2.0, 0.1)


@pytest.mark.parametrize("w", [1e-30, 1e-17, 1e-9, 1e-3, 0.3])
def test_complement_branch_keeps_precision(w):
    # F(1/3, 2/3; 1; 1 - w) with w far below machine epsilon
    with mp.workdps(60):
        ref = float(mp.hyp2f1(mp.mpf(1) / 3, mp.mpf(2) / 3, 1, 1 - mp.mpf(w)))
    assert rel(sf.hyp2f1_complement(1 / 3, 2 / 3, 1.0, w), ref) < 1e-12


@given(st.floats(min_value=-40.0, max_value=40.0))
@settings(max_examples=60)
def test_ratio_inverts_under_reflection(s):
    # t <-> 1 - t is s <-> -s
    assert rel(sf.es_ratio_logit(s) * sf.es_ratio_logit(-s), 1.0) < 1e-13


@given(st.floats(min_value=-30.0, max_value=30.0), st.floats(min_value=0.01, max_value=5.0))
@settings(max_examples=60)
def test_ratio_increasing(s, ds):
    assert sf.es_ratio_logit(s + ds) > sf.es_ratio_logit(s)


def test_solve_midpoint():
    assert sf.solve_es_ratio(1, 2) == 0.5


def test_solve_tetrahedral_pair():
    t01 = sf.solve_es_ratio(0, 1)
    t11 = sf.solve_es_ratio(1, 1)
    assert abs(t01 - (9 + 5 * math.sqrt(3)) / 18) < 1e-13
    assert abs(t11 - (1 - t01)) < 1e-13


@pytest.mark.parametrize("mn", [(0, 1), (1, 1), (1, 3), (-1, 2), (3, 4), (-7, 8), (7, 4), (-5, 7)])
def test_solve_ratio_residual(mn):
    m, n = mn
    s = sf.solve_es_logit(m, n)
    assert abs(sf.es_ratio_logit(s) - (2 * n - m) / (m + n)) <= 1e-13 * (2 * n - m) / (m + n)


def test_solve_logit_against_mpmath_root():
    # root of the mpmath ratio in the logit variable
    third = mp.mpf(1) / 3

    def g(s):
        t = 1 / (1 + mp.exp(-s))
        return mp.hyp2f1(third, 2 * third, 1, t) / mp.hyp2f1(third, 2 * third, 1, 1 - t) - 2

    ref = float(mp.findroot(g, (mp.mpf(3.9), mp.mpf(4.0)), solver="anderson"))
    assert abs(sf.solve_es_logit(0, 1) - ref) < 1e-12


@pytest.mark.parametrize("mn", [(2, 1), (2, 2), (1, -1), (4, 2)])
def test_invalid_index(mn):
    with pytest.raises(sf.InvalidIndexError):
        sf.solve_es_ratio(*mn)
