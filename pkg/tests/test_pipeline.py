import json
import math

import mpmath as mp
import numpy as np
import pytest

from cyclic_monopole import curve_pipeline as cp
from cyclic_monopole import jsonio
from cyclic_monopole import theta as th
from cyclic_monopole.specfun import InvalidIndexError

SQRT3 = math.sqrt(3)
SMALL = [(0, 1), (1, 1), (1, 2), (1, 3)]
SCAN = [idx.pair for idx in cp.admissible_indices(5)]


@pytest.fixture(scope="module")
def pipelines():
    return {mn: cp.run_pipeline(cp.MonopoleIndex(*mn)) for mn in SCAN}


def test_symmetric_index():
    cd = cp.solve_curve(cp.MonopoleIndex(1, 2))
    assert cd.t == 0.5 and cd.b == 0.0
    assert abs(cd.R + 1) < 1e-10
    assert cp.MonopoleIndex(1, 2).T == 2j * SQRT3


@pytest.mark.parametrize("mn", [(0, 1), (1, 1)])
def test_tetrahedral_curve(mn):
    cd = cp.solve_curve(cp.MonopoleIndex(*mn))
    assert abs(abs(cd.b) - 5 * math.sqrt(2)) < 1e-9
    ref = -mp.gamma(mp.mpf(1) / 6) * mp.gamma(mp.mpf(1) / 3) / (6 * mp.mpf(2) ** (mp.mpf(1) / 6) * mp.sqrt(mp.pi))
    assert abs(cd.chi_cbrt - float(ref)) < 1e-12
    assert abs(cd.chi_cbrt + 1.2492022402337695) < 1e-12


def test_tetrahedral_sign_pairing():
    b01 = cp.solve_curve(cp.MonopoleIndex(0, 1)).b
    b11 = cp.solve_curve(cp.MonopoleIndex(1, 1)).b
    assert b01 == pytest.approx(-b11, rel=1e-12)


@pytest.mark.parametrize("mn", [(2, 1), (2, 2), (4, 2), (1, 0)])
def test_invalid_index(mn):
    with pytest.raises(InvalidIndexError):
        cp.MonopoleIndex(*mn)


def test_canonicalisation():
    idx = cp.MonopoleIndex(0, -1)
    assert idx.pair == (0, 1) and idx.flipped
    assert not cp.MonopoleIndex(0, 1).flipped


def test_admissible_ordering():
    pairs = [idx.pair for idx in cp.admissible_indices(3)]
    assert pairs == sorted(pairs, key=lambda p: (p[1], p[0]))
    assert len(pairs) == len(set(pairs))
    assert all(m + n >= 1 and math.gcd(m, n) == 1 and (m + n) * (m - 2 * n) < 0 for m, n in pairs)
    assert (0, 1) in pairs and (1, 2) in pairs


def test_period_integral_ratio():
    cd = cp.solve_curve(cp.MonopoleIndex(1, 2))
    I1, J1 = cp.period_integrals(cd.alpha)
    assert abs(I1 / J1 + 1) < 1e-10


def test_period_integral_against_mpmath():
    alpha = 0.8
    pref = 2 * mp.pi * mp.sqrt(3) / 9
    I1 = -pref * alpha * mp.hyp2f1(mp.mpf(1) / 3, mp.mpf(1) / 3, 1, -mp.mpf(alpha) ** 6)
    J1 = pref / alpha * mp.hyp2f1(mp.mpf(1) / 3, mp.mpf(1) / 3, 1, -1 / mp.mpf(alpha) ** 6)
    got = cp.period_integrals(alpha)
    assert abs(got[0] - float(I1)) < 1e-13 and abs(got[1] - float(J1)) < 1e-13


def test_period_integral_small_alpha():
    alpha = 1e-6
    I1, _ = cp.period_integrals(alpha)
    assert I1 / alpha == pytest.approx(-2 * math.pi * SQRT3 / 9, rel=1e-10)


@pytest.mark.parametrize("mn", SCAN)
def test_negative_hermitian_form(pipelines, mn):
    _, pd, _ = pipelines[mn]
    assert pd.checks["conj_x_H_x"] < 0


@pytest.mark.parametrize("mn", SCAN)
def test_matrix_cross_checks(pipelines, mn):
    _, pd, _ = pipelines[mn]
    assert pd.checks["symplectic_residual"] < 1e-10
    assert pd.checks["pattern_residual"] < 1e-9
    assert pd.checks["humbert_form_residual"] < 1e-10
    assert pd.checks["humbert_relation_residual"] < 1e-10


@pytest.mark.parametrize("mn", SMALL)
def test_lattice_vector(pipelines, mn):
    _, pd, vec = pipelines[mn]
    nvec, mvec = cp.MonopoleIndex(*mn).lattice_vector
    resid = 2 * vec.U_hat - np.array(nvec) - np.array(mvec) @ pd.tau_c
    assert np.abs(resid).max() < 1e-8


@pytest.mark.parametrize("mn", SCAN)
def test_half_period(pipelines, mn):
    _, _, vec = pipelines[mn]
    assert vec.checks["half_period_residual"] < 1e-9


def test_transformed_winding_vector(pipelines):
    _, _, vec = pipelines[(1, 2)]
    assert vec.checks["U_prime_residual"] < 1e-10
    assert vec.checks["transport_residual"] < 1e-10


def test_fay_ratio_constant(pipelines):
    _, pd, vec = pipelines[(1, 2)]
    r0 = cp.fay_accola_ratio(pd, vec, z=(0.0, 0.0))
    r1 = cp.fay_accola_ratio(pd, vec, z=(0.1, 0.2j))
    rng = np.random.default_rng(0)
    r2 = cp.fay_accola_ratio(pd, vec, z=tuple(0.1 * rng.normal(size=2) + 0.1j * rng.normal(size=2)))
    assert abs(r1 - r0) < 1e-8 * abs(r0) and abs(r2 - r0) < 1e-8 * abs(r0)


def test_fay_ratio_divisor_collision(pipelines):
    # theta(z) vanishes at the half period of any odd characteristic
    _, pd, _ = pipelines[(1, 2)]
    odd = th.ThetaCharacteristic((th.Fraction(1, 2), th.Fraction(1, 2)), (th.Fraction(1, 2), th.Fraction(1, 2)))
    a, b = odd.arrays()
    with pytest.raises(cp.DivisorCollisionError):
        cp.fay_accola_ratio(pd, z=tuple(b + a @ pd.tau_g2))


@pytest.mark.parametrize("mn", SMALL + [(3, 4), (-2, 3)])
def test_b_dual_route(mn):
    cd = cp.solve_curve(cp.MonopoleIndex(*mn))
    assert abs(cp.b_via_theta_constants(cp.MonopoleIndex(*mn)) - cd.b) < 1e-8


def test_b_theta_symmetric_zero():
    assert abs(cp.b_via_theta_constants((1, 2))) < 1e-10


@pytest.mark.parametrize("mn", SCAN)
def test_p_range_observed(mn):
    p, pm1, tmp = cp.theta_p(cp.MonopoleIndex(*mn).T)
    assert 1 < p < 3 and pm1 > 0 and tmp > 0
    assert abs(pm1 - (p - 1)) < 1e-12 and abs(tmp - (3 - p)) < 1e-12


@pytest.mark.parametrize("mn", [(0, 1), (1, 1), (1, 2), (1, 3), (3, 4)])
def test_jacobi_moduli_three_routes(mn):
    jm = cp.jacobi_moduli(cp.MonopoleIndex(*mn))
    for route in (jm.algebraic, jm.ramanujan):
        assert np.allclose(route, jm.theta, rtol=0, atol=1e-9)
    assert abs(jm.p_from_M - jm.p) < 1e-9


def test_symmetric_moduli():
    jm = cp.jacobi_moduli(cp.MonopoleIndex(1, 2))
    assert jm.p == pytest.approx(SQRT3, rel=1e-14)
    assert sum(jm.theta) == pytest.approx(1.0, abs=1e-14)


@pytest.mark.parametrize("mn", SCAN)
def test_ratio_reflection_symmetry(mn):
    m, n = mn
    try:
        other = cp.MonopoleIndex(n - m, n)
    except InvalidIndexError:
        pytest.skip("partner not admissible")
    assert abs(cp.MonopoleIndex(m, n).T * other.T + 12) < 1e-12


@pytest.mark.parametrize("mn", SMALL)
def test_json_round_trip(pipelines, mn):
    cd, pd, vec = pipelines[mn]
    for obj, cls in ((cd, cp.CurveData), (pd, cp.PeriodData), (vec, cp.MonopoleVectors)):
        text = json.dumps(obj.to_json())
        back = cls.from_json(json.loads(text))
        for name in cls.__dataclass_fields__:
            a, b = getattr(obj, name), getattr(back, name)
            if name == "checks":
                continue
            assert np.all(np.asarray(a) == np.asarray(b)), name


def test_jsonio_complex_encoding():
    enc = jsonio.encode({"z": 1 + 2j, "arr": np.array([[1j, 2.0]])})
    assert jsonio.decode_complex(enc["z"]) == 1 + 2j
    assert np.all(jsonio.decode_complex_array(enc["arr"]) == np.array([[1j, 2.0]]))
