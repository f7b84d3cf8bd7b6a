"""From an index (m, n) to curve invariants, period matrices and vectors.

The curve is eta^3 + chi (zeta^6 + b zeta^3 - 1) = 0.  The chain is

    index -> (t, b, chi) -> periods (x1, x4) -> genus-4 period matrix in
    the symmetric basis -> cyclic basis (Fay-Accola pattern) -> genus-2
    quotient -> Humbert normal form with a single elliptic modulus T.

Each stage carries numerical cross-checks that are stored alongside the
data so reports can show how tightly the closed forms agree.
"""

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from . import jsonio
from . import symplectic as sp
from . import theta as th
from .specfun import (
    InvalidIndexError,
    _logit_split,
    _positive_branch,
    check_index,
    es_ratio_logit,
    gauss_2f1,
    solve_es_logit,
)

__all__ = [
    "RHO",
    "ConventionError",
    "DegenerateError",
    "DivisorCollisionError",
    "MonopoleIndex",
    "CurveData",
    "PeriodData",
    "MonopoleVectors",
    "JacobiModuli",
    "admissible_indices",
    "solve_curve",
    "period_integrals",
    "compute_periods",
    "build_period_matrices",
    "build_vectors",
    "fay_accola_ratio",
    "theta_p",
    "b_via_theta_constants",
    "jacobi_moduli",
    "run_pipeline",
]

RHO = cmath.exp(2j * math.pi / 3)
SQRT3 = math.sqrt(3.0)
SIGNATURE = np.diag([1.0, 1.0, 1.0, -1.0])


class ConventionError(RuntimeError):
    """A cross-check between two computation routes failed."""


class DegenerateError(ArithmeticError):
    """A closed-form denominator vanished."""


class DivisorCollisionError(ArithmeticError):
    """A theta factor in a quotient vanishes at the requested point."""


@dataclass(frozen=True)
class MonopoleIndex:
    """Coprime pair (m, n) with (m+n)(m-2n) < 0, stored with n + m >= 1.

    Pairs with n + m < 0 are replaced by (-m, -n); ``flipped`` records it.
    """

    m: int
    n: int
    flipped: bool = False

    def __post_init__(self):
        m, n = check_index(self.m, self.n)
        if m + n < 0:
            m, n = -m, -n
            object.__setattr__(self, "flipped", True)
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "n", n)

    @property
    def pair(self):
        return (self.m, self.n)

    @property
    def ratio(self):
        """R = (m - 2n)/(m + n), negative."""
        return (self.m - 2 * self.n) / (self.m + self.n)

    @property
    def T(self):
        """Elliptic modulus 2 i sqrt(3) (n+m)/(2n-m)."""
        return 2j * SQRT3 * ((self.n + self.m) / (2 * self.n - self.m))

    @property
    def C0(self):
        return -3 * (2 * self.n - self.m)

    @property
    def conjectured_zeros(self):
        return 2 * (abs(self.n) - 1)

    @property
    def lattice_vector(self):
        """Integer pair (n_hat, m_hat) with 2 U = n_hat + m_hat tau_c."""
        m, n = self.m, self.n
        return (5 * n - m, n, n, n), (3 * n, -m, -m, -m)

    def to_json(self):
        return {"m": self.m, "n": self.n, "flipped": self.flipped}


def admissible_indices(max_abs):
    """Canonical admissible pairs with |m|, |n| <= max_abs, ordered by (n, m)."""
    out = set()
    for n in range(-max_abs, max_abs + 1):
        for m in range(-max_abs, max_abs + 1):
            try:
                idx = MonopoleIndex(m, n)
            except InvalidIndexError:
                continue
            out.add(idx.pair)
    return [MonopoleIndex(m, n) for n, m in sorted((n, m) for m, n in out)]


@dataclass(frozen=True)
class CurveData:
    m: int
    n: int
    logit: float
    t: float
    one_minus_t: float
    b: float
    chi_cbrt: float
    chi: float
    alpha: float
    I1: float
    J1: float
    R: float
    x1: complex
    x4: complex
    C0: int
    checks: dict = field(default_factory=dict, compare=False)

    @property
    def index(self):
        return MonopoleIndex(self.m, self.n)

    def to_json(self):
        return jsonio.encode({k: getattr(self, k) for k in self.__dataclass_fields__})

    @classmethod
    def from_json(cls, obj):
        kw = dict(obj)
        for key in ("x1", "x4"):
            kw[key] = jsonio.decode_complex(kw[key])
        return cls(**kw)


def period_integrals(alpha):
    """Real period integrals (I1, J1) of the curve with parameter alpha > 0."""
    if not alpha > 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    a6 = alpha ** 6
    pref = 2.0 * math.pi * SQRT3 / 9.0
    I1 = -pref * alpha * gauss_2f1(1 / 3, 1 / 3, 1.0, -a6)
    J1 = pref / alpha * gauss_2f1(1 / 3, 1 / 3, 1.0, -1.0 / a6)
    return I1, J1


def _periods_from_integrals(I1, J1):
    x1 = -(2 * J1 + I1) * RHO - 2 * I1 - J1
    x4 = 3 * (J1 - I1) * RHO + 3 * J1
    return x1, x4


def compute_periods(cd):
    """(x1, x4) recomputed from alpha alone."""
    return _periods_from_integrals(*period_integrals(cd.alpha))


def solve_curve(idx):
    """Curve invariants for an index.

    Raises
    ------
    InvalidIndexError
        For non-admissible (m, n).
    ConventionError
        If the ratio I1/J1 misses (m-2n)/(m+n).
    """
    if not isinstance(idx, MonopoleIndex):
        idx = MonopoleIndex(*idx)
    m, n = idx.m, idx.n
    s = solve_es_logit(m, n)
    t, u = _logit_split(s)
    b = -2.0 * math.sinh(s / 2.0)
    alpha = math.exp(s / 6.0)
    f_t = _positive_branch(1 / 3, 2 / 3, 1.0, t, u)
    # alpha / (1 + alpha^6)^(1/3) == (t (1 - t))^(1/6)
    root6 = math.exp((math.log(t) + math.log(u)) / 6.0)
    chi_cbrt = -(n + m) * 2.0 * math.pi / (3.0 * SQRT3) * root6 * f_t
    I1, J1 = period_integrals(alpha)
    x1, x4 = _periods_from_integrals(I1, J1)
    R = I1 / J1
    checks = {
        "ratio_residual": abs(es_ratio_logit(s) - (2 * n - m) / (m + n)),
        "R_residual": abs(R - idx.ratio) / abs(idx.ratio),
    }
    if checks["R_residual"] > 1e-10:
        raise ConventionError(f"I1/J1 = {R} differs from {idx.ratio} for {idx.pair}")
    return CurveData(
        m=m, n=n, logit=s, t=t, one_minus_t=u, b=b, chi_cbrt=chi_cbrt, chi=chi_cbrt ** 3,
        alpha=alpha, I1=I1, J1=J1, R=R, x1=complex(x1), x4=complex(x4), C0=idx.C0, checks=checks,
    )


@dataclass(frozen=True)
class PeriodData:
    tau_s: np.ndarray
    a: complex
    b: complex
    c: complex
    d: complex
    tau_c: np.ndarray
    tau_g2: np.ndarray
    tau11: complex
    tau22: complex
    T: complex
    checks: dict = field(default_factory=dict, compare=False)

    @property
    def humbert_form(self):
        return np.array([[self.tau11, 0.5], [0.5, self.tau22]])

    def to_json(self):
        return jsonio.encode({k: getattr(self, k) for k in self.__dataclass_fields__})

    @classmethod
    def from_json(cls, obj):
        kw = dict(obj)
        for key in ("tau_s", "tau_c", "tau_g2"):
            kw[key] = jsonio.decode_complex_array(kw[key])
        for key in ("a", "b", "c", "d", "tau11", "tau22", "T"):
            kw[key] = jsonio.decode_complex(kw[key])
        return cls(**kw)


def fay_pattern(a, b, c, d):
    return np.array([[a, b, b, b], [b, c, d, d], [b, d, c, d], [b, d, d, c]])


def humbert_relations(tau_g2):
    """Residuals of the two Humbert relations satisfied by the genus-2 quotient.

    Returns (3 t11 - t22 + 2, 1 + 3 t11 - t12^2 + 3 t11^2).
    """
    t11, t12, t22 = tau_g2[0, 0], tau_g2[0, 1], tau_g2[1, 1]
    return 3 * t11 - t22 + 2, 1 + 3 * t11 - t12 ** 2 + 3 * t11 ** 2


def build_period_matrices(cd):
    """Period matrices for the curve.

    Raises
    ------
    DegenerateError
        If 3 x1^2 - x4^2 is negligible against x4^2.
    ConventionError
        If the period matrix fails positivity or a cross-check.
    """
    x1, x4 = cd.x1, cd.x4
    x = np.array([x1, RHO * x1, RHO ** 2 * x1, x4])
    herm = float(np.real(np.conj(x) @ SIGNATURE @ x))
    if not herm < 0:
        raise ConventionError(f"conj(x) H x = {herm} is not negative")
    quad = x @ SIGNATURE @ x
    raw = RHO ** 2 * (SIGNATURE + (RHO ** 2 - 1) * np.outer(x, x) / quad)
    # orientation: conjugating by the signature makes Im(tau) positive
    tau_s = -SIGNATURE @ raw @ SIGNATURE
    th.check_period_matrix(tau_s, sym_tol=1e-10)
    den = 3 * x1 ** 2 - x4 ** 2
    if abs(den) < 1e-12 * abs(x4) ** 2:
        raise DegenerateError(f"3 x1^2 - x4^2 = {den} is degenerate")
    a = -(6 * x1 ** 2 - x4 ** 2 + RHO * (3 * x1 ** 2 + x4 ** 2)) / den
    b = (1 + 2 * RHO) * x1 * x4 / den
    c = (2 * x1 ** 2 - x4 ** 2 + RHO * (x1 ** 2 - x4 ** 2)) / den
    d = -(1 + 2 * RHO) * x1 ** 2 / den
    tau_c = fay_pattern(a, b, c, d)
    th.check_period_matrix(tau_c, sym_tol=1e-10)
    fay = sp.IntegerSymplectic(sp.REORDER) @ sp.IntegerSymplectic(sp.CYCLIC_BASIS)
    tau_c_sym = sp.act_on_period(fay, tau_s)
    tau_g2 = np.array([[a / 3, b], [b, c + 2 * d]])
    T = MonopoleIndex(cd.m, cd.n).T
    tau11 = 1 - 1 / (T - 2)
    tau22 = T / 12 - 0.5
    humbert = sp.act_on_period(sp.HUMBERT, tau_g2)
    normal = np.array([[tau11, 0.5], [0.5, tau22]])
    rel = humbert_relations(tau_g2)
    shifted = tau_g2 + np.diag([1.0, -1.0])
    t11, t12, t22 = shifted[0, 0], shifted[0, 1], shifted[1, 1]
    rel_shifted = (3 * t11 - t22 - 2, 1 - 3 * t11 - t12 ** 2 + 3 * t11 ** 2)
    checks = {
        "symplectic_residual": float(np.abs(tau_c_sym - tau_c).max()),
        "pattern_residual": float(np.abs(tau_c_sym - fay_pattern(
            tau_c_sym[0, 0], tau_c_sym[0, 1], tau_c_sym[1, 1], tau_c_sym[1, 2])).max()),
        "humbert_form_residual": float(np.abs(humbert - normal).max()),
        "humbert_relation_residual": float(max(abs(r) for r in rel)),
        "humbert_relation_shifted_residual": float(max(abs(r) for r in rel_shifted)),
        "conj_x_H_x": herm,
        "min_eig_tau_c": float(np.linalg.eigvalsh(tau_c.imag).min()),
    }
    if checks["symplectic_residual"] > 1e-9:
        raise ConventionError(f"cyclic-basis transform misses the closed form by {checks['symplectic_residual']:.3e}")
    return PeriodData(
        tau_s=tau_s, a=complex(a), b=complex(b), c=complex(c), d=complex(d), tau_c=tau_c,
        tau_g2=tau_g2, tau11=complex(tau11), tau22=complex(tau22), T=complex(T), checks=checks,
    )


@dataclass(frozen=True)
class MonopoleVectors:
    U_hat: np.ndarray
    K_tilde: np.ndarray
    U_star: np.ndarray
    K_star: np.ndarray
    l_star: np.ndarray
    U_prime: np.ndarray
    l_prime: np.ndarray
    K_prime: np.ndarray
    lattice: tuple
    checks: dict = field(default_factory=dict, compare=False)

    def to_json(self):
        return jsonio.encode({k: getattr(self, k) for k in self.__dataclass_fields__})

    @classmethod
    def from_json(cls, obj):
        kw = dict(obj)
        for key in ("U_hat", "K_tilde", "U_star", "K_star", "l_star", "U_prime", "l_prime", "K_prime"):
            kw[key] = jsonio.decode_complex_array(kw[key])
        kw["lattice"] = tuple(int(v) for v in kw["lattice"])
        return cls(**kw)


def winding_scale(cd):
    """Prefactor of the winding vector: 3 chi^(1/3)."""
    return 3.0 * cd.chi_cbrt


def transformed_closed_forms(cd, T):
    """Closed forms of U', l', K' in terms of T."""
    up = cd.C0 * np.array([(-1 + 1j * SQRT3) * T / (36 * (T - 2)), -(3 + 1j * SQRT3) * T / 216])
    lp = np.array([-(T - 3) / (3 * (T - 2)), 1 / 6])
    kp = np.array([4 / 3 - 1 / (3 * (T - 2)), T / 12 - 1 / 6])
    return up, lp, kp


def build_vectors(cd, pd, lattice_tol=1e-8):
    """Winding vector, half-period and their transforms.

    Raises
    ------
    ConventionError
        If 2 U_hat is not the expected lattice vector within ``lattice_tol``.
    """
    idx = MonopoleIndex(cd.m, cd.n)
    x1, x4 = cd.x1, cd.x4
    den = 3 * x1 ** 2 - x4 ** 2
    scale = winding_scale(cd)
    U_hat = scale * np.array([-x4, x1, x1, x1]) / den
    ones = np.ones(4)
    K_tilde = 0.5 * ones + 0.5 * ones @ pd.tau_c
    nvec, mvec = idx.lattice_vector
    lat_res = float(np.abs(2 * U_hat - np.array(nvec) - np.array(mvec) @ pd.tau_c).max())
    if lat_res > lattice_tol:
        raise ConventionError(f"2U misses the lattice vector by {lat_res:.3e} for {idx.pair}")
    # same vector from the symmetric basis, transported
    u_sym = -scale * np.array([x1 / x4 ** 2, RHO * x1 / x4 ** 2, RHO ** 2 * x1 / x4 ** 2, -1 / x4])
    fay = sp.IntegerSymplectic(sp.REORDER) @ sp.IntegerSymplectic(sp.CYCLIC_BASIS)
    u_moved = sp.act_on_vector(fay, pd.tau_s, u_sym)
    U_star = np.array([U_hat[0] / 3, U_hat[1]])
    K_star = np.array([K_tilde[0] / 3, K_tilde[1]])
    l_star = np.array([1 / 3, 0.0], dtype=complex)
    normal = pd.humbert_form
    U_prime = sp.act_on_vector(sp.HUMBERT, pd.tau_g2, U_star)
    l_prime = sp.act_on_vector(sp.HUMBERT, pd.tau_g2, l_star)
    K_prime = sp.act_on_vector(sp.HUMBERT, pd.tau_g2, K_star) + sp.characteristic_shift(sp.HUMBERT, normal)
    up, lp, kp = transformed_closed_forms(cd, pd.T)
    twice_k = 2 * K_tilde
    coeff = np.linalg.solve(pd.tau_c.imag.T, twice_k.imag)
    checks = {
        "lattice_residual": lat_res,
        "transport_residual": float(np.abs(u_moved - U_hat).max()),
        "U_prime_residual": float(np.abs(U_prime - up).max()),
        "l_prime_residual": float(np.abs(l_prime - lp).max()),
        "K_prime_residual": float(np.abs(K_prime - kp).max()),
        "half_period_residual": float(max(
            np.abs(coeff - np.round(coeff)).max(),
            np.abs(twice_k.real - np.round(coeff) @ pd.tau_c.real
                   - np.round(twice_k.real - np.round(coeff) @ pd.tau_c.real)).max())),
    }
    return MonopoleVectors(
        U_hat=U_hat, K_tilde=K_tilde, U_star=U_star, K_star=K_star, l_star=l_star,
        U_prime=U_prime, l_prime=l_prime, K_prime=K_prime, lattice=tuple(nvec) + tuple(mvec),
        checks=checks,
    )


_FAY_CHARS = tuple(
    th.ThetaCharacteristic((0, 0), (th.Fraction(k, 3), 0)) for k in range(3)
)


def fay_accola_ratio(pd, vec=None, z=(0.0, 0.0), tol=1e-13):
    """theta(3 z0, z1, z1, z1 | tau_c) / prod_k theta[0; k/3, 0](z | tau_g2).

    ``vec`` is accepted for interface symmetry with the other stages and is
    not used.

    Raises
    ------
    DivisorCollisionError
        If a denominator factor nearly vanishes at ``z``.
    """
    z = np.asarray(z, dtype=complex)
    big = np.array([3 * z[0], z[1], z[1], z[1]])
    mn, tn = th.riemann_theta_scaled(big, pd.tau_c, tol=tol)
    total_m = complex(mn)
    total_t = float(tn)
    for ch in _FAY_CHARS:
        md, td = th.riemann_theta_scaled(z, pd.tau_g2, ch, tol=tol)
        if abs(md) < 1e-8:
            raise DivisorCollisionError(f"genus-2 factor {ch.b} vanishes near z={z}")
        total_m /= complex(md)
        total_t -= float(td)
    return total_m * math.exp(total_t)


def _theta3_null_difference(tau_small, tau_big, tol=1e-17):
    """theta3(0|tau_small) - theta3(0|tau_big) summed term by term."""
    out = 0.0
    n = 1
    while True:
        t1 = cmath.exp(1j * math.pi * n * n * tau_small)
        t2 = cmath.exp(1j * math.pi * n * n * tau_big)
        out += 2 * (t1 - t2)
        if abs(t1) < tol * max(abs(out), 1e-300):
            return out
        n += 1


def theta_p(T):
    """p = 3 theta3^2(0|T/2) / theta3^2(0|T/6) with p - 1 and 3 - p.

    The differences are formed from term-by-term differences of theta
    series so they keep full relative precision at both ends of (1, 3).
    """
    T = complex(T)
    a2 = th.jacobi_theta(3, 0.0, T / 2)
    a6 = th.jacobi_theta(3, 0.0, T / 6)
    p = 3 * a2 ** 2 / a6 ** 2
    # 3 - p from the direct series
    d = _theta3_null_difference(T / 6, T / 2)
    three_minus = 3 * d * (a6 + a2) / a6 ** 2
    # p - 1 after tau -> -1/tau: p = theta3^2(0|s) / theta3^2(0|3s), s = -2/T
    s = -2.0 / T
    b1 = th.jacobi_theta(3, 0.0, s)
    b3 = th.jacobi_theta(3, 0.0, 3 * s)
    e = _theta3_null_difference(s, 3 * s)
    minus_one = e * (b1 + b3) / b3 ** 2
    return p.real, minus_one.real, three_minus.real


def _b_from_p(p, pm1, tmp):
    num = p ** 6 - 45 * p ** 4 + 135 * p ** 2 - 27
    den = 9 * p * pm1 * (p + 1) * (-tmp) * (p + 3)
    return -SQRT3 * num / den


def b_via_theta_constants(idx):
    """b from theta constants at T alone.

    The closed formula in p produces the coefficient of the reflected curve
    zeta -> -zeta; its sign is flipped to match :func:`solve_curve`.
    """
    if not isinstance(idx, MonopoleIndex):
        idx = MonopoleIndex(*idx)
    p, pm1, tmp = theta_p(idx.T)
    return -_b_from_p(p, pm1, tmp)


def _k_pair_from_m(M):
    kp = -RHO * (RHO * M + 1) * (RHO * M - 1) ** 3 / ((M + 1) * (M - 1) ** 3)
    km = -RHO * (RHO * M - 1) * (RHO * M + 1) ** 3 / ((M - 1) * (M + 1) ** 3)
    return kp, km


@dataclass(frozen=True)
class JacobiModuli:
    theta: tuple
    algebraic: tuple
    ramanujan: tuple
    p: float
    p_from_M: complex
    M: complex

    def to_json(self):
        return jsonio.encode({k: getattr(self, k) for k in self.__dataclass_fields__})


def jacobi_moduli(idx, cd=None):
    """Squared Jacobi moduli (k+^2, k-^2) by three routes.

    The algebraic route uses M = K/L with L = (b^2+4)^(1/6) and K the cube
    root of 2i - b lying in arg (-2pi/3, -pi/3), read with the opposite
    orientation (complex conjugate).  That is the branch on which
    M = (p + i sqrt3)/(p - i sqrt3) holds with p from the theta constants.
    """
    if not isinstance(idx, MonopoleIndex):
        idx = MonopoleIndex(*idx)
    if cd is None:
        cd = solve_curve(idx)
    T = idx.T
    k_theta = tuple(
        (th.jacobi_theta(2, 0.0, tau) ** 4 / th.jacobi_theta(3, 0.0, tau) ** 4).real
        for tau in (T / 6, T / 2)
    )
    b = cd.b
    L = (b * b + 4.0) ** (1.0 / 6.0)
    K = RHO ** 2 * complex(2j - b) ** (1.0 / 3.0)
    M = K.conjugate() / L
    k_alg = tuple(v.real if abs(v.imag) < 1e-9 * max(1.0, abs(v)) else v for v in _k_pair_from_m(M))
    p, _, tmp = theta_p(T)
    k_ram = ((p + 1) ** 3 * tmp / (16 * p), (p + 1) * tmp ** 3 / (16 * p ** 3))
    p_from_M = 1j * SQRT3 * (M + 1) / (M - 1)
    return JacobiModuli(theta=k_theta, algebraic=k_alg, ramanujan=k_ram, p=p, p_from_M=p_from_M, M=M)


def run_pipeline(idx):
    """Solve the curve and build matrices and vectors."""
    if not isinstance(idx, MonopoleIndex):
        idx = MonopoleIndex(*idx)
    cd = solve_curve(idx)
    pd = build_period_matrices(cd)
    vec = build_vectors(cd, pd)
    return cd, pd, vec
