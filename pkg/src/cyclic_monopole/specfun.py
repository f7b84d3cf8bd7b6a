"""Real special functions: Gamma and the Gauss hypergeometric function.

The hypergeometric routine covers real arguments z <= 1.  The pieces used
by the curve solver need ``1 - z`` to full relative precision even when it
is far below machine epsilon, so the near-one branch accepts the
complement directly.
"""

import math

import numpy as np
from scipy.optimize import brentq
from scipy.special import digamma

__all__ = [
    "DomainError",
    "DivergenceError",
    "InvalidIndexError",
    "RootSolveError",
    "HypergeometricQuery",
    "gamma",
    "gauss_2f1",
    "hyp2f1_complement",
    "es_ratio_logit",
    "solve_es_logit",
    "solve_es_ratio",
    "check_index",
]


class DomainError(ValueError):
    """Argument outside the domain of a special function."""


class DivergenceError(ArithmeticError):
    """The hypergeometric series diverges at the requested point."""


class InvalidIndexError(ValueError):
    """(m, n) is not an admissible monopole index."""


class RootSolveError(ArithmeticError):
    """Root bracketing or refinement failed."""


_SERIES_MAX_TERMS = 4000
_EPS = np.finfo(float).eps


class HypergeometricQuery:
    """Parameters (a, b, c, z) of a real 2F1 evaluation."""

    __slots__ = ("a", "b", "c", "z")

    def __init__(self, a, b, c, z):
        self.a, self.b, self.c, self.z = float(a), float(b), float(c), float(z)
        if self.c <= 0 and self.c == math.floor(self.c):
            raise DomainError(f"c={self.c} is a non-positive integer")
        if self.z > 1:
            raise DomainError(f"z={self.z} > 1 lies on the branch cut")

    def __repr__(self):
        return f"HypergeometricQuery(a={self.a}, b={self.b}, c={self.c}, z={self.z})"


# parameter gaps closer than this to an integer are treated as integers
_INTEGER_TOL = 1e-12


def gamma(x):
    """Gamma function for positive real ``x``.

    Raises
    ------
    DomainError
        If ``x <= 0``.
    """
    x = float(x)
    if not x > 0:
        raise DomainError(f"gamma requires x > 0, got {x}")
    return math.gamma(x)


def _gamma_any(x):
    # Gamma away from the poles, used by connection coefficients
    if x <= 0 and x == math.floor(x):
        return math.inf
    return math.gamma(x)


def _rgamma(x):
    # 1/Gamma, zero at the poles
    if x <= 0 and x == math.floor(x):
        return 0.0
    return 1.0 / math.gamma(x)


def _series(a, b, c, z):
    """Plain Maclaurin series, intended for |z| <= 1/2."""
    term = 1.0
    total = 1.0
    for k in range(_SERIES_MAX_TERMS):
        term *= (a + k) * (b + k) / ((c + k) * (k + 1)) * z
        total += term
        if term == 0.0 or abs(term) < 0.25 * _EPS * abs(total):
            return total
    raise RootSolveError(f"2F1 series did not converge for z={z}")


def _near_one_integer(a, b, mm, w):
    """F(a, b; a+b+mm; 1-w) for integer mm >= 0 and 0 <= w <= 1/2."""
    c = a + b + mm
    finite = 0.0
    if mm > 0:
        pref = math.gamma(mm) * math.gamma(c) * _rgamma(a + mm) * _rgamma(b + mm)
        term = 1.0
        for k in range(mm):
            if k:
                term *= (a + k - 1) * (b + k - 1) / (k * (1 - mm + k - 1)) * w
            finite += term
        finite *= pref
    if w == 0.0:
        if mm == 0:
            raise DivergenceError("2F1 diverges at z=1 when c-a-b <= 0")
        return finite
    logw = math.log(w)
    pref = (-w) ** mm * math.gamma(c) * _rgamma(a) * _rgamma(b)
    if pref == 0.0:
        return finite
    # digamma values advanced by recurrence
    psi_1 = float(digamma(1.0))
    psi_m1 = float(digamma(mm + 1.0))
    psi_a = float(digamma(a + mm)) if not (a + mm <= 0 and a + mm == math.floor(a + mm)) else None
    psi_b = float(digamma(b + mm)) if not (b + mm <= 0 and b + mm == math.floor(b + mm)) else None
    if psi_a is None or psi_b is None:
        raise DomainError("logarithmic connection with non-positive integer a+m or b+m")
    coef = 1.0 / math.factorial(mm)
    total = 0.0
    for k in range(_SERIES_MAX_TERMS):
        contrib = coef * (logw - psi_1 - psi_m1 + psi_a + psi_b)
        total += contrib
        if k > 4 and abs(contrib) < 0.25 * _EPS * abs(total):
            break
        coef *= (a + mm + k) * (b + mm + k) / ((k + 1) * (k + 1 + mm)) * w
        psi_1 += 1.0 / (k + 1)
        psi_m1 += 1.0 / (k + 1 + mm)
        psi_a += 1.0 / (a + mm + k)
        psi_b += 1.0 / (b + mm + k)
    else:
        raise RootSolveError("logarithmic connection series did not converge")
    return finite - pref * total


def hyp2f1_complement(a, b, c, w):
    """Evaluate F(a, b; c; 1 - w) given the complement ``w`` in [0, 1/2].

    Uses the z -> 1 - z connection formula, including the logarithmic
    case when c - a - b is an integer.
    """
    a, b, c, w = float(a), float(b), float(c), float(w)
    if not 0.0 <= w <= 0.5 + 1e-15:
        raise DomainError(f"complement w={w} outside [0, 1/2]")
    s = c - a - b
    if abs(s - round(s)) < _INTEGER_TOL:
        # integer gap, possibly blurred by rounding in c - a - b
        mm = int(round(s))
        if mm >= 0:
            return _near_one_integer(a, b, mm, w)
        # Euler transform flips the sign of c - a - b
        if w == 0.0:
            raise DivergenceError("2F1 diverges at z=1 when c-a-b <= 0")
        return w ** s * _near_one_integer(c - a, c - b, -mm, w)
    if w == 0.0:
        if s <= 0:
            raise DivergenceError("2F1 diverges at z=1 when c-a-b <= 0")
        return math.gamma(c) * math.gamma(s) * _rgamma(c - a) * _rgamma(c - b)
    g_c = math.gamma(c)
    A = g_c * _gamma_any(s) * _rgamma(c - a) * _rgamma(c - b)
    B = g_c * _gamma_any(-s) * _rgamma(a) * _rgamma(b)
    out = 0.0
    if A != 0.0:
        out += A * _series(a, b, 1.0 - s, w)
    if B != 0.0:
        out += B * w ** s * _series(c - a, c - b, 1.0 + s, w)
    return out


def _positive_branch(a, b, c, z, w):
    # z in [0, 1], w = 1 - z supplied accurately
    if z <= 0.5:
        return _series(a, b, c, z)
    return hyp2f1_complement(a, b, c, w)


def gauss_2f1(a, b=None, c=None, z=None):
    """Gauss hypergeometric function 2F1(a, b; c; z) for real z <= 1.

    Accepts either four numbers or a single :class:`HypergeometricQuery`.

    Negative arguments are mapped by the Pfaff transformation
    z -> z/(z-1); arguments in (1/2, 1] go through the connection
    formula about z = 1.

    Raises
    ------
    DivergenceError
        At z = 1 when c - a - b <= 0.
    DomainError
        For z > 1 or c a non-positive integer.
    """
    if isinstance(a, HypergeometricQuery):
        q = a
    else:
        q = HypergeometricQuery(a, b, c, z)
    a, b, c, z = q.a, q.b, q.c, q.z
    if z == 1.0:
        # c - a - b = 0 can come out as +1e-16 for thirds
        if c - a - b <= _INTEGER_TOL:
            raise DivergenceError(f"2F1({a},{b};{c};1) diverges: c-a-b={c - a - b} <= 0")
        return math.gamma(c) * math.gamma(c - a - b) * _rgamma(c - a) * _rgamma(c - b)
    if z >= 0.0:
        return _positive_branch(a, b, c, z, 1.0 - z)
    if z >= -0.5:
        return _series(a, b, c, z)
    # Pfaff: F(a,b;c;z) = (1-z)^(-a) F(a, c-b; c; z/(z-1))
    one_minus = 1.0 - z
    u = -z / one_minus
    return one_minus ** (-a) * _positive_branch(a, c - b, c, u, 1.0 / one_minus)


_THIRD = 1.0 / 3.0
_TWO_THIRDS = 2.0 / 3.0


def _logit_split(s):
    """Return (t, 1 - t) for t = 1/(1 + exp(-s)), both to full precision."""
    if s >= 0:
        e = math.exp(-s)
        return 1.0 / (1.0 + e), e / (1.0 + e)
    e = math.exp(s)
    return e / (1.0 + e), 1.0 / (1.0 + e)


def _f_pair(s):
    """F(1/3, 2/3; 1; t) and F(1/3, 2/3; 1; 1 - t) in logit coordinates."""
    t, u = _logit_split(s)
    ft = _positive_branch(_THIRD, _TWO_THIRDS, 1.0, t, u)
    fu = _positive_branch(_THIRD, _TWO_THIRDS, 1.0, u, t)
    return ft, fu


def es_ratio_logit(s):
    """F(t)/F(1-t) with F = 2F1(1/3, 2/3; 1; .) and t = 1/(1 + exp(-s))."""
    ft, fu = _f_pair(s)
    return ft / fu


def check_index(m, n):
    """Validate an (m, n) pair, raising :class:`InvalidIndexError`."""
    if int(m) != m or int(n) != n:
        raise InvalidIndexError(f"indices must be integers, got ({m}, {n})")
    m, n = int(m), int(n)
    if math.gcd(m, n) != 1:
        raise InvalidIndexError(f"gcd({m}, {n}) = {math.gcd(m, n)} != 1")
    if (m + n) * (m - 2 * n) >= 0:
        raise InvalidIndexError(f"(m+n)(m-2n) = {(m + n) * (m - 2 * n)} is not negative")
    return m, n


def solve_es_logit(m, n, grid_points=64):
    """Solve F(t)/F(1-t) = (2n-m)/(m+n) for s = log(t/(1-t)).

    Working in the logit keeps t and 1 - t separately resolved when the
    root sits within 1e-30 of either end of (0, 1).
    """
    m, n = check_index(m, n)
    target = (2 * n - m) / (m + n)
    if 2 * n - m == m + n:
        # t <-> 1 - t symmetry puts the root at the midpoint
        return 0.0
    # F(t)/F(1-t) grows roughly linearly in |s| at the ends
    lo, hi = -8.0, 8.0
    for _ in range(200):
        if es_ratio_logit(lo) < target:
            break
        lo *= 2.0
    for _ in range(200):
        if es_ratio_logit(hi) > target:
            break
        hi *= 2.0
    f_lo = es_ratio_logit(lo) - target
    f_hi = es_ratio_logit(hi) - target
    if not (f_lo < 0 < f_hi):
        raise RootSolveError(
            f"no sign change for ({m},{n}): bracket [{lo}, {hi}] gives [{f_lo}, {f_hi}]"
        )
    grid = np.linspace(lo, hi, grid_points)
    vals = np.array([es_ratio_logit(x) for x in grid])
    if not np.all(np.diff(vals) > 0):
        raise RootSolveError(f"ratio is not increasing on the bracket [{lo}, {hi}]")
    s = brentq(lambda x: es_ratio_logit(x) - target, lo, hi, xtol=1e-300, rtol=4 * _EPS, maxiter=500)
    return s


def solve_es_ratio(m, n):
    """Root t in (0, 1) of F(t)/F(1-t) = (2n-m)/(m+n), F = 2F1(1/3, 2/3; 1; .).

    For extreme indices t may round to 0 or 1 in double precision; use
    :func:`solve_es_logit` when the complement matters.
    """
    return _logit_split(solve_es_logit(m, n))[0]
