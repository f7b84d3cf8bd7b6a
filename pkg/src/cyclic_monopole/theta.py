"""Jacobi and Riemann theta functions by centred, truncated lattice sums.

Conventions
-----------
theta3(z|tau) = sum_n exp(i pi n^2 tau + 2 pi i n z), period 1 in z,
nome exp(i pi tau).  theta2 shifts n -> n + 1/2, theta4 inserts (-1)^n and
theta1 = -theta[1/2, 1/2], so that theta1(z) = 2 q^(1/4) sin(pi z) + ...

Every sum is centred on its dominant term and returned as a pair
``(mantissa, log_scale)`` by the ``*_scaled`` variants, which keeps
ratios finite when the arguments have large imaginary parts.
"""

import functools
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

__all__ = [
    "ModulusError",
    "PoleProximityError",
    "TruncationError",
    "ThetaCharacteristic",
    "check_period_matrix",
    "jacobi_theta",
    "jacobi_theta_scaled",
    "jacobi_ratio",
    "theta_ratio_32",
    "theta_ratio_23",
    "theta_ratio_32_derivative",
    "theta_ratio_23_derivative",
    "riemann_theta",
    "riemann_theta_scaled",
]


class ModulusError(ValueError):
    """The modulus or period matrix is outside the Siegel upper half space."""


class PoleProximityError(ArithmeticError):
    """A theta quotient was requested too close to a zero of its denominator."""


class TruncationError(ArithmeticError):
    """The lattice box needed for the requested tolerance exceeds the cap."""


MAX_BOX_RADIUS = 64


def _to_fraction(v):
    if isinstance(v, Fraction):
        return v
    if isinstance(v, (list, tuple)) and len(v) == 2:
        return Fraction(int(v[0]), int(v[1]))
    if isinstance(v, float):
        return Fraction(v).limit_denominator(10**6)
    return Fraction(v)


@dataclass(frozen=True)
class ThetaCharacteristic:
    """Rational characteristic (a, b) stored as exact fractions."""

    a: tuple
    b: tuple

    def __post_init__(self):
        a = tuple(_to_fraction(x) for x in self.a)
        b = tuple(_to_fraction(x) for x in self.b)
        if len(a) != len(b):
            raise ValueError(f"characteristic halves differ in length: {len(a)} vs {len(b)}")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @classmethod
    def zero(cls, g):
        return cls((0,) * g, (0,) * g)

    @property
    def g(self):
        return len(self.a)

    def arrays(self):
        """Float copies of (a, b)."""
        return (np.array([float(x) for x in self.a]), np.array([float(x) for x in self.b]))

    def negated(self):
        return ThetaCharacteristic(tuple(-x for x in self.a), tuple(-x for x in self.b))

    def shifted(self, p, q):
        """Characteristic (a + p, b + q) for integer vectors p, q."""
        return ThetaCharacteristic(
            tuple(x + int(v) for x, v in zip(self.a, p)),
            tuple(x + int(v) for x, v in zip(self.b, q)),
        )

    def reduced(self):
        """Reduce into [0, 1)^2g.

        Returns the reduced characteristic and the phase ``phi`` (a
        fraction of a full turn) with
        theta[self](z) = exp(2 pi i phi) * theta[reduced](z).
        """
        a0 = tuple(x - math.floor(x) for x in self.a)
        b0 = tuple(x - math.floor(x) for x in self.b)
        q = [math.floor(x) for x in self.b]
        phi = sum((x * v for x, v in zip(a0, q)), Fraction(0))
        phi -= math.floor(phi)
        return ThetaCharacteristic(a0, b0), phi

    def to_json(self):
        return {
            "a": [[x.numerator, x.denominator] for x in self.a],
            "b": [[x.numerator, x.denominator] for x in self.b],
        }

    @classmethod
    def from_json(cls, obj):
        return cls(tuple(obj["a"]), tuple(obj["b"]))


# (a, b, sign) for theta_1..theta_4
_JACOBI_CHAR = {1: (0.5, 0.5, -1.0), 2: (0.5, 0.0, 1.0), 3: (0.0, 0.0, 1.0), 4: (0.0, 0.5, 1.0)}


def _gaussian_radius(y, tol):
    """Half-width K with sum_{|d| >= K} exp(-pi y d^2) well below tol."""
    target = max(tol, 1e-300) * 1e-2
    k = 1
    while True:
        tail = 2.0 * math.exp(-math.pi * y * k * k) / (1.0 - math.exp(-2.0 * math.pi * y * k))
        if tail < target:
            return k + 1
        k += 1


def _check_tau(tau):
    tau = complex(tau)
    if not tau.imag > 0:
        raise ModulusError(f"Im(tau) must be positive, got tau={tau}")
    return tau


def jacobi_theta_scaled(kind, z, tau, tol=1e-15):
    """Jacobi theta as ``(mantissa, log_scale)``; value = mantissa * exp(log_scale).

    Vectorised over ``z``.
    """
    if kind not in _JACOBI_CHAR:
        raise ValueError(f"theta kind must be 1..4, got {kind}")
    tau = _check_tau(tau)
    a, b, sign = _JACOBI_CHAR[kind]
    z = np.asarray(z, dtype=complex)
    y = tau.imag
    centre = np.round(-z.imag / y - a)
    k = np.arange(-_gaussian_radius(y, tol), _gaussian_radius(y, tol) + 1)
    nn = centre[..., None] + k + a
    zb = z[..., None] + b
    expo = 1j * math.pi * nn * nn * tau + 2j * math.pi * nn * zb
    top = expo.real.max(axis=-1)
    mant = np.exp(expo - top[..., None]).sum(axis=-1)
    return sign * mant, top


def _finish(value, z):
    if np.ndim(z) == 0:
        return complex(value)
    return value


def jacobi_theta(kind, z, tau, tol=1e-15):
    """Jacobi theta function theta_kind(z | tau), kind in 1..4.

    Parameters
    ----------
    kind : int
        1, 2, 3 or 4.
    z : complex or array_like
    tau : complex
        Modulus with positive imaginary part.
    tol : float
        Truncation tolerance relative to the dominant term.

    Raises
    ------
    ModulusError
        If Im(tau) <= 0.
    """
    mant, top = jacobi_theta_scaled(kind, z, tau, tol)
    with np.errstate(over="ignore"):
        return _finish(mant * np.exp(top), z)


# kind swap under tau -> -1/tau
_IMAGINARY_SWAP = {1: 1, 2: 4, 3: 3, 4: 2}


def _ratio_direct(num, den, z, tau, tol):
    mn, tn = jacobi_theta_scaled(num, z, tau, tol)
    md, td = jacobi_theta_scaled(den, z, tau, tol)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        ratio = mn / md * np.exp(tn - td)
    return ratio, np.abs(md)


def jacobi_ratio(num, den, z, tau, tol=1e-15):
    """theta_num/theta_den at (z | tau) and the normalised denominator size.

    The second output is |denominator| relative to its dominant term;
    it is small only near a zero of the denominator.

    For |tau| < 1 the quotient is evaluated at (z/tau | -1/tau), where the
    series converges fast and does not cancel; the automorphy factors
    common to all four thetas drop out of the quotient.
    """
    tau = _check_tau(tau)
    z = np.asarray(z, dtype=complex)
    shift = 2 * math.floor((tau.real + 1) / 2)
    factor = 1.0
    if shift:
        # theta1, theta2 gain exp(i pi/2) per unit shift of tau by 2
        turns = (num in (1, 2)) - (den in (1, 2))
        factor = np.exp(0.5j * math.pi * turns * (shift // 2))
        tau = tau - shift
    if abs(tau) >= 1:
        ratio, size = _ratio_direct(num, den, z, tau, tol)
        return factor * ratio, size
    ratio, size = _ratio_direct(_IMAGINARY_SWAP[num], _IMAGINARY_SWAP[den], z / tau, -1 / tau, tol)
    factor *= (1j if num == 1 else 1) / (1j if den == 1 else 1)
    return factor * ratio, size


def _guarded_ratio(num, den, z, tau, tol):
    ratio, size = jacobi_ratio(num, den, z, tau)
    if np.any(size < 1e3 * tol):
        where = np.asarray(z)[size < 1e3 * tol] if np.ndim(z) else z
        raise PoleProximityError(
            f"theta{den} denominator vanishes near z={where} (tau={tau})"
        )
    return _finish(ratio, z)


def theta_ratio_32(z, tau, tol=1e-12):
    """(theta3/theta2)(z | tau); raises :class:`PoleProximityError` near poles."""
    return _guarded_ratio(3, 2, z, tau, tol)


def theta_ratio_23(z, tau, tol=1e-12):
    """(theta2/theta3)(z | tau); raises :class:`PoleProximityError` near poles."""
    return _guarded_ratio(2, 3, z, tau, tol)


def theta_ratio_32_derivative(z, tau, tol=1e-12):
    """d/dz (theta3/theta2)(z|tau) = pi theta4(0)^2 theta1 theta4 / theta2^2."""
    t4 = jacobi_theta(4, 0.0, tau)
    r12, size = jacobi_ratio(1, 2, z, tau)
    r42, _ = jacobi_ratio(4, 2, z, tau)
    if np.any(size < 1e3 * tol):
        raise PoleProximityError(f"theta2 vanishes near z={z} (tau={tau})")
    return _finish(math.pi * t4 * t4 * r12 * r42, z)


def theta_ratio_23_derivative(z, tau, tol=1e-12):
    """d/dz (theta2/theta3)(z|tau) = -pi theta4(0)^2 theta1 theta4 / theta3^2."""
    t4 = jacobi_theta(4, 0.0, tau)
    r13, size = jacobi_ratio(1, 3, z, tau)
    r43, _ = jacobi_ratio(4, 3, z, tau)
    if np.any(size < 1e3 * tol):
        raise PoleProximityError(f"theta3 vanishes near z={z} (tau={tau})")
    return _finish(-math.pi * t4 * t4 * r13 * r43, z)


def check_period_matrix(tau, sym_tol=1e-12):
    """Return ``tau`` as a complex array after validating it.

    Raises
    ------
    ModulusError
        If ``tau`` is not symmetric or Im(tau) is not positive definite.
    """
    tau = np.atleast_2d(np.asarray(tau, dtype=complex))
    if tau.shape[0] != tau.shape[1]:
        raise ModulusError(f"period matrix must be square, got shape {tau.shape}")
    scale = max(1.0, float(np.abs(tau).max()))
    if np.abs(tau - tau.T).max() > sym_tol * scale:
        raise ModulusError("period matrix is not symmetric")
    eig = np.linalg.eigvalsh(tau.imag)
    if eig.min() <= 0:
        raise ModulusError(f"Im(tau) is not positive definite (eigenvalues {eig})")
    return tau


def _shell_count(r, lam_min, g):
    return (2.0 * r / math.sqrt(lam_min) + 1.0) ** g


def _ellipsoid_radius(g, lam_min, tol):
    """Radius R (in the Im(tau) norm) for a tail bound below tol."""
    target = max(tol, 1e-300) * 1e-2
    r = 0.5
    while True:
        tail = sum(
            _shell_count(r + j + 1, lam_min, g) * math.exp(-math.pi * (r + j) ** 2)
            for j in range(60)
        )
        if tail < target:
            return r
        r += 0.25


@functools.lru_cache(maxsize=64)
def _offsets(y_bytes, g, radius):
    y = np.frombuffer(y_bytes, dtype=float).reshape(g, g)
    yinv = np.linalg.inv(y)
    half = math.ceil(radius * math.sqrt(max(np.diag(yinv).max(), 0.0)))
    if half > MAX_BOX_RADIUS:
        raise TruncationError(f"lattice box radius {half} exceeds the cap {MAX_BOX_RADIUS}")
    rng = np.arange(-half, half + 1)
    pts = np.array(list(itertools.product(rng, repeat=g)), dtype=float)
    quad = np.einsum("ki,ij,kj->k", pts, y, pts)
    keep = pts[quad <= radius * radius]
    keep.setflags(write=False)
    return keep


def riemann_theta_scaled(z, tau, char=None, tol=1e-12, chunk=400000, direction=None):
    """Riemann theta with characteristic as ``(mantissa, log_scale)``.

    ``z`` has shape (..., g); the leading axes are evaluated in one pass.
    With ``direction`` given, the directional derivative along it is
    returned as a third output sharing the same scale.
    """
    tau = check_period_matrix(tau)
    g = tau.shape[0]
    z = np.asarray(z, dtype=complex)
    if z.shape[-1] != g:
        raise ValueError(f"argument length {z.shape[-1]} does not match genus {g}")
    if char is None:
        a = np.zeros(g)
        b = np.zeros(g)
    else:
        if char.g != g:
            raise ValueError("characteristic genus does not match period matrix")
        a, b = char.arrays()
    lead = z.shape[:-1]
    zz = z.reshape(-1, g)
    y = np.ascontiguousarray(tau.imag)
    eig = np.linalg.eigvalsh(y)
    radius = _ellipsoid_radius(g, eig[0], tol)
    # every fractional offset of the centre is within this Y-norm
    radius += 0.5 * math.sqrt(g * eig[-1])
    offs = _offsets(y.tobytes(), g, round(radius, 6))
    centre = np.round(-np.linalg.solve(y, zz.imag.T).T - a)
    step = max(1, chunk // max(1, len(offs)))
    mant = np.empty(len(zz), dtype=complex)
    top = np.empty(len(zz))
    deriv = None if direction is None else np.empty(len(zz), dtype=complex)
    for s in range(0, len(zz), step):
        nn = centre[s:s + step, None, :] + offs[None, :, :] + a
        quad = np.einsum("pki,ij,pkj->pk", nn, tau, nn)
        lin = np.einsum("pki,pi->pk", nn, zz[s:s + step] + b)
        expo = 1j * math.pi * quad + 2j * math.pi * lin
        t = expo.real.max(axis=1)
        terms = np.exp(expo - t[:, None])
        mant[s:s + step] = terms.sum(axis=1)
        top[s:s + step] = t
        if deriv is not None:
            slope = 2j * math.pi * (nn @ np.asarray(direction, dtype=complex))
            deriv[s:s + step] = (terms * slope).sum(axis=1)
    if deriv is not None:
        return mant.reshape(lead), top.reshape(lead), deriv.reshape(lead)
    return mant.reshape(lead), top.reshape(lead)


def riemann_theta(z, tau, char=None, tol=1e-12):
    """Riemann theta function theta[a, b](z | tau).

    theta[a,b](z|tau) = sum_n exp(i pi (n+a) tau (n+a) + 2 pi i (n+a)(z+b)).

    Parameters
    ----------
    z : array_like, shape (..., g)
    tau : array_like, shape (g, g)
        Symmetric with positive definite imaginary part.
    char : ThetaCharacteristic, optional
    tol : float
        Bound on the neglected tail relative to the dominant term.

    Raises
    ------
    ModulusError
        If Im(tau) is not positive definite.
    TruncationError
        If the required lattice box exceeds the radius cap.
    """
    mant, top = riemann_theta_scaled(z, tau, char, tol)
    with np.errstate(over="ignore"):
        val = mant * np.exp(top)
    if np.ndim(val) == 0:
        return complex(val)
    return val
