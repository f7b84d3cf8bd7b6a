"""Zeros of the reduced elliptic functions h_k on the segment lambda in (0, 2).

For an index (m, n) with modulus T = 2 i sqrt3 (n+m)/(2n-m) put

    h_k(y) = (theta3/theta2)(i sqrt3 y + k T/3 | T)
             + (-1)^k (theta2/theta3)(y + k/3 | T/3),     k in {-1, 0, 1},

and H = h_{-1} h_0 h_1 on the line y = lambda (n+m) rho / 3.  The curve
gives a monopole exactly when H has no zero for lambda strictly inside
(0, 2).

Zeros are found from grid minima of |h_k|, polished by Newton's method
in the complex lambda plane (h_k is meromorphic there), kept only if they
land back on the real segment, and confirmed by a winding-number count.
"""

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from . import curve_pipeline as cp
from . import jsonio
from . import theta as th

__all__ = [
    "EllipticContext",
    "ZeroRecord",
    "VanishingReport",
    "reduce_k",
    "h_k",
    "h_k_derivative",
    "g_k",
    "H",
    "f_k",
    "genus4_line",
    "count_zeros",
    "verify_identities",
    "verify_periodicities",
    "mudots_solutions",
    "equivalence_chain",
    "endpoint_orders",
]

RHO = cp.RHO
SQRT3 = math.sqrt(3.0)


def reduce_k(k):
    """Representative of k mod 3 in {-1, 0, 1}."""
    return ((int(k) + 1) % 3) - 1


@dataclass(frozen=True)
class EllipticContext:
    """Modulus T together with n + m and the parity of m."""

    T: complex
    np_m: int
    m_parity: int

    def __post_init__(self):
        if not complex(self.T).imag > 0:
            raise th.ModulusError(f"Im T must be positive, got {self.T}")

    @classmethod
    def from_index(cls, idx):
        if not isinstance(idx, cp.MonopoleIndex):
            idx = cp.MonopoleIndex(*idx)
        return cls(T=idx.T, np_m=idx.n + idx.m, m_parity=idx.m % 2)

    @property
    def slope(self):
        """dy/dlambda = (n+m) rho / 3."""
        return self.np_m * RHO / 3.0

    def y_of(self, lam):
        return np.asarray(lam) * self.slope


def _h_terms(ctx, y, k):
    """The two signed quotients of h_k and the smaller denominator size."""
    k = reduce_k(k)
    T = ctx.T
    y = np.asarray(y, dtype=complex)
    r1, s1 = th.jacobi_ratio(3, 2, 1j * SQRT3 * y + k * T / 3, T)
    r2, s2 = th.jacobi_ratio(2, 3, y + k / 3, T / 3)
    return r1, (-1) ** k * r2, np.minimum(s1, s2)


def _h_raw(ctx, y, k):
    """h_k(y) and the smallest normalised denominator; never raises."""
    r1, r2, size = _h_terms(ctx, y, k)
    return r1 + r2, size


def _g_raw(ctx, y, k):
    """Both theta arguments of h_k moved by T/2; never raises."""
    k = reduce_k(k)
    T = ctx.T
    y = np.asarray(y, dtype=complex)
    r1, s1 = th.jacobi_ratio(3, 2, 1j * SQRT3 * y + k * T / 3 + T / 2, T)
    r2, s2 = th.jacobi_ratio(2, 3, y + k / 3 + T / 2, T / 3)
    return r1 + (-1) ** k * r2, np.minimum(s1, s2)


def _h_deriv_raw(ctx, y, k):
    k = reduce_k(k)
    T = ctx.T
    y = np.asarray(y, dtype=complex)
    z1 = 1j * SQRT3 * y + k * T / 3
    z2 = y + k / 3
    t4a = th.jacobi_theta(4, 0.0, T)
    t4b = th.jacobi_theta(4, 0.0, T / 3)
    a1, _ = th.jacobi_ratio(1, 2, z1, T)
    a4, _ = th.jacobi_ratio(4, 2, z1, T)
    b1, _ = th.jacobi_ratio(1, 3, z2, T / 3)
    b4, _ = th.jacobi_ratio(4, 3, z2, T / 3)
    d1 = math.pi * t4a * t4a * a1 * a4
    d2 = -math.pi * t4b * t4b * b1 * b4
    return 1j * SQRT3 * d1 + (-1) ** k * d2


def _out(value, y):
    return complex(value) if np.ndim(y) == 0 else value


def h_k(ctx, y, k, tol=1e-12):
    """h_k(y), with k reduced mod 3.

    Raises
    ------
    PoleProximityError
        If either theta denominator nearly vanishes.
    """
    val, size = _h_raw(ctx, y, k)
    if np.any(size < 1e3 * tol):
        raise th.PoleProximityError(f"h_{reduce_k(k)} has a pole near y={y}")
    return _out(val, y)


def h_k_derivative(ctx, y, k):
    """Analytic derivative dh_k/dy."""
    return _out(_h_deriv_raw(ctx, y, k), y)


def g_k(ctx, y, k, tol=1e-12):
    """h_k with each theta argument moved by the half period T/2.

    Both quotients are inverted by this move, so
    g_k = (-1)^k h_k / (quotient_I * quotient_II) and g_k shares the zeros
    of h_k away from the poles.  This is not h_k(y + T/2): the first
    argument carries the factor i sqrt3.
    """
    val, size = _g_raw(ctx, y, k)
    if np.any(size < 1e3 * tol):
        raise th.PoleProximityError(f"g_{reduce_k(k)} has a pole near y={y}")
    return _out(val, y)


def H(ctx, y, tol=1e-12):
    """Product h_{-1} h_0 h_1."""
    out = 1.0
    for k in (-1, 0, 1):
        out = out * h_k(ctx, y, k, tol)
    return out


def f_k(ctx, pd, vec, lam, k):
    """Genus-2 theta on the shifted line: theta(lam U* + K* + k l* | tau_g2)."""
    lam = np.asarray(lam, dtype=complex)
    z = lam[..., None] * vec.U_star + vec.K_star + reduce_k(k) * vec.l_star
    val = th.riemann_theta(z, pd.tau_g2)
    return val


def _f_scaled(pd, vec, k):
    shift = vec.K_star + reduce_k(k) * vec.l_star

    def fn(lam):
        lam = np.atleast_1d(np.asarray(lam, dtype=complex))
        z = lam[:, None] * vec.U_star + shift
        mant, _, der = th.riemann_theta_scaled(z, pd.tau_g2, direction=vec.U_star)
        return mant, der

    return fn


def genus4_line(pd, vec, lam, sign=-1):
    """theta(lam U_hat + sign K_tilde | tau_c)."""
    lam = np.asarray(lam, dtype=complex)
    z = lam[..., None] * vec.U_hat + sign * vec.K_tilde
    return th.riemann_theta(z, pd.tau_c)


def _g4_scaled(pd, vec, sign=-1):
    def fn(lam):
        lam = np.atleast_1d(np.asarray(lam, dtype=complex))
        z = lam[:, None] * vec.U_hat + sign * vec.K_tilde
        mant, _, der = th.riemann_theta_scaled(z, pd.tau_c, direction=vec.U_hat)
        return mant, der

    return fn


def _h_line(ctx, k):
    def fn(lam):
        lam = np.atleast_1d(np.asarray(lam, dtype=complex))
        y = lam * ctx.slope
        val, _ = _h_raw(ctx, y, k)
        return val, _h_deriv_raw(ctx, y, k) * ctx.slope

    def ref(lam):
        r1, r2, _ = _h_terms(ctx, lam * ctx.slope, k)
        return float(abs(r1) + abs(r2))

    fn.reference = ref
    return fn


@dataclass
class ZeroRecord:
    lam: float
    k: int
    residual: float
    winding: int
    y: complex
    denominator: float = float("nan")
    rho_images: tuple = ()

    def to_json(self):
        return jsonio.encode(self.__dict__)


def _winding(fn, centre, radius, start=128, cap=8192):
    """Winding number of fn around the circle |lam - centre| = radius."""
    n = start
    while True:
        ang = np.linspace(0.0, 2.0 * math.pi, n, endpoint=False)
        vals, _ = fn(centre + radius * np.exp(1j * ang))
        if np.any(~np.isfinite(vals)) or np.any(vals == 0):
            return 0, False
        steps = np.angle(np.roll(vals, -1) / vals)
        if np.abs(steps).max() < math.pi / 4 or n >= cap:
            return int(round(steps.sum() / (2.0 * math.pi))), bool(np.abs(steps).max() < math.pi / 2)
        n *= 2


def _local_minima(mag):
    inner = np.arange(1, len(mag) - 1)
    keep = (mag[inner] <= mag[inner - 1]) & (mag[inner] < mag[inner + 1])
    return inner[keep]


def _refine(fn, lam0, dlam, max_iter=80, step_tol=1e-9):
    """Complex Newton from lam0, run until the step stops shrinking.

    Returns (lam, converged); converged means the last accepted step was
    below ``step_tol`` and the iterate stayed within four grid cells.
    """
    z = complex(lam0)
    last = math.inf
    for _ in range(max_iter):
        v, dv = fn(z)
        v, dv = complex(v[0]), complex(dv[0])
        if v == 0:
            return z, True
        if dv == 0 or not (np.isfinite(v) and np.isfinite(dv)):
            break
        step = v / dv
        if abs(step) >= last and last < step_tol:
            break
        z -= step
        last = abs(step)
        if abs(z - lam0) > 4 * dlam:
            return z, False
        if last < 1e-15 * max(1.0, abs(z)):
            break
    return z, last < step_tol


def _line_zeros(fn, lam, vals, tol, lo=0.0, hi=2.0):
    """Zeros on the open segment (lo, hi) from grid samples ``vals``.

    The residual at a refined zero is |fn| divided by ``fn.reference(lam)``
    when fn carries one (the size of the cancelling terms), otherwise by
    the median of |vals|.

    Returns (zeros, ambiguous) where zeros are (lam, residual, winding, ok)
    and ambiguous lists grid minima that looked like zeros but did not
    survive refinement.
    """
    mag = np.abs(vals)
    mag = np.where(np.isfinite(mag), mag, np.inf)
    finite = mag[np.isfinite(mag)]
    scale = float(np.median(finite)) if finite.size else 1.0
    eps = 1e-4 * scale
    dlam = float(lam[1] - lam[0])
    zeros = []
    ambiguous = []
    for i in _local_minima(mag):
        z, converged = _refine(fn, lam[i], dlam)
        on_line = converged and abs(z.imag) < 1e-8 and lo + 1e-9 < z.real < hi - 1e-9
        if on_line:
            v, _ = fn(z.real)
            ref = fn.reference(z.real) if hasattr(fn, "reference") else scale
            residual = float(abs(v[0])) / ref
            if residual <= tol:
                if any(abs(z.real - r[0]) < 0.25 * dlam for r in zeros):
                    continue
                wind, clean = _winding(fn, z.real, dlam)
                zeros.append((z.real, residual, wind, clean))
                if wind == 0:
                    ambiguous.append((float(lam[i]), float(mag[i] / scale), "winding 0"))
                continue
        if mag[i] < eps:
            ambiguous.append((float(lam[i]), float(mag[i] / scale), "unconfirmed minimum"))
    return zeros, ambiguous


def _slope(lam, mag):
    good = np.isfinite(mag) & (mag > 0)
    return float(np.polyfit(np.log(lam[good]), np.log(mag[good]), 1)[0])


def endpoint_orders(ctx, lo=1e-4, hi=1e-2, points=24):
    """Fitted exponents of |h_k| and |H| in lambda at lambda = 0 and 2."""
    mu = np.logspace(math.log10(lo), math.log10(hi), points)
    out = {}
    for end, lam in (("0", mu), ("2", 2.0 - mu)):
        prod = np.ones(points, dtype=complex)
        for k in (-1, 0, 1):
            val, _ = _h_raw(ctx, ctx.y_of(lam), k)
            prod = prod * val
            out[f"h{k}@{end}"] = _slope(mu, np.abs(val))
        out[f"H@{end}"] = _slope(mu, np.abs(prod))
    return out


@dataclass
class VanishingReport:
    index: tuple
    zeros: list
    endpoint_slopes: dict
    endpoint_orders: dict
    verdict: bool
    conjecture_count: int
    ambiguous: list = field(default_factory=list)
    grid: int = 2048
    tol: float = 1e-9
    T: complex = 0j

    @property
    def zero_count(self):
        return sum(max(z.winding, 0) if z.winding else 1 for z in self.zeros)

    @property
    def conjecture_match(self):
        return self.zero_count == self.conjecture_count

    def to_json(self):
        return {
            "index": list(self.index),
            "T": jsonio.encode(complex(self.T)),
            "zeros": [z.to_json() for z in self.zeros],
            "zero_count": self.zero_count,
            "conjecture_count": self.conjecture_count,
            "conjecture_match": self.conjecture_match,
            "endpoint_slopes": self.endpoint_slopes,
            "endpoint_orders": self.endpoint_orders,
            "verdict": "monopole" if self.verdict else "not monopole",
            "ambiguous": [list(a) for a in self.ambiguous],
            "grid": self.grid,
            "tol": self.tol,
        }

    @classmethod
    def from_json(cls, obj):
        zeros = []
        for z in obj["zeros"]:
            z = dict(z)
            z["y"] = jsonio.decode_complex(z["y"])
            z["rho_images"] = tuple(z.get("rho_images", ()))
            zeros.append(ZeroRecord(**z))
        return cls(
            index=tuple(obj["index"]),
            zeros=zeros,
            endpoint_slopes=dict(obj["endpoint_slopes"]),
            endpoint_orders=dict(obj["endpoint_orders"]),
            verdict=obj["verdict"] == "monopole",
            conjecture_count=int(obj["conjecture_count"]),
            ambiguous=[tuple(a) for a in obj["ambiguous"]],
            grid=int(obj["grid"]),
            tol=float(obj["tol"]),
            T=jsonio.decode_complex(obj["T"]),
        )

    def csv_rows(self):
        rows = [("lambda", "k", "abs_residual", "winding")]
        for z in self.zeros:
            rows.append((repr(z.lam), z.k, repr(z.residual), z.winding))
        return rows

    def to_csv(self):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerows(self.csv_rows())
        return buf.getvalue()


def count_zeros(idx, grid=2048, tol=1e-9):
    """Locate the zeros of H(y(lambda)) for lambda in (0, 2).

    Parameters
    ----------
    idx : MonopoleIndex or (m, n)
    grid : int
        Number of lambda samples, at least 512.
    tol : float
        Largest accepted |h_k| at a refined zero, relative to the summed
        size of the two theta quotients that cancel there.

    Returns
    -------
    VanishingReport
    """
    if grid < 512:
        raise ValueError(f"grid must be at least 512, got {grid}")
    if not isinstance(idx, cp.MonopoleIndex):
        idx = cp.MonopoleIndex(*idx)
    ctx = EllipticContext.from_index(idx)
    lam = np.linspace(0.0, 2.0, grid)
    y = ctx.y_of(lam)
    zeros = []
    ambiguous = []
    for k in (-1, 0, 1):
        vals, _ = _h_raw(ctx, y, k)
        found, amb = _line_zeros(_h_line(ctx, k), lam, vals, tol)
        for lz, res, wind, _clean in found:
            yz = lz * ctx.slope
            _, den = _h_raw(ctx, yz, k)
            images = []
            for rot in (RHO, RHO ** 2):
                v, _ = _h_raw(ctx, rot * yz, k)
                images.append(float(abs(v)) / max(1e-300, float(np.median(np.abs(vals[np.isfinite(vals)])))))
            zeros.append(ZeroRecord(lam=float(lz), k=k, residual=res, winding=wind, y=complex(yz),
                                    denominator=float(den), rho_images=tuple(images)))
        ambiguous.extend((a[0], k, a[1], a[2]) for a in amb)
    zeros.sort(key=lambda z: (z.lam, z.k))
    slopes = endpoint_orders(ctx)
    orders = {key: int(round(v)) for key, v in slopes.items()}
    confirmed = [z for z in zeros if z.winding != 0]
    return VanishingReport(
        index=idx.pair, zeros=zeros, endpoint_slopes=slopes, endpoint_orders=orders,
        verdict=not confirmed, conjecture_count=idx.conjectured_zeros, ambiguous=ambiguous,
        grid=grid, tol=tol, T=idx.T,
    )


def verify_identities(tau):
    """Residuals of the theta-quotient identities at thirds of periods.

    Checked: (theta3/theta2)(tau/3 | tau) = (theta2/theta3)(1/3 | tau/3),
    the companion derivative identity, and the chain
    t32(tau/3) = t32(-tau/3) = t32(2 tau/3) = t23(1/3|tau/3) = -t23(2/3|tau/3).
    Residuals are relative to max(1, |terms|).
    """
    tau = complex(tau)
    if not tau.imag > 0:
        raise th.ModulusError(f"Im(tau) must be positive, got {tau}")
    t3 = tau / 3
    left = th.theta_ratio_32(t3, tau)
    right = th.theta_ratio_23(1 / 3, t3)
    relation = abs(left - right) / max(1.0, abs(left))
    t4a = th.jacobi_theta(4, 0.0, tau)
    t4b = th.jacobi_theta(4, 0.0, t3)
    a1, _ = th.jacobi_ratio(1, 2, t3, tau)
    a4, _ = th.jacobi_ratio(4, 2, t3, tau)
    b1, _ = th.jacobi_ratio(1, 3, 1 / 3, t3)
    b4, _ = th.jacobi_ratio(4, 3, 1 / 3, t3)
    first = t4a * t4a * 1j * SQRT3 * a1 * a4
    second = t4b * t4b * b1 * b4
    derrel = abs(first + second) / max(1.0, abs(first), abs(second))
    chain = [
        th.theta_ratio_32(-t3, tau),
        th.theta_ratio_32(2 * t3, tau),
        right,
        -th.theta_ratio_23(2 / 3, t3),
    ]
    chain_res = max(abs(c - left) for c in chain) / max(1.0, abs(left))
    return {"tau": tau, "relation": relation, "derrel": derrel, "chain": chain_res}


def _sample_points(ctx, count, rng):
    pts = []
    base1 = 2.0 * ctx.np_m / 3.0
    base2 = 2.0 * ctx.np_m * RHO / 3.0
    while len(pts) < count:
        y = rng.uniform() * base1 + rng.uniform() * base2
        ok = True
        for k in (-1, 0, 1):
            for shift in (0.0, ctx.T / 2):
                _, size = _h_raw(ctx, y + shift, k)
                if size < 1e-4:
                    ok = False
        if ok:
            pts.append(y)
    return np.array(pts)


def _rel(a, b):
    return float(np.max(np.abs(a - b) / np.maximum(1.0, np.abs(a))))


def _complex_zeros(ctx, k, rng, starts=24, iters=60):
    """Distinct zeros of h_k reached by Newton from random starts."""
    base1 = 2.0 * ctx.np_m / 3.0
    base2 = 2.0 * ctx.np_m * RHO / 3.0
    y = rng.uniform(size=starts) * base1 + rng.uniform(size=starts) * base2
    with np.errstate(all="ignore"):
        for _ in range(iters):
            v, _ = _h_raw(ctx, y, k)
            d = _h_deriv_raw(ctx, y, k)
            step = np.where(np.isfinite(v / d), v / d, 0.0)
            y = y - step
        val, size = _h_raw(ctx, y, k)
    keep = np.isfinite(val) & (np.abs(val) < 1e-10) & (size > 1e-6)
    found = []
    for z in y[keep]:
        if all(abs(z - w) > 1e-8 for w in found):
            found.append(complex(z))
    return found


# zeros closer than this (in normalised denominator size) to a pole of the
# transformed function cannot be resolved in double precision
_ZERO_POLE_GAP = 1e-2


def verify_periodicities(ctx, samples=50, seed=0):
    """Maximum relative residuals of the translation laws of h_k.

    Checked on ``samples`` random y:

    - h_k(y + 2(n+m)/3) = h_{k-[n+m]}(y)
    - h_k(y + 2(n+m) rho/3) = (-1)^(n+m) h_{k-[n+m]}(y) for m even and
      (-1)^(n+m) g_{k-[n+m]}(y) for m odd
    - invariance under y + 2(n+m) and y + 4(n+m) rho
    - g_k vanishes at complex zeros of h_k
    - zeros of h_{k-[n+m]} on the line are zeros of h_k one lambda-period on
    """
    rng = np.random.default_rng(seed)
    y = _sample_points(ctx, samples, rng)
    nm = ctx.np_m
    shift = nm % 3
    res = dict.fromkeys(
        ("real_shift", "rho_shift", "period_real", "period_rho", "g_zero_set", "lambda_shift_zero_set"), 0.0)
    for k in (-1, 0, 1):
        kp = k - shift
        base, _ = _h_raw(ctx, y, k)
        moved, _ = _h_raw(ctx, y + 2.0 * nm / 3.0, k)
        res["real_shift"] = max(res["real_shift"], _rel(moved, _h_raw(ctx, y, kp)[0]))
        moved, _ = _h_raw(ctx, y + 2.0 * nm * RHO / 3.0, k)
        if ctx.m_parity == 0:
            target = (-1) ** nm * _h_raw(ctx, y, kp)[0]
        else:
            target = (-1) ** nm * _g_raw(ctx, y, kp)[0]
        res["rho_shift"] = max(res["rho_shift"], _rel(moved, target))
        per, _ = _h_raw(ctx, y + 2.0 * nm, k)
        res["period_real"] = max(res["period_real"], _rel(per, base))
        per, _ = _h_raw(ctx, y + 4.0 * nm * RHO, k)
        res["period_rho"] = max(res["period_rho"], _rel(per, base))
        scale = float(np.median(np.abs(base)))
        for yz in _complex_zeros(ctx, k, rng):
            g, size = _g_raw(ctx, yz, k)
            if size > _ZERO_POLE_GAP and np.isfinite(g):
                res["g_zero_set"] = max(res["g_zero_set"], float(abs(g)) / max(1.0, scale))
        for yz in _complex_zeros(ctx, kp, rng):
            v, size = _h_raw(ctx, yz + 2.0 * nm * RHO / 3.0, k)
            if size > _ZERO_POLE_GAP:
                res["lambda_shift_zero_set"] = max(res["lambda_shift_zero_set"], float(abs(v)) / max(1.0, scale))
    return res


def mudots_solutions(r_abs, tol=1e-8):
    """Whether h_{-1} vanishes at y = 2 rho / 3 when |R| = r_abs.

    Equivalent form: (theta3/theta2)((r+2) T/6 | T) = (theta2/theta3)(r T/6 + 1/3 | T/3)
    with T = 2 i sqrt3 / r.
    """
    r = float(r_abs)
    if not r > 0:
        raise ValueError(f"|R| must be positive, got {r_abs}")
    T = 2j * SQRT3 / r
    lhs, s1 = th.jacobi_ratio(3, 2, (r + 2) * T / 6, T)
    rhs, s2 = th.jacobi_ratio(2, 3, r * T / 6 + 1 / 3, T / 3)
    if min(s1, s2) < 1e-9:
        return False
    return bool(abs(lhs - rhs) <= tol * max(1.0, abs(lhs)))


def equivalence_chain(idx, grid=1024, tol=1e-9):
    """Zero sets on (0, 2) of the genus-4 line, of f_k and of h_{k-1}.

    Returns a dict with the three zero lists and whether they agree to
    within one grid cell, including the f_k <-> h_{k-1} index shift.
    """
    if not isinstance(idx, cp.MonopoleIndex):
        idx = cp.MonopoleIndex(*idx)
    cd, pd, vec = cp.run_pipeline(idx)
    ctx = EllipticContext.from_index(idx)
    lam = np.linspace(0.0, 2.0, grid)
    cell = float(lam[1] - lam[0])
    out = {"index": idx.pair, "grid": grid, "cell": cell}
    g4 = {}
    for sign, label in ((-1, "minus"), (1, "plus")):
        fn = _g4_scaled(pd, vec, sign)
        vals, _ = fn(lam)
        found, _ = _line_zeros(fn, lam, vals, tol)
        g4[label] = sorted(z[0] for z in found if z[2] != 0)
    f_zeros = []
    h_zeros = []
    for k in (-1, 0, 1):
        fn = _f_scaled(pd, vec, k)
        vals, _ = fn(lam)
        found, _ = _line_zeros(fn, lam, vals, tol)
        f_zeros.extend((z[0], k) for z in found if z[2] != 0)
        hk = reduce_k(k - 1)
        vals, _ = _h_raw(ctx, ctx.y_of(lam), hk)
        found, _ = _line_zeros(_h_line(ctx, hk), lam, vals, tol)
        h_zeros.extend((z[0], k) for z in found if z[2] != 0)
    f_zeros.sort()
    h_zeros.sort()

    def same(a, b):
        return len(a) == len(b) and all(abs(x - y) <= cell for x, y in zip(sorted(a), sorted(b)))

    def same_pairs(a, b):
        return len(a) == len(b) and all(ka == kb and abs(x - y) <= cell for (x, ka), (y, kb) in zip(a, b))

    out["genus4_minus"] = g4["minus"]
    out["genus4_plus"] = g4["plus"]
    out["f_zeros"] = f_zeros
    out["h_zeros"] = h_zeros
    out["agree"] = bool(
        same(g4["minus"], [z[0] for z in f_zeros])
        and same(g4["minus"], g4["plus"])
        and same_pairs(f_zeros, h_zeros)
    )
    return out
