"""Profile and branch data for |h_k| and |H|, with SVG rendering."""

import math

import numpy as np

from . import curve_pipeline as cp
from . import vanishing as vn

PROFILE_COLUMNS = ("lambda", "abs_h_minus1", "abs_h0", "abs_h1", "abs_H")
BRANCH_COLUMNS = ("abs_R", "s", "k", "vertical")


def profile_data(idx, grid=2048):
    """Columns (lambda, |h_-1|, |h_0|, |h_1|, |H|) on an even lambda grid.

    Poles show up as ``inf``.
    """
    if not isinstance(idx, cp.MonopoleIndex):
        idx = cp.MonopoleIndex(*idx)
    ctx = vn.EllipticContext.from_index(idx)
    lam = np.linspace(0.0, 2.0, grid)
    cols = [lam]
    prod = np.ones(grid)
    with np.errstate(all="ignore"):
        for k in (-1, 0, 1):
            val, _ = vn._h_raw(ctx, ctx.y_of(lam), k)
            mag = np.where(np.isfinite(val), np.abs(val), np.inf)
            cols.append(mag)
            prod = prod * mag
    cols.append(prod)
    return np.column_stack(cols)


def _ray_fn(ctx, k):
    # y = s rho along the ray through rho
    def fn(s):
        s = np.atleast_1d(np.asarray(s, dtype=complex))
        y = s * vn.RHO
        val, _ = vn._h_raw(ctx, y, k)
        return val, vn._h_deriv_raw(ctx, y, k) * vn.RHO

    return fn


def branch_data(rmin=0.25, rmax=12.0, rsteps=200, smax=2.0, grid=1024, tol=1e-9):
    """Real s in (0, smax] with h_k(s rho) = 0 as |R| runs over [rmin, rmax].

    The modulus is T = 2 i sqrt3 / |R|.  A row is marked vertical when the
    number of zeros of that h_k changes by an even number between
    neighbouring |R| values, which is where a branch folds back (vertical
    tangent in the (|R|, s) plane).

    Returns
    -------
    list of (abs_R, s, k, vertical) tuples, ordered by |R| then s.
    """
    if not 0 < rmin < rmax:
        raise ValueError(f"need 0 < rmin < rmax, got {rmin}, {rmax}")
    if rsteps < 2:
        raise ValueError("rsteps must be at least 2")
    s_grid = np.linspace(0.0, smax, grid)
    found = []
    for r in np.linspace(rmin, rmax, rsteps):
        ctx = vn.EllipticContext(T=2j * math.sqrt(3) / r, np_m=1, m_parity=0)
        per_k = {}
        for k in (-1, 0, 1):
            fn = _ray_fn(ctx, k)
            with np.errstate(all="ignore"):
                vals, _ = fn(s_grid)
                zeros, _ = vn._line_zeros(fn, s_grid, vals, tol, lo=0.0, hi=smax + 1e-9)
            per_k[k] = sorted(z[0] for z in zeros if z[2] != 0)
        found.append((float(r), per_k))
    rows = []
    for i, (r, per_k) in enumerate(found):
        for k in (-1, 0, 1):
            counts = [len(found[j][1][k]) for j in (i - 1, i + 1) if 0 <= j < len(found)]
            # a fold creates or destroys a pair; a single zero leaving
            # through s = smax changes the count by one
            vertical = any(c != len(per_k[k]) and (c - len(per_k[k])) % 2 == 0 for c in counts)
            rows.extend((r, s, k, vertical) for s in per_k[k])
    return rows


def _figure():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def render_profile_svg(data, path, title="", which="H"):
    """Write |H| (which="H") or the three |h_k| (which="hk") on a log axis."""
    plt = _figure()
    fig, ax = plt.subplots(figsize=(6.4, 3.6))
    lam = data[:, 0]
    if which == "H":
        ax.semilogy(lam, data[:, 4], lw=1.0, color="k", label="|H|")
    else:
        for col, k, color in ((1, -1, "C0"), (2, 0, "C1"), (3, 1, "C2")):
            ax.semilogy(lam, data[:, col], lw=1.0, color=color, label=f"|h_{k}|")
    ax.set_xlabel(r"$\lambda$")
    ax.set_xlim(0, 2)
    ax.legend(frameon=False, fontsize=8)
    if title:
        ax.set_title(title, fontsize=9)
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)


def render_branches_svg(rows, path):
    """Scatter the (|R|, s) zero loci, one colour per k; folds circled."""
    plt = _figure()
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    arr = np.array([(r, s, k, v) for r, s, k, v in rows], dtype=float).reshape(-1, 4)
    for k, color in ((-1, "C0"), (0, "C1"), (1, "C2")):
        sel = arr[:, 2] == k
        ax.plot(arr[sel, 0], arr[sel, 1], ".", ms=2, color=color, label=f"k={k}")
    fold = arr[:, 3] == 1
    ax.plot(arr[fold, 0], arr[fold, 1], "o", mfc="none", mec="k", ms=6, label="fold")
    ax.set_xlabel("|R|")
    ax.set_ylabel(r"$y/\rho$")
    ax.legend(frameon=False, fontsize=8)
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)
