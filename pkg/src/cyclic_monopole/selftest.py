"""Invariant suites for every module, with negative-control hooks.

Each check returns a :class:`CheckResult` naming its module and invariant.
Hooks deliberately break one convention so tests can confirm the suites
notice:

``perturb-theta``
    moves the theta2 lattice offset from n + 1/2 to n + 1/4 inside the
    theta module.
``corrupt-symplectic``
    replaces the known-matrix table with a copy whose Bolza S generator has
    one sign flipped.
"""

import contextlib
import math
from dataclasses import dataclass

import numpy as np

from . import curve_pipeline as cp
from . import specfun as sf
from . import symplectic as sp
from . import theta as th
from . import vanishing as vn

HOOKS = ("perturb-theta", "corrupt-symplectic")


@dataclass
class CheckResult:
    module: str
    invariant: str
    passed: bool
    detail: str = ""

    @property
    def label(self):
        return f"{self.module}/{self.invariant}"


def _check(module, invariant, fn):
    try:
        ok, detail = fn()
    except Exception as exc:  # a crash is a failure of that invariant
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    return CheckResult(module, invariant, bool(ok), detail)


def _close(value, target, tol):
    err = abs(value - target)
    return err <= tol, f"|{value!r} - {target!r}| = {err:.3e} (tol {tol:g})"


# specfun

def _specfun_checks():
    yield "specfun", "gamma_recurrence", lambda: _close(sf.gamma(4.3), 3.3 * sf.gamma(3.3), 1e-12)
    # Gauss summation at z = 1
    a, b, c = 0.2, 0.3, 1.7
    gauss = sf.gamma(c) * sf.gamma(c - a - b) / (sf.gamma(c - a) * sf.gamma(c - b))
    yield "specfun", "gauss_sum", lambda: _close(sf.gauss_2f1(a, b, c, 1.0), gauss, 1e-12)
    yield "specfun", "symmetric_index_logit", lambda: _close(sf.solve_es_logit(1, 2), 0.0, 0.0)

    def tetra():
        cd = cp.solve_curve(cp.MonopoleIndex(0, 1))
        ref = -sf.gamma(1 / 6) * sf.gamma(1 / 3) / (6 * 2 ** (1 / 6) * math.sqrt(math.pi))
        return _close(cd.chi_cbrt, ref, 1e-8)

    yield "specfun", "tetrahedral_chi", tetra


# theta

def _theta_checks():
    yield "theta", "lemniscatic_value", lambda: _close(
        th.jacobi_theta(3, 0.0, 1j), math.pi ** 0.25 / math.gamma(0.75), 1e-13)
    yield "theta", "theta1_odd", lambda: _close(abs(th.jacobi_theta(1, 0.0, 0.3 + 1.1j)), 0.0, 1e-15)

    def quasi():
        z, tau = 0.3 + 0.1j, 2j
        ratio = th.jacobi_theta(3, z + tau, tau) / th.jacobi_theta(3, z, tau)
        return _close(ratio, np.exp(-1j * math.pi * tau - 2j * math.pi * z), 1e-12)

    yield "theta", "quasi_periodicity", quasi

    def diag():
        val = th.riemann_theta(np.zeros(2), np.diag([1j, 1j]))
        return _close(val, th.jacobi_theta(3, 0.0, 1j) ** 2, 1e-12)

    yield "theta", "diagonal_factorisation", diag

    def parity():
        tau = np.array([[1.1j, 0.2 + 0.3j], [0.2 + 0.3j, 0.9j + 0.1]])
        z = np.array([0.13 - 0.2j, 0.4 + 0.1j])
        ch = th.ThetaCharacteristic.from_json({"a": [[1, 3], [1, 2]], "b": [[0, 1], [2, 3]]})
        lhs = th.riemann_theta(z, tau, ch.negated())
        rhs = th.riemann_theta(-z, tau, ch)
        return _close(lhs, rhs, 1e-11)

    yield "theta", "characteristic_parity", parity

    def relation():
        worst = max(max(r["relation"], r["derrel"])
                    for r in map(vn.verify_identities, (1j, 4j * math.sqrt(3), 0.5 + 2j)))
        return worst < 1e-9, f"worst quotient-identity residual {worst:.3e}"

    yield "theta", "quotient_identities", relation


# symplectic

def _symplectic_checks():
    for name, rows in sp.KNOWN_MATRICES.items():
        yield "symplectic", f"is_symplectic[{name}]", (
            lambda rows=rows: (sp.is_symplectic(rows), "M J M^T = J"))

    def closure():
        M = sp.IntegerSymplectic(sp.BOLZA_S)
        N = sp.IntegerSymplectic(sp.HUMBERT)
        ch = th.ThetaCharacteristic.from_json({"a": [[1, 2], [0, 1]], "b": [[1, 3], [1, 2]]})
        step, _ = sp.act_on_characteristic(N, ch)
        two, _ = sp.act_on_characteristic(M, step)
        one, _ = sp.act_on_characteristic(M @ N, ch)
        diff = [(x - y) % 1 for x, y in zip(one.a + one.b, two.a + two.b)]
        return all(d == 0 for d in diff), f"componentwise difference mod 1: {diff}"

    yield "symplectic", "characteristic_closure_mod_1", closure

    def inverse():
        M = sp.IntegerSymplectic(sp.CYCLIC_BASIS)
        eye = (M @ M.inverse()).exact()
        return bool(np.all(eye == np.eye(8, dtype=int))), "M M^-1 = I"

    yield "symplectic", "inverse", inverse


# curve pipeline

def _pipeline_checks():
    state = {}

    def tetra_b():
        cd, pd, vec = cp.run_pipeline(cp.MonopoleIndex(0, 1))
        state.update(cd=cd, pd=pd, vec=vec)
        return _close(abs(cd.b), 5 * math.sqrt(2), 1e-9)

    yield "curve_pipeline", "tetrahedral_b", tetra_b
    yield "curve_pipeline", "lattice_membership", lambda: (
        state["vec"].checks["lattice_residual"] < 1e-8,
        f"residual {state['vec'].checks['lattice_residual']:.3e}")
    yield "curve_pipeline", "humbert_relations", lambda: (
        state["pd"].checks["humbert_relation_residual"] < 1e-10,
        f"residual {state['pd'].checks['humbert_relation_residual']:.3e}")
    yield "curve_pipeline", "dual_route_b", lambda: _close(
        cp.b_via_theta_constants(cp.MonopoleIndex(0, 1)), state["cd"].b, 1e-8)


# vanishing

def _vanishing_checks():
    ctx = vn.EllipticContext.from_index(cp.MonopoleIndex(1, 2))

    def endpoints():
        orders = vn.endpoint_orders(ctx)
        keys = ("h-1@0", "h1@0", "H@0", "H@2")
        want = (2, 2, 4, 4)
        err = max(abs(orders[k] - w) for k, w in zip(keys, want))
        return err < 0.1, f"largest slope deviation {err:.3f}"

    yield "vanishing", "endpoint_orders", endpoints

    def periods():
        res = vn.verify_periodicities(ctx)
        worst = max(res.values())
        return worst < 1e-8, f"worst residual {worst:.3e}"

    yield "vanishing", "translation_laws", periods
    yield "vanishing", "proof_table", lambda: (
        [r for r in range(1, 7) if vn.mudots_solutions(r)] == [2, 3, 5, 6], "true set in 1..6")

    def counts():
        rep = vn.count_zeros(cp.MonopoleIndex(1, 2), grid=512)
        return rep.zero_count == 2 and not rep.verdict, f"{rep.zero_count} zeros"

    yield "vanishing", "zero_count_small_index", counts

    def verdict():
        rep = vn.count_zeros(cp.MonopoleIndex(0, 1), grid=512)
        return rep.verdict and rep.zero_count == 0, f"{rep.zero_count} zeros"

    yield "vanishing", "tetrahedral_verdict", verdict


SUITES = {
    "specfun": _specfun_checks,
    "theta": _theta_checks,
    "symplectic": _symplectic_checks,
    "curve_pipeline": _pipeline_checks,
    "vanishing": _vanishing_checks,
}


@contextlib.contextmanager
def _hook(name):
    if name == "perturb-theta":
        saved = dict(th._JACOBI_CHAR)
        th._JACOBI_CHAR[2] = (0.25,) + saved[2][1:]
        try:
            yield
        finally:
            th._JACOBI_CHAR.clear()
            th._JACOBI_CHAR.update(saved)
    elif name == "corrupt-symplectic":
        saved = sp.KNOWN_MATRICES
        table = dict(saved)
        rows = [list(r) for r in table["bolza_s"]]
        rows[0][1] = -rows[0][1]
        table["bolza_s"] = tuple(tuple(r) for r in rows)
        sp.KNOWN_MATRICES = table
        try:
            yield
        finally:
            sp.KNOWN_MATRICES = saved
    else:
        raise ValueError(f"unknown hook {name!r}; choose from {HOOKS}")


def run_selftest(hooks=(), modules=None):
    """Run the invariant suites, optionally under negative-control hooks.

    Returns
    -------
    list of CheckResult
    """
    with contextlib.ExitStack() as stack:
        for name in hooks:
            stack.enter_context(_hook(name))
        results = []
        for module, suite in SUITES.items():
            if modules and module not in modules:
                continue
            for mod, inv, fn in suite():
                results.append(_check(mod, inv, fn))
    return results
