"""Acceptance suite: ten end-to-end criteria at their pinned tolerances.

Each test prints one ``PASS``/``FAIL`` line (visible without ``-s``) before
asserting, so a full run doubles as a readable acceptance report.
"""

import math
import time

import mpmath as mp
import numpy as np
import pytest

from cyclic_monopole import curve_pipeline as cp
from cyclic_monopole import symplectic as sp
from cyclic_monopole import vanishing as vn

SCAN8 = [idx.pair for idx in cp.admissible_indices(8)]
SCAN12 = [idx.pair for idx in cp.admissible_indices(12)]


def report(capsys, number, title, ok, detail):
    with capsys.disabled():
        print(f"\n[criterion {number:2d}] {'PASS' if ok else 'FAIL'}  {title}: {detail}")


@pytest.fixture(scope="module")
def zero_scan():
    """count_zeros for every pair with |m|, |n| <= 12, with per-pair timing."""
    out = {}
    for pair in SCAN12:
        t0 = time.perf_counter()
        rep = vn.count_zeros(pair)
        out[pair] = (rep, time.perf_counter() - t0)
    return out


def test_tetrahedral_constants(capsys):
    ref = float(-mp.gamma(mp.mpf(1) / 6) * mp.gamma(mp.mpf(1) / 3)
                / (6 * mp.mpf(2) ** (mp.mpf(1) / 6) * mp.sqrt(mp.pi)))
    rows = []
    for pair in [(0, 1), (1, 1)]:
        t0 = time.perf_counter()
        cd = cp.solve_curve(cp.MonopoleIndex(*pair))
        rows.append((pair, abs(abs(cd.b) - 5 * math.sqrt(2)), abs(cd.chi_cbrt - ref), time.perf_counter() - t0))
    ok = all(db < 1e-9 and dc < 1e-8 and dt < 1.0 for _, db, dc, dt in rows)
    detail = "; ".join(f"{p}: ||b|-5sqrt2|={db:.1e}, chi err={dc:.1e}, {dt:.2f}s" for p, db, dc, dt in rows)
    report(capsys, 1, "tetrahedral constants", ok, detail)
    assert ok


def test_dual_route_b(capsys):
    t0 = time.perf_counter()
    bad = []
    worst_rel = 0.0
    for pair in SCAN8:
        b = cp.solve_curve(cp.MonopoleIndex(*pair)).b
        bt = cp.b_via_theta_constants(cp.MonopoleIndex(*pair))
        diff = abs(b - bt)
        worst_rel = max(worst_rel, diff / max(1.0, abs(b)))
        if not diff < 1e-8:
            bad.append((pair, b, diff))
    dt = time.perf_counter() - t0
    ok = not bad and dt < 30
    detail = (f"{len(SCAN8) - len(bad)}/{len(SCAN8)} pairs within 1e-8 absolute, worst relative "
              f"difference {worst_rel:.1e}, {dt:.1f}s")
    if bad:
        detail += "; outside: " + ", ".join(f"{p} (b={b:.3g}, diff={d:.2g})" for p, b, d in bad)
    report(capsys, 2, "dual-route b", ok, detail)
    assert ok


def test_lattice_membership(capsys):
    t0 = time.perf_counter()
    worst = 0.0
    for pair in SCAN8:
        _, pd, vec = cp.run_pipeline(cp.MonopoleIndex(*pair))
        nvec, mvec = cp.MonopoleIndex(*pair).lattice_vector
        resid = np.abs(2 * vec.U_hat - np.array(nvec) - np.array(mvec) @ pd.tau_c).max()
        worst = max(worst, float(resid))
    dt = time.perf_counter() - t0
    ok = worst < 1e-8 and dt < 10
    report(capsys, 3, "lattice membership", ok, f"max residual {worst:.1e} over {len(SCAN8)} pairs, {dt:.1f}s")
    assert ok


def test_fay_accola_constancy(capsys):
    t0 = time.perf_counter()
    rng = np.random.default_rng(2024)
    spreads = {}
    for pair in [(0, 1), (1, 1), (1, 2)]:
        _, pd, vec = cp.run_pipeline(cp.MonopoleIndex(*pair))
        vals = []
        while len(vals) < 20:
            z = 0.3 * rng.normal(size=2) + 0.3j * rng.normal(size=2)
            try:
                vals.append(cp.fay_accola_ratio(pd, vec, z=tuple(z)))
            except cp.DivisorCollisionError:
                continue
        vals = np.array(vals)
        spreads[pair] = float(np.abs(vals - vals[0]).max() / abs(vals[0]))
    dt = time.perf_counter() - t0
    ok = max(spreads.values()) < 1e-7 and dt < 60
    detail = ", ".join(f"{p}: {s:.1e}" for p, s in spreads.items()) + f"; {dt:.1f}s"
    report(capsys, 4, "Fay-Accola ratio constant in z", ok, detail)
    assert ok


def test_humbert_structure(capsys):
    t0 = time.perf_counter()
    rel = off = diag = 0.0
    for pair in SCAN8:
        cd, pd, _ = cp.run_pipeline(cp.MonopoleIndex(*pair))
        rel = max(rel, max(abs(r) for r in cp.humbert_relations(pd.tau_g2)))
        out = sp.act_on_period(sp.HUMBERT, pd.tau_g2)
        off = max(off, abs(out[0, 1] - 0.5), abs(out[1, 0] - 0.5))
        T = pd.T
        diag = max(diag, abs(out[0, 0] - (1 - 1 / (T - 2))), abs(out[1, 1] - (T / 12 - 0.5)))
    dt = time.perf_counter() - t0
    ok = rel < 1e-10 and off < 1e-10 and diag < 1e-10 and dt < 5
    report(capsys, 5, "Humbert structure", ok,
           f"relations {rel:.1e}, off-diagonal {off:.1e}, diagonal {diag:.1e}, {dt:.1f}s")
    assert ok


def test_identity_suite(capsys):
    t0 = time.perf_counter()
    rng = np.random.default_rng(7)
    taus = rng.uniform(-2, 2, 50) + 1j * rng.uniform(0.5, 4, 50)
    worst = max(max(r["relation"], r["derrel"]) for r in map(vn.verify_identities, taus))
    want = {"h-1@0": 2, "h1@0": 2, "H@0": 4, "H@2": 4}
    order_err = 0.0
    for pair in SCAN8:
        o = vn.endpoint_orders(vn.EllipticContext.from_index(pair))
        order_err = max(order_err, max(abs(o[k] - w) for k, w in want.items()))
    dt = time.perf_counter() - t0
    ok = worst < 1e-9 and order_err <= 0.1 and dt < 10
    report(capsys, 6, "quotient identities and endpoint orders", ok,
           f"identity residual {worst:.1e} on 50 tau, endpoint exponent error {order_err:.3f}, {dt:.1f}s")
    assert ok


def test_monopole_verdicts(capsys, zero_scan):
    monopoles = sorted(p for p in SCAN8 if zero_scan[p][0].verdict)
    dt = sum(zero_scan[p][1] for p in SCAN8)
    ok = monopoles == [(0, 1), (1, 1)] and dt < 300
    report(capsys, 7, "monopole verdicts", ok, f"verdict 'monopole' for {monopoles} of {len(SCAN8)} pairs, {dt:.1f}s")
    assert ok


def test_zero_count_conjecture(capsys, zero_scan):
    firm = [p for p in SCAN12 if abs(p[1]) <= 5]
    probe = [p for p in SCAN12 if abs(p[1]) > 5]
    misses = [(p, zero_scan[p][0].zero_count) for p in firm if not zero_scan[p][0].conjecture_match]
    probe_misses = [(p, zero_scan[p][0].zero_count, zero_scan[p][0].conjecture_count)
                    for p in probe if not zero_scan[p][0].conjecture_match]
    dt = sum(t for _, t in zero_scan.values())
    ok = not misses and dt < 600
    detail = (f"{len(firm) - len(misses)}/{len(firm)} pairs with |n| <= 5 match 2(|n|-1); "
              f"report-only 5 < |n| <= 12: {len(probe) - len(probe_misses)}/{len(probe)} match")
    if probe_misses:
        detail += " (mismatch: " + ", ".join(f"{p} {c} vs {w}" for p, c, w in probe_misses) + ")"
    report(capsys, 8, "zero-count conjecture", ok, detail + f", {dt:.1f}s")
    assert ok


def test_proof_table(capsys):
    t0 = time.perf_counter()
    found = [r for r in range(1, 13) if vn.mudots_solutions(r)]
    dt = time.perf_counter() - t0
    ok = found == [2, 3, 5, 6, 8, 9, 11, 12] and dt < 5
    report(capsys, 9, "proof table", ok, f"true for |R| in {found}, {dt:.2f}s")
    assert ok


def test_equivalence_chain(capsys):
    t0 = time.perf_counter()
    results = {pair: vn.equivalence_chain(pair) for pair in [(1, 2), (1, 3)]}
    dt = time.perf_counter() - t0
    ok = all(r["agree"] for r in results.values()) and dt < 120
    detail = ", ".join(f"{p}: {len(r['genus4_minus'])} zeros, agree={r['agree']}" for p, r in results.items())
    report(capsys, 10, "equivalence chain", ok, detail + f", {dt:.1f}s")
    assert ok
