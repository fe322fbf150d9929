"""Acceptance criteria, one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v``; the lines are collected into an
"acceptance criteria" section of the terminal summary (see ``conftest.py``).
"""

import csv
import itertools
import math
import sys
import time

import numpy as np
import pytest

from laserchannel import (
    LaserParams,
    QuadraticForm,
    adaptive_kraus_set,
    apply_channel,
    asymptotics,
    blocks_numeric,
    coherent_density,
    completeness_defect,
    entropy_closed,
    evolve,
    expectation,
    factorization_check,
    kraus_set,
    laser_blocks_closed,
    laser_gamma,
    mean_photon_closed,
    number_operator,
    rho_coherent_closed,
    von_neumann_entropy,
)
from laserchannel.cli import cmd_sweep

RATES = [(0.5, 1.0), (1.0, 1.0), (2.0, 1.0)]
AMPLITUDES = [0.0, 2.0]
TIMES = [0.1, 0.3]
# headroom for apply_channel: the upper half of the space must be empty
STATE_DIM = {0.5: 64, 1.0: 64, 2.0: 96}

ACCEPTANCE_LINES = []


def report(criterion, passed, detail):
    line = f"[{'PASS' if passed else 'FAIL'}] criterion {criterion}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert passed, line


@pytest.fixture(scope="module")
def grid_states():
    """Kraus, closed-form and RK4 states on the shared grid (criteria 2-4)."""
    start = time.perf_counter()
    rows = []
    for (g, kappa), z, t in itertools.product(RATES, AMPLITUDES, TIMES):
        p, dim = LaserParams(g, kappa), STATE_DIM[g]
        rho0 = coherent_density(z, dim)
        rows.append({
            "p": p, "z": z, "t": t, "dim": dim,
            "kraus": apply_channel(kraus_set(p, t, dim), rho0),
            "closed": rho_coherent_closed(z, p, t, dim),
            "rk4": evolve(rho0, p, t),
        })
    return rows, time.perf_counter() - start


def test_criterion_1_kraus_completeness():
    start = time.perf_counter()
    ks = adaptive_kraus_set(LaserParams(0.5, 1.0), 0.5, 32, probe_dim=8)
    defect = completeness_defect(ks, 8)
    elapsed = time.perf_counter() - start
    report(1, defect <= 1e-8 and elapsed < 5,
           f"completeness defect {defect:.2e} <= 1e-8 (j_max={ks.j_max}), {elapsed:.2f}s < 5s")


def test_criterion_2_three_way_equivalence(grid_states):
    rows, elapsed = grid_states
    worst = max(max(np.abs(r["kraus"] - r["closed"]).max(), np.abs(r["kraus"] - r["rk4"]).max(),
                    np.abs(r["closed"] - r["rk4"]).max()) for r in rows)
    report(2, worst <= 1e-7 and elapsed < 60,
           f"max pairwise entry deviation {worst:.2e} <= 1e-7 over {len(rows)} points, {elapsed:.1f}s < 60s")


def test_criterion_3_photon_number_law(grid_states):
    rows, _ = grid_states
    worst = 0.0
    for r in rows:
        n = expectation(r["rk4"], number_operator(r["dim"])).real
        worst = max(worst, abs(n - mean_photon_closed(r["z"], r["p"], r["t"])) / mean_photon_closed(r["z"], r["p"], r["t"]))
    balanced = all(mean_photon_closed(z, LaserParams(g, g), t) == abs(z) ** 2 + 2 * g * t
                   for g, z, t in itertools.product([0.5, 1, 2], [0, 2, 4, 1 + 1j], [0, 0.3, 1, 7.5]))
    report(3, worst <= 1e-6 and balanced,
           f"max relative deviation vs RK4 {worst:.2e} <= 1e-6; balanced |z|^2 + 2gt exact: {balanced}")


def test_criterion_4_entropy_law(grid_states):
    rows, _ = grid_states
    worst = max(abs(von_neumann_entropy(r["kraus"]) - entropy_closed(r["p"], r["t"])) for r in rows)
    target = 3 * math.log(3) - 2 * math.log(2)
    value = entropy_closed(LaserParams(1, 1), 1)
    report(4, worst <= 1e-6 and abs(value - target) <= 1e-6,
           f"max |S_kraus - S_closed| {worst:.2e} <= 1e-6; S(g=kappa=1, t=1) = {value:.7f} vs {target:.7f}")


def test_criterion_5_z_independence():
    p, t, dim = LaserParams(0.5, 1.0), 0.3, 64
    ks = kraus_set(p, t, dim)
    s = [von_neumann_entropy(apply_channel(ks, coherent_density(z, dim))) for z in (0, 1, 2)]
    spread = max(s) - min(s)
    report(5, spread <= 1e-7, f"entropy spread over z in {{0,1,2}} {spread:.2e} <= 1e-7")


def test_criterion_6_asymptotes():
    damp, gain, bal = LaserParams(0.5, 1.0), LaserParams(2.0, 1.0), LaserParams(1.0, 1.0)
    dn = abs(mean_photon_closed(4, damp, 20) - 1)
    ds = abs(entropy_closed(damp, 20) - 2 * math.log(2))
    slope = (entropy_closed(gain, 8) - entropy_closed(gain, 6)) / 2
    slope_err = abs(slope / (2 * (gain.g - gain.kappa)) - 1)
    db = abs(entropy_closed(bal, 1e4) - (1 + math.log(2 * bal.g * 1e4)))
    # the regime object carries the same asymptotes
    regimes = (asymptotics(4, damp).n_asymptote == pytest.approx(1)
               and asymptotics(4, gain).entropy["slope"] == 2)
    report(6, dn <= 1e-3 and ds <= 1e-3 and slope_err <= 0.01 and db <= 0.01 and regimes,
           f"damping |n-1|={dn:.1e}, |S-2ln2|={ds:.1e}; gain slope {slope:.5f} (rel err {slope_err:.1e}); "
           f"balanced |S-(1+ln 2gt)|={db:.1e} at t=1e4")


def test_criterion_7_symplectic_identities_and_blocks():
    start = time.perf_counter()
    rng = np.random.default_rng(2024)
    identities = 0.0
    for n in (1, 2, 3):
        for _ in range(50):
            x = rng.normal(size=(2 * n, 2 * n)) + 1j * rng.normal(size=(2 * n, 2 * n))
            x = x + x.T
            x *= 2 * rng.uniform() / np.linalg.norm(x, 2)
            identities = max(identities, max(blocks_numeric(QuadraticForm(n, x)).relation_residuals().values()))
    blocks = 0.0
    for g, kappa, t in itertools.product([0, 0.5, 1, 2], [0, 0.5, 1, 2], [0, 0.1, 0.5, 1]):
        p = LaserParams(g, kappa)
        blocks = max(blocks, np.abs(laser_blocks_closed(p, t).matrix() - blocks_numeric(laser_gamma(p, t)).matrix()).max())
    elapsed = time.perf_counter() - start
    report("7a", identities <= 1e-10 and blocks <= 1e-9 and elapsed < 30,
           f"block identities {identities:.1e} <= 1e-10; closed vs numeric blocks {blocks:.1e} <= 1e-9, {elapsed:.2f}s")


def test_criterion_7_factorization_dim16():
    # The brute-force side is exponentiated on a 16-level truncation; its error at
    # these points is set by that truncation, not by the factorization (see notes).
    start = time.perf_counter()
    devs = {(g, k, t): factorization_check(LaserParams(g, k), t, 16)
            for g, k, t in [(0.5, 1.0, 0.3), (1.0, 1.0, 0.2)]}
    elapsed = time.perf_counter() - start
    worst = max(devs.values())
    detail = ", ".join(f"(g={g}, kappa={k}, t={t}): {d:.2e}" for (g, k, t), d in devs.items())
    report("7b", worst <= 1e-8 and elapsed < 30, f"factorization at dim 16 {detail} (tol 1e-8), {elapsed:.2f}s")


def test_criterion_8_pure_damping():
    p, dim = LaserParams(0.0, 1.0), 32
    rho0 = coherent_density(1.0, dim)
    target = coherent_density(math.exp(-0.5), dim)
    states = {"kraus": apply_channel(kraus_set(p, 0.5, dim), rho0), "rk4": evolve(rho0, p, 0.5),
              "closed": rho_coherent_closed(1.0, p, 0.5, dim)}
    dev = max(np.abs(s - target).max() for s in states.values())
    ent = max(von_neumann_entropy(s) for s in states.values())
    report(8, dev <= 1e-8 and ent <= 1e-9 and entropy_closed(p, 0.5) == 0,
           f"deviation from |e^-0.5> {dev:.1e} <= 1e-8; entropy {ent:.1e} <= 1e-9")


def test_criterion_9_figure_series(tmp_path):
    out = tmp_path / "fig.csv"
    code = cmd_sweep([2.0, 1.0, 0.5], 1.0, 4, 10.0, 1000, str(out))
    with open(out, newline="") as fh:
        rows = list(csv.DictReader(fh))
    series = {}
    for r in rows:
        series.setdefault(float(r["g"]), []).append((float(r["t"]), float(r["S"]), float(r["specific_entropy"])))
    t = np.array([x[0] for x in series[2.0]])

    def column(g, k):
        return np.array([x[k] for x in series[g]])

    s2, s1, s05 = column(2.0, 1), column(1.0, 1), column(0.5, 1)
    i6, i8, i5, i10 = (int(np.argmin(abs(t - v))) for v in (6, 8, 5, 10))
    # g=2: linear growth with slope 2(g - kappa), specific entropy -> 0
    linear = abs((s2[i8] - s2[i6]) / (t[i8] - t[i6]) / 2 - 1) <= 0.01
    spec2 = column(2.0, 2)
    to_zero = bool(np.all(np.diff(spec2[100:]) < 0)) and spec2[-1] < 1e-6
    # g=kappa: logarithmic; the slope in ln t climbs toward 1 (0.97 on [5, 10])
    i1, i2 = (int(np.argmin(abs(t - v))) for v in (1, 2))
    log_slope = (s1[i10] - s1[i5]) / math.log(t[i10] / t[i5])
    early_slope = (s1[i2] - s1[i1]) / math.log(t[i2] / t[i1])
    long_code = cmd_sweep([1.0], 1.0, 4, 1000.0, 1000, str(tmp_path / "balanced.csv"))
    with open(tmp_path / "balanced.csv", newline="") as fh:
        long_rows = list(csv.DictReader(fh))
    late_slope = (float(long_rows[1000]["S"]) - float(long_rows[500]["S"])) / math.log(2)
    logarithmic = (long_code == 0 and early_slope < log_slope < 1 and abs(log_slope - 1) <= 0.05
                   and abs(late_slope - 1) <= 1e-3)
    # g=0.5: saturates at 2 ln 2
    saturating = abs(s05[-1] - 2 * math.log(2)) <= 1e-4 and abs(s05[-1] - s05[i8]) < 1e-3
    ordered = s2[i8] > s1[i8] > s05[i8]
    ok = code == 0 and len(series) == 3 and linear and to_zero and logarithmic and saturating and ordered
    report(9, ok, f"g=2 linear slope ok={linear}, S/n -> 0 ok={to_zero} ({spec2[-1]:.1e}); "
                  f"g=1 dS/dln t {early_slope:.3f} -> {log_slope:.3f} -> {late_slope:.5f}; g=0.5 S(10)={s05[-1]:.6f} vs 2ln2; order at t=8 ok={ordered}")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
