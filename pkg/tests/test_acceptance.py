"""Acceptance criteria, one pass/fail line each.

Run with ``pytest tests/test_acceptance.py`` or ``python3 tests/test_acceptance.py``.
"""

import time

import numpy as np
import pytest

from kitaev_mzm import (
    ChainParams,
    DotSweepSpec,
    GridSpec,
    build_majorana_matrix,
    bulk_gap,
    canonicalize,
    extract_zero_modes,
    ground_state_report,
    phase_boundary,
    scan_phase,
    scan_with_noise,
    sweep_bias,
)
from kitaev_mzm.canonical import window_envelope
from kitaev_mzm.cli import main as cli_main
from kitaev_mzm.fock import compare_with_canonical, random_draw
from kitaev_mzm.io import strip_timestamp
from kitaev_mzm.phase import count_topological, total_survival

ZERO_TOL = 0.002
ORACLE_TOL = 1e-9
ENVELOPE_FLOOR = 1e-12


def canon(n, delta, mu, t=1.0):
    return canonicalize(build_majorana_matrix(ChainParams(n, t, delta, 0.0, mu)))


def timed(bound):
    def wrap(func):
        def run():
            start = time.perf_counter()
            ok, detail = func()
            elapsed = time.perf_counter() - start
            in_time = elapsed < bound
            return ok and in_time, f"{detail}; {elapsed:.2f}s (limit {bound:g}s)"

        run.__name__ = func.__name__
        run.__doc__ = func.__doc__
        return run

    return wrap


@timed(0.1)
def criterion_1():
    """Exact Kitaev point."""
    c = canon(50, 1.0, 0.0)
    eps = c.epsilons
    e1 = np.zeros(100)
    e1[0] = 1.0
    e100 = np.zeros(100)
    e100[-1] = 1.0
    modes_ok = np.allclose(c.w[0], e1, atol=1e-10) and np.allclose(np.abs(c.w[1]), e100, atol=1e-10)
    dev = float(np.abs(eps[1:] - 2.0).max())
    ok = eps[0] <= 1e-12 and dev <= 1e-10 and modes_ok
    return ok, f"eps1={eps[0]:.2e}, max|eps_m-2|={dev:.2e}, unit modes={modes_ok}"


@timed(0.1)
def criterion_2():
    """Zero mode well inside the topological phase."""
    zm = extract_zero_modes(canon(50, 0.8, 0.4), ZERO_TOL)
    env1 = window_envelope(zm.gamma1_components, 50)
    # mode 2 sits on the right end; its far end is site 1
    env2 = window_envelope(zm.gamma2_components, 50)[::-1]
    dec1 = bool(np.all(np.diff(env1) < 0))
    live2 = env2[env2 > ENVELOPE_FLOOR]
    dec2 = bool(np.all(np.diff(live2) < 0))
    ok = zm.eps1 < ZERO_TOL and zm.localization > 0.99 and dec1 and dec2
    return ok, (f"eps1={zm.eps1:.2e}, localization={zm.localization:.6f}, "
                f"envelope decreasing: mode1={dec1}, mode2={dec2}")


@timed(0.1)
def criterion_3():
    """Near-critical zero modes spread over the chain."""
    zm = extract_zero_modes(canon(50, 0.2, 1.97), ZERO_TOL, require=False)
    return zm.localization < 0.9, f"localization={zm.localization:.4f} (need < 0.9), eps1={zm.eps1:.2e}"


@timed(30)
def criterion_4():
    """Canonical route agrees with brute-force Fock diagonalization."""
    rng = np.random.default_rng(7)
    worst = {"energy": 0.0, "densities": 0.0, "spectrum": 0.0}
    parity_bad = 0
    for _ in range(25):
        params, _pot = random_draw(rng, 2, 7)
        cmp = compare_with_canonical(params)
        for k in worst:
            worst[k] = max(worst[k], cmp[k])
        parity_bad += not cmp["parity_ok"]
    ok = max(worst.values()) < ORACLE_TOL and parity_bad == 0
    return ok, ", ".join(f"max {k} dev={v:.1e}" for k, v in worst.items()) + f", parity mismatches={parity_bad}"


@timed(1.0)
def criterion_5():
    """Bulk gap closes at |mu| = 2t and equals 2|Delta| at mu = 0."""
    closing = max(
        bulk_gap(ChainParams(50, 1.0, d, 0.0, m), k_samples=10001)
        for d in (0.2, 0.8, 1.0) for m in (-2.0, 2.0)
    )
    open_dev = max(abs(bulk_gap(ChainParams(50, 1.0, d, 0.0, 0.0), k_samples=10001) - 2 * d)
                   for d in (0.2, 0.8))
    ok = closing < 1e-6 and open_dev < 1e-9
    return ok, f"max gap at |mu|=2: {closing:.1e}, max |gap-2D| at mu=0: {open_dev:.1e}"


@timed(60)
def criterion_6():
    """Finite-size phase diagram."""
    grid = dict(delta_range=(0.05, 1.2, 40), mu_range=(0.0, 3.0, 120))
    big = scan_phase(GridSpec(n_sites=60, **grid))
    small = scan_phase(GridSpec(n_sites=8, **grid))
    deltas = GridSpec(n_sites=60, **grid).deltas()
    mus = GridSpec(n_sites=60, **grid).mus()
    d_near = float(deltas[np.argmin(np.abs(deltas - 0.8))])
    mu_star = dict(phase_boundary(big))[d_near]
    boundary_ok = mu_star is not None and abs(mu_star - 2.0) <= 0.05 * 2.0

    n_big, n_small = count_topological(big), count_topological(small)

    mu_near = float(mus[np.argmin(np.abs(mus - 0.4))])
    column = [p.has_zero_mode for p in big if p.mu == mu_near]
    first = column.index(True) if True in column else None
    threshold_ok = first is not None and first > 0 and all(column[first:])
    ok = boundary_ok and n_small < n_big and threshold_ok
    thr = f"{deltas[first]:.3f}" if first is not None else "none"
    return ok, (f"boundary mu*({d_near:.3f})={mu_star} (need 2 +/- 0.1), "
                f"cells N=8: {n_small} < N=60: {n_big}, threshold Delta at mu={mu_near:.3f}: {thr}")


@timed(0.1)
def criterion_7():
    """End-site density deficit and oscillations."""
    n = ground_state_report(canon(50, 0.8, 0.4)).densities
    deficit = 100 * (n[25] - n[0]) / n[25]
    weak = ground_state_report(canon(50, 0.2, 0.4)).densities
    dev = weak[:8] - weak[25]
    signs = np.sign(dev)
    run = 1
    best = 1
    for a, b in zip(signs[:-1], signs[1:]):
        run = run + 1 if a * b < 0 else 1
        best = max(best, run)
    ok = abs(deficit - 10.0) <= 3.0 and best >= 3
    return ok, f"end deficit={deficit:.2f}% (need 10 +/- 3), alternating run at Delta=0.2: {best} sites"


@timed(120)
def criterion_8():
    """Disorder robustness."""
    one = GridSpec(delta_range=(0.8, 0.8, 1), mu_range=(0.4, 0.4, 1), n_sites=31)
    frac = scan_with_noise(one, 1.0, 100, base_seed=1)[0].survival_fraction
    grid = GridSpec(delta_range=(0.05, 1.2, 40), mu_range=(0.0, 3.0, 120), n_sites=31)
    s1 = total_survival(scan_with_noise(grid, 1.0, 20, base_seed=2))
    s2 = total_survival(scan_with_noise(grid, 2.0, 20, base_seed=2))
    ok = frac > 0.9 and s2 < s1
    return ok, f"survival at V0=1: {frac:.2f} (need > 0.9), grid total V0=2: {s2:.2f} < V0=1: {s1:.2f}"


@timed(5)
def criterion_9():
    """Dot sweep amplitudes and the exact extended chain."""
    chain = ChainParams(50, 1.0, 0.8, 0.0, 0.4)
    sweeps = {
        scale: sweep_bias(DotSweepSpec(chain, -3.6, 4.4, 81, coupling_scale=scale), exact=True)
        for scale in (1.0, 0.1)
    }
    norm_dev = max(abs(abs(p.c1) ** 2 + abs(p.c2) ** 2 - 1) for pts in sweeps.values() for p in pts)
    cross_dev = 0.0
    widths = {}
    for scale, pts in sweeps.items():
        mid = min(pts, key=lambda p: abs(p.v - chain.mu))
        cross_dev = max(cross_dev, abs(abs(mid.c1) - 2**-0.5), abs(abs(mid.c2) - 2**-0.5))
        inside = [p.v for p in pts if 0.1 < abs(p.c1) ** 2 < 0.9]
        widths[scale] = max(inside) - min(inside) if inside else 0.0
    fine = sweeps[0.1]
    rel = max(abs(p.exact_e_plus - p.e_plus) / p.e_plus for p in fine)
    eps1 = max(p.exact_eps1 for p in fine)
    ok = norm_dev < 1e-12 and cross_dev < 1e-12 and widths[0.1] < widths[1.0] and rel < 0.1
    return ok, (f"norm dev={norm_dev:.1e}, crossing dev={cross_dev:.1e}, "
                f"window widths 0.1: {widths[0.1]:.2f} < 1.0: {widths[1.0]:.2f}, "
                f"dot level vs e_plus rel dev={rel:.3f}, max extended eps1={eps1:.1e}")


@timed(60)
def criterion_10():
    """Scans are byte-identical across reruns and worker counts."""
    import tempfile
    from pathlib import Path

    runs = {
        "phase-scan": ["phase-scan", "--sites", "60"],
        "noise-scan": ["noise-scan", "--sites", "31", "--v0", "1", "--seeds", "5",
                       "--delta-count", "12", "--mu-count", "24", "--base-seed", "3"],
    }
    same = {}
    with tempfile.TemporaryDirectory() as tmp:
        for name, argv in runs.items():
            texts = []
            for k, workers in enumerate(("1", "2", "1")):
                out = Path(tmp) / f"{name}-{k}.csv"
                if cli_main([*argv, "--workers", workers, "-o", str(out)]) != 0:
                    return False, f"{name} exited non-zero"
                texts.append(strip_timestamp(out.read_text()))
            same[name] = len(set(texts)) == 1
    return all(same.values()), ", ".join(f"{k} identical={v}" for k, v in same.items())


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9, criterion_10]


def report(number, func):
    ok, detail = func()
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {func.__doc__.strip()} {detail}"
    print(line)
    return ok, line


@pytest.mark.acceptance
@pytest.mark.parametrize("number", range(1, 11))
def test_criterion(number):
    import conftest

    ok, line = report(number, CRITERIA[number - 1])
    conftest.ACCEPTANCE_LINES.append(line)
    assert ok, line


if __name__ == "__main__":
    results = [report(i, f)[0] for i, f in enumerate(CRITERIA, start=1)]
    print(f"{sum(results)}/{len(results)} criteria pass")
