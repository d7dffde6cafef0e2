"""Zero-mode phase diagrams over (|Delta|, mu) grids, clean and disordered."""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .canonical import ZERO_MODE_TOL, quasiparticle_energies
from .chain import ChainParams, NoiseConfig, build_majorana_matrix, sample_noise

WORKERS_ENV = "KITAEV_MZM_WORKERS"


class ScanError(RuntimeError):
    def __init__(self, delta, mu, cause):
        super().__init__(f"spectrum failed at delta={delta!r}, mu={mu!r}: {cause}")
        self.delta = delta
        self.mu = mu


@dataclass(frozen=True)
class GridSpec:
    delta_range: tuple
    mu_range: tuple
    n_sites: int
    t: float = 1.0
    energy_tol: float = ZERO_MODE_TOL
    require_gap: bool = False

    def __post_init__(self):
        for name in ("delta_range", "mu_range"):
            lo, hi, count = getattr(self, name)
            if int(count) != count or count < 1:
                raise ValueError(f"{name} count must be a positive integer")
            if lo > hi:
                raise ValueError(f"{name} min must not exceed max")
            object.__setattr__(self, name, (float(lo), float(hi), int(count)))
        if self.n_sites < 1:
            raise ValueError("n_sites must be >= 1")
        if not self.energy_tol > 0:
            raise ValueError("energy_tol must be positive")

    def deltas(self):
        return np.linspace(*self.delta_range)

    def mus(self):
        return np.linspace(*self.mu_range)


@dataclass(frozen=True)
class PhasePoint:
    delta: float
    mu: float
    eps1: float
    eps2: float
    has_zero_mode: bool
    survival_fraction: float | None = None
    n_seeds: int | None = None


def default_workers():
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


def _classify(eps, spec):
    eps1 = float(eps[0])
    eps2 = float(eps[1]) if eps.size > 1 else float("inf")
    ok = eps1 < spec.energy_tol
    if spec.require_gap:
        ok = ok and eps2 > 10 * spec.energy_tol
    return eps1, eps2, ok


def _clean_row(args):
    spec, i = args
    delta = float(spec.deltas()[i])
    row = []
    for mu in spec.mus():
        mu = float(mu)
        try:
            params = ChainParams(spec.n_sites, spec.t, delta, 0.0, mu)
            eps = quasiparticle_energies(build_majorana_matrix(params))
        except (np.linalg.LinAlgError, ValueError) as exc:
            raise ScanError(delta, mu, exc) from exc
        row.append(PhasePoint(delta, mu, *_classify(eps, spec)))
    return row


def _noisy_row(args):
    spec, i, v0, n_seeds, base_seed, mode, threshold = args
    delta = float(spec.deltas()[i])
    n_mu = spec.mu_range[2]
    row = []
    for k, mu in enumerate(spec.mus()):
        mu = float(mu)
        cell = i * n_mu + k if mode == "cell" else 0
        params = ChainParams(spec.n_sites, spec.t, delta, 0.0, mu)
        e1, e2, hits = [], [], 0
        for s in range(n_seeds):
            pot = sample_noise(NoiseConfig(v0, base_seed, s, cell), spec.n_sites)
            try:
                eps = quasiparticle_energies(build_majorana_matrix(params, pot))
            except (np.linalg.LinAlgError, ValueError) as exc:
                raise ScanError(delta, mu, exc) from exc
            a, b, ok = _classify(eps, spec)
            e1.append(a)
            e2.append(b)
            hits += ok
        frac = hits / n_seeds
        if v0 > 0:
            e1, e2 = float(np.mean(e1)), float(np.mean(e2))
        else:
            e1, e2 = e1[0], e2[0]  # identical realizations; keep the clean values bit-exact
        row.append(PhasePoint(delta, mu, e1, e2, frac > threshold, frac, n_seeds))
    return row


def _run_rows(func, jobs, workers):
    workers = default_workers() if workers is None else max(1, int(workers))
    if workers == 1 or len(jobs) == 1:
        rows = [func(job) for job in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(func, jobs))
    return [p for row in rows for p in row]


def scan_phase(spec, workers=None):
    """Classify every grid cell by ``eps1 < energy_tol``.

    Points are ordered with |Delta| outer and mu inner. Cells are independent;
    ``workers > 1`` spreads rows over processes without changing the result.
    """
    jobs = [(spec, i) for i in range(spec.delta_range[2])]
    return _run_rows(_clean_row, jobs, workers)


def scan_with_noise(spec, v0, n_seeds, base_seed, *, mode="cell", threshold=0.5, workers=None):
    """Phase scan with uniform on-site disorder of intensity ``v0``.

    Each cell averages ``n_seeds`` disorder realizations. In ``mode="cell"``
    every cell gets fresh noise (streams keyed by cell and seed index); in
    ``mode="fixed"`` realization ``s`` is shared across the whole grid. The
    reported ``eps1``/``eps2`` are realization means and ``has_zero_mode``
    is ``survival_fraction > threshold``.
    """
    if n_seeds < 1:
        raise ValueError("n_seeds must be >= 1")
    if mode not in ("cell", "fixed"):
        raise ValueError(f"unknown noise mode {mode!r}")
    if v0 < 0:
        raise ValueError("v0 must be >= 0")
    jobs = [
        (spec, i, float(v0), int(n_seeds), int(base_seed), mode, float(threshold))
        for i in range(spec.delta_range[2])
    ]
    return _run_rows(_noisy_row, jobs, workers)


def phase_boundary(points):
    """Largest mu with a zero mode for each |Delta| row, or ``None``."""
    rows = {}
    for p in points:
        rows.setdefault(p.delta, [])
        if p.has_zero_mode:
            rows[p.delta].append(p.mu)
    return [(d, max(mus) if mus else None) for d, mus in rows.items()]


def count_topological(points):
    return sum(p.has_zero_mode for p in points)


def total_survival(points):
    return float(sum(p.survival_fraction for p in points))
