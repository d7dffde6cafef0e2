"""Kitaev chain in the Majorana basis.

Majorana operators per site ``j`` (1-based) are

    gamma_{2j-1} = a_j e^{i theta/2} + a_j^dag e^{-i theta/2}
    gamma_{2j}   = -i (a_j e^{i theta/2} - a_j^dag e^{-i theta/2})

so that ``gamma_{2j-1} gamma_{2j} = i (1 - 2 n_j)`` and the Hamiltonian reads
``H = (i/4) sum_ab gamma_a A_ab gamma_b`` with a real skew-symmetric ``A``.
The pairing phase is absorbed into the operators, so ``A`` depends on
``|Delta|`` only.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class ChainParams:
    """Physical parameters of an open Kitaev chain.

    Parameters
    ----------
    n_sites : int
        Number of lattice sites ``N``.
    t : float
        Hopping amplitude.
    delta_abs : float
        Pairing magnitude ``|Delta|``.
    theta : float
        Pairing phase in radians. Only enters the operator mapping.
    mu : float
        Chemical potential.
    """

    n_sites: int
    t: float = 1.0
    delta_abs: float = 1.0
    theta: float = 0.0
    mu: float = 0.0

    def __post_init__(self):
        if int(self.n_sites) != self.n_sites or self.n_sites < 1:
            raise ValueError(f"n_sites must be a positive integer, got {self.n_sites!r}")
        if not self.delta_abs >= 0:
            raise ValueError(f"delta_abs must be >= 0, got {self.delta_abs!r}")
        for name in ("t", "delta_abs", "theta", "mu"):
            if not np.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")

    @classmethod
    def from_signed_delta(cls, n_sites, t, delta, mu, theta=0.0):
        """Build from a real (possibly negative) pairing; the sign goes into theta."""
        if delta < 0:
            return cls(n_sites, t, -delta, theta + np.pi, mu)
        return cls(n_sites, t, delta, theta, mu)


@dataclass(frozen=True)
class SitePotentials:
    """On-site energies ``V_j`` added as ``sum_j V_j a_j^dag a_j``."""

    values: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))

    @classmethod
    def zeros(cls, n_sites):
        return cls((0.0,) * n_sites)

    def __len__(self):
        return len(self.values)

    def as_array(self):
        return np.asarray(self.values, dtype=float)


@dataclass(frozen=True)
class NoiseConfig:
    """Key for one reproducible disorder realization.

    ``cell_index`` separates independent streams for different grid cells
    in a scan; it defaults to 0 for single-chain use.
    """

    v0: float
    seed: int
    draw_index: int = 0
    cell_index: int = 0

    def __post_init__(self):
        if not self.v0 >= 0:
            raise ValueError("v0 must be >= 0")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.draw_index < 0 or self.cell_index < 0:
            raise ValueError("draw_index and cell_index must be nonnegative")


@dataclass(frozen=True, eq=False)
class MajoranaForm:
    n_sites: int
    matrix: np.ndarray
    params: ChainParams
    potentials: SitePotentials = field(default=None)


def _coerce_potentials(params, potentials):
    if potentials is None:
        return SitePotentials.zeros(params.n_sites)
    if not isinstance(potentials, SitePotentials):
        potentials = SitePotentials(tuple(potentials))
    if len(potentials) != params.n_sites:
        raise ValueError(
            f"potentials has length {len(potentials)}, expected {params.n_sites}"
        )
    return potentials


def majorana_matrix(t, delta_abs, mu_sites, bond_scale=None):
    """Skew-symmetric coefficient matrix for site-resolved chemical potentials.

    ``bond_scale`` optionally multiplies each of the ``N - 1`` bonds.
    """
    mu_sites = np.asarray(mu_sites, dtype=float)
    n = mu_sites.size
    a = np.zeros((2 * n, 2 * n))
    idx = np.arange(n)
    # 0-based: gamma_{2j-1} -> 2j, gamma_{2j} -> 2j + 1
    a[2 * idx, 2 * idx + 1] = -mu_sites
    a[2 * idx + 1, 2 * idx] = mu_sites
    if n > 1:
        scale = np.ones(n - 1) if bond_scale is None else np.asarray(bond_scale, float)
        j = idx[:-1]
        strong = (t + delta_abs) * scale
        weak = (-t + delta_abs) * scale
        a[2 * j + 1, 2 * j + 2] = strong
        a[2 * j + 2, 2 * j + 1] = -strong
        a[2 * j, 2 * j + 3] = weak
        a[2 * j + 3, 2 * j] = -weak
    return a


def build_majorana_matrix(params, potentials=None):
    """Majorana-basis coefficient matrix of the chain.

    A potential ``V_j a_j^dag a_j`` differs from ``V_j (n_j - 1/2)`` by a
    constant, so it enters as the local chemical potential ``mu - V_j``.
    """
    potentials = _coerce_potentials(params, potentials)
    mu_sites = params.mu - potentials.as_array()
    a = majorana_matrix(params.t, params.delta_abs, mu_sites)
    return MajoranaForm(params.n_sites, a, params, potentials)


def bulk_dispersion(params, k):
    """Bulk Bogoliubov bands ``(+E(k), -E(k))`` of the infinite chain."""
    k = np.asarray(k, dtype=float)
    e = np.sqrt(
        (2 * params.t * np.cos(k) + params.mu) ** 2
        + 4 * params.delta_abs**2 * np.sin(k) ** 2
    )
    if e.ndim == 0:
        return float(e), -float(e)
    return e, -e


def bulk_gap(params, k_samples=10001):
    """Minimum of the upper band over a uniform grid on ``[-pi, pi]``."""
    if k_samples < 2:
        raise ValueError("k_samples must be >= 2")
    k = np.linspace(-np.pi, np.pi, int(k_samples))
    e, _ = bulk_dispersion(params, k)
    return float(e.min())


def sample_noise(config, n_sites):
    """Uniform site energies ``V_j = 2 v0 (R_j - 1/2)``.

    ``R_j`` comes from a Philox stream keyed by ``seed`` whose counter encodes
    ``draw_index`` and ``cell_index``; site ``j`` takes the ``j``-th output.
    The result therefore does not depend on evaluation order.
    """
    if config.v0 == 0:
        return SitePotentials.zeros(n_sites)
    bitgen = np.random.Philox(
        key=config.seed, counter=[0, config.draw_index, config.cell_index, 0]
    )
    raw = np.random.Generator(bitgen).integers(0, 2**53, size=n_sites, dtype=np.uint64)
    r = (raw.astype(float) + 0.5) / 2.0**53  # strictly inside (0, 1)
    return SitePotentials(tuple(2 * config.v0 * (r - 0.5)))
