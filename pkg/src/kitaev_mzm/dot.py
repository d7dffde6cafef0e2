"""Quantum dot coupled to the right end of the chain.

The dot adds ``(V - mu)(D^dag D - 1/2)`` and a bond to site ``N`` with the
same form as a chain bond, so it behaves as site ``N + 1`` with local
chemical potential ``mu - V``. Near the degenerate ground doublet the dot
mixes ``|n~ m>`` states through the coupling constant ``S``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .canonical import canonicalize, quasiparticle_transform
from .chain import ChainParams, MajoranaForm, SitePotentials, build_majorana_matrix, majorana_matrix
from .observables import excitation_gap


class EmptySweepError(ValueError):
    """No bias voltage survives gap clamping."""


@dataclass(frozen=True)
class DotSweepSpec:
    chain: ChainParams
    v_min: float
    v_max: float
    v_count: int
    coupling_scale: float = 1.0
    clamp_to_gap: bool = True

    def __post_init__(self):
        if not self.v_min < self.v_max:
            raise ValueError("v_min must be < v_max")
        if self.v_count < 2:
            raise ValueError("v_count must be >= 2")
        if not self.coupling_scale > 0:
            raise ValueError("coupling_scale must be > 0")

    def voltages(self):
        return np.linspace(self.v_min, self.v_max, self.v_count)


@dataclass(frozen=True)
class SweepPoint:
    v: float
    s: complex
    e_plus: float
    e_minus: float
    rho: complex
    c1: complex
    c2: complex
    exact_eps1: float | None = None
    exact_e_plus: float | None = None


def coupling_constant(canon, chain, scale=1.0):
    """``S = scale * [-(1/2)(-t+|D|) T_{2N-1,1} + (i/2)(t+|D|) T_{2N,1}]``."""
    n = chain.n_sites
    if canon.n_sites != n:
        raise ValueError("canonical form does not match the chain")
    tr = quasiparticle_transform(canon)
    t, d = chain.t, chain.delta_abs
    s = -0.5 * (-t + d) * tr(2 * n - 1, 1) + 0.5j * (t + d) * tr(2 * n, 1)
    return complex(scale * s)


def perturbative_amplitudes(v, mu, s):
    """Lower-branch energy and amplitudes from degenerate first-order theory.

    Returns ``(e_plus, rho, c1, c2)``; ``c1`` weighs the states with the dot
    empty, ``c2`` those with the dot filled and the chain parity reversed.
    """
    s = complex(s)
    if s == 0:
        raise ValueError("coupling constant S = 0: degenerate perturbation theory does not apply")
    x = v - mu
    e_plus = float(np.sqrt(x * x / 4 + abs(s) ** 2))
    rho = -(x / 2 + e_plus) / s
    norm = np.sqrt(1 + abs(rho) ** 2)
    return e_plus, rho, rho / norm, 1 / norm


def extended_form(chain, v, coupling_scale=1.0, potentials=None):
    """Majorana form of the chain plus the dot as site ``N + 1``."""
    n = chain.n_sites
    base = np.zeros(n) if potentials is None else SitePotentials(potentials).as_array()
    mu_sites = np.append(chain.mu - base, chain.mu - v)
    bond_scale = np.ones(n)
    bond_scale[-1] = coupling_scale
    a = majorana_matrix(chain.t, chain.delta_abs, mu_sites, bond_scale)
    params = ChainParams(n + 1, chain.t, chain.delta_abs, chain.theta, chain.mu)
    return MajoranaForm(n + 1, a, params, SitePotentials(tuple(np.append(base, v))))


def exact_extended_chain(chain, v, coupling_scale=1.0):
    """Canonical form of the chain with the dot attached as site ``N + 1``."""
    return canonicalize(extended_form(chain, v, coupling_scale))


def dot_level(canon):
    """Index and energy of the dot-hybridized quasiparticle.

    This is the level, other than the surviving zero mode ``m = 0``, with
    the most weight on the dot Majoranas (the last two indices). One dot
    Majorana combination joins the far-end zero mode, so block 0 is skipped.
    """
    weight = (canon.w[:, -2:] ** 2).sum(axis=1).reshape(-1, 2).sum(axis=1)
    m = 1 + int(np.argmax(weight[1:]))
    return m, float(canon.epsilons[m])


def sweep_bias(spec, exact=False, return_excluded=False):
    """Perturbative (and optionally exact) quantities across a bias sweep.

    With ``clamp_to_gap`` the voltages where ``e_plus`` reaches the bare
    chain's excitation gap are dropped. ``exact_eps1`` is the lowest
    quasiparticle energy of the extended chain; ``exact_e_plus`` is half the
    energy of its dot-dominated level, the exact counterpart of ``e_plus``.
    """
    chain = spec.chain
    canon = canonicalize(build_majorana_matrix(chain))
    s = coupling_constant(canon, chain, spec.coupling_scale)
    gap = excitation_gap(canon)
    points, excluded = [], []
    for v in spec.voltages():
        e_plus, rho, c1, c2 = perturbative_amplitudes(float(v), chain.mu, s)
        if spec.clamp_to_gap and e_plus >= gap:
            excluded.append(float(v))
            continue
        exact_eps1 = exact_e_plus = None
        if exact:
            ext = exact_extended_chain(chain, float(v), spec.coupling_scale)
            exact_eps1 = float(ext.epsilons[0])
            exact_e_plus = 0.5 * dot_level(ext)[1]
        points.append(
            SweepPoint(float(v), s, e_plus, -e_plus, rho, c1, c2, exact_eps1, exact_e_plus)
        )
    if not points:
        raise EmptySweepError(
            f"all {spec.v_count} voltages exceed the chain gap {gap:.4g}; |S| = {abs(s):.4g}"
        )
    if return_excluded:
        return points, excluded
    return points
