"""Brute-force many-body reference for short chains.

Basis states are bitmasks; bit ``j - 1`` holds the occupation of site ``j``.
Jordan-Wigner ordering runs over sites 1..N: ``a_j`` picks up
``(-1)**(number of occupied sites < j)``. This is the only fermionic sign
convention in the package.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .canonical import canonicalize
from .chain import ChainParams, SitePotentials, _coerce_potentials, build_majorana_matrix
from .observables import ground_state_report

MAX_SITES = 10
DEGENERACY_TOL = 1e-8


class OracleSizeError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class FockHamiltonian:
    n_sites: int
    dim: int
    matrix: np.ndarray


@dataclass(frozen=True, eq=False)
class OracleGround:
    energy: float
    parity: int
    densities: np.ndarray
    degeneracy_flag: bool
    second_parity: int | None = None
    second_densities: np.ndarray | None = field(default=None)

    def to_dict(self):
        out = {
            "energy": self.energy,
            "parity": self.parity,
            "densities": [float(x) for x in self.densities],
            "degeneracy_flag": self.degeneracy_flag,
        }
        if self.degeneracy_flag:
            out["second_parity"] = self.second_parity
            out["second_densities"] = [float(x) for x in self.second_densities]
        return out


def _check_size(n_sites):
    if n_sites > MAX_SITES:
        raise OracleSizeError(f"Fock oracle limited to N <= {MAX_SITES}, got {n_sites}")


def annihilators(n_sites):
    """Sparse ``a_j`` for ``j = 1..N`` (list index ``j - 1``)."""
    _check_size(n_sites)
    dim = 2**n_sites
    states = np.arange(dim)
    ops = []
    for j in range(n_sites):
        occupied = (states >> j) & 1 == 1
        src = states[occupied]
        below = src & ((1 << j) - 1)
        signs = np.array([(-1) ** bin(b).count("1") for b in below], dtype=float)
        ops.append(sp.csr_matrix((signs, (src ^ (1 << j), src)), shape=(dim, dim)))
    return ops


def number_operators(n_sites):
    dim = 2**n_sites
    states = np.arange(dim)
    return [((states >> j) & 1).astype(float) for j in range(n_sites)]


def parity_diagonal(n_sites):
    """Diagonal of ``prod_j (1 - 2 n_j)``."""
    states = np.arange(2**n_sites)
    return np.array([1.0 - 2.0 * (bin(b).count("1") % 2) for b in states])


def build_fock_hamiltonian(params, potentials=None):
    """Dense Hamiltonian of the electron-picture chain in the occupation basis."""
    _check_size(params.n_sites)
    potentials = _coerce_potentials(params, potentials)
    n = params.n_sites
    dim = 2**n
    a = annihilators(n)
    ad = [op.T.tocsr() for op in a]
    delta = params.delta_abs * np.exp(1j * params.theta)
    h = sp.csr_matrix((dim, dim), dtype=complex)
    for j in range(n - 1):
        hop = -params.t * (ad[j] @ a[j + 1])
        pair = delta * (a[j] @ a[j + 1])
        term = hop + pair
        h = h + term + term.conj().T
    nums = number_operators(n)
    v = potentials.as_array()
    diag = np.zeros(dim)
    for j in range(n):
        diag -= (params.mu - v[j]) * (nums[j] - 0.5)
    h = h + sp.diags(diag)
    return FockHamiltonian(n, dim, h.toarray())


def many_body_spectrum(params, potentials=None):
    return np.linalg.eigvalsh(build_fock_hamiltonian(params, potentials).matrix)


def oracle_ground(params, potentials=None):
    """Exact ground state energy, parity and densities.

    The Hamiltonian is diagonalized separately in the even and odd parity
    sectors so every eigenstate has definite parity even when the ground
    state is degenerate.
    """
    fh = build_fock_hamiltonian(params, potentials)
    n = params.n_sites
    par = parity_diagonal(n)
    nums = np.array(number_operators(n))
    candidates = []
    for sector in (1.0, -1.0):
        idx = np.flatnonzero(par == sector)
        vals, vecs = np.linalg.eigh(fh.matrix[np.ix_(idx, idx)])
        for k in range(min(2, vals.size)):
            prob = np.abs(vecs[:, k]) ** 2
            candidates.append((vals[k], int(sector), nums[:, idx] @ prob))
    candidates.sort(key=lambda c: c[0])
    e0, p0, n0 = candidates[0]
    e1, p1, n1 = candidates[1] if len(candidates) > 1 else (np.inf, None, None)
    degenerate = bool(e1 - e0 < DEGENERACY_TOL)
    if degenerate:
        return OracleGround(float(e0), p0, n0, True, p1, n1)
    return OracleGround(float(e0), p0, n0, False)


def compare_with_canonical(params, potentials=None):
    """Deviations between the canonical route and brute force.

    For a degenerate ground doublet the oracle state whose densities are
    closest (max-norm) to the canonical ones is compared; if both are equally
    close the canonical parity only has to be one of the two.
    """
    potentials = _coerce_potentials(params, potentials)
    canon = canonicalize(build_majorana_matrix(params, potentials))
    report = ground_state_report(canon)
    oracle = oracle_ground(params, potentials)

    parity_ok = report.parity == oracle.parity
    densities = oracle.densities
    if oracle.degeneracy_flag:
        d0 = np.abs(report.densities - oracle.densities).max()
        d1 = np.abs(report.densities - oracle.second_densities).max()
        if abs(d0 - d1) < 1e-9:
            parity_ok = report.parity in (oracle.parity, oracle.second_parity)
        elif d1 < d0:
            parity_ok = report.parity == oracle.second_parity
            densities = oracle.second_densities

    eps = canon.epsilons
    levels = np.sort([
        0.5 * float(np.dot(signs, eps))
        for signs in itertools.product((1.0, -1.0), repeat=params.n_sites)
    ])
    spectrum = many_body_spectrum(params, potentials)
    return {
        "energy": abs(report.energy - oracle.energy),
        "densities": float(np.abs(report.densities - densities).max()),
        "spectrum": float(np.abs(levels - spectrum).max()),
        "parity_ok": bool(parity_ok),
        "canonical_parity": report.parity,
        "oracle_parity": oracle.parity,
        "degenerate": oracle.degeneracy_flag,
    }


def random_draw(rng, n_min=2, n_max=7, with_noise=False):
    """Random chain with t, Delta, mu uniform in [-2, 2] (negative Delta -> theta + pi)."""
    n = int(rng.integers(n_min, n_max + 1))
    t, delta, mu = rng.uniform(-2.0, 2.0, size=3)
    theta = float(rng.uniform(0.0, 2 * np.pi))
    params = ChainParams.from_signed_delta(n, float(t), float(delta), float(mu), theta)
    pot = SitePotentials(tuple(rng.uniform(-1.0, 1.0, n))) if with_noise else None
    return params, pot

