"""Ground-state observables of the quadratic chain.

The designated ground state has every quasiparticle empty, the lowest
(possibly zero-energy) mode included. Its Majorana covariance matrix is

    M_ab = -i <gamma_a gamma_b>   (a != b),    M = W^T M~ W

with ``M~`` block diagonal in ``[[0, 1], [-1, 0]]``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .canonical import ZERO_MODE_TOL, canonical_block_matrix


@dataclass(frozen=True, eq=False)
class CovarianceMatrix:
    n_sites: int
    m: np.ndarray


@dataclass(frozen=True, eq=False)
class GroundStateReport:
    energy: float
    densities: np.ndarray
    parity: int
    gap: float

    def to_dict(self):
        return {
            "energy": float(self.energy),
            "gap": float(self.gap),
            "parity": int(self.parity),
            "densities": [float(x) for x in self.densities],
        }


def ground_energy(canon):
    return -0.5 * float(np.sum(canon.epsilons))


def covariance_matrix(canon):
    m_tilde = canonical_block_matrix(np.ones(canon.n_sites))
    m = canon.w.T @ m_tilde @ canon.w
    m = 0.5 * (m - m.T)
    return CovarianceMatrix(canon.n_sites, m)


def electron_density(cov):
    """``<n_j> = (1 - M_{2j-1,2j}) / 2``.

    From ``gamma_{2j-1} gamma_{2j} = i (1 - 2 n_j)``:
    ``M_{2j-1,2j} = -i <gamma_{2j-1} gamma_{2j}> = 1 - 2 <n_j>``.
    """
    m = cov.m
    return 0.5 * (1.0 - m[0::2, 1::2].diagonal())


def ground_parity(canon):
    """Fermion parity ``<prod_j (1 - 2 n_j)>`` of the designated ground state.

    For a pure Gaussian state the parity is ``Pf(M)``, and
    ``Pf(W^T M~ W) = det(W) Pf(M~) = det(W)`` since ``Pf(M~) = 1``.
    """
    return int(canon.det_w)


def excitation_gap(canon, energy_tol=ZERO_MODE_TOL):
    eps = canon.epsilons
    if eps[0] < energy_tol and eps.size > 1:
        return float(eps[1])
    if eps[0] < energy_tol:
        return 0.0
    return float(eps[0])


def ground_state_report(canon, energy_tol=ZERO_MODE_TOL):
    cov = covariance_matrix(canon)
    return GroundStateReport(
        energy=ground_energy(canon),
        densities=electron_density(cov),
        parity=ground_parity(canon),
        gap=excitation_gap(canon, energy_tol),
    )


def pfaffian(a):
    """Pfaffian of a real skew-symmetric matrix by Householder tridiagonalization.

    Independent of the Schur route used in ``canonicalize``.
    """
    a = np.array(a, dtype=float)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("square matrix required")
    if n % 2:
        return 0.0
    pf = 1.0
    for k in range(0, n - 2, 2):
        x = a[k + 1:, k]
        alpha = np.linalg.norm(x[1:])
        if alpha != 0.0:
            v = x.copy()
            v[0] += np.copysign(np.linalg.norm(x), x[0])
            v /= np.linalg.norm(v)
            h = np.eye(n - k - 1) - 2.0 * np.outer(v, v)
            a[k + 1:, :] = h @ a[k + 1:, :]
            a[:, k + 1:] = a[:, k + 1:] @ h
            pf = -pf  # det of a reflector
        pf *= a[k, k + 1]
    return pf * a[n - 2, n - 1]
