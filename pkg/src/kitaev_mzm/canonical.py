"""Canonical block form of a real skew-symmetric matrix.

``canonicalize`` returns a real orthogonal ``W`` with

    W A W^T = diag([[0, eps_1], [-eps_1, 0]], ..., [[0, eps_N], [-eps_N, 0]])

and ``0 <= eps_1 <= ... <= eps_N``. The quasiparticle Majoranas are
``gamma~_m = sum_j W_mj gamma_j``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .chain import MajoranaForm

ZERO_MODE_TOL = 0.002


class CanonicalizationError(RuntimeError):
    """The decomposition failed or its residual exceeds tolerance."""

    def __init__(self, message, residual=None):
        super().__init__(message if residual is None else f"{message} (residual={residual:.3e})")
        self.residual = residual


class NoZeroModeError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class CanonicalForm:
    n_sites: int
    w: np.ndarray
    epsilons: np.ndarray
    det_w: int
    residual: float

    def block(self):
        """The canonical matrix ``W A W^T`` reconstructed from ``epsilons``."""
        return canonical_block_matrix(self.epsilons)


@dataclass(frozen=True, eq=False)
class ZeroModePair:
    gamma1_components: np.ndarray
    gamma2_components: np.ndarray
    eps1: float
    localization: float


@dataclass(frozen=True, eq=False)
class QuasiparticleTransform:
    n_sites: int
    entries: np.ndarray  # shape (2N, N); entries[J - 1, j - 1] = T_{J,j}

    def __call__(self, big_j, j):
        """``T_{J,j}`` with 1-based indices."""
        return self.entries[big_j - 1, j - 1]


def canonical_block_matrix(epsilons):
    eps = np.asarray(epsilons, dtype=float)
    c = np.zeros((2 * eps.size, 2 * eps.size))
    m = np.arange(eps.size)
    c[2 * m, 2 * m + 1] = eps
    c[2 * m + 1, 2 * m] = -eps
    return c


def _permutation_sign(perm):
    perm = list(perm)
    seen = [False] * len(perm)
    sign = 1
    for start in range(len(perm)):
        if seen[start]:
            continue
        length = 0
        k = start
        while not seen[k]:
            seen[k] = True
            k = perm[k]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def _schur_pairs(t_form, zero_tol):
    """Row-index pairs for the 2x2 blocks of a real Schur form.

    Consecutive 1x1 (numerically zero) blocks are paired in order of
    appearance.
    """
    n = t_form.shape[0]
    pairs, singles = [], []
    i = 0
    while i < n:
        if i + 1 < n and t_form[i + 1, i] != 0.0:
            pairs.append((i, i + 1))
            i += 2
        else:
            singles.append(i)
            i += 1
    for i in singles:
        if abs(t_form[i, i]) > zero_tol:
            raise CanonicalizationError(
                f"real eigenvalue {t_form[i, i]:.3e} in a skew-symmetric matrix"
            )
    if len(singles) % 2:
        raise CanonicalizationError("odd number of unpaired zero eigenvalues")
    pairs.extend(zip(singles[0::2], singles[1::2]))
    return pairs


def _fix_lowest_block(w, n_sites):
    """Rotate rows 0 and 1 so row 0 has maximal left-half weight.

    The rotation is proper, so both the canonical block and ``det W`` are
    unchanged. Overall sign: the largest-magnitude entry of row 0 is positive.
    """
    rows = w[:2]
    left = rows[:, :n_sites]
    gram = left @ left.T
    _, vecs = np.linalg.eigh(gram)
    c, s = vecs[:, -1]
    rot = np.array([[c, s], [-s, c]])
    rotated = rot @ rows
    lead = np.argmax(np.abs(rotated[0]))
    if rotated[0, lead] < 0:
        rotated = -rotated
    w[:2] = rotated


def canonicalize(form, zero_tol=1e-12):
    """Bring a skew-symmetric coefficient matrix to canonical block form.

    Parameters
    ----------
    form : MajoranaForm or ndarray
        The ``2N x 2N`` real skew-symmetric matrix (or a form wrapping it).
    zero_tol : float
        Eigenvalues of magnitude below ``zero_tol * max(1, max|A|)`` that the
        Schur reduction returns as 1x1 blocks are paired into a zero block.

    Returns
    -------
    CanonicalForm

    Raises
    ------
    CanonicalizationError
        If the eigensolver fails or the result violates the residual,
        orthogonality or determinant checks.
    """
    a = form.matrix if isinstance(form, MajoranaForm) else np.asarray(form, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] % 2:
        raise ValueError(f"expected an even-dimensional square matrix, got {a.shape}")
    if zero_tol <= 0:
        raise ValueError("zero_tol must be positive")
    n = a.shape[0] // 2
    scale = max(1.0, float(np.abs(a).max()))

    try:
        t_form, z = scipy.linalg.schur(a, output="real")
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise CanonicalizationError(f"Schur reduction did not converge: {exc}") from exc

    det_w = int(np.linalg.slogdet(z)[0])

    pairs = _schur_pairs(t_form, zero_tol * scale)
    perm = [r for pair in pairs for r in pair]
    det_w *= _permutation_sign(perm)
    w = z.T[perm].copy()

    b = w @ a @ w.T
    eps = 0.5 * (b[0::2, 1::2].diagonal() - b[1::2, 0::2].diagonal())
    flip = eps < 0
    w[1::2][flip] *= -1.0
    det_w *= (-1) ** int(flip.sum())
    eps = np.abs(eps)

    # Moving whole 2-row blocks is an even row permutation: det unchanged.
    order = np.argsort(eps, kind="stable")
    eps = eps[order]
    w = w.reshape(n, 2, 2 * n)[order].reshape(2 * n, 2 * n)

    _fix_lowest_block(w, n)

    residual = float(np.abs(w @ a @ w.T - canonical_block_matrix(eps)).max())
    if residual > 1e-9 * max(1.0, float(eps.max())) * scale:
        raise CanonicalizationError("canonical form residual too large", residual)
    ortho = float(np.abs(w @ w.T - np.eye(2 * n)).max())
    if ortho > 1e-10:
        raise CanonicalizationError("transform is not orthogonal", ortho)
    direct = np.linalg.det(w)
    if abs(direct - det_w) > 1e-10:
        raise CanonicalizationError(f"tracked det W = {det_w} disagrees with {direct!r}")
    return CanonicalForm(n, w, eps, int(det_w), residual)


def zero_mode_count(canon, energy_tol=ZERO_MODE_TOL):
    """Number of quasiparticle energies below ``energy_tol``."""
    if energy_tol <= 0:
        raise ValueError("energy_tol must be positive")
    return int(np.count_nonzero(canon.epsilons < energy_tol))


def left_weight(vec, n_sites):
    return float(np.sum(np.asarray(vec)[:n_sites] ** 2))


def extract_zero_modes(canon, energy_tol=ZERO_MODE_TOL, require=True):
    """Components of the two lowest quasiparticle Majoranas on ``gamma_a``.

    Mode 1 is the left-localized member; ``localization`` is its weight on
    the first ``N`` Majorana indices. With ``require=False`` the lowest block
    is returned even if its energy is above ``energy_tol``.
    """
    if require and zero_mode_count(canon, energy_tol) < 1:
        raise NoZeroModeError(
            f"lowest quasiparticle energy {canon.epsilons[0]:.3e} >= {energy_tol}"
        )
    g1 = canon.w[0].copy()
    g2 = canon.w[1].copy()
    return ZeroModePair(g1, g2, float(canon.epsilons[0]), left_weight(g1, canon.n_sites))


def quasiparticle_transform(canon):
    """``T_{J,j} = W_{2j-1,J} + i W_{2j,J}``, so that
    ``gamma_J = sum_j (T*_{J,j} a~_j + T_{J,j} a~_j^dag)``."""
    w = canon.w
    entries = w[0::2].T + 1j * w[1::2].T
    return QuasiparticleTransform(canon.n_sites, entries)


def window_envelope(components, n_sites, window=5):
    """Max ``|component|`` per window of ``window`` sites, from site 1 up."""
    per_site = np.abs(np.asarray(components)).reshape(n_sites, 2).max(axis=1)
    n_win = int(np.ceil(n_sites / window))
    return np.array([per_site[k * window:(k + 1) * window].max() for k in range(n_win)])


def quasiparticle_energies(form):
    """Ascending ``eps_m`` without building ``W``.

    When ``A`` only couples odd to even Majorana indices (true for the chain,
    with or without disorder and a dot) the ``eps_m`` are the singular values
    of the ``N x N`` odd-even block. Otherwise every other singular value of
    ``A`` is used.
    """
    a = form.matrix if isinstance(form, MajoranaForm) else np.asarray(form, dtype=float)
    if not a[0::2, 0::2].any() and not a[1::2, 1::2].any():
        sv = scipy.linalg.svdvals(a[0::2, 1::2])
    else:
        sv = scipy.linalg.svdvals(a)[0::2]
    return np.sort(sv)
