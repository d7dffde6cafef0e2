"""Majorana zero modes of the open Kitaev chain.

Canonical (block-diagonal) decomposition of the Majorana-basis Hamiltonian,
ground-state observables, phase scans with disorder, quantum-dot parity
reversal, and a brute-force Fock-space reference.
"""

from .canonical import (
    CanonicalForm,
    CanonicalizationError,
    NoZeroModeError,
    QuasiparticleTransform,
    ZeroModePair,
    canonicalize,
    extract_zero_modes,
    quasiparticle_energies,
    quasiparticle_transform,
    zero_mode_count,
)
from .chain import (
    ChainParams,
    MajoranaForm,
    NoiseConfig,
    SitePotentials,
    build_majorana_matrix,
    bulk_dispersion,
    bulk_gap,
    sample_noise,
)
from .dot import (
    DotSweepSpec,
    EmptySweepError,
    SweepPoint,
    coupling_constant,
    exact_extended_chain,
    perturbative_amplitudes,
    sweep_bias,
)
from .fock import FockHamiltonian, build_fock_hamiltonian, oracle_ground
from .observables import (
    CovarianceMatrix,
    GroundStateReport,
    covariance_matrix,
    electron_density,
    excitation_gap,
    ground_energy,
    ground_parity,
    ground_state_report,
    pfaffian,
)
from .phase import GridSpec, PhasePoint, phase_boundary, scan_phase, scan_with_noise

__version__ = "0.1.0"
