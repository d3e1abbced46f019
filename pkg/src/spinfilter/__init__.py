"""SU(2) link algebra for spin-orbit coupled interferometers, with their spin-filter operating points."""

from .errors import (
    BranchAmbiguityError,
    DegenerateBasisError,
    EnergyRangeError,
    NotUnitaryError,
    SingularSystemError,
    SpinFilterError,
)
from .gauge import GaugeField2D, SOKind, curvature, curvature_fd, make_field, theta_from_material
from .records import TransmissionRecord
from .ring import (
    RingDevice,
    RingMode,
    design_filter_ring,
    loop_phase_ring,
    material_parameters,
    phi_r_ring,
    ring_eigenfunction,
    ring_s_matrix,
    ring_transmission,
    tilted_basis_ring,
)
from .square import (
    Geometry,
    SquareDevice,
    design_filter_square,
    full_s_matrix,
    link_matrices,
    loop_phase,
    phi_r_square,
    self_energy,
    tilted_basis_square,
    transmission,
)
from .su2 import bch_loop_phase, eig_unitary2, exp_i_pauli, log_su2, pauli

__version__ = "0.1.0"
