from .apply_th import apply_th, conjugation_potential, probe_fields, th_norm
from .build_cgo import CGOSolution, build_cgo, potential_from_family
from .cauchy_transform import cauchy_transform, conj_cauchy_transform
from .dbar_psi_inv import (
    POINTS_PER_WAVELENGTH,
    check_resolution,
    dbar_psi_inv,
    dbar_psi_inv_split,
    dbar_psi_star_inv,
    is_resolved,
    max_phase_gradient,
)
from .decay_fit import DecayFit, decay_fit
from .decay_sweep import DECAY_PHASES, QUANTITIES, decay_phase, decay_sweep
from .grid import MAX_GRID_SIZE, CGOGrid
from .phase import DEFAULT_LAMBDA, Phase, phase_catalog, polynomial_phase
