from .carleman_verify import (
    CarlemanReport,
    DiskQuadrature,
    carleman_terms,
    carleman_verify,
    conjugated_operator,
)
from .holo_trace_test import holo_trace_test, trace_of
from .homology_periods import (
    harmonic_extension,
    homology_periods,
    log_trace,
    loop_period,
    loop_ring,
    project_to_conjugable,
)
from .schrodinger_dn import (
    diffeomorphism_defect,
    gauge_defect,
    schrodinger_dn,
    swirl,
)
from .smooth_field import WEIGHTS, HarmonicWeight, SmoothField, random_fields
from .wkb_ansatz import (
    WKBResult,
    green_dbar_inverse,
    mesh_correctors,
    wkb_ansatz,
    wkb_correctors,
    wkb_residual,
)
