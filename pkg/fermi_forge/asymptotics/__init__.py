from .calibration import (
    REFERENCE_WIDTH,
    Calibration,
    analytic_constant,
    calibrate,
    reference_profile,
    richardson_limit,
)
from .cgo_products import (
    ScaledCGO,
    complex_form,
    default_potential,
    evaluate_at,
    fit_slope,
    metric_form,
    product_oscillation,
    scaled_cgos,
)
from .h_terms import third_order_h_terms
from .leading_integrals import (
    KINDS,
    scaled_integrals,
    second_order_integral,
    tensor_integral,
    third_order_integral,
)
from .oscillatory_integral import OscillatoryIntegral, oscillatory_integral
from .recover_k_at_point import recover_k_at_point
from .recover_scalar_at_point import MODES, recover_scalar_at_point
from .recovery import RecoveryReport, recover
from .verify_prop_2nd import (
    ExpansionReport,
    second_order_terms,
    verify_prop_2nd,
)
