"""Fox H-function, Srivastava polynomials and the unified integral identity."""

from .errors import *  # noqa: F401,F403
from .fox_h import (
    ContourSpec,
    HParams,
    binomial_h,
    classify,
    eval_contour,
    eval_series,
    evaluate,
    exponential_h,
    mb_integrand,
)
from .gamma_core import gamma, log_gamma, pochhammer, pochhammer_neg_int
from .hypergeometric import PFQParams, SpecialCaseSpec, embed_2f1_as_h, eq31_lhs, eq31_rhs, pfq
from .options import EvalConfig
from .srivastava import PolySpec, TableCoefficients, eval_poly, term_count
from .unified_integral import (
    IntegralSpec,
    augmented_h_params,
    check_conditions,
    lemma_closed_form,
    lhs_quadrature,
    rhs_sum,
    verify_identity,
)

__version__ = "0.1.0"
