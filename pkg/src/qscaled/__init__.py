"""High-precision q-series, theta functions and their q -> 1 approximants."""
from .numeric import (
    DEFAULT_CONTEXT,
    LogForm,
    PrecisionContext,
    PrecisionExhausted,
    PreconditionViolated,
    TotalCancellation,
    NonDecayingTail,
    relative_deviation,
    sum_series,
)
from .qkernel import QParam, qpoch_finite, qpoch_infinite, q_gamma, euler_gamma, dedekind_eta
from .theta import ThetaPoint, theta, theta_series, theta_product, theta_transformed
from .series import (
    SeriesParams,
    HypergeometricSpec,
    g_eval,
    h_eval,
    ramanujan_aq,
    jackson_qbessel2,
    ismail_masson,
    stieltjes_wigert,
    q_laguerre,
    basic_hypergeometric,
    lemma4_reduction,
    lemma5_reduction,
)
from .asymptotics import AdmissibleScale, AsymResult, InvalidParameters, chi, scale_value

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_CONTEXT",
    "LogForm",
    "PrecisionContext",
    "PrecisionExhausted",
    "PreconditionViolated",
    "TotalCancellation",
    "NonDecayingTail",
    "relative_deviation",
    "sum_series",
    "SeriesParams",
    "HypergeometricSpec",
    "g_eval",
    "h_eval",
    "ramanujan_aq",
    "jackson_qbessel2",
    "ismail_masson",
    "stieltjes_wigert",
    "q_laguerre",
    "basic_hypergeometric",
    "lemma4_reduction",
    "lemma5_reduction",
    "QParam",
    "qpoch_finite",
    "qpoch_infinite",
    "q_gamma",
    "euler_gamma",
    "dedekind_eta",
    "ThetaPoint",
    "theta",
    "theta_series",
    "theta_product",
    "theta_transformed",
    "AdmissibleScale",
    "AsymResult",
    "InvalidParameters",
    "chi",
    "scale_value",
]
