"""FastICA feature extraction with a pluggable contrast-function registry.

The registry includes the m-arcsinh kernel alongside the classic logcosh,
exp and cube nonlinearities.  A baseline MLP classifier, weighted
classification metrics and a five-dataset benchmark runner round out the
package; the same functionality is exposed over a FastAPI service and the
``mark-ica`` CLI.
"""

from .contrast import (
    CONTRAST_NAMES,
    ContrastFunction,
    evaluate,
    m_arcsinh_derivative,
    m_arcsinh_value,
)
from .fastica import (
    FastICAConfig,
    FastICAModel,
    fit,
    ica_parallel,
    load_model,
    save_model,
    sym_decorrelate,
    transform,
    whiten,
)
from .metrics import accuracy, amari_index, weighted_prf

__version__ = "0.1.0"

__all__ = [
    "CONTRAST_NAMES",
    "ContrastFunction",
    "FastICAConfig",
    "FastICAModel",
    "accuracy",
    "amari_index",
    "evaluate",
    "fit",
    "ica_parallel",
    "load_model",
    "m_arcsinh_derivative",
    "m_arcsinh_value",
    "save_model",
    "sym_decorrelate",
    "transform",
    "weighted_prf",
    "whiten",
    "__version__",
]
