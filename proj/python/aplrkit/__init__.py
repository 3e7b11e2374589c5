"""Piecewise linear regression models via componentwise gradient boosting.

The heavy lifting lives in the compiled extension; this package re-exports
its surface.
"""

from ._core import (
    ConfigError,
    DataError,
    Model,
    NumericError,
    __version__,
    auc,
    classification_metrics,
    fit,
    load_model,
    model_from_json,
    oversample,
)

__all__ = [
    "ConfigError",
    "DataError",
    "Model",
    "NumericError",
    "__version__",
    "auc",
    "classification_metrics",
    "fit",
    "load_model",
    "model_from_json",
    "oversample",
]
