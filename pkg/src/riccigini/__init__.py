"""Ricci-flow surrogate model of Gini-coefficient dynamics over 16 indicators."""

__version__ = "0.1.0"

from .analysis import (
    CalibrationEntry,
    RegressionResult,
    SensitivityRow,
    calibrate_indicators,
    ols_fit,
    sensitivity_from_model,
    sensitivity_sweep,
)
from .dynamics import (
    AdoptionCurve,
    DynamicsTerms,
    GiniModelCoefficients,
    GiniTrajectory,
    TermProviders,
    adoption_level,
    gini_rate,
    gini_rate_terms,
    income_dispersion_from_series,
    integrate_gini,
    mean_income,
    table2_binding,
)
from .errors import (
    DegenerateDesignError,
    DomainError,
    IntegrationError,
    ParseError,
    RicciGiniError,
    SchemaError,
)
from .indicators import (
    Dataset,
    IndicatorId,
    IndicatorRecord,
    PaperPreset,
    ValidationReport,
    georgia_2023,
    load_dataset,
    log_transform,
    validate_dataset,
)
from .perelman import (
    WParams,
    WResult,
    evaluate_w,
    rd_potential,
    w_core,
    w_normalization,
    w_weight,
)
from .ricci import RicciAggregate, RicciTerm, ricci_aggregate, ricci_term, table1_rows


def __getattr__(name):
    # scikit-learn is slow to import; load the estimator wrappers on first use
    if name in ("OLSRegression", "RicciFlowTransformer"):
        from . import estimators

        return getattr(estimators, name)
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")
