"""PCAMIX: principal component analysis of mixed quantitative and qualitative
data, with varimax rotation using a closed-form planar angle."""

from .errors import (
    DegenerateInputError,
    IndexSetMismatchError,
    KTooLargeError,
    KTooSmallError,
    MissingValueError,
    ParameterError,
    PcamixError,
    SingleCategoryError,
    TooFewRowsError,
    ValidationError,
    ZeroVarianceError,
)
from .mixdata import (
    CategoryMap,
    MixedTable,
    QualitativeColumn,
    QuantitativeColumn,
    RecodedMatrix,
    indicator_matrix,
    recode,
    standardize,
)
from .svd import PcamixModel, fit, squared_loadings, variance_explained
from .varimax import (
    PlanarCoefficients,
    RotationResult,
    objective_closed_form,
    planar_coefficients,
    rotate,
    varimax_derivative,
    varimax_objective,
)

__version__ = "0.1.0"
