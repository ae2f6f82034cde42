"""Rank-one Dunkl harmonic analysis: kernel, operators, transform, and monotonicity testers."""

__version__ = "0.1.0"

from .core import (
    Density,
    FunctionSpec,
    Gaussian,
    Intertwined,
    KernelDecaying,
    LaplaceDunkl,
    MeasureSpec,
    NamedClosedForm,
    Raw,
    RawTable,
    Scaled,
    SquaredArgument,
    Sum,
    apply_intertwining,
    dunkl_kernel,
    dunkl_kernel_osc,
    dunkl_operator_numeric,
    dunkl_operator_numeric_power,
    dunkl_operator_power_exact,
    intertwine,
)
from .grammar import format_spec, parse_spec
from .quadrature import DEFAULT_CONFIG, Envelope, QuadratureConfig
from .transform import (
    FromTransform,
    TransformConfig,
    dunkl_inverse_transform,
    dunkl_transform,
    dunkl_translate,
    inverse_intertwine,
)

__all__ = [name for name in dir() if not name.startswith("_")]
