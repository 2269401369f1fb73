"""Euler factors, L-series and central values."""

from .euler import (
    EulerFactor,
    adjoint_factor,
    gamma_constants,
    gl2_factor,
    jp_factor,
    motivic_weight,
    product_factor,
    spinor_factor,
    spinor_factor_classical,
    tensor_factor,
    twist_factor,
)
from .series import LSeries, LValue, central_value, completed_value, euler_product_value, gamma_C, gamma_R, primes_upto
from .theta import ThetaForm, ai_factor, ai_theta

__all__ = [
    "EulerFactor",
    "LSeries",
    "LValue",
    "ThetaForm",
    "adjoint_factor",
    "ai_factor",
    "ai_theta",
    "central_value",
    "completed_value",
    "euler_product_value",
    "gamma_C",
    "gamma_R",
    "gamma_constants",
    "gl2_factor",
    "jp_factor",
    "motivic_weight",
    "primes_upto",
    "product_factor",
    "spinor_factor",
    "spinor_factor_classical",
    "tensor_factor",
    "twist_factor",
]
