"""Quaternionic forms, Brandt matrices, scalar Yoshida lifts and their Bessel periods."""

from .brandt import BrandtEigenform, BrandtSystem, brandt, quat_eigenforms, theta_counts
from .lift import (
    Formula1Report,
    YoshidaInstance,
    YoshidaLift,
    find_instance,
    instance_for,
    mw_prediction,
    optimal_embedding,
    quaternionic_norm,
    spinor_check,
    toric_period,
    torus_points,
    verify_formula1,
    yoshida_coeffs,
)
from .numbers import QuadraticNumber
from .quaternion import IdealClassSet, QuaternionOrder, ideal_classes

__all__ = [
    "BrandtEigenform",
    "BrandtSystem",
    "Formula1Report",
    "IdealClassSet",
    "QuadraticNumber",
    "QuaternionOrder",
    "YoshidaInstance",
    "YoshidaLift",
    "brandt",
    "find_instance",
    "instance_for",
    "ideal_classes",
    "mw_prediction",
    "optimal_embedding",
    "quat_eigenforms",
    "quaternionic_norm",
    "spinor_check",
    "theta_counts",
    "toric_period",
    "torus_points",
    "verify_formula1",
    "yoshida_coeffs",
]
