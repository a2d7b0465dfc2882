"""Twisted Dirichlet eigenvalues on balls, two-ball unions and intervals."""

from ._core import (
    ball_lambda,
    ball_lambda_direct,
    curve_defect,
    scaling_exponent,
    sweep,
    twisted,
    wirtinger_lambda,
)

__all__ = [
    "ball_lambda",
    "ball_lambda_direct",
    "curve_defect",
    "scaling_exponent",
    "sweep",
    "twisted",
    "wirtinger_lambda",
]
