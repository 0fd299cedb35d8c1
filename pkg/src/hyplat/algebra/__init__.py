"""Exact algebraic-number arithmetic.

Everything here is built on :class:`fractions.Fraction`: univariate
polynomials over the rationals, number fields presented by a monic integer
defining polynomial, real-embedding bookkeeping via Sturm isolating
intervals, multiquadratic composita, and quadratic extensions K(sqrt(delta)).
"""

from __future__ import annotations

from hyplat.algebra.numberfield import (
    QQ,
    FieldElement,
    NumberField,
    is_algebraic_integer,
    is_square,
    rational_square_root,
    sign_at_embedding,
)
from hyplat.algebra.multiquadratic import (
    ImaginaryCompositum,
    MultiquadraticField,
    multiquadratic_field,
)
from hyplat.algebra.quadratic_ext import QuadExtElement, QuadraticExt

__all__ = [
    "QQ",
    "FieldElement",
    "NumberField",
    "ImaginaryCompositum",
    "MultiquadraticField",
    "QuadExtElement",
    "QuadraticExt",
    "is_algebraic_integer",
    "is_square",
    "multiquadratic_field",
    "rational_square_root",
    "sign_at_embedding",
]
