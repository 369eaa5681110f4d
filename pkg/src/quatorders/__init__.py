"""Explicit orders of prescribed level in definite quaternion algebras over Q."""

from .construct import (
    LevelSplit,
    OrderRecipe,
    OrderResult,
    Selection,
    closed_form_basis,
    compute_fgh,
    construct_order,
    lower_level,
    pre_lowering_order,
    predict_local_levels,
    select_ab,
    split_level,
    uncorrected_basis,
)
from .errors import NotConstructible, QuatOrdersError
from .lattice import QuatLattice, hnf, is_order, reduced_discriminant
from .quat import QuatAlgebra, QuatElement, classify_prime, ramified_primes
from .verify import SweepReport, sweep, verify_order

__version__ = "0.1.0"
