"""Exact computations in the cohomological Hall algebra of P^1(2^n)."""

from .quiver import Quiver, build_canonical_quiver
from .ratpoly import RatPoly, SymPoly
from .shuffle import shuffle_product
from .sstquot import canonical, quot_dim, quot_mul, lift
from .pn import PnElement, rewrite_to_pbw, pn_graded_dim, pn_to_coha
from .series import QtSeries, coha_poincare_series, dt_data, plethystic_exp, plethystic_log

__version__ = "0.1.0"
