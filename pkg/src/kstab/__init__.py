"""Exact Donaldson-Futaki invariants, norms and Psi for toric and monomial central fibers."""

from .degeneration import GenericFiberSpec, MonomialFiber, flatness_check, standard_monomials
from .exactnum import ExactPolynomial, Rational, eval_poly, interpolate
from .fixtures import MonomialFixture, SeriesFixture, ToricFixture, load_fixture
from .invariants import (
    AsymptoticData,
    FutakiReport,
    analyze,
    base_change,
    compare,
    donaldson_futaki,
    extract,
    futaki_from_expansion,
    norm_squared,
    psi,
    twist_sweep,
)
from .toric import ActionSpec, LatticePolytope, dilate, dilation_points, minkowski_sum

__version__ = "0.1.0"
