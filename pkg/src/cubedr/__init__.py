"""Exact cubical de Rham calculus on finite cubical models."""
from .polynomial import Polynomial, parse_polynomial
from .polyform import PolyForm, PolyMap, exterior_derivative, pullback, wedge
from .cohomology import CellComplexModel, chain_complex, betti, model_betti, mayer_vietoris

__version__ = "0.1.0"
