"""Exact Dold-Kan computations for cochain complexes and DG-rings.

Modules: ``fin_maps`` (Δ and Fin), ``exact_linear`` (integer and mod-p
linear algebra), ``tensor_exterior`` (TV, ΛV and surjection words),
``dold_kan_core`` (N, K, Q and the comparison maps), ``ring_layer``
(products on QA and the homotopy ring), ``nc_geometry`` (Ω, the Amitsur
ring and coproduct rings) and ``cli``.
"""
from .exact_linear import BoundedComplex, CoeffRing, HomologySummary, ZZ
from .fin_maps import FinMap

__all__ = ["BoundedComplex", "CoeffRing", "FinMap", "HomologySummary", "ZZ"]
__version__ = "0.1.0"
