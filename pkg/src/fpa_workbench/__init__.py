"""Exact toolkit for fundamental parallelepiped algebras of the simplices delta2(m).

Modules: lattice (cones and parallelepipeds), fpa (the algebras), resolution
(brute-force minimal resolutions), treebuilder (symbolic resolutions from
case rules), series (generating functions) and cli.
"""

from .fpa import FpaAlgebra, FpaElement, build_fpa_from_simplex, build_presented, check_isomorphism
from .lattice import LatticePoint, LatticeSimplex, decompose, delta2, enumerate_pip, zb_point
from .resolution import Resolution, betti_polynomial, resolve, verify_resolution
from .series import (MultiPoly, RationalSeries, build_transfer_matrix, char_poly, ehrhart_poincare,
                     koszul_check, poincare_rational, series_expand, transfer_series)
from .treebuilder import base_complex, build_symbolic_resolution, grow_tree, tree_generating_function

__version__ = "0.1.0"
