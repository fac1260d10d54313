"""Morse inequalities for manifolds with boundary on triangulated instances.

Exact relative cohomology, PL critical-point counts, Witten-deformed Hodge
Laplacians on relative cochains and harmonic-oscillator model operators.
"""

from .cohomology import betti, boundary_betti, euler, rank_exact, relative_cochain_complex
from .complex_core import (
    BoundaryDecomposition,
    SimplicialComplex,
    assign_labels,
    build_complex,
    detect_boundary,
    orientation,
)
from .instances import Instance, load_instance, make_instance, parse_instance
from .meshes import EXAMPLE_NAMES, generate_example
from .morse_data import CriticalInventory, classify_pl_critical, mu_vector
from .spectral import CountingFunction, eigensolve, gaussian, heat, nu
from .verifier import VerificationReport, verify_instance
from .witten_operator import deformed_laplacians

__version__ = "0.1.0"
