"""Exact Heegaard Floer d-invariant computations and unknotting number obstructions."""

from .arith import OmegaWitness, cf_eval, negative_expansion, omega_check
from .cfk import (
    CFKComplex,
    Region,
    check_lan,
    d_large_surgery,
    d_one,
    homology,
    reduce,
    staircase,
    tau,
    validate_complex,
    verify_prop_c,
    whitehead_double_hfk,
)
from .dtable import DTable, connected_sum_d, reverse_orientation
from .knots import AlexanderPoly, surgery_d_table_lspace, torsion_coeffs
from .lens import LensSpace, lens_d_recursive, lens_d_table, lens_p1_table
from .obstruct import (
    Verdict,
    affine_dominates,
    affine_match,
    lspace_u_plus_obstruction,
    obstruction_u_minus_zero,
    whitehead_cable_obstruction,
)
from .plumbing import PlumbedTree, d_invariant_plumbing, d_table_plumbing

__version__ = "0.1.0"
