"""Windowed computations with nil Bohr sets.

Generalized (bracket) polynomials and their windowed Bohr sets, exact
arithmetic in the full upper-triangular unipotent group with nilrotation
return-time sets, sums-with-gaps and finite-sums set families with windowed
recurrence combinatorics, and torus skew products with grid-certified
multi-return sets.  Everything is cross-checked against independent
brute-force oracles on desk-scale windows; see nilbohr.verify.
"""

from .gp import (
    BohrSpec,
    BoundaryAmbiguous,
    GPExpr,
    Linear,
    Monomial,
    Round,
    Scale,
    SgpTerm,
    Sum,
    bohr_window,
    eval_L,
    eval_P,
    eval_sgp,
    frac_norm,
    gp_degree,
    gp_eval,
    gp_simplify,
    nearest_int,
    residual,
    sgp_to_gp,
)
from .nilmatrix import (
    LatticeElem,
    NilCoords,
    ReducedPoint,
    binom_int,
    lattice_reduce,
    mat_inv,
    mat_mul,
    mat_pow_closed,
    nil_return_set,
    superdiag,
    z1d_sequence,
)
from .setfamilies import (
    GapSeq,
    banach_upper_density,
    common_diff_set,
    diff_set,
    find_star_pattern,
    fs,
    intersective_witness,
    is_lacunary,
    is_syndetic_window,
    ramsey_sg2_partition,
    sg_d,
    sg_d_bruteforce,
)
from .dynsim import (
    BoxNbhd,
    LambdaSolution,
    TorusState,
    TorusSystem,
    multi_return_scan,
    multi_return_set,
    return_set,
    shift_correspondence_check,
    step_oracle,
    torus_orbit,
    vandermonde_lambda,
)
from .windows import WindowSet

__all__ = [name for name in dir() if not name.startswith("_")]
