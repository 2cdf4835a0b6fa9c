"""Exact integer (co)homology of spaces of real monic polynomials whose real-root
multiplicity patterns avoid a closed poset of forbidden patterns."""

from .composition import Composition, enumerate_patterns, format_composition, insert, merge, norms, parse_composition, succeeds
from .complexes import (
    GradedComplex,
    IntegrityError,
    boundary_of,
    build_ambient,
    build_dual,
    build_quotient_complex,
    build_theta_complex,
)
from .homology import (
    HomologyTable,
    classify,
    graded_homology,
    reduced_cohomology_of_complement,
    reduced_homology_of_complement,
)
from .invariants import (
    bouquet_count,
    euler_number,
    eta_psi_xi,
    kappa,
    stability_check,
    vassiliev_ranks,
    verify_appendix,
)
from .poset import (
    ClosedPoset,
    PosetError,
    PosetSpec,
    closure,
    complement_basis,
    extend_to_degree,
    from_spec,
    is_profinite,
    maximal_elements,
    parse_spec,
)
from .snf import SNFResult, SparseMatrix, elementary_divisors, smith_normal_form

__version__ = "0.1.0"
