"""Exact Serre lattices, braid mutation, and classification of exceptional Gram matrices."""
from .blowup import FilteredLattice, blowdown, blowup, build_Kn
from .classify import (
    CanonicalClass,
    Verdict,
    canonical_gram,
    classify,
    classify_rank3,
    classify_rank4,
    is_equivalent,
    s_parity,
)
from .diophantine import (
    Rank3Coeffs,
    Rank4Coeffs,
    enumerate_rank4,
    markov_reduce,
    markov_value,
    rank4_values,
    unipotency_equivalence_check,
)
from .exceptions import InternalInconsistency, NotASolution, PreconditionError, SlkError
from .lattice import CodimFiltration, GramMatrix, SerreLattice, SurfaceType
from .mutation import (
    BasedLattice,
    BraidGen,
    BraidWord,
    Helix,
    apply_word,
    eps,
    markov_number,
    mutate_basis,
    orbit_bfs,
    rotate,
    sigma,
    sigma_inv,
)

__version__ = "0.1.0"

__all__ = [
    "BasedLattice",
    "BraidGen",
    "BraidWord",
    "CanonicalClass",
    "CodimFiltration",
    "FilteredLattice",
    "GramMatrix",
    "Helix",
    "InternalInconsistency",
    "NotASolution",
    "PreconditionError",
    "Rank3Coeffs",
    "Rank4Coeffs",
    "SerreLattice",
    "SlkError",
    "SurfaceType",
    "Verdict",
    "apply_word",
    "blowdown",
    "blowup",
    "build_Kn",
    "canonical_gram",
    "classify",
    "classify_rank3",
    "classify_rank4",
    "enumerate_rank4",
    "eps",
    "is_equivalent",
    "markov_number",
    "markov_reduce",
    "markov_value",
    "mutate_basis",
    "orbit_bfs",
    "rank4_values",
    "rotate",
    "s_parity",
    "sigma",
    "sigma_inv",
    "unipotency_equivalence_check",
]
