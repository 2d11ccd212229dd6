"""Exact-arithmetic decision procedures for self-similar sets."""

from .exact import Box, Q, SignedPermutation, Similitude, Vec
from .ifs import (
    IFS,
    DiameterBounds,
    DimensionInfo,
    GapBounds,
    SSCResult,
    SSCStatus,
    Word,
    cell_dist_bounds,
    check_ssc,
    diameter_bounds,
    dimension,
    image_gap_lower,
    locate_point,
    min_gap,
)
from .chains import ChainStructure, chain_decomposition, chain_level, chains_ordered_1d
from .embedding import (
    CellUnion,
    EmbeddingCertificate,
    InconsistentResult,
    NotHomogeneousOrthogonal,
    OpennessCertificate,
    PowerRelation,
    PreconditionError,
    certify_embedding,
    log_commensurability,
    openness_decision,
    relation_search,
)
from .render import export_figure
from .symmetry import (
    CounterevidenceReport,
    SymmetryProblem,
    SymmetryResult,
    normalize_hull,
    same_attractor_check,
    symmetry_decision,
)
from .verify25 import run_verification

__all__ = [
    "Box",
    "Q",
    "SignedPermutation",
    "Similitude",
    "Vec",
    "IFS",
    "DiameterBounds",
    "DimensionInfo",
    "GapBounds",
    "SSCResult",
    "SSCStatus",
    "Word",
    "cell_dist_bounds",
    "check_ssc",
    "diameter_bounds",
    "dimension",
    "image_gap_lower",
    "locate_point",
    "min_gap",
    "ChainStructure",
    "chain_decomposition",
    "chain_level",
    "chains_ordered_1d",
    "CellUnion",
    "EmbeddingCertificate",
    "InconsistentResult",
    "NotHomogeneousOrthogonal",
    "OpennessCertificate",
    "PowerRelation",
    "PreconditionError",
    "certify_embedding",
    "log_commensurability",
    "openness_decision",
    "relation_search",
    "export_figure",
    "CounterevidenceReport",
    "SymmetryProblem",
    "SymmetryResult",
    "normalize_hull",
    "same_attractor_check",
    "symmetry_decision",
    "run_verification",
]
