"""braidforge: braid conversions, knot group presentations, and membership
certificates, cross-validated by Alexander polynomial oracles."""

from .braid import (
    BraidWord,
    GenusResult,
    Permutation,
    big_pi,
    closure_components,
    lspace_ttk_condition,
    one_bridge_braid,
    pi_power,
    positive_closure_genus,
    twisted_torus_braid,
)
from .invariants import (
    BurauMatrix,
    EvidenceReport,
    LaurentPoly,
    alexander_from_braid,
    burau_reduced,
    format_poly,
    same_closure_evidence,
)
from .knotgroup import (
    GammaData,
    GroupWord,
    Presentation,
    abelianization,
    dehn_fill,
    fox_alexander,
    gamma_word,
    one_bridge_presentation,
    satellite_presentation,
)
from .markov import (
    ConversionResult,
    MoveTrace,
    apply_move,
    coprime_inverses,
    reverse_trace,
    ttk_to_one_bridge,
    verify_trace,
    word_equal,
)

__version__ = "0.1.0"
