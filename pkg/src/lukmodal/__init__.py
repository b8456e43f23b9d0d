"""Finite-valued Łukasiewicz modal logic: semantics, frames, algebras and definability checks."""

from .errors import (
    AlgebraError,
    BudgetExceeded,
    FormulaSyntaxError,
    FrameError,
    GrainMismatchError,
    LukModalError,
    SignatureError,
    SynthesisError,
)
from .frames import (
    FrameMap,
    LFrame,
    LnFrame,
    disjoint_union,
    disjoint_union_ln,
    enumerate_frames,
    frame,
    generated_subframe,
    is_bounded_morphism,
    is_ln_bounded_morphism,
    ln_frame_from_grains,
    trivial_enrichment,
    validate_ln,
)
from .mvcore import TruthValue, membership_term, tau_term
from .semantics import Model, eval_formula, models_based_on, valid, valid_n
from .syntax import BOX, Signature, desugar, parse, to_text, tr_n

__version__ = "0.1.0"

__all__ = [
    "AlgebraError",
    "BOX",
    "BudgetExceeded",
    "FormulaSyntaxError",
    "FrameError",
    "FrameMap",
    "GrainMismatchError",
    "LFrame",
    "LnFrame",
    "LukModalError",
    "Model",
    "Signature",
    "SignatureError",
    "SynthesisError",
    "TruthValue",
    "desugar",
    "disjoint_union",
    "disjoint_union_ln",
    "enumerate_frames",
    "eval_formula",
    "frame",
    "generated_subframe",
    "is_bounded_morphism",
    "is_ln_bounded_morphism",
    "ln_frame_from_grains",
    "membership_term",
    "models_based_on",
    "parse",
    "tau_term",
    "to_text",
    "tr_n",
    "trivial_enrichment",
    "valid",
    "valid_n",
    "validate_ln",
]
