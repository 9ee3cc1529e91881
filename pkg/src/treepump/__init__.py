"""Ranked trees, bottom-up tree automata, and constructive pumping machinery."""

from .automata import (
    AutomatonError,
    Dta,
    StateAnnotation,
    accepts,
    annotate,
    enumerate_language,
    parse_dta,
    pumping_constant,
    run,
    run_context,
)
from .decompose import (
    Decomposition,
    NotEnoughInteresting,
    decompose_k,
    depth_d,
    g_sigma,
    interesting_nodes,
    max_interesting_path,
    pumping_threshold,
    recompose,
)
from .game import (
    Candidate,
    GameConstraint,
    GameReport,
    LanguageOracle,
    Verdict,
    builtin_oracle,
    dta_oracle,
    enumerate_decompositions,
    play,
    refute,
)
from .pump import (
    MultiPumpWitness,
    NotAccepted,
    NotEnoughMarks,
    PumpWitness,
    TreeTooSmall,
    VerificationReport,
    ogden_decompose,
    ogden_decompose_multi,
    pump,
    pump_multi,
    standard_decompose,
    verify_witness,
)
from .terms import (
    HOLE,
    Address,
    Context,
    InvalidAddressError,
    Marking,
    ParseError,
    RankedAlphabet,
    Tree,
    addresses,
    check_marks,
    compose,
    context_at,
    format_address,
    infer_alphabet,
    is_prefix,
    is_strict_prefix,
    merge_alphabets,
    parse_address,
    parse_context,
    parse_tree,
    power,
    render,
    replace_at,
    size,
    size_context,
    split,
    substitute,
    subtree_at,
    walk,
)

__version__ = "0.1.0"
