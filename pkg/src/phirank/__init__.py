"""Executable Myhill-Nerode types, state complexity and syntactic monoids."""

from .algebra import (
    FiniteMonoid,
    MonoidHom,
    Recognizer,
    SyntacticMonoidResult,
    check_monoid_axioms,
    is_aperiodic,
    recognizer_to_dfa,
    transition_monoid,
    verify_recognizer,
)
from .automata import Dfa, Nfa, compile, complement, counterexample, equivalent, minimize, product, run
from .core import Alphabet, parse_regex, print_regex, words_up_to
from .oracles import MembershipOracle
from .phitypes import (
    LanguageHandle,
    PhiTypeIndex,
    RankReport,
    SeparationCertificate,
    WitnessTree,
    rank_report,
    separation_certificate,
    theta_classes,
    two_type_bound_check,
    witness_tree,
)

__version__ = "0.1.0"
