"""Nonblocking verification for monolithic and modular discrete-event systems."""

from .automata import (
    Automaton,
    Dfa,
    LanguageSample,
    accessible_part,
    automaton,
    determinize,
    dumps_aut,
    enumerate_strings,
    is_deterministic,
    load_aut,
    loads_aut,
    observer,
    parallel_compose,
    project_onto,
    save_aut,
    to_dot,
    validate,
)
from .reductions import (
    Cnf3,
    Graph,
    cnf3_to_unary,
    dfaint_to_modular,
    first_primes,
    graph_to_dfa,
    universality_to_nonblocking,
)
from .unary import (
    BoolMatrix,
    LassoCertificate,
    bool_pow,
    decide_one_shared_event,
    int_pow_counts,
    tuple_state,
    unary_abstract,
    verify_certificate,
)
from .verifier import (
    SearchLimits,
    Verdict,
    check_dfa_nonblocking,
    check_modular_nonblocking,
    check_nfa_nonblocking,
    check_prefix_closed,
    coreachable_states,
)

__all__ = [
    "Automaton",
    "Dfa",
    "LanguageSample",
    "accessible_part",
    "automaton",
    "determinize",
    "dumps_aut",
    "enumerate_strings",
    "is_deterministic",
    "load_aut",
    "loads_aut",
    "observer",
    "parallel_compose",
    "project_onto",
    "save_aut",
    "to_dot",
    "validate",
    "Cnf3",
    "Graph",
    "cnf3_to_unary",
    "dfaint_to_modular",
    "first_primes",
    "graph_to_dfa",
    "universality_to_nonblocking",
    "BoolMatrix",
    "LassoCertificate",
    "bool_pow",
    "decide_one_shared_event",
    "int_pow_counts",
    "tuple_state",
    "unary_abstract",
    "verify_certificate",
    "SearchLimits",
    "Verdict",
    "check_dfa_nonblocking",
    "check_modular_nonblocking",
    "check_nfa_nonblocking",
    "check_prefix_closed",
    "coreachable_states",
]

__version__ = "0.1.0"
