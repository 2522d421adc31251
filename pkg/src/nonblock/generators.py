"""Seeded random instances for property tests and benchmarks.

Every function takes a :class:`random.Random`; use :func:`stream` to derive
an independent, reproducible generator per named purpose from one seed.
"""

from __future__ import annotations

import random

from .automata import Automaton, validate
from .reductions import Cnf3, Graph


def stream(seed: int, name: str) -> random.Random:
    return random.Random(f"{seed}/{name}")


def random_graph(rng: random.Random, max_nodes: int = 20, max_edges: int = 40) -> Graph:
    n = rng.randint(1, max_nodes)
    edges = tuple((rng.randrange(n), rng.randrange(n)) for _ in range(rng.randint(0, max_edges)))
    return Graph(n, edges, rng.randrange(n), rng.randrange(n))


def random_nfa(rng: random.Random, max_states: int = 5, events=("a", "b"),
               density: float = 0.35) -> Automaton:
    n = rng.randint(1, max_states)
    transitions = {(s, e, t) for s in range(n) for e in events for t in range(n)
                   if rng.random() < density}
    initial = {q for q in range(n) if rng.random() < 0.3} or {rng.randrange(n)}
    marked = {q for q in range(n) if rng.random() < 0.6}
    return validate(Automaton(n, events, transitions, initial, marked))


def random_dfa(rng: random.Random, num_states: int, events, p_trans: float = 0.7,
               p_marked: float = 0.4) -> Automaton:
    transitions = {(s, e, rng.randrange(num_states)) for s in range(num_states) for e in events
                   if rng.random() < p_trans}
    marked = {q for q in range(num_states) if rng.random() < p_marked}
    return validate(Automaton(num_states, events, transitions, {0}, marked),
                    require_deterministic=True)


def random_modular(rng: random.Random, n: int, max_states: int = 6, exact: bool = False) -> list:
    """``n`` DFAs over overlapping alphabets drawn from a pool of ``n + 2`` events.

    Every component owns one private event and joins two or three pool
    events, so the product mixes synchronisation with interleaving.
    """
    pool = [f"s{k}" for k in range(n + 2)]
    comps = []
    for i in range(n):
        events = set(rng.sample(pool, rng.randint(2, 3))) | {f"p{i}"}
        states = max_states if exact else rng.randint(1, max_states)
        comps.append(random_dfa(rng, states, sorted(events)))
    return comps


def random_one_shared(rng: random.Random, n: int, max_states: int = 5, shared: str = "a") -> list:
    """Components over ``{shared}`` plus up to two private events each."""
    comps = []
    for i in range(n):
        events = [shared] + [f"p{i}_{k}" for k in range(rng.randint(0, 2))]
        comps.append(random_dfa(rng, rng.randint(1, max_states), events))
    return comps


def random_dfaint(rng: random.Random, n: int, max_states: int = 4, events=("a", "b")) -> list:
    return [random_dfa(rng, rng.randint(1, max_states), events, p_trans=0.8, p_marked=0.35)
            for _ in range(n)]


def random_cnf3(rng: random.Random, num_vars: int, num_clauses: int) -> Cnf3:
    clauses = []
    for _ in range(num_clauses):
        variables = rng.sample(range(num_vars), 3)
        clauses.append(tuple((v, rng.random() < 0.5) for v in variables))
    return Cnf3(num_vars, tuple(clauses))
