"""Instance generators for the hardness reductions, with brute-force oracles.

Each generator maps an instance of a classical problem to a nonblocking
question whose answer is tied to the source instance by an iff:

* :func:`graph_to_dfa` - ``t`` reachable from ``s`` iff the DFA is blocking;
* :func:`universality_to_nonblocking` - NFA universal iff the gadget is nonblocking;
* :func:`dfaint_to_modular` - DFA languages intersect emptily iff the modular system is nonblocking;
* :func:`cnf3_to_unary` - formula satisfiable iff the unary modular system is nonblocking.

The oracles at the bottom compute the source-side answer directly and share
no code with the verifiers.
"""

from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import dataclass
from typing import Sequence

from .automata import Automaton, Dfa, as_dfa, check_event, validate
from .errors import (
    AlphabetMismatch,
    FewerThanTwoComponents,
    InstanceTooLarge,
    RepeatedVariableInClause,
    ReservedEventName,
)

FRESH_EVENT = "x"
UNARY_EVENT = "0"
CRT_SCAN_CAP = 10**7


@dataclass(frozen=True)
class Graph:
    nodes: int
    edges: tuple
    s: int
    t: int

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple((int(u), int(v)) for u, v in self.edges))
        ids = [self.s, self.t, *itertools.chain.from_iterable(self.edges)]
        if self.nodes < 1 or any(not 0 <= v < self.nodes for v in ids):
            raise ValueError(f"graph node ids must lie in 0..{self.nodes - 1}")


@dataclass(frozen=True)
class Cnf3:
    """3-CNF formula; a literal is ``(variable index, positive)``."""

    num_vars: int
    clauses: tuple

    def __post_init__(self):
        clauses = tuple(tuple((int(v), bool(pos)) for v, pos in c) for c in self.clauses)
        object.__setattr__(self, "clauses", clauses)
        if self.num_vars < 1:
            raise ValueError("a formula needs at least one variable")
        if not clauses:
            raise ValueError("a formula needs at least one clause")
        for c in clauses:
            if len(c) != 3:
                raise ValueError(f"clause {c} does not have exactly three literals")
            if any(not 0 <= v < self.num_vars for v, _ in c):
                raise ValueError(f"clause {c} uses a variable outside 0..{self.num_vars - 1}")


def first_primes(n: int) -> tuple:
    if n < 1:
        raise ValueError("need at least one prime")
    primes = []
    candidate = 2
    while len(primes) < n:
        if all(candidate % p for p in primes if p * p <= candidate):
            primes.append(candidate)
        candidate += 1
    return tuple(primes)


def crt(residues: Sequence[int], moduli: Sequence[int], cap: int = CRT_SCAN_CAP) -> int:
    """Least ``z >= 0`` with ``z % moduli[i] == residues[i]``, by scanning."""
    bound = math.prod(moduli)
    if bound > cap:
        raise InstanceTooLarge(f"CRT scan range {bound} exceeds cap {cap}")
    for z in range(bound):
        if all(z % m == r % m for r, m in zip(residues, moduli)):
            return z
    raise ValueError(f"no solution for residues {residues} modulo {moduli}")


def _fresh(alphabet, fresh):
    check_event(fresh)
    if fresh in alphabet:
        raise ReservedEventName(f"input alphabet already uses the reserved event {fresh!r}")
    return fresh


def graph_to_dfa(g: Graph) -> Dfa:
    """Edge ``c`` (1-based, input order) becomes a transition labelled ``c``;
    ``t`` gets an extra transition to a fresh unmarked state."""
    tprime = g.nodes
    transitions = [(u, str(c), v) for c, (u, v) in enumerate(g.edges, start=1)]
    transitions.append((g.t, str(len(g.edges) + 1), tprime))
    alphabet = {str(c) for c in range(1, len(g.edges) + 2)}
    names = [str(v) for v in range(g.nodes)] + ["t'"]
    raw = Automaton(g.nodes + 1, alphabet, transitions, {g.s}, set(range(g.nodes)), names)
    return validate(raw, require_deterministic=True)


def universality_to_nonblocking(b: Automaton, fresh: str = FRESH_EVENT) -> Automaton:
    """Complete ``b`` into an unmarked dump state and wire a fresh event from
    marked states back to the initial states (from unmarked ones, to the dump)."""
    x = _fresh(b.alphabet, fresh)
    dump = b.num_states
    transitions = set(b.transitions)
    for q in b.states:
        for e in b.events:
            if e not in b.succ[q]:
                transitions.add((q, e, dump))
        if q in b.marked:
            transitions.update((q, x, i) for i in b.initial)
        else:
            transitions.add((q, x, dump))
    transitions.update((dump, e, dump) for e in (*b.events, x))
    names = [b.state_name(q) for q in b.states] + ["d"]
    return validate(Automaton(b.num_states + 1, b.alphabet | {x}, transitions,
                              b.initial, b.marked, names))


def dfaint_to_modular(components: Sequence[Automaton], fresh: str = FRESH_EVENT) -> list:
    bs = [as_dfa(b) for b in components]
    if len(bs) < 2:
        raise FewerThanTwoComponents("the intersection reduction needs at least two DFAs")
    sigma = bs[0].alphabet
    if any(b.alphabet != sigma for b in bs):
        raise AlphabetMismatch("all DFAs must share one alphabet")
    x = _fresh(sigma, fresh)
    out = []
    for i, b in enumerate(bs, start=1):
        d = b.num_states
        transitions = set(b.transitions) | {(q, x, d) for q in b.marked}
        names = [b.state_name(q) for q in b.states] + [f"d{i}"]
        marked = set(range(b.num_states + 1))
        n = b.num_states + 1
        if i == 1:
            transitions.add((d, x, d + 1))
            names.append("d1'")
            marked = (marked | {d + 1}) - {d}
            n += 1
        out.append(validate(Automaton(n, sigma | {x}, transitions, b.initial, marked, names),
                            require_deterministic=True))
    return out


def lasso_dfa(tail: int, cycle: int, marked_position: int, complement: bool,
              event: str = UNARY_EVENT) -> Dfa:
    """Unary DFA: ``tail`` states then a cycle of ``cycle`` states.

    Marks only ``marked_position``, or everything else when ``complement``.
    """
    n = tail + cycle
    transitions = [(q, event, q + 1) for q in range(n - 1)] + [(n - 1, event, tail)]
    marked = {marked_position}
    if complement:
        marked = set(range(n)) - marked
    return validate(Automaton(n, {event}, transitions, {0}, marked), require_deterministic=True)


def clause_residues(clause) -> tuple:
    """Residue targets that make every literal of the clause false."""
    return tuple(0 if positive else 1 for _, positive in clause)


def cnf3_to_unary(f: Cnf3) -> list:
    """Unary DFAs whose product is nonblocking iff ``f`` is satisfiable.

    ``0^z`` encodes the assignment ``z mod p_u`` for the ``u``-th prime. The
    residue filters reject ``z`` that are not 0 or 1 modulo some prime, the
    clause automata reject ``z`` falsifying a clause.
    """
    for c in f.clauses:
        if len({v for v, _ in c}) != 3:
            raise RepeatedVariableInClause(f"clause {c} repeats a variable")
    primes = first_primes(f.num_vars)
    out = []
    for p in primes:
        for j in range(2, p):
            out.append(lasso_dfa(j, p, j, complement=True))
    for c in f.clauses:
        moduli = [primes[v] for v, _ in c]
        z = crt(clause_residues(c), moduli)
        out.append(lasso_dfa(z, math.prod(moduli), z, complement=True))
    return out


# --- oracles ------------------------------------------------------------

def sat3_models(f: Cnf3, max_vars: int = 16):
    """All satisfying assignments as 0/1 tuples, in lexicographic order."""
    if f.num_vars > max_vars:
        raise InstanceTooLarge(f"{f.num_vars} variables exceed the brute-force cap {max_vars}")
    for bits in itertools.product((0, 1), repeat=f.num_vars):
        if all(any(bits[v] == int(pos) for v, pos in c) for c in f.clauses):
            yield bits


def sat3_bruteforce(f: Cnf3, max_vars: int = 16) -> bool:
    return next(sat3_models(f, max_vars), None) is not None


def graph_reachable(g: Graph) -> bool:
    adj = [[] for _ in range(g.nodes)]
    for u, v in g.edges:
        adj[u].append(v)
    seen = {g.s}
    queue = deque([g.s])
    while queue:
        u = queue.popleft()
        if u == g.t:
            return True
        for v in adj[u]:
            if v not in seen:
                seen.add(v)
                queue.append(v)
    return False


def nfa_universal_small(b: Automaton, budget: int = 1 << 16) -> bool:
    """``L_m(b) == alphabet*``: every reachable subset, the empty one
    included, must contain a marked state."""
    start = frozenset(b.initial)
    seen = {start}
    queue = deque([start])
    while queue:
        subset = queue.popleft()
        if not subset & b.marked:
            return False
        for e in sorted(b.alphabet):
            nxt = frozenset(t for s, ev, t in b.transitions if s in subset and ev == e)
            if nxt not in seen:
                if len(seen) >= budget:
                    raise InstanceTooLarge(f"more than {budget} subsets")
                seen.add(nxt)
                queue.append(nxt)
    return True


def dfaint_empty_small(components: Sequence[Automaton], budget: int = 1 << 20) -> bool:
    """Whether the marked languages of the DFAs have empty intersection."""
    tables = [{(s, e): t for s, e, t in c.transitions} for c in components]
    sigma = sorted(frozenset().union(*(c.alphabet for c in components)))
    start = tuple(min(c.initial) for c in components)
    seen = {start}
    queue = deque([start])
    while queue:
        tup = queue.popleft()
        if all(q in c.marked for q, c in zip(tup, components)):
            return False
        for e in sigma:
            nxt = tuple(tab.get((q, e)) for q, tab in zip(tup, tables))
            if None not in nxt and nxt not in seen:
                if len(seen) >= budget:
                    raise InstanceTooLarge(f"more than {budget} product states")
                seen.add(nxt)
                queue.append(nxt)
    return True
