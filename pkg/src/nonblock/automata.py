"""Finite automata over named events.

An :class:`Automaton` is an NFA with dense integer states ``0..n-1``, its own
alphabet, a transition relation, a non-empty initial set and a marked set.
A :class:`Dfa` is the same structure with a single initial state and at most
one successor per ``(state, event)``. Transition functions are partial
everywhere; nothing here ever adds a sink state.

Every construction explores breadth-first with events in sorted order, so
state numbering of the results is reproducible run to run.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from .errors import (
    AutomatonError,
    BadStateId,
    BoundTooLarge,
    EmptyComposition,
    EmptyInitialSet,
    EventNotInAlphabet,
    InvalidEvent,
    NondeterministicTransition,
    ParseError,
    StateBudgetExceeded,
    UnknownEvent,
)

Word = tuple  # tuple[str, ...]

DEFAULT_SUBSET_BUDGET = 2**20
DEFAULT_ENUM_BOUND = 8


def check_event(label) -> str:
    if not isinstance(label, str) or not label:
        raise InvalidEvent(f"event label must be a non-empty string, got {label!r}")
    if not label.isprintable() or any(ch.isspace() for ch in label):
        raise InvalidEvent(f"event label {label!r} contains whitespace or control characters")
    return label


@dataclass(frozen=True, eq=False)
class Automaton:
    num_states: int
    alphabet: frozenset
    transitions: frozenset
    initial: frozenset
    marked: frozenset
    names: tuple | None = field(default=None, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "alphabet", frozenset(self.alphabet))
        object.__setattr__(self, "transitions", frozenset(tuple(t) for t in self.transitions))
        object.__setattr__(self, "initial", frozenset(self.initial))
        object.__setattr__(self, "marked", frozenset(self.marked))
        if self.names is not None:
            object.__setattr__(self, "names", tuple(str(n) for n in self.names))

    def _key(self):
        return (self.num_states, self.alphabet, self.transitions, self.initial, self.marked)

    def __eq__(self, other):
        if not isinstance(other, Automaton):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    @property
    def states(self) -> range:
        return range(self.num_states)

    @cached_property
    def events(self) -> tuple:
        """Alphabet in the canonical (sorted) exploration order."""
        return tuple(sorted(self.alphabet))

    @cached_property
    def succ(self) -> tuple:
        """``succ[state][event]`` is the sorted tuple of successor states."""
        table = [dict() for _ in range(self.num_states)]
        for s, e, t in self.transitions:
            table[s].setdefault(e, []).append(t)
        return tuple({e: tuple(sorted(ts)) for e, ts in row.items()} for row in table)

    @cached_property
    def pred(self) -> tuple:
        table = [[] for _ in range(self.num_states)]
        for s, _, t in self.transitions:
            table[t].append(s)
        return tuple(tuple(sorted(set(row))) for row in table)

    def state_name(self, s: int) -> str:
        return self.names[s] if self.names is not None else str(s)

    def successors(self, states: Iterable[int], event: str) -> frozenset:
        out = set()
        for s in states:
            out.update(self.succ[s].get(event, ()))
        return frozenset(out)

    def run(self, word: Sequence[str]) -> frozenset:
        """Set of states reached from the initial set by ``word``."""
        current = self.initial
        for e in word:
            current = self.successors(current, e)
            if not current:
                break
        return current

    def generates(self, word: Sequence[str]) -> bool:
        return bool(self.run(word))

    def accepts(self, word: Sequence[str]) -> bool:
        return bool(self.run(word) & self.marked)

    def __repr__(self):
        return (f"{type(self).__name__}(states={self.num_states}, alphabet={sorted(self.alphabet)}, "
                f"transitions={len(self.transitions)}, initial={sorted(self.initial)}, "
                f"marked={sorted(self.marked)})")


class Dfa(Automaton):
    """An automaton that passed the determinism check in :func:`validate`."""

    @property
    def initial_state(self) -> int:
        (q,) = self.initial
        return q

    @cached_property
    def delta(self) -> tuple:
        """``delta[state][event]`` is the unique successor, absent when undefined."""
        return tuple({e: ts[0] for e, ts in row.items()} for row in self.succ)


def validate(raw: Automaton, require_deterministic: bool = False) -> Automaton:
    """Check the structural invariants of ``raw`` and return a clean copy.

    With ``require_deterministic`` the result is a :class:`Dfa`.
    """
    n = raw.num_states
    if not isinstance(n, int) or n < 1:
        raise BadStateId(f"an automaton needs at least one state, got {n!r}")
    for e in raw.alphabet:
        check_event(e)
    if not raw.initial:
        raise EmptyInitialSet("initial state set is empty")

    def check_id(q, what):
        if not isinstance(q, int) or not 0 <= q < n:
            raise BadStateId(f"{what} state {q!r} outside 0..{n - 1}")

    for q in raw.initial:
        check_id(q, "initial")
    for q in raw.marked:
        check_id(q, "marked")
    for s, e, t in raw.transitions:
        check_id(s, "source")
        check_id(t, "target")
        if e not in raw.alphabet:
            raise UnknownEvent(f"transition ({s}, {e}, {t}) uses event outside the alphabet")
    if raw.names is not None and len(raw.names) != n:
        raise BadStateId(f"name table has {len(raw.names)} entries for {n} states")

    cls = Automaton
    if require_deterministic:
        if len(raw.initial) != 1:
            raise NondeterministicTransition(f"a DFA needs exactly one initial state, got {len(raw.initial)}")
        seen = {}
        for s, e, t in sorted(raw.transitions):
            if seen.setdefault((s, e), t) != t:
                raise NondeterministicTransition(
                    f"state {s} has several successors under {e!r}: {seen[(s, e)]} and {t}")
        cls = Dfa
    return cls(n, raw.alphabet, raw.transitions, raw.initial, raw.marked, raw.names)


def automaton(num_states, alphabet, transitions, initial, marked, names=None,
              deterministic=False) -> Automaton:
    """Build and validate an automaton in one call."""
    return validate(Automaton(num_states, alphabet, transitions, initial, marked, names),
                    require_deterministic=deterministic)


def is_deterministic(a: Automaton) -> bool:
    if len(a.initial) != 1:
        return False
    return all(len(ts) <= 1 for row in a.succ for ts in row.values())


def as_dfa(a: Automaton) -> Dfa:
    return a if isinstance(a, Dfa) else validate(a, require_deterministic=True)


def _rebuild(a: Automaton, **changes) -> Automaton:
    """Rebuild ``a`` with some fields replaced, promoting to Dfa when possible."""
    fields = dict(num_states=a.num_states, alphabet=a.alphabet, transitions=a.transitions,
                  initial=a.initial, marked=a.marked, names=a.names)
    fields.update(changes)
    out = Automaton(**fields)
    if is_deterministic(out):
        return Dfa(**fields)
    return out


def accessible_part(a: Automaton) -> Automaton:
    """Restrict ``a`` to the states reachable from its initial set.

    States are renumbered in breadth-first discovery order (initial states in
    ascending order first, then events in sorted order).
    """
    order = []
    index = {}
    queue = deque()
    for q in sorted(a.initial):
        index[q] = len(order)
        order.append(q)
        queue.append(q)
    while queue:
        s = queue.popleft()
        row = a.succ[s]
        for e in a.events:
            for t in row.get(e, ()):
                if t not in index:
                    index[t] = len(order)
                    order.append(t)
                    queue.append(t)
    transitions = {(index[s], e, index[t]) for s, e, t in a.transitions if s in index}
    names = tuple(a.state_name(q) for q in order)
    cls = Dfa if isinstance(a, Dfa) else Automaton
    return cls(len(order), a.alphabet, transitions,
               {index[q] for q in a.initial}, {index[q] for q in a.marked if q in index}, names)


def parallel_compose(components: Sequence[Automaton]) -> Automaton:
    """Synchronous product, restricted to its accessible part.

    Shared events move every component that has them in its alphabet;
    private events move their owner only. A tuple is marked when every
    component state in it is marked. The product of DFAs is a Dfa.
    """
    components = list(components)
    if not components:
        raise EmptyComposition("cannot compose an empty list of automata")
    alphabet = frozenset().union(*(c.alphabet for c in components))
    events = sorted(alphabet)
    owners = {e: [i for i, c in enumerate(components) if e in c.alphabet] for e in events}

    index = {}
    order = []
    queue = deque()
    for start in itertools.product(*(sorted(c.initial) for c in components)):
        if start not in index:
            index[start] = len(order)
            order.append(start)
            queue.append(start)
    transitions = set()
    while queue:
        tup = queue.popleft()
        src = index[tup]
        for e in events:
            choices = [(x,) for x in tup]
            for i in owners[e]:
                choices[i] = components[i].succ[tup[i]].get(e, ())
                if not choices[i]:
                    break
            else:
                for nxt in itertools.product(*choices):
                    if nxt not in index:
                        index[nxt] = len(order)
                        order.append(nxt)
                        queue.append(nxt)
                    transitions.add((src, e, index[nxt]))

    marked = {k for k, tup in enumerate(order)
              if all(x in c.marked for x, c in zip(tup, components))}
    initial = {index[start] for start in itertools.product(*(sorted(c.initial) for c in components))}
    names = tuple("(" + ",".join(c.state_name(x) for x, c in zip(tup, components)) + ")"
                  for tup in order)
    cls = Dfa if all(isinstance(c, Dfa) or is_deterministic(c) for c in components) else Automaton
    return cls(len(order), alphabet, transitions, initial, marked, names)


def determinize(a: Automaton, budget: int = DEFAULT_SUBSET_BUDGET) -> Dfa:
    """Subset construction over reachable, non-empty subsets only."""
    start = tuple(sorted(a.initial))
    index = {start: 0}
    order = [start]
    queue = deque([start])
    transitions = []
    while queue:
        subset = queue.popleft()
        src = index[subset]
        for e in a.events:
            nxt = tuple(sorted(a.successors(subset, e)))
            if not nxt:
                continue
            if nxt not in index:
                if len(order) >= budget:
                    raise StateBudgetExceeded(
                        f"subset construction exceeded the budget of {budget} states")
                index[nxt] = len(order)
                order.append(nxt)
                queue.append(nxt)
            transitions.append((src, e, index[nxt]))
    marked = {k for k, subset in enumerate(order) if a.marked.intersection(subset)}
    names = tuple("{" + ",".join(a.state_name(q) for q in subset) + "}" for subset in order)
    return Dfa(len(order), a.alphabet, transitions, {0}, marked, names)


def epsilon_closures(a: Automaton, erased: Iterable[str]) -> tuple:
    """For each state, the set of states reachable using only ``erased`` events."""
    erased = frozenset(erased)
    closures = []
    for s in a.states:
        seen = {s}
        stack = [s]
        while stack:
            q = stack.pop()
            for e, ts in a.succ[q].items():
                if e in erased:
                    for t in ts:
                        if t not in seen:
                            seen.add(t)
                            stack.append(t)
        closures.append(frozenset(seen))
    return tuple(closures)


def project_onto(a: Automaton, keep: Iterable[str]) -> Automaton:
    """Relabel events outside ``keep`` as silent moves, then eliminate them.

    The state set is unchanged. The new initial set is the silent closure of
    the old one, ``(s, e, t)`` is a transition when ``s`` can reach ``t`` by
    silent moves, one ``e`` and silent moves again, and a state is marked
    when its silent closure meets the old marked set.
    """
    keep = frozenset(keep)
    missing = keep - a.alphabet
    if missing:
        raise EventNotInAlphabet(f"events {sorted(missing)} are not in the alphabet")
    cl = epsilon_closures(a, a.alphabet - keep)
    transitions = set()
    for s in a.states:
        for mid in cl[s]:
            for e, ts in a.succ[mid].items():
                if e in keep:
                    for t in ts:
                        for u in cl[t]:
                            transitions.add((s, e, u))
    initial = frozenset().union(*(cl[q] for q in a.initial))
    marked = {s for s in a.states if cl[s] & a.marked}
    return _rebuild(a, alphabet=keep, transitions=transitions, initial=initial, marked=marked)


def observer(a: Automaton, keep: Iterable[str], budget: int = DEFAULT_SUBSET_BUDGET) -> Dfa:
    """Deterministic automaton for the projection of ``a`` onto ``keep``."""
    return determinize(project_onto(a, keep), budget=budget)


@dataclass(frozen=True)
class LanguageSample:
    """Generated and marked strings of an automaton up to a length bound."""

    generated: frozenset
    marked_lang: frozenset
    bound: int


def enumerate_strings(a: Automaton, max_len: int, limit: int = DEFAULT_ENUM_BOUND) -> LanguageSample:
    """Exact ``L(a)`` and ``L_m(a)`` truncated to strings of length <= ``max_len``."""
    if max_len < 0 or max_len > limit:
        raise BoundTooLarge(f"max_len {max_len} outside 0..{limit}")
    generated = set()
    marked = set()
    layer = {(): a.initial}
    for length in range(max_len + 1):
        nxt = {}
        for word, subset in layer.items():
            generated.add(word)
            if subset & a.marked:
                marked.add(word)
            if length == max_len:
                continue
            for e in a.events:
                target = a.successors(subset, e)
                if target:
                    nxt[word + (e,)] = target
        layer = nxt
    return LanguageSample(frozenset(generated), frozenset(marked), max_len)


def project_word(word: Sequence[str], keep) -> Word:
    return tuple(e for e in word if e in keep)


# --- text formats -------------------------------------------------------

def dumps_aut(a: Automaton) -> str:
    lines = [
        f"states {a.num_states}",
        " ".join(["alphabet", *a.events]),
        " ".join(["initial", *map(str, sorted(a.initial))]),
        " ".join(["marked", *map(str, sorted(a.marked))]),
    ]
    lines += [f"trans {s} {e} {t}" for s, e, t in sorted(a.transitions)]
    return "\n".join(lines) + "\n"


def loads_aut(text: str, source: str = "<string>", deterministic: bool = False) -> Automaton:
    """Parse the line-based ``.aut`` format."""
    headers = {}
    transitions = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, *rest = line.split()
        if key in ("states", "alphabet", "initial", "marked"):
            if key in headers:
                raise ParseError(f"duplicate '{key}' line", source, lineno)
            headers[key] = (rest, lineno)
        elif key == "trans":
            if len(rest) != 3:
                raise ParseError("expected 'trans <source> <event> <target>'", source, lineno)
            transitions.append((rest, lineno))
        else:
            raise ParseError(f"unknown directive {key!r}", source, lineno)

    def ints(key):
        values, lineno = headers.get(key, ([], None))
        try:
            return [int(v) for v in values], lineno
        except ValueError:
            raise ParseError(f"'{key}' expects integer state ids", source, lineno) from None

    for key in ("states", "alphabet", "initial"):
        if key not in headers:
            raise ParseError(f"missing '{key}' line", source)
    (n_values, n_line) = ints("states")
    if len(n_values) != 1:
        raise ParseError("'states' expects a single count", source, n_line)
    alphabet = set(headers["alphabet"][0])
    trans = []
    for (s, e, t), lineno in transitions:
        try:
            s, t = int(s), int(t)
        except ValueError:
            raise ParseError("transition endpoints must be integers", source, lineno) from None
        # per-line checks so the diagnostic can point at the offending line
        if e not in alphabet:
            raise ParseError(f"event {e!r} is not in the alphabet", source, lineno)
        if not (0 <= s < n_values[0] and 0 <= t < n_values[0]):
            raise ParseError(f"state id outside 0..{n_values[0] - 1}", source, lineno)
        trans.append((s, e, t))
    initial, _ = ints("initial")
    marked, _ = ints("marked")
    raw = Automaton(n_values[0], headers["alphabet"][0], trans, initial, marked)
    try:
        return validate(raw, require_deterministic=deterministic)
    except AutomatonError as exc:
        raise ParseError(str(exc), source) from exc


def load_aut(path, deterministic: bool = False) -> Automaton:
    with open(path, encoding="utf-8") as fh:
        return loads_aut(fh.read(), source=str(path), deterministic=deterministic)


def save_aut(a: Automaton, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_aut(a))


def to_dot(a: Automaton, name: str = "A") -> str:
    """Graphviz rendering: marked states double-circled, initial states arrowed."""
    def quote(s):
        return '"' + str(s).replace("\\", "\\\\").replace('"', '\\"') + '"'

    lines = [f"digraph {quote(name)} {{", "  rankdir=LR;"]
    for q in a.states:
        shape = "doublecircle" if q in a.marked else "circle"
        lines.append(f"  {q} [label={quote(a.state_name(q))}, shape={shape}];")
    for k, q in enumerate(sorted(a.initial)):
        lines.append(f"  __init{k} [shape=point];")
        lines.append(f"  __init{k} -> {q};")
    labels = {}
    for s, e, t in sorted(a.transitions):
        labels.setdefault((s, t), []).append(e)
    for (s, t), es in sorted(labels.items()):
        lines.append(f"  {s} -> {t} [label={quote(','.join(es))}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
