"""Decision procedure for modular systems that share exactly one event.

Each component is abstracted to a unary NFA over the shared event by erasing
its private events. The product of the components' observers is then a
deterministic automaton over one letter, i.e. a path that either dies or
closes into a cycle. :func:`decide_one_shared_event` walks that path
explicitly; :func:`verify_certificate` checks a ``(k, ell)`` lasso
certificate using boolean matrix powers only, in time polynomial in the
component sizes and in ``log k``, ``log ell``.

Matrices are stored as one integer bitmask per row: bit ``t`` of row ``s``
is set when ``s`` moves to ``t`` on the shared event.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Sequence

from .automata import Automaton, project_onto
from .errors import CountOverflow, LimitExceeded, SharedAlphabetViolation
from .verifier import SearchLimits, Verdict

INT64_MAX = 2**63 - 1


@dataclass(frozen=True)
class BoolMatrix:
    n: int
    rows: tuple

    @classmethod
    def from_lists(cls, bits) -> "BoolMatrix":
        n = len(bits)
        if any(len(row) != n for row in bits):
            raise ValueError("boolean matrix must be square")
        return cls(n, tuple(sum(1 << t for t, b in enumerate(row) if b) for row in bits))

    @classmethod
    def identity(cls, n: int) -> "BoolMatrix":
        return cls(n, tuple(1 << s for s in range(n)))

    def __getitem__(self, st) -> bool:
        s, t = st
        return bool(self.rows[s] >> t & 1)

    def to_lists(self) -> list:
        return [[int(self.rows[s] >> t & 1) for t in range(self.n)] for s in range(self.n)]

    def image(self, subset: int) -> int:
        """Bitmask of states reachable in one step from the bitmask ``subset``."""
        out = 0
        while subset:
            low = subset & -subset
            out |= self.rows[low.bit_length() - 1]
            subset ^= low
        return out

    def __matmul__(self, other: "BoolMatrix") -> "BoolMatrix":
        if self.n != other.n:
            raise ValueError("dimension mismatch")
        return BoolMatrix(self.n, tuple(other.image(row) for row in self.rows))


def bool_pow(m: BoolMatrix, k: int) -> BoolMatrix:
    """``m`` to the power ``k`` over the (or, and) semiring, by repeated squaring."""
    if k < 0:
        raise ValueError("exponent must be non-negative")
    result = BoolMatrix.identity(m.n)
    base = m
    while k:
        if k & 1:
            result = result @ base
        k >>= 1
        if k:
            base = base @ base
    return result


def int_pow_counts(m: BoolMatrix, k: int, cap: int = INT64_MAX) -> list:
    """Ordinary integer power of ``m``: entry ``[s][t]`` counts length-``k`` paths.

    Raises :class:`CountOverflow` once an entry exceeds ``cap``.
    """
    if k < 0:
        raise ValueError("exponent must be non-negative")
    n = m.n

    def mul(a, b):
        out = [[sum(a[i][j] * b[j][c] for j in range(n)) for c in range(n)] for i in range(n)]
        if any(v > cap for row in out for v in row):
            raise CountOverflow(f"path count exceeds {cap}")
        return out

    result = [[int(i == j) for j in range(n)] for i in range(n)]
    base = m.to_lists()
    while k:
        if k & 1:
            result = mul(result, base)
        k >>= 1
        if k:
            base = mul(base, base)
    return result


@dataclass(frozen=True)
class UnaryComponent:
    matrix: BoolMatrix
    initial_subset: frozenset
    marked: frozenset

    @property
    def initial_mask(self) -> int:
        return sum(1 << q for q in self.initial_subset)

    @property
    def marked_mask(self) -> int:
        return sum(1 << q for q in self.marked)


@dataclass(frozen=True)
class UnarySystem:
    components: tuple
    shared_event: str


@dataclass(frozen=True)
class TupleState:
    """Per-component state sets reached after ``a^k``; every set is non-empty."""

    subsets: tuple
    marked: bool = field(compare=False)


@dataclass(frozen=True)
class LassoCertificate:
    k: int
    ell: int | None = None

    def __post_init__(self):
        if self.k < 0 or (self.ell is not None and self.ell <= self.k):
            raise ValueError(f"malformed certificate (k={self.k}, ell={self.ell})")

    def to_json(self) -> dict:
        return {"k": str(self.k), "ell": None if self.ell is None else str(self.ell)}

    @classmethod
    def from_json(cls, obj) -> "LassoCertificate":
        return cls(int(obj["k"]), None if obj.get("ell") is None else int(obj["ell"]))


def shared_events(components: Sequence[Automaton]) -> frozenset:
    shared = set()
    for i, a in enumerate(components):
        for b in components[i + 1:]:
            shared |= a.alphabet & b.alphabet
    return frozenset(shared)


def resolve_shared_event(components: Sequence[Automaton], shared_event: str | None = None) -> str:
    """The single event shared between components.

    With one component there is nothing to share, so the event must be named
    explicitly or be the component's only event.
    """
    if len(components) >= 2:
        shared = shared_events(components)
        if len(shared) != 1:
            raise SharedAlphabetViolation(
                f"expected exactly one shared event, found {sorted(shared) or 'none'}")
        (event,) = shared
        if shared_event is not None and shared_event != event:
            raise SharedAlphabetViolation(f"{shared_event!r} is not the shared event {event!r}")
        return event
    if not components:
        raise SharedAlphabetViolation("no components given")
    if shared_event is not None:
        if shared_event not in components[0].alphabet:
            raise SharedAlphabetViolation(f"{shared_event!r} is not in the component's alphabet")
        return shared_event
    if len(components[0].alphabet) == 1:
        (event,) = components[0].alphabet
        return event
    raise SharedAlphabetViolation("a single component needs the shared event to be named")


def unary_abstract(components: Sequence[Automaton], shared_event: str | None = None) -> UnarySystem:
    event = resolve_shared_event(list(components), shared_event)
    out = []
    for a in components:
        p = project_onto(a, {event})
        rows = [0] * a.num_states
        for s, _, t in p.transitions:
            rows[s] |= 1 << t
        out.append(UnaryComponent(BoolMatrix(a.num_states, tuple(rows)), p.initial, p.marked))
    return UnarySystem(tuple(out), event)


def _mask_to_set(mask: int) -> frozenset:
    return frozenset(i for i in range(mask.bit_length()) if mask >> i & 1)


def tuple_state(sys: UnarySystem, k: int) -> TupleState | None:
    """State of the observer product after ``a^k``, or ``None`` when undefined."""
    subsets = []
    for comp in sys.components:
        reach = bool_pow(comp.matrix, k).image(comp.initial_mask)
        if not reach:
            return None
        subsets.append(reach)
    marked = all(m & c.marked_mask for m, c in zip(subsets, sys.components))
    return TupleState(tuple(_mask_to_set(m) for m in subsets), marked)


def verify_certificate(sys: UnarySystem, cert: LassoCertificate) -> bool:
    here = tuple_state(sys, cert.k)
    if here is None or not here.marked:
        return False
    if cert.ell is None:
        return tuple_state(sys, cert.k + 1) is None
    return here == tuple_state(sys, cert.ell)


@dataclass(frozen=True)
class Lasso:
    """The observer-product walk: tuples ``0..length-1`` are defined and
    distinct; ``cycle_start`` is where step ``length`` re-enters, or ``None``
    when step ``length`` is undefined."""

    marked: tuple
    cycle_start: int | None

    @property
    def length(self) -> int:
        return len(self.marked)

    @property
    def period(self) -> int | None:
        return None if self.cycle_start is None else self.length - self.cycle_start


def lasso_walk(sys: UnarySystem, limits: SearchLimits | None = None) -> Lasso:
    limits = limits or SearchLimits()
    t0 = time.perf_counter()
    comps = sys.components
    marked_masks = [c.marked_mask for c in comps]
    # the walk can never revisit more tuples than there are subset tuples
    bound = math.prod(2**c.matrix.n for c in comps)
    current = tuple(c.initial_mask for c in comps)
    seen = {}
    marked = []
    while True:
        if current in seen:
            return Lasso(tuple(marked), seen[current])
        if len(seen) >= limits.max_states:
            raise LimitExceeded(f"lasso walk exceeded {limits.max_states} tuples",
                                explored=len(seen), frontier_peak=1,
                                elapsed=time.perf_counter() - t0)
        if len(seen) & 0xFFF == 0xFFF and time.perf_counter() - t0 > limits.max_seconds:
            raise LimitExceeded(f"exceeded {limits.max_seconds} s", explored=len(seen),
                                frontier_peak=1, elapsed=time.perf_counter() - t0)
        seen[current] = len(marked)
        marked.append(all(x & m for x, m in zip(current, marked_masks)))
        if len(seen) > bound:
            raise RuntimeError("observer product walk is not a lasso")
        current = tuple(c.matrix.image(x) for c, x in zip(comps, current))
        if not all(current):
            return Lasso(tuple(marked), None)


@dataclass(frozen=True)
class UnaryDecision:
    """``verdict.witness`` is the blocking string of the observer product, i.e.
    ``witness_length`` copies of the shared event."""

    verdict: Verdict
    certificate: LassoCertificate | None
    witness_length: int | None
    lasso: Lasso


def decide_one_shared_event(components: Sequence[Automaton], limits: SearchLimits | None = None,
                            shared_event: str | None = None) -> UnaryDecision:
    """Decide nonblockingness of the product of the components' observers onto
    the shared event.

    This coincides with nonblockingness of the full composition when the
    components are nonblocking DFAs; that precondition is the caller's.
    """
    t0 = time.perf_counter()
    sys = unary_abstract(components, shared_event)
    lasso = lasso_walk(sys, limits)
    elapsed = time.perf_counter() - t0
    tail = lasso.cycle_start if lasso.cycle_start is not None else lasso.length - 1
    # every nonblocking certificate has k on the cycle, or k = last tuple of a dying walk
    cert = None
    for k in range(tail, lasso.length):
        if lasso.marked[k]:
            ell = None if lasso.cycle_start is None else k + lasso.period
            cert = LassoCertificate(k, ell)
            break
    if cert is not None:
        verdict = Verdict(True, None, lasso.length, 1, elapsed, method="lasso")
        return UnaryDecision(verdict, cert, None, lasso)
    # blocking: the first tuple after the last marked one cannot reach a marked tuple
    last = max((k for k, m in enumerate(lasso.marked) if m), default=-1)
    length = last + 1
    verdict = Verdict(False, (sys.shared_event,) * length, lasso.length, 1, elapsed, method="lasso")
    return UnaryDecision(verdict, None, length, lasso)
