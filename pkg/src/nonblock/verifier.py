"""Nonblockingness and prefix-closedness checks.

All checks share one explicit-state search: a breadth-first forward pass
over the (implicit) deterministic state space that records, for each reached
state, its BFS parent and its predecessors, followed by a backward pass from
the marked states. Because events are expanded in sorted order, the BFS
discovery order coincides with the shortlex order of the states' access
strings, so the first offending state in discovery order yields the
lexicographically least among the shortest counterexamples.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import breadth_first_order

from .automata import Automaton, as_dfa
from .errors import EmptyComposition, LimitExceeded

SCHEMA = "nonblock/1"


@dataclass(frozen=True)
class SearchLimits:
    max_states: int = 1_000_000
    max_seconds: float = 60.0

    def __post_init__(self):
        if self.max_states <= 0 or self.max_seconds <= 0:
            raise ValueError("search limits must be positive")


@dataclass(frozen=True)
class Verdict:
    """Outcome of a nonblocking check.

    ``witness`` is a blocking string (tuple of events) when ``nonblocking`` is
    false and ``None`` otherwise. ``elapsed`` is wall-clock seconds.
    """

    nonblocking: bool
    witness: tuple | None = None
    explored: int = 0
    frontier_peak: int = 0
    elapsed: float = 0.0
    limit_hit: bool = False
    method: str = field(default="", compare=False)

    def to_json(self, timing: bool = True) -> dict:
        return {
            "schema": SCHEMA,
            "nonblocking": self.nonblocking,
            "witness": None if self.witness is None else list(self.witness),
            "explored": self.explored,
            "frontier_peak": self.frontier_peak,
            "millis": round(self.elapsed * 1000, 3) if timing else None,
            "limit_hit": self.limit_hit,
        }


@dataclass(frozen=True)
class ClosureReport:
    """Outcome of a prefix-closedness check; ``witness`` is a marked-prefix
    string that is not itself marked."""

    prefix_closed: bool
    witness: tuple | None = None
    explored: int = 0
    frontier_peak: int = 0
    elapsed: float = 0.0

    def to_json(self, timing: bool = True) -> dict:
        return {
            "schema": SCHEMA,
            "prefix_closed": self.prefix_closed,
            "witness": None if self.witness is None else list(self.witness),
            "explored": self.explored,
            "frontier_peak": self.frontier_peak,
            "millis": round(self.elapsed * 1000, 3) if timing else None,
            "limit_hit": False,
        }


def limit_json(exc: LimitExceeded, timing: bool = True) -> dict:
    return {
        "schema": SCHEMA,
        "nonblocking": None,
        "witness": None,
        "explored": exc.explored,
        "frontier_peak": exc.frontier_peak,
        "millis": round(exc.elapsed * 1000, 3) if timing else None,
        "limit_hit": True,
    }


class _Reached:
    """Forward-search result: states in discovery order plus back links."""

    def __init__(self):
        self.keys = []
        self.parent = []     # (parent index, event) or None for the start
        self.preds = []      # predecessor indices, possibly repeated
        self.marked = []
        self.frontier_peak = 0
        self.t0 = time.perf_counter()

    def __len__(self):
        return len(self.keys)

    def elapsed(self):
        return time.perf_counter() - self.t0

    def word(self, idx) -> tuple:
        out = []
        while self.parent[idx] is not None:
            idx, e = self.parent[idx]
            out.append(e)
        return tuple(reversed(out))

    def coreachable(self) -> bytearray:
        seen = bytearray(len(self.keys))
        stack = [k for k, m in enumerate(self.marked) if m]
        for k in stack:
            seen[k] = 1
        while stack:
            k = stack.pop()
            for p in self.preds[k]:
                if not seen[p]:
                    seen[p] = 1
                    stack.append(p)
        return seen


def _explore(start: Hashable,
             expand: Callable[[Hashable], Iterable[tuple]],
             is_marked: Callable[[Hashable], bool],
             limits: SearchLimits | None) -> _Reached:
    limits = limits or SearchLimits()
    r = _Reached()
    index = {start: 0}
    r.keys.append(start)
    r.parent.append(None)
    r.preds.append([])
    r.marked.append(is_marked(start))
    head = 0
    while head < len(r.keys):
        r.frontier_peak = max(r.frontier_peak, len(r.keys) - head)
        key = r.keys[head]
        for e, nxt in expand(key):
            j = index.get(nxt)
            if j is None:
                j = len(r.keys)
                if j >= limits.max_states:
                    raise LimitExceeded(f"explored more than {limits.max_states} states",
                                        explored=j, frontier_peak=r.frontier_peak,
                                        elapsed=r.elapsed())
                index[nxt] = j
                r.keys.append(nxt)
                r.parent.append((head, e))
                r.preds.append([head])
                r.marked.append(is_marked(nxt))
            else:
                r.preds[j].append(head)
        head += 1
        if head & 0xFFF == 0 and r.elapsed() > limits.max_seconds:
            raise LimitExceeded(f"exceeded {limits.max_seconds} s", explored=len(r.keys),
                                frontier_peak=r.frontier_peak, elapsed=r.elapsed())
    return r


def _nonblocking_verdict(r: _Reached, method: str) -> Verdict:
    co = r.coreachable()
    for k in range(len(r)):
        if not co[k]:
            return Verdict(False, r.word(k), len(r), r.frontier_peak, r.elapsed(), method=method)
    return Verdict(True, None, len(r), r.frontier_peak, r.elapsed(), method=method)


def coreachable_states(a: Automaton) -> frozenset:
    """States from which some marked state can be reached."""
    seen = set(a.marked)
    stack = list(seen)
    while stack:
        q = stack.pop()
        for p in a.pred[q]:
            if p not in seen:
                seen.add(p)
                stack.append(p)
    return frozenset(seen)


def check_dfa_nonblocking(d: Automaton, limits: SearchLimits | None = None) -> Verdict:
    """Linear-time check: every reachable state must be coreachable."""
    d = as_dfa(d)
    delta = d.delta
    events = d.events
    marked = d.marked

    def expand(s):
        row = delta[s]
        return [(e, row[e]) for e in events if e in row]

    return _nonblocking_verdict(_explore(d.initial_state, expand, marked.__contains__, limits), "dfa")


def _subset_space(a: Automaton):
    """Subset states as bitmasks over ``a``'s states, with their expansion."""
    masks = [{e: sum(1 << t for t in ts) for e, ts in row.items()} for row in a.succ]
    events = a.events
    marked_mask = sum(1 << q for q in a.marked)
    start = sum(1 << q for q in a.initial)

    def expand(subset):
        out = []
        for e in events:
            nxt = 0
            bits = subset
            while bits:
                low = bits & -bits
                nxt |= masks[low.bit_length() - 1].get(e, 0)
                bits ^= low
            if nxt:
                out.append((e, nxt))
        return out

    return start, expand, lambda subset: bool(subset & marked_mask)


def check_nfa_nonblocking(a: Automaton, limits: SearchLimits | None = None) -> Verdict:
    """Nonblocking check on the subset automaton, built on the fly."""
    start, expand, is_marked = _subset_space(a)
    return _nonblocking_verdict(_explore(start, expand, is_marked, limits), "subset")


def check_prefix_closed(a: Automaton, limits: SearchLimits | None = None) -> ClosureReport:
    """``L_m(a)`` is prefix-closed iff no reached subset is coreachable yet unmarked."""
    start, expand, is_marked = _subset_space(a)
    r = _explore(start, expand, is_marked, limits)
    co = r.coreachable()
    for k in range(len(r)):
        if co[k] and not r.marked[k]:
            return ClosureReport(False, r.word(k), len(r), r.frontier_peak, r.elapsed())
    return ClosureReport(True, None, len(r), r.frontier_peak, r.elapsed())


def pairwise_disjoint(alphabets: Sequence[frozenset]) -> bool:
    seen = set()
    for sigma in alphabets:
        if seen & sigma:
            return False
        seen |= sigma
    return True


def check_modular_nonblocking(components: Sequence[Automaton],
                              limits: SearchLimits | None = None) -> Verdict:
    """Nonblocking check of the synchronous product of DFAs, explored on the fly.

    When the alphabets are pairwise disjoint and every component is itself
    nonblocking, the product is nonblocking and is never explored.
    """
    comps = [as_dfa(c) for c in components]
    if not comps:
        raise EmptyComposition("cannot check an empty list of components")

    if len(comps) > 1 and pairwise_disjoint([c.alphabet for c in comps]):
        t0 = time.perf_counter()
        local = [check_dfa_nonblocking(c, limits) for c in comps]
        if all(v.nonblocking for v in local):
            return Verdict(True, None, sum(v.explored for v in local),
                           max(v.frontier_peak for v in local), time.perf_counter() - t0,
                           method="disjoint")

    if math.prod(c.num_states for c in comps) < _CODE_LIMIT:
        return _product_search(comps, limits or SearchLimits())
    return _tuple_product_search(comps, limits)


def _tuple_product_search(comps, limits):
    events = sorted(frozenset().union(*(c.alphabet for c in comps)))
    owners = {e: tuple(i for i, c in enumerate(comps) if e in c.alphabet) for e in events}
    plan = [(e, owners[e]) for e in events]
    deltas = [c.delta for c in comps]
    marked = [c.marked for c in comps]

    def expand(tup):
        out = []
        for e, who in plan:
            nxt = list(tup)
            for i in who:
                t = deltas[i][tup[i]].get(e)
                if t is None:
                    break
                nxt[i] = t
            else:
                out.append((e, tuple(nxt)))
        return out

    def is_marked(tup):
        return all(x in m for x, m in zip(tup, marked))

    start = tuple(c.initial_state for c in comps)
    return _nonblocking_verdict(_explore(start, expand, is_marked, limits), "product")


_CODE_LIMIT = 2**62


def _product_search(comps, limits):
    """Layer-synchronous product BFS on mixed-radix integer codes.

    Candidates of a layer are ordered by (parent index, event) before new
    states are numbered, which reproduces the discovery order of a plain
    FIFO search, so witnesses agree with :func:`_tuple_product_search`.
    """
    t0 = time.perf_counter()
    sizes = [c.num_states for c in comps]
    radix = [math.prod(sizes[:i]) for i in range(len(comps))]
    events = sorted(frozenset().union(*(c.alphabet for c in comps)))
    moves = []
    for e in events:
        parts = []
        for i, c in enumerate(comps):
            if e in c.alphabet:
                table = np.full(c.num_states, -1, dtype=np.int64)
                for q, row in enumerate(c.delta):
                    if e in row:
                        table[q] = row[e]
                parts.append((radix[i], sizes[i], table))
        moves.append(parts)
    marked_tables = []
    for c in comps:
        m = np.zeros(c.num_states, dtype=bool)
        m[list(c.marked)] = True
        marked_tables.append(m)

    start = sum(c.initial_state * r for c, r in zip(comps, radix))
    layers = [np.array([start], dtype=np.int64)]
    parent = [np.array([-1], dtype=np.int64)]
    via = [np.array([-1], dtype=np.int64)]
    src_chunks, dst_chunks = [], []
    seen_codes = layers[0].copy()
    seen_index = np.array([0], dtype=np.int64)
    frontier, frontier_index = layers[0], np.array([0], dtype=np.int64)
    total = 1
    peak = 1

    while frontier.size:
        peak = max(peak, int(frontier.size))
        # row-major (parent, event) layout is already FIFO discovery order
        nxt = np.repeat(frontier[:, None], len(moves), axis=1)
        ok = np.ones(nxt.shape, dtype=bool)
        for ei, parts in enumerate(moves):
            for r, n, table in parts:
                x = (frontier // r) % n
                y = table[x]
                ok[:, ei] &= y >= 0
                nxt[:, ei] += (y - x) * r
        flat = np.flatnonzero(ok.ravel())
        cand = nxt.ravel()[flat]
        cand_src = frontier_index[flat // len(moves)]
        cand_ev = flat % len(moves)

        # one sort per layer; seen_codes is then probed with sorted keys only
        uc, first, inv = np.unique(cand, return_index=True, return_inverse=True)
        pos = np.minimum(np.searchsorted(seen_codes, uc), seen_codes.size - 1)
        found = seen_codes[pos] == uc
        fresh_u = np.flatnonzero(~found)
        if total + fresh_u.size > limits.max_states:
            raise LimitExceeded(f"explored more than {limits.max_states} states",
                                explored=limits.max_states, frontier_peak=peak,
                                elapsed=time.perf_counter() - t0)
        index_u = np.where(found, seen_index[pos], -1)
        by_discovery = np.argsort(first[fresh_u], kind="stable")
        rank_sorted = np.empty(fresh_u.size, dtype=np.int64)
        rank_sorted[by_discovery] = np.arange(total, total + fresh_u.size)
        index_u[fresh_u] = rank_sorted
        dst = index_u[inv.ravel()]

        uniq, rank = uc[fresh_u], rank_sorted
        first_hit = first[fresh_u][by_discovery]
        layers.append(uniq[by_discovery])
        parent.append(cand_src[first_hit])
        via.append(cand_ev[first_hit])
        src_chunks.append(cand_src)
        dst_chunks.append(dst)

        ins = np.searchsorted(seen_codes, uniq)
        seen_codes = np.insert(seen_codes, ins, uniq)
        seen_index = np.insert(seen_index, ins, rank)
        frontier, frontier_index = layers[-1], rank[by_discovery]
        total += uniq.size
        if time.perf_counter() - t0 > limits.max_seconds:
            raise LimitExceeded(f"exceeded {limits.max_seconds} s", explored=total,
                                frontier_peak=peak, elapsed=time.perf_counter() - t0)

    codes = np.concatenate(layers)
    parent = np.concatenate(parent)
    via = np.concatenate(via)
    marked = np.ones(total, dtype=bool)
    for r, n, m in zip(radix, sizes, marked_tables):
        marked &= m[(codes // r) % n]

    src = np.concatenate(src_chunks) if src_chunks else np.empty(0, dtype=np.int64)
    dst = np.concatenate(dst_chunks) if dst_chunks else np.empty(0, dtype=np.int64)
    coreach = _backward_closure(total, src, dst, marked)
    bad = np.flatnonzero(~coreach)
    elapsed = time.perf_counter() - t0
    if bad.size == 0:
        return Verdict(True, None, total, peak, elapsed, method="product")
    k = int(bad[0])
    word = []
    while parent[k] >= 0:
        word.append(events[via[k]])
        k = int(parent[k])
    return Verdict(False, tuple(reversed(word)), total, peak, elapsed, method="product")


def _backward_closure(n, src, dst, marked):
    """Mask of nodes that reach a marked node along the edges ``src -> dst``."""
    sources = np.flatnonzero(marked)
    if sources.size == 0:
        return np.zeros(n, dtype=bool)
    # reverse edges plus a virtual root (index n) pointing at every marked node
    rows = np.concatenate([dst, np.full(sources.size, n)])
    cols = np.concatenate([src, sources])
    graph = csr_matrix((np.ones(rows.size, dtype=np.int8), (rows, cols)), shape=(n + 1, n + 1))
    reached = breadth_first_order(graph, n, directed=True, return_predecessors=False)
    mask = np.zeros(n + 1, dtype=bool)
    mask[reached] = True
    return mask[:n]
