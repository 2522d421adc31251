import itertools
import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from instances import two_event_a1, blocking_pair_a1, blocking_pair_a2, two_clause_formula
from nonblock.automata import automaton, observer, parallel_compose
from nonblock.errors import CountOverflow, SharedAlphabetViolation
from nonblock.generators import random_one_shared
from nonblock.reductions import cnf3_to_unary
from nonblock.unary import (
    BoolMatrix,
    LassoCertificate,
    bool_pow,
    decide_one_shared_event,
    int_pow_counts,
    lasso_walk,
    tuple_state,
    unary_abstract,
    verify_certificate,
)
from nonblock.verifier import check_dfa_nonblocking

M1_ROWS = [[0, 1, 1, 0], [1, 0, 0, 1], [0, 0, 0, 1], [1, 0, 0, 0]]
M1_POW4 = [[1, 2, 2, 2], [3, 1, 1, 2], [1, 0, 0, 2], [2, 1, 1, 0]]


def naive_bool_pow(rows, k):
    n = len(rows)
    result = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(k):
        result = [[int(any(result[i][m] and rows[m][j] for m in range(n))) for j in range(n)]
                  for i in range(n)]
    return result


def random_matrix(rng, n, density=0.3):
    return BoolMatrix.from_lists([[rng.random() < density for _ in range(n)] for _ in range(n)])


def observer_walk(components, event):
    """Explicit walk over the composed observers: marked flags per step and
    where the walk re-enters (None when it dies)."""
    product = parallel_compose([observer(c, {event}) for c in components])
    state, seen, marks = product.initial_state, {}, []
    while state is not None and state not in seen:
        seen[state] = len(marks)
        marks.append(state in product.marked)
        state = product.delta[state].get(event)
    return marks, (None if state is None else seen[state])


# --- abstraction ---------------------------------------------------------

def test_unary_abstract_two_event():
    sys = unary_abstract([two_event_a1()], "a")
    (comp,) = sys.components
    assert comp.matrix.to_lists() == M1_ROWS
    assert comp.initial_subset == {0}
    assert comp.marked == {0}


def test_component_without_shared_transitions():
    a = automaton(3, {"a", "b"}, [(0, "b", 1), (1, "b", 2)], {0}, {2}, deterministic=True)
    b = automaton(1, {"a"}, [(0, "a", 0)], {0}, {0}, deterministic=True)
    comp = unary_abstract([a, b]).components[0]
    assert comp.matrix.to_lists() == [[0] * 3] * 3
    assert comp.initial_subset == {0, 1, 2}


@pytest.mark.parametrize("alphabets", [({"a", "b"}, {"a", "b"}), ({"a"}, {"b"})])
def test_shared_alphabet_violation(alphabets):
    comps = [automaton(1, sigma, [], {0}, {0}, deterministic=True) for sigma in alphabets]
    with pytest.raises(SharedAlphabetViolation):
        unary_abstract(comps)


def test_single_component_needs_named_event():
    with pytest.raises(SharedAlphabetViolation):
        unary_abstract([two_event_a1()])
    with pytest.raises(SharedAlphabetViolation):
        unary_abstract([blocking_pair_a1(), blocking_pair_a2()], shared_event="b")


# --- matrix powers -------------------------------------------------------

def test_bool_pow_zero_is_identity():
    m = BoolMatrix.from_lists(M1_ROWS)
    assert bool_pow(m, 0) == BoolMatrix.identity(4)


def test_bool_pow_two_event_support():
    p = bool_pow(BoolMatrix.from_lists(M1_ROWS), 4)
    zeros = {(s + 1, t + 1) for s in range(4) for t in range(4) if not p[s, t]}
    assert zeros == {(3, 2), (3, 3), (4, 4)}


def test_bool_pow_matches_naive_multiplication():
    rng = random.Random(2)
    for _ in range(20):
        m = random_matrix(rng, 6)
        for k in range(11):
            assert bool_pow(m, k).to_lists() == naive_bool_pow(m.to_lists(), k)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.integers(0, 8), st.integers(0, 8))
def test_bool_pow_is_a_monoid_morphism(seed, j, k):
    m = random_matrix(random.Random(seed), 5)
    assert bool_pow(m, j + k) == bool_pow(m, j) @ bool_pow(m, k)


def test_int_pow_counts_two_event():
    assert int_pow_counts(BoolMatrix.from_lists(M1_ROWS), 4) == M1_POW4
    assert int_pow_counts(BoolMatrix.from_lists(M1_ROWS), 1) == M1_ROWS


def test_int_pow_counts_row_sums_count_two_step_paths():
    rng = random.Random(8)
    m = random_matrix(rng, 5, 0.5)
    rows = m.to_lists()
    counts = int_pow_counts(m, 2)
    for s in range(5):
        paths = sum(1 for mid, end in itertools.product(range(5), repeat=2) if rows[s][mid] and rows[mid][end])
        assert sum(counts[s]) == paths


def test_int_pow_counts_overflow():
    full = BoolMatrix.from_lists([[1] * 4] * 4)
    with pytest.raises(CountOverflow):
        int_pow_counts(full, 40)
    assert int_pow_counts(full, 3)[0][0] == 16


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10**6), st.integers(0, 12))
def test_support_of_counts_equals_boolean_power(seed, k):
    m = random_matrix(random.Random(seed), 5, 0.35)
    counts = int_pow_counts(m, k)
    assert [[int(v > 0) for v in row] for row in counts] == bool_pow(m, k).to_lists()


# --- tuple states and certificates ---------------------------------------

def test_tuple_state_zero_is_initial():
    sys = unary_abstract([blocking_pair_a1(), blocking_pair_a2()])
    assert tuple_state(sys, 0).subsets == ({0}, {0})


def test_tuple_state_two_event():
    assert tuple_state(unary_abstract([two_event_a1()], "a"), 4).subsets == ({0, 1, 2, 3},)


def test_tuple_state_blocking_pair_dies_at_two():
    sys = unary_abstract([blocking_pair_a1(), blocking_pair_a2()])
    assert tuple_state(sys, 1).subsets == ({1}, {1})
    assert tuple_state(sys, 2) is None
    marks, cycle = observer_walk([blocking_pair_a1(), blocking_pair_a2()], "a")
    assert (len(marks), cycle) == (2, None)


def test_certificate_selfloop():
    loop = automaton(1, {"a"}, [(0, "a", 0)], {0}, {0}, deterministic=True)
    assert verify_certificate(unary_abstract([loop]), LassoCertificate(0, 1))


def test_certificate_blocking_pair_rejected():
    sys = unary_abstract([blocking_pair_a1(), blocking_pair_a2()])
    assert not verify_certificate(sys, LassoCertificate(0))
    assert not verify_certificate(sys, LassoCertificate(1))


def test_certificate_two_clause_formula():
    comps = cnf3_to_unary(two_clause_formula())
    sys = unary_abstract(comps)
    marks, cycle = observer_walk(comps, "0")
    period = len(marks) - cycle
    assert cycle <= 40 and (70 - 40) % period == 0 and marks[cycle + (40 - cycle) % period]
    assert verify_certificate(sys, LassoCertificate(40, 70))
    assert not verify_certificate(sys, LassoCertificate(40, 71))


def test_certificate_json_uses_decimal_strings():
    cert = LassoCertificate(2**80, 2**81)
    obj = json.loads(json.dumps(cert.to_json()))
    assert obj == {"k": str(2**80), "ell": str(2**81)}
    assert LassoCertificate.from_json(obj) == cert
    assert LassoCertificate(3).to_json() == {"k": "3", "ell": None}
    with pytest.raises(ValueError):
        LassoCertificate(3, 3)


def test_huge_exponents_verify_quickly():
    loop = automaton(3, {"a"}, [(0, "a", 1), (1, "a", 2), (2, "a", 0)], {0}, {0}, deterministic=True)
    sys = unary_abstract([loop])
    k = 3 * 10**30
    assert verify_certificate(sys, LassoCertificate(k, k + 3))
    assert not verify_certificate(sys, LassoCertificate(k + 1, k + 4))


# --- decision ------------------------------------------------------------

def test_decide_blocking_pair():
    d = decide_one_shared_event([blocking_pair_a1(), blocking_pair_a2()])
    assert not d.verdict.nonblocking
    assert d.lasso.marked == (True, False) and d.lasso.cycle_start is None
    assert d.witness_length == 1 and d.verdict.witness == ("a",)
    assert d.certificate is None


def test_decide_selfloop():
    loop = automaton(1, {"a"}, [(0, "a", 0)], {0}, {0}, deterministic=True)
    d = decide_one_shared_event([loop])
    assert d.verdict.nonblocking and d.certificate == LassoCertificate(0, 1)


def test_decide_two_clause_formula():
    d = decide_one_shared_event(cnf3_to_unary(two_clause_formula()))
    assert d.verdict.nonblocking
    marks, cycle = observer_walk(cnf3_to_unary(two_clause_formula()), "0")
    assert d.lasso.marked == tuple(marks) and d.lasso.cycle_start == cycle
    # least k on the cycle whose tuple is marked
    k = next(i for i in range(cycle, len(marks)) if marks[i])
    assert d.certificate == LassoCertificate(k, k + len(marks) - cycle)


def test_decide_matches_observer_product_and_certificates_verify():
    for seed in range(150):
        rng = random.Random(seed)
        comps = random_one_shared(rng, rng.randint(2, 3), 5)
        d = decide_one_shared_event(comps)
        explicit = check_dfa_nonblocking(parallel_compose([observer(c, {"a"}) for c in comps]))
        assert d.verdict.nonblocking == explicit.nonblocking
        sys = unary_abstract(comps)
        if d.certificate is not None:
            assert verify_certificate(sys, d.certificate)
        else:
            assert d.verdict.witness == explicit.witness
            bound = 2 * d.lasso.length + 2
            assert not any(verify_certificate(sys, LassoCertificate(k, ell))
                           for k in range(bound) for ell in [None, *range(k + 1, bound)])


def test_lasso_visits_at_most_subset_tuples():
    rng = random.Random(1)
    for _ in range(40):
        comps = random_one_shared(rng, 3, 4)
        lasso = lasso_walk(unary_abstract(comps))
        bound = 1
        for c in comps:
            bound *= 2**c.num_states
        assert lasso.length <= bound
