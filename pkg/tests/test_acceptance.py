"""Acceptance criteria, one test each; every test records a PASS/FAIL line.

Run ``python3 tests/test_acceptance.py`` for the lines alone, or pytest, which
prints them in the terminal summary.
"""

import csv
import sys
import tempfile
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from instances import (  # noqa: E402
    two_event_a1,
    blocking_pair_a1,
    blocking_pair_a2,
    intersection_inputs,
    in_projection_of_marked,
    words,
)
from nonblock.automata import (  # noqa: E402
    enumerate_strings,
    observer,
    parallel_compose,
    project_word,
)
from nonblock.cli import main as cli_main  # noqa: E402
from nonblock.generators import (  # noqa: E402
    random_cnf3,
    random_dfaint,
    random_graph,
    random_modular,
    random_nfa,
    random_one_shared,
    stream,
)
from nonblock.reductions import (  # noqa: E402
    cnf3_to_unary,
    dfaint_empty_small,
    dfaint_to_modular,
    graph_reachable,
    graph_to_dfa,
    nfa_universal_small,
    sat3_bruteforce,
    universality_to_nonblocking,
)
from nonblock.unary import (  # noqa: E402
    BoolMatrix,
    bool_pow,
    decide_one_shared_event,
    int_pow_counts,
    tuple_state,
    unary_abstract,
    verify_certificate,
)
from nonblock.verifier import (  # noqa: E402
    check_dfa_nonblocking,
    check_modular_nonblocking,
    check_nfa_nonblocking,
)

pytestmark = pytest.mark.acceptance

RESULTS = []

M1 = [[0, 1, 1, 0], [1, 0, 0, 1], [0, 0, 0, 1], [1, 0, 0, 0]]
M1_POW4 = [[1, 2, 2, 2], [3, 1, 1, 2], [1, 0, 0, 2], [2, 1, 1, 0]]


def record(number, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}"
    RESULTS.append(line)
    print(line)
    assert ok, line


def prefix_closure(lang):
    return {w[:k] for w in lang for k in range(len(w) + 1)}


# criterion 5's unary batch is reused by criterion 6
def unary_batch():
    rng = stream(0, "acceptance/unary")
    return [random_one_shared(rng, rng.randint(1, 3), 5) for _ in range(100)]


def test_criterion_1_blocking_pair():
    t0 = time.perf_counter()
    pair = [blocking_pair_a1(), blocking_pair_a2()]
    flat = check_dfa_nonblocking(parallel_compose(pair))
    modular = check_modular_nonblocking(pair)
    elapsed = time.perf_counter() - t0
    ok = (not flat.nonblocking and flat.witness == ("a",)
          and not modular.nonblocking and modular.witness == ("a",) and elapsed < 1.0)
    record(1, ok, f"blocking, witnesses {flat.witness}/{modular.witness}, {elapsed * 1000:.1f} ms")


def test_criterion_2_two_event():
    t0 = time.perf_counter()
    sys_ = unary_abstract([two_event_a1()], "a")
    matrix = sys_.components[0].matrix.to_lists()
    counts = int_pow_counts(sys_.components[0].matrix, 4)
    at4 = tuple_state(sys_, 4)
    names = {two_event_a1().state_name(q) for q in at4.subsets[0]}
    elapsed = time.perf_counter() - t0
    ok = matrix == M1 and counts == M1_POW4 and names == {"1", "2", "3", "4"} and elapsed < 1.0
    record(2, ok, f"M1 and M1^4 exact, tuple at k=4 {sorted(names)}, {elapsed * 1000:.1f} ms")


def test_criterion_3_intersection():
    left = dfaint_to_modular(intersection_inputs())
    right = dfaint_to_modular(intersection_inputs(right=True))
    left_sample = enumerate_strings(parallel_compose(left), 3)
    right_sample = enumerate_strings(parallel_compose(right), 3)
    v_left, v_right = check_modular_nonblocking(left), check_modular_nonblocking(right)
    ok = (v_left.nonblocking and left_sample.generated == {(), ("a",)}
          and not v_right.nonblocking
          and prefix_closure(right_sample.marked_lang) == {(), ("a",)}
          and right_sample.generated == {(), ("a",), ("x",)})
    record(3, ok, f"left nonblocking L={sorted(left_sample.generated)}; "
                  f"right blocking L={sorted(right_sample.generated)}")


def test_criterion_4_reduction_soundness():
    t0 = time.perf_counter()
    agree = {}

    rng = stream(0, "acceptance/graph")
    graphs = [random_graph(rng, 20, 40) for _ in range(200)]
    agree["graph"] = sum(graph_reachable(g) == (not check_dfa_nonblocking(graph_to_dfa(g)).nonblocking)
                         for g in graphs)

    rng = stream(0, "acceptance/universality")
    nfas = [random_nfa(rng, 5) for _ in range(200)]
    agree["universality"] = sum(
        nfa_universal_small(b) == check_nfa_nonblocking(universality_to_nonblocking(b)).nonblocking
        for b in nfas)

    rng = stream(0, "acceptance/dfaint")
    count = 0
    for _ in range(100):
        bs = random_dfaint(rng, rng.randint(2, 3), 4)
        count += dfaint_empty_small(bs) == check_modular_nonblocking(dfaint_to_modular(bs)).nonblocking
    agree["dfaint"] = count

    rng = stream(0, "acceptance/cnf")
    count = 0
    for _ in range(100):
        f = random_cnf3(rng, rng.randint(3, 4), rng.randint(1, 30))
        comps = cnf3_to_unary(f)
        sat = sat3_bruteforce(f)
        count += sat == decide_one_shared_event(comps).verdict.nonblocking == \
            check_modular_nonblocking(comps).nonblocking
    agree["cnf"] = count

    elapsed = time.perf_counter() - t0
    ok = agree == {"graph": 200, "universality": 200, "dfaint": 100, "cnf": 100} and elapsed < 60
    record(4, ok, f"graph {agree['graph']}/200, universality {agree['universality']}/200, "
                  f"dfaint {agree['dfaint']}/100, cnf {agree['cnf']}/100, {elapsed:.1f} s")


def test_criterion_5_cross_agreement():
    rng = stream(0, "acceptance/modular")
    modular = 0
    for _ in range(100):
        comps = random_modular(rng, rng.randint(1, 4), 6)
        on_the_fly = check_modular_nonblocking(comps)
        explicit = check_dfa_nonblocking(parallel_compose(comps))
        modular += (on_the_fly.nonblocking, on_the_fly.witness) == (explicit.nonblocking, explicit.witness)

    unary = 0
    for comps in unary_batch():
        d = decide_one_shared_event(comps, shared_event="a")
        explicit = check_dfa_nonblocking(parallel_compose([observer(c, {"a"}) for c in comps]))
        unary += d.verdict.nonblocking == explicit.nonblocking
    record(5, modular == 100 and unary == 100, f"modular {modular}/100, one-shared-event {unary}/100")


def test_criterion_6_certificates():
    checked = passed = 0
    for comps in unary_batch():
        d = decide_one_shared_event(comps, shared_event="a")
        if d.verdict.nonblocking:
            checked += 1
            passed += d.certificate is not None and \
                verify_certificate(unary_abstract(comps, "a"), d.certificate)

    rng = stream(0, "acceptance/matrices")
    support = 0
    for _ in range(50):
        n = rng.randint(1, 6)
        m = BoolMatrix.from_lists([[rng.random() < 0.35 for _ in range(n)] for _ in range(n)])
        support += all([[int(v > 0) for v in row] for row in int_pow_counts(m, k)] == bool_pow(m, k).to_lists()
                       for k in range(16))
    ok = checked > 0 and passed == checked and support == 50
    record(6, ok, f"certificates verified {passed}/{checked}, support equivalence {support}/50")


def test_criterion_7_language_identities():
    rng = stream(0, "acceptance/languages")
    composition = projection = 0
    for _ in range(50):
        a = random_nfa(rng, 4, events=("a", "b"))
        b = random_nfa(rng, 4, events=("b", "c"))
        sample = enumerate_strings(parallel_compose([a, b]), 6)
        composition += all(
            (w in sample.generated) == (a.generates(project_word(w, a.alphabet))
                                        and b.generates(project_word(w, b.alphabet)))
            and (w in sample.marked_lang) == (a.accepts(project_word(w, a.alphabet))
                                              and b.accepts(project_word(w, b.alphabet)))
            for w in words({"a", "b", "c"}, 6))
        obs = enumerate_strings(observer(a, {"a"}), 6)
        projection += all((w in obs.marked_lang) == in_projection_of_marked(a, {"a"}, w)
                          for w in words({"a"}, 6))
    record(7, composition == 50 and projection == 50,
           f"composition {composition}/50, observer commutation {projection}/50 (length <= 6)")


def test_criterion_8_bench_smoke():
    with tempfile.TemporaryDirectory() as tmp:
        out = Path(tmp) / "bench.csv"
        t0 = time.perf_counter()
        code = cli_main(["bench", "random-modular", "--sizes", "8:8", "--states", "10", "--seed", "0",
                         "--max-states", "1000000", "--out", str(out)])
        elapsed = time.perf_counter() - t0
        rows = list(csv.DictReader(out.open()))
        figure = out.with_suffix(".png").exists()
    labelled = all(r["verdict"] in ("nonblocking", "blocking", "limit") for r in rows)
    bounded = all(int(r["explored"]) <= 1_000_000 for r in rows)
    ok = code == 0 and rows and labelled and bounded and figure and elapsed < 10
    verdicts = ",".join(r["verdict"] for r in rows)
    record(8, ok, f"{len(rows)} rows ({verdicts}), explored <= 10^6, {elapsed:.2f} s")


if __name__ == "__main__":
    for name, fn in list(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                pass
    sys.exit(0 if all(line.startswith("PASS") for line in RESULTS) else 1)
