import pytest
from hypothesis import given
from hypothesis import strategies as st

from softpi.corpus import OMEGA, OMEGA_BANG, SERVER_BOX
from softpi.fuzz import fuzz_generate
from softpi.metrics import snapshot
from softpi.parser import parse_process as P
from softpi.reduction import (
    Redex,
    RedexKind,
    StuckError,
    canonical_form,
    congruent,
    explore,
    redexes,
    run,
    step,
    successors,
)
from softpi.syntax import free_vars
from softpi.verifier import verify_trace
from softpi.wellformed import check

closed_terms = st.builds(
    lambda seed, n, c: fuzz_generate(seed, n, c, ic={"b"} if c == "eshopi" else ()),
    st.integers(0, 10**6), st.integers(1, 25), st.sampled_from(["hopi", "lhopi", "shopi", "eshopi"]),
)


def test_omega_has_one_application():
    rs = redexes(OMEGA)
    assert [r.kind for r in rs] == [RedexKind.APP_LINEAR]


def test_nil_is_normal():
    assert redexes(P("0")) == []
    g = explore(P("0"))
    assert len(g.nodes) == 1 and not g.edges and g.longest_path() == 0


def test_shape_mismatch_is_stuck():
    assert redexes(P(r"((\!x.0) *)")) == []
    assert redexes(P("a<*>.0 | a(!x).0")) == []
    assert redexes(P("a<!*>.0 | a(#x).0")) == []


def test_linear_binder_accepts_boxes():
    rs = redexes(P("a<!*>.0 | a(x).0"))
    assert [r.kind for r in rs] == [RedexKind.COMM_LINEAR]


def test_spawn_step():
    p = P("a<#(\\y.0)>.0 | a(#x).(x *)")
    (r,) = redexes(p)
    assert r.kind is RedexKind.COMM_SPAWN and r.channel == "a"
    assert congruent(step(p, r), P("0 | ((\\y.0) *)"))


def test_stuck_error():
    with pytest.raises(StuckError):
        step(P("0"), Redex(RedexKind.APP_LINEAR, (0,)))


def test_open_terms_rejected():
    with pytest.raises(ValueError):
        redexes(P("(x *)"))


def test_congruence_examples():
    assert congruent(P("a<*>.0 | b<*>.0"), P("b<*>.0 | a<*>.0"))
    assert congruent(P("new a.new b.(a<*>.0 | b(x).0)"), P("new b.new a.(b(x).0 | a<*>.0)"))
    assert congruent(P("new a.a<*>.0"), P("new c.c<*>.0"))
    assert congruent(P("(new a.a<*>.0) | b<*>.0"), P("new a.(a<*>.0 | b<*>.0)"))
    assert congruent(P(r"a(x).(x *)"), P(r"a(y).(y *)"))
    # no garbage collection
    assert not congruent(P("a<*>.0 | 0"), P("a<*>.0"))
    assert not congruent(P("new a.0"), P("0"))
    # scope extrusion needs freshness
    assert not congruent(P("(new a.a<*>.0) | a<*>.0"), P("new a.(a<*>.0 | a<*>.0)"))


def test_symmetric_restricted_channels():
    p = P("new a.new b.(a<*>.0 | b<*>.0 | a(x).0)")
    q = P("new a.new b.(b<*>.0 | a<*>.0 | b(x).0)")
    assert congruent(p, q)


def test_symmetric_successors_merge():
    p = P("a<*>.0 | a(x).0 | a(x).0")
    assert len(redexes(p)) == 2
    assert len({s.key for _, s in successors(p)}) == 1
    g = explore(p)
    assert len(g.nodes) == 2


def test_run_omega_bang_first():
    t = run(OMEGA_BANG, "first", 10)
    assert len(t.steps) == 10 and not t.exhausted


def test_run_terminates_and_records_metrics():
    t = run(P("a<*>.0 | a(x).0"), "first")
    assert len(t.steps) == 1 and t.exhausted
    assert t.steps[0].metrics is None
    verify_trace(t, "hopi")
    assert t.steps[0].metrics == snapshot(t.steps[0].process)
    assert congruent(t.final, P("0 | 0"))


def test_random_strategy_is_reproducible():
    a = run(SERVER_BOX, "random", 30, seed=4)
    b = run(SERVER_BOX, "random", 30, seed=4)
    assert [s.chosen for s in a.steps] == [s.chosen for s in b.steps]


def test_callable_strategy():
    t = run(P("a<*>.0 | a(x).0 | a(y).b<*>.0"), lambda c, rs: rs[-1], 5)
    assert t.exhausted and len(t.steps) == 1


def test_explore_budget_truncates():
    g = explore(OMEGA, node_budget=5)
    assert g.truncated and len(g.nodes) <= 5
    assert not g.has_cycle()


def test_self_loop_is_a_cycle():
    # replication-free self loop built from the bang duplicator
    g = explore(P(r"((\!f.(f !f)) !(\!f.(f !f)))"), node_budget=10)
    assert g.has_cycle() and g.longest_path() is None


def test_graph_nodes_closed_and_wellformed():
    g = explore(SERVER_BOX, node_budget=200)
    for n in g.nodes:
        q = n.process()
        assert not free_vars(q)
        assert check(q, "eshopi", {"b"}).ok


@given(closed_terms)
def test_canonical_form_is_idempotent(p):
    c = canonical_form(p)
    assert canonical_form(c.process()).key == c.key


@given(closed_terms, st.integers(0, 10**6))
def test_metrics_are_congruence_invariant(p, seed):
    import random

    from softpi.verifier import random_rewrite
    q = random_rewrite(p, random.Random(seed))
    assert congruent(p, q)
    assert snapshot(p) == snapshot(q)


@given(closed_terms)
def test_successors_agree_with_step(p):
    for r, s in successors(p):
        assert canonical_form(step(p, r)).key == s.key
