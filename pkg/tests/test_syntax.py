from conftest import processes
from hypothesis import assume, given
from hypothesis import strategies as st

from softpi.corpus import DELTA, DELTA_BANG, OMEGA, SERVER
from softpi.parser import parse_process, parse_value
from softpi.syntax import (
    NIL,
    UNIT,
    App,
    Box,
    Kind,
    Restrict,
    Var,
    alpha_canonicalize,
    alpha_eq,
    free_channels,
    free_vars,
    nfo,
    occurrences,
    substitute,
)

P = parse_process
V = parse_value


def test_free_vars():
    assert free_vars(NIL) == set()
    body = DELTA.body.body  # (x *) | a<x>.0
    assert free_vars(DELTA.body) == set()
    assert free_vars(body) == {"x"}
    assert free_vars(V(r"\y.(x *)")) == {"x"}


def test_free_channels():
    assert free_channels(OMEGA) == set()
    assert free_channels(SERVER) == {"b", "c"}
    assert free_channels(NIL) == set()


def test_nfo_and_occurrences():
    t = P("(x *) | a<!x>.0")
    assert nfo("x", t) == 2
    assert nfo("x", NIL) == 0
    assert nfo("x", V("!x")) == 1
    occ = occurrences("x", t)
    assert [(o.bang_depth, o.spawn_depth) for o in occ] == [(0, 0), (1, 0)]
    occ = occurrences("x", App(Var("x"), Box(Kind.BANG, Var("y"))))
    assert [(o.bang_depth, o.spawn_depth) for o in occ] == [(0, 0)]
    assert [(o.bang_depth, o.spawn_depth) for o in occurrences("y", App(Var("x"), Box(Kind.BANG, Var("y"))))] == [(1, 0)]


def test_occurrences_under_input_channel():
    comp = V(r"\!z.a(#x).(b(!y).c<!y>.a<#x>.0 | (x !*))")
    body = comp.body.body
    occ = occurrences("x", body, {"b"})
    assert [(o.bang_depth, o.spawn_depth, o.under_ic_input) for o in occ] == [(0, 1, True), (0, 0, False)]
    assert occ[0].ic_site is not None and occ[1].ic_site is None
    # without b in IC the spawned use is not guarded
    assert all(not o.under_ic_input for o in occurrences("x", body, set()))


def test_substitute_examples():
    assert substitute(Var("x"), "x", UNIT) == UNIT
    t = P("(x *) | a<!x>.0")
    assert alpha_eq(substitute(t, "x", DELTA_BANG), P(r"""
        ((\!y.a(!x).((x !*) | a<!x>.0)) *) | a<!(\!y.a(!x).((x !*) | a<!x>.0))>.0"""))


def test_substitute_avoids_capture():
    r = substitute(V(r"\y.(x y)"), "x", Var("y"))
    assert r.var != "y"
    assert r.body == App(Var("y"), Var(r.var))
    # restricted channels are renamed away from the free channels of the value
    r = substitute(P("new c.(x *)"), "x", V(r"\z.c<*>.0"))
    assert isinstance(r, Restrict) and r.chan != "c"
    assert free_channels(r) == {"c"}


def test_alpha():
    assert alpha_eq(V(r"\y.(y *)"), V(r"\z.(z *)"))
    assert not alpha_eq(V(r"\y.(y *)"), V(r"\y.(* *)"))
    assert alpha_eq(DELTA, V(r"\w.a(x).((x *) | a<x>.0)"))
    c = alpha_canonicalize(P("new a.new b.0"))
    assert c == alpha_canonicalize(P("new c.new d.0"))
    assert alpha_canonicalize(OMEGA) == alpha_canonicalize(alpha_canonicalize(OMEGA))


@given(processes)
def test_substitute_unused_is_identity(t):
    assume(nfo("q", t) == 0)
    assert substitute(t, "q", UNIT) is t or substitute(t, "q", UNIT) == t


@given(processes)
def test_nfo_counts_occurrences(t):
    for x in "xyz":
        assert nfo(x, t) == len(occurrences(x, t, {"a"}))


@given(processes)
def test_alpha_canonicalize_idempotent(t):
    c = alpha_canonicalize(t)
    assert alpha_canonicalize(c) == c
    assert alpha_eq(t, c)


@given(processes, processes, processes)
def test_alpha_eq_is_equivalence(s, t, u):
    assert alpha_eq(s, s)
    assert alpha_eq(s, t) == alpha_eq(t, s)
    if alpha_eq(s, t) and alpha_eq(t, u):
        assert alpha_eq(s, u)


CLOSED = st.sampled_from([UNIT, DELTA, V(r"\!w.a<!w>.0"), V("!*"), V(r"#\z.0")])


@given(processes, CLOSED, CLOSED)
def test_substitutions_commute(t, v, w):
    left = substitute(substitute(t, "x", v), "y", w)
    right = substitute(substitute(t, "y", w), "x", v)
    assert alpha_eq(left, right)
