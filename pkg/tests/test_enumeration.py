import pytest

from softpi.enumeration import GRAMMARS, Enumerator, closed_processes, count_closed
from softpi.syntax import free_vars, node_count
from softpi.wellformed import check


@pytest.mark.parametrize("grammar", sorted(GRAMMARS))
def test_counts_match_stream(grammar):
    counts = count_closed(grammar, 5)
    seen = [0] * 5
    for p in closed_processes(grammar, 5):
        seen[node_count(p) - 1] += 1
    assert seen == counts


def test_terms_are_closed_distinct_and_in_grammar():
    terms = list(closed_processes("eshopi", 5))
    assert len(terms) == len(set(terms))
    assert all(not free_vars(p) for p in terms)
    assert all(check(p, "hopi").ok for p in closed_processes("hopi", 5))


def test_grammars_nest():
    a, b, c = (set(closed_processes(g, 4)) for g in ("hopi", "shopi", "eshopi"))
    assert a <= b <= c


def test_open_scope():
    e = Enumerator("hopi")
    assert any(free_vars(p) for p in e.procs(3, frozenset({"x"})))


def test_large_counts_do_not_enumerate():
    # counting at node count 12 is a closed-form DP, not a stream
    assert sum(count_closed("hopi", 12)) == 5_210_188_495
