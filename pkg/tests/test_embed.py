import pytest
from conftest import processes
from hypothesis import given

from softpi.corpus import OMEGA, OMEGA_BANG, SERVER, SERVER_BANG
from softpi.embed import NotHOpiError, check_simulation, embed_process, embed_value
from softpi.enumeration import closed_processes
from softpi.parser import parse_process as P
from softpi.parser import parse_value as V
from softpi.reduction import canonical_form
from softpi.syntax import Abs, Input, Kind, subterms
from softpi.wellformed import check_hopi, check_lhopi


def alpha_eq(p, q):
    return canonical_form(p).key == canonical_form(q).key


def test_reference_images():
    assert alpha_eq(embed_process(SERVER), SERVER_BANG)
    assert alpha_eq(embed_process(OMEGA), OMEGA_BANG)


def test_value_image():
    assert embed_value(V(r"\x.(x *)")) == V(r"\!x.(x !*)")


def test_rejects_non_hopi():
    with pytest.raises(NotHOpiError):
        embed_process(P("a<!*>.0"))
    with pytest.raises(NotHOpiError):
        embed_process(P("a(!x).0"))


def _hopi(p):
    return check_hopi(p).ok


@given(processes)
def test_image_is_lhopi_without_linear_binders(p):
    if not _hopi(p):
        return
    q = embed_process(p)
    assert check_lhopi(q).ok
    for t in subterms(q):
        if isinstance(t, (Input, Abs)):
            assert t.kind is Kind.BANG


def test_injective_on_small_terms():
    seen = {}
    for p in closed_processes("hopi", 6):
        k = canonical_form(embed_process(p)).key
        src = canonical_form(p).key
        assert seen.setdefault(k, src) == src


@pytest.mark.parametrize("p", [OMEGA, SERVER, P("a<*>.0 | a(x).b<x>.0 | b(y).(y *)")])
def test_simulation(p):
    r = check_simulation(p, 5)
    assert r.ok and r.edges_checked > 0


def test_simulation_small_terms():
    for p in closed_processes("hopi", 6):
        assert check_simulation(p, 3).ok
