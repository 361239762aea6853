import hypothesis.strategies as st
from hypothesis import settings

from softpi.syntax import (
    NIL,
    UNIT,
    Abs,
    App,
    Box,
    Input,
    Kind,
    Output,
    Par,
    Restrict,
    Var,
)

settings.register_profile("default", deadline=None, max_examples=150)
settings.load_profile("default")

CHANS = st.sampled_from("abc")
VARS = st.sampled_from("xyz")
KINDS = st.sampled_from(list(Kind))
BOXES = st.sampled_from([Kind.BANG, Kind.SPAWN])


def _extend(children):
    procs, values = children
    return st.one_of(
        st.builds(Par, procs, procs),
        st.builds(Input, CHANS, KINDS, VARS, procs),
        st.builds(Output, CHANS, values, procs),
        st.builds(Restrict, CHANS, procs),
        st.builds(App, values, values),
    )


def _terms():
    # processes and values are built together so each can nest inside the other
    leaf_v = st.one_of(st.just(UNIT), st.builds(Var, VARS))

    def values(procs):
        return st.recursive(
            leaf_v,
            lambda v: st.one_of(st.builds(Abs, KINDS, VARS, procs), st.builds(Box, BOXES, v)),
            max_leaves=4,
        )

    procs = st.deferred(lambda: st.recursive(
        st.just(NIL),
        lambda p: _extend((p, values(p))),
        max_leaves=10,
    ))
    return procs, values(procs)


processes, values = _terms()


# -- acceptance summary ------------------------------------------------------------

ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, line = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k}: {'PASS' if ok else 'FAIL'}  {line}")
