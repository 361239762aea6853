"""The worked processes: OMEGA, SERVER and their linear / soft / spawning variants."""

from .parser import parse_process, parse_value

DELTA_SRC = r"\y.a(x).((x *) | a<x>.0)"
COMP_SRC = r"\z.a(x).(b(y).c<y>.a<x>.0 | (x *))"
DELTA_BANG_SRC = r"\!y.a(!x).((x !*) | a<!x>.0)"
COMP_BANG_SRC = r"\!z.a(!x).(b(!y).c<!y>.a<!x>.0 | (x !*))"
COMP_BOX_SRC = r"\!z.a(#x).(b(!y).c<!y>.a<#x>.0 | (x !*))"

DELTA = parse_value(DELTA_SRC)
COMP = parse_value(COMP_SRC)
DELTA_BANG = parse_value(DELTA_BANG_SRC)
COMP_BANG = parse_value(COMP_BANG_SRC)
COMP_BOX = parse_value(COMP_BOX_SRC)

OMEGA = parse_process(f"let DELTA = {DELTA_SRC}\nnew a.((DELTA *) | a<DELTA>.0)")
SERVER = parse_process(f"let COMP = {COMP_SRC}\nnew a.((COMP *) | a<COMP>.0)")
OMEGA_BANG = parse_process(f"let DELTA = {DELTA_BANG_SRC}\nnew a.((DELTA !*) | a<!DELTA>.0)")
SERVER_BANG = parse_process(f"let COMP = {COMP_BANG_SRC}\nnew a.((COMP !*) | a<!COMP>.0)")
SERVER_BOX = parse_process(f"let COMP = {COMP_BOX_SRC}\nnew a.((COMP !*) | a<#COMP>.0)")

# name -> (process, calculus it belongs to, input channels)
REFERENCE_TERMS = {
    "OMEGA": (OMEGA, "hopi", frozenset()),
    "SERVER": (SERVER, "hopi", frozenset()),
    "OMEGA_BANG": (OMEGA_BANG, "lhopi", frozenset()),
    "SERVER_BANG": (SERVER_BANG, "lhopi", frozenset()),
    "SERVER_BOX": (SERVER_BOX, "eshopi", frozenset({"b"})),
}
