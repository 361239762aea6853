"""Translation of HOpi into LHOpi, and a checker for the simulation it induces.

Every binder becomes a ``!`` binder and every transmitted or applied value is
boxed, so no linear binder is left in the image.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .parser import print_process
from .reduction import canonical_form, successors
from .syntax import (
    Abs,
    App,
    Box,
    Input,
    Kind,
    Nil,
    Output,
    Par,
    Restrict,
    Unit,
    Var,
    free_vars,
)
from .wellformed import check_hopi


class NotHOpiError(ValueError):
    pass


def _require_hopi(t):
    r = check_hopi(t)
    if not r.ok:
        raise NotHOpiError(f"not an HOpi term: {r.failure.reason} at {r.failure.site}")


def embed_process(p):
    _require_hopi(p)
    return _proc(p)


def embed_value(v):
    _require_hopi(v)
    return _val(v)


def _proc(p):
    match p:
        case Nil():
            return p
        case Par(l, r):
            return Par(_proc(l), _proc(r))
        case Input(a, _, x, body):
            return Input(a, Kind.BANG, x, _proc(body))
        case Output(a, v, cont):
            return Output(a, Box(Kind.BANG, _val(v)), _proc(cont))
        case Restrict(a, body):
            return Restrict(a, _proc(body))
        case App(f, w):
            return App(_val(f), Box(Kind.BANG, _val(w)))
    raise TypeError(f"not a process: {p!r}")


def _val(v):
    match v:
        case Unit() | Var():
            return v
        case Abs(_, x, body):
            return Abs(Kind.BANG, x, _proc(body))
    raise TypeError(f"not an HOpi value: {v!r}")


@dataclass
class SimulationViolation:
    source: str
    target: str
    embedded_source: str
    embedded_target: str

    def to_dict(self):
        return dict(self.__dict__)


@dataclass
class SimulationReport:
    depth: int
    edges_checked: int = 0
    states: int = 0
    violations: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.violations

    def to_dict(self):
        return {
            "ok": self.ok,
            "depth": self.depth,
            "states": self.states,
            "edges_checked": self.edges_checked,
            "violations": [v.to_dict() for v in self.violations],
        }


def check_simulation(p, depth: int) -> SimulationReport:
    """Check that every HOpi step reachable within ``depth`` steps is matched by one step of the image."""
    _require_hopi(p)
    if free_vars(p):
        raise ValueError("simulation is checked on closed processes")
    report = SimulationReport(depth)
    root = canonical_form(p)
    seen = {root.key}
    frontier = deque([(root, 0)])
    while frontier:
        c, d = frontier.popleft()
        report.states += 1
        if d >= depth:
            continue
        image = embed_process(c.process())
        image_next = {s.key for _, s in successors(image)}
        for _, succ in successors(c):
            report.edges_checked += 1
            target = canonical_form(embed_process(succ.process()))
            if target.key not in image_next:
                report.violations.append(SimulationViolation(
                    c.key, succ.key, print_process(image), target.key))
            if succ.key not in seen:
                seen.add(succ.key)
                frontier.append((succ, d + 1))
    return report
