"""Membership checks for HOpi, LHOpi, SHOpi and eSHOpi(IC).

The checks are occurrence based: every binder is classified independently
from the box depths of the free occurrences of its variable.  Each
classification mirrors one way the variable can be marked in a context
(``x``, ``!x``, the soft marking, and for eSHOpi the spawned and the
absorbing markings).  :mod:`softpi.rulesearch` decides the same question by
brute-force search over the inference rules and is used to cross-check this
module.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .syntax import (
    Abs,
    Box,
    Input,
    Kind,
    Output,
    Restrict,
    children,
    free_vars,
    occurrences,
)

CALCULI = ("hopi", "lhopi", "shopi", "eshopi")


class VarClass(enum.Enum):
    LINEAR = "linear"  # x
    BANG = "bang"  # !x
    DIES = "dies"  # soft, contractible: any number of uses at depth 0
    SANG = "sang"  # single use inside one spawning box
    DANG = "dang"  # one spawned use behind an input channel, others at depth 0


@dataclass
class Failure:
    site: str
    reason: str
    kind: str = "linearity"  # "grammar", "linearity", "output-on-input-channel", ...

    def to_dict(self):
        return {"site": self.site, "reason": self.reason, "kind": self.kind}


@dataclass
class WfReport:
    ok: bool
    calculus: str
    ic: frozenset = frozenset()
    classifications: dict = field(default_factory=dict)
    failure: Failure | None = None

    def __bool__(self):
        return self.ok

    def to_dict(self):
        return {
            "ok": self.ok,
            "calculus": self.calculus,
            "ic": sorted(self.ic),
            "classifications": {k: v.value for k, v in self.classifications.items()},
            "failure": self.failure.to_dict() if self.failure else None,
        }


def site_name(var: str, path: tuple) -> str:
    """``x@0.1`` names the binder of ``x`` reached by child indices ``0, 1``."""
    return f"{var}@{'.'.join(map(str, path)) or 'root'}"


def binders(t):
    """Yield ``(path, node)`` for every input and abstraction, pre-order."""
    stack = [((), t)]
    while stack:
        path, s = stack.pop()
        if isinstance(s, (Input, Abs)):
            yield path, s
        kids = children(s)
        for i in reversed(range(len(kids))):
            stack.append((path + (i,), kids[i]))


# -- per-variable classification ---------------------------------------------


def _plural(n):
    return {0: "never", 1: "once", 2: "twice"}.get(n, f"{n} times")


def _depth_story(occs):
    if not occs:
        return "never"
    parts = []
    for o in occs:
        d = f"depth {o.depth}"
        if o.spawn_depth:
            d += f" ({o.spawn_depth} under #)"
        parts.append(d)
    if len(occs) == 2:
        return f"twice, once at {parts[0]} and once at {parts[1]}"
    return f"{_plural(len(occs))}, at " + ", ".join(parts)


def _linear_ok(occs):
    return len(occs) == 1 and occs[0].depth == 0


def _dies_ok(occs):
    return all(o.depth == 0 for o in occs)


def _bang_ok(occs):
    return len(occs) == 1 and occs[0].bang_depth == 1 and occs[0].spawn_depth == 0


def _sang_ok(occs):
    return len(occs) == 1 and occs[0].spawn_depth == 1 and occs[0].bang_depth == 0


def _dang_ok(occs):
    spawned = [o for o in occs if o.depth != 0]
    if len(spawned) != 1:
        return False
    s = spawned[0]
    if not (s.spawn_depth == 1 and s.bang_depth == 0 and s.ic_site is not None):
        return False
    k = len(s.ic_site)
    # every other use stays at depth 0, outside the guarding input's continuation
    return all(o is s or o.path[:k] != s.ic_site for o in occs)


def classify(kind, occs, calculus):
    """Return a ``VarClass`` or ``None`` if no marking fits.

    ``kind`` is the binder kind, or ``None`` for a free variable (which may
    take any marking).
    """
    if calculus == "lhopi":
        if kind is Kind.LINEAR:
            return VarClass.LINEAR if _linear_ok(occs) else None
        return VarClass.BANG
    candidates = []
    if kind in (Kind.LINEAR, None):
        candidates.append(VarClass.LINEAR)
    if kind in (Kind.BANG, None):
        candidates += [VarClass.DIES, VarClass.BANG]
    if calculus == "eshopi" and kind in (Kind.SPAWN, None):
        candidates += [VarClass.SANG, VarClass.DANG]
    tests = {
        VarClass.LINEAR: _linear_ok,
        VarClass.DIES: _dies_ok,
        VarClass.BANG: _bang_ok,
        VarClass.SANG: _sang_ok,
        VarClass.DANG: _dang_ok,
    }
    if kind is None and _dies_ok(occs):
        return VarClass.DIES
    for c in candidates:
        if tests[c](occs):
            return c
    return None


def _why(kind, x, occs, calculus):
    story = _depth_story(occs)
    if kind is Kind.LINEAR:
        if len(occs) != 1:
            return f"linear variable {x} must occur exactly once, occurs {_plural(len(occs))}"
        return f"linear variable {x} occurs under a box ({story})"
    if kind is Kind.BANG:
        return (f"{x} appears {story}; a !-bound variable must occur exactly once "
                f"at depth 1 or only at depth 0")
    if kind is Kind.SPAWN:
        return (f"{x} appears {story}; a #-bound variable must occur once inside one # box, "
                f"possibly plus depth-0 uses when that box is guarded by an input channel")
    return f"free variable {x} appears {story} and fits no marking"


# -- checks --------------------------------------------------------------------


def _grammar_failure(t, allowed_kinds):
    stack = [((), t)]
    while stack:
        path, s = stack.pop()
        if isinstance(s, (Input, Abs, Box)) and s.kind not in allowed_kinds:
            what = {Kind.BANG: "!", Kind.SPAWN: "#", Kind.LINEAR: "linear"}[s.kind]
            node = type(s).__name__.lower()
            return Failure(".".join(map(str, path)) or "root",
                           f"{what} {node} not allowed here", "grammar")
        kids = children(s)
        for i in reversed(range(len(kids))):
            stack.append((path + (i,), kids[i]))
    return None


def _ic_failure(t, ic):
    stack = [((), t)]
    while stack:
        path, s = stack.pop()
        where = ".".join(map(str, path)) or "root"
        if isinstance(s, Output) and s.chan in ic:
            return Failure(where, f"output on input channel {s.chan}",
                           "output-on-input-channel")
        if isinstance(s, Restrict) and s.chan in ic:
            return Failure(where, f"input channel {s.chan} is restricted",
                           "restricted-input-channel")
        kids = children(s)
        for i in reversed(range(len(kids))):
            stack.append((path + (i,), kids[i]))
    return None


def _check(t, calculus, ic=frozenset()):
    ic = frozenset(ic)
    report = WfReport(ok=False, calculus=calculus, ic=ic)
    allowed = {
        "hopi": {Kind.LINEAR},
        "lhopi": {Kind.LINEAR, Kind.BANG},
        "shopi": {Kind.LINEAR, Kind.BANG},
        "eshopi": {Kind.LINEAR, Kind.BANG, Kind.SPAWN},
    }[calculus]
    failure = _grammar_failure(t, allowed)
    if failure is None and calculus == "eshopi":
        failure = _ic_failure(t, ic)
    if failure is not None:
        report.failure = failure
        return report
    if calculus == "hopi":
        report.ok = True
        return report

    for x in sorted(free_vars(t)):
        cls = classify(None, occurrences(x, t, ic), calculus)
        if cls is None:
            report.failure = Failure(f"{x}@free", _why(None, x, occurrences(x, t, ic), calculus))
            return report
        report.classifications[f"{x}@free"] = cls

    for path, b in binders(t):
        occs = occurrences(b.var, b.body, ic)
        cls = classify(b.kind, occs, calculus)
        site = site_name(b.var, path)
        if cls is None:
            report.classifications.clear()
            report.failure = Failure(site, _why(b.kind, b.var, occs, calculus))
            return report
        report.classifications[site] = cls
    report.ok = True
    return report


def check_hopi(p) -> WfReport:
    return _check(p, "hopi")


def check_lhopi(p) -> WfReport:
    return _check(p, "lhopi")


def check_shopi(p) -> WfReport:
    return _check(p, "shopi")


def check_eshopi(p, ic=()) -> WfReport:
    return _check(p, "eshopi", ic)


def check(p, calculus: str, ic=()) -> WfReport:
    if calculus not in CALCULI:
        raise ValueError(f"unknown calculus {calculus!r}; expected one of {CALCULI}")
    return _check(p, calculus, ic if calculus == "eshopi" else ())


def is_wellformed(p, calculus: str, ic=()) -> bool:
    return check(p, calculus, ic).ok


__all__ = [
    "CALCULI",
    "Failure",
    "VarClass",
    "WfReport",
    "check",
    "check_eshopi",
    "check_hopi",
    "check_lhopi",
    "check_shopi",
    "classify",
    "is_wellformed",
]
