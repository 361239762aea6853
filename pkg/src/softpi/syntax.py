"""Abstract syntax shared by the four calculi (HOpi, LHOpi, SHOpi, eSHOpi).

Processes and values are immutable dataclasses.  Variables and channels live in
separate namespaces; both are plain strings.  Names starting with ``_`` are
reserved for machine-generated binders (canonical forms).
"""

from __future__ import annotations

import enum
from collections.abc import Iterator
from dataclasses import dataclass
from typing import NamedTuple, Union

ChannelName = str
VarName = str


class Kind(enum.Enum):
    """Binder / box flavour: plain, duplicable (``!``) or spawnable (``#``)."""

    LINEAR = "linear"
    BANG = "bang"
    SPAWN = "spawn"


# -- processes ---------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class Nil:
    pass


@dataclass(frozen=True, slots=True)
class Par:
    left: Process
    right: Process


@dataclass(frozen=True, slots=True)
class Input:
    chan: ChannelName
    kind: Kind
    var: VarName
    body: Process


@dataclass(frozen=True, slots=True)
class Output:
    chan: ChannelName
    payload: Value
    cont: Process


@dataclass(frozen=True, slots=True)
class Restrict:
    chan: ChannelName
    body: Process


@dataclass(frozen=True, slots=True)
class App:
    fun: Value
    arg: Value


# -- values ------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class Unit:
    pass


@dataclass(frozen=True, slots=True)
class Var:
    name: VarName


@dataclass(frozen=True, slots=True)
class Abs:
    kind: Kind
    var: VarName
    body: Process


@dataclass(frozen=True, slots=True)
class Box:
    kind: Kind  # BANG or SPAWN
    inner: Value

    def __post_init__(self):
        if self.kind is Kind.LINEAR:
            raise ValueError("a box is either ! or #")


Process = Union[Nil, Par, Input, Output, Restrict, App]
Value = Union[Unit, Var, Abs, Box]
Term = Union[Process, Value]

NIL = Nil()
UNIT = Unit()

PROCESS_TYPES = (Nil, Par, Input, Output, Restrict, App)
VALUE_TYPES = (Unit, Var, Abs, Box)


def is_process(t) -> bool:
    return isinstance(t, PROCESS_TYPES)


def par(*ps: Process) -> Process:
    """Left-nested parallel composition of one or more processes (prints without parentheses)."""
    if not ps:
        raise ValueError("par() needs at least one process")
    out = ps[0]
    for p in ps[1:]:
        out = Par(out, p)
    return out


def bang(v: Value) -> Box:
    return Box(Kind.BANG, v)


def spawn(v: Value) -> Box:
    return Box(Kind.SPAWN, v)


# -- free names --------------------------------------------------------------


def free_vars(t: Term) -> frozenset:
    match t:
        case Var(name):
            return frozenset((name,))
        case Nil() | Unit():
            return frozenset()
        case Par(l, r):
            return free_vars(l) | free_vars(r)
        case Input(_, _, x, body) | Abs(_, x, body):
            return free_vars(body) - {x}
        case Output(_, v, p):
            return free_vars(v) | free_vars(p)
        case Restrict(_, body):
            return free_vars(body)
        case App(f, a):
            return free_vars(f) | free_vars(a)
        case Box(_, v):
            return free_vars(v)
    raise TypeError(f"not a term: {t!r}")


def free_channels(t: Term) -> frozenset:
    match t:
        case Nil() | Unit() | Var():
            return frozenset()
        case Par(l, r):
            return free_channels(l) | free_channels(r)
        case Input(a, _, _, body):
            return free_channels(body) | {a}
        case Output(a, v, p):
            return free_channels(v) | free_channels(p) | {a}
        case Restrict(a, body):
            return free_channels(body) - {a}
        case App(f, w):
            return free_channels(f) | free_channels(w)
        case Abs(_, _, body):
            return free_channels(body)
        case Box(_, v):
            return free_channels(v)
    raise TypeError(f"not a term: {t!r}")


def all_names(t: Term) -> set:
    """Every variable and channel name mentioned anywhere, bound or free."""
    out = set()
    for s in subterms(t):
        match s:
            case Var(n):
                out.add(n)
            case Input(a, _, x, _):
                out.update((a, x))
            case Abs(_, x, _):
                out.add(x)
            case Output(a, _, _) | Restrict(a, _):
                out.add(a)
    return out


def subterms(t: Term) -> Iterator[Term]:
    """Pre-order, left-to-right."""
    stack = [t]
    while stack:
        s = stack.pop()
        yield s
        stack.extend(reversed(children(s)))


def children(t: Term) -> tuple:
    match t:
        case Par(l, r):
            return (l, r)
        case Input(_, _, _, body) | Restrict(_, body) | Abs(_, _, body):
            return (body,)
        case Output(_, v, p):
            return (v, p)
        case App(f, a):
            return (f, a)
        case Box(_, v):
            return (v,)
    return ()


def node_count(t: Term) -> int:
    """Number of AST constructors (used to index the exhaustive enumeration)."""
    return sum(1 for _ in subterms(t))


def has_kind(t: Term, kind: Kind) -> bool:
    for s in subterms(t):
        if isinstance(s, (Input, Abs, Box)) and s.kind is kind:
            return True
    return False


# -- occurrences -------------------------------------------------------------


class Occurrence(NamedTuple):
    bang_depth: int
    spawn_depth: int
    under_ic_input: bool
    # innermost box-free IC input (as a path) enclosing the occurrence, if any
    ic_site: tuple | None = None
    path: tuple = ()

    @property
    def depth(self) -> int:
        return self.bang_depth + self.spawn_depth


def nfo(x: VarName, t: Term) -> int:
    match t:
        case Var(name):
            return 1 if name == x else 0
        case Input(_, _, y, body) | Abs(_, y, body):
            return 0 if y == x else nfo(x, body)
        case _:
            return sum(nfo(x, c) for c in children(t))


def occurrences(x: VarName, t: Term, ic=None) -> list:
    """Free occurrences of ``x`` in ``t`` with their box depths.

    ``under_ic_input`` is set when the occurrence sits in the continuation of
    an input on a channel of ``ic`` and that input is itself outside every box
    (depths are relative to ``t``).
    """
    ic = frozenset(ic or ())
    out: list = []

    def go(s, bd, sd, site, path):
        match s:
            case Var(name):
                if name == x:
                    out.append(Occurrence(bd, sd, site is not None, site, path))
            case Input(a, _, y, body):
                if y == x:
                    return
                if a in ic and bd == 0 and sd == 0:
                    site = path
                go(body, bd, sd, site, path + (0,))
            case Abs(_, y, body):
                if y != x:
                    go(body, bd, sd, site, path + (0,))
            case Box(Kind.BANG, v):
                go(v, bd + 1, sd, site, path + (0,))
            case Box(Kind.SPAWN, v):
                go(v, bd, sd + 1, site, path + (0,))
            case _:
                for i, c in enumerate(children(s)):
                    go(c, bd, sd, site, path + (i,))

    go(t, 0, 0, None, ())
    return out


# -- substitution ------------------------------------------------------------


def fresh_name(base: str, avoid) -> str:
    name = base + "'"
    while name in avoid:
        name += "'"
    return name


def rename_channel(t: Term, old: ChannelName, new: ChannelName) -> Term:
    """Replace free occurrences of channel ``old`` by ``new``.

    ``new`` must not be captured: callers pick it fresh for ``t``.
    """
    match t:
        case Nil() | Unit() | Var():
            return t
        case Par(l, r):
            return Par(rename_channel(l, old, new), rename_channel(r, old, new))
        case Input(a, k, x, body):
            return Input(new if a == old else a, k, x, rename_channel(body, old, new))
        case Output(a, v, p):
            return Output(new if a == old else a, rename_channel(v, old, new),
                          rename_channel(p, old, new))
        case Restrict(a, body):
            if a == old:
                return t
            return Restrict(a, rename_channel(body, old, new))
        case App(f, w):
            return App(rename_channel(f, old, new), rename_channel(w, old, new))
        case Abs(k, x, body):
            return Abs(k, x, rename_channel(body, old, new))
        case Box(k, v):
            return Box(k, rename_channel(v, old, new))
    raise TypeError(f"not a term: {t!r}")


def substitute(t: Term, x: VarName, v: Value) -> Term:
    """Capture-avoiding ``t{v/x}``; binders of ``t`` are renamed as needed."""
    return _subst(t, x, v, free_vars(v), free_channels(v))


def _subst(t, x, v, fv, fc):
    match t:
        case Var(name):
            return v if name == x else t
        case Nil() | Unit():
            return t
        case Par(l, r):
            return Par(_subst(l, x, v, fv, fc), _subst(r, x, v, fv, fc))
        case Output(a, w, p):
            return Output(a, _subst(w, x, v, fv, fc), _subst(p, x, v, fv, fc))
        case App(f, w):
            return App(_subst(f, x, v, fv, fc), _subst(w, x, v, fv, fc))
        case Box(k, w):
            return Box(k, _subst(w, x, v, fv, fc))
        case Input(a, k, y, body):
            y, body = _subst_binder(y, body, x, v, fv, fc)
            return t if body is None else Input(a, k, y, body)
        case Abs(k, y, body):
            y, body = _subst_binder(y, body, x, v, fv, fc)
            return t if body is None else Abs(k, y, body)
        case Restrict(a, body):
            if x not in free_vars(body):
                return t
            if a in fc:
                a2 = fresh_name(a, fc | all_names(body))
                body = rename_channel(body, a, a2)
                a = a2
            return Restrict(a, _subst(body, x, v, fv, fc))
    raise TypeError(f"not a term: {t!r}")


def _subst_binder(y, body, x, v, fv, fc):
    if y == x or x not in free_vars(body):
        return y, None
    if y in fv:
        y2 = fresh_name(y, fv | all_names(body) | {x})
        body = _subst(body, y, Var(y2), frozenset((y2,)), frozenset())
        y = y2
    return y, _subst(body, x, v, fv, fc)


# -- alpha equivalence -------------------------------------------------------


def alpha_canonicalize(t: Term) -> Term:
    """Rename every binder to ``_xN`` / ``_aN`` in pre-order.

    All binders of the result are pairwise distinct, and alpha-equivalent
    inputs give identical outputs.
    """
    taken = free_vars(t) | free_channels(t)
    counters = {"x": 0, "a": 0}

    def gen(prefix):
        while True:
            name = f"_{prefix}{counters[prefix]}"
            counters[prefix] += 1
            if name not in taken:
                return name

    def go(s, venv, cenv):
        match s:
            case Var(n):
                return Var(venv.get(n, n))
            case Nil() | Unit():
                return s
            case Par(l, r):
                return Par(go(l, venv, cenv), go(r, venv, cenv))
            case Input(a, k, y, body):
                y2 = gen("x")
                return Input(cenv.get(a, a), k, y2, go(body, {**venv, y: y2}, cenv))
            case Abs(k, y, body):
                y2 = gen("x")
                return Abs(k, y2, go(body, {**venv, y: y2}, cenv))
            case Output(a, w, p):
                return Output(cenv.get(a, a), go(w, venv, cenv), go(p, venv, cenv))
            case Restrict(a, body):
                a2 = gen("a")
                return Restrict(a2, go(body, venv, {**cenv, a: a2}))
            case App(f, w):
                return App(go(f, venv, cenv), go(w, venv, cenv))
            case Box(k, w):
                return Box(k, go(w, venv, cenv))
        raise TypeError(f"not a term: {s!r}")

    return go(t, {}, {})


def alpha_eq(s: Term, t: Term) -> bool:
    return alpha_canonicalize(s) == alpha_canonicalize(t)
