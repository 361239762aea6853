"""Structural congruence and the reduction engine.

Congruence is decided through canonical forms: at every "soup level" (a
maximal nest of ``|`` and ``new``) restrictions are pulled out in front,
threads are sorted, and bound names are replaced by level-indexed names.
Neither ``P | 0 = P`` nor ``new a.0 = 0`` is used, so ``0`` threads and
useless restrictions survive.

Reduction happens only between top-level threads of the canonical form, never
under a prefix or inside a box.
"""

from __future__ import annotations

import enum
import itertools
import random
from collections import deque
from collections.abc import Callable
from dataclasses import dataclass, field
from typing import Union

from .parser import print_process
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
    free_channels,
    free_vars,
    par,
    substitute,
)

# upper bound on the tied relabelings tried at one soup level
MAX_RELABELINGS = 40320


# -- canonical forms -----------------------------------------------------------


class _Tok:
    """A restricted channel of the soup level being canonicalised."""

    __slots__ = ("n",)

    def __init__(self, n):
        self.n = n


@dataclass(frozen=True)
class CanonicalProcess:
    restricted: tuple
    soup: tuple
    key: str = field(compare=False, repr=False, default="")

    def process(self):
        p = par(*self.soup)
        for a in reversed(self.restricted):
            p = Restrict(a, p)
        return p

    def __str__(self):
        return self.key


class _Canon:
    def __init__(self, t):
        self.taken = free_vars(t) | free_channels(t)

    def vname(self, i):
        n = f"_x{i}"
        while n in self.taken:
            n += "'"
        return n

    def cname(self, i):
        n = f"_c{i}"
        while n in self.taken:
            n += "'"
        return n

    # a soup level: returns (restricted names, sorted threads)
    def soup(self, p, venv, cenv, vl, cl):
        threads, toks = [], []

        def flat(q, env):
            match q:
                case Par(l, r):
                    flat(l, env)
                    flat(r, env)
                case Restrict(a, body):
                    tok = _Tok(len(toks))
                    toks.append(tok)
                    flat(body, {**env, a: tok})
                case _:
                    threads.append((q, env))

        flat(p, cenv)
        k = len(toks)
        if k == 0:
            done = sorted(((print_process(c), c) for c in
                           (self.thread(q, venv, env, vl, cl) for q, env in threads)),
                          key=lambda e: e[0])
            return (), tuple(c for _, c in done), tuple(s for s, _ in done)

        def resolve(env, assign):
            return {c: (assign[v.n] if isinstance(v, _Tok) else v) for c, v in env.items()}

        def uses(q, env):
            return {env[c].n for c in free_channels(q)
                    if c in env and isinstance(env[c], _Tok)}

        used = [uses(q, env) for q, env in threads]
        invariant = []
        for s in range(k):
            assign = ["?"] * k
            assign[s] = "#"
            sig = sorted(print_process(self.thread(q, venv, resolve(env, assign), vl, cl + k))
                         for (q, env), u in zip(threads, used) if s in u)
            invariant.append(tuple(sig))
        order = sorted(range(k), key=lambda s: invariant[s])
        cells = [list(g) for _, g in itertools.groupby(order, key=lambda s: invariant[s])]
        total = 1
        for c in cells:
            for i in range(2, len(c) + 1):
                total *= i
        if total > MAX_RELABELINGS:
            raise RuntimeError(f"{total} symmetric relabelings of restricted channels at one level")

        names = [self.cname(cl + i) for i in range(k)]
        best = None
        for perms in itertools.product(*(itertools.permutations(c) for c in cells)):
            assign = [None] * k
            for pos, s in enumerate(itertools.chain.from_iterable(perms)):
                assign[s] = names[pos]
            done = sorted(((print_process(c), c) for c in
                           (self.thread(q, venv, resolve(env, assign), vl, cl + k)
                            for q, env in threads)), key=lambda e: e[0])
            key = tuple(s for s, _ in done)
            if best is None or key < best[0]:
                best = (key, tuple(c for _, c in done))
        return tuple(names), best[1], best[0]

    def proc(self, p, venv, cenv, vl, cl):
        names, threads, _ = self.soup(p, venv, cenv, vl, cl)
        out = par(*threads)
        for a in reversed(names):
            out = Restrict(a, out)
        return out

    def thread(self, q, venv, cenv, vl, cl):
        match q:
            case Nil():
                return q
            case Input(a, k, x, body):
                nx = self.vname(vl)
                return Input(cenv.get(a, a), k, nx,
                             self.proc(body, {**venv, x: nx}, cenv, vl + 1, cl))
            case Output(a, v, cont):
                return Output(cenv.get(a, a), self.value(v, venv, cenv, vl, cl),
                              self.proc(cont, venv, cenv, vl, cl))
            case App(f, w):
                return App(self.value(f, venv, cenv, vl, cl), self.value(w, venv, cenv, vl, cl))
        raise TypeError(f"not a thread: {q!r}")

    def value(self, v, venv, cenv, vl, cl):
        match v:
            case Unit():
                return v
            case Var(x):
                return Var(venv.get(x, x))
            case Abs(k, x, body):
                nx = self.vname(vl)
                return Abs(k, nx, self.proc(body, {**venv, x: nx}, cenv, vl + 1, cl))
            case Box(k, inner):
                return Box(k, self.value(inner, venv, cenv, vl, cl))
        raise TypeError(f"not a value: {v!r}")


def canonical_form(p) -> CanonicalProcess:
    """Representative of the congruence class of ``p``."""
    if isinstance(p, CanonicalProcess):
        return p
    c = _Canon(p)
    names, threads, keys = c.soup(p, {}, {}, 0, 0)
    key = "".join(f"new {a}." for a in names) + "(" + " | ".join(keys) + ")"
    return CanonicalProcess(names, threads, key)


def congruent(p, q) -> bool:
    return canonical_form(p).key == canonical_form(q).key


# -- redexes -------------------------------------------------------------------


class RedexKind(enum.Enum):
    COMM_LINEAR = "CommLinear"
    COMM_BANG = "CommBang"
    COMM_SPAWN = "CommSpawn"
    APP_LINEAR = "AppLinear"
    APP_BANG = "AppBang"
    APP_SPAWN = "AppSpawn"

    @property
    def is_comm(self):
        return self.name.startswith("COMM")


_COMM = {Kind.LINEAR: RedexKind.COMM_LINEAR, Kind.BANG: RedexKind.COMM_BANG,
         Kind.SPAWN: RedexKind.COMM_SPAWN}
_APP = {Kind.LINEAR: RedexKind.APP_LINEAR, Kind.BANG: RedexKind.APP_BANG,
        Kind.SPAWN: RedexKind.APP_SPAWN}


@dataclass(frozen=True)
class Redex:
    kind: RedexKind
    location: tuple  # soup indices: (app,) or (output, input)
    channel: str | None = None

    def to_dict(self):
        return {"kind": self.kind.value, "location": list(self.location), "channel": self.channel}


class StuckError(ValueError):
    pass


def _fits(kind, v) -> bool:
    """Does value ``v`` have the shape a ``kind`` binder consumes?"""
    if kind is Kind.LINEAR:
        return True
    return isinstance(v, Box) and v.kind is kind


def redexes(p) -> list:
    """All redexes of the canonical form of ``p``, in soup order."""
    c = canonical_form(p)
    if not isinstance(p, CanonicalProcess) and free_vars(p):
        raise ValueError(f"reduction is defined on closed processes; free: {sorted(free_vars(p))}")
    out = []
    soup = c.soup
    for i, t in enumerate(soup):
        if isinstance(t, App):
            if isinstance(t.fun, Abs) and _fits(t.fun.kind, t.arg):
                out.append(Redex(_APP[t.fun.kind], (i,)))
        elif isinstance(t, Output):
            for j, u in enumerate(soup):
                if isinstance(u, Input) and u.chan == t.chan and _fits(u.kind, t.payload):
                    out.append(Redex(_COMM[u.kind], (i, j), t.chan))
    return out


def _unbox(kind, v):
    return v if kind is Kind.LINEAR else v.inner


def contract(c: CanonicalProcess, r: Redex):
    """Apply ``r`` to the soup of ``c``; returns the new process (not canonicalised)."""
    soup = list(c.soup)
    if len(r.location) == 1:
        (i,) = r.location
        t = soup[i]
        soup[i] = substitute(t.fun.body, t.fun.var, _unbox(t.fun.kind, t.arg))
    else:
        i, j = r.location
        out, inp = soup[i], soup[j]
        soup[i] = out.cont
        soup[j] = substitute(inp.body, inp.var, _unbox(inp.kind, out.payload))
    return CanonicalProcess(c.restricted, tuple(soup)).process()


def step(p, r: Redex):
    """One reduction step of ``p`` at redex ``r`` (which must be in ``redexes(p)``)."""
    c = canonical_form(p)
    if r not in redexes(c):
        raise StuckError(f"{r} is not a redex of {c.key}")
    return contract(c, r)


def successors(p) -> list:
    """``(redex, successor canonical form)`` for every redex of ``p``."""
    c = canonical_form(p)
    return [(r, canonical_form(contract(c, r))) for r in redexes(c)]


# -- runs ----------------------------------------------------------------------


@dataclass
class TraceStep:
    process: object  # canonical representative of the state the redex fires in
    chosen: Redex
    metrics: object | None = None


@dataclass
class Trace:
    steps: list
    final: object
    exhausted: bool
    final_metrics: object | None = None

    def __len__(self):
        return len(self.steps)

    def states(self) -> list:
        return [s.process for s in self.steps] + [self.final]


Strategy = Union[str, Callable]


def run(p, strategy: Strategy = "first", max_steps: int | None = 1000, seed: int = 0) -> Trace:
    """Reduce ``p`` until no redex is left or ``max_steps`` steps were taken.

    ``strategy`` is ``"first"``, ``"random"`` (driven by ``seed``), or a
    function ``(canonical_process, redexes) -> redex``.
    """
    rng = random.Random(seed)
    if strategy == "first":
        choose = lambda c, rs: rs[0]
    elif strategy == "random":
        choose = lambda c, rs: rng.choice(rs)
    elif callable(strategy):
        choose = strategy
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    steps = []
    c = canonical_form(p)
    if free_vars(p):
        raise ValueError("reduction is defined on closed processes")
    while True:
        rs = redexes(c)
        if not rs:
            return Trace(steps, c.process(), True)
        if max_steps is not None and len(steps) >= max_steps:
            return Trace(steps, c.process(), False)
        r = choose(c, rs)
        steps.append(TraceStep(c.process(), r))
        c = canonical_form(contract(c, r))


# -- exploration ---------------------------------------------------------------


@dataclass
class Edge:
    src: int
    dst: int
    redex: Redex


@dataclass
class ReductionGraph:
    nodes: list  # CanonicalProcess, root first
    edges: list
    truncated: bool
    expanded: set = field(default_factory=set)

    def successors_of(self, i) -> list:
        return [e for e in self.edges if e.src == i]

    def adjacency(self) -> dict:
        adj = {i: [] for i in range(len(self.nodes))}
        for e in self.edges:
            adj[e.src].append(e.dst)
        return adj

    def terminal_nodes(self) -> list:
        adj = self.adjacency()
        return [i for i in self.expanded if not adj[i]]

    def longest_path(self) -> int | None:
        """Length of the longest reduction sequence from the root, or None if the graph has a cycle."""
        adj = self.adjacency()
        memo, onstack = {}, set()

        def go(u):
            if u in memo:
                return memo[u]
            if u in onstack:
                raise _Cycle
            onstack.add(u)
            best = 0
            for v in adj[u]:
                best = max(best, go(v) + 1)
            onstack.discard(u)
            memo[u] = best
            return best

        try:
            return _iterative_longest(adj) if len(self.nodes) > 500 else go(0)
        except _Cycle:
            return None

    def has_cycle(self) -> bool:
        return self.longest_path() is None


class _Cycle(Exception):
    pass


def _iterative_longest(adj):
    # Kahn's algorithm from the root; raises _Cycle if some node cannot be ordered
    indeg = {u: 0 for u in adj}
    for u in adj:
        for v in adj[u]:
            indeg[v] += 1
    queue = deque(u for u in adj if indeg[u] == 0)
    order = []
    while queue:
        u = queue.popleft()
        order.append(u)
        for v in adj[u]:
            indeg[v] -= 1
            if indeg[v] == 0:
                queue.append(v)
    if len(order) != len(adj):
        raise _Cycle
    dist = {u: 0 for u in adj}
    for u in reversed(order):
        for v in adj[u]:
            dist[u] = max(dist[u], dist[v] + 1)
    return dist[0]


def explore(p, node_budget: int = 1000) -> ReductionGraph:
    """Breadth-first state space of ``p`` modulo congruence."""
    if free_vars(p):
        raise ValueError("reduction is defined on closed processes")
    root = canonical_form(p)
    nodes, index, edges = [root], {root.key: 0}, []
    expanded = set()
    queue = deque([0])
    truncated = False
    while queue:
        i = queue.popleft()
        out = []
        complete = True
        for r, succ in successors(nodes[i]):
            j = index.get(succ.key)
            if j is None:
                if len(nodes) >= node_budget:
                    truncated, complete = True, False
                    continue
                j = len(nodes)
                nodes.append(succ)
                index[succ.key] = j
                queue.append(j)
            out.append(Edge(i, j, r))
        edges.extend(out)
        if complete:
            expanded.add(i)
    return ReductionGraph(nodes, edges, truncated, expanded)
