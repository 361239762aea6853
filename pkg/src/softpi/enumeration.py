"""Exhaustive, size-ordered enumeration of closed processes.

Terms are indexed by ``node_count`` (one per constructor) and built over a
small alphabet of channel and variable names.  The generators are lazy, so a
caller can stop at any point and still have covered every term of the sizes
already finished.
"""

from __future__ import annotations

from functools import cache, lru_cache

from .syntax import NIL, UNIT, Abs, App, Box, Input, Kind, Output, Par, Restrict, Var

CHANNELS = ("a", "b")
VARIABLES = ("x", "y")

# binder kinds and box kinds of each grammar
GRAMMARS = {
    "hopi": ((Kind.LINEAR,), ()),
    "lhopi": ((Kind.LINEAR, Kind.BANG), (Kind.BANG,)),
    "shopi": ((Kind.LINEAR, Kind.BANG), (Kind.BANG,)),
    "eshopi": ((Kind.LINEAR, Kind.BANG, Kind.SPAWN), (Kind.BANG, Kind.SPAWN)),
}

# below this size the term lists are cached; above it everything is streamed
_CACHE_LIMIT = 6


class Enumerator:
    def __init__(self, calculus, channels=CHANNELS, variables=VARIABLES):
        self.binders, self.boxes = GRAMMARS[calculus]
        self.channels = tuple(channels)
        self.variables = tuple(variables)
        self._pc = lru_cache(maxsize=None)(lambda n, s: tuple(self._procs(n, s)))
        self._vc = lru_cache(maxsize=None)(lambda n, s: tuple(self._values(n, s)))

    def procs(self, n, scope=frozenset()):
        """All processes with exactly ``n`` nodes whose free variables lie in ``scope``."""
        return self._pc(n, scope) if n <= _CACHE_LIMIT else self._procs(n, scope)

    def values(self, n, scope=frozenset()):
        return self._vc(n, scope) if n <= _CACHE_LIMIT else self._values(n, scope)

    def _procs(self, n, s):
        if n == 1:
            yield NIL
            return
        for i in range(1, n - 1):
            for l in self.procs(i, s):
                for r in self.procs(n - 1 - i, s):
                    yield Par(l, r)
        for a in self.channels:
            for k in self.binders:
                for x in self.variables:
                    for body in self.procs(n - 1, s | {x}):
                        yield Input(a, k, x, body)
        for a in self.channels:
            for i in range(1, n - 1):
                for v in self.values(i, s):
                    for cont in self.procs(n - 1 - i, s):
                        yield Output(a, v, cont)
        for a in self.channels:
            for body in self.procs(n - 1, s):
                yield Restrict(a, body)
        for i in range(1, n - 1):
            for f in self.values(i, s):
                for w in self.values(n - 1 - i, s):
                    yield App(f, w)

    def _values(self, n, s):
        if n == 1:
            yield UNIT
            for x in self.variables:
                if x in s:
                    yield Var(x)
            return
        for k in self.binders:
            for x in self.variables:
                for body in self.procs(n - 1, s | {x}):
                    yield Abs(k, x, body)
        for k in self.boxes:
            for v in self.values(n - 1, s):
                yield Box(k, v)


def closed_processes(calculus, max_size, channels=CHANNELS, variables=VARIABLES):
    """Yield every closed process of the grammar with at most ``max_size`` nodes, smallest first."""
    e = Enumerator(calculus, channels, variables)
    for n in range(1, max_size + 1):
        yield from e.procs(n)


def count_closed(calculus, max_size, channels=CHANNELS, variables=VARIABLES) -> list:
    """Number of closed processes of each size ``1..max_size``, without building them."""
    binders, boxes = GRAMMARS[calculus]
    nb, nbox, nc = len(binders), len(boxes), len(channels)
    idx = {x: i for i, x in enumerate(variables)}

    @cache
    def P(n, s):
        if n == 1:
            return 1
        t = 0
        for i in range(1, n - 1):
            t += P(i, s) * P(n - 1 - i, s) + nc * V(i, s) * P(n - 1 - i, s) + V(i, s) * V(n - 1 - i, s)
        t += nc * nb * sum(P(n - 1, s | (1 << idx[x])) for x in variables)
        t += nc * P(n - 1, s)
        return t

    @cache
    def V(n, s):
        if n == 1:
            return 1 + bin(s).count("1")
        return nb * sum(P(n - 1, s | (1 << idx[x])) for x in variables) + nbox * V(n - 1, s)

    return [P(n, 0) for n in range(1, max_size + 1)]
