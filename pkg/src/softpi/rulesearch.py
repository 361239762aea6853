"""Naive derivation search over the well-formation rules.

This is deliberately literal: contexts are finite maps from variables to
markings, binary rules enumerate every admissible split of the context, and
binders try every marking their rule allows.  It is exponential and only meant
for small terms, as an independent oracle for :mod:`softpi.wellformed`.

Markings: ``L`` linear, ``B`` banged, ``D`` soft (contractible), ``S``
spawned, ``G`` absorbing (eSHOpi only).
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product

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
    alpha_canonicalize,
    free_vars,
    subterms,
)

_MARKS = {"lhopi": "LB", "shopi": "LBD", "eshopi": "LBDSG"}

# per-variable ways to distribute a marking over the two premises of a
# binary rule; None means "absent from that premise"
_SPLITS = {
    "lhopi": {
        "L": [("L", None), (None, "L")],
        "B": [("B", None), (None, "B"), ("B", "B")],
    },
    "shopi": {
        "L": [("L", None), (None, "L")],
        "B": [("B", None), (None, "B")],
        "D": [("D", None), (None, "D"), ("D", "D")],
    },
    "eshopi": {
        "L": [("L", None), (None, "L")],
        "B": [("B", None), (None, "B")],
        "S": [("S", None), (None, "S")],
        "D": [("D", None), (None, "D"), ("D", "D")],
        "G": [("G", None), (None, "G"), ("G", "D"), ("D", "G")],
    },
}


def derivable(t, calculus: str, ic=()) -> bool:
    """True iff some context proves ``t`` well formed in ``calculus``."""
    if calculus == "hopi":
        return all(
            not (isinstance(s, (Input, Abs, Box)) and s.kind is not Kind.LINEAR)
            for s in subterms(t)
        )
    ic = frozenset(ic) if calculus == "eshopi" else frozenset()
    allowed = {Kind.LINEAR, Kind.BANG} | ({Kind.SPAWN} if calculus == "eshopi" else set())
    for s in subterms(t):
        if isinstance(s, (Input, Abs, Box)) and s.kind not in allowed:
            return False
        if isinstance(s, (Output, Restrict)) and s.chan in ic:
            return False
    t = alpha_canonicalize(t)
    fv = sorted(free_vars(t))
    search = _Search(calculus, ic)
    for marks in product(_MARKS[calculus], repeat=len(fv)):
        if search.proc(t, frozenset(zip(fv, marks))):
            return True
    return False


class _Search:
    def __init__(self, calculus, ic):
        self.calculus = calculus
        self.ic = ic
        self.weak = "B" if calculus == "lhopi" else "D"
        self.proc = lru_cache(maxsize=None)(self._proc)
        self.value = lru_cache(maxsize=None)(self._value)

    # contexts are frozensets of (var, mark) pairs

    def all_weak(self, ctx):
        return all(m == self.weak for _, m in ctx)

    def splits(self, ctx):
        items = sorted(ctx)
        table = _SPLITS[self.calculus]
        for choice in product(*(table[m] for _, m in items)):
            left = frozenset((v, l) for (v, _), (l, _) in zip(items, choice) if l)
            right = frozenset((v, r) for (v, _), (_, r) in zip(items, choice) if r)
            yield left, right

    def binder_marks(self, kind):
        if kind is Kind.LINEAR:
            return "L"
        if self.calculus == "lhopi":
            return "B"
        if kind is Kind.BANG:
            return "BD"
        return "SG"

    def under_binder(self, ctx, x, kind, ic_input=False):
        variants = [ctx]
        if ic_input:
            absorbing = sorted(v for v, m in ctx if m == "G")
            variants = []
            for pick in product((False, True), repeat=len(absorbing)):
                conv = {v for v, p in zip(absorbing, pick) if p}
                variants.append(frozenset((v, "S" if v in conv else m) for v, m in ctx))
        for c in variants:
            for m in self.binder_marks(kind):
                yield c | {(x, m)}

    def _proc(self, p, ctx) -> bool:
        match p:
            case Nil():
                return self.all_weak(ctx)
            case Par(l, r):
                return any(self.proc(l, a) and self.proc(r, b) for a, b in self.splits(ctx))
            case Input(a, kind, x, body):
                guarded = self.calculus == "eshopi" and a in self.ic
                return any(self.proc(body, c) for c in self.under_binder(ctx, x, kind, guarded))
            case Output(_, v, cont):
                return any(self.value(v, a) and self.proc(cont, b) for a, b in self.splits(ctx))
            case Restrict(_, body):
                return self.proc(body, ctx)
            case App(f, w):
                return any(self.value(f, a) and self.value(w, b) for a, b in self.splits(ctx))
        raise TypeError(p)

    def _value(self, v, ctx) -> bool:
        match v:
            case Unit():
                return self.all_weak(ctx)
            case Var(x):
                rest = frozenset((y, m) for y, m in ctx if y != x)
                mine = [m for y, m in ctx if y == x]
                if not mine or not self.all_weak(rest):
                    return False
                return mine[0] in ("L", "B") if self.calculus == "lhopi" else mine[0] in ("L", "D")
            case Abs(kind, x, body):
                return any(self.proc(body, c) for c in self.under_binder(ctx, x, kind))
            case Box(kind, inner):
                if self.calculus == "lhopi":
                    return kind is Kind.BANG and all(m == "B" for _, m in ctx) and self.value(inner, ctx)
                outer = "B" if kind is Kind.BANG else "S"
                if any(m not in (outer, "D") for _, m in ctx):
                    return False
                return self.value(inner, frozenset((y, "L") for y, m in ctx if m == outer))
        raise TypeError(v)
