"""Random generation of well-formed closed processes of an exact size.

Generation runs the well-formation rules bottom-up: every subterm is built
together with the context it must consume (variables with their markings, as
in :mod:`softpi.rulesearch`), and binary constructors split that context the
way the rules do.  A lower bound on the size needed to consume a context
keeps every random choice completable, and a plain "output chain" finishes
any branch the random choices could not.
"""

from __future__ import annotations

import random

from .metrics import size
from .rulesearch import _SPLITS
from .syntax import (
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
    free_vars,
)
from .wellformed import check

FUZZ_CHANNELS = ("a", "b", "c")

_SPLITS_ALL = dict(_SPLITS)
_SPLITS_ALL["hopi"] = {"H": [("H", None), (None, "H"), ("H", "H")]}

_WEAK = {"hopi": "H", "lhopi": "B", "shopi": "D", "eshopi": "D"}
_VAR_OK = {"hopi": "H", "lhopi": "LB", "shopi": "LD", "eshopi": "LD"}
_KINDS = {
    "hopi": (Kind.LINEAR,),
    "lhopi": (Kind.LINEAR, Kind.BANG),
    "shopi": (Kind.LINEAR, Kind.BANG),
    "eshopi": (Kind.LINEAR, Kind.BANG, Kind.SPAWN),
}
_BOXES = {"hopi": (), "lhopi": (Kind.BANG,), "shopi": (Kind.BANG,), "eshopi": (Kind.BANG, Kind.SPAWN)}


class FuzzBudgetExhausted(RuntimeError):
    pass


class _DeadEnd(Exception):
    pass


class _Gen:
    def __init__(self, rng, calculus, ic, channels):
        self.rng = rng
        self.calculus = calculus
        self.ic = frozenset(ic) if calculus == "eshopi" else frozenset()
        self.channels = tuple(channels)
        self.out_chans = tuple(a for a in self.channels if a not in self.ic)
        if not self.out_chans:
            raise ValueError("every channel is an input channel; nothing can be sent")
        self.ic_chans = tuple(a for a in self.channels if a in self.ic)
        self.weak = _WEAK[calculus]
        self.kinds = _KINDS[calculus]
        self.boxes = _BOXES[calculus]
        self.splits = _SPLITS_ALL[calculus]
        self.counter = 0

    # -- bookkeeping -----------------------------------------------------------

    def fresh(self):
        self.counter += 1
        return "xyzuvw"[self.counter % 6] + (str(self.counter // 6) if self.counter >= 6 else "")

    def all_weak(self, ctx):
        return all(m == self.weak for m in ctx.values())

    def need(self, ctx):
        """Smallest size of a process consuming ``ctx`` (every larger size is reachable too)."""
        cost = {"L": 1, "S": 2, "G": 2, "B": 0 if self.calculus == "lhopi" else 2}
        n = 1 + sum(cost.get(m, 0) for m in ctx.values())
        return n + (1 if "G" in ctx.values() else 0)

    def need_value(self, ctx):
        if self.var_able(ctx) or self.all_weak(ctx):
            return 1
        return self.need(ctx)

    def var_able(self, ctx):
        strict = [x for x, m in ctx.items() if m != self.weak]
        return len(strict) <= 1 and any(m in _VAR_OK[self.calculus] for x, m in ctx.items()
                                        if not strict or x == strict[0])

    def binder_marks(self, kind):
        if self.calculus == "hopi":
            return "H"
        if kind is Kind.LINEAR:
            return "L"
        if self.calculus == "lhopi":
            return "B"
        if kind is Kind.BANG:
            return "BD"
        return "SGG" if self.ic else "S"

    def split(self, ctx):
        left, right = {}, {}
        for x, m in ctx.items():
            l, r = self.rng.choice(self.splits[m])
            if l:
                left[x] = l
            if r:
                right[x] = r
        return left, right

    def box_inner(self, kind, ctx):
        """Context inside a ``kind`` box, or None if the box cannot be formed over ``ctx``."""
        if self.calculus == "lhopi":
            return dict(ctx) if all(m == "B" for m in ctx.values()) else None
        outer = "B" if kind is Kind.BANG else "S"
        if any(m not in (outer, "D") for m in ctx.values()):
            return None
        return {x: "L" for x, m in ctx.items() if m == outer}

    def bind(self, ctx, kind):
        x = self.fresh()
        return x, {**ctx, x: self.rng.choice(self.binder_marks(kind))}

    def promote(self, ctx):
        """Input on an IC channel: absorbing variables may become spawned ones."""
        return {x: ("S" if m == "G" and self.rng.random() < 0.7 else m) for x, m in ctx.items()}

    def sizes(self, s, lo1, lo2):
        """Random ``s1`` with ``s1 >= lo1`` and ``s - s1 >= lo2``, or None."""
        if lo1 + lo2 > s:
            return None
        return self.rng.randint(lo1, s - lo2)

    # -- processes -------------------------------------------------------------

    def proc(self, ctx, s, tries=6):
        if s < self.need(ctx):
            raise _DeadEnd
        if s == 1:
            return NIL
        for _ in range(tries):
            choice = self.rng.choices(
                ("par", "input", "output", "restrict", "app", "comm"), (3, 2, 2, 0.5, 3, 3))[0]
            t = getattr(self, "_" + choice)(ctx, s)
            if t is not None:
                return t
        return self.chain(ctx, s)

    def _par(self, ctx, s):
        if s < 3:
            return None
        l, r = self.split(ctx)
        s1 = self.sizes(s - 1, self.need(l), self.need(r))
        if s1 is None:
            return None
        return Par(self.proc(l, s1), self.proc(r, s - 1 - s1))

    def _input(self, ctx, s):
        a = self.rng.choice(self.channels)
        if "G" in ctx.values() and self.rng.random() < 0.6:
            a = self.rng.choice(self.ic_chans)
        kind = self.rng.choice(self.kinds)
        if a in self.ic:
            ctx = self.promote(ctx)
        x, inner = self.bind(ctx, kind)
        if self.need(inner) > s - 1:
            return None
        return Input(a, kind, x, self.proc(inner, s - 1))

    def _output(self, ctx, s):
        a = self.rng.choice(self.out_chans)
        l, r = self.split(ctx)
        s1 = self.sizes(s, self.need_value(l), self.need(r))
        if s1 is None:
            return None
        return Output(a, self.value(l, s1), self.proc(r, s - s1))

    def _restrict(self, ctx, s):
        return Restrict(self.rng.choice(self.out_chans), self.proc(ctx, s))

    def _app(self, ctx, s):
        if s < 3:
            return None
        l, r = self.split(ctx)
        kind = self.rng.choice(self.kinds)
        x, inner = self.bind(l, kind)
        if kind is Kind.LINEAR:
            s1 = self.sizes(s - 1, self.need(inner), self.need_value(r))
            if s1 is None:
                return None
            return App(Abs(kind, x, self.proc(inner, s1)), self.value(r, s - 1 - s1))
        boxed = self.box_inner(kind, r)
        if boxed is None:
            return None
        s1 = self.sizes(s - 1, self.need(inner), self.need_value(boxed) + 1)
        if s1 is None:
            return None
        return App(Abs(kind, x, self.proc(inner, s1)), Box(kind, self.value(boxed, s - 2 - s1)))

    def _comm(self, ctx, s):
        """A sender and a matching receiver side by side, so that they can interact."""
        if s < 4:
            return None
        a = self.rng.choice(self.out_chans)
        kind = self.rng.choice(self.kinds)
        send, recv = self.split(ctx)
        payload, cont = self.split(send)
        x, inner = self.bind(recv, kind)
        boxed = payload if kind is Kind.LINEAR else self.box_inner(kind, payload)
        if boxed is None:
            return None
        lo_v = self.need_value(boxed) + (kind is not Kind.LINEAR)
        lo_c, lo_b = self.need(cont), self.need(inner)
        if lo_v + lo_c + lo_b + 2 > s:
            return None
        rest = s - 2 - lo_v - lo_c - lo_b
        cut = sorted(self.rng.randint(0, rest) for _ in range(2))
        sv, sc, sb = lo_v + cut[0], lo_c + cut[1] - cut[0], lo_b + rest - cut[1]
        if kind is Kind.LINEAR:
            v = self.value(boxed, sv)
        else:
            v = Box(kind, self.value(boxed, sv - 1))
        out = Output(a, v, self.proc(cont, sc))
        inp = Input(a, kind, x, self.proc(inner, sb))
        return Par(out, inp) if self.rng.random() < 0.5 else Par(inp, out)

    def chain(self, ctx, s):
        """Deterministic completion: send every strict variable away, pad with unused inputs."""
        pad = s - self.need(ctx)
        strict = [(x, m) for x, m in sorted(ctx.items()) if m != self.weak and m != "G"]
        absorbing = sorted(x for x, m in ctx.items() if m == "G")
        a = self.out_chans[0]
        tail = NIL
        for x in reversed(absorbing):
            tail = Output(a, Box(Kind.SPAWN, Var(x)), tail)
        if absorbing:
            tail = Input(self.ic_chans[0], Kind.BANG, self.fresh(), tail)
        for x, m in reversed(strict):
            v = Var(x) if m == "L" or self.calculus == "lhopi" else \
                Box(Kind.BANG if m == "B" else Kind.SPAWN, Var(x))
            tail = Output(a, v, tail)
        pad_kind = Kind.LINEAR if self.calculus == "hopi" else Kind.BANG
        for _ in range(pad):
            tail = Input(self.rng.choice(self.out_chans), pad_kind, self.fresh(), tail)
        return tail

    # -- values ----------------------------------------------------------------

    def value(self, ctx, s):
        if s < self.need_value(ctx):
            raise _DeadEnd
        if s == 1:
            if self.var_able(ctx):
                usable = [x for x, m in ctx.items() if m != self.weak] or \
                         [x for x, m in ctx.items() if m in _VAR_OK[self.calculus]]
                if usable and (not self.all_weak(ctx) or self.rng.random() < 0.6):
                    return Var(self.rng.choice(usable))
            if self.all_weak(ctx):
                return UNIT
            raise _DeadEnd
        if self.boxes and self.rng.random() < 0.4:
            kind = self.rng.choice(self.boxes)
            inner = self.box_inner(kind, ctx)
            if inner is not None and self.need_value(inner) <= s - 1:
                return Box(kind, self.value(inner, s - 1))
        for _ in range(4):
            kind = self.rng.choice(self.kinds)
            x, inner = self.bind(ctx, kind)
            if self.need(inner) <= s:
                return Abs(kind, x, self.proc(inner, s))
        kind = Kind.LINEAR if self.calculus == "hopi" else Kind.BANG
        x = self.fresh()
        return Abs(kind, x, self.chain(ctx, s))


def fuzz_generate(seed, target_size: int, calculus: str, ic=(), channels=FUZZ_CHANNELS, retries: int = 50):
    """A closed process of ``calculus`` with ``size(p) == target_size``, reproducible from ``seed``."""
    if target_size < 1:
        raise ValueError("target_size must be at least 1")
    rng = random.Random(f"{seed}/{target_size}/{calculus}/{sorted(ic)}")
    for _ in range(retries):
        g = _Gen(rng, calculus, ic, channels)
        try:
            p = g.proc({}, target_size)
        except _DeadEnd:
            continue
        if size(p) != target_size or free_vars(p):
            continue
        report = check(p, calculus, ic)
        if not report.ok:
            raise AssertionError(f"generator produced an ill-formed term: {report.failure}")
        return p
    raise FuzzBudgetExhausted(f"no {calculus} term of size {target_size} after {retries} attempts")
