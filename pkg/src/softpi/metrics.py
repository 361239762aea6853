"""Resource measures: size, box depth, duplicability factor, weights, growth.

All functions work on processes and values alike.  Python integers are
unbounded, so no measure can overflow.

``size`` counts the symbols that the weight tables charge for when ``n = 1``:
``0``, ``*``, variables, ``|``, input prefixes, applications and boxes.
Restrictions, abstractions and output prefixes are free, exactly as in the
weight.  This is what makes ``weight >= size`` hold; see ``node_count`` in
:mod:`softpi.syntax` for the plain constructor count.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

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
    nfo,
)


def size(t) -> int:
    match t:
        case Nil() | Unit() | Var():
            return 1
        case Par(l, r):
            return size(l) + size(r) + 1
        case Input(_, _, _, body):
            return size(body) + 1
        case Output(_, v, p):
            return size(v) + size(p)
        case Restrict(_, body) | Abs(_, _, body):
            return size(body)
        case App(f, w):
            return size(f) + size(w) + 1
        case Box(_, v):
            return size(v) + 1
    raise TypeError(f"not a term: {t!r}")


def box_depth(t) -> int:
    """Maximum nesting of boxes, ``!`` and ``#`` counted alike."""
    match t:
        case Nil() | Unit() | Var():
            return 0
        case Box(_, v):
            return box_depth(v) + 1
        case Par(l, r) | App(l, r) | Output(_, l, r):
            return max(box_depth(l), box_depth(r))
        case Input(_, _, _, body) | Restrict(_, body) | Abs(_, _, body):
            return box_depth(body)
    raise TypeError(f"not a term: {t!r}")


def dup_factor(t) -> int:
    """Largest number of free occurrences of a bound variable under its binder (at least 1)."""
    match t:
        case Nil() | Unit() | Var():
            return 1
        case Box(_, v):
            return dup_factor(v)
        case Par(l, r) | App(l, r) | Output(_, l, r):
            return max(dup_factor(l), dup_factor(r))
        case Restrict(_, body):
            return dup_factor(body)
        case Input(_, _, x, body) | Abs(_, x, body):
            return max(dup_factor(body), nfo(x, body))
    raise TypeError(f"not a term: {t!r}")


def weight_param(t, n: int) -> int:
    if n < 1:
        raise ValueError("the weight parameter must be at least 1")
    return _wgt(t, n)


def _wgt(t, n):
    match t:
        case Nil() | Unit() | Var():
            return 1
        case Box(_, v):
            return n * _wgt(v, n) + 1
        case Par(l, r) | App(l, r):
            return _wgt(l, n) + _wgt(r, n) + 1
        case Input(_, _, _, body):
            return _wgt(body, n) + 1
        case Output(_, v, p):
            return _wgt(v, n) + _wgt(p, n)
        case Restrict(_, body) | Abs(_, _, body):
            return _wgt(body, n)
    raise TypeError(f"not a term: {t!r}")


def weight(t) -> int:
    return _wgt(t, dup_factor(t))


def webi_param(t, n: int, ic=()) -> int:
    """Weight that ignores everything guarded by an input on an ``ic`` channel."""
    if n < 1:
        raise ValueError("the weight parameter must be at least 1")
    return _webi(t, n, frozenset(ic))


def _webi(t, n, ic):
    match t:
        case Nil() | Unit() | Var():
            return 1
        case Box(_, v):
            return n * _webi(v, n, ic) + 1
        case Par(l, r) | App(l, r):
            return _webi(l, n, ic) + _webi(r, n, ic) + 1
        case Input(a, _, _, body):
            return 0 if a in ic else _webi(body, n, ic) + 1
        case Output(_, v, p):
            return _webi(v, n, ic) + _webi(p, n, ic)
        case Restrict(_, body) | Abs(_, _, body):
            return _webi(body, n, ic)
    raise TypeError(f"not a term: {t!r}")


def webi(t, ic=()) -> int:
    return webi_param(t, dup_factor(t), ic)


def pgr_param(t, n: int, ic=()) -> int:
    """Potential growth: how much size spawning may still add."""
    if n < 1:
        raise ValueError("the weight parameter must be at least 1")
    return _pgr(t, n, frozenset(ic))


def _pgr(t, n, ic):
    match t:
        case Nil() | Unit() | Var():
            return 0
        case Box(Kind.BANG, v):
            return n * _pgr(v, n, ic)
        case Box(_, v):
            return n * _pgr(v, n, ic) + n * _wgt(v, n)
        case Par(l, r) | App(l, r) | Output(_, l, r):
            return _pgr(l, n, ic) + _pgr(r, n, ic)
        case Input(a, _, _, body):
            return 0 if a in ic else _pgr(body, n, ic)
        case Restrict(_, body) | Abs(_, _, body):
            return _pgr(body, n, ic)
    raise TypeError(f"not a term: {t!r}")


def pgr(t, ic=()) -> int:
    return pgr_param(t, dup_factor(t), ic)


def poly_bound(t) -> int:
    """``size ** (box_depth + 1)``: bounds the weight, hence reduction length and reduct size."""
    return size(t) ** (box_depth(t) + 1)


@dataclass(frozen=True)
class MetricsSnapshot:
    size: int
    bd: int
    df: int
    wei: int
    poly_bound: int
    webi: int | None = None
    pgr: int | None = None

    def to_dict(self):
        return asdict(self)


def snapshot(t, ic=None) -> MetricsSnapshot:
    """All measures of ``t``; ``webi``/``pgr`` only when an input-channel set is given."""
    s, bd, df = size(t), box_depth(t), dup_factor(t)
    extra = {}
    if ic is not None:
        ic = frozenset(ic)
        extra = {"webi": _webi(t, df, ic), "pgr": _pgr(t, df, ic)}
    return MetricsSnapshot(size=s, bd=bd, df=df, wei=_wgt(t, df), poly_bound=s ** (bd + 1), **extra)
