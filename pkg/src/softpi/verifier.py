"""Replay traces and state spaces against the resource invariants.

Which invariants are asserted depends on the calculus.  Every calculus gets
subject reduction and the pure term inequalities (``wei >= size``,
``wei <= size^(bd+1)``).  SHOpi adds df non-increase, strict weight decrease
and the polynomial bounds on reduction length and reduct size.  eSHOpi
replaces weight decrease by the weight-before-input and potential-growth
inequalities.
"""

from __future__ import annotations

import random
import time
from collections import Counter
from dataclasses import dataclass, field

from . import metrics as M
from .enumeration import Enumerator, count_closed
from .fuzz import FuzzBudgetExhausted, fuzz_generate
from .parser import print_process
from .reduction import (
    CanonicalProcess,
    canonical_form,
    congruent,
    explore,
    redexes,
)
from .rulesearch import derivable
from .syntax import (
    Abs,
    App,
    Box,
    Input,
    Kind,
    Output,
    Par,
    Restrict,
    Var,
    all_names,
    children,
    free_channels,
    free_vars,
    fresh_name,
    nfo,
    occurrences,
    rename_channel,
    substitute,
)
from .wellformed import VarClass, check, classify

__all__ = [
    "OUTSIDE_CLAIMS",
    "CampaignResult",
    "FuzzBudgetExhausted",
    "Record",
    "VerificationReport",
    "congruence_fuzz",
    "exhaustive_campaign",
    "fuzz_campaign",
    "fuzz_generate",
    "random_rewrite",
    "substitution_checks",
    "verify_graph",
    "verify_term",
    "verify_trace",
]

# invariants tested but not claimed; their failures never make a report fail
OUTSIDE_CLAIMS = {"webi-congruence", "pgr-congruence"}


@dataclass
class Record:
    step: int | None
    invariant: str
    ok: bool
    observed: dict
    witness: str | None = None
    seed: object | None = None

    def to_dict(self):
        d = {"step": self.step, "invariant": self.invariant, "ok": self.ok, "observed": self.observed}
        if not self.ok:
            d["witness"] = self.witness
            d["seed"] = self.seed
        return d


@dataclass
class VerificationReport:
    records: list = field(default_factory=list)
    keep_passing: bool = True
    counts: Counter = field(default_factory=Counter)
    failures: Counter = field(default_factory=Counter)

    def add(self, step, invariant, ok, observed, witness=None, seed=None):
        self.counts[invariant] += 1
        if not ok:
            self.failures[invariant] += 1
        if self.keep_passing or not ok:
            self.records.append(Record(step, invariant, bool(ok), observed, witness, seed))
        return ok

    def merge(self, other: VerificationReport):
        self.counts.update(other.counts)
        self.failures.update(other.failures)
        self.records.extend(r for r in other.records if self.keep_passing or not r.ok)
        return self

    @property
    def ok(self):
        return not any(n for inv, n in self.failures.items() if inv not in OUTSIDE_CLAIMS)

    def failing(self):
        return [r for r in self.records if not r.ok]

    def summary(self):
        return {inv: {"checked": n, "failed": self.failures[inv]} for inv, n in sorted(self.counts.items())}

    def to_dict(self):
        return {
            "ok": self.ok,
            "summary": self.summary(),
            "outside_claims": sorted(OUTSIDE_CLAIMS & set(self.counts)),
            "records": [r.to_dict() for r in self.records],
        }


def _text(p):
    return p.key if isinstance(p, CanonicalProcess) else print_process(p)


def _proc(p):
    return p.process() if isinstance(p, CanonicalProcess) else p


# -- per-term and per-step checks ----------------------------------------------


def check_state(rep, i, p, calculus, ic, seed=None):
    """Inequalities that hold for every term, whatever its reductions."""
    t = _proc(p)
    snap = M.snapshot(t, ic if calculus == "eshopi" else None)
    w = _text(p)
    rep.add(i, "wei-ge-size", snap.wei >= snap.size, {"wei": snap.wei, "size": snap.size}, w, seed)
    rep.add(i, "wei-le-poly", snap.wei <= snap.poly_bound,
            {"wei": snap.wei, "poly_bound": snap.poly_bound}, w, seed)
    if calculus == "eshopi":
        rep.add(i, "webi-le-poly", snap.webi <= snap.poly_bound,
                {"webi": snap.webi, "poly_bound": snap.poly_bound}, w, seed)
        rep.add(i, "pgr-le-bd-wei", snap.pgr <= snap.bd * snap.wei,
                {"pgr": snap.pgr, "bd": snap.bd, "wei": snap.wei}, w, seed)
    return snap


def check_step(rep, i, q, p, sq, sp, calculus, ic, seed=None):
    """Invariants relating a state ``q`` to a successor ``p`` (``sq``/``sp`` are their snapshots)."""
    w = f"{_text(q)} --> {_text(p)}"
    wf = check(_proc(p), calculus, ic)
    rep.add(i, "subject-reduction", wf.ok,
            {"failure": wf.failure.to_dict() if wf.failure else None}, w, seed)
    if calculus not in ("shopi", "eshopi"):
        return
    rep.add(i, "df-nonincrease", sq.df >= sp.df, {"before": sq.df, "after": sp.df}, w, seed)
    if calculus == "shopi":
        rep.add(i, "wei-decrease", sq.wei > sp.wei, {"before": sq.wei, "after": sp.wei}, w, seed)
        return
    rep.add(i, "webi-decrease", sq.webi > sp.webi, {"before": sq.webi, "after": sp.webi}, w, seed)
    rep.add(i, "pgr-nonincrease", sq.pgr >= sp.pgr, {"before": sq.pgr, "after": sp.pgr}, w, seed)
    rep.add(i, "wei-pgr-nonincrease", sq.wei + sq.pgr >= sp.wei + sp.pgr,
            {"before": sq.wei + sq.pgr, "after": sp.wei + sp.pgr}, w, seed)


def _bounded(calculus):
    return calculus in ("shopi", "eshopi")


def verify_trace(trace, calculus: str, ic=(), seed=None) -> VerificationReport:
    """Check every step of ``trace``; attaches a metrics snapshot to each step as a side effect."""
    ic = frozenset(ic) if calculus == "eshopi" else frozenset()
    rep = VerificationReport()
    states = trace.states()
    snaps = [check_state(rep, i, s, calculus, ic, seed) for i, s in enumerate(states)]
    for st, sn in zip(trace.steps, snaps):
        st.metrics = sn
    trace.final_metrics = snaps[-1]
    for i in range(len(states) - 1):
        check_step(rep, i, states[i], states[i + 1], snaps[i], snaps[i + 1], calculus, ic, seed)
    if _bounded(calculus):
        root = snaps[0].poly_bound
        w = _text(states[0])
        rep.add(None, "length-le-poly", len(trace.steps) <= root,
                {"length": len(trace.steps), "poly_bound": root}, w, seed)
        biggest = max(s.size for s in snaps)
        rep.add(None, "size-le-poly", biggest <= root, {"max_size": biggest, "poly_bound": root}, w, seed)
    return rep


def verify_graph(graph, calculus: str, ic=(), seed=None, rep=None, substitution=True) -> VerificationReport:
    """Check every state and every edge of an explored state space."""
    ic = frozenset(ic) if calculus == "eshopi" else frozenset()
    rep = rep if rep is not None else VerificationReport(keep_passing=False)
    snaps = [check_state(rep, i, n, calculus, ic, seed) for i, n in enumerate(graph.nodes)]
    for e in graph.edges:
        check_step(rep, e.src, graph.nodes[e.src], graph.nodes[e.dst],
                   snaps[e.src], snaps[e.dst], calculus, ic, seed)
    if substitution and _bounded(calculus):
        for i, n in enumerate(graph.nodes):
            for r in redexes(n):
                substitution_checks(rep, i, n, r, snaps[i].df, seed)
    if _bounded(calculus):
        root = snaps[0].poly_bound
        w = _text(graph.nodes[0])
        longest = graph.longest_path()
        rep.add(None, "length-le-poly", longest is not None and longest <= root,
                {"longest": longest, "poly_bound": root, "truncated": graph.truncated}, w, seed)
        biggest = max(s.size for s in snaps)
        rep.add(None, "size-le-poly", biggest <= root,
                {"max_size": biggest, "poly_bound": root, "truncated": graph.truncated}, w, seed)
    return rep


def verify_term(p, calculus: str, ic=(), node_budget: int = 2000, seed=None, rep=None):
    """Explore ``p`` and check the whole state space; returns ``(report, graph)``."""
    g = explore(p, node_budget)
    return verify_graph(g, calculus, ic, seed, rep), g


# -- substitution lemmas -------------------------------------------------------


_LEMMA = {VarClass.LINEAR: "subst-linear", VarClass.DIES: "subst-dies", VarClass.BANG: "subst-bang"}


def substitution_checks(rep, i, state, redex, n, seed=None):
    """Check the weight bound on the substitution performed by ``redex`` for ``m = n`` and ``m = 1``.

    ``R`` is the receiving body and ``V`` the value that replaces its bound
    variable.  Spawned variables fall outside the three lemmas and are
    skipped.
    """
    c = canonical_form(state)
    if redex.kind.is_comm:
        out, inp = (c.soup[j] for j in redex.location)
        kind, x, body, payload = inp.kind, inp.var, inp.body, out.payload
    else:
        app = c.soup[redex.location[0]]
        kind, x, body, payload = app.fun.kind, app.fun.var, app.fun.body, app.arg
    v = payload.inner if kind is not Kind.LINEAR else payload
    cls = classify(kind, occurrences(x, body), "eshopi" if kind is Kind.SPAWN else "shopi")
    if cls not in _LEMMA:
        return
    base = M.weight_param(body, n)
    wv = M.weight_param(v, n)
    extra = {VarClass.LINEAR: wv, VarClass.DIES: nfo(x, body) * wv, VarClass.BANG: n * wv}[cls]
    result = substitute(body, x, v)
    for m in sorted({n, 1}):
        lhs = M.weight_param(result, m)
        rep.add(i, _LEMMA[cls], lhs <= base + extra,
                {"m": m, "n": n, "lhs": lhs, "rhs": base + extra, "redex": redex.kind.value},
                f"{c.key} @ {redex.location}", seed)


# -- congruence ----------------------------------------------------------------


def random_rewrite(p, rng):
    """One random congruence rewrite somewhere in ``p`` (identity when nothing applies)."""
    sites = []

    def collect(t, path):
        sites.append(path)
        for k, ch in enumerate(children(t)):
            collect(ch, path + (k,))
    collect(p, ())
    rng.shuffle(sites)

    def at(t, path):
        for k in path:
            t = children(t)[k]
        return t

    def rebuild(t, path, new):
        if not path:
            return new
        k, rest = path[0], path[1:]
        kids = list(children(t))
        kids[k] = rebuild(kids[k], rest, new)
        return _with_children(t, kids)

    for path in sites:
        t = at(p, path)
        options = []
        if isinstance(t, Par):
            options.append(Par(t.right, t.left))
            if isinstance(t.left, Par):
                options.append(Par(t.left.left, Par(t.left.right, t.right)))
            if isinstance(t.right, Par):
                options.append(Par(Par(t.left, t.right.left), t.right.right))
            if isinstance(t.left, Restrict) and t.left.chan not in free_channels(t.right):
                options.append(Restrict(t.left.chan, Par(t.left.body, t.right)))
            if isinstance(t.right, Restrict) and t.right.chan not in free_channels(t.left):
                options.append(Restrict(t.right.chan, Par(t.left, t.right.body)))
        if isinstance(t, Restrict):
            if isinstance(t.body, Restrict):
                options.append(Restrict(t.body.chan, Restrict(t.chan, t.body.body)))
            if isinstance(t.body, Par):
                l, r = t.body.left, t.body.right
                if t.chan not in free_channels(r):
                    options.append(Par(Restrict(t.chan, l), r))
                if t.chan not in free_channels(l):
                    options.append(Par(l, Restrict(t.chan, r)))
            new = fresh_name(t.chan + "r", all_names(t))
            options.append(Restrict(new, rename_channel(t.body, t.chan, new)))
        if isinstance(t, (Input, Abs)):
            new = fresh_name(t.var + "r", all_names(t) | free_vars(t))
            body = substitute(t.body, t.var, Var(new))
            options.append(Input(t.chan, t.kind, new, body) if isinstance(t, Input)
                           else Abs(t.kind, new, body))
        if options:
            return rebuild(p, path, rng.choice(options))
    return p


def _with_children(t, kids):
    match t:
        case Par():
            return Par(*kids)
        case Input(a, k, x, _):
            return Input(a, k, x, kids[0])
        case Output(a, _, _):
            return Output(a, kids[0], kids[1])
        case Restrict(a, _):
            return Restrict(a, kids[0])
        case App():
            return App(*kids)
        case Abs(k, x, _):
            return Abs(k, x, kids[0])
        case Box(k, _):
            return Box(k, kids[0])
    raise TypeError(f"{t!r} has no children")


def congruence_fuzz(p, rewrite_count: int = 100, seed=0, ic=()) -> VerificationReport:
    """Apply random congruence rewrites to ``p`` and compare every metric with the original."""
    rng = random.Random(seed)
    rep = VerificationReport(keep_passing=False)
    ref = M.snapshot(p, ic)
    ref_w = [M.weight_param(p, n) for n in range(1, 6)]
    ref_webi = [M.webi_param(p, n, ic) for n in range(1, 6)]
    ref_pgr = [M.pgr_param(p, n, ic) for n in range(1, 6)]
    q = p
    for i in range(rewrite_count):
        q = random_rewrite(q, rng)
        w = f"{print_process(p)} ~ {print_process(q)}"
        rep.add(i, "congruent", congruent(p, q), {}, w, seed)
        snap = M.snapshot(q, ic)
        for key in ("size", "bd", "df"):
            a, b = getattr(ref, key), getattr(snap, key)
            rep.add(i, f"{key}-congruence", a == b, {"original": a, "rewritten": b}, w, seed)
        ws = [M.weight_param(q, n) for n in range(1, 6)]
        rep.add(i, "wgt-congruence", ws == ref_w, {"original": ref_w, "rewritten": ws}, w, seed)
        webis = [M.webi_param(q, n, ic) for n in range(1, 6)]
        rep.add(i, "webi-congruence", webis == ref_webi, {"original": ref_webi, "rewritten": webis}, w, seed)
        pgrs = [M.pgr_param(q, n, ic) for n in range(1, 6)]
        rep.add(i, "pgr-congruence", pgrs == ref_pgr, {"original": ref_pgr, "rewritten": pgrs}, w, seed)
    return rep


# -- campaigns -----------------------------------------------------------------


@dataclass
class CampaignResult:
    """Outcome of checking a whole family of terms."""

    name: str
    report: VerificationReport
    terms: int = 0
    total: int | None = None  # size of the family, when known
    complete_through: int = 0  # every term up to this size was covered
    wellformed: Counter = field(default_factory=Counter)
    oracle_checked: int = 0
    oracle_disagreements: list = field(default_factory=list)
    truncated: int = 0
    finished: bool = True
    elapsed: float = 0.0

    @property
    def covered_all(self):
        return self.finished and (self.total is None or self.terms == self.total)

    def to_dict(self):
        return {
            "name": self.name,
            "terms": self.terms,
            "total": self.total,
            "complete_through": self.complete_through,
            "finished": self.finished,
            "wellformed": dict(self.wellformed),
            "oracle_checked": self.oracle_checked,
            "oracle_disagreements": self.oracle_disagreements[:20],
            "truncated_graphs": self.truncated,
            "elapsed": round(self.elapsed, 2),
            "report": {"ok": self.report.ok, "summary": self.report.summary()},
        }


def _examine(res, p, calculi, ic, node_budget, oracle, seed=None):
    for c in calculi:
        cic = ic if c == "eshopi" else frozenset()
        ok = check(p, c, cic).ok
        if oracle:
            res.oracle_checked += 1
            if derivable(p, c, cic) != ok:
                res.oracle_disagreements.append({"calculus": c, "term": print_process(p), "checker": ok})
        if ok:
            res.wellformed[c] += 1
            _, g = verify_term(p, c, cic, node_budget=node_budget, seed=seed, rep=res.report)
            res.truncated += g.truncated


def exhaustive_campaign(grammar, max_size, calculi, ic=frozenset({"b"}), time_budget=None,
                        node_budget=200, oracle=True) -> CampaignResult:
    """Check every closed term of ``grammar`` with at most ``max_size`` nodes, smallest first.

    Each term is checked in each of ``calculi``; accepted terms have their
    whole state space verified.  With a ``time_budget`` (seconds) the
    enumeration stops early and the result records how far it got.
    """
    start = time.monotonic()
    res = CampaignResult(f"exhaustive-{grammar}", VerificationReport(keep_passing=False))
    res.total = sum(count_closed(grammar, max_size))
    enum = Enumerator(grammar)
    ic = frozenset(ic)
    for n in range(1, max_size + 1):
        for p in enum.procs(n):
            if time_budget is not None and time.monotonic() - start > time_budget:
                res.finished = False
                res.elapsed = time.monotonic() - start
                return res
            res.terms += 1
            _examine(res, p, calculi, ic, node_budget, oracle)
        res.complete_through = n
    res.elapsed = time.monotonic() - start
    return res


def fuzz_campaign(calculus, count=1000, max_size=40, ic=frozenset({"b"}), seed=0,
                  node_budget=2000, oracle=False) -> CampaignResult:
    """Verify ``count`` generated terms of ``calculus`` with sizes cycling through ``1..max_size``."""
    start = time.monotonic()
    ic = frozenset(ic) if calculus == "eshopi" else frozenset()
    res = CampaignResult(f"fuzz-{calculus}", VerificationReport(keep_passing=False), total=count)
    for k in range(count):
        s = seed + k
        p = fuzz_generate(s, 1 + k % max_size, calculus, ic)
        res.terms += 1
        _examine(res, p, [calculus], ic, node_budget, oracle, seed=s)
    res.complete_through = max_size
    res.elapsed = time.monotonic() - start
    return res
