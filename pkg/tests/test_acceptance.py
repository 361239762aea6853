"""Acceptance criteria, one test each, at their stated tolerances.

A one-line PASS/FAIL verdict per criterion is printed at the end of the run.
Criteria 4 to 7 share one module-scoped campaign: every calculus is fuzzed
with 1000 terms of size at most 40, then the closed terms of node count at
most 12 are streamed smallest first until the time budget runs out
(``SOFTPI_ACCEPTANCE_BUDGET`` seconds, 300 by default).
"""

import os
import time
from pathlib import Path

import pytest
from conftest import ACCEPTANCE

from softpi.corpus import OMEGA, OMEGA_BANG, SERVER, SERVER_BANG, SERVER_BOX
from softpi.embed import check_simulation, embed_process
from softpi.parser import load
from softpi.parser import parse_process as P
from softpi.reduction import canonical_form, congruent, explore
from softpi.verifier import congruence_fuzz, exhaustive_campaign, fuzz_campaign
from softpi.wellformed import check, check_eshopi, check_hopi, check_lhopi, check_shopi

CORPUS = Path(__file__).resolve().parent.parent / "corpus"
BUDGET = float(os.environ.get("SOFTPI_ACCEPTANCE_BUDGET", 300))
MAX_NODES = 12
FUZZ_COUNT, FUZZ_SIZE = 1000, 40


def verdict(k, ok, line):
    ACCEPTANCE[k] = (bool(ok), line)
    assert ok, line


# -- 1 ---------------------------------------------------------------------------


def test_criterion_1_omega_two_cycle():
    t = time.monotonic()
    g = explore(OMEGA, node_budget=50)
    dt = time.monotonic() - t
    out_degree = [len(g.successors_of(i)) for i in range(len(g.nodes))]
    two_cycle = len(g.nodes) == 2 and not g.truncated and out_degree == [1, 1] and g.has_cycle()
    verdict(1, two_cycle and dt < 1.0,
            f"explore(OMEGA): {len(g.nodes)} states, truncated={g.truncated}, "
            f"cycle={g.has_cycle()}, {dt:.2f}s (expected exactly 2 states forming a cycle)")


# -- 2 ---------------------------------------------------------------------------


def test_criterion_2_classification_matrix():
    rows = {
        "OMEGA in HOpi": check_hopi(OMEGA).ok,
        "OMEGA_! in LHOpi": check_lhopi(OMEGA_BANG).ok,
        "SERVER_! in LHOpi": check_lhopi(SERVER_BANG).ok,
        "SERVER_box in eSHOpi({b})": check_eshopi(SERVER_BOX, {"b"}).ok,
    }
    for name, p in (("OMEGA_!", OMEGA_BANG), ("SERVER_!", SERVER_BANG)):
        r = check_shopi(p)
        rows[f"{name} not in SHOpi, localised"] = (
            not r.ok and r.failure.site.startswith("x@")
            and "depth 0" in r.failure.reason and "depth 1" in r.failure.reason)
    r = check(P("b<*>.0"), "eshopi", {"b"})
    rows["output on IC channel rejected"] = not r.ok and r.failure.kind == "output-on-input-channel"
    bad = [k for k, ok in rows.items() if not ok]
    verdict(2, not bad, f"{len(rows) - len(bad)}/{len(rows)} rows reproduced" + (f"; wrong: {bad}" if bad else ""))


# -- 3 ---------------------------------------------------------------------------


def test_criterion_3_embedding():
    t = time.monotonic()
    alpha = {
        "SERVER": canonical_form(embed_process(SERVER)).key == canonical_form(SERVER_BANG).key,
        "OMEGA": canonical_form(embed_process(OMEGA)).key == canonical_form(OMEGA_BANG).key,
    }
    sims = {n: check_simulation(p, 5) for n, p in (("SERVER", SERVER), ("OMEGA", OMEGA))}
    dt = time.monotonic() - t
    ok = all(alpha.values()) and all(s.ok for s in sims.values()) and dt < 5.0
    detail = ", ".join(f"{n}: alpha={alpha[n]} sim edges={s.edges_checked} ok={s.ok}" for n, s in sims.items())
    verdict(3, ok, f"{detail}; {dt:.2f}s")


# -- 4 to 7: shared campaign --------------------------------------------------------


@pytest.fixture(scope="module")
def campaign():
    start = time.monotonic()
    fuzz = {c: fuzz_campaign(c, FUZZ_COUNT, FUZZ_SIZE, ic={"b"}) for c in ("hopi", "lhopi", "shopi", "eshopi")}
    left = max(BUDGET - (time.monotonic() - start), 0.0)
    plan = [("hopi", ["hopi"], 0.2), ("shopi", ["lhopi", "shopi"], 0.4), ("eshopi", ["eshopi"], 0.4)]
    exhaustive = {g: exhaustive_campaign(g, MAX_NODES, cs, ic={"b"}, time_budget=left * share)
                  for g, cs, share in plan}
    return fuzz, exhaustive, time.monotonic() - start


def _coverage(exhaustive, grammars):
    parts = [f"{g}: {exhaustive[g].terms:,} of {exhaustive[g].total:,} (complete through node count "
             f"{exhaustive[g].complete_through})" for g in grammars]
    return all(exhaustive[g].covered_all for g in grammars), "; ".join(parts)


def _violations(results, invariants):
    checked = failed = 0
    for res in results:
        for inv in invariants:
            checked += res.report.counts[inv]
            failed += res.report.failures[inv]
    return checked, failed


INVARIANTS_4 = ["subject-reduction", "df-nonincrease", "wei-decrease", "wei-ge-size", "wei-le-poly",
                "webi-decrease", "pgr-nonincrease", "wei-pgr-nonincrease", "webi-le-poly", "pgr-le-bd-wei"]


@pytest.mark.slow
def test_criterion_4_invariant_suite(campaign):
    fuzz, exhaustive, elapsed = campaign
    checked, failed = _violations([*fuzz.values(), *exhaustive.values()], INVARIANTS_4)
    fuzz_ok = all(r.covered_all and r.report.ok for r in fuzz.values())
    covered, cov = _coverage(exhaustive, ["hopi", "shopi", "eshopi"])
    ok = failed == 0 and fuzz_ok and covered and elapsed < 300
    verdict(4, ok, f"{checked:,} invariant checks, {failed} violations; fuzz {FUZZ_COUNT}/calculus "
                   f"ok={fuzz_ok}; exhaustive {cov}; {elapsed:.0f}s")


@pytest.mark.slow
def test_criterion_5_polynomial_bounds(campaign):
    fuzz, exhaustive, _ = campaign
    results = [fuzz["shopi"], fuzz["eshopi"], exhaustive["shopi"], exhaustive["eshopi"]]
    checked, failed = _violations(results, ["length-le-poly", "size-le-poly"])
    truncated = sum(r.truncated for r in results)
    covered, cov = _coverage(exhaustive, ["shopi", "eshopi"])
    verdict(5, failed == 0 and truncated == 0 and covered,
            f"{checked:,} bound checks, {failed} violations, {truncated} truncated state spaces; {cov}")


@pytest.mark.slow
def test_criterion_6_substitution_lemmas(campaign):
    fuzz, exhaustive, _ = campaign
    results = [fuzz["shopi"], fuzz["eshopi"], exhaustive["shopi"], exhaustive["eshopi"]]
    checked, failed = _violations(results, ["subst-linear", "subst-dies", "subst-bang"])
    covered, cov = _coverage(exhaustive, ["shopi", "eshopi"])
    verdict(6, failed == 0 and checked > 0 and covered,
            f"{checked:,} substitution checks, {failed} violations; {cov}")


@pytest.mark.slow
def test_criterion_7_oracle_equivalence(campaign):
    _, exhaustive, _ = campaign
    checked = sum(r.oracle_checked for r in exhaustive.values())
    bad = [d for r in exhaustive.values() for d in r.oracle_disagreements]
    covered, cov = _coverage(exhaustive, ["hopi", "shopi", "eshopi"])
    verdict(7, not bad and covered,
            f"{checked:,} checker/rule-search comparisons, {len(bad)} disagreements; {cov}")


# -- 8 ---------------------------------------------------------------------------


def test_criterion_8_congruence_soundness():
    files = sorted(CORPUS.glob("*.pi"))
    failed, checked = [], 0
    for f in files:
        rep = congruence_fuzz(load(f), 100, seed=0, ic={"b"})
        checked += sum(rep.counts.values())
        if not rep.ok:
            failed.append(f.name)
    p = P("a<*>.0")
    par_nil = not congruent(P("a<*>.0 | 0"), p) and not congruent(P("0 | 0"), P("0"))
    verdict(8, not failed and par_nil,
            f"{len(files)} corpus terms x 100 rewrites, {checked:,} checks, failing: {failed or 'none'}; "
            f"P|0 vs P non-congruent: {par_nil}")
