"""Stress the invariants on generated terms and on a complete small enumeration.

Run with ``python demos/03_campaign.py [count]``.
"""

import sys

from softpi.fuzz import fuzz_generate
from softpi.parser import print_process
from softpi.verifier import exhaustive_campaign, fuzz_campaign

count = int(sys.argv[1]) if len(sys.argv) > 1 else 200

print("a generated SHOpi term of size 20:")
print("  ", print_process(fuzz_generate(3, 20, "shopi")))

for calc in ("hopi", "lhopi", "shopi", "eshopi"):
    res = fuzz_campaign(calc, count=count, max_size=40, ic={"b"})
    steps = res.report.counts["subject-reduction"]
    print(f"fuzz {calc:7} {res.terms} terms, {steps} reduction edges, ok={res.report.ok}, "
          f"{res.elapsed:.1f}s")

res = exhaustive_campaign("shopi", 5, ["lhopi", "shopi"])
print(f"\nevery closed term of node count <= 5 in the SHOpi grammar: {res.terms} terms")
print(f"  accepted: {dict(res.wellformed)}; oracle disagreements: {len(res.oracle_disagreements)}; "
      f"invariants ok: {res.report.ok}")
