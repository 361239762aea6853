"""A spawning server in eSHOpi: every step pays with weight-before-input.

Run with ``python demos/02_soft_server.py``.
"""

from softpi.corpus import SERVER_BOX
from softpi.metrics import snapshot
from softpi.parser import print_process
from softpi.reduction import explore, run
from softpi.verifier import verify_term, verify_trace
from softpi.wellformed import check_eshopi

IC = {"b"}
print("SERVER_box =", print_process(SERVER_BOX))

wf = check_eshopi(SERVER_BOX, IC)
print("eSHOpi({b}):", wf.ok)
for site, cls in wf.classifications.items():
    print(f"  {site:18} {cls.value}")
print("and without b as an input channel:", check_eshopi(SERVER_BOX, set()).failure.reason)

trace = run(SERVER_BOX, "first")
rep = verify_trace(trace, "eshopi", IC)
print(f"\nfirst-redex run: {len(trace.steps)} steps, invariants ok: {rep.ok}")
print("   step  webi  pgr  wei  size")
for i, s in enumerate(trace.states()):
    m = snapshot(s, IC)
    print(f"   {i:4}  {m.webi:4} {m.pgr:4} {m.wei:4} {m.size:5}")

m0 = snapshot(SERVER_BOX, IC)
g = explore(SERVER_BOX)
print(f"\nwhole state space: {len(g.nodes)} states, longest run {g.longest_path()}, "
      f"polynomial bound size^(bd+1) = {m0.poly_bound}")
rep, _ = verify_term(SERVER_BOX, "eshopi", IC)
print("every state and edge verified:", rep.ok)
for inv, c in rep.summary().items():
    print(f"  {inv:22} {c['checked']:5} checked, {c['failed']} failed")
