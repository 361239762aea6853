"""Why OMEGA diverges, and why the soft discipline refuses its translation.

Run with ``python demos/01_divergence.py``.
"""

from softpi.corpus import OMEGA, OMEGA_BANG
from softpi.embed import check_simulation, embed_process
from softpi.metrics import snapshot
from softpi.parser import print_process
from softpi.reduction import canonical_form, explore, run
from softpi.wellformed import check_hopi, check_lhopi, check_shopi

print("OMEGA =", print_process(OMEGA))
print("well formed in HOpi:", check_hopi(OMEGA).ok)

# A few steps of the first-redex strategy.  Each round trip leaves one more
# 0 behind (a consumed output), so states never repeat up to congruence.
trace = run(OMEGA, "first", max_steps=6)
for i, s in enumerate(trace.states()):
    print(f"  {i}: {print_process(s)}")
print("exhausted after 6 steps?", trace.exhausted)

g = explore(OMEGA, node_budget=30)
print(f"state space within 30 states: {len(g.nodes)} states, truncated={g.truncated}")

# The embedding boxes every value and makes every binder duplicable.
image = embed_process(OMEGA)
print("\nembedded:", print_process(image))
print("LHOpi:", check_lhopi(image).ok, " matches OMEGA_! up to alpha:",
      canonical_form(image).key == canonical_form(OMEGA_BANG).key)
print("simulation to depth 5:", check_simulation(OMEGA, 5).ok)

# The soft checker pinpoints the variable used at two different depths.
r = check_shopi(OMEGA_BANG)
print("\nSHOpi:", r.ok, "at", r.failure.site)
print("  ", r.failure.reason)
print("metrics of OMEGA_!:", snapshot(OMEGA_BANG).to_dict())
