# %% [markdown]
# # Set agreement after one round of immediate snapshot
#
# A decision map assigns a value to every (process, view) vertex of the
# protocol complex.  The search below either finds one that lands every
# execution on a legal set-agreement outcome or proves none exists.

# %%
import time

from epimu import formulas as F
from epimu.logic import valid
from epimu.models import protocol_model_iis, pullback, task_model_sak
from epimu.obstruction import witness_path
from epimu.solvability import SearchStats, decide_by, knowledge_gain_check, search_morphism

for n, k, m in [(1, 1, 1), (1, 2, 1), (2, 1, 1), (2, 2, 1), (2, 3, 1)]:
    P, T = protocol_model_iis(n, m), task_model_sak(n, k)
    stats = SearchStats()
    t = time.perf_counter()
    delta = search_morphism(P, T, stats=stats)
    verdict = "solvable" if delta else "unsolvable"
    print(f"n={n} k={k} m={m}: {verdict:10s} {stats.nodes:4d} nodes {time.perf_counter() - t:.2f}s")

# %% [markdown]
# When a map exists, every formula true at an image state is already true
# at the protocol state: knowledge only flows forward.

# %%
P = protocol_model_iis(2, 1)
delta = search_morphism(P, task_model_sak(2, 3))
print({name: knowledge_gain_check(delta, F.named(name, 2, 3)) for name in F.NAMED})
print("fixpoint formula valid on the pull-back:", valid(pullback(P, delta), F.phi(2, 3)))

# %% [markdown]
# For k <= n any candidate fails somewhere.  Walking the bowtie path from
# the all-zero corner shows where: here a facet that decides too many values.

# %%
P = protocol_model_iis(2, 1)
cand = decide_by(P, task_model_sak(2, 2), lambda v, dom: max(dom))
report = witness_path(pullback(P, cand), 2, 1)
print(report.mode, "-", report.detail)
for s, A in zip(report.path, report.groups + [None]):
    print("  ", s, "" if A is None else f"--{sorted(A)}-->")
