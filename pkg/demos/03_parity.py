# %% [markdown]
# # Parity arguments: bowtie degrees and Sperner colorings
#
# Both unsolvability proofs rest on a parity fact.  Facets of the corner
# collections have 0 or 2 bowtie neighbours, except the corner facet which
# has exactly one, so the graph cannot be closed up.  Sperner's lemma is the
# same count on a colored subdivision.

# %%
import random
from collections import Counter

from epimu.obstruction import BowtieGraph, random_sperner_coloring, sperner_odd_count

rng = random.Random(1)
for m in (1, 2):
    G = BowtieGraph(2, m, 2)
    degrees = Counter()
    for _ in range(200):
        lab = G.random_labelling(rng)
        deg = G.degrees(lab)
        prof = G.profiles(lab)
        degrees.update(deg[i] for i in range(len(G.facets))
                       if i != G.sigma0 and G.admissible(prof[i], i))
    print(f"m={m}: {len(G.facets)} facets, degree histogram of admissible facets {dict(degrees)}")

# %% [markdown]
# Fully colored facets under random Sperner colorings of the twice
# subdivided triangle: always an odd number.

# %%
counts = Counter(sperner_odd_count(2, 2, random_sperner_coloring(2, 2, rng)) for _ in range(100))
print(sorted(counts.items()))
