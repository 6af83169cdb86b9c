"""Critical Ising / spanning-tree correspondence on finite isoradial graphs.

The package builds, for a finite isoradial graph G, the whole chain of
objects relating the critical Ising partition function on G to weighted
spanning trees of the extended graph -- the bipartite quadri-tiling graph,
its Kasteleyn matrix, the rooted directed graphs whose oriented spanning
trees the dimers count, the extended double graph, and the extended
primal/dual pair -- and verifies every identity along the chain with exact
brute-force oracles on small instances.
"""

__version__ = "0.1.0"
