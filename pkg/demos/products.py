"""
Products and permutations
=========================

Automorphisms of a product of isomorphic factors permute the factors.
We build ``I^sigma`` on three copies of ``H^1`` and split composites back
into a permutation and per-factor automorphisms.
"""
# %%
import random

from carnotcr import stratified as st

H = st.heisenberg(1)
ds = st.direct_sum([H, H, H])
print(ds.algebra, ds.blocks)

# %%
rng = random.Random(1)
blocks = [st.extend_heisenberg_automorphism(st.random_symplectic_similitude(rng, 1)) for _ in range(3)]
T = st.perm_automorphism((2, 0, 1), ds) @ ds.product_map(blocks)
sigma, found = st.decompose_product_automorphism(T, ds)
print(sigma, found == blocks)
