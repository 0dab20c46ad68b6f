"""
Conformal, CR and anti-CR automorphisms
=======================================

On a tight algebra a strata-preserving automorphism is conformal on the
first stratum exactly when it commutes or anticommutes with ``J``.
"""
# %%
import random

from carnotcr import stratified as st
from carnotcr.exactcore import RatMatrix

rng = random.Random(0)
J = st.standard_J(4)
for _ in range(6):
    A = st.random_symplectic_similitude(rng, 2)
    print(st.is_conformal(A)[0], st.is_cr(A, J), st.is_anti_cr(A, J), round(st.distortion(A).value, 6))

# %%
# A reflection anticommutes with J; a shear does neither and is distorted.
J2 = st.standard_J(2)
for name, T in [("reflection", RatMatrix.diag([1, -1])), ("shear", RatMatrix.from_rows([[1, 1], [0, 1]]))]:
    print(name, st.is_cr(T, J2), st.is_anti_cr(T, J2), st.distortion(T).value)

# %%
print(st.is_tight(st.heisenberg(2)), st.is_tight(st.direct_sum([st.heisenberg(1)] * 2).algebra))
