"""
Realizing the free algebra by vector fields
===========================================

``X_1 = d/dx_1`` and ``X_2 = d/dx_2 + sum p_j d/dx_j``; brackets of these
two fields realize the whole Hall basis, and reading the brackets back
gives integral structure constants.
"""
# %%
from carnotcr.realize import free_algebra, left_invariant_fields, constants_of_fields, realize

R = realize(3)
for k, X in enumerate(R.fields, start=1):
    print(f"X_{k} =", X.format())

# %%
alg = free_algebra(5)
for (i, j), terms in list(alg.constants.table.items())[:8]:
    print(f"[X_{i}, X_{j}] =", " + ".join(f"{c}*X_{k}" for k, c in terms))
print("Jacobi violations:", alg.constants.jacobi_violations())

# %%
# Left-invariant fields in exponential coordinates are rebuilt from the
# constants alone and bracket back to the same constants.
fields = left_invariant_fields(free_algebra(3))
for k, X in enumerate(fields, start=1):
    print(f"L_{k} =", X.format())
print(constants_of_fields(fields, free_algebra(3)) == free_algebra(3).constants)
