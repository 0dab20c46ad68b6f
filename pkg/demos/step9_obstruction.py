"""
The step-9 obstruction
======================

At step 9 the linear-plus-squares ansatz no longer suffices. For the index
with vector ``(2,1,2,4,5)`` every solution over the full space of weighted
homogeneous polynomials carries the same nonzero ``x_4^2 x_5`` term.
"""
# %%
from carnotcr.embed import solve_embedding, step9_certificate, verify_solution

print(step9_certificate().summary())

# %%
# The restricted ansatz fails at two neighbouring indices.
sol = solve_embedding(9, "restricted")
print([(e.j, e.vector) for e in sol.infeasible])

# %%
# Over the full space every index is solvable at step 9.
full = solve_embedding(9, "full")
print("full ansatz feasible everywhere:", full.ok, "verified:", verify_solution(full).ok)
