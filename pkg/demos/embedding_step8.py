"""
Embedding equations up to step 8
================================

For each index ``j`` we solve ``X_1 q_j = -p_j`` and ``X_2 q_j = 0`` with
``q_j = c_j x_1 p_j + r_j``. The unknown ``r_j`` is a combination of the
linear coordinates of the same height and of squares of half height.
"""
# %%
from carnotcr.embed import emit_surface, solve_embedding, verify_solution

sol = solve_embedding(3)
for e in sol.entries:
    print(f"q_{e.j} =", e.q)
print(emit_surface(sol).latex())

# %%
# Square terms are needed from step 6 on.
for step in range(2, 9):
    sol = solve_embedding(step)
    squares = [(e.j, str(e.r)) for e in sol.entries
               if any(len(m) == 1 and m[0][1] == 2 for m in e.r.terms)]
    print(step, verify_solution(sol).ok, squares)
