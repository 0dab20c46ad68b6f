"""
Hall monomials up to step 8
===========================

Every non-generator of the Hall basis unfolds into a left-normed bracket
recorded as a vector ``(2, 1, i_2, ..)``. The counts of its entries give a
multi-index ``I`` and the realizing monomial ``p = (-1)^d / I! x^I``.
"""
# %%
from carnotcr.hall import generate_hall_basis, hall_latex, hall_text

print(hall_text(4))

# %%
# Stratum sizes follow the necklace count of binary words.
basis = generate_hall_basis(9)
print("strata dims:", basis.strata_dims(), "total", basis.dim)

# %%
# The same data laid out as a LaTeX table, one row per step.
print(hall_latex(5))
