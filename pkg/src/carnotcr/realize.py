"""Polynomial vector-field realizations of nilpotent Lie algebras.

Two realizations live here. :func:`realize` builds the free algebra
``f_{2,s}`` from the Hall monomials, with ``X_1 = d/dx_1`` and
``X_2 = d/dx_2 + sum_j p_j d/dx_j``. :func:`left_invariant_fields` builds
the left-invariant fields of an arbitrary stratified algebra in
exponential coordinates of the first kind, using the series of
``z / (1 - exp(-z))``. The two use unrelated coordinates; they meet only
through structure constants.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .algebra import StratifiedAlgebra, StructureConstants
from .exactcore import Infeasible, RatMatrix, solve_affine
from .hall import HallBasis, check_step, generate_hall_basis
from .poly import Poly, PolyRing, VField, vf_bracket


class ExpansionFailure(RuntimeError):
    """A bracket of realized fields is not in the span of the basis fields."""


@dataclass(frozen=True)
class FreeRealization:
    step: int
    basis: HallBasis
    fields: tuple  # fields[i-1] realizes X_i

    @property
    def ring(self) -> PolyRing:
        return self.basis.ring

    def field(self, i: int) -> VField:
        return self.fields[i - 1]


def generator_fields(basis: HallBasis) -> tuple[VField, VField]:
    ring = basis.ring
    x1 = VField.coordinate(ring, 1)
    coeffs = {2: ring.one()}
    for e in basis.elements[2:]:
        coeffs[e.index] = e.monomial
    return x1, VField(ring, coeffs)


@lru_cache(maxsize=None)
def realize(step: int) -> FreeRealization:
    check_step(step)
    basis = generate_hall_basis(step)
    x1, x2 = generator_fields(basis)
    fields = [x1, x2]
    for e in basis.elements[2:]:
        fields.append(vf_bracket(fields[e.left - 1], fields[e.right - 1]))
    return FreeRealization(step, basis, tuple(fields))


def express(target: VField, fields: Sequence[VField], indices: Sequence[int]) -> list[tuple[int, Fraction]]:
    """Write ``target`` as a constant combination of ``fields``.

    The coefficients are read from a linear system on the values at the
    origin; the full polynomial identity is then checked. Falls back to
    matching every polynomial coefficient if the origin values are not
    independent.
    """
    if target.is_zero():
        return []
    if not fields:
        raise ExpansionFailure("nonzero bracket with no candidate fields")
    cols = [f.at_origin() for f in fields]
    A = RatMatrix.from_columns(cols)
    try:
        coeffs, null = solve_affine(A, target.at_origin())
    except Infeasible:
        null, coeffs = None, None
    if coeffs is None or null:
        coeffs = _express_full(target, fields)
    total = VField(target.ring, {})
    for a, f in zip(coeffs, fields):
        if a:
            total = total + f.scale(a)
    if total != target:
        raise ExpansionFailure("bracket is not a constant combination of the basis fields")
    return [(k, a) for k, a in zip(indices, coeffs) if a]


def _express_full(target: VField, fields: Sequence[VField]) -> list:
    keys = set()
    for f in list(fields) + [target]:
        for k, p in f.items():
            keys.update((k, m) for m in p.terms)
    keys = sorted(keys, key=lambda km: (km[0], target.ring.sort_key(km[1])))
    rows = [[f.coeff(k).coeff(m) for f in fields] for k, m in keys]
    rhs = [target.coeff(k).coeff(m) for k, m in keys]
    try:
        coeffs, _ = solve_affine(RatMatrix.from_rows(rows), rhs)
    except Infeasible as exc:
        raise ExpansionFailure("bracket is not in the span of the basis fields") from exc
    return coeffs


def _constants_from_fields(fields: Sequence[VField], heights: Sequence[int], top: int) -> StructureConstants:
    n = len(fields)
    by_height: dict[int, list[int]] = {}
    for k, h in enumerate(heights, start=1):
        by_height.setdefault(h, []).append(k)
    table = {}
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            h = heights[i - 1] + heights[j - 1]
            b = vf_bracket(fields[i - 1], fields[j - 1])
            if h > top:
                if not b.is_zero():
                    raise ExpansionFailure(f"[X_{i}, X_{j}] should vanish above step {top}")
                continue
            idx = by_height.get(h, [])
            terms = express(b, [fields[k - 1] for k in idx], idx)
            if terms:
                table[(i, j)] = terms
    return StructureConstants(n, tuple(heights), table)


@lru_cache(maxsize=None)
def _free_constants(step: int) -> StructureConstants:
    R = realize(step)
    return _constants_from_fields(R.fields, R.basis.heights, step)


def structure_constants(R: FreeRealization) -> StructureConstants:
    """Exact structure constants of the realized free algebra, in the Hall basis."""
    return _free_constants(R.step)


def free_algebra(step: int) -> StratifiedAlgebra:
    """``f_{2,s}`` as an abstract stratified algebra in the Hall basis."""
    return StratifiedAlgebra(structure_constants(realize(step)), name=f"f_2,{step}")


def bch_coefficients(K: int) -> list[Fraction]:
    """Taylor coefficients ``c_0..c_K`` of ``z / (1 - exp(-z))``.

    From ``(sum (-1)^i/(i+1)! z^i) (sum c_k z^k) = 1``.
    """
    if K < 0:
        raise ValueError("K must be nonnegative")
    a = [Fraction((-1) ** i, math.factorial(i + 1)) for i in range(K + 1)]
    c = [Fraction(1)]
    for k in range(1, K + 1):
        c.append(-sum(a[i] * c[k - i] for i in range(1, k + 1)))
    return c


def left_invariant_fields(alg: StratifiedAlgebra) -> list[VField]:
    """Left-invariant fields in exponential coordinates of the first kind.

    The basis is taken orthonormal, so the ``d/du_j`` coefficient of the
    field of ``T`` is the ``j``-th coordinate of ``sum_k c_k ad(Y)^k T``,
    where ``Y = sum_l u_l U_l``. ``ad(Y)`` is nilpotent of order at most the
    step, so the series is truncated there.
    """
    sc = alg.constants
    n = sc.dim
    ring = PolyRing(sc.stratum_of)
    u = [ring.var(k) for k in range(1, n + 1)]
    c = bch_coefficients(alg.step)

    def ad_Y(vec: list[Poly]) -> list[Poly]:
        out = [ring.zero()] * n
        for (i, j), terms in sc.table.items():
            # [u_i e_i, v_j e_j] + [u_j e_j, v_i e_i]
            coef = u[i - 1] * vec[j - 1] - u[j - 1] * vec[i - 1]
            if coef:
                for k, cc in terms:
                    out[k - 1] = out[k - 1] + coef * cc
        return out

    fields = []
    for t in range(1, n + 1):
        term = [ring.one() if k == t else ring.zero() for k in range(1, n + 1)]
        acc = list(term)
        for k in range(1, alg.step + 1):
            term = ad_Y(term)
            if all(p.is_zero() for p in term):
                break
            if c[k]:
                acc = [a + p * c[k] for a, p in zip(acc, term)]
        fields.append(VField(ring, {k + 1: p for k, p in enumerate(acc)}))
    return fields


def constants_of_fields(fields: Sequence[VField], alg: StratifiedAlgebra) -> StructureConstants:
    """Structure constants read back from fields realizing ``alg``'s basis."""
    return _constants_from_fields(fields, alg.constants.stratum_of, alg.step)


def bracket_word(R: FreeRealization, word: Sequence[int]) -> VField:
    """Left-normed bracket ``[..[[X_{w1}, X_{w2}], X_{w3}], ..]`` of generator fields."""
    f = R.field(word[0])
    for w in word[1:]:
        f = vf_bracket(f, R.field(w))
    return f
