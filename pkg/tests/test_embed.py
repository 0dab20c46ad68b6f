import math
from collections import Counter
from fractions import Fraction

import pytest
import sympy

from carnotcr.embed import (Ansatz, EmbeddingSolution, SpanKind, emit_surface, leading_coefficient, lemma42_table,
                            lemma43_table, residual, solve_embedding, solve_index, span_violations,
                            step9_certificate, verify_solution, xp_multiple)
from carnotcr.hall import generate_hall_basis


def idx(step, vec):
    return generate_hall_basis(step).index_of_vector(vec)


@pytest.mark.parametrize("vec,c", [((2, 1), Fraction(-1, 2)), ((2, 1, 1), Fraction(-1, 3)),
                                   ((2, 1, 2), Fraction(-1, 2))])
def test_leading_coefficient(vec, c):
    b = generate_hall_basis(3)
    assert leading_coefficient(b, b.index_of_vector(vec)) == c


def test_residual_examples():
    b = generate_hall_basis(3)
    ring = b.ring
    assert residual(b, idx(3, (2, 1, 1)), ring.zero()).is_zero()
    assert residual(b, idx(3, (2, 1, 2)), ring.zero()) == ring.var(1) ** 2 * Fraction(-1, 2)
    assert residual(b, idx(3, (2, 1, 2)), ring.var(4)).is_zero()
    with pytest.raises(ValueError):
        residual(b, 5, ring.var(1))


def test_step3_solution():
    sol = solve_embedding(3, "restricted")
    assert [str(e.q) for e in sol.entries] == ["1/2*x1^2", "-1/6*x1^3", "-1/2*x1^2*x2 + x4"]
    for ans in Ansatz:
        assert solve_embedding(3, ans).to_json()["entries"] == sol.to_json()["entries"]


def square_coefficients(sol):
    out = []
    for e in sol.entries:
        for mono, c in e.r.terms.items():
            if len(mono) == 1 and mono[0][1] == 2:
                out.append((e.j, c))
    return out


@pytest.mark.parametrize("step", range(2, 9))
def test_restricted_solves_through_step8(step):
    sol = solve_embedding(step, "restricted")
    assert sol.ok
    assert verify_solution(sol).ok
    if step <= 5:
        assert square_coefficients(sol) == []
        lin = solve_embedding(step, "linear")
        assert lin.to_json()["entries"] == sol.to_json()["entries"]


def test_square_terms_first_needed_at_step6():
    sol = solve_embedding(6, "restricted")
    assert [j for j, _ in square_coefficients(sol)] == [idx(6, (2, 1, 2, 4))]
    assert str(sol.entry(23).r) == "-1/2*x4^2 + 6*x16"


def test_tampered_solution_flags_j3():
    sol = solve_embedding(4, "restricted")
    data = sol.to_json()
    ring = generate_hall_basis(4).ring
    q3 = sol.entry(3).q + ring.var(3)
    data["entries"][0]["q"] = q3.to_json()
    rep = verify_solution(EmbeddingSolution.from_json(data))
    assert rep.failing_indices == [3]
    assert any("X_2" in why for _, _, why in rep.failures)


def test_step2_trivial_solution():
    sol = solve_embedding(2)
    assert str(sol.entry(3).q) == "1/2*x1^2"
    assert verify_solution(sol).ok


def test_serialization_is_deterministic():
    assert solve_embedding(6).dumps() == solve_embedding(6).dumps()
    sol = solve_embedding(5)
    assert EmbeddingSolution.from_json(sol.to_json()).to_json() == sol.to_json()


@pytest.mark.parametrize("step", [6, 7])
def test_ansatz_monotonicity(step):
    b = generate_hall_basis(step)
    for e in b.elements[2:]:
        feas = [solve_index(b, e.index, a).feasible for a in (Ansatz.LINEAR, Ansatz.RESTRICTED, Ansatz.FULL)]
        assert feas == sorted(feas)


def test_surface():
    surf = emit_surface(solve_embedding(3))
    assert surf.n == 3
    assert surf.at_origin() == [0, 0, 0]
    assert surf.to_json()["equations"][2]["text"] == "-1/2*x^2*y + u2"
    assert emit_surface(solve_embedding(2)).to_json()["equations"][0]["text"] == "1/2*x^2"


# -- lemma tables -------------------------------------------------------------------

def test_lemma42_examples():
    t = lemma42_table(5)
    j = idx(5, (2, 1, 1, 3))
    ent = t[(j, 3)]
    assert ent.kind is SpanKind.SPAN and ent.ell == idx(5, (2, 1, 1, 1, 1)) and ent.scalar == 12
    assert t[(idx(5, (2, 1, 2)), 4)].kind is SpanKind.ZERO


def test_lemma43_examples():
    t = lemma43_table(6)
    assert t[idx(6, (2, 1, 1))].kind is SpanKind.ZERO
    e = t[idx(6, (2, 1, 2))]
    assert (e.kind, e.ell, e.scalar) == (SpanKind.SPAN, idx(6, (2, 1, 1)), 2)
    e = t[idx(6, (2, 1, 2, 4))]
    assert (e.kind, e.ell, e.scalar) == (SpanKind.SPECIAL, 4, -2)


@pytest.mark.parametrize("step", range(2, 9))
def test_lemma42_has_no_violations(step):
    assert span_violations(lemma42_table(step)) == []


@pytest.mark.parametrize("step", range(2, 8))
def test_lemma43_through_step7(step):
    t = lemma43_table(step)
    assert span_violations(t) == []
    special = [j for j, e in t.items() if e.kind is SpanKind.SPECIAL]
    assert special == ([23] if step >= 6 else [])


def test_lemma43_step8_exceptions_are_xp_multiples():
    b = generate_hall_basis(8)
    bad = span_violations(lemma43_table(8))
    assert [b[j].vector for j in bad] == [(2, 1, 1, 2, 6), (2, 1, 2, 2, 7)]
    hits = [xp_multiple(b, b.ring.var(1) * b[j].monomial.partial(2)) for j in bad]
    assert hits == [(6, -3), (7, -2)]


# -- step 9 ---------------------------------------------------------------------------

def test_step9_certificate():
    cert = step9_certificate()
    assert cert.vector == (2, 1, 2, 4, 5)
    assert cert.restricted_infeasible and cert.nullspace_clear
    assert cert.coefficient == Fraction(1, 2)


def sympy_restricted_solvable(step, vec):
    """Independent check of X_1 q = -p, X_2 q = 0 with q = c x1 p + r, r in the Restricted span."""
    b = generate_hall_basis(step)
    n = b.dim
    x = sympy.symbols(f"x1:{n + 1}")
    h = b.heights

    def p_of(v):
        cnt = Counter(v[1:])
        coef = sympy.Rational((-1) ** (len(v) - 1), math.prod(math.factorial(e) for e in cnt.values()))
        return coef * sympy.prod(x[k - 1] ** e for k, e in cnt.items())

    ps = {e.index: p_of(e.vector) for e in b.elements[2:]}
    j = b.index_of_vector(vec)
    hj = h[j - 1]
    basis_terms = [x[k - 1] for k in range(3, n + 1) if h[k - 1] == hj]
    basis_terms += [x[k - 1] ** 2 for k in range(3, n + 1) if 2 * h[k - 1] == hj]
    a = sympy.symbols(f"a0:{len(basis_terms)}")
    c = sympy.Rational(-1, Counter(vec[1:])[1] + 1)
    q = c * x[0] * ps[j] + sum(ai * t for ai, t in zip(a, basis_terms))
    assert sympy.expand(sympy.diff(q, x[0]) + ps[j]) == 0
    X2q = sympy.diff(q, x[1]) + sum(pk * sympy.diff(q, x[k - 1]) for k, pk in ps.items())
    eqs = sympy.Poly(sympy.expand(X2q), *x).coeffs()
    return sympy.linsolve(eqs, a) != sympy.EmptySet


@pytest.mark.slow
def test_step9_restricted_against_sympy_oracle():
    assert not sympy_restricted_solvable(9, (2, 1, 2, 4, 5))
    assert not sympy_restricted_solvable(9, (2, 1, 2, 4, 4))
    assert sympy_restricted_solvable(9, (2, 1, 1, 3, 4))
    sol = solve_embedding(9, "restricted")
    assert [e.vector for e in sol.infeasible] == [(2, 1, 2, 4, 4), (2, 1, 2, 4, 5)]


def test_sympy_oracle_agrees_at_step6():
    assert sympy_restricted_solvable(6, (2, 1, 2, 4))
    b = generate_hall_basis(6)
    assert not solve_index(b, b.index_of_vector((2, 1, 2, 4)), Ansatz.LINEAR).feasible
