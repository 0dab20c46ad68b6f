import itertools
import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as hs

from carnotcr import stratified as st
from carnotcr.algebra import GradingError, StratifiedAlgebra
from carnotcr.exactcore import RatMatrix
from carnotcr.realize import free_algebra

H1, H2, H3 = (st.heisenberg(m) for m in (1, 2, 3))
J2 = st.standard_J(2)


def test_algebra_validation():
    with pytest.raises(GradingError):
        StratifiedAlgebra.from_brackets((2, 1), {})  # U is never reached
    with pytest.raises(GradingError):
        StratifiedAlgebra.from_brackets((2, 1), {(1, 2): [(1, 1)]})  # bracket lands in stratum 1


def test_dilation_examples():
    assert st.dilation(H1, 1) == RatMatrix.identity(3)
    assert st.dilation(H1, 2) == RatMatrix.diag([2, 2, 4])
    assert st.dilation(free_algebra(3), 3) == RatMatrix.diag([3, 3, 9, 27, 27])
    with pytest.raises(ValueError):
        st.dilation(H1, 0)


@settings(max_examples=30, deadline=None)
@given(hs.fractions(min_value=-5, max_value=5, max_denominator=5).filter(bool),
       hs.fractions(min_value=-5, max_value=5, max_denominator=5).filter(bool))
def test_dilations_compose(s, t):
    alg = free_algebra(4)
    assert st.dilation(alg, s) @ st.dilation(alg, t) == st.dilation(alg, s * t)
    assert st.is_strata_automorphism(alg, st.dilation(alg, s))


def test_strata_automorphism_examples():
    assert st.is_strata_automorphism(H1, RatMatrix.identity(3))
    assert not st.is_strata_automorphism(H1, RatMatrix.diag([1, 1, 2]))


def test_extend_free_automorphism():
    assert st.extend_free_automorphism(RatMatrix.diag([3, 3]), 4) == st.dilation(free_algebra(4), 3)
    assert st.extend_free_automorphism(RatMatrix.identity(2), 3) == RatMatrix.identity(5)
    with pytest.raises(st.SingularInput):
        st.extend_free_automorphism(RatMatrix.from_rows([[1, 2], [2, 4]]), 3)


def test_second_stratum_scales_by_det():
    # [A X_1, A X_2] = det(A) [X_1, X_2], so J (det 1) fixes X_3
    rng = random.Random(3)
    for _ in range(20):
        A = st.random_invertible(rng, 2)
        T = st.extend_free_automorphism(A, 2)
        assert T[2, 2] == A.det()
    assert st.extend_free_automorphism(J2, 2)[2, 2] == 1


def test_heisenberg_extension_requires_similitude():
    # in dimension 2 every invertible map is a similitude with mu = det
    assert st.extend_heisenberg_automorphism(RatMatrix.diag([2, 3])) == RatMatrix.diag([2, 3, 6])
    with pytest.raises(ValueError):
        st.extend_heisenberg_automorphism(RatMatrix.diag([2, 1, 1, 1]))


def test_ac_structure_examples():
    assert st.check_ac_structure(H1, J2)
    assert st.check_ac_structure(H2, st.standard_J(4))
    assert st.check_ac_structure(free_algebra(3), J2)
    assert not st.check_ac_structure(H1, RatMatrix.identity(2))


def test_ac_structure_non_example():
    # J^2 = -Id but incompatible with the bracket of H^2
    P = RatMatrix.from_rows([[1, 0, 1, 0], [0, 1, 0, 0], [0, 0, 1, 0], [1, 0, 0, 1]])
    J = P @ st.standard_J(4) @ P.inverse()
    assert J @ J == -RatMatrix.identity(4)
    assert not st.check_ac_structure(H2, J)


@pytest.mark.parametrize("alg", [H1, H2, H3, free_algebra(2), free_algebra(4)], ids=str)
def test_real_and_complex_ac_tests_agree(alg):
    rng = random.Random(11)
    d = alg.strata_dims[0]
    results = [st.check_ac_structure(alg, st.random_J_candidate(rng, d)) for _ in range(50)]
    assert any(results) and not all(results)


def test_cr_structure_validation():
    st.CRStructure.standard(4)
    with pytest.raises(ValueError):
        st.CRStructure(J2, RatMatrix.diag([1, 2]))
    with pytest.raises(ValueError):
        st.CRStructure(RatMatrix.identity(2), RatMatrix.identity(2))


def test_tight():
    assert st.is_tight(free_algebra(5)) == (True, st.TightKind.TWO_GENERATOR)
    assert st.is_tight(H2) == (True, st.TightKind.HEISENBERG)
    assert st.is_tight(st.direct_sum([H1, H1]).algebra) == (False, None)
    assert st.is_tight(free_algebra(1)) == (False, None)


@pytest.mark.parametrize("m", [1, 2, 3])
def test_presentations_and_central_u(m):
    pres = st.heisenberg_presentation(m)
    alg = st.heisenberg(m)
    assert pres.holds(alg)
    assert pres.u_is_central_on_first_stratum(alg)


def test_free_presentation():
    assert st.free_presentation(4).holds(free_algebra(4))
    assert not st.free_presentation(4).u_is_central_on_first_stratum(free_algebra(4))


def test_conformal_examples():
    assert st.is_conformal(RatMatrix.identity(2)) == (True, 1)
    assert st.is_conformal(RatMatrix.diag([2, 2])) == (True, 4)
    assert st.is_conformal(RatMatrix.diag([2, 1])) == (False, None)


def test_conformal_with_gram():
    gram = RatMatrix.diag([1, 4])
    T = RatMatrix.from_rows([[0, -2], [Fraction(1, 2), 0]])  # rotation for the metric diag(1, 4)
    assert st.is_conformal(T, gram) == (True, 1)
    assert not st.is_conformal(T)[0]


def test_cr_examples():
    R = RatMatrix.diag([1, -1])
    S = RatMatrix.from_rows([[1, 1], [0, 1]])
    assert st.is_cr(J2, J2) and st.is_cr_complex(J2, J2)
    assert st.is_anti_cr(R, J2) and st.is_anti_cr_complex(R, J2)
    assert not (st.is_cr(S, J2) or st.is_anti_cr(S, J2))
    assert not (st.is_cr_complex(S, J2) or st.is_anti_cr_complex(S, J2))


def test_distortion_examples():
    assert st.distortion(RatMatrix.identity(2)).value == 1
    d = st.distortion(RatMatrix.diag([2, 1]))
    assert d.lower <= 2 <= d.upper and d.upper - d.lower <= Fraction(1, 10 ** 12)
    assert st.distortion(RatMatrix.diag([3, 3])).exact
    with pytest.raises(st.SingularInput):
        st.distortion(RatMatrix.from_rows([[1, 1], [1, 1]]))


def sympy_distortion(T, gram):
    M = sympy.Matrix(gram.inverse().to_rows()) * sympy.Matrix(T.T.to_rows()) * \
        sympy.Matrix(gram.to_rows()) * sympy.Matrix(T.to_rows())
    ev = [sympy.re(sympy.N(e, 50)) for e in M.eigenvals()]
    return sympy.sqrt(max(ev) / min(ev))


@settings(max_examples=25, deadline=None)
@given(hs.integers(0, 10 ** 6))
def test_distortion_matches_sympy(seed):
    rng = random.Random(seed)
    T = st.random_invertible(rng, 4, 4)
    gram = RatMatrix.identity(4)
    d = st.distortion(T, gram, tol=1e-12)
    ref = sympy_distortion(T, gram)
    assert d.lower - Fraction(1, 10 ** 20) <= Fraction(str(sympy.N(ref, 40))) <= d.upper + Fraction(1, 10 ** 20)


def test_distortion_one_iff_conformal():
    rng = random.Random(5)
    for _ in range(40):
        A = st.random_free_first_block(rng)
        d = st.distortion(A)
        assert (abs(d.value - 1) <= 1e-12) == st.is_conformal(A)[0]


@pytest.mark.parametrize("step", [2, 3, 4])
def test_conformal_iff_cr_or_anticr_free(step):
    rng = random.Random(100 + step)
    alg = free_algebra(step)
    for _ in range(40):
        A = st.random_free_first_block(rng)
        assert st.is_strata_automorphism(alg, st.extend_free_automorphism(A, step))
        assert st.is_conformal(A)[0] == (st.is_cr(A, J2) or st.is_anti_cr(A, J2))


@pytest.mark.parametrize("m", [1, 2, 3])
def test_conformal_iff_cr_or_anticr_heisenberg(m):
    rng = random.Random(200 + m)
    alg = st.heisenberg(m)
    J = st.standard_J(2 * m)
    for _ in range(40):
        A = st.random_symplectic_similitude(rng, m)
        assert st.is_strata_automorphism(alg, st.extend_heisenberg_automorphism(A))
        assert st.is_conformal(A)[0] == (st.is_cr(A, J) or st.is_anti_cr(A, J))
        assert st.is_cr(A, J) == st.is_cr_complex(A, J)
        assert st.is_anti_cr(A, J) == st.is_anti_cr_complex(A, J)


# -- products -----------------------------------------------------------------------

def test_direct_sum_examples():
    ds = st.direct_sum([H1, H1])
    assert ds.algebra.dim == 6 and ds.algebra.strata_dims == (4, 2)
    assert st.direct_sum([H1]).algebra.constants == H1.constants
    assert st.direct_sum([free_algebra(2), free_algebra(3)]).algebra.strata_dims == (4, 2, 2)


def test_factors_commute():
    ds = st.direct_sum([H1, free_algebra(3)])
    n = ds.algebra.dim
    for a in ds.blocks[0]:
        for b in ds.blocks[1]:
            e_a = [Fraction(int(k == a)) for k in range(1, n + 1)]
            e_b = [Fraction(int(k == b)) for k in range(1, n + 1)]
            assert not any(ds.algebra.bracket(e_a, e_b))


def test_perm_automorphism():
    ds = st.direct_sum([H1, H1, H1])
    assert st.perm_automorphism((0, 1, 2), ds) == RatMatrix.identity(9)
    perms = list(itertools.permutations(range(3)))
    mats = {p: st.perm_automorphism(p, ds) for p in perms}
    assert len(set(mats.values())) == 6
    for p, q in itertools.product(perms, perms):
        assert mats[st.compose_perm(p, q)] == mats[p] @ mats[q]


def test_perm_with_nontrivial_isos():
    iso = st.dilation(H1, 2)
    ds = st.direct_sum([H1, H1], isos=[RatMatrix.identity(3), iso])
    P = st.perm_automorphism((1, 0), ds)
    assert st.is_strata_automorphism(ds.algebra, P)
    assert st.decompose_product_automorphism(P, ds)[0] == (1, 0)


def test_class_mismatch():
    ds = st.direct_sum([H1, free_algebra(3)])
    with pytest.raises(st.ClassMismatch):
        st.perm_automorphism((1, 0), ds)


def test_decompose_swap_and_identity():
    ds = st.direct_sum([H1, H1])
    sigma, blocks = st.decompose_product_automorphism(st.perm_automorphism((1, 0), ds), ds)
    assert sigma == (1, 0) and blocks == [RatMatrix.identity(3)] * 2
    D = ds.product_map([st.dilation(H1, 2), RatMatrix.identity(3)])
    assert st.decompose_product_automorphism(D, ds) == ((0, 1), [st.dilation(H1, 2), RatMatrix.identity(3)])


def test_decompose_non_isomorphic_factors():
    ds = st.direct_sum([H1, free_algebra(3)])
    rng = random.Random(9)
    for _ in range(10):
        A = st.random_symplectic_similitude(rng, 1)
        B = st.random_invertible(rng, 2)
        T = ds.product_map([st.extend_heisenberg_automorphism(A), st.extend_free_automorphism(B, 3)])
        assert st.decompose_product_automorphism(T, ds)[0] == (0, 1)


def test_not_product_compatible():
    ds = st.direct_sum([H1, H1])
    T = RatMatrix.identity(6).to_rows()
    T[2][0] = 1  # X of the second factor picks up X of the first
    with pytest.raises(st.NotProductCompatible):
        st.decompose_product_automorphism(RatMatrix.from_rows(T), ds)
