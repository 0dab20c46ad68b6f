"""Stratified algebras: automorphisms, CR structures, conformality, products.

Linear maps are :class:`RatMatrix` objects whose columns are the images of
the basis vectors. Maps "on the first stratum" are the top-left
``dim g_{-1}`` block.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import sympy

from .algebra import StratifiedAlgebra, StructureConstants, unit
from .exactcore import CRat, I, RatMatrix, _rref_rows


class SingularInput(ValueError):
    pass


class ClassMismatch(ValueError):
    """A permutation moves a factor to a factor of a different declared class."""


class NotProductCompatible(ValueError):
    """The map sends some factor into more than one factor."""


class ConsistencyError(AssertionError):
    """Two equivalent formulations of a predicate disagree."""


# -- examples -----------------------------------------------------------------

def heisenberg(m: int) -> StratifiedAlgebra:
    """``H^m`` with basis ``X_1..X_m, Y_1..Y_m, U`` and ``[X_j, Y_j] = U``."""
    if m < 1:
        raise ValueError("m must be positive")
    table = {(j, m + j): [(2 * m + 1, 1)] for j in range(1, m + 1)}
    return StratifiedAlgebra.from_brackets((2 * m, 1), table, name=f"H^{m}")


def standard_J(n: int) -> RatMatrix:
    """``J e_j = e_{m+j}``, ``J e_{m+j} = -e_j`` on a space of even dimension ``n = 2m``."""
    if n % 2:
        raise ValueError("odd dimension")
    m = n // 2
    cols = []
    for j in range(n):
        v = [0] * n
        if j < m:
            v[m + j] = 1
        else:
            v[j - m] = -1
        cols.append(v)
    return RatMatrix.from_columns(cols)


# -- dilations and automorphisms ------------------------------------------------

def dilation(alg: StratifiedAlgebra, s) -> RatMatrix:
    s = Fraction(s)
    if s == 0:
        raise ValueError("dilation factor must be nonzero")
    return RatMatrix.diag([s ** h for h in alg.constants.stratum_of])


def first_block(alg: StratifiedAlgebra, T: RatMatrix) -> RatMatrix:
    d = alg.strata_dims[0]
    if T.shape == (d, d):
        return T
    return T.submatrix(range(d), range(d))


def is_block_diagonal(alg: StratifiedAlgebra, T: RatMatrix) -> bool:
    h = alg.constants.stratum_of
    return all(T[i, j] == 0 for i in range(T.rows) for j in range(T.cols) if h[i] != h[j])


def is_strata_automorphism(alg: StratifiedAlgebra, T: RatMatrix) -> bool:
    """Invertible, block diagonal over strata, and ``T[x, y] = [Tx, Ty]``."""
    n = alg.dim
    if T.shape != (n, n) or not is_block_diagonal(alg, T):
        return False
    if T.rank() != n:
        return False
    sc = alg.constants
    images = [list(T.col(k)) for k in range(n)]
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            lhs = T @ sc.bracket(unit(n, i), unit(n, j))
            rhs = sc.bracket(images[i - 1], images[j - 1])
            if list(lhs) != rhs:
                return False
    return True


def extend_along_tree(alg: StratifiedAlgebra, A: RatMatrix, tree: Sequence) -> RatMatrix:
    """Extend ``A`` on ``g_{-1}`` using ``tree[k-1] = (left, right)`` with
    ``e_k = [e_left, e_right]`` for every basis vector above the first stratum."""
    n = alg.dim
    d = alg.strata_dims[0]
    if A.shape != (d, d):
        raise ValueError(f"expected a {d}x{d} matrix on the first stratum")
    if A.det() == 0:
        raise SingularInput("map on the first stratum is singular")
    images = []
    for k in range(1, n + 1):
        if k <= d:
            images.append(list(A.col(k - 1)) + [Fraction(0)] * (n - d))
        else:
            left, right = tree[k - 1]
            images.append(alg.bracket(images[left - 1], images[right - 1]))
    return RatMatrix.from_columns(images)


def extend_free_automorphism(A: RatMatrix, step: int) -> RatMatrix:
    """The automorphism of ``f_{2,step}`` restricting to ``A`` on the generators.

    Free algebras have every invertible ``A`` extend; the images follow the
    Hall bracket tree ``X_i = [X_left, X_right]``.
    """
    from .realize import free_algebra
    from .hall import generate_hall_basis

    alg = free_algebra(step)
    basis = generate_hall_basis(step)
    tree = [(e.left, e.right) for e in basis.elements]
    return extend_along_tree(alg, A, tree)


def symplectic_multiplier(A: RatMatrix) -> Fraction | None:
    """``mu`` with ``A^t Omega A = mu Omega`` for the standard form, else ``None``."""
    n = A.rows
    omega = -standard_J(n)  # omega(e_j, e_{m+j}) = 1
    lhs = A.T @ omega @ A
    mu = lhs[0, n // 2]
    return mu if lhs == omega.scale(mu) and mu != 0 else None


def extend_heisenberg_automorphism(A: RatMatrix) -> RatMatrix:
    """``diag(A, mu)`` for a symplectic similitude ``A`` of multiplier ``mu``."""
    if A.det() == 0:
        raise SingularInput("map on the first stratum is singular")
    mu = symplectic_multiplier(A)
    if mu is None:
        raise ValueError("A is not a symplectic similitude; it does not extend to H^m")
    return RatMatrix.block_diag([A, RatMatrix.diag([mu])])


# -- almost complex structures ------------------------------------------------

def _first_stratum_bracket(alg: StratifiedAlgebra, x, y):
    n = alg.dim
    d = alg.strata_dims[0]
    pad = [x[0] * 0] * (n - d)
    return alg.bracket(list(x) + pad, list(y) + pad)


def check_ac_structure_real(alg: StratifiedAlgebra, J: RatMatrix) -> bool:
    """``J^2 = -Id``, ``[X, Y] = [JX, JY]`` and ``[X, JY] = -[JX, Y]`` on a basis."""
    d = alg.strata_dims[0]
    if d % 2 or J.shape != (d, d):
        return False
    if J @ J != -RatMatrix.identity(d):
        return False
    Jcols = [list(J.col(k)) for k in range(d)]
    for a in range(d):
        for b in range(a + 1, d):
            ea, eb = unit(d, a + 1), unit(d, b + 1)
            if _first_stratum_bracket(alg, ea, eb) != _first_stratum_bracket(alg, Jcols[a], Jcols[b]):
                return False
            lhs = _first_stratum_bracket(alg, ea, Jcols[b])
            rhs = _first_stratum_bracket(alg, Jcols[a], eb)
            if any(x + y != 0 for x, y in zip(lhs, rhs)):
                return False
    return True


def holomorphic_span(J: RatMatrix) -> list[list[CRat]]:
    """A basis of ``L = Span{X - iJX}`` over the complex rationals."""
    d = J.rows
    rows = [[CRat(1 if r == k else 0) - I * J[r, k] for r in range(d)] for k in range(d)]
    _rref_rows(rows, d)
    return [r for r in rows if any(r)]


def check_ac_structure_complex(alg: StratifiedAlgebra, J: RatMatrix) -> bool:
    """``L`` has complex dimension ``m`` (half of ``dim g_{-1}``) and ``[L, L] = 0``."""
    d = alg.strata_dims[0]
    if d % 2 or J.shape != (d, d):
        return False
    L = holomorphic_span(J)
    if len(L) != d // 2:
        return False
    for a in range(len(L)):
        for b in range(a + 1, len(L)):
            if any(_first_stratum_bracket(alg, L[a], L[b])):
                return False
    return True


def check_ac_structure(alg: StratifiedAlgebra, J: RatMatrix) -> bool:
    """Whether ``J`` is an almost complex structure compatible with the bracket.

    The real identities are authoritative; the complexified test ``[L, L] = 0``
    is evaluated alongside and any disagreement raises ConsistencyError.
    """
    real = check_ac_structure_real(alg, J)
    cplx = check_ac_structure_complex(alg, J)
    if real != cplx:
        raise ConsistencyError(f"real test says {real}, complexified test says {cplx}")
    return real


@dataclass(frozen=True)
class CRStructure:
    J: RatMatrix
    gram: RatMatrix

    def __post_init__(self):
        d = self.J.rows
        if self.J @ self.J != -RatMatrix.identity(d):
            raise ValueError("J^2 != -Id")
        g = self.gram
        if g != g.T:
            raise ValueError("gram matrix is not symmetric")
        if any(g.submatrix(range(k), range(k)).det() <= 0 for k in range(1, d + 1)):
            raise ValueError("gram matrix is not positive definite")
        if self.J.T @ g @ self.J != g:
            raise ValueError("gram matrix is not J-compatible")

    @classmethod
    def standard(cls, d: int) -> "CRStructure":
        return cls(standard_J(d), RatMatrix.identity(d))


# -- tight algebras -------------------------------------------------------------

class TightKind(str, enum.Enum):
    TWO_GENERATOR = "two_generator"
    HEISENBERG = "heisenberg"


def first_stratum_meets_center(alg: StratifiedAlgebra) -> bool:
    n = alg.dim
    d = alg.strata_dims[0]
    rows = []
    for k in range(1, n + 1):
        ek = unit(n, k)
        images = [alg.bracket(unit(n, a), ek) for a in range(1, d + 1)]
        rows.extend(list(r) for r in zip(*images))
    return RatMatrix.from_rows(rows).rank() < d


def bracket_form(alg: StratifiedAlgebra) -> RatMatrix:
    """``omega(e_a, e_b)`` = coordinate of ``[e_a, e_b]`` along the (one-dimensional) second stratum."""
    n = alg.dim
    d = alg.strata_dims[0]
    (u,) = alg.stratum_indices(2)
    return RatMatrix.from_rows([[alg.bracket(unit(n, a), unit(n, b))[u - 1] for b in range(1, d + 1)]
                                for a in range(1, d + 1)])


def is_tight(alg: StratifiedAlgebra) -> tuple[bool, TightKind | None]:
    dims = alg.strata_dims
    if len(dims) < 2 or dims[1] != 1:
        return False, None
    if alg.step == 2 and bracket_form(alg).det() != 0:
        return True, TightKind.HEISENBERG
    if dims[0] == 2 and not first_stratum_meets_center(alg):
        return True, TightKind.TWO_GENERATOR
    return False, None


@dataclass(frozen=True)
class TightPresentation:
    """Witness vectors ``X_j, Y_j, U`` with ``[X_j, X_l] = [Y_j, Y_l] = 0`` and ``[X_j, Y_l] = delta_jl U``."""

    m: int
    X: tuple
    Y: tuple
    U: tuple

    def holds(self, alg: StratifiedAlgebra) -> bool:
        zero = [Fraction(0)] * alg.dim
        for j in range(self.m):
            for l in range(self.m):
                if alg.bracket(self.X[j], self.X[l]) != zero or alg.bracket(self.Y[j], self.Y[l]) != zero:
                    return False
                want = list(self.U) if j == l else zero
                if alg.bracket(self.X[j], self.Y[l]) != want:
                    return False
        return True

    def u_is_central_on_first_stratum(self, alg: StratifiedAlgebra) -> bool:
        zero = [Fraction(0)] * alg.dim
        return all(alg.bracket(v, self.U) == zero for v in self.X + self.Y)


def heisenberg_presentation(m: int) -> TightPresentation:
    n = 2 * m + 1
    X = tuple(tuple(unit(n, j)) for j in range(1, m + 1))
    Y = tuple(tuple(unit(n, m + j)) for j in range(1, m + 1))
    return TightPresentation(m, X, Y, tuple(unit(n, n)))


def free_presentation(step: int) -> TightPresentation:
    """``X = X_1``, ``Y = X_2`` and ``U = [X_1, X_2] = -X_3`` in the Hall basis."""
    from .realize import free_algebra

    alg = free_algebra(step)
    n = alg.dim
    X, Y = unit(n, 1), unit(n, 2)
    return TightPresentation(1, (tuple(X),), (tuple(Y),), tuple(alg.bracket(X, Y)))


# -- conformal, CR and anti-CR maps -------------------------------------------

def is_conformal(T1: RatMatrix, gram: RatMatrix | None = None) -> tuple[bool, Fraction | None]:
    """Whether ``T^t T = lambda^2 Id`` with the transpose taken for ``gram``.

    Returns ``(True, lambda^2)`` or ``(False, None)``.
    """
    d = T1.rows
    gram = RatMatrix.identity(d) if gram is None else gram
    M = gram.inverse() @ T1.T @ gram @ T1
    lam2 = M[0, 0]
    if lam2 > 0 and M == RatMatrix.identity(d).scale(lam2):
        return True, lam2
    return False, None


def is_cr(T1: RatMatrix, J: RatMatrix) -> bool:
    return T1 @ J == J @ T1


def is_anti_cr(T1: RatMatrix, J: RatMatrix) -> bool:
    return T1 @ J == -(J @ T1)


def _maps_into(T1: RatMatrix, source: list, target: list) -> bool:
    d = T1.rows
    images = [[sum((T1[r, k] * v[k] for k in range(d)), CRat()) for r in range(d)] for v in source]
    base = [list(v) for v in target]
    rank = len(_rref_rows([list(v) for v in base], d))
    return len(_rref_rows(base + images, d)) == rank


def is_cr_complex(T1: RatMatrix, J: RatMatrix) -> bool:
    """``T_C(L)`` is contained in ``L``."""
    L = holomorphic_span(J)
    return _maps_into(T1, L, L)


def is_anti_cr_complex(T1: RatMatrix, J: RatMatrix) -> bool:
    """``T_C(L)`` is contained in the conjugate of ``L``."""
    L = holomorphic_span(J)
    Lbar = [[x.conjugate() for x in v] for v in L]
    return _maps_into(T1, L, Lbar)


# -- distortion -----------------------------------------------------------------

@dataclass(frozen=True)
class Distortion:
    value: float
    lower: Fraction
    upper: Fraction
    exact: bool  # True when the map is conformal and the value is exactly 1


def _sqrt_bounds(x: Fraction, bits: int) -> tuple[Fraction, Fraction]:
    scale = 1 << (2 * bits)
    lo = math.isqrt(x.numerator * scale // x.denominator)
    hi = lo + 1
    return Fraction(lo, 1 << bits), Fraction(hi, 1 << bits)


def distortion(T1: RatMatrix, gram: RatMatrix | None = None, tol: float = 1e-12) -> Distortion:
    """``sqrt(mu_max / mu_min)`` for the eigenvalues of the gram-symmetrized ``T^t T``.

    The eigenvalues are isolated exactly on the rational characteristic
    polynomial and refined by bisection until the enclosure of the
    distortion is narrower than ``tol``.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    d = T1.rows
    gram = RatMatrix.identity(d) if gram is None else gram
    if T1.det() == 0:
        raise SingularInput("distortion of a singular map")
    conformal, _ = is_conformal(T1, gram)
    if conformal:
        return Distortion(1.0, Fraction(1), Fraction(1), True)
    M = gram.inverse() @ T1.T @ gram @ T1
    lam = sympy.Symbol("lam")
    charpoly = sympy.Matrix(M.to_rows()).charpoly(lam)
    poly = sympy.Poly(charpoly.as_expr(), lam, domain="QQ")
    eps = Fraction(1, 1 << 20)
    while True:
        ivs = poly.intervals(eps=sympy.Rational(eps.numerator, eps.denominator))
        lo_iv = ivs[0][0]
        hi_iv = ivs[-1][0]
        a_min, b_min = Fraction(str(lo_iv[0])), Fraction(str(lo_iv[1]))
        a_max, b_max = Fraction(str(hi_iv[0])), Fraction(str(hi_iv[1]))
        if a_min <= 0:
            eps /= 1 << 8
            continue
        bits = 64
        while True:
            lo_r, _ = _sqrt_bounds(a_max / b_min, bits)
            _, hi_r = _sqrt_bounds(b_max / a_min, bits)
            if float(hi_r - lo_r) <= tol or bits > 256:
                break
            bits *= 2
        if hi_r - lo_r <= Fraction(tol):
            lo_r = max(lo_r, Fraction(1))
            return Distortion(float((lo_r + hi_r) / 2), lo_r, hi_r, False)
        eps /= 1 << 16


# -- direct sums and permutations ---------------------------------------------

@dataclass(frozen=True)
class DirectSum:
    """A direct sum with its factors, the global indices of each factor,
    declared isomorphism classes and isomorphisms ``I^k`` from each class's
    reference algebra onto factor ``k``."""

    algebra: StratifiedAlgebra
    factors: tuple
    blocks: tuple  # blocks[k] = global basis indices (1-based) of factor k, in factor order
    classes: tuple
    isos: tuple

    @property
    def m(self) -> int:
        return len(self.factors)

    def product_map(self, maps: Sequence[RatMatrix]) -> RatMatrix:
        """The map acting as ``maps[k]`` on factor ``k``."""
        n = self.algebra.dim
        rows = [[Fraction(0)] * n for _ in range(n)]
        for blk, M in zip(self.blocks, maps):
            for a, ga in enumerate(blk):
                for b, gb in enumerate(blk):
                    rows[ga - 1][gb - 1] = M[a, b]
        return RatMatrix.from_rows(rows)

    def factor_block(self, T: RatMatrix, target: int, source: int) -> RatMatrix:
        return T.submatrix([g - 1 for g in self.blocks[target]], [g - 1 for g in self.blocks[source]])


def direct_sum(algs: Sequence[StratifiedAlgebra], classes=None, isos=None) -> DirectSum:
    """Block assembly of the factors, basis ordered stratum by stratum.

    By default factors with identical structure constants share a class and
    ``I^k`` is the identity.
    """
    algs = list(algs)
    if not algs:
        raise ValueError("need at least one factor")
    top = max(a.step for a in algs)
    blocks = [[0] * a.dim for a in algs]
    heights = []
    g = 0
    for h in range(1, top + 1):
        for f, a in enumerate(algs):
            for local in a.stratum_indices(h):
                g += 1
                blocks[f][local - 1] = g
                heights.append(h)
    table = {}
    for f, a in enumerate(algs):
        for (i, j), terms in a.constants.table.items():
            table[(blocks[f][i - 1], blocks[f][j - 1])] = [(blocks[f][k - 1], c) for k, c in terms]
    sc = StructureConstants(g, tuple(heights), table)
    name = " + ".join(a.name or "?" for a in algs)
    total = StratifiedAlgebra(sc, name=name)
    if classes is None:
        labels: list = []
        seen: dict = {}
        for a in algs:
            key = (a.constants.stratum_of, tuple(a.constants.table.items()))
            labels.append(seen.setdefault(key, len(seen)))
        classes = tuple(labels)
    if isos is None:
        isos = tuple(RatMatrix.identity(a.dim) for a in algs)
    if len(classes) != len(algs) or len(isos) != len(algs):
        raise ValueError("need one class label and one isomorphism per factor")
    return DirectSum(total, tuple(algs), tuple(tuple(b) for b in blocks), tuple(classes), tuple(isos))


def perm_automorphism(sigma: Sequence[int], ds: DirectSum, check: bool = True) -> RatMatrix:
    """``I^sigma``: on factor ``j`` it is ``I^{sigma(j)} (I^j)^{-1}``.

    ``sigma`` is a sequence with ``sigma[j]`` the image of factor ``j`` (0-based).
    """
    sigma = tuple(sigma)
    if sorted(sigma) != list(range(ds.m)):
        raise ValueError(f"{sigma} is not a permutation of 0..{ds.m - 1}")
    for j, t in enumerate(sigma):
        if ds.classes[j] != ds.classes[t]:
            raise ClassMismatch(f"factor {j} and factor {t} are in different classes")
    n = ds.algebra.dim
    rows = [[Fraction(0)] * n for _ in range(n)]
    for j, t in enumerate(sigma):
        M = ds.isos[t] @ ds.isos[j].inverse()
        for a, ga in enumerate(ds.blocks[t]):
            for b, gb in enumerate(ds.blocks[j]):
                rows[ga - 1][gb - 1] = M[a, b]
    T = RatMatrix.from_rows(rows)
    if check and not is_strata_automorphism(ds.algebra, T):
        raise ValueError("declared isomorphisms do not give an automorphism")
    return T


def compose_perm(sigma: Sequence[int], tau: Sequence[int]) -> tuple:
    """``sigma o tau``."""
    return tuple(sigma[tau[j]] for j in range(len(tau)))


def invert_perm(sigma: Sequence[int]) -> tuple:
    inv = [0] * len(sigma)
    for j, t in enumerate(sigma):
        inv[t] = j
    return tuple(inv)


def decompose_product_automorphism(T: RatMatrix, ds: DirectSum) -> tuple[tuple, list[RatMatrix]]:
    """Split ``T = I^sigma . product(blocks)``.

    ``sigma(j)`` is the unique factor containing the image of factor ``j``.
    """
    sigma = []
    for j in range(ds.m):
        hits = [t for t in range(ds.m) if not ds.factor_block(T, t, j).is_zero()]
        if len(hits) != 1:
            raise NotProductCompatible(f"factor {j} is sent into factors {hits}")
        sigma.append(hits[0])
    sigma = tuple(sigma)
    if sorted(sigma) != list(range(ds.m)):
        raise NotProductCompatible(f"images {sigma} do not form a permutation")
    P = perm_automorphism(invert_perm(sigma), ds, check=False)
    B = P @ T
    blocks = [ds.factor_block(B, j, j) for j in range(ds.m)]
    if ds.product_map(blocks) != B:
        raise NotProductCompatible("map is not block diagonal after undoing the permutation")
    return sigma, blocks


# -- seeded random maps -----------------------------------------------------------

def random_rational(rng, bound: int = 5, nonzero: bool = False) -> Fraction:
    while True:
        x = Fraction(rng.randint(-bound, bound), rng.randint(1, bound))
        if x or not nonzero:
            return x


def random_invertible(rng, d: int, bound: int = 5) -> RatMatrix:
    while True:
        A = RatMatrix.from_rows([[random_rational(rng, bound) for _ in range(d)] for _ in range(d)])
        if A.det() != 0:
            return A


def pythagorean_rotation(rng, bound: int = 6) -> RatMatrix:
    """A rational rotation ``[[c, -s], [s, c]]`` from a Pythagorean parametrization."""
    while True:
        a, b = rng.randint(-bound, bound), rng.randint(-bound, bound)
        if a or b:
            break
    n = a * a + b * b
    c, s = Fraction(a * a - b * b, n), Fraction(2 * a * b, n)
    return RatMatrix.from_rows([[c, -s], [s, c]])


def random_conformal_2d(rng) -> RatMatrix:
    """``lambda * R`` or ``lambda * R * diag(1, -1)`` with ``R`` a rational rotation."""
    A = pythagorean_rotation(rng).scale(random_rational(rng, nonzero=True))
    if rng.random() < 0.5:
        A = A @ RatMatrix.diag([1, -1])
    return A


def random_free_first_block(rng, conformal_bias: float = 0.5) -> RatMatrix:
    if rng.random() < conformal_bias:
        return random_conformal_2d(rng)
    return random_invertible(rng, 2)


def _pair_embed(m: int, j: int, B: RatMatrix) -> RatMatrix:
    """``B`` acting on the plane of ``(X_j, Y_j)`` in ``R^{2m}``, identity elsewhere."""
    rows = RatMatrix.identity(2 * m).to_rows()
    idx = (j, m + j)
    for a in range(2):
        for b in range(2):
            rows[idx[a]][idx[b]] = B[a, b]
    return RatMatrix.from_rows(rows)


def _real_orthogonal_pair(m: int, j: int, l: int, R: RatMatrix) -> RatMatrix:
    """The same rotation on ``(X_j, X_l)`` and on ``(Y_j, Y_l)``; unitary."""
    rows = RatMatrix.identity(2 * m).to_rows()
    for off in (0, m):
        idx = (off + j, off + l)
        for a in range(2):
            for b in range(2):
                rows[idx[a]][idx[b]] = R[a, b]
    return RatMatrix.from_rows(rows)


def random_unitary(rng, m: int, steps: int = 4) -> RatMatrix:
    U = RatMatrix.identity(2 * m)
    for _ in range(steps):
        if m > 1 and rng.random() < 0.5:
            j, l = rng.sample(range(m), 2)
            U = _real_orthogonal_pair(m, j, l, pythagorean_rotation(rng)) @ U
        else:
            U = _pair_embed(m, rng.randrange(m), pythagorean_rotation(rng)) @ U
    return U


def random_symplectic(rng, m: int, steps: int = 4) -> RatMatrix:
    """Product of symplectic transvections ``x -> x + c omega(v, x) v`` and unitary factors."""
    n = 2 * m
    omega = -standard_J(n)
    A = RatMatrix.identity(n)
    for _ in range(steps):
        v = [random_rational(rng, 3) for _ in range(n)]
        c = random_rational(rng, 3)
        V = RatMatrix.from_columns([v])
        A = (RatMatrix.identity(n) + (V @ (V.T @ omega)).scale(c)) @ A
        if rng.random() < 0.3:
            A = random_unitary(rng, m, 1) @ A
    return A


def random_symplectic_similitude(rng, m: int, conformal_bias: float = 0.5) -> RatMatrix:
    """A map with ``A^t Omega A = mu Omega``.

    With probability ``conformal_bias`` it is a scaled unitary, possibly
    composed with the conjugation ``Y -> -Y``; otherwise a scaled product
    of transvections.
    """
    lam = random_rational(rng, nonzero=True)
    if rng.random() < conformal_bias:
        A = random_unitary(rng, m)
        if rng.random() < 0.5:
            A = A @ RatMatrix.diag([1] * m + [-1] * m)
    else:
        A = random_symplectic(rng, m)
    return A.scale(lam)


def random_J_candidate(rng, d: int) -> RatMatrix:
    """A conjugate of the standard structure, by a symplectic or a generic
    invertible map, or a random matrix."""
    u = rng.random()
    if u < 1 / 3:
        P = random_symplectic(rng, d // 2, 2)
    elif u < 2 / 3:
        P = random_invertible(rng, d, 3)
    else:
        return RatMatrix.from_rows([[random_rational(rng, 2) for _ in range(d)] for _ in range(d)])
    return P @ standard_J(d) @ P.inverse()
