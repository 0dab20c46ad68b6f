"""CR embeddings of the free nilpotent groups on two generators.

For each Hall index ``j >= 3`` we look for a polynomial ``q_j`` with

    X_1 q_j = -p_j    and    X_2 q_j = 0,

where ``X_1 = d/dx_1`` and ``X_2 = d/dx_2 + sum_l p_l d/dx_l``. The first
equation forces ``q_j = c_j x_1 p_j + r_j`` with ``c_j = -1/(I(j)_1 + 1)``
and ``r_j`` free of ``x_1``; the second then reads

    c_j x_1 (d p_j/dx_2 + sum_k p_k d p_j/dx_k) + sum_l p_l d r_j/dx_l = 0,

with ``r_j`` a polynomial in ``x_3..x_n``. Because ``r_j -> sum_l p_l dr_j/dx_l``
is linear, each ``j`` is an exact linear system in the coefficients of an
ansatz for ``r_j``.
"""
from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .exactcore import Infeasible, RatMatrix, format_rat, parse_rat, solve_affine
from .hall import HallBasis, check_step, format_vector, generate_hall_basis
from .poly import Poly, PolyRing, vf_apply
from .realize import generator_fields


class Ansatz(str, enum.Enum):
    RESTRICTED = "restricted"
    LINEAR = "linear"
    FULL = "full"


class SpanViolation(AssertionError):
    """A span-table product is a nonzero polynomial outside every single-monomial span."""


class CertificateFailure(AssertionError):
    """The step-9 obstruction could not be certified."""


# -- pieces of the reduced equation -------------------------------------------

def leading_coefficient(basis: HallBasis, j: int) -> Fraction:
    """``c_j = -1/(I(j)_1 + 1)``, the constant with ``d/dx_1 (c_j x_1 p_j) = -p_j``."""
    e = basis[j]
    if e.is_generator:
        raise ValueError("leading coefficients exist only for j >= 3")
    return Fraction(-1, e.multi_index_of(1) + 1)


def tail_operator(basis: HallBasis, f: Poly) -> Poly:
    """``sum_{l >= 3} p_l * df/dx_l``: the part of ``X_2`` beyond ``d/dx_2``."""
    out = f.ring.zero()
    for k in sorted(f.variables()):
        if k >= 3:
            out = out + basis[k].monomial * f.partial(k)
    return out


def source_term(basis: HallBasis, j: int) -> Poly:
    """``c_j x_1 (d p_j/dx_2 + sum_k p_k d p_j/dx_k)``, i.e. ``c_j x_1 X_2 p_j``."""
    p = basis[j].monomial
    x1 = basis.ring.var(1)
    return x1 * (p.partial(2) + tail_operator(basis, p)) * leading_coefficient(basis, j)


def residual(basis: HallBasis, j: int, r: Poly) -> Poly:
    """Left side of the reduced equation for index ``j``; zero iff ``r`` solves it."""
    if r.variables() & {1, 2}:
        raise ValueError("r must be a polynomial in x_3..x_n only")
    return source_term(basis, j) + tail_operator(basis, r)


# -- ansatz spaces ------------------------------------------------------------

def _monomials_of_degree(weights: dict[int, int], degree: int) -> list[tuple]:
    """All sparse monomials in the given variables with this weighted degree."""
    variables = sorted(weights)
    out = []

    def rec(pos, remaining, acc):
        if remaining == 0:
            out.append(tuple(acc))
            return
        for i in range(pos, len(variables)):
            v = variables[i]
            w = weights[v]
            if w > remaining:
                continue
            e = 1
            while e * w <= remaining:
                acc.append((v, e))
                rec(i + 1, remaining - e * w, acc)
                acc.pop()
                e += 1

    rec(0, degree, [])
    return out


def ansatz_monomials(basis: HallBasis, j: int, ansatz: Ansatz) -> list[tuple]:
    """Columns of the linear system for ``r_j``, in a fixed order:
    linear monomials, then squares, then (Full only) everything else,
    each group in canonical monomial order."""
    ring = basis.ring
    h = basis[j].height
    linear = [((k, 1),) for k in range(3, basis.dim + 1) if basis[k].height == h]
    if ansatz is Ansatz.LINEAR:
        return linear
    squares = [((k, 2),) for k in range(3, basis.dim + 1) if 2 * basis[k].height == h]
    if ansatz is Ansatz.RESTRICTED:
        return linear + squares
    weights = {k: basis[k].height for k in range(3, basis.dim + 1) if basis[k].height <= h}
    seen = set(linear) | set(squares)
    rest = [m for m in _monomials_of_degree(weights, h) if m not in seen]
    rest.sort(key=ring.sort_key)
    return linear + squares + rest


# -- solving ------------------------------------------------------------------

@dataclass(frozen=True)
class EmbeddingEntry:
    j: int
    vector: tuple
    c: Fraction
    r: Poly | None
    q: Poly | None
    nullity: int
    unknowns: int
    nullspace: tuple = ()  # basis of the kernel as polynomials in the ansatz

    @property
    def feasible(self) -> bool:
        return self.q is not None


@dataclass(frozen=True)
class EmbeddingSolution:
    step: int
    ansatz: Ansatz
    entries: tuple

    @property
    def infeasible(self) -> list[EmbeddingEntry]:
        return [e for e in self.entries if not e.feasible]

    @property
    def ok(self) -> bool:
        return not self.infeasible

    def entry(self, j: int) -> EmbeddingEntry:
        for e in self.entries:
            if e.j == j:
                return e
        raise KeyError(j)

    def to_json(self) -> dict:
        return {
            "step": self.step,
            "ansatz": self.ansatz.value,
            "entries": [
                {
                    "j": e.j,
                    "vector": list(e.vector),
                    "c": format_rat(e.c),
                    "r": e.r.to_json() if e.r is not None else None,
                    "q": e.q.to_json() if e.q is not None else None,
                    "nullity": e.nullity,
                    "feasible": e.feasible,
                }
                for e in self.entries
            ],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1) + "\n"

    @classmethod
    def from_json(cls, data: dict) -> "EmbeddingSolution":
        step = int(data["step"])
        ring = generate_hall_basis(step).ring
        entries = []
        for d in data["entries"]:
            r = Poly.from_json(d["r"], ring) if d.get("r") is not None else None
            q = Poly.from_json(d["q"], ring) if d.get("q") is not None else None
            entries.append(EmbeddingEntry(int(d["j"]), tuple(d["vector"]), parse_rat(d["c"]),
                                          r, q, int(d.get("nullity", 0)), 0))
        return cls(step, Ansatz(data["ansatz"]), tuple(entries))


def solve_index(basis: HallBasis, j: int, ansatz: Ansatz | str) -> EmbeddingEntry:
    """Solve the reduced equation for a single index ``j``.

    Free variables of the linear system are set to zero, so the returned
    ``r_j`` is canonical for the chosen ansatz.
    """
    ansatz = Ansatz(ansatz)
    ring = basis.ring
    e = basis[j]
    c = leading_coefficient(basis, j)
    src = source_term(basis, j)
    monos = ansatz_monomials(basis, j, ansatz)
    images = [tail_operator(basis, ring.monomial(dict(m))) for m in monos]
    keys = set(src.terms)
    for im in images:
        keys.update(im.terms)
    keys = sorted(keys, key=ring.sort_key)
    A = RatMatrix.from_rows([[im.coeff(k) for im in images] for k in keys]) if keys else RatMatrix(0, len(monos), [])
    b = [-src.coeff(k) for k in keys]
    try:
        x, null = solve_affine(A, b)
    except Infeasible:
        return EmbeddingEntry(j, e.vector, c, None, None, 0, len(monos))
    r = _combine(ring, monos, x)
    q = ring.var(1) * e.monomial * c + r
    kernel = tuple(_combine(ring, monos, v) for v in null)
    return EmbeddingEntry(j, e.vector, c, r, q, len(null), len(monos), kernel)


def _combine(ring: PolyRing, monos, coeffs) -> Poly:
    return Poly(ring, {m: a for m, a in zip(monos, coeffs) if a})


def solve_embedding(step: int, ansatz: Ansatz | str = Ansatz.RESTRICTED) -> EmbeddingSolution:
    """Solve every index ``j >= 3`` independently; infeasible ones are
    reported in place rather than aborting the rest."""
    check_step(step, minimum=2)
    basis = generate_hall_basis(step)
    ansatz = Ansatz(ansatz)
    entries = tuple(solve_index(basis, e.index, ansatz) for e in basis.elements[2:])
    return EmbeddingSolution(step, ansatz, entries)


# -- verification ---------------------------------------------------------------

@dataclass
class VerificationReport:
    step: int
    checked: int = 0
    failures: list = field(default_factory=list)  # (j, vector, reason)

    @property
    def ok(self) -> bool:
        return not self.failures

    @property
    def failing_indices(self) -> list[int]:
        return sorted({j for j, _, _ in self.failures})

    def summary(self) -> str:
        if self.ok:
            return f"step {self.step}: all {self.checked} equations verified"
        lines = [f"step {self.step}: {len(self.failing_indices)} failing index(es)"]
        for j, vec, why in self.failures:
            lines.append(f"  j={j} {format_vector(vec)}: {why}")
        return "\n".join(lines)


def verify_solution(sol: EmbeddingSolution) -> VerificationReport:
    """Check ``X_1 q_j = -p_j``, ``X_2 q_j = 0`` and ``deg q_j = h(j)`` exactly."""
    basis = generate_hall_basis(sol.step)
    X1, X2 = generator_fields(basis)
    report = VerificationReport(sol.step)
    expected = {e.index for e in basis.elements[2:]}
    seen = set()
    for ent in sol.entries:
        seen.add(ent.j)
        el = basis[ent.j]
        report.checked += 1
        if ent.q is None:
            report.failures.append((ent.j, el.vector, "no solution under this ansatz"))
            continue
        q = ent.q
        if ent.c != leading_coefficient(basis, ent.j):
            report.failures.append((ent.j, el.vector, "c_j is not -1/(I(j)_1 + 1)"))
        if ent.r is not None and q != basis.ring.var(1) * el.monomial * ent.c + ent.r:
            report.failures.append((ent.j, el.vector, "q_j != c_j x_1 p_j + r_j"))
        if vf_apply(X1, q) != -el.monomial:
            report.failures.append((ent.j, el.vector, "X_1 q_j != -p_j"))
        if not vf_apply(X2, q).is_zero():
            report.failures.append((ent.j, el.vector, "X_2 q_j != 0"))
        if q and q.weighted_degree() != el.height:
            report.failures.append((ent.j, el.vector, f"q_j is not homogeneous of degree {el.height}"))
    for j in sorted(expected - seen):
        report.failures.append((j, basis[j].vector, "missing entry"))
    return report


# -- lemma tables ---------------------------------------------------------------

class SpanKind(str, enum.Enum):
    ZERO = "zero"
    SPAN = "span"
    SPECIAL = "special"
    VIOLATION = "violation"


@dataclass(frozen=True)
class SpanEntry:
    kind: SpanKind
    ell: int | None = None
    scalar: Fraction | None = None


def _classify(basis: HallBasis, lookup: dict, poly: Poly, height: int) -> SpanEntry:
    if poly.is_zero():
        return SpanEntry(SpanKind.ZERO)
    if poly.is_monomial():
        ((mono, coef),) = poly.terms.items()
        hit = lookup.get(mono)
        if hit is not None and basis[hit[0]].height == height:
            ell, c_ell = hit
            return SpanEntry(SpanKind.SPAN, ell, coef / c_ell)
    return SpanEntry(SpanKind.VIOLATION)


@lru_cache(maxsize=None)
def lemma42_table(step: int) -> dict:
    """``(j, k) -> SpanEntry`` for ``x_1 p_k dp_j/dx_k`` over all ``j, k >= 3``."""
    check_step(step, minimum=2)
    basis = generate_hall_basis(step)
    lookup = basis.monomial_lookup()
    x1 = basis.ring.var(1)
    table = {}
    for ej in basis.elements[2:]:
        pj = ej.monomial
        vars_j = pj.variables()
        for ek in basis.elements[2:]:
            k = ek.index
            if k not in vars_j:
                table[(ej.index, k)] = SpanEntry(SpanKind.ZERO)
                continue
            prod = x1 * ek.monomial * pj.partial(k)
            table[(ej.index, k)] = _classify(basis, lookup, prod, ej.height)
    return table


@lru_cache(maxsize=None)
def lemma43_table(step: int) -> dict:
    """``j -> SpanEntry`` for ``x_1 dp_j/dx_2``.

    A product that is not a multiple of a single ``p_l`` but is a multiple
    of ``x_4 p_4`` is reported as SPECIAL with that multiple.
    """
    check_step(step, minimum=2)
    basis = generate_hall_basis(step)
    lookup = basis.monomial_lookup()
    ring = basis.ring
    x1 = ring.var(1)
    x4p4 = ring.var(4) * basis[4].monomial if basis.dim >= 4 else None
    table = {}
    for ej in basis.elements[2:]:
        prod = x1 * ej.monomial.partial(2)
        entry = _classify(basis, lookup, prod, ej.height)
        if entry.kind is SpanKind.VIOLATION and x4p4 is not None and prod.is_monomial():
            ((mono, coef),) = prod.terms.items()
            ((m4, c4),) = x4p4.terms.items()
            if mono == m4:
                entry = SpanEntry(SpanKind.SPECIAL, 4, coef / c4)
        table[ej.index] = entry
    return table


def xp_multiple(basis: HallBasis, poly: Poly) -> tuple[int, Fraction] | None:
    """``(l, a)`` with ``poly = a * x_l * p_l`` if such ``l >= 3`` exists."""
    if not poly.is_monomial():
        return None
    ((mono, coef),) = poly.terms.items()
    ring = basis.ring
    for e in basis.elements[2:]:
        ((m, c),) = (ring.var(e.index) * e.monomial).terms.items()
        if m == mono:
            return e.index, coef / c
    return None


def span_violations(table: dict) -> list:
    return [key for key, ent in table.items() if ent.kind is SpanKind.VIOLATION]


def check_lemma_tables(step: int) -> None:
    """Raise :class:`SpanViolation` if either table has an unexplained entry."""
    for name, tab in (("x1 p_k dp_j/dx_k", lemma42_table(step)), ("x1 dp_j/dx_2", lemma43_table(step))):
        bad = span_violations(tab)
        if bad:
            raise SpanViolation(f"{name}: {len(bad)} entries outside single-monomial spans: {bad[:5]}")


# -- the step-9 obstruction -----------------------------------------------------

STEP9_VECTOR = (2, 1, 2, 4, 5)


@dataclass(frozen=True)
class Step9Certificate:
    j: int
    vector: tuple
    monomial: Poly
    restricted_infeasible: bool
    full_unknowns: int
    full_nullity: int
    coefficient: Fraction  # x_4^2 x_5 coefficient of r_j, common to all solutions
    nullspace_clear: bool  # every kernel vector has zero x_4^2 x_5 coefficient
    particular: Poly

    @property
    def ok(self) -> bool:
        return self.restricted_infeasible and self.coefficient != 0 and self.nullspace_clear

    def summary(self) -> str:
        return "\n".join([
            f"index j={self.j} {format_vector(self.vector)}, p_j = {self.monomial}",
            f"restricted ansatz infeasible: {self.restricted_infeasible}",
            f"full ansatz: {self.full_unknowns} unknowns, nullity {self.full_nullity}",
            f"x4^2*x5 coefficient in every solution r_j: {format_rat(self.coefficient)}",
            f"kernel vectors free of x4^2*x5: {self.nullspace_clear}",
        ])


def step9_certificate() -> Step9Certificate:
    basis = generate_hall_basis(9)
    j = basis.index_of_vector(STEP9_VECTOR)
    restricted = solve_index(basis, j, Ansatz.RESTRICTED)
    full = solve_index(basis, j, Ansatz.FULL)
    if full.r is None:
        raise CertificateFailure("the full ansatz has no solution")
    target = ((4, 2), (5, 1))
    coef = full.r.coeff(target)
    clear = all(v.coeff(target) == 0 for v in full.nullspace)
    cert = Step9Certificate(j, basis[j].vector, basis[j].monomial, not restricted.feasible,
                            full.unknowns, full.nullity, coef, clear, full.r)
    if not cert.ok:
        raise CertificateFailure(cert.summary())
    return cert


# -- the embedded surface -------------------------------------------------------

@dataclass(frozen=True)
class SurfaceDescription:
    """``v_k = q_{k+2}(x, y, u_1, .., u_n)`` with ``x = x_1``, ``y = x_2``, ``u_k = x_{k+2}``."""

    n: int
    equations: tuple  # q polynomials in the Hall ring, k = 1..n

    @staticmethod
    def name(k: int, latex: bool = False) -> str:
        if k == 1:
            return "x"
        if k == 2:
            return "y"
        return f"u_{{{k - 2}}}" if latex else f"u{k - 2}"

    def variables(self) -> list[str]:
        return ["x", "y"] + [f"u{k}" for k in range(1, self.n + 1)]

    def at_origin(self) -> list[Fraction]:
        return [q.evaluate({}) for q in self.equations]

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "variables": self.variables(),
            "equations": [
                {"v": k, "q": q.to_json(), "text": q.format(self.name)}
                for k, q in enumerate(self.equations, start=1)
            ],
        }

    def latex(self) -> str:
        lines = [f"v_{{{k}}} &= {q.format(lambda i: self.name(i, True), latex=True)}"
                 for k, q in enumerate(self.equations, start=1)]
        return "\\begin{align*}\n" + " \\\\\n".join(lines) + "\n\\end{align*}"


def emit_surface(sol: EmbeddingSolution) -> SurfaceDescription:
    if not sol.ok:
        raise ValueError(f"cannot emit a surface: indices {[e.j for e in sol.infeasible]} unsolved")
    qs = tuple(e.q for e in sorted(sol.entries, key=lambda e: e.j))
    return SurfaceDescription(len(qs), qs)
