"""Property checks behind ``carnotcr selftest``.

Each check returns ``(ok, detail)``; :func:`run_all` yields one result per
named check so callers can report progress line by line.
"""
from __future__ import annotations

import itertools
import random

from . import stratified as st
from .embed import (SpanKind, lemma42_table, lemma43_table, solve_embedding, span_violations,
                    step9_certificate, verify_solution, xp_multiple)
from .goldens import BCH_PREFIX, WITT_DIMS, table1
from .hall import generate_hall_basis, monomial_table
from .realize import bch_coefficients, bracket_word, constants_of_fields, free_algebra, left_invariant_fields, realize

DEFAULT_SEED = 20240611


def check_jacobi(max_step: int = 6):
    for s in range(2, max_step + 1):
        sc = free_algebra(s).constants
        bad = sc.jacobi_violations()
        if bad:
            return False, f"step {s}: Jacobi fails at {bad[:3]}"
        if any(c.denominator != 1 for terms in sc.table.values() for _, c in terms):
            return False, f"step {s}: non-integral structure constant"
    return True, f"Jacobi identity exact for steps 2..{max_step}"


def check_nilpotency(max_step: int = 5):
    for s in range(1, max_step + 1):
        R = realize(s)
        for word in itertools.product((1, 2), repeat=s + 1):
            if not bracket_word(R, word).is_zero():
                return False, f"step {s}: word {word} does not vanish"
    return True, f"all words of length s+1 vanish for s <= {max_step}"


def check_table1():
    golden = table1(corrected=True)
    mt = monomial_table(8)
    for h, rows in mt.items():
        got = {}
        for vec, p in rows:
            ((mono, c),) = p.terms.items()
            got[vec] = (c, dict(mono))
        if got != golden[h]:
            return False, f"step {h} differs from the reference table"
    return True, "69 vector/monomial pairs match (with the documented erratum)"


def check_dimensions():
    dims = generate_hall_basis(9).strata_dims()
    return dims == WITT_DIMS, f"strata dims {dims}"


def check_bch():
    c = bch_coefficients(4)
    return tuple(c) == BCH_PREFIX, f"c_0..c_4 = {[str(x) for x in c]}"


def check_left_invariant():
    algs = [free_algebra(s) for s in (2, 3, 4)] + [st.heisenberg(m) for m in (1, 2, 3)]
    for alg in algs:
        if constants_of_fields(left_invariant_fields(alg), alg) != alg.constants:
            return False, f"{alg.name}: left-invariant fields do not reproduce the constants"
    return True, "left-invariant frames reproduce their structure constants"


def check_existence(max_step: int = 8):
    for s in range(2, max_step + 1):
        sol = solve_embedding(s, "restricted")
        rep = verify_solution(sol)
        if not rep.ok:
            return False, rep.summary()
    return True, f"restricted ansatz solves and verifies for steps 2..{max_step}"


def check_lemmas(step: int = 8):
    """No violations for ``x1 p_k dp_j/dx_k`` up to ``step``; for ``x1 dp_j/dx_2``
    the single special index through step 7, and at ``step`` every entry
    outside a span is a multiple of some ``x_l p_l``."""
    if span_violations(lemma42_table(step)):
        return False, f"x1 p_k dp_j/dx_k leaves the spans at step {step}"
    basis = generate_hall_basis(step)
    t7 = lemma43_table(min(step, 7))
    special = [j for j, e in t7.items() if e.kind is SpanKind.SPECIAL]
    if span_violations(t7) or [basis[j].vector for j in special] != [(2, 1, 2, 4)]:
        return False, "x1 dp_j/dx_2 table through step 7 is not as expected"
    extra = []
    for j in span_violations(lemma43_table(step)):
        hit = xp_multiple(basis, basis.ring.var(1) * basis[j].monomial.partial(2))
        if hit is None:
            return False, f"j={j}: x1 dp_j/dx_2 is not a multiple of any x_l p_l"
        extra.append(f"{basis[j].vector} -> {hit[1]} x{hit[0]} p_{hit[0]}")
    return True, "special (2,1,2,4) -> -2 x4 p_4" + (f"; at step {step} also " + ", ".join(extra) if extra else "")


def check_step9():
    cert = step9_certificate()
    return cert.ok, cert.summary().replace("\n", "; ")


def check_predicates(seed: int, count: int = 100):
    rng = random.Random(seed)
    for s in (2, 3, 4):
        alg = free_algebra(s)
        J = st.standard_J(2)
        for _ in range(count):
            A = st.random_free_first_block(rng)
            T = st.extend_free_automorphism(A, s)
            if not st.is_strata_automorphism(alg, T):
                return False, f"f_2,{s}: extension is not an automorphism"
            if st.is_conformal(A)[0] != (st.is_cr(A, J) or st.is_anti_cr(A, J)):
                return False, f"f_2,{s}: counterexample {A.to_json()}"
    for m in (1, 2, 3):
        alg = st.heisenberg(m)
        J = st.standard_J(2 * m)
        for _ in range(count):
            A = st.random_symplectic_similitude(rng, m)
            T = st.extend_heisenberg_automorphism(A)
            if not st.is_strata_automorphism(alg, T):
                return False, f"H^{m}: extension is not an automorphism"
            if st.is_conformal(A)[0] != (st.is_cr(A, J) or st.is_anti_cr(A, J)):
                return False, f"H^{m}: counterexample {A.to_json()}"
    return True, f"conformal <=> CR or anti-CR on {6 * count} random automorphisms"


def check_ac_agreement(seed: int, count: int = 50):
    rng = random.Random(seed + 1)
    algs = [st.heisenberg(1), st.heisenberg(2), free_algebra(2), free_algebra(3)]
    for alg in algs:
        d = alg.strata_dims[0]
        for _ in range(count):
            st.check_ac_structure(alg, st.random_J_candidate(rng, d))  # raises on disagreement
    return True, f"real and complexified tests agree on {len(algs) * count} candidates"


def check_permutations():
    H = st.heisenberg(1)
    ds = st.direct_sum([H, H, H])
    perms = list(itertools.permutations(range(3)))
    mats = {p: st.perm_automorphism(p, ds) for p in perms}
    if len(set(mats.values())) != len(perms):
        return False, "sigma -> I^sigma is not injective"
    for p, q in itertools.product(perms, perms):
        if mats[st.compose_perm(p, q)] != mats[p] @ mats[q]:
            return False, f"homomorphism fails for {p}, {q}"
    return True, "I^sigma is an injective homomorphism on S_3"


def run_all(seed: int = DEFAULT_SEED):
    checks = [
        ("jacobi", check_jacobi),
        ("nilpotency", check_nilpotency),
        ("table1", check_table1),
        ("dimensions", check_dimensions),
        ("bch", check_bch),
        ("left-invariant", check_left_invariant),
        ("existence", check_existence),
        ("lemmas", check_lemmas),
        ("step9", check_step9),
        ("predicates", lambda: check_predicates(seed)),
        ("ac-structure", lambda: check_ac_agreement(seed)),
        ("permutations", check_permutations),
    ]
    for name, fn in checks:
        try:
            ok, detail = fn()
        except Exception as exc:  # a raised check is a failed check
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        yield name, ok, detail
