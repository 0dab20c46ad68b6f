"""Command line interface: ``carnotcr <command> ...``.

Exit status is 0 on success, 1 when a mathematical check fails and 2 on
usage errors (bad flags, unreadable input, step out of range).
"""
from __future__ import annotations

import argparse
import json
import sys

from . import stratified as st
from .algebra import GradingError, StratifiedAlgebra
from .embed import (Ansatz, CertificateFailure, EmbeddingSolution, SpanKind, SpanViolation,
                    check_lemma_tables, emit_surface, lemma42_table, lemma43_table,
                    solve_embedding, step9_certificate, verify_solution, xp_multiple)
from .exactcore import RatMatrix, format_rat
from .hall import StepError, format_vector, generate_hall_basis, hall_json, hall_latex, hall_text
from .realize import free_algebra
from .selftest import DEFAULT_SEED, run_all

OK, FAILED, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _dump(data, out=None):
    text = json.dumps(data, indent=1) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _read_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc


def _load_algebra(path):
    data = _read_json(path)
    try:
        alg = StratifiedAlgebra.from_json(data, name=str(path))
    except (KeyError, ValueError, GradingError) as exc:
        raise UsageError(f"--algebra {path}: {exc}") from exc
    d = alg.strata_dims[0]
    J = RatMatrix.from_json(data["J"]) if "J" in data else (st.standard_J(d) if d % 2 == 0 else None)
    gram = RatMatrix.from_json(data["gram"]) if "gram" in data else RatMatrix.identity(d)
    return alg, J, gram


def _load_map(path):
    data = _read_json(path)
    if isinstance(data, dict):
        data = data.get("matrix")
    try:
        return RatMatrix.from_json(data)
    except (TypeError, ValueError) as exc:
        raise UsageError(f"cannot read a matrix from {path}: {exc}") from exc


# -- commands -------------------------------------------------------------------

def cmd_hall(args):
    generate_hall_basis(args.step)
    if args.format == "json":
        _dump(hall_json(args.step), args.out)
    else:
        text = hall_latex(args.step) if args.format == "latex" else hall_text(args.step)
        _write_text(text, args.out)
    return OK


def _write_text(text, out):
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def cmd_structure_constants(args):
    _dump(free_algebra(args.step).to_json(), args.out)
    return OK


def cmd_embed(args):
    sol = solve_embedding(args.step, args.ansatz)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(sol.dumps())
    rep = verify_solution(sol)
    if rep.ok:
        print(f"step {args.step}, {args.ansatz} ansatz: {len(sol.entries)} indices solved and verified")
        return OK
    print(f"step {args.step}, {args.ansatz} ansatz: infeasible or failing indices")
    for e in sol.infeasible:
        print(f"  j={e.j} vector {format_vector(e.vector)}")
    if len(rep.failures) > len(sol.infeasible):
        print(rep.summary())
    return FAILED


def cmd_verify(args):
    data = _read_json(args.solution)
    try:
        sol = EmbeddingSolution.from_json(data)
    except (KeyError, ValueError, TypeError) as exc:
        print(f"malformed solution: {exc}")
        return FAILED
    rep = verify_solution(sol)
    print(rep.summary())
    return OK if rep.ok else FAILED


def cmd_lemmas(args):
    basis = generate_hall_basis(args.step)
    t42, t43 = lemma42_table(args.step), lemma43_table(args.step)
    counts = {}
    for ent in list(t42.values()) + list(t43.values()):
        counts[ent.kind.value] = counts.get(ent.kind.value, 0) + 1
    print(f"step {args.step}: " + ", ".join(f"{k} {v}" for k, v in sorted(counts.items())))
    for j, ent in t43.items():
        if ent.kind is SpanKind.SPECIAL:
            print(f"  special: j={j} {format_vector(basis[j].vector)}: "
                  f"x1 dp_j/dx2 = {format_rat(ent.scalar)} * x4 p_4")
    for j, ent in t43.items():
        if ent.kind is SpanKind.VIOLATION:
            hit = xp_multiple(basis, basis.ring.var(1) * basis[j].monomial.partial(2))
            note = f" = {format_rat(hit[1])} * x{hit[0]} p_{hit[0]}" if hit else ""
            print(f"  violation: j={j} {format_vector(basis[j].vector)}: x1 dp_j/dx2 not in any Span{{p_l}}{note}")
    try:
        check_lemma_tables(args.step)
    except SpanViolation as exc:
        print(exc)
        return FAILED
    return OK


def cmd_counterexample(args):
    try:
        cert = step9_certificate()
    except CertificateFailure as exc:
        print(exc)
        return FAILED
    print(cert.summary())
    return OK


def cmd_surface(args):
    sol = EmbeddingSolution.from_json(_read_json(args.solution))
    rep = verify_solution(sol)
    if not rep.ok:
        print(rep.summary())
        return FAILED
    surf = emit_surface(sol)
    if args.format == "json":
        _dump(surf.to_json(), args.out)
    else:
        _write_text(surf.latex(), args.out)
    return OK


def cmd_check(args):
    alg, J, gram = _load_algebra(args.algebra)
    pred = args.predicate
    if pred == "tight":
        ok, kind = st.is_tight(alg)
        print(f"tight: {ok}" + (f" ({kind.value})" if kind else ""))
        return OK if ok else FAILED
    if pred == "acstructure":
        if J is None:
            raise UsageError("first stratum has odd dimension; no J")
        ok = st.check_ac_structure(alg, J)
        print(f"almost complex structure compatible: {ok}")
        return OK if ok else FAILED
    if args.map is None:
        raise UsageError(f"--predicate {pred} needs --map")
    T = _load_map(args.map)
    T1 = st.first_block(alg, T)
    if pred == "automorphism":
        if T.shape != (alg.dim, alg.dim):
            raise UsageError(f"--map must be {alg.dim}x{alg.dim} for the automorphism check")
        ok = st.is_strata_automorphism(alg, T)
        print(f"strata-preserving automorphism: {ok}")
    elif pred == "conformal":
        ok, lam2 = st.is_conformal(T1, gram)
        print(f"conformal: {ok}" + (f" (lambda^2 = {format_rat(lam2)})" if ok else ""))
    else:
        if J is None:
            raise UsageError("first stratum has odd dimension; no J")
        fn = st.is_cr if pred == "cr" else st.is_anti_cr
        ok = fn(T1, J)
        print(f"{'CR' if pred == 'cr' else 'anti-CR'}: {ok}")
    return OK if ok else FAILED


def cmd_distortion(args):
    if args.tol <= 0:
        raise UsageError("--tol must be positive")
    alg, _, gram = _load_algebra(args.algebra)
    T1 = st.first_block(alg, _load_map(args.map))
    try:
        d = st.distortion(T1, gram, args.tol)
    except st.SingularInput as exc:
        print(exc)
        return FAILED
    print(f"distortion {d.value!r} in [{d.lower}, {d.upper}]" + (" (conformal, exact)" if d.exact else ""))
    return OK


def cmd_product(args):
    algs = [_load_algebra(p)[0] for p in args.factors]
    ds = st.direct_sum(algs)
    if not args.decompose:
        out = ds.algebra.to_json()
        out["factors"] = [list(b) for b in ds.blocks]
        _dump(out, args.out)
        return OK
    T = _load_map(args.decompose)
    if T.shape != (ds.algebra.dim, ds.algebra.dim):
        raise UsageError(f"--decompose map must be {ds.algebra.dim}x{ds.algebra.dim}")
    if not st.is_strata_automorphism(ds.algebra, T):
        print("map is not a strata-preserving automorphism of the product")
        return FAILED
    try:
        sigma, blocks = st.decompose_product_automorphism(T, ds)
    except (st.NotProductCompatible, st.ClassMismatch) as exc:
        print(f"not a product automorphism: {exc}")
        return FAILED
    _dump({"sigma": list(sigma), "blocks": [b.to_json() for b in blocks]}, args.out)
    return OK


def cmd_selftest(args):
    print(f"seed {args.seed}")
    failed = 0
    for name, ok, detail in run_all(args.seed):
        print(f"{'PASS' if ok else 'FAIL'} {name}: {detail}", flush=True)
        failed += not ok
    return OK if not failed else FAILED


# -- parser ---------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="carnotcr", description="Hall bases, CR embeddings and stratified algebras.")
    sub = p.add_subparsers(dest="command", required=True)

    def step_cmd(name, help, **kw):
        c = sub.add_parser(name, help=help)
        c.add_argument("--step", type=int, required=True, **kw)
        return c

    c = step_cmd("hall", "Hall basis with vectors and monomials")
    c.add_argument("--format", choices=["json", "latex", "text"], default="text")
    c.add_argument("--out")
    c.set_defaults(func=cmd_hall)

    c = step_cmd("structure-constants", "structure constants of f_{2,s}")
    c.add_argument("--format", choices=["json"], default="json")
    c.add_argument("--out")
    c.set_defaults(func=cmd_structure_constants)

    c = step_cmd("embed", "solve the embedding equations")
    c.add_argument("--ansatz", choices=[a.value for a in Ansatz], default="restricted")
    c.add_argument("--out")
    c.set_defaults(func=cmd_embed)

    c = sub.add_parser("verify", help="verify a solution file")
    c.add_argument("--solution", required=True)
    c.set_defaults(func=cmd_verify)

    c = step_cmd("lemmas", "span tables for x1 p_k dp_j/dx_k and x1 dp_j/dx_2")
    c.set_defaults(func=cmd_lemmas)

    c = sub.add_parser("counterexample", help="step-9 obstruction certificate")
    c.set_defaults(func=cmd_counterexample)

    c = sub.add_parser("surface", help="embedded surface from a solution file")
    c.add_argument("--solution", required=True)
    c.add_argument("--format", choices=["json", "latex"], default="json")
    c.add_argument("--out")
    c.set_defaults(func=cmd_surface)

    c = sub.add_parser("check", help="predicates on an algebra and a map")
    c.add_argument("--algebra", required=True)
    c.add_argument("--map")
    c.add_argument("--predicate", required=True,
                   choices=["conformal", "cr", "anticr", "tight", "automorphism", "acstructure"])
    c.set_defaults(func=cmd_check)

    c = sub.add_parser("distortion", help="distortion of a map on the first stratum")
    c.add_argument("--algebra", required=True)
    c.add_argument("--map", required=True)
    c.add_argument("--tol", type=float, default=1e-12)
    c.set_defaults(func=cmd_distortion)

    c = sub.add_parser("product", help="direct sums and product automorphisms")
    c.add_argument("--factors", nargs="+", required=True)
    c.add_argument("--decompose")
    c.add_argument("--out")
    c.set_defaults(func=cmd_product)

    c = sub.add_parser("selftest", help="run the property suite")
    c.add_argument("--seed", type=int, default=DEFAULT_SEED)
    c.set_defaults(func=cmd_selftest)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    try:
        return args.func(args)
    except StepError as exc:
        print(f"carnotcr {args.command}: --step: {exc}", file=sys.stderr)
        return USAGE
    except UsageError as exc:
        print(f"carnotcr {args.command}: {exc}", file=sys.stderr)
        return USAGE


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
