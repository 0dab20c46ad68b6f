"""Structure constants and stratified Lie algebras.

Basis vectors are numbered from 1, stratum by stratum, and vectors are
plain sequences of coordinates (Fraction, or CRat for complexified
computations). ``constants.table[(i, j)]`` with ``i < j`` lists the terms
``(k, c)`` of ``[e_i, e_j] = sum c * e_k``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Mapping, Sequence

from .exactcore import RatMatrix, format_rat, parse_rat


class GradingError(ValueError):
    """The constants are not compatible with the declared strata."""


@dataclass(frozen=True)
class StructureConstants:
    dim: int
    stratum_of: tuple  # stratum_of[k-1] = height of e_k
    table: Mapping = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for (i, j), terms in self.table.items():
            if i == j:
                if any(c for _, c in terms):
                    raise ValueError(f"[e_{i}, e_{i}] must vanish")
                continue
            terms = [(k, Fraction(c)) for k, c in terms]
            if i > j:
                i, j = j, i
                terms = [(k, -c) for k, c in terms]
            acc = dict(clean.get((i, j), ()))
            for k, c in terms:
                if not 1 <= k <= self.dim:
                    raise IndexError(f"basis index {k} outside 1..{self.dim}")
                acc[k] = acc.get(k, 0) + c
            acc = tuple(sorted((k, c) for k, c in acc.items() if c))
            if acc:
                clean[(i, j)] = acc
            else:
                clean.pop((i, j), None)
        object.__setattr__(self, "table", dict(sorted(clean.items())))
        object.__setattr__(self, "stratum_of", tuple(self.stratum_of))
        if len(self.stratum_of) != self.dim:
            raise ValueError("stratum_of must list one height per basis vector")

    @classmethod
    def from_strata(cls, strata_dims: Sequence[int], table) -> "StructureConstants":
        heights = [h for h, d in enumerate(strata_dims, start=1) for _ in range(d)]
        return cls(len(heights), tuple(heights), table)

    @property
    def strata_dims(self) -> tuple:
        top = max(self.stratum_of) if self.stratum_of else 0
        return tuple(self.stratum_of.count(h) for h in range(1, top + 1))

    def bracket_basis(self, i: int, j: int) -> tuple:
        """Terms of ``[e_i, e_j]``."""
        if i == j:
            return ()
        if i < j:
            return self.table.get((i, j), ())
        return tuple((k, -c) for k, c in self.table.get((j, i), ()))

    def bracket(self, x: Sequence, y: Sequence) -> list:
        """``[x, y]`` for coordinate vectors of length ``dim``."""
        zero = (x[0] * 0) if len(x) else Fraction(0)
        out = [zero] * self.dim
        for (i, j), terms in self.table.items():
            a = x[i - 1] * y[j - 1] - x[j - 1] * y[i - 1]
            if a != 0:
                for k, c in terms:
                    out[k - 1] = out[k - 1] + a * c
        return out

    def ad_matrix(self, x: Sequence) -> RatMatrix:
        cols = [self.bracket(x, unit(self.dim, k)) for k in range(1, self.dim + 1)]
        return RatMatrix.from_columns(cols)

    def is_graded(self) -> bool:
        for (i, j), terms in self.table.items():
            h = self.stratum_of[i - 1] + self.stratum_of[j - 1]
            if any(self.stratum_of[k - 1] != h for k, _ in terms):
                return False
        return True

    def jacobi_violations(self, triples=None) -> list[tuple]:
        """Basis triples ``(i, j, k)`` where the Jacobi identity fails."""
        n = self.dim
        if triples is None:
            triples = combinations(range(1, n + 1), 3)
        bad = []
        for i, j, k in triples:
            ei, ej, ek = unit(n, i), unit(n, j), unit(n, k)
            a = self.bracket(ei, self.bracket(ej, ek))
            b = self.bracket(ej, self.bracket(ek, ei))
            c = self.bracket(ek, self.bracket(ei, ej))
            if any(x + y + z != 0 for x, y, z in zip(a, b, c)):
                bad.append((i, j, k))
        return bad

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "strata": list(self.strata_dims),
            "brackets": [
                {"i": i, "j": j, "terms": [[k, format_rat(c)] for k, c in terms]}
                for (i, j), terms in self.table.items()
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "StructureConstants":
        strata = data["strata"]
        table = {}
        for b in data["brackets"]:
            key = (int(b["i"]), int(b["j"]))
            terms = [(int(k), parse_rat(c)) for k, c in b["terms"]]
            if key in table:
                raise ValueError(f"duplicate bracket entry {key}")
            table[key] = terms
        sc = cls.from_strata(strata, table)
        if sc.dim != data["dim"]:
            raise ValueError("dim disagrees with strata")
        return sc


def unit(n: int, k: int) -> list:
    v = [Fraction(0)] * n
    v[k - 1] = Fraction(1)
    return v


@dataclass(frozen=True)
class StratifiedAlgebra:
    """A stratified Lie algebra given by graded structure constants.

    Construction validates the grading, that the first stratum generates,
    and that the top stratum is nonzero.
    """

    constants: StructureConstants
    name: str = ""

    def __post_init__(self):
        validate_stratified(self.constants)

    @classmethod
    def from_brackets(cls, strata_dims, table, name="") -> "StratifiedAlgebra":
        return cls(StructureConstants.from_strata(strata_dims, table), name)

    @property
    def dim(self) -> int:
        return self.constants.dim

    @property
    def strata_dims(self) -> tuple:
        return self.constants.strata_dims

    @property
    def step(self) -> int:
        return len(self.strata_dims)

    def stratum_indices(self, h: int) -> list[int]:
        return [k for k, s in enumerate(self.constants.stratum_of, start=1) if s == h]

    def bracket(self, x, y) -> list:
        return self.constants.bracket(x, y)

    def to_json(self) -> dict:
        return self.constants.to_json()

    @classmethod
    def from_json(cls, data: dict, name="") -> "StratifiedAlgebra":
        return cls(StructureConstants.from_json(data), name)

    @classmethod
    def load(cls, path) -> "StratifiedAlgebra":
        with open(path) as fh:
            return cls.from_json(json.load(fh), name=str(path))

    def __repr__(self):
        label = f"{self.name} " if self.name else ""
        return f"<StratifiedAlgebra {label}strata={self.strata_dims}>"


def validate_stratified(sc: StructureConstants) -> None:
    heights = sc.stratum_of
    if list(heights) != sorted(heights):
        raise GradingError("basis must be ordered stratum by stratum")
    if not heights or heights[0] != 1:
        raise GradingError("the first stratum must be nonempty")
    dims = sc.strata_dims
    if any(d == 0 for d in dims):
        raise GradingError(f"empty stratum in {dims}")
    if not sc.is_graded():
        raise GradingError("brackets do not respect the grading")
    # [g_{-h}, g_{-1}] must span g_{-h-1}
    n = sc.dim
    first = [k for k in range(1, n + 1) if heights[k - 1] == 1]
    for h in range(1, len(dims)):
        lower = [k for k in range(1, n + 1) if heights[k - 1] == h]
        target = [k for k in range(1, n + 1) if heights[k - 1] == h + 1]
        vecs = []
        for a in lower:
            for b in first:
                v = sc.bracket(unit(n, a), unit(n, b))
                vecs.append([v[k - 1] for k in target])
        if RatMatrix.from_rows(vecs).rank() != len(target):
            raise GradingError(f"stratum {h + 1} is not generated by brackets with the first stratum")
