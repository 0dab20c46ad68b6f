"""Hall basis of the free nilpotent Lie algebra on two generators.

Basis elements are numbered from 1 in the usual way: ``X_1, X_2`` are the
generators, ``X_3 = [X_2, X_1]``, ``X_4 = [X_3, X_1]``, ``X_5 = [X_3, X_2]``,
and so on. Each non-generator unfolds into a left-normed bracket
``[[..[[X_2, X_1], X_{i_2}], ..], X_{i_m}]`` recorded as the vector
``(2, 1, i_2, .., i_m)``; from it come the multi-index ``I(j)``, the
bracket count ``d(j)`` and the monomial ``p_j = (-1)^d / I! * x^I``.
"""
from __future__ import annotations

import math
import os
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .poly import Poly, PolyRing

DEFAULT_MAX_STEP = 10
MAX_STEP_ENV = "CARNOTCR_MAX_STEP"


class StepError(ValueError):
    """Requested step is outside ``1..max_step``."""


def max_step() -> int:
    raw = os.environ.get(MAX_STEP_ENV)
    return int(raw) if raw else DEFAULT_MAX_STEP


def check_step(step: int, minimum: int = 1) -> int:
    cap = max_step()
    if not isinstance(step, int) or step < minimum or step > cap:
        raise StepError(f"step must be an integer in {minimum}..{cap}, got {step!r}")
    return step


@dataclass(frozen=True)
class HallElement:
    index: int
    height: int
    left: int | None
    right: int | None
    vector: tuple  # (2, 1, i_2, ..) for non-generators, (index,) for generators
    multi_index: tuple  # counts (a_1, .., a_r), trailing zeros trimmed
    bracket_count: int
    monomial: Poly | None

    @property
    def is_generator(self) -> bool:
        return self.left is None

    def multi_index_of(self, k: int) -> int:
        return self.multi_index[k - 1] if k <= len(self.multi_index) else 0


@dataclass(frozen=True)
class HallBasis:
    step: int
    elements: tuple
    stratum_offsets: tuple  # stratum_offsets[h-1] = first index of height h

    @property
    def dim(self) -> int:
        return len(self.elements)

    @property
    def ring(self) -> PolyRing:
        return PolyRing(self.heights)

    @property
    def heights(self) -> tuple:
        return tuple(e.height for e in self.elements)

    def __getitem__(self, j: int) -> HallElement:
        if j < 1:
            raise IndexError(j)
        return self.elements[j - 1]

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    def stratum(self, h: int) -> list[HallElement]:
        return [e for e in self.elements if e.height == h]

    def strata_dims(self) -> tuple:
        c = Counter(self.heights)
        return tuple(c[h] for h in range(1, self.step + 1))

    def index_of_vector(self, vector) -> int:
        vector = tuple(vector)
        for e in self.elements:
            if e.vector == vector:
                return e.index
        raise KeyError(vector)

    def monomial_lookup(self) -> dict:
        """Map from the monomial's exponent key to ``(index, coefficient)``."""
        out = {}
        for e in self.elements[2:]:
            ((mono, c),) = e.monomial.terms.items()
            out[mono] = (e.index, c)
        return out


def is_hall_pair(elements, a: int, b: int) -> bool:
    """Whether ``[X_a, X_b]`` is admissible: ``a > b``, and ``b >= w`` if ``X_a = [z, w]``."""
    if a <= b:
        return False
    ea = elements[a - 1]
    return ea.right is None or b >= ea.right


def _hall_words(step: int) -> list[tuple]:
    """(height, left, right) triples in canonical order."""
    words = [(1, None, None), (1, None, None)]
    by_height = {1: [1, 2]}

    class _E:  # minimal stand-in for is_hall_pair during generation
        __slots__ = ("right",)

        def __init__(self, right):
            self.right = right

    shim = [_E(None), _E(None)]
    for ell in range(2, step + 1):
        new = []
        for lb in range(1, ell):
            la = ell - lb
            for a in by_height.get(la, ()):
                for b in by_height.get(lb, ()):
                    if is_hall_pair(shim, a, b):
                        new.append((ell, a, b))
        # ordering: (length(b), a, b); the loops above already produce it
        start = len(words) + 1
        words.extend(new)
        shim.extend(_E(b) for _, _, b in new)
        by_height[ell] = list(range(start, start + len(new)))
    return words


@lru_cache(maxsize=None)
def generate_hall_basis(step: int) -> HallBasis:
    check_step(step)
    words = _hall_words(step)
    heights = tuple(h for h, _, _ in words)
    ring = PolyRing(heights)
    elements = []
    vectors: list[tuple] = []
    for idx, (h, a, b) in enumerate(words, start=1):
        if a is None:
            vec = (idx,)
            elements.append(HallElement(idx, h, None, None, vec, (), 0, None))
            vectors.append(vec)
            continue
        vec = (2, 1) if a == 2 else vectors[a - 1] + (b,)
        vectors.append(vec)
        counts = Counter(vec[1:])
        top = max(counts)
        mi = tuple(counts.get(r, 0) for r in range(1, top + 1))
        d = len(vec) - 1
        denom = math.prod(math.factorial(x) for x in mi)
        mono = ring.monomial(dict(counts), Fraction((-1) ** d, denom))
        elements.append(HallElement(idx, h, a, b, vec, mi, d, mono))
    offsets = []
    for hh in range(1, step + 1):
        offsets.append(heights.index(hh) + 1)
    return HallBasis(step, tuple(elements), tuple(offsets))


def dimension(step: int) -> int:
    return generate_hall_basis(step).dim


def monomial_table(step: int) -> dict[int, list[tuple[tuple, Poly]]]:
    """``{height: [(vector, p_j), ..]}`` for heights ``2..step``."""
    check_step(step, minimum=2)
    basis = generate_hall_basis(step)
    table: dict[int, list] = {h: [] for h in range(2, step + 1)}
    for e in basis.elements[2:]:
        table[e.height].append((e.vector, e.monomial))
    return table


def format_vector(vec) -> str:
    return "(" + ",".join(str(v) for v in vec) + ")"


def hall_json(step: int) -> dict:
    basis = generate_hall_basis(step)
    out = []
    for e in basis.elements:
        out.append({
            "index": e.index,
            "height": e.height,
            "vector": list(e.vector),
            "multi_index": list(e.multi_index),
            "d": e.bracket_count,
            "monomial": e.monomial.to_json() if e.monomial is not None else None,
        })
    return {"step": step, "elements": out}


def hall_text(step: int) -> str:
    basis = generate_hall_basis(step)
    lines = []
    for e in basis.elements:
        if e.is_generator:
            lines.append(f"X_{e.index}  height 1  generator")
        else:
            lines.append(
                f"X_{e.index}  height {e.height}  [X_{e.left}, X_{e.right}]  "
                f"{format_vector(e.vector)}  p_{e.index} = {e.monomial}"
            )
    return "\n".join(lines)


def hall_latex(step: int, per_line: int = 2) -> str:
    """A LaTeX table of vectors and monomials by step, laid out like the
    classical 'Monomials up to step s' table."""
    basis = generate_hall_basis(step)
    rows = []
    for h in range(2, step + 1):
        elems = basis.stratum(h)
        vecs = [format_vector(e.vector) for e in elems]
        monos = [f"p_{{{e.index}}}={e.monomial.format(latex=True)}" for e in elems]
        vcell = "\\\\".join(",\\,".join(f"${v}$" for v in vecs[i:i + per_line])
                            for i in range(0, len(vecs), per_line))
        mcell = "\\\\".join("$" + ",\\,".join(monos[i:i + per_line]) + "$"
                            for i in range(0, len(monos), per_line))
        rows.append(f"${h}$ & \\makecell[l]{{{vcell}}} & \\makecell[l]{{{mcell}}}\\\\\n\\hline")
    return "\n".join([
        "\\begin{table}[t]",
        "\\scriptsize",
        f"\\caption{{Monomials up to step ${step}$.}}",
        "\\begin{center}",
        "\\begin{tabular}{|c|l|c|}",
        "\\hline",
        "Step & Vectors & Monomials\\\\",
        "\\hline",
        *rows,
        "\\end{tabular}",
        "\\end{center}",
        "\\end{table}",
    ])
