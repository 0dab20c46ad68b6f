"""Sparse polynomials over the rationals with weighted (graded) variables,
and first-order polynomial differential operators (vector fields).

Variables are numbered ``1..nvars`` to match the coordinates ``x_1..x_n``
used for Hall bases. A monomial is stored sparsely as a sorted tuple of
``(variable, exponent)`` pairs with positive exponents; the empty tuple is
the constant monomial.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .exactcore import format_rat, parse_rat

Monomial = tuple  # tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class PolyRing:
    """Polynomial ring Q[x_1..x_n] where ``x_k`` carries weight ``weights[k-1]``."""

    weights: tuple

    def __post_init__(self):
        w = tuple(int(x) for x in self.weights)
        if any(x <= 0 for x in w):
            raise ValueError("weights must be positive integers")
        object.__setattr__(self, "weights", w)

    @property
    def nvars(self) -> int:
        return len(self.weights)

    def weight(self, k: int) -> int:
        return self.weights[k - 1]

    def zero(self) -> "Poly":
        return Poly(self, {})

    def one(self) -> "Poly":
        return self.const(1)

    def const(self, c) -> "Poly":
        c = Fraction(c)
        return Poly(self, {(): c} if c else {})

    def var(self, k: int) -> "Poly":
        self._check_var(k)
        return Poly(self, {((k, 1),): Fraction(1)})

    def monomial(self, exps: Mapping[int, int] | Iterable, coeff=1) -> "Poly":
        """Monomial ``coeff * prod x_k^e``; ``exps`` is a ``{k: e}`` map or a
        dense exponent vector of length ``nvars``."""
        if isinstance(exps, Mapping):
            items = exps.items()
        else:
            exps = list(exps)
            if len(exps) != self.nvars:
                raise ValueError("dense exponent vector has wrong length")
            items = ((k + 1, e) for k, e in enumerate(exps))
        mono = []
        for k, e in sorted(items):
            self._check_var(k)
            if e < 0:
                raise ValueError("negative exponent")
            if e:
                mono.append((k, int(e)))
        c = Fraction(coeff)
        return Poly(self, {tuple(mono): c} if c else {})

    def _check_var(self, k: int):
        if not 1 <= k <= self.nvars:
            raise IndexError(f"variable index {k} outside 1..{self.nvars}")

    def mono_degree(self, mono: Monomial) -> int:
        return sum(self.weights[k - 1] * e for k, e in mono)

    def sort_key(self, mono: Monomial):
        """Canonical order: weighted degree, then the multiset of variable
        indices read as an ascending word (x1^2 < x1*x2 < x2^2)."""
        word = tuple(k for k, e in mono for _ in range(e))
        return (self.mono_degree(mono), word)


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    out = []
    i = j = 0
    while i < len(a) and j < len(b):
        ka, ea = a[i]
        kb, eb = b[j]
        if ka == kb:
            out.append((ka, ea + eb))
            i += 1
            j += 1
        elif ka < kb:
            out.append(a[i])
            i += 1
        else:
            out.append(b[j])
            j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    return tuple(out)


def mono_exponent(mono: Monomial, k: int) -> int:
    for v, e in mono:
        if v == k:
            return e
        if v > k:
            break
    return 0


class Poly:
    """Immutable sparse polynomial. ``terms`` maps monomials to nonzero Fractions."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: PolyRing, terms: Mapping):
        self.ring = ring
        self.terms = {m: c for m, c in terms.items() if c}
        self._hash = None

    # -- construction helpers ---------------------------------------------
    def _new(self, terms) -> "Poly":
        p = Poly.__new__(Poly)
        p.ring = self.ring
        p.terms = terms
        p._hash = None
        return p

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.ring != self.ring:
                raise ValueError("polynomials live in different rings")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.const(other)
        return NotImplemented

    # -- arithmetic --------------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return self._new(out)

    __radd__ = __add__

    def __neg__(self):
        return self._new({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return self._new({})
            return self._new({m: c * other for m, c in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mono_mul(m1, m2)
                v = out.get(m, 0) + c1 * c2
                if v:
                    out[m] = v
                else:
                    out.pop(m, None)
        return self._new(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = self.ring.one()
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    # -- calculus ------------------------------------------------------------
    def partial(self, k: int) -> "Poly":
        """Exact partial derivative with respect to ``x_k``."""
        self.ring._check_var(k)
        out: dict = {}
        for m, c in self.terms.items():
            for pos, (v, e) in enumerate(m):
                if v == k:
                    nm = m[:pos] + (((v, e - 1),) if e > 1 else ()) + m[pos + 1:]
                    out[nm] = out.get(nm, 0) + c * e
                    break
                if v > k:
                    break
        return self._new({m: c for m, c in out.items() if c})

    def variables(self) -> set[int]:
        return {k for m in self.terms for k, _ in m}

    def weighted_degree(self) -> int | None:
        """Common weighted degree of all terms, or ``None`` if not homogeneous.

        The zero polynomial has no degree and raises ``ValueError``.
        """
        if not self.terms:
            raise ValueError("the zero polynomial has no weighted degree")
        degs = {self.ring.mono_degree(m) for m in self.terms}
        return degs.pop() if len(degs) == 1 else None

    def coeff(self, mono) -> Fraction:
        if isinstance(mono, Poly):
            ((mono, _),) = mono.terms.items()
        return self.terms.get(tuple(mono), Fraction(0))

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def evaluate(self, point) -> Fraction:
        """Evaluate at ``point`` (a sequence of length nvars, or a ``{k: value}`` map)."""
        get = point.get if isinstance(point, Mapping) else (lambda k, d=0: point[k - 1])
        total = Fraction(0)
        for m, c in self.terms.items():
            t = c
            for k, e in m:
                t *= Fraction(get(k, 0)) ** e
            total += t
        return total

    # -- output ------------------------------------------------------------
    def sorted_terms(self) -> list:
        return sorted(self.terms.items(), key=lambda mc: self.ring.sort_key(mc[0]))

    def dense_exponents(self, mono: Monomial) -> list[int]:
        exps = [0] * self.ring.nvars
        for k, e in mono:
            exps[k - 1] = e
        return exps

    def to_json(self) -> dict:
        return {
            "nvars": self.ring.nvars,
            "weights": list(self.ring.weights),
            "terms": [
                {"coeff": format_rat(c), "exps": self.dense_exponents(m)}
                for m, c in self.sorted_terms()
            ],
        }

    @classmethod
    def from_json(cls, data: dict, ring: PolyRing | None = None) -> "Poly":
        r = PolyRing(tuple(data["weights"]))
        if len(r.weights) != data["nvars"]:
            raise ValueError("nvars disagrees with weights")
        if ring is not None and ring != r:
            raise ValueError("polynomial ring mismatch")
        out = r.zero()
        for t in data["terms"]:
            out = out + r.monomial(t["exps"], parse_rat(t["coeff"]))
        return out

    def format(self, names=None, latex: bool = False) -> str:
        """Human-readable form, e.g. ``-1/2*x1^2*x2 + x4``.

        ``names`` maps a variable index to its printed name.
        """
        if names is None:
            names = (lambda k: f"x_{{{k}}}" if k > 9 else f"x_{k}") if latex else (lambda k: f"x{k}")
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            sign = "-" if c < 0 else "+"
            a = abs(c)
            factors = []
            for k, e in m:
                nm = names(k)
                if e == 1:
                    factors.append(nm)
                else:
                    factors.append(f"{nm}^{{{e}}}" if latex and e > 9 else f"{nm}^{e}")
            if latex:
                if a == 1 and factors:
                    body = "".join(factors)
                elif a.denominator == 1:
                    body = f"{a.numerator}" + "".join(factors)
                else:
                    body = f"\\frac{{{a.numerator}}}{{{a.denominator}}}" + "".join(factors)
            else:
                if a == 1 and factors:
                    body = "*".join(factors)
                else:
                    body = "*".join([format_rat(a)] + factors)
            parts.append((sign, body))
        head_sign, head = parts[0]
        out = ("-" if head_sign == "-" else "") + head
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __str__(self):
        return self.format()

    def __repr__(self):
        return f"Poly({self.format()})"


class VField:
    """First-order operator ``sum_k coeff_k * d/dx_k`` with polynomial coefficients.

    Only nonzero coefficients are stored; ``coeff(k)`` returns zero for the rest.
    """

    __slots__ = ("ring", "_coeffs")

    def __init__(self, ring: PolyRing, coeffs: Mapping[int, Poly] | Iterable[Poly]):
        self.ring = ring
        if isinstance(coeffs, Mapping):
            items = coeffs.items()
        else:
            coeffs = list(coeffs)
            if len(coeffs) != ring.nvars:
                raise ValueError("need one coefficient per variable")
            items = ((k + 1, p) for k, p in enumerate(coeffs))
        out = {}
        for k, p in items:
            ring._check_var(k)
            if p.ring != ring:
                raise ValueError("coefficient ring mismatch")
            if p:
                out[k] = p
        self._coeffs = dict(sorted(out.items()))

    @classmethod
    def coordinate(cls, ring: PolyRing, k: int) -> "VField":
        return cls(ring, {k: ring.one()})

    @property
    def coeffs(self) -> tuple:
        return tuple(self.coeff(k) for k in range(1, self.ring.nvars + 1))

    def coeff(self, k: int) -> Poly:
        return self._coeffs.get(k) or self.ring.zero()

    def items(self):
        return self._coeffs.items()

    def support(self) -> list[int]:
        return list(self._coeffs)

    def __call__(self, p: Poly) -> Poly:
        return vf_apply(self, p)

    def __add__(self, other: "VField") -> "VField":
        self._check(other)
        out = dict(self._coeffs)
        for k, p in other._coeffs.items():
            out[k] = out[k] + p if k in out else p
        return VField(self.ring, out)

    def __neg__(self):
        return VField(self.ring, {k: -p for k, p in self._coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s) -> "VField":
        return VField(self.ring, {k: p * s for k, p in self._coeffs.items()})

    def __rmul__(self, s):
        if isinstance(s, (int, Fraction)):
            return self.scale(s)
        if isinstance(s, Poly):
            return VField(self.ring, {k: s * p for k, p in self._coeffs.items()})
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, VField):
            return NotImplemented
        return self.ring == other.ring and self._coeffs == other._coeffs

    def __hash__(self):
        return hash((self.ring, tuple(self._coeffs.items())))

    def is_zero(self) -> bool:
        return not self._coeffs

    def __bool__(self):
        return bool(self._coeffs)

    def at_origin(self) -> list[Fraction]:
        """Constant terms of the coefficients (the field's value at 0)."""
        return [self.coeff(k).coeff(()) for k in range(1, self.ring.nvars + 1)]

    def _check(self, other):
        if self.ring != other.ring:
            raise ValueError("vector fields live over different rings")

    def format(self, names=None) -> str:
        if names is None:
            names = lambda k: f"x{k}"
        if not self._coeffs:
            return "0"
        out = ""
        for k, p in sorted(self._coeffs.items()):
            body = p.format(names)
            sign = " + "
            if len(p.terms) > 1:
                body = f"({body})"
            elif body.startswith("-"):
                sign, body = " - ", body[1:]
            term = f"d{names(k)}" if body == "1" else f"{body}*d{names(k)}"
            out += (sign if out else sign.strip().replace("+", "")) + term
        return out

    def __repr__(self):
        return f"VField({self.format()})"


def vf_apply(V: VField, p: Poly) -> Poly:
    """``V(p) = sum_k V_k * dp/dx_k``."""
    if V.ring != p.ring:
        raise ValueError("field and polynomial live over different rings")
    out = p.ring.zero()
    pv = p.variables()
    for k, c in V.items():
        if k in pv:
            out = out + c * p.partial(k)
    return out


def vf_bracket(V: VField, W: VField) -> VField:
    """Commutator ``[V, W] = VW - WV``; the ``d/dx_k`` coefficient is ``V(W_k) - W(V_k)``."""
    V._check(W)
    out = {}
    for k in set(V.support()) | set(W.support()):
        c = vf_apply(V, W.coeff(k)) - vf_apply(W, V.coeff(k))
        if c:
            out[k] = c
    return VField(V.ring, out)
