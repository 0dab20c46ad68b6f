"""Reference values transcribed from the classical table of Hall monomials
up to step 8, used by the test suite and ``selftest``.

The transcription keeps printed coefficients verbatim and identifies
entries by vector rather than by printed label, since the printed labels
repeat one index at step 7 and restart one too low at step 8.
"""
from __future__ import annotations

import re
from fractions import Fraction

# step -> "vector: monomial" lines, coefficients as printed
_TABLE1 = {
    2: """(2,1): -x1""",
    3: """(2,1,1): 1/2 x1^2
          (2,1,2): x1 x2""",
    4: """(2,1,1,1): -1/6 x1^3
          (2,1,1,2): -1/2 x1^2 x2
          (2,1,2,2): -1/2 x1 x2^2""",
    5: """(2,1,1,1,1): 1/24 x1^4
          (2,1,1,1,2): 1/6 x1^3 x2
          (2,1,1,2,2): 1/4 x1^2 x2^2
          (2,1,2,2,2): 1/6 x1 x2^3
          (2,1,1,3): -1/2 x1^2 x3
          (2,1,2,3): -x1 x2 x3""",
    6: """(2,1,1,1,1,1): -1/120 x1^5
          (2,1,1,1,1,2): -1/24 x1^4 x2
          (2,1,1,1,2,2): -1/12 x1^3 x2^2
          (2,1,1,2,2,2): -1/12 x1^2 x2^3
          (2,1,2,2,2,2): -1/24 x1 x2^4
          (2,1,1,1,3): 1/6 x1^3 x3
          (2,1,1,2,3): 1/2 x1^2 x2 x3
          (2,1,2,2,3): 1/2 x1 x2^2 x3
          (2,1,2,4): -x1 x2 x4""",
    7: """(2,1,1,1,1,1,1): 1/720 x1^6
          (2,1,1,1,1,1,2): 1/120 x1^5 x2
          (2,1,1,1,1,2,2): 1/48 x1^4 x2^2
          (2,1,1,1,2,2,2): 1/36 x1^3 x2^3
          (2,1,1,2,2,2,2): 1/48 x1^2 x2^4
          (2,1,2,2,2,2,2): 1/120 x1 x2^5
          (2,1,1,1,1,3): -1/24 x1^4 x3
          (2,1,1,1,2,3): -1/6 x1^3 x2 x3
          (2,1,1,2,2,3): -1/4 x1^2 x2^2 x3
          (2,1,2,2,2,3): -1/6 x1 x2^3 x3
          (2,1,1,3,3): 1/4 x1^2 x3^2
          (2,1,2,3,3): 1/2 x1 x2 x3^2
          (2,1,1,1,4): 1/6 x1^3 x4
          (2,1,1,1,5): 1/6 x1^3 x5
          (2,1,1,2,4): 1/2 x1^2 x2 x4
          (2,1,1,2,5): 1/2 x1^2 x2 x5
          (2,1,2,2,4): 1/2 x1 x2^2 x4
          (2,1,2,2,5): 1/2 x1 x2^2 x5""",
    8: """(2,1,1,1,1,1,1,1): -1/5040 x1^7
          (2,1,1,1,1,1,1,2): -1/720 x1^6 x2
          (2,1,1,1,1,1,2,2): -1/240 x1^5 x2^2
          (2,1,1,1,1,2,2,2): -1/144 x1^4 x2^3
          (2,1,1,1,2,2,2,2): -1/144 x1^3 x2^4
          (2,1,1,2,2,2,2,2): -1/240 x1^2 x2^5
          (2,1,2,2,2,2,2,2): -1/720 x1 x2^6
          (2,1,1,1,1,1,3): 1/120 x1^5 x3
          (2,1,1,1,1,2,3): 1/24 x1^4 x2 x3
          (2,1,1,1,2,2,3): 1/12 x1^3 x2^2 x3
          (2,1,1,2,2,2,3): 1/12 x1^2 x2^3 x3
          (2,1,2,2,2,2,3): 1/24 x1 x2^4 x3
          (2,1,1,1,3,3): -1/12 x1^3 x3^2
          (2,1,1,2,3,3): -1/4 x1^2 x2 x3^2
          (2,1,2,2,3,3): -1/4 x1 x2^2 x3^2
          (2,1,1,1,1,4): 1/24 x1^4 x4
          (2,1,1,1,1,5): -1/24 x1^4 x5
          (2,1,1,1,2,4): -1/6 x1^3 x2 x4
          (2,1,1,1,2,5): -1/6 x1^3 x2 x5
          (2,1,1,2,2,4): -1/4 x1^2 x2^2 x4
          (2,1,1,2,2,5): -1/4 x1^2 x2^2 x5
          (2,1,2,2,2,4): -1/6 x1 x2^3 x4
          (2,1,2,2,2,5): -1/6 x1 x2^3 x5
          (2,1,1,3,4): 1/2 x1^2 x3 x4
          (2,1,1,3,5): 1/2 x1^2 x3 x5
          (2,1,2,3,4): x1 x2 x3 x4
          (2,1,2,3,5): x1 x2 x3 x5
          (2,1,1,2,6): 1/2 x1^2 x2 x6
          (2,1,2,2,6): 1/2 x1 x2^2 x6
          (2,1,2,2,7): 1/2 x1 x2^2 x7""",
}

# Printed sign disagrees with (-1)^d / I! (d = 5 here) and with the
# realization: flipping it breaks X_j = d/dx_j at the origin.
TABLE1_ERRATA = {(2, 1, 1, 1, 1, 4): (Fraction(-1, 24), {1: 4, 4: 1})}

_LINE = re.compile(r"^\(([\d,]+)\):\s*(-)?\s*(\d+/\d+)?\s*(.*)$")


def _parse_monomial(text: str):
    sign, frac, rest = text
    coeff = Fraction(frac) if frac else Fraction(1)
    if sign:
        coeff = -coeff
    exps = {}
    for factor in rest.split():
        var, _, e = factor.partition("^")
        exps[int(var[1:])] = int(e) if e else 1
    return coeff, exps


def table1(corrected: bool = False) -> dict[int, dict[tuple, tuple]]:
    """``{step: {vector: (coefficient, {var: exponent})}}``."""
    out = {}
    for step, block in _TABLE1.items():
        rows = {}
        for line in block.strip().splitlines():
            m = _LINE.match(line.strip())
            if not m:
                raise ValueError(f"bad golden line {line!r}")
            vec = tuple(int(v) for v in m.group(1).split(","))
            rows[vec] = _parse_monomial(m.group(2, 3, 4))
            if corrected and vec in TABLE1_ERRATA:
                rows[vec] = TABLE1_ERRATA[vec]
        out[step] = rows
    return out


# Witt dimensions of the free Lie algebra on two generators, heights 1..9
WITT_DIMS = (2, 1, 2, 3, 6, 9, 18, 30, 56)

# Taylor coefficients of z / (1 - exp(-z)) as listed for the left-invariant frame
BCH_PREFIX = (Fraction(1), Fraction(1, 2), Fraction(1, 12), Fraction(0), Fraction(-1, 720))
