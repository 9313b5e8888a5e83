"""Independent oracles shared by the test modules.

Nothing here imports the package's arithmetic: values are recomputed with
plain integer polynomials, sympy, or 100-digit mpmath.
"""

from __future__ import annotations

import sys
from fractions import Fraction

import mpmath
import pytest

DPS = 100


def poly_divmod(num, den):
    """Long division of integer polynomials (low -> high coefficients)."""
    num = list(num)
    out = [0] * max(len(num) - len(den) + 1, 1)
    lead = den[-1]
    while len(num) >= len(den) and any(num):
        shift = len(num) - len(den)
        q, r = divmod(num[-1], lead)
        assert r == 0
        out[shift] = q
        for i, c in enumerate(den):
            num[shift + i] -= q * c
        while num and num[-1] == 0:
            num.pop()
    return out, num


def cos_pi(p, q=1, dps=DPS):
    """cos(p pi / q) to dps digits."""
    with mpmath.workdps(dps):
        return mpmath.cos(mpmath.pi * mpmath.mpf(p) / q)


def sin_pi(p, q=1, dps=DPS):
    with mpmath.workdps(dps):
        return mpmath.sin(mpmath.pi * mpmath.mpf(p) / q)


def combo_value(terms, fn=cos_pi, dps=DPS):
    """sum(c * fn(angle)) for (c, Fraction angle-in-units-of-pi) terms."""
    with mpmath.workdps(dps):
        total = mpmath.mpf(0)
        for c, a in terms:
            a = Fraction(a)
            total += mpmath.mpf(Fraction(c).numerator) / Fraction(c).denominator * fn(a.numerator, a.denominator, dps)
        return total


@pytest.fixture
def rng():
    import random

    return random.Random(20240611)


def pytest_terminal_summary(terminalreporter):
    """One PASS/FAIL line per acceptance criterion that ran."""
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        status, text = results[number]
        terminalreporter.write_line(f"criterion {number:2d} {status}  {text}")
