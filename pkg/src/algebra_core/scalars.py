"""Coefficient fields.

Rationals come from sympy's ``QQ`` (gmpy2 ``mpq`` when available, always
normalized with a positive denominator). Prime fields are ``GF(p)`` with
residues kept in ``[0, p)``.
"""

import re
from typing import Any

from sympy import isprime
from sympy.polys.domains import GF, QQ

_FP_PATTERN = re.compile(r"^FP<?(\d+)>?$")


def field_from_name(name: str):
    """Return the coefficient domain for ``QQ`` or ``FP<p>`` (``FPp`` also accepted)."""
    text = name.strip().upper()
    if text == "QQ":
        return QQ
    match = _FP_PATTERN.match(text)
    if not match:
        raise ValueError(f"[FIELD] Unknown field '{name}', expected QQ or FP<p>")
    p = int(match.group(1))
    if p >= 2 ** 31 or not isprime(p):
        raise ValueError(f"[FIELD] FP<{p}> needs a prime below 2^31")
    return GF(p, symmetric=False)


def field_name(field) -> str:
    if field == QQ:
        return "QQ"
    return f"FP<{field.mod}>"


def is_prime_field(field) -> bool:
    return field != QQ


def make_scalar(field, numerator: int, denominator: int = 1):
    if denominator == 0:
        raise ZeroDivisionError("[FIELD] zero denominator")
    if field == QQ:
        return QQ(numerator, denominator)
    return field.convert(numerator) / field.convert(denominator)


def format_scalar(field, value: Any) -> str:
    """Canonical text of a coefficient: ``3/2`` over QQ, the residue in [0, p) otherwise."""
    if field == QQ:
        num, den = int(value.numerator), int(value.denominator)
        return str(num) if den == 1 else f"{num}/{den}"
    return str(int(value) % field.mod)


def random_scalar(field, rng, bound: int = 5):
    """A small nonzero coefficient drawn from the numpy Generator ``rng``."""
    value = 0
    while value == 0:
        value = int(rng.integers(-bound, bound + 1))
    return field.convert(value)
