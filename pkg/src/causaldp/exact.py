"""Exact arithmetic helpers.

All probabilities and ratio bounds are `fractions.Fraction`.  The single
non-rational value that can arise is an infinite ratio (some probability is
positive where its comparison partner is zero); it is carried as `math.inf`,
the only float permitted anywhere in the package.  Natural logarithms appear
only in display strings.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Union

from .errors import ParseError

# A domain value: a symbol, an integer, or a tuple of values (used for
# database points and report vectors).
Value = Union[str, int, tuple]

# A ratio bound: an exact nonnegative rational, or infinity.
Ratio = Union[Fraction, float]

INF: float = math.inf

_RATIONAL_RE = re.compile(r"^(-?\d+)(?:/([1-9]\d*))?$")


def is_infinite(x: Ratio) -> bool:
    return isinstance(x, float) and math.isinf(x)


def ratio_divide(num: Fraction, den: Fraction) -> Ratio | None:
    """Divide under the checker conventions: 0/0 is vacuous (None), p/0 = inf."""
    if den == 0:
        return None if num == 0 else INF
    return num / den


def ratio_le(a: Ratio, b: Ratio) -> bool:
    """a <= b where either side may be infinite."""
    if is_infinite(a):
        return is_infinite(b)
    if is_infinite(b):
        return True
    return a <= b


def ratio_mul(a: Ratio, b: Ratio) -> Ratio:
    """Product of two ratio bounds; bounds are always >= 1, so inf*x = inf."""
    if is_infinite(a) or is_infinite(b):
        return INF
    return a * b


def parse_rational(text: str, location: str = "") -> Fraction:
    """Parse "p/q" or "p" exactly; anything else (e.g. "0.5") is rejected."""
    if not isinstance(text, str):
        raise ParseError(
            f"expected a rational written as a string like \"1/2\", got {text!r}",
            location,
        )
    m = _RATIONAL_RE.match(text)
    if m is None:
        raise ParseError(
            f"malformed rational {text!r}; write exact integer ratios like \"1/2\"",
            location,
        )
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) else 1
    return Fraction(num, den)


def format_rational(x: Fraction) -> str:
    """Canonical "p/q" form (denominator always written, e.g. "2/1")."""
    return f"{x.numerator}/{x.denominator}"


def format_ratio(x: Ratio) -> str:
    return "inf" if is_infinite(x) else format_rational(x)


def epsilon_of(x: Ratio) -> str:
    """ln(ratio) to four decimals, for display only."""
    if is_infinite(x):
        return "inf"
    if x <= 0:
        raise ValueError(f"epsilon undefined for ratio {x}")
    return f"{math.log(x.numerator) - math.log(x.denominator):.4f}"


def value_sort_key(v: Value):
    """Total order over mixed-type values, for canonical serialization."""
    if isinstance(v, bool):  # bools are ints; keep them out of domains anyway
        return (1, int(v))
    if isinstance(v, int):
        return (1, v)
    if isinstance(v, str):
        return (2, v)
    return (3, tuple(value_sort_key(x) for x in v))
