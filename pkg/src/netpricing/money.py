"""Fixed-point money arithmetic.

Prices are stored as an integer number of minor units (hundredths of a
currency unit) so that equality tests between posted prices, competitor
prices, and grid points are exact. Conversions go through decimal strings,
never through binary floats.
"""

from __future__ import annotations

from decimal import Decimal, InvalidOperation
from fractions import Fraction

MONEY_SCALE = 100

Money = int


class MoneyError(ValueError):
    """Unparseable money literal, or one finer than the minor unit."""


def parse_money(value) -> Money:
    """Parse a money literal into minor units.

    Accepts int (whole currency units), decimal strings such as "7.50",
    Decimal, and Fraction with a denominator dividing the money scale.
    Binary floats are rejected; callers that start from floats must decide
    how to round before money enters the system.
    """
    if isinstance(value, bool):
        raise MoneyError(f"not a money literal: {value!r}")
    if isinstance(value, int):
        return value * MONEY_SCALE
    if isinstance(value, Fraction):
        scaled = value * MONEY_SCALE
        if scaled.denominator != 1:
            raise MoneyError(f"{value} is finer than the minor unit")
        return int(scaled)
    if isinstance(value, float):
        raise MoneyError("money literals must be strings or integers, not floats")
    if isinstance(value, (str, Decimal)):
        try:
            dec = Decimal(str(value).strip())
        except InvalidOperation as exc:
            raise MoneyError(f"not a money literal: {value!r}") from exc
        scaled = dec.scaleb(2)
        if scaled != scaled.to_integral_value():
            raise MoneyError(f"{value!r} is finer than the minor unit")
        return int(scaled)
    raise MoneyError(f"not a money literal: {value!r}")


def money_str(cents: Money) -> str:
    """Canonical decimal rendering, always two decimal places."""
    sign = "-" if cents < 0 else ""
    cents = abs(cents)
    return f"{sign}{cents // MONEY_SCALE}.{cents % MONEY_SCALE:02d}"


def money_unit(cents: Money) -> Fraction:
    """Exact value in currency units."""
    return Fraction(cents, MONEY_SCALE)


def money_float(cents: Money) -> float:
    return cents / MONEY_SCALE


def fraction_str(value: Fraction) -> str:
    """Render a Fraction canonically.

    Values with a terminating decimal expansion (denominator of the form
    2^a * 5^b) become plain decimal strings; anything else falls back to
    "p/q". parse_fraction accepts both.
    """
    if isinstance(value, int):
        return str(value)
    den = value.denominator
    twos = fives = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        return f"{value.numerator}/{value.denominator}"
    digits = max(twos, fives)
    if digits == 0:
        return str(value.numerator)
    scaled = value.numerator * 10**digits // value.denominator
    sign = "-" if scaled < 0 else ""
    scaled = abs(scaled)
    whole, frac = divmod(scaled, 10**digits)
    return f"{sign}{whole}.{frac:0{digits}d}".rstrip("0").rstrip(".") or "0"


def parse_fraction(text) -> Fraction:
    """Parse the output of fraction_str (decimal or "p/q")."""
    if isinstance(text, int) and not isinstance(text, bool):
        return Fraction(text)
    if isinstance(text, Fraction):
        return text
    if not isinstance(text, str):
        raise MoneyError(f"not a number literal: {text!r}")
    text = text.strip()
    try:
        if "/" in text:
            num, den = text.split("/")
            return Fraction(int(num), int(den))
        return Fraction(Decimal(text))
    except (ValueError, ZeroDivisionError, InvalidOperation) as exc:
        raise MoneyError(f"not a number literal: {text!r}") from exc


def number_str(value) -> str:
    """Render a revenue or volume for reports: exact when possible."""
    if isinstance(value, Fraction):
        return fraction_str(value)
    if isinstance(value, int) and not isinstance(value, bool):
        return str(value)
    return repr(float(value))
