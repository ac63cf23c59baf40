"""Exact rationals, negative continued fractions and witnesses for the slope set Omega.

A continued fraction ``[a1, ..., an]`` denotes ``a1 - 1/(a2 - 1/(... - 1/an))``.
Rationals are ``fractions.Fraction`` throughout.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import InvalidInput, OutOfRange, ZeroTail

Rational = Fraction

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")


def parse_rational(text: str | int | Fraction) -> Fraction:
    """Parse ``"p/q"`` or ``"p"`` (ASCII or unicode minus) into a Fraction."""
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    m = _RATIONAL_RE.match(str(text).replace("−", "-"))
    if not m:
        raise InvalidInput(f"not a rational: {text!r}")
    den = int(m.group(2)) if m.group(2) else 1
    if den == 0:
        raise InvalidInput(f"zero denominator: {text!r}")
    return Fraction(int(m.group(1)), den)


def format_rational(r: Fraction, always_slash: bool = True) -> str:
    r = Fraction(r)
    if not always_slash and r.denominator == 1:
        return str(r.numerator)
    return f"{r.numerator}/{r.denominator}"


def format_cf(cf) -> str:
    return "[" + ",".join(str(a) for a in cf) + "]"


def parse_cf(text: str) -> tuple[int, ...]:
    body = text.strip().replace("−", "-")
    if not (body.startswith("[") and body.endswith("]")):
        raise InvalidInput(f"continued fraction must be bracketed: {text!r}")
    try:
        entries = tuple(int(a) for a in body[1:-1].split(",") if a.strip())
    except ValueError as exc:
        raise InvalidInput(f"bad continued fraction {text!r}") from exc
    if not entries:
        raise InvalidInput("empty continued fraction")
    return entries


def cf_eval(cf) -> Fraction:
    cf = tuple(int(a) for a in cf)
    if not cf:
        raise InvalidInput("empty continued fraction")
    r = Fraction(cf[-1])
    for a in reversed(cf[:-1]):
        if r == 0:
            raise ZeroTail(f"vanishing tail in {format_cf(cf)}")
        r = a - 1 / r
    return r


def negative_expansion(r) -> tuple[int, ...]:
    """Expand ``r = -p/q`` (``p >= q > 0``) with entries ``<= -2`` (or ``[-1]``).

    Runs the induction on the denominator: ``p/q = (m+1) - 1/(q/((m+1)q - p))``
    where ``mq < p < (m+1)q``.
    """
    r = Fraction(r)
    if r > -1:
        raise OutOfRange(f"negative_expansion needs r <= -1, got {r}")
    p, q = -r.numerator, r.denominator
    out = []
    while q != 1:
        b = p // q + 1
        out.append(-b)
        p, q = q, b * q - p
    out.append(-p)
    return tuple(out)


def exception_indices(cf) -> list[int]:
    """0-based positions violating the Omega bounds (interior <= -2, ends <= -1)."""
    n = len(cf)
    bad = []
    for k, a in enumerate(cf):
        bound = -1 if k in (0, n - 1) else -2
        if a > bound:
            bad.append(k)
    return bad


def exception_count(cf) -> int:
    return len(exception_indices(cf))


def chain_minors(cf) -> list[int]:
    """Leading principal minors of the tridiagonal form with diagonal ``cf``."""
    minors = []
    prev, cur = 1, 1
    for k, a in enumerate(cf):
        nxt = a * cur - (prev if k else 0)
        prev, cur = cur, nxt
        minors.append(cur)
    return minors


def chain_is_negative_definite(cf) -> bool:
    return all((-1) ** (k + 1) * m > 0 for k, m in enumerate(chain_minors(cf)))


@dataclass(frozen=True)
class OmegaWitness:
    cf: tuple[int, ...]
    exception_indices: tuple[int, ...]

    @property
    def value(self) -> Fraction:
        return cf_eval(self.cf)

    def is_valid(self) -> bool:
        """Re-check every witness invariant from scratch."""
        try:
            cf_eval(self.cf)
        except ZeroTail:
            return False
        exc = exception_indices(self.cf)
        return (
            tuple(exc) == tuple(self.exception_indices)
            and len(exc) <= 2
            and chain_is_negative_definite(self.cf)
        )

    def to_json(self) -> dict:
        return {
            "slope": format_rational(self.value),
            "cf": list(self.cf),
            "exceptions": list(self.exception_indices),
        }


def _well_defined_value(cf):
    try:
        return cf_eval(cf)
    except ZeroTail:
        return None


def omega_check(r, max_len: int = 4, entry_bound: int = 6) -> OmegaWitness | None:
    """Return an Omega witness for ``r`` or ``None`` when none is found in bounds.

    ``None`` only means the bounded search failed, never that ``r`` lies outside
    Omega.  Rationals ``<= -1`` always have the exception-free witness from
    :func:`negative_expansion`.  Otherwise candidates are scanned by length, then
    lexicographically, with entries in ``[-entry_bound, entry_bound]``; a witness
    must also give a negative definite chain.
    """
    r = Fraction(r)
    if r == 0:
        raise InvalidInput("0 is excluded from Omega")
    if r <= -1:
        cf = negative_expansion(r)
        return OmegaWitness(cf, tuple(exception_indices(cf)))
    if r > 0:
        # a negative definite chain always evaluates to a negative number
        return None
    entries = range(-entry_bound, entry_bound + 1)
    for n in range(1, max_len + 1):
        for cf in itertools.product(entries, repeat=n):
            if _well_defined_value(cf) != r:
                continue
            exc = exception_indices(cf)
            if len(exc) <= 2 and chain_is_negative_definite(cf):
                return OmegaWitness(tuple(cf), tuple(exc))
    return None
