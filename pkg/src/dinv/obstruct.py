"""Verdicts on the negative/positive unknotting number from d-invariant tables.

A knot with ``u_-(K) = 0`` has, for every admissible negative slope, a surgery
whose d-table agrees with the lens space table after an affine relabeling.
Failure of every relabeling is an obstruction.  Verdicts are one-directional:
the engine reports ``OBSTRUCTED`` or ``INCONCLUSIVE`` and never claims
``u_- = 0``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from .arith import format_rational, omega_check, parse_rational
from .dtable import DTable, connected_sum_d, reverse_orientation
from .errors import InvalidInput, ModulusMismatch, NotLSpaceForm, NoWitness
from .knots import (
    AlexanderPoly,
    genus_lspace,
    surgery_d_table_lspace,
    torsion_coeffs,
    validate_lspace_alexander,
)
from .lens import LensSpace, lens_d_table, lens_p1_table

OBSTRUCTED = "OBSTRUCTED"
INCONCLUSIVE = "INCONCLUSIVE"


@dataclass(frozen=True)
class Verdict:
    status: str
    slope: Fraction
    certificate: dict = field(default_factory=dict)

    @property
    def obstructed(self) -> bool:
        return self.status == OBSTRUCTED

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "slope": format_rational(self.slope),
            "certificate": self.certificate,
        }


def _check_comparable(a: DTable, b: DTable) -> int:
    if a.modulus != b.modulus:
        raise ModulusMismatch(f"tables have {a.modulus} and {b.modulus} entries")
    if not (a.is_cyclic and b.is_cyclic):
        raise InvalidInput("affine comparison needs cyclic label groups")
    return a.modulus


def affine_maps(p: int, units=None):
    """All ``(u, c)`` with ``u`` a unit mod ``p``, in increasing order."""
    us = [u for u in range(max(p, 1)) if gcd(u, p) == 1] if p > 1 else [1]
    if units is not None:
        us = [u for u in us if u in units]
    for u in us:
        for c in range(p):
            yield u, c


def _search(a: DTable, b: DTable, accept, units=None):
    p = _check_comparable(a, b)
    for u, c in affine_maps(p, units):
        if all(accept(a[u * i + c], b[i]) for i in range(p)):
            return u, c
    return None


def affine_match(a: DTable, b: DTable, units=None) -> tuple[int, int] | None:
    """Smallest ``(u, c)`` with ``a(u*i + c) = b(i)`` for every label ``i``."""
    p = _check_comparable(a, b)
    if a.multiset() != b.multiset():
        return None
    return _search(a, b, lambda x, y: x == y, units)


def affine_dominates(a: DTable, b: DTable, units=None) -> tuple[int, int] | None:
    """Smallest ``(u, c)`` with ``a(u*i + c) >= b(i)`` for every label ``i``."""
    _check_comparable(a, b)
    if a.total() < b.total():
        return None
    return _search(a, b, lambda x, y: x >= y, units)


def _map_json(m):
    return None if m is None else {"u": m[0], "c": m[1]}


def obstruction_u_minus_zero(d_surgery: DTable, slope) -> Verdict:
    """Compare the surgery table at ``slope`` with the lens space table."""
    slope = parse_rational(slope)
    witness = omega_check(slope)
    if witness is None:
        raise NoWitness(f"no admissible continued fraction for {format_rational(slope)}")
    lens = lens_d_table(LensSpace(slope.numerator, slope.denominator))
    match = affine_match(lens, d_surgery)
    restricted = affine_match(lens, d_surgery, units={1})
    cert = {
        "witness": witness.to_json(),
        "lens": lens.to_json(),
        "surgery": d_surgery.to_json(),
        "affine_map": _map_json(match),
        "translation_only": {
            "status": OBSTRUCTED if restricted is None else INCONCLUSIVE,
            "affine_map": _map_json(restricted),
        },
        "multisets_equal": lens.multiset() == d_surgery.multiset(),
    }
    return Verdict(OBSTRUCTED if match is None else INCONCLUSIVE, slope, cert)


def mirror_table(table: DTable) -> DTable:
    """Table of ``S^3_{-r}(mirror K)`` from that of ``S^3_r(K)``."""
    return reverse_orientation(table)


def lspace_u_plus_obstruction(delta: AlexanderPoly, h: int | None = None) -> Verdict:
    """Positive unknotting number obstruction for a knot with a positive L-space surgery.

    The mirror's surgery table at slope ``-h`` is ``-(d(L(h,1), i) - 2 t_i)``;
    it matches ``L(-h, 1)`` under a relabeling only when every ``t_i`` vanishes.
    """
    rep = validate_lspace_alexander(delta)
    if not rep.ok:
        raise NotLSpaceForm(rep.failure)
    delta = delta.centered()
    g = genus_lspace(delta)
    h = max(2 * g - 1, 1) if h is None else int(h)
    if h < max(2 * g - 1, 1):
        raise InvalidInput(f"h = {h} is below the L-space threshold 2g - 1 = {2 * g - 1}")
    mirror = mirror_table(surgery_d_table_lspace(delta, h))
    verdict = obstruction_u_minus_zero(mirror, Fraction(-h))
    lens_total = DTable.from_json(verdict.certificate["lens"]).total()
    t = torsion_coeffs(delta)
    cert = dict(verdict.certificate)
    cert.update({
        "h": h,
        "genus": g,
        "torsion": list(t.values),
        "sum_gap": format_rational(mirror.total() - lens_total),
    })
    return Verdict(verdict.status, verdict.slope, cert)


def whitehead_cable_obstruction(p: int, d_one: Fraction = Fraction(-2)) -> Verdict:
    """Obstruction for ``u_+`` of the ``(p, 1)``-cable of a Whitehead double.

    Surgery ``p`` on the cable is ``L(p, 1) # S^3_{1/p}(K_D)`` and the second
    summand has ``d <= d(S^3_1(K_D)) = d_one``, giving an upper-bound table.
    After mirroring, the bound forces the table strictly above the lens table
    at every label under every relabeling.
    """
    if p < 1:
        raise InvalidInput("cable parameter must be a positive integer")
    d_one = parse_rational(d_one)
    bound = connected_sum_d(lens_p1_table(p), DTable.cyclic([d_one]))
    lower = mirror_table(bound)
    lens = lens_d_table(LensSpace(-p, 1))
    dom = affine_dominates(lens, lower)
    gaps = [format_rational(lower[i] - lens[i]) for i in range(p)]
    witness = omega_check(Fraction(-p))
    cert = {
        "witness": witness.to_json(),
        "d_one": format_rational(d_one),
        "upper_bound": bound.to_json(),
        "mirror_lower_bound": lower.to_json(),
        "lens": lens.to_json(),
        "dominating_map": _map_json(dom),
        "identity_gaps": gaps,
    }
    return Verdict(OBSTRUCTED if dom is None else INCONCLUSIVE, Fraction(-p), cert)
