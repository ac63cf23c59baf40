"""d-invariants of lens spaces.

Convention: ``L(p, q)`` is ``p/q`` surgery on the unknot, so ``L(-p, q) = -L(p, q)``.
The primary table comes from the linear plumbing of an Omega witness for
``-|p|/q``; :func:`lens_d_recursive` is an independent cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd

from .arith import omega_check
from .dtable import DTable, connected_sum_d, reverse_orientation
from .errors import InvalidInput, NoWitness
from .plumbing import PlumbedTree, d_table_plumbing

__all__ = [
    "LensSpace",
    "lens_d_table",
    "lens_d_recursive",
    "lens_recursive_table",
    "lens_p1_closed_form",
    "lens_p1_table",
    "reverse_orientation",
    "connected_sum_d",
]


@dataclass(frozen=True)
class LensSpace:
    p: int
    q: int

    def __post_init__(self):
        p, q = int(self.p), int(self.q)
        if p == 0:
            raise InvalidInput("L(0, q) is not a rational homology sphere")
        if abs(p) == 1:
            q = 1
        else:
            q %= abs(p)
            if gcd(abs(p), q) != 1:
                raise InvalidInput(f"gcd(|p|, q) must be 1 for L({p}, {self.q})")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)

    @property
    def slope(self) -> Fraction:
        return Fraction(self.p, self.q)

    def reversed(self) -> "LensSpace":
        return LensSpace(-self.p, self.q)


def lens_d_table(L: LensSpace, slack: int = 1, method: str = "auto") -> DTable:
    """Lattice table of ``L(p, q)``, labeled by the coset model of the plumbing."""
    if abs(L.p) == 1:
        return DTable.cyclic([Fraction(0)], det=L.p)
    if L.p > 0:
        return reverse_orientation(lens_d_table(L.reversed(), slack, method))
    witness = omega_check(L.slope)
    if witness is None:
        raise NoWitness(f"no Omega witness for {L.slope}")
    return d_table_plumbing(PlumbedTree.linear(witness.cf), slack, method)


@lru_cache(maxsize=None)
def lens_d_recursive(p: int, q: int, i: int) -> Fraction:
    """d(L(p, q), i) for ``p > 0`` by the reciprocity recursion.

    ``d(L(p,q), i) = ((2i + 1 - p - q)^2 - pq) / (4pq) - d(L(q, r), j)``
    with ``r = p mod q`` and ``j = i mod q``; ``d(L(1, *)) = 0``.
    """
    if p <= 0:
        raise InvalidInput("recursion expects p > 0")
    if p == 1:
        return Fraction(0)
    q %= p
    if gcd(p, q) != 1:
        raise InvalidInput(f"gcd({p}, {q}) != 1")
    i %= p
    head = Fraction((2 * i + 1 - p - q) ** 2 - p * q, 4 * p * q)
    return head - lens_d_recursive(q, p % q, i % q)


def lens_recursive_table(p: int, q: int) -> DTable:
    if p < 0:
        return reverse_orientation(lens_recursive_table(-p, q))
    return DTable.cyclic([lens_d_recursive(p, q, i) for i in range(p)], det=p)


def lens_p1_closed_form(p: int, i: int) -> Fraction:
    return Fraction((2 * i - p) ** 2 - p, 4 * p)


def lens_p1_table(p: int) -> DTable:
    """Canonically labeled table of ``L(p, 1)``, ``p >= 1``."""
    if p < 1:
        raise InvalidInput("p must be positive")
    return DTable.cyclic([lens_p1_closed_form(p, i) for i in range(p)], det=p)
