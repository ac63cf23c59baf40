"""Labeled tables of d-invariants over a finite abelian group of spin^c labels."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .arith import format_rational, parse_rational
from .errors import InvalidInput


@dataclass(frozen=True)
class DTable:
    """Map from labels ``0..n-1`` to rational d-values.

    ``group`` lists the nontrivial invariant factors of the label group; a label
    is the mixed-radix encoding of a group element (last factor fastest).  An
    empty or one-element ``group`` means labels are plain residues mod ``n``.
    """

    values: tuple[Fraction, ...]
    group: tuple[int, ...] = ()
    det: int | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(Fraction(v) for v in self.values))
        if not self.group and len(self.values) > 1:
            object.__setattr__(self, "group", (len(self.values),))
        size = 1
        for d in self.group:
            size *= d
        if size != len(self.values) or not self.values:
            raise InvalidInput("table size does not match its label group")

    @classmethod
    def cyclic(cls, values, det=None):
        return cls(tuple(values), (len(values),) if len(values) > 1 else (), det)

    @property
    def modulus(self) -> int:
        return len(self.values)

    @property
    def is_cyclic(self) -> bool:
        return len(self.group) <= 1

    def __getitem__(self, label: int) -> Fraction:
        return self.values[label % self.modulus]

    def __len__(self):
        return len(self.values)

    def multiset(self) -> list[Fraction]:
        return sorted(self.values)

    def total(self) -> Fraction:
        return sum(self.values, Fraction(0))

    # group structure -------------------------------------------------------
    def element(self, label: int) -> tuple[int, ...]:
        out = []
        for d in reversed(self.group):
            out.append(label % d)
            label //= d
        return tuple(reversed(out))

    def label(self, element) -> int:
        lab = 0
        for d, e in zip(self.group, element):
            lab = lab * d + e % d
        return lab

    def conjugation_center(self) -> int | None:
        """Smallest label ``c`` with ``d(c - x) = d(x)`` for all ``x``, if any."""
        elems = [self.element(k) for k in range(self.modulus)]
        for c in range(self.modulus):
            ce = self.element(c)
            if all(
                self.values[self.label([a - b for a, b in zip(ce, e)])] == self.values[k]
                for k, e in enumerate(elems)
            ):
                return c
        return None

    # serialization ---------------------------------------------------------
    def to_json(self) -> dict:
        return {
            "det": self.det if self.det is not None else self.modulus,
            "entries": [
                {"label": k, "d": format_rational(v)} for k, v in enumerate(self.values)
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "DTable":
        entries = sorted(data["entries"], key=lambda e: e["label"])
        if [e["label"] for e in entries] != list(range(len(entries))):
            raise InvalidInput("DTable labels must be 0..n-1")
        return cls.cyclic([parse_rational(e["d"]) for e in entries], det=data.get("det"))


def reverse_orientation(t: DTable) -> DTable:
    det = None if t.det is None else -t.det
    return DTable(tuple(-v for v in t.values), t.group, det)


def _crt(a: int, p: int, b: int, q: int) -> int:
    # p, q coprime
    return (a + p * ((b - a) * pow(p, -1, q) % q)) % (p * q) if q > 1 else a % p


def connected_sum_d(a: DTable, b: DTable) -> DTable:
    """Table of ``Y1 # Y2`` with ``d(s1 # s2) = d(s1) + d(s2)``.

    When both label groups are cyclic of coprime orders the result is relabeled
    by the Chinese remainder theorem so that it is again a cyclic table;
    otherwise labels are ``i * |b| + j`` over the product group.
    """
    p, q = a.modulus, b.modulus
    from math import gcd

    if a.is_cyclic and b.is_cyclic and gcd(p, q) == 1:
        vals = [Fraction(0)] * (p * q)
        for i, j in itertools.product(range(p), range(q)):
            vals[_crt(i, p, j, q)] = a.values[i] + b.values[j]
        return DTable.cyclic(vals)
    vals = [a.values[i] + b.values[j] for i in range(p) for j in range(q)]
    return DTable(tuple(vals), a.group + b.group)
