"""GF(2) linear algebra on Python ints used as bit vectors."""

from __future__ import annotations


class XorBasis:
    """Echelon basis keyed by leading bit, tracking how each row was combined."""

    def __init__(self):
        self.rows: dict[int, tuple[int, int]] = {}

    def __len__(self):
        return len(self.rows)

    def reduce(self, v: int, combo: int = 0) -> tuple[int, int]:
        while v:
            h = v.bit_length() - 1
            if h not in self.rows:
                break
            bv, bc = self.rows[h]
            v ^= bv
            combo ^= bc
        return v, combo

    def add(self, v: int, combo: int = 0) -> int:
        """Insert ``v``; returns the combination that kills it (0 if it was new)."""
        v, combo = self.reduce(v, combo)
        if v:
            self.rows[v.bit_length() - 1] = (v, combo)
            return 0
        return combo

    def contains(self, v: int) -> bool:
        return self.reduce(v)[0] == 0


def rank(vectors) -> int:
    b = XorBasis()
    for v in vectors:
        b.add(v)
    return len(b)


def kernel(images) -> list[int]:
    """Basis of ``{c : sum_k c_k images[k] = 0}`` as bitmasks over source indices."""
    b = XorBasis()
    out = []
    for k, v in enumerate(images):
        combo = b.add(v, 1 << k)
        if combo:
            out.append(combo)
    return out


def combine(vectors, mask: int) -> int:
    acc, k = 0, 0
    while mask:
        if mask & 1:
            acc ^= vectors[k]
        mask >>= 1
        k += 1
    return acc
