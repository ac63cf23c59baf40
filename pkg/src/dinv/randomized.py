"""Random valid complexes and the invariance sweep run on them.

A random complex is a staircase plus acyclic summands (a cancelling pair and
the four-generator "box"), shifted in grading and scrambled by filtered basis
changes.  The result is filtered chain homotopy equivalent to the staircase,
so every invariant computed from it must agree with the staircase's.
"""

from __future__ import annotations

import random
from fractions import Fraction
from math import gcd

from .cfk import (
    Arrow,
    CFKComplex,
    Generator,
    Region,
    basis_change,
    d_one,
    homology,
    reduce,
    staircase,
    tau,
    validate_complex,
)
from .dtable import DTable, connected_sum_d, reverse_orientation
from .knots import LSpaceKnotData, deltas_from_gaps


def random_gaps(rng: random.Random, max_k: int = 3, max_step: int = 3) -> LSpaceKnotData:
    k = rng.randint(0, max_k)
    if k == 0:
        pos = []
    else:
        # n_1 < ... < n_k with n_0 = 0
        pos, n = [], 0
        for _ in range(k):
            n += rng.randint(1, max_step)
            pos.append(n)
    gaps = tuple([-n for n in reversed(pos)] + [0] + pos)
    return LSpaceKnotData(gaps, deltas_from_gaps(gaps))


def cancelling_pair(prefix: str, gr: int, A: int) -> CFKComplex:
    return CFKComplex(
        (Generator(prefix + "p", gr, A), Generator(prefix + "q", gr - 1, A)),
        (Arrow(prefix + "p", prefix + "q", 0),),
    )


def box(prefix: str, gr: int, A: int) -> CFKComplex:
    a, b, c, d = (prefix + s for s in "abcd")
    return CFKComplex(
        (Generator(a, gr, A), Generator(b, gr + 1, A + 1),
         Generator(c, gr - 1, A - 1), Generator(d, gr, A)),
        (Arrow(a, b, 1), Arrow(a, c, 0), Arrow(b, d, 0), Arrow(c, d, 1)),
    )


def _admissible_changes(c: CFKComplex):
    out = []
    for ga in c.generators:
        for gb in c.generators:
            if ga.name == gb.name or (gb.gr - ga.gr) % 2 or gb.gr < ga.gr:
                continue
            s = (gb.gr - ga.gr) // 2
            if gb.A - s <= ga.A:
                out.append((ga.name, gb.name))
    return out


def random_complex(rng: random.Random, max_pieces: int = 3, changes: int = 6):
    """Return ``(scrambled complex, underlying staircase)``."""
    base = staircase(random_gaps(rng))
    c = base
    for n in range(rng.randint(0, max_pieces)):
        gr, A = rng.randint(-6, 2), rng.randint(-3, 3)
        piece = box(f"b{n}", gr, A) if rng.random() < 0.5 else cancelling_pair(f"c{n}", gr, A)
        c = c.direct_sum(piece)
    for _ in range(rng.randint(0, changes)):
        options = _admissible_changes(c)
        if not options:
            break
        a, b = rng.choice(options)
        c = basis_change(c, a, b)
    return c, base


def region_signature(c: CFKComplex, window: tuple[int, int], g: int) -> dict:
    regions = [Region.hat(), Region.column(1), Region.column(-1), Region.a_plus(),
               Region.a_minus(), Region.full()]
    regions += [Region.sublevel(m) for m in range(-g - 2, g + 3)]
    return {(r.kind, r.value): homology(c, r, window) for r in regions}


def complex_invariants_agree(c: CFKComplex, base: CFKComplex) -> list[str]:
    """Problems found comparing ``c`` with a reference complex of the same knot."""
    problems = []
    if not validate_complex(c).ok:
        problems.append("invalid random complex")
        return problems
    red = reduce(c)
    if not validate_complex(red).ok:
        problems.append("invalid reduction")
        return problems
    if any(a.u == 0 and red.gen[a.src].A == red.gen[a.dst].A for a in red.arrows):
        problems.append("reduction left a cancellable arrow")
    lo = min(min(x.gr for x in c.generators), min(x.gr for x in base.generators)) - 10
    hi = max(max(x.gr for x in c.generators), max(x.gr for x in base.generators)) + 6
    g = max(max(x.A for x in c.generators), 0)
    sig = region_signature(c, (lo, hi), g)
    if region_signature(red, (lo, hi), g) != sig:
        problems.append("reduction changed region homology")
    # boxes are acyclic only in the columns and the full complex
    base_sig = region_signature(base, (lo, hi), g)
    if any(base_sig[k] != sig[k] for k in [("i", 0), ("i", 1), ("i", -1), ("full", 0)]):
        problems.append("homology differs from the staircase")
    if not (tau(c) == tau(red) == tau(base)):
        problems.append("tau changed")
    if not (d_one(c) == d_one(red) == d_one(base)):
        problems.append("d_one changed")
    return problems


def table_properties(table: DTable) -> list[str]:
    problems = []
    if table.conjugation_center() is None:
        problems.append("no conjugation symmetry")
    if reverse_orientation(reverse_orientation(table)) != table:
        problems.append("reverse_orientation is not an involution")
    if connected_sum_d(table, DTable.cyclic([Fraction(0)])).values != table.values:
        problems.append("connected sum with S^3 changed the table")
    return problems


def regression_trees():
    from .arith import omega_check
    from .plumbing import PlumbedTree

    trees = {}
    for p, q in [(2, 1), (3, 1), (5, 2), (7, 3), (8, 3), (11, 4), (13, 5)]:
        trees[f"chain -{p}/{q}"] = PlumbedTree.linear(omega_check(Fraction(-p, q)).cf)
    # star-shaped trees: central vertex plus three legs
    for name, centre, legs in [
        ("star -2;-2,-3,-5", -2, [[-2], [-3], [-5]]),
        ("star -1;-2,-3,-7", -1, [[-2], [-3], [-7]]),
        ("star -2;-2,-2,-3", -2, [[-2], [-2], [-3]]),
        ("star -3;-2,-3,[-2,-2]", -3, [[-2], [-3], [-2, -2]]),
    ]:
        verts, edges, nxt = [(0, centre)], [], 1
        for leg in legs:
            prev = 0
            for w in leg:
                verts.append((nxt, w))
                edges.append((prev, nxt))
                prev, nxt = nxt, nxt + 1
        trees[name] = PlumbedTree(tuple(verts), tuple(edges))
    return trees


def plumbing_properties() -> list[str]:
    from .plumbing import d_table_plumbing

    problems = []
    for name, tree in regression_trees().items():
        t1 = d_table_plumbing(tree, slack=1, method="box")
        t2 = d_table_plumbing(tree, slack=2, method="box")
        if t1 != t2:
            problems.append(f"{name}: slack 1 and 2 disagree")
        if d_table_plumbing(tree, method="lattice") != t1:
            problems.append(f"{name}: lattice and box routes disagree")
        problems += [f"{name}: {p}" for p in table_properties(t1)]
    return problems


def property_sweep(samples: int = 1000, seed: int = 0):
    from .lens import LensSpace, lens_d_table

    rng = random.Random(seed)
    failures = []
    for n in range(samples):
        c, base = random_complex(rng)
        for p in complex_invariants_agree(c, base):
            failures.append({"sample": n, "problem": p, "complex": c.to_json()})
    plumbing = plumbing_properties()
    lens = []
    for p in range(1, 16):
        for q in range(1, p + 1):
            if gcd(p, q) != 1:
                continue
            t = lens_d_table(LensSpace(p, q))
            lens += [f"L({p},{q}): {x}" for x in table_properties(t)]
    ok = not failures and not plumbing and not lens
    return ok, {
        "samples": samples,
        "complex_failures": failures[:5],
        "complex_failure_count": len(failures),
        "plumbing_failures": plumbing,
        "lens_table_failures": lens,
    }
