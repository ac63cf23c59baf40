"""Doubly filtered complexes CFK^infinity over F[U, U^-1] with F = Z/2.

A complex is stored as one generator per U-orbit.  Generator ``x`` with
Maslov grading ``gr`` and Alexander grading ``A`` stands for ``[x, 0, A]``; its
translates are ``[x, i, A + i] = U^-i [x, 0, A]`` in grading ``gr + 2i``.  An
arrow ``(x, y, u)`` means ``d[x, 0, A_x]`` contains ``U^u [y, 0, A_y]``.

Subquotient complexes (``Region``) are materialized grading by grading, so
only finitely many translates are ever touched.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from . import gf2
from .arith import format_rational
from .errors import (
    HypothesisFailed,
    InconsistentRanks,
    InvalidComplex,
    InvalidGaps,
    InvalidInput,
    NotSphereLike,
    PreconditionError,
    ValueMismatch,
    WindowTooSmall,
)
from .knots import LSpaceKnotData, Report, deltas_from_gaps


@dataclass(frozen=True)
class Generator:
    name: str
    gr: int
    A: int


@dataclass(frozen=True)
class Arrow:
    src: str
    dst: str
    u: int = 0


@dataclass(frozen=True)
class CFKComplex:
    generators: tuple[Generator, ...]
    arrows: tuple[Arrow, ...] = ()

    def __post_init__(self):
        gens = tuple(self.generators)
        arrows = tuple(self.arrows)
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "arrows", arrows)
        names = [g.name for g in gens]
        if len(set(names)) != len(names):
            raise InvalidComplex("generator names must be unique")
        known = set(names)
        for a in arrows:
            if a.src not in known or a.dst not in known:
                raise InvalidComplex(f"arrow {a.src}->{a.dst} names an unknown generator")
            if not isinstance(a.u, int) or a.u < 0:
                raise InvalidComplex(f"arrow {a.src}->{a.dst} has a negative U-power")
        seen = set()
        for a in arrows:
            key = (a.src, a.dst, a.u)
            if key in seen:
                raise InvalidComplex(f"duplicate arrow {a.src}->{a.dst} (u={a.u})")
            seen.add(key)

    # lookups ---------------------------------------------------------------
    @property
    def gen(self) -> dict[str, Generator]:
        return {g.name: g for g in self.generators}

    def outgoing(self) -> dict[str, list[Arrow]]:
        out: dict[str, list[Arrow]] = {g.name: [] for g in self.generators}
        for a in self.arrows:
            out[a.src].append(a)
        return out

    @property
    def genus_bound(self) -> int:
        """Largest Alexander grading of a generator (the genus for reduced models)."""
        return max(g.A for g in self.generators)

    # construction helpers ----------------------------------------------------
    def shifted(self, gr: int = 0, A: int = 0, prefix: str = "") -> "CFKComplex":
        gens = tuple(Generator(prefix + g.name, g.gr + gr, g.A + A) for g in self.generators)
        arrows = tuple(Arrow(prefix + a.src, prefix + a.dst, a.u) for a in self.arrows)
        return CFKComplex(gens, arrows)

    def direct_sum(self, other: "CFKComplex") -> "CFKComplex":
        return CFKComplex(self.generators + other.generators, self.arrows + other.arrows)

    # serialization ---------------------------------------------------------
    @classmethod
    def from_json(cls, data) -> "CFKComplex":
        if isinstance(data, str):
            data = json.loads(data)
        try:
            gens = tuple(Generator(str(g["name"]), int(g["gr"]), int(g["A"]))
                         for g in data["generators"])
            arrows = tuple(Arrow(str(a["from"]), str(a["to"]), int(a.get("u", 0)))
                           for a in data.get("arrows", []))
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidComplex(f"malformed complex JSON: {exc}") from exc
        return cls(gens, arrows)

    def to_json(self) -> dict:
        return {
            "generators": [{"name": g.name, "gr": g.gr, "A": g.A} for g in self.generators],
            "arrows": [{"from": a.src, "to": a.dst, "u": a.u} for a in self.arrows],
        }


# --------------------------------------------------------------------------
# validation


def validate_complex(c: CFKComplex) -> Report:
    """Grading, filtration and d^2 = 0 checks; every violation is listed."""
    gens = c.gen
    problems = []
    for a in c.arrows:
        x, y = gens[a.src], gens[a.dst]
        if y.gr - 2 * a.u != x.gr - 1:
            problems.append(f"grading: {a.src}->{a.dst} (u={a.u}) maps gr {x.gr} to {y.gr - 2 * a.u}")
        if y.A - a.u > x.A:
            problems.append(f"filtration: {a.src}->{a.dst} (u={a.u}) raises A from {x.A} to {y.A - a.u}")
    out = c.outgoing()
    for x in c.generators:
        parity: dict[tuple[str, int], int] = {}
        for a in out[x.name]:
            for b in out[a.dst]:
                key = (b.dst, a.u + b.u)
                parity[key] = parity.get(key, 0) ^ 1
        for (z, u), bit in sorted(parity.items()):
            if bit:
                problems.append(f"d^2: {x.name} reaches U^{u} {z} an odd number of times")
    return Report(not problems, problems[0] if problems else None, {"violations": problems})


def _require_valid(c: CFKComplex):
    rep = validate_complex(c)
    if not rep.ok:
        raise InvalidComplex(rep.failure)


# --------------------------------------------------------------------------
# staircases


def staircase(data: LSpaceKnotData) -> CFKComplex:
    """The CFK^infinity model of an L-space knot with the given gap sequence.

    Generators ``s0, s1, ...`` run from the top Alexander grading down.  Every
    generator an odd number of steps below the top has a horizontal arrow
    (``u = n_{i+1} - n_i``) to its upper neighbour and a vertical arrow
    (``u = 0``) to its lower one.
    """
    gaps = tuple(data.gaps)
    if len(gaps) % 2 == 0 or any(a >= b for a, b in zip(gaps, gaps[1:])):
        raise InvalidGaps("gaps must be an increasing sequence of odd length")
    if any(a != -b for a, b in zip(gaps, reversed(gaps))):
        raise InvalidGaps("gaps must satisfy n_i = -n_-i")
    k = (len(gaps) - 1) // 2
    deltas = tuple(data.deltas) if data.deltas else deltas_from_gaps(gaps)
    if deltas != deltas_from_gaps(gaps):
        raise InvalidGaps("gradings do not follow the L-space recursion")
    idx = list(range(-k, k + 1))
    name = {i: f"s{k - i}" for i in idx}
    gens = tuple(Generator(name[i], deltas[i + k], gaps[i + k]) for i in reversed(idx))
    arrows = []
    for i in reversed(idx):
        if (k - i) % 2:
            arrows.append(Arrow(name[i], name[i + 1], gaps[i + 1 + k] - gaps[i + k]))
            arrows.append(Arrow(name[i], name[i - 1], 0))
    return CFKComplex(gens, tuple(arrows))


def staircase_from_alexander(delta) -> CFKComplex:
    from .knots import gaps_from_alexander

    return staircase(gaps_from_alexander(delta))


# --------------------------------------------------------------------------
# regions and homology


@dataclass(frozen=True)
class Region:
    """A subquotient of CFK^infinity cut out by the (i, j) filtration.

    kinds: ``"i"`` ({i = value}), ``"sublevel"`` ({i = 0, j <= value}),
    ``"max_ge0"`` ({max(i, j) >= 0}), ``"max_lt0"`` ({max(i, j) < 0}), ``"full"``.
    """

    kind: str
    value: int = 0

    def __post_init__(self):
        if self.kind not in ("i", "sublevel", "max_ge0", "max_lt0", "full"):
            raise InvalidInput(f"unknown region kind {self.kind!r}")

    @classmethod
    def hat(cls) -> "Region":
        return cls("i", 0)

    @classmethod
    def column(cls, c: int) -> "Region":
        return cls("i", c)

    @classmethod
    def sublevel(cls, m: int) -> "Region":
        return cls("sublevel", m)

    @classmethod
    def a_plus(cls) -> "Region":
        return cls("max_ge0")

    @classmethod
    def a_minus(cls) -> "Region":
        return cls("max_lt0")

    @classmethod
    def full(cls) -> "Region":
        return cls("full")

    @property
    def finite(self) -> bool:
        return self.kind in ("i", "sublevel")

    def contains(self, i: int, j: int) -> bool:
        if self.kind == "i":
            return i == self.value
        if self.kind == "sublevel":
            return i == 0 and j <= self.value
        if self.kind == "max_ge0":
            return max(i, j) >= 0
        if self.kind == "max_lt0":
            return max(i, j) < 0
        return True


class _Materialized:
    """Chains of ``region`` grading by grading, with the projected differential."""

    def __init__(self, c: CFKComplex, region: Region):
        self.c = c
        self.region = region
        self.gens = c.gen
        self.out = c.outgoing()
        self._cache: dict[int, list[tuple[str, int]]] = {}

    def chains(self, l: int) -> list[tuple[str, int]]:
        if l not in self._cache:
            basis = []
            for g in self.c.generators:
                if (l - g.gr) % 2:
                    continue
                i = (l - g.gr) // 2
                if self.region.contains(i, g.A + i):
                    basis.append((g.name, i))
            self._cache[l] = basis
        return self._cache[l]

    def index(self, l: int) -> dict[tuple[str, int], int]:
        return {t: k for k, t in enumerate(self.chains(l))}

    def boundary_of(self, t: tuple[str, int], target_index) -> int:
        name, i = t
        v = 0
        for a in self.out[name]:
            k = target_index.get((a.dst, i - a.u))
            if k is not None:
                v ^= 1 << k
        return v

    def boundary_images(self, l: int) -> list[int]:
        """``d: C_l -> C_{l-1}`` as one bitmask per source chain."""
        tgt = self.index(l - 1)
        return [self.boundary_of(t, tgt) for t in self.chains(l)]

    def vector(self, terms, l: int) -> int:
        idx = self.index(l)
        v = 0
        for t in terms:
            k = idx.get(t)
            if k is not None:
                v ^= 1 << k
        return v

    def terms(self, v: int, l: int) -> list[tuple[str, int]]:
        basis = self.chains(l)
        return [basis[k] for k in range(len(basis)) if v >> k & 1]

    def boundaries(self, l: int) -> gf2.XorBasis:
        b = gf2.XorBasis()
        for v in self.boundary_images(l + 1):
            b.add(v)
        return b

    def cycles(self, l: int) -> list[int]:
        return [gf2.combine(self.chains_as_units(l), m) for m in gf2.kernel(self.boundary_images(l))]

    def chains_as_units(self, l: int) -> list[int]:
        return [1 << k for k in range(len(self.chains(l)))]

    def betti(self, l: int) -> int:
        n = len(self.chains(l))
        return n - gf2.rank(self.boundary_images(l)) - gf2.rank(self.boundary_images(l + 1))

    def check_square_zero(self, l: int):
        below = self.index(l - 2)
        mid = self.chains(l - 1)
        for v in self.boundary_images(l):
            acc = 0
            for k, t in enumerate(mid):
                if v >> k & 1:
                    acc ^= self.boundary_of(t, below)
            if acc:
                raise InvalidComplex(f"region {self.region} is not a subquotient (d^2 != 0)")


def _default_window(c: CFKComplex, region: Region) -> tuple[int, int]:
    grs = [g.gr for g in c.generators]
    if region.kind == "i":
        return min(grs) + 2 * region.value, max(grs) + 2 * region.value
    if region.kind == "sublevel":
        return min(grs), max(grs)
    g = max(c.genus_bound, 0)
    return min(-4 * g - 8, min(grs) - 8), max(4, max(grs) + 4)


def homology(c: CFKComplex, region: Region, window: tuple[int, int] | None = None) -> dict[int, int]:
    """Graded F_2 dimensions of ``H(region)`` for gradings in ``window`` (inclusive).

    Finite regions default to every grading they occupy; infinite regions to a
    window of ``[-4g - 8, 4]`` widened to cover all generator gradings.
    """
    lo, hi = window if window is not None else _default_window(c, region)
    mat = _Materialized(c, region)
    dims = {}
    for l in range(lo, hi + 1):
        mat.check_square_zero(l)
        b = mat.betti(l)
        if b:
            dims[l] = b
    return dims


def total_dim(dims: dict[int, int]) -> int:
    return sum(dims.values())


def euler_characteristic(dims: dict[int, int]) -> int:
    return sum((-1) ** (l % 2) * d for l, d in dims.items())


def filtered_homology(c: CFKComplex, g: int | None = None) -> dict[int, dict[int, int]]:
    """``{m: H(F(K, m))}`` for ``-g <= m <= g``."""
    g = c.genus_bound if g is None else g
    return {m: homology(c, Region.sublevel(m)) for m in range(-g, g + 1)}


# --------------------------------------------------------------------------
# tau and surgery d-invariants


def tau(c: CFKComplex) -> int:
    """Least ``j`` for which ``H(F(K, j)) -> H(C{i = 0})`` is nonzero."""
    _require_valid(c)
    hat = _Materialized(c, Region.hat())
    h = homology(c, Region.hat())
    if total_dim(h) != 1:
        raise NotSphereLike(f"H(C{{i=0}}) has dimension {total_dim(h)}, expected 1")
    (l,) = h
    basis = hat.boundaries(l)
    cur = hat.chains(l)
    for j in range(min(g.A for g in c.generators), c.genus_bound + 1):
        sub = _Materialized(c, Region.sublevel(j))
        for z in sub.cycles(l):
            terms = sub.terms(z, l)
            if not basis.contains(hat.vector(terms, l)):
                return j
    raise ValueMismatch(f"no filtration level reaches H(C{{i=0}}) (chains {cur})")


def _tower_generator(c: CFKComplex):
    """A grading ``L`` above every generator and a cycle spanning ``H_L(CFK^inf)``."""
    full = _Materialized(c, Region.full())
    top = max(g.gr for g in c.generators) + 1
    dims = {l: full.betti(l) for l in (top, top + 1)}
    if sorted(dims.values()) != [0, 1]:
        raise NotSphereLike(f"HF^infinity is not a single tower: dims {dims}")
    L = top if dims[top] else top + 1
    b = full.boundaries(L)
    for z in full.cycles(L):
        if not b.contains(z):
            return L, full.terms(z, L)
    raise ValueMismatch("tower generator not found")


def tower_bottom(c: CFKComplex, window: tuple[int, int] | None = None) -> tuple[int, list]:
    """Lowest grading of a nonzero element of ``H(C{max(i,j) >= 0})`` in the image of every U^k.

    In gradings above every generator the quotient agrees with CFK^infinity,
    whose homology there is the single tower.  The tower element is pushed down
    by U until it becomes a boundary (or leaves the quotient).  Returns the
    grading and a representing chain.
    """
    _require_valid(c)
    L, zeta = _tower_generator(c)
    if window is not None and L > window[1]:
        raise WindowTooSmall(f"tower detection needs grading {L}, window is {window}")
    quot = _Materialized(c, Region.a_plus())
    last = None
    k = 0
    while True:
        l = L - 2 * k
        if window is not None and l < window[0]:
            raise WindowTooSmall(f"tower not exhausted inside window {window}")
        terms = [(name, i - k) for name, i in zeta]
        v = quot.vector(terms, l)
        if v == 0 or quot.boundaries(l).contains(v):
            break
        last = (l, quot.terms(v, l))
        k += 1
    if last is None:
        raise ValueMismatch("tower vanishes in the quotient immediately")
    return last


def d_large_surgery(c: CFKComplex, r: int, window: tuple[int, int] | None = None) -> Fraction:
    """``d(S^3_r(K), s_0)`` for ``r >= max(2g - 1, 1)`` via the large surgery quotient."""
    g = max(c.genus_bound, 0)
    if r < max(2 * g - 1, 1):
        raise PreconditionError(f"surgery coefficient {r} is below 2g - 1 = {2 * g - 1}")
    mu, _ = tower_bottom(c, window)
    return mu + Fraction(r - 1, 4)


def d_one(c: CFKComplex) -> Fraction:
    """``d(S^3_1(K))``, computed through the smallest admissible large surgery."""
    r = max(2 * max(c.genus_bound, 0) - 1, 1)
    return d_large_surgery(c, r) - Fraction(r - 1, 4)


# --------------------------------------------------------------------------
# reduction


def reduce(c: CFKComplex) -> CFKComplex:
    """Cancel filtration-level-preserving unit arrows until none remain.

    Cancelling ``k -> l`` (``u = 0``, ``A_k = A_l``) removes both generators and
    replaces every ``i -> l`` (power ``a``) by arrows ``i -> z`` of power
    ``a + b`` for each ``k -> z`` (power ``b``), summed mod 2.
    """
    _require_valid(c)
    gens = {g.name: g for g in c.generators}
    order = {g.name: k for k, g in enumerate(c.generators)}
    out: dict[str, dict[str, int]] = {g: {} for g in gens}
    for a in c.arrows:
        out[a.src][a.dst] = a.u

    while True:
        pair = None
        for src in sorted(out, key=order.get):
            for dst in sorted(out[src], key=order.get):
                if out[src][dst] == 0 and gens[src].A == gens[dst].A:
                    pair = (src, dst)
                    break
            if pair:
                break
        if pair is None:
            break
        k, l = pair
        k_out = {z: u for z, u in out[k].items() if z != l}
        for i in out:
            if i in (k, l) or l not in out[i]:
                continue
            a = out[i].pop(l)
            for z, b in k_out.items():
                if z in out[i]:
                    if out[i][z] != a + b:
                        raise InvalidComplex("inconsistent U-powers during cancellation")
                    del out[i][z]
                else:
                    out[i][z] = a + b
        del out[k], out[l]
        for i in out:
            out[i].pop(k, None)
    kept = tuple(g for g in c.generators if g.name in out)
    arrows = tuple(
        Arrow(src, dst, out[src][dst])
        for src in sorted(out, key=order.get)
        for dst in sorted(out[src], key=order.get)
    )
    return CFKComplex(kept, arrows)


# --------------------------------------------------------------------------
# Whitehead doubles and the d(S^3_1(D_+(K))) = -2 argument


def whitehead_double_hfk(g: int, filtered: dict) -> dict[int, dict[int, int]]:
    """Graded ranks of HFK-hat of the positive untwisted Whitehead double.

    ``filtered[m]`` holds ``{grading: dim H(F(K, m))}`` for ``-g <= m <= g``.
    Negative symbolic ranks are moved to the other side of the isomorphism,
    i.e. subtracted; a genuinely negative result raises ``InconsistentRanks``.
    """
    if g < 1:
        raise HypothesisFailed("the companion must be a non-trivial knot (g >= 1)")
    missing = [m for m in range(-g, g + 1) if m not in filtered]
    if missing:
        raise InvalidInput(f"missing filtered homology for m = {missing}")
    summed: dict[int, int] = {}
    for m in range(-g, g + 1):
        for l, dim in filtered[m].items():
            if dim < 0:
                raise InvalidInput("dimensions must be nonnegative")
            summed[int(l)] = summed.get(int(l), 0) + dim

    def build(extra: dict[int, int], mult: int, shift: int) -> dict[int, int]:
        out = dict(extra)
        for l, dim in summed.items():
            out[l + shift] = out.get(l + shift, 0) + mult * dim
        bad = {l: v for l, v in out.items() if v < 0}
        if bad:
            raise InconsistentRanks(f"negative rank after cancellation: {bad}")
        return {l: v for l, v in sorted(out.items(), reverse=True) if v}

    return {
        1: build({1: -2, 0: 2 * g}, 2, 1),
        0: build({0: -4, -1: 4 * g - 1}, 4, 0),
        -1: build({-1: -2, -2: 2 * g}, 2, -1),
    }


def check_lan(c: CFKComplex) -> Report:
    """Mechanical check of the two structural properties used for ``d = -2``.

    (1) every translate in Maslov grading -2 sits at ``i + j >= -1`` or at
        ``(-1, -1)``; ``cond1_cycles`` is the weaker reading restricted to
        translates of cycle generators.
    (2) some cycle generator with ``gr = 0`` and ``A = 1`` represents the
        generator of ``H_0(CFK^infinity)``.
    """
    _require_valid(c)
    out = c.outgoing()
    bad_chain, bad_cycle = [], []
    for g in c.generators:
        if (-2 - g.gr) % 2:
            continue
        i = (-2 - g.gr) // 2
        j = g.A + i
        if not (i + j >= -1 or (i, j) == (-1, -1)):
            bad_chain.append([g.name, i, j])
            if not out[g.name]:
                bad_cycle.append([g.name, i, j])
    full = _Materialized(c, Region.full())
    witness = None
    if full.betti(0) == 1:
        b = full.boundaries(0)
        for g in c.generators:
            if g.gr == 0 and g.A == 1 and not out[g.name]:
                if not b.contains(full.vector([(g.name, 0)], 0)):
                    witness = g.name
                    break
    cond1, cond2 = not bad_chain, witness is not None
    failure = None
    if not cond1:
        failure = f"grading -2 translate off the allowed region: {bad_chain[0]}"
    elif not cond2:
        failure = "no grading-0 cycle generator at (0, 1) spans the tower"
    return Report(cond1 and cond2, failure, {
        "cond1": cond1,
        "cond1_cycles": not bad_cycle,
        "cond2": cond2,
        "rho": witness,
        "violations": bad_chain,
    })


def verify_prop_c(c: CFKComplex) -> Report:
    """Confirm ``d(S^3_1) = -2`` on a complex satisfying the structural hypotheses."""
    lan = check_lan(c)
    if not lan.ok:
        raise HypothesisFailed(lan.failure)
    t = tau(c)
    if t != 1:
        raise HypothesisFailed(f"tau = {t}, expected 1")
    d1 = d_one(c)
    if d1 != -2:
        raise ValueMismatch(f"d(S^3_1) = {d1}, expected -2")
    rho = lan.details["rho"]
    mu, chain = tower_bottom(c)
    return Report(True, None, {
        "d1": format_rational(d1),
        "tau": t,
        "rho": rho,
        "tower_bottom": {"grading": mu, "chain": [[n, i] for n, i in chain]},
        "rho_prime": {"generator": rho, "i": -1, "j": 0, "gr": -2},
    })


def basis_change(c: CFKComplex, a: str, b: str) -> CFKComplex:
    """Replace generator ``a`` by ``a + U^s b`` where ``gr_b - 2s = gr_a``.

    The change is filtered (hence a filtered isomorphism) when ``s >= 0`` and
    ``A_b - s <= A_a``.
    """
    gens = c.gen
    if a == b or a not in gens or b not in gens:
        raise InvalidInput("basis change needs two distinct generators")
    ga, gb = gens[a], gens[b]
    if (gb.gr - ga.gr) % 2 or gb.gr < ga.gr or gb.A - (gb.gr - ga.gr) // 2 > ga.A:
        raise InvalidInput(f"{a} + U^s {b} is not a filtered basis change")
    rows = {g.name: set() for g in c.generators}
    for arrow in c.arrows:
        rows[arrow.src].add(arrow.dst)
    rows[a] = rows[a] ^ rows[b]
    for y in rows:
        if a in rows[y]:
            rows[y] ^= {b}
    arrows = tuple(
        Arrow(src, dst, (gens[dst].gr - gens[src].gr + 1) // 2)
        for src in rows for dst in sorted(rows[src], key=[g.name for g in c.generators].index)
    )
    return CFKComplex(c.generators, arrows)
