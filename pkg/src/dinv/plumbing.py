"""Plumbing trees, their intersection forms, and d-invariants by lattice maximization.

Spin^c structures on the boundary of the plumbing are modeled as cosets
``K + 2 Q Z^n`` of characteristic covectors ``K`` (``K_v = m(v) mod 2``).  For a
negative definite tree with at most two bad vertices the d-invariant of a class
is the maximum of ``(K^T Q^{-1} K + n) / 4`` over the coset.

Two maximization routes are provided:

``"box"``
    brute-force enumeration of every characteristic ``K`` with
    ``m(v) - 2*slack <= K_v <= -m(v) + 2*slack``; all classes at once.
``"lattice"``
    exact tree dynamic program over ``x`` in ``K = K0 + 2 Q x``, with the search
    range of each ``x_v`` cut down by an exact ellipsoid bound.

Any maximizer already satisfies ``m(v) <= K_v <= -m(v)`` (otherwise adding or
subtracting ``2 Q e_v`` strictly increases the square), so the two routes agree
for every ``slack >= 0``; the lattice route re-checks that its maximizer lies in
the requested box.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np

from . import snf
from .dtable import DTable
from .errors import (
    EmptyBox,
    InvalidInput,
    InvalidTree,
    NotNegativeDefinite,
    SingularForm,
    TooManyBadVertices,
    ValueMismatch,
)

BOX_CAP = 250_000
MAX_SLACK = 4


@dataclass(frozen=True)
class PlumbedTree:
    vertices: tuple[tuple[int, int], ...]
    edges: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        verts = tuple((int(v), int(w)) for v, w in self.vertices)
        edges = tuple(tuple(sorted((int(a), int(b)))) for a, b in self.edges)
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "edges", edges)
        ids = [v for v, _ in verts]
        if not ids:
            raise InvalidTree("a plumbing tree needs at least one vertex")
        if len(set(ids)) != len(ids):
            raise InvalidTree("vertex ids must be unique")
        known = set(ids)
        for a, b in edges:
            if a not in known or b not in known:
                raise InvalidTree(f"edge ({a}, {b}) uses an unknown vertex")
            if a == b:
                raise InvalidTree("loops are not allowed")
        if len(set(edges)) != len(edges):
            raise InvalidTree("repeated edge")
        if len(edges) != len(ids) - 1 or not self._connected():
            raise InvalidTree("graph must be a tree (connected, |E| = |V| - 1)")

    def _connected(self) -> bool:
        nbrs = {v: [] for v in self.ids}
        for a, b in self.edges:
            nbrs[a].append(b)
            nbrs[b].append(a)
        seen, stack = {self.ids[0]}, [self.ids[0]]
        while stack:
            for w in nbrs[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(self.ids)

    @property
    def ids(self) -> list[int]:
        return [v for v, _ in self.vertices]

    @property
    def weights(self) -> list[int]:
        return [w for _, w in self.vertices]

    def degree(self, vid: int) -> int:
        return sum(vid in e for e in self.edges)

    @classmethod
    def linear(cls, cf) -> "PlumbedTree":
        """The chain ``a1 - a2 - ... - an``; ids are 0-based positions."""
        cf = list(cf)
        return cls(
            tuple(enumerate(cf)), tuple((k, k + 1) for k in range(len(cf) - 1))
        )

    @classmethod
    def from_json(cls, data) -> "PlumbedTree":
        if isinstance(data, str):
            data = json.loads(data)
        try:
            verts = [(v["id"], v["weight"]) for v in data["vertices"]]
            edges = [tuple(e) for e in data.get("edges", [])]
        except (KeyError, TypeError) as exc:
            raise InvalidTree(f"malformed tree JSON: {exc}") from exc
        if any(len(e) != 2 for e in edges):
            raise InvalidTree("edges must be id pairs")
        return cls(tuple(verts), tuple(edges))

    def to_json(self) -> dict:
        return {
            "vertices": [{"id": v, "weight": w} for v, w in self.vertices],
            "edges": [list(e) for e in self.edges],
        }


@dataclass(frozen=True)
class IntersectionForm:
    matrix: tuple[tuple[int, ...], ...]
    det: int

    @classmethod
    def from_matrix(cls, M) -> "IntersectionForm":
        M = tuple(tuple(int(v) for v in row) for row in M)
        n = len(M)
        if any(len(row) != n for row in M):
            raise InvalidInput("intersection form must be square")
        if any(M[i][j] != M[j][i] for i in range(n) for j in range(n)):
            raise InvalidInput("intersection form must be symmetric")
        return cls(M, snf.determinant(M))

    @property
    def n(self) -> int:
        return len(self.matrix)

    @property
    def weights(self) -> list[int]:
        return [self.matrix[i][i] for i in range(self.n)]

    def require_nonsingular(self):
        if self.det == 0:
            raise SingularForm("intersection form is degenerate")

    @cached_property
    def smith(self) -> snf.SmithForm:
        return snf.smith_form(self.matrix)

    @cached_property
    def inverse(self) -> list[list[Fraction]]:
        self.require_nonsingular()
        return snf.inverse(self.matrix)

    @cached_property
    def adjugate(self) -> np.ndarray:
        """Integer matrix ``det * Q^{-1}``."""
        return np.array([[int(v * self.det) for v in row] for row in self.inverse],
                        dtype=np.int64)

    def square(self, K) -> Fraction:
        k = np.asarray(K, dtype=np.int64)
        return Fraction(int(k @ self.adjugate @ k), self.det)

    @property
    def group(self) -> tuple[int, ...]:
        return self.smith.invariant_factors

    def neighbors(self) -> list[list[int]]:
        n = self.n
        return [[w for w in range(n) if w != v and self.matrix[v][w]] for v in range(n)]

    def is_forest(self) -> bool:
        n = self.n
        n_edges = sum(1 for v in range(n) for w in range(v + 1, n) if self.matrix[v][w])
        seen, comps = set(), 0
        nbrs = self.neighbors()
        for s in range(n):
            if s in seen:
                continue
            comps += 1
            seen.add(s)
            stack = [s]
            while stack:
                for w in nbrs[stack.pop()]:
                    if w not in seen:
                        seen.add(w)
                        stack.append(w)
        return n_edges == n - comps


@dataclass(frozen=True)
class SpinCClass:
    label: int
    representative: tuple[int, ...]


# --------------------------------------------------------------------------
# forms


def intersection_form(tree: PlumbedTree) -> IntersectionForm:
    idx = {v: k for k, v in enumerate(tree.ids)}
    n = len(idx)
    M = [[0] * n for _ in range(n)]
    for k, w in enumerate(tree.weights):
        M[k][k] = w
    for a, b in tree.edges:
        M[idx[a]][idx[b]] = M[idx[b]][idx[a]] = 1
    Q = IntersectionForm.from_matrix(M)
    Q.require_nonsingular()
    return Q


def is_negative_definite(Q: IntersectionForm) -> bool:
    return all((-1) ** (k + 1) * m > 0 for k, m in enumerate(snf.leading_minors(Q.matrix)))


def bad_vertices(tree: PlumbedTree) -> list[int]:
    return [v for v, w in tree.vertices if abs(w) < tree.degree(v)]


def is_characteristic(K, Q: IntersectionForm) -> bool:
    return len(K) == Q.n and all((k - m) % 2 == 0 for k, m in zip(K, Q.weights))


def char_square(K, Q: IntersectionForm) -> Fraction:
    """Exact ``K^T Q^{-1} K``."""
    Q.require_nonsingular()
    if len(K) != Q.n:
        raise InvalidInput("vector length does not match the form")
    y = snf.solve(Q.matrix, K)
    return sum((Fraction(k) * yk for k, yk in zip(K, y)), Fraction(0))


# --------------------------------------------------------------------------
# spin^c classes


def class_label(K, Q: IntersectionForm) -> int:
    if not is_characteristic(K, Q):
        raise InvalidInput(f"{tuple(K)} is not characteristic")
    y = [(k - m) // 2 for k, m in zip(K, Q.weights)]
    lab = 0
    for d, c in zip(Q.group, Q.smith.coordinates(y)):
        lab = lab * d + c
    return lab


def same_class(K1, K2, Q: IntersectionForm) -> bool:
    """Decide ``K1 - K2 in 2 Q Z^n`` by an exact rational solve."""
    diff = [(a - b) for a, b in zip(K1, K2)]
    if any(v % 2 for v in diff):
        return False
    x = snf.solve(Q.matrix, [v // 2 for v in diff])
    return all(v.denominator == 1 for v in x)


def spinc_classes(Q: IntersectionForm) -> list[SpinCClass]:
    Q.require_nonsingular()
    group = Q.group
    out = []
    for lab in range(abs(Q.det)):
        coords, rest = [], lab
        for d in reversed(group):
            coords.append(rest % d)
            rest //= d
        y = Q.smith.lift(list(reversed(coords)))
        K = tuple(m + 2 * v for m, v in zip(Q.weights, y))
        out.append(SpinCClass(lab, K))
    return out


def conjugate_class(cls: SpinCClass, Q: IntersectionForm) -> SpinCClass:
    K = tuple(-k for k in cls.representative)
    return SpinCClass(class_label(K, Q), K)


# --------------------------------------------------------------------------
# maximization


def _box_ranges(Q: IntersectionForm, slack: int) -> list[range]:
    return [range(m - 2 * slack, -m + 2 * slack + 1, 2) for m in Q.weights]


def box_size(Q: IntersectionForm, slack: int) -> int:
    return math.prod(len(r) for r in _box_ranges(Q, slack))


def in_box(K, Q: IntersectionForm, slack: int) -> bool:
    return all(m - 2 * slack <= k <= -m + 2 * slack for k, m in zip(K, Q.weights))


def _box_maxima(Q: IntersectionForm, slack: int) -> dict[int, tuple[Fraction, tuple]]:
    """Per-label maximum of ``K^T Q^{-1} K`` over the box, with first maximizer."""
    Q.require_nonsingular()
    n, det = Q.n, Q.det
    adj = Q.adjugate
    smith = Q.smith
    rows = np.array([smith.U[k] for k in smith.nontrivial_positions], dtype=np.int64)
    mods = np.array(Q.group, dtype=np.int64)
    strides = np.array(
        [math.prod(Q.group[k + 1:]) for k in range(len(Q.group))], dtype=np.int64
    )
    weights = np.array(Q.weights, dtype=np.int64)
    sign = 1 if det > 0 else -1
    best: dict[int, tuple[int, tuple]] = {}
    product = itertools.product(*_box_ranges(Q, slack))
    while True:
        chunk = list(itertools.islice(product, 50_000))
        if not chunk:
            break
        K = np.array(chunk, dtype=np.int64).reshape(len(chunk), n)
        score = np.einsum("ij,jk,ik->i", K, adj, K) * sign
        if len(mods):
            coords = (((K - weights) // 2) @ rows.T) % mods
            labels = coords @ strides
        else:
            labels = np.zeros(len(chunk), dtype=np.int64)
        for lab in np.unique(labels):
            idx = np.flatnonzero(labels == lab)
            j = idx[np.argmax(score[idx])]
            s = int(score[j])
            if int(lab) not in best or s > best[int(lab)][0]:
                best[int(lab)] = (s, tuple(int(v) for v in K[j]))
    return {lab: (Fraction(s * sign, det), K) for lab, (s, K) in best.items()}


def _lattice_maximizer(Q: IntersectionForm, K0) -> tuple[int, ...]:
    """Exact maximizer of ``K^T Q^{-1} K`` over ``K0 + 2 Q Z^n`` (forest-shaped Q).

    With ``K = K0 + 2Qx`` the square is ``K0^T Q^{-1} K0 + 4 G(x)`` where
    ``G(x) = x.K0 + x^T Q x`` is an integer concave quadratic.  A rounded and
    greedily improved start ``x0`` gives radius ``R = G(c) - G(x0)`` around the
    real optimum ``c``; every integer optimum then obeys
    ``(x_v - c_v)^2 <= R * (-Q^{-1})_vv``.  On those ranges ``G`` is maximized
    by dynamic programming along the forest.
    """
    M = Q.matrix
    n = Q.n
    Qi = Q.inverse
    nbrs = Q.neighbors()
    K0 = [int(k) for k in K0]
    c = [-sum((Qi[v][w] * K0[w] for w in range(n)), Fraction(0)) / 2 for v in range(n)]

    def G(x):
        return sum(x[v] * K0[v] for v in range(n)) + sum(
            x[v] * M[v][w] * x[w] for v in range(n) for w in range(n)
        )

    x = [round(cv) for cv in c]
    changed = True
    while changed:
        changed = False
        for v in range(n):
            s = K0[v] + 2 * sum(M[v][w] * x[w] for w in nbrs[v])
            t = round(Fraction(-s, 2 * M[v][v]))
            if t != x[v] and M[v][v] * t * t + s * t > M[v][v] * x[v] ** 2 + s * x[v]:
                x[v] = t
                changed = True
    Gc = -sum((K0[v] * Qi[v][w] * K0[w] for v in range(n) for w in range(n)), Fraction(0)) / 4
    R = Gc - G(x)
    ranges = []
    for v in range(n):
        b = R * -Qi[v][v]
        rad = math.sqrt(float(b))
        lo, hi = math.floor(float(c[v]) - rad) - 1, math.ceil(float(c[v]) + rad) + 1
        vals = [t for t in range(lo, hi + 1) if (t - c[v]) ** 2 <= b]
        ranges.append(np.array(vals, dtype=np.int64))

    # dynamic program over each component, children before parents
    best: list = [None] * n
    choice: dict = {}
    seen = [False] * n
    roots = []
    for r in range(n):
        if seen[r]:
            continue
        roots.append(r)
        order, parent = [], {r: None}
        seen[r] = True
        stack = [r]
        while stack:
            v = stack.pop()
            order.append(v)
            for w in nbrs[v]:
                if not seen[w]:
                    seen[w] = True
                    parent[w] = v
                    stack.append(w)
        for v in reversed(order):
            X = ranges[v]
            local = M[v][v] * X * X + K0[v] * X
            for w in nbrs[v]:
                if parent.get(w) == v:
                    table = best[w][None, :] + 2 * M[v][w] * X[:, None] * ranges[w][None, :]
                    choice[(v, w)] = table.argmax(axis=1)
                    local = local + table.max(axis=1)
            best[v] = local
    xs = [0] * n

    def assign(v, k):
        xs[v] = int(ranges[v][k])
        for w in nbrs[v]:
            if (v, w) in choice:
                assign(w, int(choice[(v, w)][k]))

    for r in roots:
        assign(r, int(np.argmax(best[r])))
    if G(xs) < G(x):
        raise ValueMismatch("lattice search lost the starting point")
    return tuple(K0[v] + 2 * sum(M[v][w] * xs[w] for w in range(n)) for v in range(n))


def _check_definite(Q: IntersectionForm):
    Q.require_nonsingular()
    if not is_negative_definite(Q):
        raise NotNegativeDefinite("intersection form is not negative definite")


def _choose(Q: IntersectionForm, slack: int, method: str) -> str:
    if method not in ("auto", "box", "lattice"):
        raise InvalidInput(f"unknown method {method!r}")
    if method == "auto":
        if Q.is_forest() and box_size(Q, slack) > BOX_CAP:
            return "lattice"
        return "box"
    if method == "lattice" and not Q.is_forest():
        raise InvalidInput("lattice route needs a forest-shaped form")
    return method


def _maxima(Q: IntersectionForm, classes, slack: int, method: str):
    """Map label -> (max square, maximizer) for the requested classes."""
    if slack < 0:
        raise InvalidInput("slack must be nonnegative")
    route = _choose(Q, slack, method)
    wanted = {c.label for c in classes}
    if route == "box":
        s = slack
        while True:
            found = _box_maxima(Q, s)
            if wanted <= found.keys():
                return {lab: found[lab] for lab in wanted}
            s += 1
            if s > MAX_SLACK or box_size(Q, s) > BOX_CAP:
                missing = sorted(wanted - found.keys())
                raise EmptyBox(f"no box representative for classes {missing[:5]}")
    out = {}
    for c in classes:
        K = _lattice_maximizer(Q, c.representative)
        if not in_box(K, Q, slack):
            raise ValueMismatch(f"lattice maximizer {K} escaped the box")
        out[c.label] = (Q.square(K), K)
    return out


def _d_value(square: Fraction, n: int) -> Fraction:
    return (square + n) / 4


def _tree_checks(tree: PlumbedTree) -> IntersectionForm:
    Q = intersection_form(tree)
    _check_definite(Q)
    bad = bad_vertices(tree)
    if len(bad) > 2:
        raise TooManyBadVertices(f"{len(bad)} bad vertices: {bad}")
    return Q


def maximizer(Q: IntersectionForm, cls: SpinCClass, slack: int = 1, method: str = "auto"):
    """(max square, maximizing characteristic vector) for one class."""
    _check_definite(Q)
    return _maxima(Q, [cls], slack, method)[cls.label]


def d_invariant_plumbing(tree: PlumbedTree, cls: SpinCClass, slack: int = 1,
                         method: str = "auto") -> Fraction:
    Q = _tree_checks(tree)
    square, _ = _maxima(Q, [cls], slack, method)[cls.label]
    return _d_value(square, Q.n)


def d_table_plumbing(tree: PlumbedTree, slack: int = 1, method: str = "auto") -> DTable:
    Q = _tree_checks(tree)
    return _table(Q, slack, method)


def _table(Q: IntersectionForm, slack: int, method: str) -> DTable:
    classes = spinc_classes(Q)
    found = _maxima(Q, classes, slack, method)
    vals = tuple(_d_value(found[c.label][0], Q.n) for c in classes)
    return DTable(vals, Q.group, Q.det)


def d_lower_bound_form(Q: IntersectionForm, cls: SpinCClass, slack: int = 1,
                       method: str = "auto") -> Fraction:
    """Lower bound ``max (c1^2 + b2)/4`` for any negative definite filling with form Q.

    No bad-vertex condition is imposed, so this is only a bound on d.
    """
    _check_definite(Q)
    square, _ = _maxima(Q, [cls], slack, method)[cls.label]
    return _d_value(square, Q.n)


def lower_bound_table(Q: IntersectionForm, slack: int = 1, method: str = "auto") -> DTable:
    _check_definite(Q)
    return _table(Q, slack, method)
