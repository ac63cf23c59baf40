"""Alexander polynomials, torsion coefficients and L-space knot data."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction

from .dtable import DTable
from .errors import InvalidInput, NotLSpaceForm, NotNormalized, NotSymmetric
from .lens import lens_p1_closed_form

_TERM = re.compile(
    r"([+-])?(?:(\d+)\*?)?(?:([Tt])(?:\^\{?([+-]?\d+)\}?)?)?"
)


@dataclass(frozen=True)
class AlexanderPoly:
    """Laurent polynomial in ``T`` stored as ``{degree: coefficient}`` (no zeros)."""

    coeffs: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {int(k): int(v) for k, v in dict(self.coeffs).items() if int(v) != 0}
        object.__setattr__(self, "coeffs", clean)

    def __hash__(self):
        return hash(tuple(sorted(self.coeffs.items())))

    # parsing -----------------------------------------------------------------
    @classmethod
    def parse(cls, text: str) -> "AlexanderPoly":
        """Parse ``"T^2 - T + 1 - T^-1 + T^-2"`` or the JSON coefficient form."""
        text = text.strip().replace("−", "-")
        if text.startswith("{"):
            try:
                return cls.from_json(json.loads(text))
            except json.JSONDecodeError as exc:
                raise InvalidInput(f"bad polynomial JSON: {exc}") from exc
        body = re.sub(r"\s+", "", text)
        if not body:
            raise InvalidInput("empty polynomial")
        coeffs: dict[int, int] = {}
        pos = 0
        while pos < len(body):
            m = _TERM.match(body, pos)
            sign, num, var, exp = m.groups()
            if m.end() == pos or (num is None and var is None):
                raise InvalidInput(f"cannot parse polynomial near {body[pos:]!r}")
            if pos > 0 and sign is None:
                raise InvalidInput(f"missing operator near {body[pos:]!r}")
            c = int(num) if num is not None else 1
            if sign == "-":
                c = -c
            deg = 0 if var is None else (int(exp) if exp is not None else 1)
            coeffs[deg] = coeffs.get(deg, 0) + c
            pos = m.end()
        return cls(coeffs)

    @classmethod
    def from_json(cls, data: dict) -> "AlexanderPoly":
        try:
            lo = int(data["min_deg"])
            return cls({lo + k: int(c) for k, c in enumerate(data["coeffs"])})
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidInput(f"bad polynomial JSON: {exc}") from exc

    @classmethod
    def from_gaps(cls, gaps) -> "AlexanderPoly":
        """``sum (-1)^(k-i) T^(n_i)`` for gaps ``n_-k < ... < n_k``."""
        k = (len(gaps) - 1) // 2
        return cls({n: (-1) ** (k - idx) for idx, n in zip(range(-k, k + 1), gaps)})

    def to_json(self) -> dict:
        if not self.coeffs:
            return {"min_deg": 0, "coeffs": [0]}
        lo, hi = self.min_degree, self.max_degree
        return {"min_deg": lo, "coeffs": [self.coeffs.get(d, 0) for d in range(lo, hi + 1)]}

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for d in sorted(self.coeffs, reverse=True):
            c = self.coeffs[d]
            mono = "" if d == 0 else ("T" if d == 1 else f"T^{d}")
            mag = abs(c)
            body = str(mag) if not mono else (mono if mag == 1 else f"{mag}{mono}")
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    # structure ---------------------------------------------------------------
    @property
    def min_degree(self) -> int:
        return min(self.coeffs) if self.coeffs else 0

    @property
    def max_degree(self) -> int:
        return max(self.coeffs) if self.coeffs else 0

    def at_one(self) -> int:
        return sum(self.coeffs.values())

    def is_symmetric(self) -> bool:
        return all(self.coeffs.get(-d, 0) == c for d, c in self.coeffs.items())

    def a(self, i: int) -> int:
        return self.coeffs.get(i, 0)

    def centered(self) -> "AlexanderPoly":
        """Multiply by the unit ``T^k`` that centres the support at degree 0."""
        if not self.coeffs:
            return self
        span = self.min_degree + self.max_degree
        if span % 2:
            raise NotSymmetric("support cannot be centred (odd span)")
        s = span // 2
        return AlexanderPoly({d - s: c for d, c in self.coeffs.items()})

    def normalized(self) -> "AlexanderPoly":
        """Centre, fix the sign so that Delta(1) = 1, and check symmetry."""
        p = self.centered()
        if not p.is_symmetric():
            raise NotSymmetric(f"{self} is not symmetric up to units")
        v = p.at_one()
        if v == -1:
            p = AlexanderPoly({d: -c for d, c in p.coeffs.items()})
        elif v != 1:
            raise NotNormalized(f"Delta(1) = {v}, expected +-1")
        return p

    def is_trivial(self) -> bool:
        return self.coeffs == {0: 1}


def _require_normalized(delta: AlexanderPoly):
    if not delta.is_symmetric():
        raise NotSymmetric(f"{delta} is not symmetric")
    if delta.at_one() != 1:
        raise NotNormalized(f"Delta(1) = {delta.at_one()}")


@dataclass(frozen=True)
class TorsionCoeffs:
    """``t_i`` for ``i >= 0``; ``t_i = t_{-i}`` and ``t_i = 0`` past the stored range."""

    values: tuple[int, ...]

    def __call__(self, i: int) -> int:
        i = abs(i)
        return self.values[i] if i < len(self.values) else 0

    def __getitem__(self, i: int) -> int:
        return self(i)

    def all_zero(self) -> bool:
        return not any(self.values)


def torsion_coeffs(delta: AlexanderPoly) -> TorsionCoeffs:
    _require_normalized(delta)
    top = delta.max_degree
    return TorsionCoeffs(
        tuple(sum(j * delta.a(i + j) for j in range(1, top - i + 1)) for i in range(max(top, 1)))
    )


@dataclass(frozen=True)
class LSpaceKnotData:
    gaps: tuple[int, ...]
    deltas: tuple[int, ...]

    @property
    def k(self) -> int:
        return (len(self.gaps) - 1) // 2

    @property
    def genus(self) -> int:
        return self.gaps[-1]


def lspace_form_failure(delta: AlexanderPoly) -> str | None:
    """Why ``delta`` is not of L-space-knot form, or ``None``."""
    if not delta.is_symmetric():
        return "not symmetric"
    if delta.at_one() != 1:
        return f"Delta(1) = {delta.at_one()}, expected 1"
    degs = sorted(delta.coeffs)
    if len(degs) % 2 == 0:
        return "support does not have odd size"
    for pos, d in enumerate(reversed(degs)):
        if delta.coeffs[d] != (-1) ** pos:
            return f"coefficients are not alternating +-1 from the top (degree {d})"
    return None


def deltas_from_gaps(gaps) -> tuple[int, ...]:
    """Maslov gradings of the generators of HFK-hat of an L-space knot."""
    k = (len(gaps) - 1) // 2
    n = dict(zip(range(-k, k + 1), gaps))
    delta = {k: 0}
    for i in range(k - 1, -k - 1, -1):
        if (k - i) % 2:
            delta[i] = delta[i + 1] - 2 * (n[i + 1] - n[i]) + 1
        else:
            delta[i] = delta[i + 1] - 1
    return tuple(delta[i] for i in range(-k, k + 1))


def gaps_from_alexander(delta: AlexanderPoly) -> LSpaceKnotData:
    why = lspace_form_failure(delta)
    if why:
        raise NotLSpaceForm(why)
    gaps = tuple(sorted(delta.coeffs))
    return LSpaceKnotData(gaps, deltas_from_gaps(gaps))


def genus_lspace(delta: AlexanderPoly) -> int:
    why = lspace_form_failure(delta)
    if why:
        raise NotLSpaceForm(why)
    return delta.max_degree


def surgery_labels(p: int) -> list[int]:
    """Representatives ``i`` in ``(-p/2, p/2]``, ordered by label ``i mod p``."""
    reps = range(-((p - 1) // 2), p // 2 + 1)
    return sorted(reps, key=lambda i: i % p)


def surgery_d_table_lspace(delta: AlexanderPoly, p: int) -> DTable:
    """d-table of ``S^3_p(K)`` for an L-space knot; label ``i mod p``.

    Entry at representative ``i`` is ``d(L(p,1), i) - 2 t_|i|``.
    """
    if p < 1:
        raise InvalidInput("surgery coefficient must be a positive integer")
    why = lspace_form_failure(delta)
    if why:
        raise NotLSpaceForm(why)
    t = torsion_coeffs(delta)
    vals = [lens_p1_closed_form(p, i % p) - 2 * t(i) for i in surgery_labels(p)]
    return DTable.cyclic(vals, det=p)


@dataclass(frozen=True)
class Report:
    ok: bool
    failure: str | None = None
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"ok": self.ok, "failure": self.failure, "details": self.details}


def validate_lspace_alexander(delta: AlexanderPoly) -> Report:
    """Check symmetry, Delta(1) = 1, alternating +-1 form and t_i >= 0."""
    try:
        centered = delta.centered()
    except NotSymmetric as exc:
        return Report(False, str(exc))
    why = lspace_form_failure(centered)
    if why:
        return Report(False, why)
    t = torsion_coeffs(centered)
    negative = [i for i, v in enumerate(t.values) if v < 0]
    if negative:
        return Report(False, f"t_{negative[0]} < 0")
    return Report(True, None, {"genus": centered.max_degree, "torsion": list(t.values)})


def d_one_lspace(delta: AlexanderPoly) -> Fraction:
    """``d(S^3_1(K)) = -2 t_0``."""
    return surgery_d_table_lspace(delta, 1)[0]
