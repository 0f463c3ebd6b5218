"""Normalized points of P^1(Q), naive height, and the chordal metric.

Points are integer coordinate pairs [x : y] with gcd(x, y) = 1 and canonical
sign (y > 0, or y = 0 and x = 1), so [a/b, 1] = [a : b] and infinity = [1 : 0].
With that normalization the finite-place chordal distance reduces to the
p-adic valuation of the 2x2 determinant, and the archimedean one to an exact
rational under a half-log.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .logvals import POS_INF, LogExpr, _Infinite
from .places import Place, padic_valuation


@dataclass(frozen=True)
class ProjPoint:
    """Point [x : y] of P^1(Q) in canonical coprime form."""

    x: int
    y: int

    def __post_init__(self):
        if self.x == 0 and self.y == 0:
            raise ValueError("[0 : 0] is not a projective point")

    @property
    def is_infinite(self) -> bool:
        return self.y == 0

    def affine(self) -> Optional[Fraction]:
        """The affine coordinate x/y, or None at infinity."""
        if self.y == 0:
            return None
        return Fraction(self.x, self.y)

    def height(self) -> LogExpr:
        """log max(|x|, |y|); finite places contribute nothing once gcd = 1."""
        return LogExpr.log_int(max(abs(self.x), abs(self.y)))

    def __str__(self) -> str:
        return f"[{self.x}:{self.y}]"

    def to_json(self) -> dict:
        return {"x": str(self.x), "y": str(self.y)}


def normalize(x: int | Fraction, y: Optional[int] = None) -> ProjPoint:
    """Canonical representative of [x : y]; a single rational maps to [a : b]."""
    if y is None:
        q = Fraction(x)
        return ProjPoint(q.numerator, q.denominator)
    if isinstance(x, Fraction) or isinstance(y, Fraction):
        qx, qy = Fraction(x), Fraction(y)
        m = qx.denominator * qy.denominator // math.gcd(qx.denominator, qy.denominator)
        x, y = int(qx * m), int(qy * m)
    if x == 0 and y == 0:
        raise ValueError("cannot normalize (0, 0)")
    g = math.gcd(x, y)
    x, y = x // g, y // g
    if y < 0 or (y == 0 and x < 0):
        x, y = -x, -y
    return ProjPoint(x, y)


INFINITY = ProjPoint(1, 0)
ZERO = ProjPoint(0, 1)


def parse_point(text: str) -> ProjPoint:
    """Parse 'a/b', 'a', 'inf', or '[a:b]'."""
    text = text.strip()
    if text in ("inf", "infinity", "oo"):
        return INFINITY
    if text.startswith("[") and text.endswith("]"):
        a, b = text[1:-1].split(":")
        return normalize(int(a.strip()), int(b.strip()))
    return normalize(Fraction(text))


def point_from_json(obj: dict) -> ProjPoint:
    return normalize(int(obj["x"]), int(obj["y"]))


@dataclass(frozen=True)
class LocalDistance:
    """-log of the chordal distance between two points at one place.

    finite_valuation carries v_p(x1*y2 - x2*y1) at a finite place; arch_square
    carries the exact rational value of the squared archimedean distance.
    infinite marks distance zero (equal points), i.e. lambda = +infinity.
    """

    place: Place
    finite_valuation: Optional[int] = None
    arch_square: Optional[Fraction] = None
    infinite: bool = False

    @property
    def is_infinite(self) -> bool:
        return self.infinite

    def log_value(self) -> LogExpr | _Infinite:
        if self.infinite:
            return POS_INF
        if self.place.is_archimedean:
            return LogExpr.log_fraction(self.arch_square, Fraction(-1, 2))
        return LogExpr.log_int(self.place.prime, self.finite_valuation)

    def to_float(self, prec: int = 128) -> float:
        value = self.log_value()
        if isinstance(value, _Infinite):
            return math.inf
        return value.to_float(prec)


def log_chordal(p: ProjPoint, q: ProjPoint, v: Place) -> LocalDistance:
    """Logarithmic chordal distance between normalized points at a place.

    Equal points give the distinguished infinite distance, never an error.
    """
    det = p.x * q.y - q.x * p.y
    if det == 0:
        return LocalDistance(place=v, infinite=True)
    if v.is_archimedean:
        rho_sq = Fraction(det * det, (p.x * p.x + p.y * p.y) * (q.x * q.x + q.y * q.y))
        return LocalDistance(place=v, arch_square=rho_sq)
    # gcd(x, y) = 1 makes both max-terms p-adic units.
    return LocalDistance(place=v, finite_valuation=padic_valuation(det, v.prime))


def chordal_sum(p: ProjPoint, q: ProjPoint, places) -> LogExpr | _Infinite:
    """Sum of local-degree-weighted chordal logs over a set of places."""
    total = LogExpr.zero()
    for v in places:
        dist = log_chordal(p, q, v)
        if dist.is_infinite:
            return POS_INF
        total = total + dist.log_value() * v.local_degree
    return total
