"""Rational self-maps of P^1 over Q: normalization, evaluation, composition,
map heights, and ramification indices.

A map is stored as a coprime pair of integer polynomials (f, g), jointly
primitive, with the leading nonzero coefficient of g positive.  Evaluation
goes through the degree-d homogenizations, which are total on P^1(Q) because
the homogeneous resultant is nonzero.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import polys
from .logvals import LogExpr
from .proj1 import ProjPoint, normalize


class MapError(ValueError):
    """Invalid rational map data; carries a witness when one exists."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


@dataclass(frozen=True)
class RatMap:
    """Normalized rational map f/g with degree max(deg f, deg g)."""

    f: tuple
    g: tuple
    degree: int

    def homogeneous(self, x: int, y: int) -> tuple[int, int]:
        """(F(x, y), G(x, y)) for the degree-d homogenizations."""
        d = self.degree
        return (polys.eval_homogeneous(self.f, d, x, y),
                polys.eval_homogeneous(self.g, d, x, y))

    @property
    def max_abs_coeff(self) -> int:
        return max(abs(c) for c in self.f + self.g)

    @property
    def term_count(self) -> int:
        """Larger per-polynomial count of nonzero coefficients."""
        return max(sum(1 for c in self.f if c),
                   sum(1 for c in self.g if c))

    def __str__(self) -> str:
        num = _poly_str(self.f)
        den = _poly_str(self.g)
        if den == "1":
            return num
        if any(ch in num[1:] for ch in "+-"):
            num = f"({num})"
        if any(ch in den[1:] for ch in "+-"):
            den = f"({den})"
        return f"{num}/{den}"

    def to_json(self) -> dict:
        return {"f": [str(c) for c in self.f], "g": [str(c) for c in self.g]}


def _poly_str(cs: Sequence[int]) -> str:
    cs = polys.strip(cs)
    if not cs:
        return "0"
    parts = []
    for i in range(len(cs) - 1, -1, -1):
        c = cs[i]
        if c == 0:
            continue
        if i == 0:
            term = str(abs(c))
        else:
            mag = "" if abs(c) == 1 else str(abs(c))
            term = f"{mag}z" if i == 1 else f"{mag}z^{i}"
        if not parts:
            parts.append(("-" if c < 0 else "") + term)
        else:
            parts.append(("-" if c < 0 else "+") + term)
    return "".join(parts)


def _normalize_pair(f: Sequence, g: Sequence) -> tuple[tuple, tuple]:
    """Joint integer clearing, primitivity, and sign canonicalization."""
    fq = polys.to_fractions(f)
    gq = polys.to_fractions(g)
    lcm = 1
    for c in fq + gq:
        lcm = lcm * c.denominator // math.gcd(lcm, c.denominator)
    fi = polys.strip([int(c * lcm) for c in fq])
    gi = polys.strip([int(c * lcm) for c in gq])
    joint = math.gcd(polys.content(fi), polys.content(gi))
    if joint > 1:
        fi = tuple(c // joint for c in fi)
        gi = tuple(c // joint for c in gi)
    if gi and gi[-1] < 0:
        fi, gi = polys.neg(fi), polys.neg(gi)
    return fi, gi


def _raw_map(f: Sequence, g: Sequence) -> RatMap:
    """Build without the coprimality check (for compositions, known coprime)."""
    fi, gi = _normalize_pair(f, g)
    return RatMap(fi, gi, max(polys.degree(fi), polys.degree(gi)))


def make_map(f_coeffs: Sequence, g_coeffs: Sequence) -> RatMap:
    """Normalized rational map from ascending coefficient lists.

    Accepts ints, Fractions, or strings.  Rejects zero denominators, constant
    maps, and pairs with a common polynomial factor (witness attached).
    """
    f = [Fraction(c) for c in f_coeffs]
    g = [Fraction(c) for c in g_coeffs]
    if not polys.strip(g):
        raise MapError("denominator polynomial is zero")
    fi, gi = _normalize_pair(f, g)
    if not fi:
        raise MapError("numerator polynomial is zero (constant map)")
    d = max(polys.degree(fi), polys.degree(gi))
    if d < 1:
        raise MapError("constant maps are not rational self-map data")
    common = polys.gcd_q(fi, gi)
    if polys.degree(common) >= 1:
        raise MapError(
            f"numerator and denominator share the factor {_poly_str(common)}",
            witness=common)
    return RatMap(fi, gi, d)


_TERM_RE = re.compile(r"^([+-]?\d*)\*?(z(?:\^(\d+))?)?$")


def _parse_poly(text: str) -> list[int]:
    text = text.strip()
    if text.startswith("(") and text.endswith(")"):
        inner = text[1:-1]
        if inner.count("(") == inner.count(")"):
            text = inner
    text = text.replace(" ", "")
    if not text:
        raise MapError("empty polynomial")
    chunks = re.split(r"(?=[+-])", text)
    coeffs: dict[int, int] = {}
    for chunk in chunks:
        if not chunk:
            continue
        m = _TERM_RE.match(chunk)
        if not m or (not m.group(1) and not m.group(2)):
            raise MapError(f"cannot parse polynomial term {chunk!r}")
        coeff_text, z_part, exp_text = m.group(1), m.group(2), m.group(3)
        if coeff_text in ("", "+"):
            coeff = 1
        elif coeff_text == "-":
            coeff = -1
        else:
            coeff = int(coeff_text)
        if z_part is None:
            exp = 0
        else:
            exp = int(exp_text) if exp_text else 1
        coeffs[exp] = coeffs.get(exp, 0) + coeff
    out = [0] * (max(coeffs) + 1)
    for e, c in coeffs.items():
        out[e] = c
    return out


def parse_map(text: str) -> RatMap:
    """Parse a display string like '(z^2+1)/z', 'z^2-1', or '1/z^2'."""
    text = text.strip().replace(" ", "")
    depth = 0
    split_at = None
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "/" and depth == 0:
            if split_at is not None:
                raise MapError(f"more than one top-level '/' in {text!r}")
            split_at = i
    if split_at is None:
        return make_map(_parse_poly(text), [1])
    return make_map(_parse_poly(text[:split_at]), _parse_poly(text[split_at + 1:]))


def map_from_json(obj: dict) -> RatMap:
    return make_map(obj["f"], obj["g"])


def eval_point(phi: RatMap, p: ProjPoint) -> ProjPoint:
    u, v = phi.homogeneous(p.x, p.y)
    return normalize(u, v)


def compose(outer: RatMap, inner: RatMap) -> RatMap:
    """outer after inner; degrees multiply and the result stays coprime."""
    d = outer.degree
    p_pows = [(1,)]
    q_pows = [(1,)]
    for _ in range(d):
        p_pows.append(polys.mul(p_pows[-1], inner.f))
        q_pows.append(polys.mul(q_pows[-1], inner.g))
    num: tuple = ()
    den: tuple = ()
    for i in range(d + 1):
        fc = outer.f[i] if i < len(outer.f) else 0
        gc = outer.g[i] if i < len(outer.g) else 0
        if fc or gc:
            cross = polys.mul(p_pows[i], q_pows[d - i])
            if fc:
                num = polys.add(num, polys.scale(cross, fc))
            if gc:
                den = polys.add(den, polys.scale(cross, gc))
    result = _raw_map(num, den)
    assert result.degree == outer.degree * inner.degree, "composition degree defect"
    return result


def map_height(phi: RatMap) -> LogExpr:
    """log of the largest coefficient magnitude (joint primitivity makes the
    finite places contribute nothing)."""
    return LogExpr.log_int(phi.max_abs_coeff)


def wronskian(phi: RatMap) -> tuple:
    """f'g - fg'; nonzero for every nonconstant map in characteristic zero."""
    return polys.sub(polys.mul(polys.derivative(phi.f), phi.g),
                     polys.mul(phi.f, polys.derivative(phi.g)))


@dataclass(frozen=True)
class MapSystem:
    """Finite generating set, stored sorted by ascending degree."""

    maps: tuple

    def __init__(self, maps: Sequence[RatMap]):
        maps = tuple(sorted(maps, key=lambda m: m.degree))
        if not maps:
            raise MapError("a map system needs at least one map")
        for m in maps:
            if m.degree < 2:
                raise MapError(f"system maps need degree >= 2, got {m} of degree {m.degree}")
        object.__setattr__(self, "maps", maps)

    @property
    def k(self) -> int:
        return len(self.maps)

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(m.degree for m in self.maps)

    @property
    def min_degree(self) -> int:
        return self.maps[0].degree

    @property
    def max_degree(self) -> int:
        return self.maps[-1].degree

    @property
    def degree_sum(self) -> int:
        return sum(self.degrees)

    def map_for_letter(self, letter: int) -> RatMap:
        if not 1 <= letter <= self.k:
            raise ValueError(f"letter {letter} out of range 1..{self.k}")
        return self.maps[letter - 1]

    def to_json(self) -> dict:
        return {"maps": [m.to_json() for m in self.maps]}


def system_height(system: MapSystem) -> LogExpr:
    """Max member height, exactly (max of coefficient magnitudes)."""
    return LogExpr.log_int(max(m.max_abs_coeff for m in system.maps))


# -- ramification ----------------------------------------------------------

def _fiber_form(phi: RatMap, q: ProjPoint) -> list[int]:
    """Ascending coefficients of y(Q)*F - x(Q)*G, whose roots are phi^-1(Q)."""
    d = phi.degree
    out = []
    for i in range(d + 1):
        fc = phi.f[i] if i < len(phi.f) else 0
        gc = phi.g[i] if i < len(phi.g) else 0
        out.append(q.y * fc - q.x * gc)
    return out


def _order_at(coeffs: Sequence, z0: Fraction) -> int:
    """Multiplicity of z0 as a root, by repeated exact synthetic division."""
    poly = list(polys.to_fractions(polys.strip(coeffs)))
    order = 0
    while poly:
        acc = Fraction(0)
        quotient = [Fraction(0)] * (len(poly) - 1)
        for i in range(len(poly) - 1, 0, -1):
            acc = acc * z0 + poly[i]
            quotient[i - 1] = acc
        if acc * z0 + poly[0] != 0:
            break
        order += 1
        poly = quotient
        while poly and poly[-1] == 0:
            poly.pop()
    return order


def ramification_index(phi: RatMap, p: ProjPoint) -> int:
    """Multiplicity of p in the fiber of phi over phi(p).

    Computed on the binary form y(Q)F - x(Q)G, which is chart-free: at a
    finite point the multiplicity is the vanishing order after shifting, and
    at infinity it is the degree drop of the dehomogenization.
    """
    h = _fiber_form(phi, eval_point(phi, p))
    if p.y == 0:
        e = phi.degree - polys.degree(h)
    else:
        e = _order_at(h, Fraction(p.x, p.y))
    assert 1 <= e <= phi.degree, f"ramification index {e} out of range"
    return e


def is_totally_ramified(phi: RatMap, p: ProjPoint) -> bool:
    return ramification_index(phi, p) == phi.degree


def mobius_inverse(l: RatMap) -> RatMap:
    """Inverse of a degree-1 map (az+b)/(cz+d) -> (dz-b)/(-cz+a)."""
    if l.degree != 1:
        raise MapError(f"not a fractional linear map: {l}")
    b = l.f[0] if len(l.f) > 0 else 0
    a = l.f[1] if len(l.f) > 1 else 0
    dd = l.g[0] if len(l.g) > 0 else 0
    c = l.g[1] if len(l.g) > 1 else 0
    return _raw_map((-b, dd), (a, -c))


def eval_mobius_inverse(l: RatMap, p: ProjPoint) -> ProjPoint:
    return eval_point(mobius_inverse(l), p)


def ramification_index_chart(phi: RatMap, p: ProjPoint, chart: RatMap) -> int:
    """Ramification index computed in an explicit chart L, as ord at L^-1(p)
    of the conjugated map; must agree with ramification_index for any valid L.
    """
    l_inv = mobius_inverse(chart)
    beta_pt = eval_point(l_inv, p)
    if beta_pt.y == 0:
        raise MapError(f"chart {chart} sends {p} to infinity; pick another")
    conj = compose(l_inv, compose(phi, chart))
    beta = Fraction(beta_pt.x, beta_pt.y)
    g_at = polys.eval_at(conj.g, beta)
    if g_at == 0:
        raise MapError(f"chart {chart} leaves the image at infinity; pick another")
    f_at = polys.eval_at(conj.f, beta)
    # ord_beta of conj(z) - conj(beta); the denominator does not vanish there.
    numerator = polys.sub(polys.scale(conj.f, g_at), polys.scale(conj.g, f_at))
    return _order_at(numerator, beta)


def rational_roots(coeffs: Sequence[int], trial_bound: int = 100_000):
    """Rational roots with multiplicities, via the rational root theorem."""
    from .places import factorize

    poly = list(polys.strip(coeffs))
    if not poly:
        raise ValueError("zero polynomial has every root")
    roots: list[tuple[Fraction, int]] = []
    shift = 0
    while poly[0] == 0:
        shift += 1
        poly.pop(0)
    if shift:
        roots.append((Fraction(0), shift))
    if len(poly) <= 1:
        return roots

    def divisors(n: int) -> list[int]:
        ds = [1]
        for prime, exp in factorize(n, trial_bound).items():
            ds = [d * prime ** e for d in ds for e in range(exp + 1)]
        return ds

    const, lead = abs(poly[0]), abs(poly[-1])
    candidates = set()
    for p in divisors(const):
        for q in divisors(lead):
            if math.gcd(p, q) == 1:
                candidates.add(Fraction(p, q))
                candidates.add(Fraction(-p, q))
    for cand in sorted(candidates):
        if polys.eval_at(poly, cand) == 0:
            mult = _order_at(poly, cand)
            roots.append((cand, mult))
    return roots
