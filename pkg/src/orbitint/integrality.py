"""Quasi-integrality tests, proximity-set scans, S-integral censuses, and the
numerator/denominator log-ratio series.

Threshold decisions consume certified intervals and report "ambiguous" when
an interval straddles the cut; nothing is ever silently rounded across it.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .heights import HeightEstimate, canonical_height_word, system_bounds
from .logvals import DEFAULT_PRECISION, LogExpr, _Infinite
from .orbits import (DEFAULT_LIMITS, WorkLimits, enumerate_tree, iterate_word,
                     preperiodicity_check)
from .places import PlaceSet, is_s_integer, log_plus_abs
from .proj1 import ProjPoint, chordal_sum
from .ratmap import MapSystem
from .words import Word, degree_products


def quasi_integral_test(x: Fraction | int, s: PlaceSet, epsilon: Fraction,
                        prec: int = DEFAULT_PRECISION) -> bool:
    """True when the S-part of the height is at least epsilon times the height.

    Both sides are exact log combinations; ties fall back to integer power
    comparison, so the boundary (equality) is decided exactly and counts as in.
    """
    epsilon = Fraction(epsilon)
    if not 0 < epsilon <= 1:
        raise ValueError("epsilon must lie in (0, 1]")
    x = Fraction(x)
    s_part = LogExpr.zero()
    for v in s:
        s_part = s_part + log_plus_abs(x, v) * v.local_degree
    height = LogExpr.log_int(max(abs(x.numerator), x.denominator))
    sign = (s_part - height * epsilon).sign(prec)
    if sign is None:
        raise ArithmeticError(
            "quasi-integrality comparison undecidable; raise the precision")
    return sign >= 0


class GammaVerdict(enum.Enum):
    IN = "in"
    OUT = "out"
    AMBIGUOUS = "ambiguous"


@dataclass(frozen=True)
class GammaRecord:
    """Membership scan of the proximity set at one configuration."""

    word: Word
    base: ProjPoint      # A, the target point
    point: ProjPoint     # P, the moving point
    places: PlaceSet
    epsilon: Fraction
    depth: int
    members: tuple       # (n, GammaVerdict) pairs for n = 0..depth
    height: HeightEstimate
    preperiodic: bool = False

    def verdicts(self) -> dict[int, GammaVerdict]:
        return dict(self.members)

    def in_set(self) -> list[int]:
        return [n for n, v in self.members if v is GammaVerdict.IN]

    def ambiguous(self) -> list[int]:
        return [n for n, v in self.members if v is GammaVerdict.AMBIGUOUS]

    def to_json(self, prec: int = DEFAULT_PRECISION) -> dict:
        return {
            "word": self.word.to_json(),
            "A": self.base.to_json(),
            "P": self.point.to_json(),
            "S": self.places.to_json(),
            "epsilon": str(self.epsilon),
            "depth": self.depth,
            "preperiodic": self.preperiodic,
            "height": self.height.to_json(prec),
            "members": [{"n": n, "verdict": v.value} for n, v in self.members],
        }


def gamma_set(system: MapSystem, word: Word, s: PlaceSet, base: ProjPoint,
              point: ProjPoint, epsilon: Fraction, depth: int,
              bounds=None, prec: int = DEFAULT_PRECISION,
              limits: WorkLimits = DEFAULT_LIMITS) -> GammaRecord:
    """Scan n = 0..depth for chordal proximity to the base beating the height.

    The right side at step n is epsilon * D_n * (canonical height of the
    starting point), via the shift functional equation; the height interval
    makes each verdict in, out, or ambiguous.
    """
    epsilon = Fraction(epsilon)
    if not 0 < epsilon <= 1:
        raise ValueError("epsilon must lie in (0, 1]")
    if bounds is None:
        bounds = system_bounds(system)
    preperiodic = False
    if word.is_periodic:
        # Cycles have small coordinates; a tight bit budget keeps the scan cheap.
        scan_limits = WorkLimits(limits.node_cap, min(limits.bit_cap, 1 << 14))
        verdict = preperiodicity_check(system, word, point, depth=max(depth, 16),
                                       prec=prec, bounds=bounds,
                                       limits=scan_limits)
        preperiodic = verdict.is_preperiodic
    est = canonical_height_word(system, word, point, depth=depth + 4,
                                bounds=bounds, prec=prec,
                                bit_cap=limits.bit_cap)
    records = iterate_word(system, word, point, depth, limits=limits)
    d_series = degree_products(system.degrees, word, depth)
    members = []
    for n, rec in enumerate(records):
        lhs = chordal_sum(rec.point, base, s)
        if isinstance(lhs, _Infinite):
            members.append((n, GammaVerdict.IN))
            continue
        scale = epsilon * d_series[n]
        in_sign = (lhs - est.hi_expr * scale).sign(prec)
        if in_sign is not None and in_sign >= 0:
            members.append((n, GammaVerdict.IN))
            continue
        out_sign = (lhs - est.lo_expr * scale).sign(prec)
        if out_sign is not None and out_sign < 0:
            members.append((n, GammaVerdict.OUT))
            continue
        members.append((n, GammaVerdict.AMBIGUOUS))
    return GammaRecord(word, base, point, s, epsilon, depth, tuple(members),
                       est, preperiodic)


@dataclass(frozen=True)
class CensusReport:
    """S-integral points found in the deduplicated orbit tree (depth >= 1)."""

    hits: tuple
    depth: int
    places: PlaceSet
    bound_value: Optional[float] = None

    @property
    def count(self) -> int:
        return len(self.hits)

    def hit_values(self) -> list[Fraction]:
        return [rec.point.affine() for rec in self.hits]

    def to_json(self, prec: int = DEFAULT_PRECISION) -> dict:
        out = {
            "S": self.places.to_json(),
            "depth": self.depth,
            "count": self.count,
            "hits": [rec.to_json() for rec in self.hits],
        }
        if self.bound_value is not None:
            out["bound"] = self.bound_value
        return out


def s_integral_census(system: MapSystem, point: ProjPoint, s: PlaceSet,
                      depth: int, limits: WorkLimits = DEFAULT_LIMITS,
                      workers: int = 1) -> CensusReport:
    """Distinct orbit points (one or more steps deep) with S-integral affine
    coordinate; the point at infinity has none and is skipped."""
    if not s.contains_infinite:
        raise ValueError("S must contain the archimedean place")
    records = enumerate_tree(system, point, depth, dedupe=True,
                             limits=limits, workers=workers)
    hits = []
    for rec in records:
        if rec.depth == 0 or rec.point.is_infinite:
            continue
        if is_s_integer(rec.point.affine(), s):
            hits.append(rec)
    return CensusReport(tuple(hits), depth, s)


@dataclass(frozen=True)
class RatioTerm:
    """One term of the log|numerator| / log|denominator| series."""

    n: int
    num_bits: int
    den_bits: int
    ratio: Optional[float]
    verdict: str  # "defined" | "small-numerator" | "small-denominator" | "infinity"

    def to_csv_row(self) -> tuple:
        return (self.n, self.num_bits, self.den_bits,
                "" if self.ratio is None else repr(self.ratio), self.verdict)


def ratio_series(system: MapSystem, word: Word, point: ProjPoint, depth: int,
                 prec: int = DEFAULT_PRECISION,
                 limits: WorkLimits = DEFAULT_LIMITS) -> list[RatioTerm]:
    """log|a_n|/log|b_n| along the orbit written in lowest terms a_n/b_n.

    Terms whose numerator or denominator has absolute value <= 1 carry a
    marker instead of a ratio; an orbit point at infinity truncates the
    series with a marker term.
    """
    if point.is_infinite:
        raise ValueError("the starting point must be affine")
    terms = []
    records = iterate_word(system, word, point, depth, limits=limits)
    for rec in records:
        if rec.point.is_infinite:
            terms.append(RatioTerm(rec.depth, 0, 0, None, "infinity"))
            break
        a, b = rec.point.x, rec.point.y
        if abs(a) <= 1:
            terms.append(RatioTerm(rec.depth, abs(a).bit_length(), b.bit_length(),
                                   None, "small-numerator"))
            continue
        if b <= 1:
            terms.append(RatioTerm(rec.depth, abs(a).bit_length(), b.bit_length(),
                                   None, "small-denominator"))
            continue
        ratio = _log_ratio(abs(a), b, prec)
        terms.append(RatioTerm(rec.depth, abs(a).bit_length(), b.bit_length(),
                               ratio, "defined"))
    return terms


def _log_ratio(num: int, den: int, prec: int) -> float:
    box = LogExpr.log_int(num).interval(prec) / LogExpr.log_int(den).interval(prec)
    return (float(box.a) + float(box.b)) / 2


@dataclass(frozen=True)
class AveragedRatio:
    """Mean of the level-n ratios over all words, with exclusions counted."""

    level: int
    mean: Optional[float]
    total_words: int
    excluded: int
    excluded_words: tuple = field(default=())

    def to_json(self) -> dict:
        return {"level": self.level, "mean": self.mean,
                "totalWords": self.total_words, "excluded": self.excluded}


def averaged_ratio(system: MapSystem, point: ProjPoint, level: int,
                   prec: int = DEFAULT_PRECISION,
                   limits: WorkLimits = DEFAULT_LIMITS) -> AveragedRatio:
    """Arithmetic mean of log|a|/log|b| over the lexicographic enumeration of
    all words of the given length (words, not distinct maps)."""
    if point.is_infinite:
        raise ValueError("the starting point must be affine")
    ratios = []
    excluded = []
    # Leaves of the preorder tree arrive in lexicographic word order, and the
    # shared-prefix walk costs one evaluation per node.
    for rec in enumerate_tree(system, point, level, dedupe=False, limits=limits):
        if rec.depth != level:
            continue
        if rec.point.is_infinite:
            excluded.append(rec.word)
            continue
        a, b = abs(rec.point.x), rec.point.y
        if a <= 1 or b <= 1:
            excluded.append(rec.word)
            continue
        ratios.append(_log_ratio(a, b, prec))
    mean = sum(ratios) / len(ratios) if ratios else None
    return AveragedRatio(level, mean, system.k ** level, len(excluded),
                         tuple(excluded))
