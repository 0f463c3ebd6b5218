"""Certified canonical heights along words and for whole map systems.

Every estimate is an interval whose endpoints are exact log expressions; the
radius comes from per-map height-difference constants summed along the word.
One-sided constants are tracked separately, so monomial-like maps (whose
height transforms exactly) get zero-width intervals up to rounding.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from . import polys
from .errors import WorkLimitExceeded
from .logvals import DEFAULT_PRECISION, LogExpr
from .proj1 import ProjPoint, normalize
from .ratmap import MapSystem, RatMap, eval_point
from .words import Word, degree_product, iter_periodic_words

DEFAULT_DEPTH = 12
DEFAULT_BIT_CAP = 1_000_000
DEFAULT_NODE_CAP = 1_000_000


@dataclass(frozen=True)
class HeightDifferenceBound:
    """Bounds on how far h(phi(x)) can sit from d*h(x), for all x.

    upper and lower are unnormalized one-sided constants:
        -lower <= h(phi(x)) - d*h(x) <= upper.
    c is the normalized two-sided constant max(upper, lower)/d.
    """

    map: RatMap
    c: LogExpr
    upper: LogExpr
    lower: LogExpr
    mode: str = "certified"
    sample_size: int = 0

    @property
    def certified(self) -> bool:
        return self.mode == "certified"


def _logexpr_max(a: LogExpr, b: LogExpr, prec: int = DEFAULT_PRECISION) -> LogExpr:
    s = (a - b).sign(prec)
    if s is None:
        # Undecidable means numerically equal at every budget; either is valid.
        return a
    return a if s >= 0 else b


def c_bound(phi: RatMap, mode: str = "certified",
            samples: int = 400, seed: int = 0) -> HeightDifferenceBound:
    """Height-difference constant for a single map of degree >= 2.

    Certified mode: the upper side multiplies the largest coefficient by the
    term count; the lower side comes from the resultant cofactor identities
    (u*F + v*G = Res*X^(2d-1) and the Y twin), whose coefficient sums bound
    the worst cancellation.  Empirical mode reports a sampled maximum times a
    safety factor and is flagged as such.
    """
    d = phi.degree
    if d < 2:
        raise ValueError("height-difference constants need degree >= 2")
    if mode == "certified":
        tf = sum(1 for c in phi.f if c)
        tg = sum(1 for c in phi.g if c)
        maxf = max((abs(c) for c in phi.f if c), default=1)
        maxg = max((abs(c) for c in phi.g if c), default=1)
        upper = LogExpr.log_int(max(tf * maxf, tg * maxg))
        lower = LogExpr.log_int(polys.resultant_cofactor_sum(phi.f, phi.g, d))
        c = _logexpr_max(upper, lower) * Fraction(1, d)
        return HeightDifferenceBound(phi, c, upper, lower, "certified")
    if mode != "empirical":
        raise ValueError(f"unknown c_bound mode {mode!r}")
    rng = random.Random(seed)
    worst = LogExpr.zero()
    pts = [normalize(a, b) for a in range(-12, 13) for b in range(1, 13)
           if math.gcd(a, b) == 1]
    pts.append(ProjPoint(1, 0))
    while len(pts) < samples:
        a = rng.randrange(-10**6, 10**6 + 1)
        b = rng.randrange(1, 10**6)
        pts.append(normalize(a, b))
    for p in pts:
        q = eval_point(phi, p)
        defect = q.height() - p.height() * d
        if defect.sign() is not None and defect.sign() < 0:
            defect = -defect
        worst = _logexpr_max(worst, defect)
    padded = worst * Fraction(5, 4)
    return HeightDifferenceBound(phi, padded * Fraction(1, d), padded, padded,
                                 "empirical", sample_size=len(pts))


def system_bounds(system: MapSystem, mode: str = "certified") -> list[HeightDifferenceBound]:
    return [c_bound(m, mode) for m in system.maps]


def system_c(bounds: Sequence[HeightDifferenceBound]) -> LogExpr:
    out = LogExpr.zero()
    for b in bounds:
        out = _logexpr_max(out, b.c)
    return out


@dataclass(frozen=True)
class HeightEstimate:
    """Certified interval for a canonical height.

    lo_expr and hi_expr are exact; floats are materialized on demand.  When
    target_met is False the requested error was not reached before the depth
    or size cap.
    """

    lo_expr: LogExpr
    hi_expr: LogExpr
    depth: int
    degree_product: int
    certified: bool
    target_met: bool = True
    word: Optional[Word] = None

    def lo(self, prec: int = DEFAULT_PRECISION) -> float:
        return self.lo_expr.float_bounds(prec)[0]

    def hi(self, prec: int = DEFAULT_PRECISION) -> float:
        return self.hi_expr.float_bounds(prec)[1]

    def mid(self, prec: int = DEFAULT_PRECISION) -> float:
        return (self.lo(prec) + self.hi(prec)) / 2

    def width(self, prec: int = DEFAULT_PRECISION) -> float:
        return self.hi(prec) - self.lo(prec)

    def positive_lower(self, prec: int = DEFAULT_PRECISION) -> bool:
        """True when the height is certified strictly positive."""
        return self.lo_expr.sign(prec) == 1

    def contains(self, value: LogExpr, prec: int = DEFAULT_PRECISION) -> bool:
        lo_ok = (value - self.lo_expr).sign(prec)
        hi_ok = (self.hi_expr - value).sign(prec)
        return (lo_ok is None or lo_ok >= 0) and (hi_ok is None or hi_ok >= 0)

    def to_json(self, prec: int = DEFAULT_PRECISION) -> dict:
        return {"lo": self.lo(prec), "hi": self.hi(prec), "depth": self.depth,
                "certified": self.certified}


def _upcoming_tails(system: MapSystem, bounds: Sequence[HeightDifferenceBound],
                    word: Word, n: int) -> tuple[LogExpr, LogExpr]:
    """Exact one-sided tail sums for the error after n steps, divided by D_n later.

    Periodic words get the exact per-period geometric sum; finite words get a
    bound valid for every infinite continuation (worst per-step constant with
    min-degree scaling), so the interval covers any extension of the prefix.
    """
    degrees = system.degrees
    if word.is_periodic:
        period = len(word.letters)
        block_up = LogExpr.zero()
        block_down = LogExpr.zero()
        running = 1
        for t in range(period):
            letter = word.letter_at(n + t)
            running *= degrees[letter - 1]
            inv = Fraction(1, running)
            block_up = block_up + bounds[letter - 1].upper * inv
            block_down = block_down + bounds[letter - 1].lower * inv
        geom = Fraction(running, running - 1)
        return block_up * geom, block_down * geom
    d1 = system.min_degree
    worst_up = LogExpr.zero()
    worst_down = LogExpr.zero()
    for j, b in enumerate(bounds):
        inv = Fraction(1, degrees[j])
        worst_up = _logexpr_max(worst_up, b.upper * inv)
        worst_down = _logexpr_max(worst_down, b.lower * inv)
    geom = Fraction(d1, d1 - 1)
    return worst_up * geom, worst_down * geom


def canonical_height_word(system: MapSystem, word: Word, point: ProjPoint,
                          depth: Optional[int] = None,
                          target: Optional[float] = None,
                          bounds: Optional[Sequence[HeightDifferenceBound]] = None,
                          prec: int = DEFAULT_PRECISION,
                          bit_cap: int = DEFAULT_BIT_CAP) -> HeightEstimate:
    """Canonical height of a point along a word, as a certified interval.

    Iterates h(Phi^n(P))/D_n pointwise (never composing maps); the intervals
    at successive depths nest, so the deepest one is returned.  With a target,
    iteration stops once the materialized width is small enough; running out
    of word or hitting the bit cap returns a partial result flagged by
    target_met=False.
    """
    for letter in word.letters:
        if letter > system.k:
            raise ValueError(f"letter {letter} outside system of size {system.k}")
    if bounds is None:
        bounds = system_bounds(system)
    if depth is None:
        depth = DEFAULT_DEPTH if target is None else 4 * DEFAULT_DEPTH
    degrees = system.degrees
    current = point
    d_n = 1
    n = 0
    truncated = False
    while n < depth and word.supports_depth(n + 1):
        if target is not None:
            up, down = _upcoming_tails(system, bounds, word, n)
            if ((up + down) * Fraction(1, d_n)).float_bounds(prec)[1] <= target:
                break
        letter = word.letter_at(n)
        current = eval_point(system.map_for_letter(letter), current)
        d_n *= degrees[letter - 1]
        n += 1
        if max(abs(current.x), abs(current.y)).bit_length() > bit_cap:
            truncated = True
            break
    up, down = _upcoming_tails(system, bounds, word, n)
    inv = Fraction(1, d_n)
    mid = current.height() * inv
    lo_expr = _clip_nonnegative(mid - down * inv, prec)
    hi_expr = mid + up * inv
    certified = all(b.certified for b in bounds)
    target_met = not truncated and (
        target is None or ((up + down) * inv).float_bounds(prec)[1] <= target)
    return HeightEstimate(lo_expr, hi_expr, n, d_n, certified, target_met, word)


def _clip_nonnegative(lo: LogExpr, prec: int) -> LogExpr:
    # Canonical heights are nonnegative, so zero is always a valid floor.
    if lo.sign(prec) == 1:
        return lo
    return LogExpr.zero()


def _leaf_height_terms(args) -> tuple[list, int]:
    """Sum of leaf heights over the full word tree, as raw LogExpr terms."""
    system, point, depth, bit_cap = args
    terms: list = []
    count = 0
    stack = [(point, 0)]
    while stack:
        p, level = stack.pop()
        if level == depth:
            terms.append((max(abs(p.x), abs(p.y)), Fraction(1)))
            count += 1
            continue
        if max(abs(p.x), abs(p.y)).bit_length() > bit_cap:
            raise WorkLimitExceeded(
                f"orbit coordinates exceeded {bit_cap} bits", bits=bit_cap)
        for m in reversed(system.maps):
            stack.append((eval_point(m, p), level + 1))
    return terms, count


def _gather_leaf_terms(system: MapSystem, point: ProjPoint, depth: int,
                       bit_cap: int, workers: int) -> tuple[list, int]:
    """Leaf-height terms, optionally partitioned by first letter.

    Summation commutes and term merging is canonical, so the result is
    independent of the worker count.
    """
    if workers <= 1 or depth == 0:
        return _leaf_height_terms((system, point, depth, bit_cap))
    from concurrent.futures import ProcessPoolExecutor

    tasks = [(system, eval_point(m, point), depth - 1, bit_cap)
             for m in system.maps]
    terms: list = []
    count = 0
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for sub_terms, sub_count in pool.map(_leaf_height_terms, tasks):
            terms.extend(sub_terms)
            count += sub_count
    return terms, count


def canonical_height_system(system: MapSystem, point: ProjPoint, depth: int = 6,
                            bounds: Optional[Sequence[HeightDifferenceBound]] = None,
                            node_cap: int = DEFAULT_NODE_CAP,
                            bit_cap: int = DEFAULT_BIT_CAP,
                            prec: int = DEFAULT_PRECISION,
                            workers: int = 1) -> HeightEstimate:
    """Eigensystem (averaged) canonical height via the word-tree operator.

    Evaluates the depth-n averaging operator (sum of h over all words of
    length n, divided by (d_1+...+d_k)^n) with one evaluation per tree node,
    plus a geometric tail certified by the contraction factor k/D <= 1/2.
    """
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    k, big_d = system.k, system.degree_sum
    if k ** depth > node_cap:
        raise WorkLimitExceeded(
            f"word tree of size {k}^{depth} exceeds the node cap {node_cap}",
            nodes=k ** depth)
    if bounds is None:
        bounds = system_bounds(system)
    terms, count = _gather_leaf_terms(system, point, depth, bit_cap, workers)
    assert count == k ** depth
    mid = LogExpr(terms) * Fraction(1, big_d ** depth)
    sum_up = LogExpr.zero()
    sum_down = LogExpr.zero()
    for b in bounds:
        sum_up = sum_up + b.upper
        sum_down = sum_down + b.lower
    # sup |T h - h| <= sum(upper)/D on the + side; tail is geometric in k/D.
    tail_coeff = Fraction(k ** depth, big_d ** depth) * Fraction(big_d, big_d - k) * Fraction(1, big_d)
    lo_expr = _clip_nonnegative(mid - sum_down * tail_coeff, prec)
    hi_expr = mid + sum_up * tail_coeff
    certified = all(b.certified for b in bounds)
    return HeightEstimate(lo_expr, hi_expr, depth, big_d ** depth, certified, True, None)


@dataclass(frozen=True)
class HminResult:
    """Minimum of word canonical heights over the sampled periodic family.

    Upper-estimates the infimum over all infinite words; the lower endpoint is
    certified only relative to the family scanned.  A preperiodic witness
    makes the infimum zero outright.
    """

    estimate: HeightEstimate
    witness_word: Word
    preperiodic_witness: Optional[Word]
    words_scanned: int

    @property
    def preperiodic(self) -> bool:
        return self.preperiodic_witness is not None


def hmin_estimate(system: MapSystem, point: ProjPoint, period_bound: int = 2,
                  depth: int = 8,
                  bounds: Optional[Sequence[HeightDifferenceBound]] = None,
                  prec: int = DEFAULT_PRECISION) -> HminResult:
    """Scan periodic words of bounded period for the least canonical height."""
    if bounds is None:
        bounds = system_bounds(system)
    best: Optional[HeightEstimate] = None
    best_word: Optional[Word] = None
    lo_min: Optional[LogExpr] = None
    scanned = 0
    for word in iter_periodic_words(system.k, period_bound):
        scanned += 1
        cycle = _detect_cycle(system, word, point, depth)
        if cycle:
            zero = LogExpr.zero()
            est = HeightEstimate(zero, zero, depth, degree_product(system.degrees, word, depth),
                                 True, True, word)
            return HminResult(est, word, word, scanned)
        est = canonical_height_word(system, word, point, depth=depth,
                                    bounds=bounds, prec=prec)
        if best is None or est.hi(prec) < best.hi(prec):
            best, best_word = est, word
        if lo_min is None or (est.lo_expr - lo_min).sign(prec) == -1:
            lo_min = est.lo_expr
    assert best is not None and best_word is not None and lo_min is not None
    merged = HeightEstimate(lo_min, best.hi_expr, best.depth, best.degree_product,
                            best.certified, best.target_met, best_word)
    return HminResult(merged, best_word, None, scanned)


def _detect_cycle(system: MapSystem, word: Word, point: ProjPoint, depth: int,
                  bit_cap: int = 1 << 16) -> bool:
    """Exact repetition of (point, word phase) proves a finite orbit."""
    period = len(word.letters) if word.is_periodic else 0
    seen = {(point, 0)}
    current = point
    for i in range(depth):
        if not word.supports_depth(i + 1):
            return False
        current = eval_point(system.map_for_letter(word.letter_at(i)), current)
        if max(abs(current.x), abs(current.y)).bit_length() > bit_cap:
            return False  # give up; a missed cycle only widens the interval
        phase = (i + 1) % period if period else i + 1
        state = (current, phase)
        if state in seen:
            return True
        seen.add(state)
    return False
