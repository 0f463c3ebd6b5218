"""Orbit iteration, semigroup-tree enumeration, and hypothesis checks.

Tree traversal is preorder over words (prefixes first, letters ascending), so
output order is deterministic and parallel subtree workers can be merged by
concatenation.  Point equality is exact equality of normalized coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

from .errors import WorkLimitExceeded
from .heights import HeightEstimate, canonical_height_word, system_bounds
from .logvals import DEFAULT_PRECISION, LogExpr
from .proj1 import ProjPoint
from .ratmap import MapSystem, is_totally_ramified, eval_point
from .words import Word


@dataclass(frozen=True)
class WorkLimits:
    node_cap: int = 1_000_000
    bit_cap: int = 1_000_000

    def bits_of(self, p: ProjPoint) -> int:
        return max(abs(p.x), abs(p.y)).bit_length()

    def check_bits(self, p: ProjPoint):
        bits = self.bits_of(p)
        if bits > self.bit_cap:
            raise WorkLimitExceeded(
                f"orbit coordinate of {bits} bits exceeded the cap {self.bit_cap}",
                bits=bits)


DEFAULT_LIMITS = WorkLimits()


@dataclass(frozen=True)
class OrbitRecord:
    """A reached point, the word prefix that reached it, and its height."""

    word: tuple
    depth: int
    point: ProjPoint

    def height(self) -> LogExpr:
        return self.point.height()

    def to_json(self) -> dict:
        return {"word": list(self.word), "n": self.depth, **self.point.to_json()}


def iterate_word(system: MapSystem, word: Word, point: ProjPoint, n: int,
                 limits: WorkLimits = DEFAULT_LIMITS) -> list[OrbitRecord]:
    """Points Phi^0(P)..Phi^n(P) along a word, evaluated pointwise."""
    if not word.supports_depth(n):
        raise ValueError(f"word {word} is too short for depth {n}")
    records = [OrbitRecord((), 0, point)]
    current = point
    prefix: tuple = ()
    for i in range(n):
        letter = word.letter_at(i)
        current = eval_point(system.map_for_letter(letter), current)
        limits.check_bits(current)
        prefix = prefix + (letter,)
        records.append(OrbitRecord(prefix, i + 1, current))
    return records


def _walk(system: MapSystem, point: ProjPoint, prefix: tuple, depth: int,
          limits: WorkLimits, counter: list) -> Iterator[OrbitRecord]:
    counter[0] += 1
    if counter[0] > limits.node_cap:
        raise WorkLimitExceeded(
            f"tree enumeration exceeded {limits.node_cap} nodes",
            nodes=counter[0])
    yield OrbitRecord(prefix, len(prefix), point)
    if len(prefix) == depth:
        return
    limits.check_bits(point)
    for letter in range(1, system.k + 1):
        child = eval_point(system.map_for_letter(letter), point)
        yield from _walk(system, child, prefix + (letter,), depth, limits, counter)


def _enumerate_serial(system: MapSystem, point: ProjPoint, depth: int,
                      limits: WorkLimits) -> list[OrbitRecord]:
    return list(_walk(system, point, (), depth, limits, [0]))


def _subtree_records(args) -> list[OrbitRecord]:
    system, point, prefix, depth, limits = args
    return list(_walk(system, point, prefix, depth, limits, [0]))


def iter_tree(system: MapSystem, point: ProjPoint, depth: int,
              dedupe: bool = False,
              limits: WorkLimits = DEFAULT_LIMITS) -> Iterator[OrbitRecord]:
    """Stream orbit records in preorder word order, without materializing.

    The node and bit caps abort loudly partway through; callers that need
    the whole tree (or parallel enumeration) use enumerate_tree.
    """
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    seen: set = set()
    for rec in _walk(system, point, (), depth, limits, [0]):
        if dedupe:
            if rec.point in seen:
                continue
            seen.add(rec.point)
        yield rec


def enumerate_tree(system: MapSystem, point: ProjPoint, depth: int,
                   dedupe: bool = False, limits: WorkLimits = DEFAULT_LIMITS,
                   workers: int = 1) -> list[OrbitRecord]:
    """All orbit records to the given depth, in preorder word order.

    With dedupe=True only the first record per distinct point is kept (the
    witness word is the lexicographically least, by traversal order).  Output
    is independent of the worker count.
    """
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    total_nodes = sum(system.k ** i for i in range(depth + 1))
    if total_nodes > limits.node_cap:
        raise WorkLimitExceeded(
            f"tree of {total_nodes} nodes exceeds the node cap {limits.node_cap}",
            nodes=total_nodes)
    if workers <= 1 or depth == 0:
        records = _enumerate_serial(system, point, depth, limits)
    else:
        from concurrent.futures import ProcessPoolExecutor

        records = [OrbitRecord((), 0, point)]
        limits.check_bits(point)
        tasks = []
        for letter in range(1, system.k + 1):
            child = eval_point(system.map_for_letter(letter), point)
            tasks.append((system, child, (letter,), depth, limits))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for chunk in pool.map(_subtree_records, tasks):
                records.extend(chunk)
    if not dedupe:
        return records
    seen = set()
    unique = []
    for rec in records:
        if rec.point not in seen:
            seen.add(rec.point)
            unique.append(rec)
    return unique


@dataclass(frozen=True)
class HypothesisReport:
    """Depth-bounded evidence for the orbit hypotheses.

    A True flag means no counterexample up to the checked depth, never a
    proof; witnesses re-verify by construction.
    """

    repeated_point_free: bool
    repeat_witness: Optional[tuple]  # (word1, word2, point)
    totally_ramified_free: bool
    ramified_witness: Optional[tuple]  # (map index 1-based, point, word)
    depth_checked: int

    def to_json(self) -> dict:
        out = {"repeatedPointFree": self.repeated_point_free,
               "totallyRamifiedFree": self.totally_ramified_free,
               "depthChecked": self.depth_checked}
        if self.repeat_witness:
            w1, w2, pt = self.repeat_witness
            out["repeatWitness"] = {"word1": list(w1), "word2": list(w2),
                                    **pt.to_json()}
        if self.ramified_witness:
            idx, pt, w = self.ramified_witness
            out["ramifiedWitness"] = {"mapIndex": idx, "word": list(w), **pt.to_json()}
        return out


def hypothesis_check(system: MapSystem, base: ProjPoint, depth: int,
                     limits: WorkLimits = DEFAULT_LIMITS) -> HypothesisReport:
    """Scan the full word tree of the base point for repeated points and for
    points where some system map is totally ramified."""
    records = enumerate_tree(system, base, depth, dedupe=False, limits=limits)
    first_word: dict[ProjPoint, tuple] = {}
    repeat_witness = None
    ramified_witness = None
    for rec in records:
        prior = first_word.get(rec.point)
        if prior is not None:
            if repeat_witness is None:
                repeat_witness = (prior, rec.word, rec.point)
            continue  # ramification depends only on the point
        first_word[rec.point] = rec.word
        if ramified_witness is None:
            for idx, phi in enumerate(system.maps, start=1):
                if is_totally_ramified(phi, rec.point):
                    ramified_witness = (idx, rec.point, rec.word)
                    break
    return HypothesisReport(
        repeated_point_free=repeat_witness is None,
        repeat_witness=repeat_witness,
        totally_ramified_free=ramified_witness is None,
        ramified_witness=ramified_witness,
        depth_checked=depth)


@dataclass(frozen=True)
class PreperiodicityVerdict:
    kind: str  # "preperiodic" | "wandering" | "unknown"
    tail_length: Optional[int] = None
    cycle_length: Optional[int] = None
    cycle_points: Optional[tuple] = None
    estimate: Optional[HeightEstimate] = None

    @property
    def is_preperiodic(self) -> bool:
        return self.kind == "preperiodic"


def preperiodicity_check(system: MapSystem, word: Word, point: ProjPoint,
                         depth: int = 64, prec: int = DEFAULT_PRECISION,
                         bounds=None,
                         limits: WorkLimits = DEFAULT_LIMITS) -> PreperiodicityVerdict:
    """Decide the orbit type along a periodic word, within a depth budget.

    Exact repetition of (point, word phase) proves a finite orbit; a positive
    certified lower bound on the canonical height proves wandering; otherwise
    the verdict is unknown.
    """
    if not word.is_periodic:
        raise ValueError("preperiodicity checks need a periodic word")
    period = len(word.letters)
    seen = {(point, 0): 0}
    sequence = [point]
    current = point
    for i in range(depth):
        current = eval_point(system.map_for_letter(word.letter_at(i)), current)
        if limits.bits_of(current) > limits.bit_cap:
            break  # grown far past any revisit; hand over to the height stage
        phase = (i + 1) % period
        state = (current, phase)
        if state in seen:
            start = seen[state]
            return PreperiodicityVerdict(
                kind="preperiodic",
                tail_length=start,
                cycle_length=i + 1 - start,
                cycle_points=tuple(sequence[start:]))
        seen[state] = i + 1
        sequence.append(current)
    if bounds is None:
        bounds = system_bounds(system)
    est = canonical_height_word(system, word, point, depth=min(depth, 16),
                                bounds=bounds, prec=prec,
                                bit_cap=limits.bit_cap)
    if est.positive_lower(prec):
        return PreperiodicityVerdict(kind="wandering", estimate=est)
    return PreperiodicityVerdict(kind="unknown", estimate=est)


def orbit_csv_rows(records: Sequence[OrbitRecord],
                   prec: int = DEFAULT_PRECISION) -> list[tuple]:
    """Rows (word, n, x, y, height_nats) for CSV dumps."""
    rows = []
    for rec in records:
        word_text = "".join(str(c) for c in rec.word)
        rows.append((word_text, rec.depth, str(rec.point.x), str(rec.point.y),
                     repr(rec.height().to_float(prec))))
    return rows
