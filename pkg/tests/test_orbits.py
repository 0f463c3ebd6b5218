import random

import pytest

from orbitint.errors import WorkLimitExceeded
from orbitint.heights import system_bounds
from orbitint.orbits import (OrbitRecord, WorkLimits, enumerate_tree,
                             hypothesis_check, iterate_word, orbit_csv_rows,
                             preperiodicity_check)
from orbitint.proj1 import INFINITY, ZERO, ProjPoint, normalize
from orbitint.ratmap import MapSystem, make_map
from orbitint.verify import random_point, random_system, random_word
from orbitint.words import Word


def test_iterate_word_examples(pair_system, z2):
    plus = make_map([1, 0, 1], [1])
    minus = make_map([-1, 0, 1], [1])
    system = MapSystem([plus, minus])
    records = iterate_word(system, Word.finite([1, 2]), ZERO, 2)
    assert [r.point for r in records] == [ZERO, ProjPoint(1, 1), ZERO]

    assert iterate_word(pair_system, Word.finite([]), normalize(2, 1), 0) \
        == [OrbitRecord((), 0, normalize(2, 1))]

    sq = MapSystem([z2])
    records = iterate_word(sq, Word.finite([1, 1, 1]), normalize(2, 1), 3)
    assert [r.point.x for r in records] == [2, 4, 16, 256]
    assert records[3].word == (1, 1, 1)


def test_enumerate_tree_examples(pair_system):
    records = enumerate_tree(pair_system, normalize(2, 1), 2, dedupe=True)
    assert sorted(r.point.x for r in records) == [2, 4, 8, 16, 64, 512]
    by_x = {r.point.x: r.word for r in records}
    assert by_x[64] == (1, 2)  # first witness in preorder

    assert len(enumerate_tree(pair_system, normalize(2, 1), 0)) == 1

    ones = enumerate_tree(pair_system, ProjPoint(1, 1), 3, dedupe=True)
    assert [r.point for r in ones] == [ProjPoint(1, 1)]


def test_enumerate_tree_order_and_monotonicity(pair_system):
    full = enumerate_tree(pair_system, normalize(2, 1), 3)
    words = [r.word for r in full]
    assert words == sorted(words)  # preorder = lexicographic with prefixes first
    assert len(full) == 1 + 2 + 4 + 8
    shallow = enumerate_tree(pair_system, normalize(2, 1), 2)
    assert [r.word for r in shallow] == [w for w in words if len(w) <= 2]


def test_dedupe_is_set_image(pair_system):
    rng = random.Random(91)
    for _ in range(10):
        system = random_system(rng, 2, 3)
        p = random_point(rng, 20)
        full = enumerate_tree(system, p, 3)
        deduped = enumerate_tree(system, p, 3, dedupe=True)
        assert {r.point for r in full} == {r.point for r in deduped}
        assert len({r.point for r in deduped}) == len(deduped)


def test_workers_match_serial(pair_system):
    serial = enumerate_tree(pair_system, normalize(2, 1), 4)
    for workers in (2, 8):
        parallel = enumerate_tree(pair_system, normalize(2, 1), 4, workers=workers)
        assert parallel == serial


def test_work_limits():
    system = MapSystem([make_map([0, 0, 1], [1]), make_map([0, 0, 0, 1], [1])])
    with pytest.raises(WorkLimitExceeded):
        enumerate_tree(system, normalize(2, 1), 5, limits=WorkLimits(node_cap=10))
    with pytest.raises(WorkLimitExceeded):
        iterate_word(system, Word.periodic([2]), normalize(2, 1), 10,
                     limits=WorkLimits(bit_cap=64))


def test_hypothesis_check_examples(z2):
    report = hypothesis_check(MapSystem([z2]), INFINITY, 3)
    assert not report.repeated_point_free and not report.totally_ramified_free
    assert report.repeat_witness[2] == INFINITY
    assert report.ramified_witness[0] == 1 and report.ramified_witness[1] == INFINITY
    assert report.depth_checked == 3

    report = hypothesis_check(MapSystem([make_map([1, 0, 1], [0, 1])]), INFINITY, 3)
    assert not report.repeated_point_free and report.totally_ramified_free

    report = hypothesis_check(MapSystem([make_map([1], [0, 0, 1])]), INFINITY, 3)
    assert not report.repeated_point_free and not report.totally_ramified_free


def test_hypothesis_witnesses_reverify(pair_system):
    rng = random.Random(97)
    from orbitint.ratmap import eval_point, is_totally_ramified

    for _ in range(10):
        system = random_system(rng, 2, 3)
        base = random_point(rng, 8)
        report = hypothesis_check(system, base, 3)
        if report.repeat_witness:
            w1, w2, pt = report.repeat_witness
            for word in (w1, w2):
                current = base
                for letter in word:
                    current = eval_point(system.map_for_letter(letter), current)
                assert current == pt
        if report.ramified_witness:
            idx, pt, _word = report.ramified_witness
            assert is_totally_ramified(system.maps[idx - 1], pt)


def test_preperiodicity_examples(z2, z2_minus_1):
    verdict = preperiodicity_check(MapSystem([z2_minus_1]), Word.periodic([1]), ZERO, 32)
    assert verdict.is_preperiodic
    assert verdict.tail_length == 0 and verdict.cycle_length == 2
    assert set(verdict.cycle_points) == {ZERO, ProjPoint(-1, 1)}

    verdict = preperiodicity_check(MapSystem([z2]), Word.periodic([1]), normalize(2, 1), 32)
    assert verdict.kind == "wandering"
    assert verdict.estimate.positive_lower()

    verdict = preperiodicity_check(MapSystem([z2]), Word.periodic([1]), ProjPoint(1, 1), 32)
    assert verdict.is_preperiodic and verdict.cycle_length == 1


def test_phase_matters_for_cycles():
    # The orbit 1 -> -1 -> -1 -> 5 -> 125 -> ... revisits -1 at mismatched
    # word phases; a bare-point cycle check would wrongly stop there, while
    # the (point, phase) check keeps going and certifies wandering.
    quad = make_map([0, -3, 2], [1])  # 2z^2 - 3z, sends 1 and -1 apart
    cube = make_map([0, 0, 0, 1], [1])
    system = MapSystem([quad, cube])
    word = Word.periodic([1, 2])
    records = iterate_word(system, word, ProjPoint(1, 1), 4)
    assert [r.point for r in records[:3]] == [ProjPoint(1, 1), ProjPoint(-1, 1),
                                              ProjPoint(-1, 1)]
    assert records[3].point != ProjPoint(-1, 1)
    verdict = preperiodicity_check(system, word, ProjPoint(1, 1), 16)
    assert verdict.kind == "wandering"


def test_height_growth_along_orbits():
    rng = random.Random(101)
    for _ in range(20):
        system = random_system(rng, 2, 3)
        word = random_word(rng, system.k, 3, periodic=True)
        p = random_point(rng, 30)
        bounds = system_bounds(system)
        records = iterate_word(system, word, p, 5)
        for i in range(5):
            phi = system.map_for_letter(word.letter_at(i))
            b = bounds[word.letter_at(i) - 1]
            defect = records[i + 1].height() - records[i].height() * phi.degree
            # |h(phi P) - d h(P)| <= d * c(phi)
            cap = b.c * phi.degree
            assert (defect - cap).sign() <= 0
            assert (defect + cap).sign() >= 0


def test_csv_rows(pair_system):
    records = enumerate_tree(pair_system, normalize(2, 1), 1)
    rows = orbit_csv_rows(records)
    assert rows[0][:4] == ("", 0, "2", "1")
    assert rows[1][:4] == ("1", 1, "4", "1")
    assert float(rows[1][4]) == pytest.approx(2 * 0.6931471805599453)
