import random
from fractions import Fraction as F

import pytest

from ifskit import (
    IFS,
    Box,
    Q,
    SignedPermutation,
    Similitude,
    SSCStatus,
    Vec,
    cell_dist_bounds,
    check_ssc,
    diameter_bounds,
    dimension,
    locate_point,
    min_gap,
)
from ifskit.exact import rotation90
from ifskit.ifs import (
    ResourceCapExceeded,
    all_words,
    compute_invariant_box,
    parse_word,
    verify_invariant_box,
    word_to_str,
)
from ifskit.fixtures import (
    cantor_ifs,
    example25_ifs,
    interval_osc_ifs,
    near_touch_ifs,
)

from _helpers import rand_separated_ifs_1d


class TestWords:
    def test_round_trip(self):
        assert parse_word("12", 2) == (1, 2)
        assert word_to_str((8, 7)) == "87"
        assert parse_word("e", 5) == ()
        assert word_to_str(()) == "e"

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            parse_word("13", 2)

    def test_all_words_lexicographic(self):
        ws = all_words(2, 2)
        assert ws == [(1, 1), (1, 2), (2, 1), (2, 2)]


class TestCylinder:
    def test_cantor_12(self):
        ifs = cantor_ifs()
        assert ifs.cylinder((1, 2)) == Similitude(
            Q(1, 9), SignedPermutation.identity(1), Vec(Q(2, 9))
        )

    def test_single_letter(self):
        ifs = cantor_ifs()
        assert ifs.cylinder((2,)) == ifs.map(2)

    def test_example25_67(self):
        ifs = example25_ifs()
        expected = ifs.map(6).compose(ifs.map(7))
        got = ifs.cylinder((6, 7))
        assert got == expected
        assert got.ratio == Q(1, 36)
        assert got.trans == Vec(Q(5, 3), Q(-35, 24))

    def test_letter_out_of_range(self):
        with pytest.raises(ValueError):
            cantor_ifs().cylinder((3,))


class TestInvariantBox:
    def test_cantor_unit_interval(self):
        assert cantor_ifs().invariant_box() == Box(Vec(0), Vec(1))

    def test_example25_paper_box_verifies(self):
        ifs = example25_ifs()
        box = Box(Vec(-3, -3), Vec(3, 3))
        assert verify_invariant_box(ifs, box)
        # Any valid box contains all nine image boxes.
        for i in ifs.alphabet:
            assert box.contains_box(ifs.map(i).apply_box(box))

    def test_computed_box_always_verifies(self):
        rng = random.Random(21)
        for _ in range(50):
            ifs = rand_separated_ifs_1d(rng)
            assert verify_invariant_box(ifs, compute_invariant_box(ifs))

    def test_single_map_rejected(self):
        with pytest.raises(ValueError):
            IFS([cantor_ifs().map(1)])


class TestCover:
    def test_cantor_depth1(self):
        cover = cantor_ifs().cover(1)
        assert cover == [
            ((1,), Box(Vec(0), Vec(Q(1, 3)))),
            ((2,), Box(Vec(Q(2, 3)), Vec(1))),
        ]

    def test_depth0(self):
        ifs = cantor_ifs()
        assert ifs.cover(0) == [((), ifs.invariant_box())]

    def test_example25_depth1_rectangles(self):
        # Every orthogonal part fixes [-1/2,1/2]^2, so each level-1 box is the
        # translation plus or minus a half in both axes.
        ifs = example25_ifs()
        cover = ifs.cover(1)
        assert [w for w, _ in cover] == [(i,) for i in range(1, 10)]
        half = Vec(Q(1, 2), Q(1, 2))
        for (w, b), s in zip(cover, ifs.maps):
            assert b == Box(s.trans - half, s.trans + half)

    def test_nesting(self):
        ifs = example25_ifs()
        parents = dict(ifs.cover(1))
        for w, b in ifs.cover(2):
            assert parents[w[:1]].contains_box(b)

    def test_cap(self):
        with pytest.raises(ResourceCapExceeded):
            cantor_ifs().cover(4, cap=10)


class TestAttractorPoints:
    def test_cantor_fixed_points(self):
        pts = {p.coords[0] for _, p in cantor_ifs().attractor_points(0)}
        assert pts == {Q(0), Q(1)}

    def test_cantor_depth1(self):
        pts = {p.coords[0] for _, p in cantor_ifs().attractor_points(1)}
        assert pts == {Q(0), Q(1, 3), Q(2, 3), Q(1)}

    def test_example25_contains_x1(self):
        pts = {p.coords for _, p in example25_ifs().attractor_points(0)}
        assert (Q(-9, 4), Q(9, 4)) in pts

    def test_points_inside_every_cover(self):
        ifs = cantor_ifs()
        for depth in (1, 2, 3):
            boxes = dict(ifs.cover(depth))
            for w, p in ifs.attractor_points(depth):
                assert boxes[w[:depth]].contains_point(p)


class TestCellDistBounds:
    def test_cantor_exact_at_depth1(self):
        g = cell_dist_bounds(cantor_ifs(), (1,), (2,), 1)
        assert g.lower == g.upper == Q(1, 9)

    def test_same_cell(self):
        g = cell_dist_bounds(cantor_ifs(), (1,), (1,), 3)
        assert g.lower == Q(0)

    def test_example25_adjacent_blocks(self):
        g = cell_dist_bounds(example25_ifs(), (2,), (3,), 1)
        assert g.lower >= Q(1, 16)

    def test_monotone_in_depth(self):
        rng = random.Random(22)
        ifs = near_touch_ifs()
        prev = cell_dist_bounds(ifs, (1,), (2,), 1)
        for depth in (2, 3, 4, 5):
            cur = cell_dist_bounds(ifs, (1,), (2,), depth)
            assert cur.lower >= prev.lower
            assert cur.upper <= prev.upper
            prev = cur


class TestCheckSSC:
    def test_example25_certified(self):
        res = check_ssc(example25_ifs(), 3)
        assert res.status is SSCStatus.CERTIFIED
        assert res.gap.lower >= Q(1, 16)

    def test_interval_violated_with_witness(self):
        res = check_ssc(interval_osc_ifs(), 3)
        assert res.status is SSCStatus.VIOLATED
        u, v, p = res.witness
        assert p == Vec(Q(1, 2))
        assert u[0] != v[0]

    def test_cantor_certified_depth1(self):
        res = check_ssc(cantor_ifs(), 1)
        assert res.status is SSCStatus.CERTIFIED
        assert res.gap.lower == Q(1, 9)

    def test_near_touch_tristate(self):
        ifs = near_touch_ifs()
        assert check_ssc(ifs, 1).status is SSCStatus.UNKNOWN
        deep = check_ssc(ifs, 8)
        assert deep.status is SSCStatus.CERTIFIED
        assert deep.gap.upper == Q(1, 1000) ** 2


class TestMinGapDiameter:
    def test_cantor_gap(self):
        g = min_gap(cantor_ifs(), 1)
        assert g.lower == g.upper == Q(1, 9)

    def test_cantor_diameter(self):
        d = diameter_bounds(cantor_ifs(), 2)
        assert d.lower == d.upper == Q(1)

    def test_example25_diameter_upper(self):
        d = diameter_bounds(example25_ifs(), 1)
        assert d.lower <= d.upper <= Q(72)

    def test_bounds_ordered(self):
        rng = random.Random(23)
        for _ in range(10):
            ifs = rand_separated_ifs_1d(rng)
            d = diameter_bounds(ifs, 2)
            assert d.lower <= d.upper


class TestDimension:
    def test_cantor(self):
        info = dimension(cantor_ifs())
        assert (info.m, info.r) == (2, Q(1, 3))
        assert abs(info.display - 0.6309297535714574) < 1e-12

    def test_equal_weight(self):
        ifs = IFS(
            [
                Similitude(Q(1, 2), SignedPermutation.identity(1), Vec(0)),
                Similitude(Q(1, 2), SignedPermutation.identity(1), Vec(Q(1, 2))),
            ]
        )
        info = dimension(ifs)
        assert info.display == 1.0

    def test_example25(self):
        info = dimension(example25_ifs())
        assert (info.m, info.r) == (9, Q(1, 6))
        assert abs(info.display - 1.2262943856  ) < 1e-9

    def test_rejects_non_homogeneous(self):
        ifs = IFS(
            [
                Similitude(Q(1, 3), SignedPermutation.identity(1), Vec(0)),
                Similitude(Q(1, 4), SignedPermutation.identity(1), Vec(Q(3, 4))),
            ]
        )
        with pytest.raises(ValueError):
            dimension(ifs)


class TestLocatePoint:
    def test_cantor_two_thirds(self):
        assert locate_point(cantor_ifs(), Vec(Q(2, 3)), 1) == (2,)

    def test_fixed_point_any_level(self):
        ifs = cantor_ifs()
        for level in (1, 2, 4):
            assert locate_point(ifs, Vec(1), level) == (2,) * level

    def test_example25_fx1(self):
        w = locate_point(example25_ifs(), Vec(Q(3, 2), Q(-3, 2)), 1, depth=3)
        assert w == (6,)

    def test_word_prefix_consistency(self):
        ifs = example25_ifs()
        w = (3, 8)
        p = ifs.cylinder(w).apply(ifs.map(5).fixed_point())
        assert locate_point(ifs, p, 2, depth=4) == w

    def test_outside_point_raises(self):
        with pytest.raises(ValueError):
            locate_point(cantor_ifs(), Vec(Q(1, 2)), 1, depth=6)
