import random
from fractions import Fraction as F

import pytest

from ifskit import Box, Q, SignedPermutation, Similitude, Vec
from ifskit.exact import DimensionMismatch, rotation90, rotation180, rotation270
from ifskit.fixtures import example25_ifs, example25_map

from _helpers import rand_box, rand_similitude, rand_vec

ID1 = SignedPermutation.identity(1)
ID2 = SignedPermutation.identity(2)


def sim1(r, a):
    return Similitude(Q(*r), ID1, Vec(Q(*a)))


class TestCompose:
    def test_example25_intertwining(self):
        # f o phi_1 and phi_6 o f both equal x/36 + (25/16, -25/16).
        ifs = example25_ifs()
        f = example25_map()
        expected = Similitude(Q(1, 36), ID2, Vec(Q(25, 16), Q(-25, 16)))
        assert f.compose(ifs.map(1)) == expected
        assert ifs.map(6).compose(f) == expected

    def test_identity_neutral(self):
        s = sim1((1, 3), (2, 3))
        assert s.compose(Similitude.identity(1)) == s
        assert Similitude.identity(1).compose(s) == s

    def test_example25_block_relation(self):
        ifs = example25_ifs()
        f = example25_map()
        expected = Similitude(Q(1, 36), ID2, Vec(Q(35, 24), Q(-50, 24)))
        assert f.compose(ifs.map(2)) == expected
        assert ifs.map(8).compose(ifs.map(7)) == expected

    def test_consistency_with_apply(self):
        # Oracle: composing then applying equals applying twice.
        rng = random.Random(7)
        for _ in range(200):
            d = rng.choice((1, 2, 3))
            s1, s2 = rand_similitude(rng, d), rand_similitude(rng, d)
            p = rand_vec(rng, d)
            assert s1.compose(s2).apply(p) == s1.apply(s2.apply(p))

    def test_associative(self):
        rng = random.Random(8)
        for _ in range(100):
            d = rng.choice((1, 2))
            a, b, c = (rand_similitude(rng, d) for _ in range(3))
            assert a.compose(b).compose(c) == a.compose(b.compose(c))

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            sim1((1, 3), (0, 1)).compose(rand_similitude(random.Random(1), 2))


class TestApply:
    def test_fixed_point_of_phi1(self):
        ifs = example25_ifs()
        p = Vec(Q(-9, 4), Q(9, 4))
        assert ifs.map(1).apply(p) == p

    def test_identity(self):
        p = Vec(Q(3, 7), Q(-1, 2))
        assert Similitude.identity(2).apply(p) == p

    def test_f_at_x1(self):
        f = example25_map()
        assert f.apply(Vec(Q(-9, 4), Q(9, 4))) == Vec(Q(3, 2), Q(-3, 2))


class TestApplyBox:
    def test_example25_phi2(self):
        ifs = example25_ifs()
        b = ifs.map(2).apply_box(Box(Vec(-3, -3), Vec(3, 3)))
        assert b == Box(Vec(-3, Q(-7, 4)), Vec(-2, Q(-3, 4)))

    def test_identity(self):
        b = Box(Vec(Q(-1, 3), 0), Vec(Q(1, 2), 2))
        assert Similitude.identity(2).apply_box(b) == b

    def test_quarter_turn(self):
        s = Similitude(Q(1), rotation90(), Vec(0, 0))
        assert s.apply_box(Box(Vec(0, 0), Vec(1, 2))) == Box(Vec(-2, 0), Vec(0, 1))

    def test_vertex_image_oracle(self):
        # The image box is exactly the bounding box of the corner images.
        rng = random.Random(9)
        for _ in range(200):
            d = rng.choice((1, 2, 3))
            s = rand_similitude(rng, d)
            b = rand_box(rng, d)
            images = [s.apply(c) for c in b.corners()]
            lo = Vec(*(min(p.coords[j] for p in images) for j in range(d)))
            hi = Vec(*(max(p.coords[j] for p in images) for j in range(d)))
            assert s.apply_box(b) == Box(lo, hi)


class TestFixedPoint:
    def test_example25_phi1(self):
        assert example25_ifs().map(1).fixed_point() == Vec(Q(-9, 4), Q(9, 4))

    def test_pure_scaling(self):
        assert sim1((1, 5), (0, 1)).fixed_point() == Vec(0)

    def test_cantor_right_map(self):
        assert sim1((1, 3), (2, 3)).fixed_point() == Vec(1)

    def test_rotation_map_cramer_oracle(self):
        # Independent route: Cramer's rule on (I - rO)x = a for phi_7.
        ifs = example25_ifs()
        s = ifs.map(7)
        m = s.orth.matrix()
        a11 = 1 - s.ratio * m[0][0]
        a12 = -s.ratio * m[0][1]
        a21 = -s.ratio * m[1][0]
        a22 = 1 - s.ratio * m[1][1]
        det = a11 * a22 - a12 * a21
        b1, b2 = s.trans.coords
        expected = Vec((b1 * a22 - b2 * a12) / det, (b2 * a11 - b1 * a21) / det)
        assert s.fixed_point() == expected
        assert expected == Vec(Q(165, 74), Q(-60, 37))

    def test_apply_fixes(self):
        rng = random.Random(10)
        for _ in range(200):
            s = rand_similitude(rng, rng.choice((1, 2, 3)))
            fp = s.fixed_point()
            assert s.apply(fp) == fp

    def test_rejects_expanding(self):
        s = Similitude(Q(2), ID1, Vec(1))
        with pytest.raises(ValueError):
            s.fixed_point()


class TestPowerInverseOrder:
    def test_quarter_turn_order(self):
        assert rotation90().order() == 4
        assert rotation180().order() == 2
        assert rotation270().order() == 4
        assert ID2.order() == 1

    def test_power_one(self):
        s = rand_similitude(random.Random(11), 2)
        assert s.power(1) == s

    def test_inverse_of_cantor_map(self):
        s = sim1((1, 3), (2, 3))
        assert s.inverse() == Similitude(Q(3), ID1, Vec(-2))

    def test_inverse_round_trip(self):
        rng = random.Random(12)
        for _ in range(100):
            s = rand_similitude(rng, rng.choice((1, 2, 3)))
            assert s.compose(s.inverse()).is_identity()
            assert s.inverse().compose(s).is_identity()

    def test_power_of_orth_order_is_orth_trivial(self):
        rng = random.Random(13)
        for _ in range(50):
            s = rand_similitude(rng, rng.choice((2, 3)))
            k = s.orth.order()
            assert s.power(k).orth.is_identity()


class TestSignedPermutation:
    def test_matrix_is_orthogonal(self):
        rng = random.Random(14)
        from _helpers import rand_signed_perm

        for _ in range(100):
            d = rng.choice((1, 2, 3, 4))
            o = rand_signed_perm(rng, d)
            m = o.matrix()
            # M M^T = I entrywise.
            for i in range(d):
                for j in range(d):
                    dot = sum(m[i][k] * m[j][k] for k in range(d))
                    assert dot == (1 if i == j else 0)

    def test_compose_matches_matrix_product(self):
        rng = random.Random(15)
        from _helpers import rand_signed_perm

        for _ in range(100):
            d = rng.choice((2, 3))
            a, b = rand_signed_perm(rng, d), rand_signed_perm(rng, d)
            ma, mb = a.matrix(), b.matrix()
            prod = tuple(
                tuple(sum(ma[i][k] * mb[k][j] for k in range(d)) for j in range(d))
                for i in range(d)
            )
            assert a.compose(b).matrix() == prod

    def test_rejects_non_bijection(self):
        with pytest.raises(ValueError):
            SignedPermutation((0, 0), (1, 1))
        with pytest.raises(ValueError):
            SignedPermutation((0, 1), (2, 1))
