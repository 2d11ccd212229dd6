import random

import pytest

from ifskit import IFS, Q, SignedPermutation, Similitude, Vec, cell_dist_bounds
from ifskit.chains import (
    chain_decomposition,
    chain_level,
    chains_ordered_1d,
)
from ifskit.fixtures import cantor_ifs, example25_ifs
from ifskit.ifs import all_words

from _helpers import rand_separated_ifs_1d

ID1 = SignedPermutation.identity(1)


def fifth_ifs():
    return IFS(
        [
            Similitude(Q(1, 5), ID1, Vec(0)),
            Similitude(Q(1, 5), ID1, Vec(Q(2, 5))),
            Similitude(Q(1, 5), ID1, Vec(Q(4, 5))),
        ]
    )


class TestChainLevel:
    def test_cantor_needs_two(self):
        # delta^2 = 1/9 and diam^2 = 1: (1/9)^1 is not strictly below 1/9.
        assert chain_level(cantor_ifs()) == 2

    def test_example25(self):
        assert chain_level(example25_ifs(), depth=2) == 2

    def test_minimality(self):
        # Widely separated cells: level 1 is already enough.
        ifs = IFS(
            [
                Similitude(Q(1, 100), ID1, Vec(0)),
                Similitude(Q(1, 100), ID1, Vec(Q(99, 100))),
            ]
        )
        assert chain_level(ifs) == 1

    def test_rejects_non_homogeneous(self):
        ifs = IFS(
            [
                Similitude(Q(1, 3), ID1, Vec(0)),
                Similitude(Q(1, 4), ID1, Vec(Q(3, 4))),
            ]
        )
        with pytest.raises(ValueError):
            chain_level(ifs)


class TestChainDecomposition:
    def test_cantor_tie_merges(self):
        # Cell distance exactly equals the threshold: inclusive adjacency.
        cs = chain_decomposition(cantor_ifs(), 2)
        assert cs.chains == (((1,), (2,)),)
        assert cs.level == 1
        assert cs.flags == ()

    def test_example25_grouping(self):
        cs = chain_decomposition(example25_ifs(), 2, depth=2)
        assert cs.chains == (
            ((1,),),
            ((2,), (3,), (4,), (5,)),
            ((6,), (7,), (8,), (9,)),
        )

    def test_fully_separated(self):
        ifs = IFS(
            [
                Similitude(Q(1, 100), ID1, Vec(0)),
                Similitude(Q(1, 100), ID1, Vec(Q(99, 100))),
            ]
        )
        cs = chain_decomposition(ifs, 2)
        assert cs.chains == (((1,),), ((2,),))

    def test_partition_property(self):
        ifs = example25_ifs()
        cs = chain_decomposition(ifs, 2, depth=2)
        seen = [w for chain in cs.chains for w in chain]
        assert sorted(seen) == all_words(ifs.m, cs.level)
        assert len(seen) == len(set(seen))

    def test_separation_certificates_sound(self):
        # Machine-checkable from the stored certificates alone.
        cs = chain_decomposition(example25_ifs(), 2, depth=2)
        index = {w: i for i, chain in enumerate(cs.chains) for w in chain}
        cross = [
            (u, v) for u in index for v in index if u < v and index[u] != index[v]
        ]
        for u, v in cross:
            assert cs.separation[(u, v)] > cs.threshold_sq
        assert set(cs.separation) == set(cross)

    def test_coarsening_monotonicity(self):
        # Higher depth refines or preserves the partition, never coarsens it.
        rng = random.Random(31)
        for _ in range(5):
            ifs = rand_separated_ifs_1d(rng)
            n = chain_level(ifs)
            shallow = chain_decomposition(ifs, n, depth=2)
            deep = chain_decomposition(ifs, n, depth=4)
            shallow_index = {
                w: i for i, chain in enumerate(shallow.chains) for w in chain
            }
            for chain in deep.chains:
                assert len({shallow_index[w] for w in chain}) == 1


class TestChainsOrdered1d:
    def test_cantor_single(self):
        ifs = cantor_ifs()
        cs = chain_decomposition(ifs, 2)
        ordered = chains_ordered_1d(cs, ifs)
        assert len(ordered) == 1

    def test_fifth_system_ordering(self):
        ifs = fifth_ifs()
        n = chain_level(ifs)
        cs = chain_decomposition(ifs, n)
        ordered = chains_ordered_1d(cs, ifs)
        los = [lo for _, (lo, hi) in ordered]
        assert los == sorted(los)
        for (_, (_, hi)), (_, (lo, _)) in zip(ordered, ordered[1:]):
            assert hi < lo

    def test_separated_three_chain_ordering(self):
        ifs = IFS(
            [
                Similitude(Q(1, 50), ID1, Vec(0)),
                Similitude(Q(1, 50), ID1, Vec(Q(1, 2))),
                Similitude(Q(1, 50), ID1, Vec(Q(49, 50))),
            ]
        )
        assert chain_level(ifs) == 1  # level 0: one chain covering everything
        cs = chain_decomposition(ifs, 2)  # any n above the minimum is allowed
        ordered = chains_ordered_1d(cs, ifs)
        assert [chain for chain, _ in ordered] == [((1,),), ((2,),), ((3,),)]

    def test_rejects_2d(self):
        ifs = example25_ifs()
        cs = chain_decomposition(ifs, 2, depth=2)
        with pytest.raises(ValueError):
            chains_ordered_1d(cs, ifs)
