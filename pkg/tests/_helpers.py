"""Shared randomized generators for the test suite (all seeded by callers)."""

from __future__ import annotations

import random
from fractions import Fraction

from ifskit import IFS, Q, SignedPermutation, Similitude, Vec
from ifskit.exact import rotation90, rotation180


def rand_fraction(rng: random.Random, max_abs: int = 12, nonneg: bool = False) -> Fraction:
    num = rng.randint(0 if nonneg else -max_abs, max_abs)
    return Q(num, rng.randint(1, max_abs))


def rand_ratio(rng: random.Random, max_den: int = 9) -> Fraction:
    den = rng.randint(2, max_den)
    num = rng.randint(1, den - 1)
    return Q(num, den)


def rand_signed_perm(rng: random.Random, d: int) -> SignedPermutation:
    perm = list(range(d))
    rng.shuffle(perm)
    signs = tuple(rng.choice((1, -1)) for _ in range(d))
    return SignedPermutation(tuple(perm), signs)


def rand_similitude(rng: random.Random, d: int, contracting: bool = True) -> Similitude:
    ratio = rand_ratio(rng) if contracting else Q(rng.randint(1, 3))
    trans = Vec(*(rand_fraction(rng) for _ in range(d)))
    return Similitude(ratio, rand_signed_perm(rng, d), trans)


def rand_vec(rng: random.Random, d: int) -> Vec:
    return Vec(*(rand_fraction(rng) for _ in range(d)))


def rand_box(rng: random.Random, d: int):
    from ifskit import Box

    lo = [rand_fraction(rng) for _ in range(d)]
    hi = [l + abs(rand_fraction(rng)) + Q(1, 7) for l in lo]
    return Box(Vec(*lo), Vec(*hi))


def rand_separated_ifs_1d(rng: random.Random, m: int | None = None) -> IFS:
    """Well-separated 1D system: slots on a coarse pitch, small common ratio."""
    m = m or rng.choice((2, 3))
    r = Q(1, 12 * m)
    slots = sorted(rng.sample(range(3 * m), m))
    ident = SignedPermutation.identity(1)
    return IFS([Similitude(r, ident, Vec(Q(s, 3 * m))) for s in slots])


def rand_separated_ifs_2d(rng: random.Random, m: int | None = None) -> IFS:
    """Well-separated planar system with one common orthogonal part."""
    m = m or rng.choice((3, 4))
    orth = rng.choice(
        (SignedPermutation.identity(2), rotation90(), rotation180())
    )
    r = Q(1, 16)
    cells = rng.sample([(i, j) for i in range(3) for j in range(3)], m)
    cells.sort()
    maps = [
        Similitude(r, orth, Vec(Q(i, 3) + Q(1, 8), Q(j, 3) + Q(1, 8)))
        for i, j in cells
    ]
    return IFS(maps)


def homogeneous_common_o_samples(seed: int = 2024) -> list[IFS]:
    """Five deterministic well-separated systems: three 1D, two planar."""
    rng = random.Random(seed)
    out = [rand_separated_ifs_1d(rng) for _ in range(3)]
    out += [rand_separated_ifs_2d(rng) for _ in range(2)]
    return out
