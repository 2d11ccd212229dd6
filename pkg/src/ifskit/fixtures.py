"""Bundled test systems, addressable from the CLI as @name.

The nine-map planar system is the package's central negative example: nine
ratio-1/6 maps on [-3,3]^2 whose orthogonal parts are quarter-turn
rotations, together with the contracting map f centered at the right block.
f embeds the attractor into itself, yet its image fails to be relatively
open; the verification pipeline in verify25 checks that failure end to end.
"""

from __future__ import annotations

from dataclasses import dataclass

from .exact import Q, SignedPermutation, Similitude, Vec, Box
from .exact import rotation90, rotation180, rotation270
from .ifs import IFS
from .symmetry import SymmetryProblem

_ID1 = SignedPermutation.identity(1)
_ID2 = SignedPermutation.identity(2)
_NEG1 = SignedPermutation((0,), (-1,))


@dataclass(frozen=True)
class Fixture:
    name: str
    kind: str  # ifs | map | problem
    description: str


def example25_ifs() -> IFS:
    r = Q(1, 6)
    maps = [
        Similitude(r, _ID2, Vec(Q(-15, 8), Q(15, 8))),
        Similitude(r, _ID2, Vec(Q(-5, 2), Q(-5, 4))),
        Similitude(r, rotation270(), Vec(Q(-5, 4), Q(-5, 4))),
        Similitude(r, rotation90(), Vec(Q(-5, 2), Q(-5, 2))),
        Similitude(r, rotation180(), Vec(Q(-5, 4), Q(-5, 2))),
        Similitude(r, _ID2, Vec(Q(5, 4), Q(-5, 4))),
        Similitude(r, rotation270(), Vec(Q(5, 2), Q(-5, 4))),
        Similitude(r, rotation90(), Vec(Q(5, 4), Q(-5, 2))),
        Similitude(r, rotation180(), Vec(Q(5, 2), Q(-5, 2))),
    ]
    return IFS(maps, box=Box(Vec(-3, -3), Vec(3, 3)))


def example25_map() -> Similitude:
    return Similitude(Q(1, 6), _ID2, Vec(Q(15, 8), Q(-15, 8)))


def cantor_ifs() -> IFS:
    return IFS(
        [
            Similitude(Q(1, 3), _ID1, Vec(0)),
            Similitude(Q(1, 3), _ID1, Vec(Q(2, 3))),
        ]
    )


def cantor_f12() -> Similitude:
    ifs = cantor_ifs()
    return ifs.maps[0].compose(ifs.maps[1])


def interval_osc_ifs() -> IFS:
    """Generates [0,1]; open-set condition holds but strong separation fails."""
    return IFS(
        [
            Similitude(Q(1, 2), _ID1, Vec(0)),
            Similitude(Q(1, 2), _ID1, Vec(Q(1, 2))),
        ]
    )


def near_touch_ifs() -> IFS:
    """Three ratio-1/4 maps whose first gap is exactly 1/1000.

    The computed invariant box overhangs the hull on the left, so depth-1
    boxes of the first two cells overlap and certification needs refinement.
    """
    return IFS(
        [
            Similitude(Q(1, 4), _ID1, Vec(0)),
            Similitude(Q(1, 4), _ID1, Vec(Q(251, 1000))),
            Similitude(Q(1, 4), _ID1, Vec(Q(3, 4))),
        ]
    )


def cantor_pair() -> SymmetryProblem:
    return SymmetryProblem(
        cantor_ifs(),
        IFS(
            [
                Similitude(Q(1, 3), _NEG1, Vec(Q(1, 3))),
                Similitude(Q(1, 3), _NEG1, Vec(1)),
            ]
        ),
    )


def fifth_three_pair() -> SymmetryProblem:
    plus = [Q(0), Q(2, 5), Q(4, 5)]
    minus = [Q(1, 5), Q(3, 5), Q(1)]
    return SymmetryProblem(
        IFS([Similitude(Q(1, 5), _ID1, Vec(a)) for a in plus]),
        IFS([Similitude(Q(1, 5), _NEG1, Vec(b)) for b in minus]),
    )


def broken_pair() -> SymmetryProblem:
    """Deliberately wrong psi system; its hull is [1/8, 5/8], not [0, 1]."""
    return SymmetryProblem(
        cantor_ifs(),
        IFS(
            [
                Similitude(Q(1, 3), _NEG1, Vec(Q(1, 3))),
                Similitude(Q(1, 3), _NEG1, Vec(Q(2, 3))),
            ]
        ),
    )


FIXTURES: dict[str, tuple[Fixture, callable]] = {
    "example25": (
        Fixture("example25", "ifs", "nine quarter-turn maps of ratio 1/6 on [-3,3]^2"),
        example25_ifs,
    ),
    "example25-f": (
        Fixture("example25-f", "map", "ratio-1/6 embedding centered at the right block"),
        example25_map,
    ),
    "cantor": (Fixture("cantor", "ifs", "middle-thirds system {x/3, x/3+2/3}"), cantor_ifs),
    "cantor-f12": (
        Fixture("cantor-f12", "map", "composition of the two middle-thirds maps"),
        cantor_f12,
    ),
    "interval-osc": (
        Fixture("interval-osc", "ifs", "{x/2, x/2+1/2}: OSC holds, separation fails"),
        interval_osc_ifs,
    ),
    "near-touch": (
        Fixture("near-touch", "ifs", "three 1/4 maps with a 1/1000 first gap"),
        near_touch_ifs,
    ),
    "cantor-pair": (
        Fixture("cantor-pair", "problem", "middle-thirds system with its reflection"),
        cantor_pair,
    ),
    "fifth-three-pair": (
        Fixture("fifth-three-pair", "problem", "three 1/5 maps with their reflection"),
        fifth_three_pair,
    ),
    "broken-pair": (
        Fixture("broken-pair", "problem", "psi system with the wrong hull"),
        broken_pair,
    ),
}


def resolve(name: str):
    if name not in FIXTURES:
        known = ", ".join(sorted(FIXTURES))
        raise KeyError(f"unknown fixture {name!r}; bundled fixtures: {known}")
    return FIXTURES[name][1]()
