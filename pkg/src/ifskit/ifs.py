"""IFS representation, word/cylinder algebra and certified attractor geometry.

The attractor K is never materialized. Geometric questions about it are
answered with certified bounds computed from two exact ingredients:

* covers: depth-n collections of boxes phi_w(B) (B an invariant box) that are
  guaranteed to contain K, giving lower bounds on distances;
* exact points: phi_w applied to a map's fixed point is an exact rational
  point of K, giving upper bounds on distances.

Predicates about K are therefore tri-state: Certified / Violated / Unknown,
with an explicit depth budget. Unknown is always an honest answer, never a
guess.
"""

from __future__ import annotations

import heapq
import itertools
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

from .exact import Box, Q, Q0, Q1, Similitude, Vec

Word = tuple[int, ...]

DEFAULT_COVER_CAP = 200_000
# Per-cell exact-point budget for distance upper bounds: deepest t with
# m^(2(t+1)) below this keeps pairwise point scans cheap.
_POINT_PAIR_BUDGET = 2500


class ResourceCapExceeded(RuntimeError):
    pass


def word_to_str(w: Word, m: int = 9) -> str:
    if not w:
        return "e"
    if m <= 9:
        return "".join(str(c) for c in w)
    return ".".join(str(c) for c in w)


def parse_word(s: str, m: int) -> Word:
    if s in ("", "e"):
        return ()
    parts = s.split(".") if "." in s else list(s)
    w = tuple(int(c) for c in parts)
    for c in w:
        if not 1 <= c <= m:
            raise ValueError(f"letter {c} outside alphabet 1..{m}")
    return w


def all_words(m: int, n: int) -> list[Word]:
    return [tuple(w) for w in itertools.product(range(1, m + 1), repeat=n)]


class IFS:
    """Ordered list of m >= 2 contracting similitudes on Q^d."""

    def __init__(self, maps: list[Similitude], box: Box | None = None):
        if len(maps) < 2:
            raise ValueError("an IFS needs at least two maps")
        d = maps[0].dim
        for s in maps:
            if s.dim != d:
                raise ValueError("all maps must share one ambient dimension")
            if not s.contracting:
                raise ValueError(f"map with ratio {s.ratio} is not contracting")
        self.maps = list(maps)
        self.dim = d
        if box is not None and not verify_invariant_box(self, box):
            raise ValueError("provided box is not invariant under the IFS")
        self._box = box
        self._fixed_points: list[Vec] | None = None

    @property
    def m(self) -> int:
        return len(self.maps)

    @property
    def alphabet(self) -> range:
        return range(1, self.m + 1)

    @property
    def homogeneous(self) -> bool:
        return len({s.ratio for s in self.maps}) == 1

    @property
    def ratio(self) -> Fraction:
        if not self.homogeneous:
            raise ValueError("IFS is not homogeneous")
        return self.maps[0].ratio

    def common_orth(self):
        orths = {s.orth for s in self.maps}
        return self.maps[0].orth if len(orths) == 1 else None

    def map(self, letter: int) -> Similitude:
        if not 1 <= letter <= self.m:
            raise ValueError(f"letter {letter} outside alphabet 1..{self.m}")
        return self.maps[letter - 1]

    def cylinder(self, w: Word) -> Similitude:
        """phi_{w1} o ... o phi_{wn}; identity for the empty word."""
        acc = Similitude.identity(self.dim)
        for c in w:
            acc = acc.compose(self.map(c))
        return acc

    def fixed_points(self) -> list[Vec]:
        if self._fixed_points is None:
            self._fixed_points = [s.fixed_point() for s in self.maps]
        return self._fixed_points

    def invariant_box(self) -> Box:
        if self._box is None:
            self._box = compute_invariant_box(self)
        return self._box

    def cover(self, depth: int, cap: int = DEFAULT_COVER_CAP) -> list[tuple[Word, Box]]:
        """All (w, phi_w(B)) for w of length depth; K is inside the box union."""
        if self.m**depth > cap:
            raise ResourceCapExceeded(f"cover size {self.m}^{depth} exceeds cap {cap}")
        box = self.invariant_box()
        out: list[tuple[Word, Box]] = []

        def rec(w: Word, sim: Similitude):
            if len(w) == depth:
                out.append((w, sim.apply_box(box)))
                return
            for i in self.alphabet:
                rec(w + (i,), sim.compose(self.map(i)))

        rec((), Similitude.identity(self.dim))
        return out

    def attractor_points(self, depth: int, cap: int = DEFAULT_COVER_CAP) -> list[tuple[Word, Vec]]:
        """Exact points phi_w(fix(phi_j)) of K, keyed by the word w + (j,)."""
        if self.m ** (depth + 1) > cap:
            raise ResourceCapExceeded(f"point count {self.m}^{depth + 1} exceeds cap {cap}")
        fixes = self.fixed_points()
        out: list[tuple[Word, Vec]] = []

        def rec(w: Word, sim: Similitude):
            if len(w) == depth:
                for j in self.alphabet:
                    out.append((w + (j,), sim.apply(fixes[j - 1])))
                return
            for i in self.alphabet:
                rec(w + (i,), sim.compose(self.map(i)))

        rec((), Similitude.identity(self.dim))
        return out


def verify_invariant_box(ifs: IFS, box: Box) -> bool:
    """Exact check that phi_i(box) is contained in box for every map."""
    return all(box.contains_box(s.apply_box(box)) for s in ifs.maps)


def compute_invariant_box(ifs: IFS) -> Box:
    """A box B with phi_i(B) contained in B for all i.

    Centered at the average of the fixed points with one half-width w per
    axis, w = max_{i,j} |phi_i(c) - c|_j / (1 - r_i); then the per-axis
    requirement r_i * w + |phi_i(c) - c|_j <= w holds whatever axes the
    signed permutations shuffle. Verified exactly before returning.
    """
    fixes = ifs.fixed_points()
    d = ifs.dim
    c = Vec(*(sum((f.coords[j] for f in fixes), Q0) / len(fixes) for j in range(d)))
    w = Q0
    for s in ifs.maps:
        off = s.apply(c) - c
        for j in range(d):
            need = abs(off.coords[j]) / (Q1 - s.ratio)
            if need > w:
                w = need
    wvec = Vec(*([w] * d))
    box = Box(c - wvec, c + wvec)
    assert verify_invariant_box(ifs, box)
    return box


@dataclass(frozen=True)
class GapBounds:
    """Certified interval for a squared distance: lower <= true <= upper."""

    lower: Fraction
    upper: Fraction
    depth: int

    def __post_init__(self):
        if self.lower > self.upper:
            raise ValueError(f"gap bounds crossed: {self.lower} > {self.upper}")


@dataclass(frozen=True)
class DiameterBounds:
    lower: Fraction
    upper: Fraction
    depth: int


def _upper_point_depth(ifs: IFS, depth: int) -> int:
    t = 0
    while ifs.m ** (2 * (t + 2)) <= _POINT_PAIR_BUDGET and t + 1 <= depth:
        t += 1
    return t


def _cell_points(ifs: IFS, u: Word, t: int) -> list[Vec]:
    cu = ifs.cylinder(u)
    return [cu.apply(p) for _, p in ifs.attractor_points(t)]


def cell_dist_bounds(
    ifs: IFS, u: Word, v: Word, depth: int, max_pops: int = 50_000
) -> GapBounds:
    """Certified squared-distance interval for dist(phi_u(K), phi_v(K)).

    Lower bound: minimum over the depth-`depth` sub-cover boxes of both cells,
    computed by best-first refinement (equals the full product-cover minimum;
    truncating at max_pops only loosens it soundly). Upper bound: minimum over
    exact attractor point pairs. Both tighten monotonically as depth grows.
    """
    if u == v:
        return GapBounds(Q0, Q0, depth)
    box = ifs.invariant_box()
    cu, cv = ifs.cylinder(u), ifs.cylinder(v)

    t = _upper_point_depth(ifs, depth)
    pts_u = _cell_points(ifs, u, t)
    pts_v = _cell_points(ifs, v, t)
    upper = min(p.sqdist(q) for p in pts_u for q in pts_v)

    # Best-first box refinement. Heap nodes carry the cylinder maps refined
    # du, dv letters below u, v, with their image boxes cached.
    counter = itertools.count()
    bu0, bv0 = cu.apply_box(box), cv.apply_box(box)
    heap = [(bu0.sqdist_box(bv0), next(counter), 0, cu, bu0, 0, cv, bv0)]
    lower = Q0
    for _ in range(max_pops):
        d2, _, du, su, bu, dv, sv, bv = heapq.heappop(heap)
        if d2 >= upper:
            lower = upper
            break
        lower = d2  # frontier minimum: sound even if we stop right here
        if du >= depth and dv >= depth:
            break
        if du <= dv and du < depth:
            for i in ifs.alphabet:
                child = su.compose(ifs.map(i))
                cbox = child.apply_box(box)
                heapq.heappush(
                    heap, (cbox.sqdist_box(bv), next(counter), du + 1, child, cbox, dv, sv, bv)
                )
        else:
            for i in ifs.alphabet:
                child = sv.compose(ifs.map(i))
                cbox = child.apply_box(box)
                heapq.heappush(
                    heap, (bu.sqdist_box(cbox), next(counter), du, su, bu, dv + 1, child, cbox)
                )
    return GapBounds(min(lower, upper), upper, depth)


def image_gap_lower(
    ifs: IFS, s1: Similitude, s2: Similitude, depth: int, max_pops: int = 50_000
) -> Fraction:
    """Certified lower bound for the squared distance of s1(K) and s2(K).

    Same best-first refinement as cell_dist_bounds, but for arbitrary outer
    similitudes; stops as soon as the frontier minimum is positive (which
    already certifies disjointness) or the depth budget is spent.
    """
    box = ifs.invariant_box()
    counter = itertools.count()
    b1, b2 = s1.apply_box(box), s2.apply_box(box)
    heap = [(b1.sqdist_box(b2), next(counter), 0, s1, b1, 0, s2, b2)]
    lower = Q0
    for _ in range(max_pops):
        d2, _, du, su, bu, dv, sv, bv = heapq.heappop(heap)
        lower = d2
        if d2 > Q0 or (du >= depth and dv >= depth):
            break
        if du <= dv:
            for i in ifs.alphabet:
                child = su.compose(ifs.map(i))
                cbox = child.apply_box(box)
                heapq.heappush(
                    heap, (cbox.sqdist_box(bv), next(counter), du + 1, child, cbox, dv, sv, bv)
                )
        else:
            for i in ifs.alphabet:
                child = sv.compose(ifs.map(i))
                cbox = child.apply_box(box)
                heapq.heappush(
                    heap, (bu.sqdist_box(cbox), next(counter), du, su, bu, dv + 1, child, cbox)
                )
    return lower


def min_gap(ifs: IFS, depth: int) -> GapBounds:
    """Bounds for the squared minimal distance over all pairs of level-1 cells."""
    lows, ups = [], []
    for i in ifs.alphabet:
        for j in ifs.alphabet:
            if i < j:
                b = cell_dist_bounds(ifs, (i,), (j,), depth)
                lows.append(b.lower)
                ups.append(b.upper)
    return GapBounds(min(lows), min(ups), depth)


def diameter_bounds(ifs: IFS, depth: int) -> DiameterBounds:
    """Squared-diameter interval for K."""
    cover = ifs.cover(depth)
    bbox = cover[0][1]
    for _, b in cover[1:]:
        bbox = bbox.hull(b)
    upper = bbox.sqdiameter()
    t = _upper_point_depth(ifs, depth)
    pts = [p for _, p in ifs.attractor_points(t)]
    lower = max(p.sqdist(q) for p in pts for q in pts)
    return DiameterBounds(lower, upper, depth)


class SSCStatus(Enum):
    CERTIFIED = "certified"
    VIOLATED = "violated"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class SSCResult:
    status: SSCStatus
    gap: GapBounds | None = None
    witness: tuple[Word, Word, Vec] | None = None
    depth: int = 0

    def __post_init__(self):
        if self.status is SSCStatus.CERTIFIED:
            assert self.gap is not None and self.gap.lower > Q0
        if self.status is SSCStatus.VIOLATED:
            assert self.witness is not None


def _coincidence_witness(ifs: IFS, depth: int) -> tuple[Word, Word, Vec] | None:
    """Exact attractor points shared by two distinct level-1 cells, if any."""
    seen: dict[tuple[Fraction, ...], Word] = {}
    for w, p in ifs.attractor_points(depth):
        key = p.coords
        prev = seen.get(key)
        if prev is None:
            seen[key] = w
        elif prev[0] != w[0]:
            return (prev, w, p)
    return None


def check_ssc(ifs: IFS, max_depth: int = 6) -> SSCResult:
    """Tri-state strong-separation check.

    Certified and Violated answers are sound; Unknown means the depth budget
    ran out before the level-1 cells could be separated or shown to share an
    exact point.
    """
    for depth in range(1, max_depth + 1):
        witness = _coincidence_witness(ifs, depth)
        if witness is not None:
            return SSCResult(SSCStatus.VIOLATED, witness=witness, depth=depth)
        g = min_gap(ifs, depth)
        if g.lower > Q0:
            return SSCResult(SSCStatus.CERTIFIED, gap=g, depth=depth)
    return SSCResult(SSCStatus.UNKNOWN, depth=max_depth)


@dataclass(frozen=True)
class DimensionInfo:
    """Similarity dimension of a homogeneous SSC system, stored symbolically.

    The pair (m, r) satisfies m * r^alpha = 1; the float is display-only and
    never feeds back into any computation.
    """

    m: int
    r: Fraction
    display: float = field(compare=False, default=0.0)


def dimension(ifs: IFS) -> DimensionInfo:
    if not ifs.homogeneous:
        raise ValueError("dimension is defined here only for homogeneous IFSs")
    r = ifs.ratio
    return DimensionInfo(ifs.m, r, math.log(ifs.m) / math.log(1 / float(r)))


def _point_cell_positive(ifs: IFS, p: Vec, w: Word, depth: int) -> bool:
    """Certified dist(p, phi_w(K)) > 0 via refined sub-covers of the cell."""
    box = ifs.invariant_box()
    frontier = [ifs.cylinder(w)]
    for _ in range(depth + 1):
        nxt = []
        for sim in frontier:
            if sim.apply_box(box).sqdist_point(p) > Q0:
                continue
            nxt.extend(sim.compose(ifs.map(i)) for i in ifs.alphabet)
        if not nxt:
            return True
        frontier = nxt
    return False


def locate_point(ifs: IFS, p: Vec, level: int, depth: int = 6) -> Word | None:
    """The unique w of length `level` with p in phi_w(K), for exact p in K.

    Descends level by level; at each step exactly one cell may retain the
    point, every other cell must be certified excluded. Returns None when the
    depth budget cannot separate the candidates; raises when every cell is
    excluded (then p was not a point of K and the caller broke the contract).
    """
    cur = p
    out: list[int] = []
    for _ in range(level):
        keep = [i for i in ifs.alphabet if not _point_cell_positive(ifs, cur, (i,), depth)]
        if not keep:
            raise ValueError("point is certifiably outside K")
        if len(keep) > 1:
            return None
        i = keep[0]
        out.append(i)
        cur = ifs.map(i).inverse().apply(cur)
    return tuple(out)
