"""Chain decomposition: threshold-connected components of same-level cells.

A chain at level n-1 is a maximal union of level-(n-1) cells in which
consecutive cells sit within r^(n-1)*|K| of each other, while distinct chains
are separated by more than that. Since |K| is only known through certified
bounds, the decomposition compares squared distances against
r^(2(n-1)) * diam_upper^2 and conservatively merges any pair it cannot
certify separated; forced merges that are not certified adjacent either are
flagged.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exact import Q0
from .ifs import (
    IFS,
    GapBounds,
    Word,
    all_words,
    cell_dist_bounds,
    diameter_bounds,
    min_gap,
)

MAX_CHAIN_LEVEL = 64


class UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra


@dataclass(frozen=True)
class ChainStructure:
    """Partition of the length-(level) words into threshold-connected chains.

    separation maps each cross-chain word pair to its certified squared
    distance lower bound, which strictly exceeds threshold_sq. flags lists
    merged pairs whose adjacency could not be certified either way.
    """

    level: int
    n: int
    chains: tuple[tuple[Word, ...], ...]
    threshold_sq: Fraction
    separation: dict[tuple[Word, Word], Fraction]
    flags: tuple[tuple[Word, Word], ...]

    def chain_of(self, w: Word) -> int:
        for idx, chain in enumerate(self.chains):
            if w in chain:
                return idx
        raise KeyError(f"word {w} not at level {self.level}")


def chain_level(ifs: IFS, depth: int = 6) -> int | None:
    """Smallest n >= 1 with r^(2n) * diam_upper^2 < gap_lower^2.

    Then every level-n cell is certifiably smaller than the least distance
    between level-1 cells. None when the bounds at this depth are too loose
    (gap lower bound still zero), or no n under MAX_CHAIN_LEVEL works.
    """
    if not ifs.homogeneous:
        raise ValueError("chain level requires a homogeneous IFS")
    gap = min_gap(ifs, depth)
    if gap.lower == Q0:
        return None
    dia = diameter_bounds(ifs, depth)
    r2 = ifs.ratio * ifs.ratio
    factor = r2
    for n in range(1, MAX_CHAIN_LEVEL + 1):
        if factor * dia.upper < gap.lower:
            return n
        factor *= r2
    return None


def chain_decomposition(ifs: IFS, n: int, depth: int = 6) -> ChainStructure:
    """Partition the level-(n-1) words by certified threshold connectivity.

    Edge rule: a pair is separated when its certified squared-distance lower
    bound strictly exceeds r^(2(n-1)) * diam_upper^2; otherwise it is merged.
    A merged pair whose distance upper bound also fails to come under
    r^(2(n-1)) * diam_lower^2 is ambiguous and gets flagged. Ties merge, which
    matches the inclusive adjacency convention.
    """
    if not ifs.homogeneous:
        raise ValueError("chain decomposition requires a homogeneous IFS")
    if n < 1:
        raise ValueError("n must be >= 1")
    dia = diameter_bounds(ifs, depth)
    rfac = ifs.ratio ** (n - 1)
    tau_sq = rfac * rfac * dia.upper
    adj_sq = rfac * rfac * dia.lower

    words = all_words(ifs.m, n - 1)
    uf = UnionFind(words)
    separation: dict[tuple[Word, Word], Fraction] = {}
    flags: list[tuple[Word, Word]] = []
    bounds: dict[tuple[Word, Word], GapBounds] = {}
    for a in range(len(words)):
        for b in range(a + 1, len(words)):
            u, v = words[a], words[b]
            g = cell_dist_bounds(ifs, u, v, depth)
            bounds[(u, v)] = g
            if g.lower > tau_sq:
                continue
            uf.union(u, v)
            if g.upper > adj_sq:
                flags.append((u, v))

    groups: dict[Word, list[Word]] = {}
    for w in words:
        groups.setdefault(uf.find(w), []).append(w)
    chains = tuple(tuple(sorted(g)) for g in sorted(groups.values()))

    for (u, v), g in bounds.items():
        cu = next(i for i, c in enumerate(chains) if u in c)
        cv = next(i for i, c in enumerate(chains) if v in c)
        if cu != cv:
            separation[(u, v)] = g.lower
    return ChainStructure(
        level=n - 1,
        n=n,
        chains=chains,
        threshold_sq=tau_sq,
        separation=separation,
        flags=tuple(flags),
    )


def chains_ordered_1d(
    cs: ChainStructure, ifs: IFS, depth: int = 6
) -> list[tuple[tuple[Word, ...], tuple[Fraction, Fraction]]]:
    """Chains sorted left to right by certified hull intervals (d = 1 only).

    The hull interval of a chain is the tight interval around its refined
    cover boxes; intervals of distinct chains must be disjoint, anything else
    contradicts the certified separation and is raised as an internal error.
    """
    if ifs.dim != 1:
        raise ValueError("chain ordering by hulls is one-dimensional")
    box = ifs.invariant_box()
    for t in range(depth + 1):
        intervals = []
        for chain in cs.chains:
            los, his = [], []
            for w in chain:
                base = ifs.cylinder(w)
                for suffix in all_words(ifs.m, t):
                    b = base.compose(ifs.cylinder(suffix)).apply_box(box)
                    los.append(b.lower.coords[0])
                    his.append(b.upper.coords[0])
            intervals.append((chain, (min(los), max(his))))
        intervals.sort(key=lambda item: item[1][0])
        if all(
            hi < lo
            for (_, (_, hi)), (_, (lo, _)) in zip(intervals, intervals[1:])
        ):
            return intervals
    raise RuntimeError("chain hull intervals overlap; separation certificates broken")
