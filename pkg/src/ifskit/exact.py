"""Exact rational scalars, vectors, signed permutations, similitudes and boxes.

Everything in this package computes over `fractions.Fraction`; nothing is ever
rounded. Distance comparisons are made on squared Euclidean distances, which
stay rational. Orthogonal parts are restricted to signed permutation matrices
(one entry of +-1 per row and column), a finite group that is closed under the
operations used here and covers every quarter-turn rotation and reflection.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

Q = Fraction

Q0 = Q(0)
Q1 = Q(1)


class DimensionMismatch(ValueError):
    pass


@dataclass(frozen=True)
class Vec:
    """Point or translation in Q^d."""

    coords: tuple[Fraction, ...]

    def __init__(self, *coords: Fraction | int):
        object.__setattr__(self, "coords", tuple(Q(c) for c in coords))

    @property
    def dim(self) -> int:
        return len(self.coords)

    def __add__(self, other: "Vec") -> "Vec":
        _same_dim(self, other)
        return Vec(*(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "Vec") -> "Vec":
        _same_dim(self, other)
        return Vec(*(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "Vec":
        return Vec(*(-a for a in self.coords))

    def scale(self, c: Fraction) -> "Vec":
        return Vec(*(c * a for a in self.coords))

    def sqnorm(self) -> Fraction:
        return sum((a * a for a in self.coords), Q0)

    def sqdist(self, other: "Vec") -> Fraction:
        return (self - other).sqnorm()

    def __getitem__(self, j: int) -> Fraction:
        return self.coords[j]

    def __lt__(self, other: "Vec") -> bool:
        # Lexicographic; used for deterministic sample-point selection.
        return self.coords < other.coords


def _same_dim(a, b) -> None:
    if a.dim != b.dim:
        raise DimensionMismatch(f"dimension mismatch: {a.dim} vs {b.dim}")


@dataclass(frozen=True)
class SignedPermutation:
    """Orthogonal matrix with entry signs[i] at (i, perm[i]) and zeros elsewhere.

    Applying to x gives y with y[i] = signs[i] * x[perm[i]].
    """

    perm: tuple[int, ...]
    signs: tuple[int, ...]

    def __post_init__(self):
        d = len(self.perm)
        if sorted(self.perm) != list(range(d)):
            raise ValueError(f"perm is not a bijection on 0..{d - 1}: {self.perm}")
        if len(self.signs) != d or any(s not in (1, -1) for s in self.signs):
            raise ValueError(f"signs must be +-1 of length {d}: {self.signs}")

    @staticmethod
    def identity(d: int) -> "SignedPermutation":
        return SignedPermutation(tuple(range(d)), (1,) * d)

    @property
    def dim(self) -> int:
        return len(self.perm)

    def is_identity(self) -> bool:
        return self.perm == tuple(range(self.dim)) and all(s == 1 for s in self.signs)

    def apply(self, v: Vec) -> Vec:
        _same_dim(self, v)
        return Vec(*(self.signs[i] * v.coords[self.perm[i]] for i in range(self.dim)))

    def compose(self, other: "SignedPermutation") -> "SignedPermutation":
        """self o other (apply other first)."""
        _same_dim(self, other)
        perm = tuple(other.perm[self.perm[i]] for i in range(self.dim))
        signs = tuple(self.signs[i] * other.signs[self.perm[i]] for i in range(self.dim))
        return SignedPermutation(perm, signs)

    def inverse(self) -> "SignedPermutation":
        d = self.dim
        perm = [0] * d
        signs = [1] * d
        for i in range(d):
            perm[self.perm[i]] = i
            signs[self.perm[i]] = self.signs[i]
        return SignedPermutation(tuple(perm), tuple(signs))

    def order(self) -> int:
        """Smallest k >= 1 with self^k = identity. Finite for signed permutations."""
        k = 1
        acc = self
        while not acc.is_identity():
            acc = acc.compose(self)
            k += 1
        return k

    def power(self, k: int) -> "SignedPermutation":
        if k < 0:
            raise ValueError("power requires k >= 0")
        acc = SignedPermutation.identity(self.dim)
        for _ in range(k % self.order() if k else 0):
            acc = acc.compose(self)
        return acc

    def matrix(self) -> tuple[tuple[int, ...], ...]:
        d = self.dim
        rows = []
        for i in range(d):
            row = [0] * d
            row[self.perm[i]] = self.signs[i]
            rows.append(tuple(row))
        return tuple(rows)


def rotation90(d: int = 2) -> SignedPermutation:
    """Counterclockwise quarter turn in the plane: (x, y) -> (-y, x)."""
    if d != 2:
        raise ValueError("quarter turn is a planar map")
    return SignedPermutation((1, 0), (-1, 1))


def rotation180() -> SignedPermutation:
    return SignedPermutation((0, 1), (-1, -1))


def rotation270() -> SignedPermutation:
    """(x, y) -> (y, -x)."""
    return SignedPermutation((1, 0), (1, -1))


@dataclass(frozen=True)
class Box:
    """Axis-aligned box [lower, upper], coordinatewise."""

    lower: Vec
    upper: Vec

    def __post_init__(self):
        _same_dim(self.lower, self.upper)
        if any(l > u for l, u in zip(self.lower.coords, self.upper.coords)):
            raise ValueError(f"box has lower > upper: {self}")

    @property
    def dim(self) -> int:
        return self.lower.dim

    def contains_point(self, p: Vec) -> bool:
        return all(
            l <= x <= u
            for l, x, u in zip(self.lower.coords, p.coords, self.upper.coords)
        )

    def contains_box(self, other: "Box") -> bool:
        return self.contains_point(other.lower) and self.contains_point(other.upper)

    def sqdist_box(self, other: "Box") -> Fraction:
        """Exact squared distance between the two boxes (0 when they meet)."""
        total = Q0
        for j in range(self.dim):
            gap = other.lower.coords[j] - self.upper.coords[j]
            if gap <= Q0:
                gap = self.lower.coords[j] - other.upper.coords[j]
            if gap > Q0:
                total += gap * gap
        return total

    def sqdist_point(self, p: Vec) -> Fraction:
        total = Q0
        for j in range(self.dim):
            x = p.coords[j]
            if x < self.lower.coords[j]:
                g = self.lower.coords[j] - x
            elif x > self.upper.coords[j]:
                g = x - self.upper.coords[j]
            else:
                continue
            total += g * g
        return total

    def sqdiameter(self) -> Fraction:
        return sum(
            ((u - l) * (u - l) for l, u in zip(self.lower.coords, self.upper.coords)),
            Q0,
        )

    def corners(self) -> list[Vec]:
        pts = [()]
        for l, u in zip(self.lower.coords, self.upper.coords):
            pts = [p + (c,) for p in pts for c in ((l,) if l == u else (l, u))]
        return [Vec(*p) for p in pts]

    def hull(self, other: "Box") -> "Box":
        _same_dim(self.lower, other.lower)
        lo = Vec(*(min(a, b) for a, b in zip(self.lower.coords, other.lower.coords)))
        hi = Vec(*(max(a, b) for a, b in zip(self.upper.coords, other.upper.coords)))
        return Box(lo, hi)


@dataclass(frozen=True)
class Similitude:
    """x -> ratio * orth(x) + trans, with ratio > 0 exact."""

    ratio: Fraction
    orth: SignedPermutation
    trans: Vec

    def __post_init__(self):
        if Q(self.ratio) <= 0:
            raise ValueError(f"ratio must be positive: {self.ratio}")
        _same_dim(self.orth, self.trans)
        if not isinstance(self.ratio, Fraction):
            object.__setattr__(self, "ratio", Q(self.ratio))

    @staticmethod
    def identity(d: int) -> "Similitude":
        return Similitude(Q1, SignedPermutation.identity(d), Vec(*([0] * d)))

    @property
    def dim(self) -> int:
        return self.trans.dim

    def is_identity(self) -> bool:
        return self.ratio == Q1 and self.orth.is_identity() and self.trans.sqnorm() == Q0

    @property
    def contracting(self) -> bool:
        return self.ratio < Q1

    def apply(self, p: Vec) -> Vec:
        _same_dim(self, p)
        return self.orth.apply(p).scale(self.ratio) + self.trans

    def apply_box(self, b: Box) -> Box:
        """Exact image box; signed permutations keep boxes axis-aligned."""
        _same_dim(self, b.lower)
        lo, hi = [], []
        for i in range(self.dim):
            j = self.orth.perm[i]
            a = self.ratio * self.orth.signs[i] * b.lower.coords[j] + self.trans.coords[i]
            c = self.ratio * self.orth.signs[i] * b.upper.coords[j] + self.trans.coords[i]
            if a > c:
                a, c = c, a
            lo.append(a)
            hi.append(c)
        return Box(Vec(*lo), Vec(*hi))

    def compose(self, other: "Similitude") -> "Similitude":
        """self o other: x -> self(other(x))."""
        _same_dim(self, other)
        return Similitude(
            self.ratio * other.ratio,
            self.orth.compose(other.orth),
            self.orth.apply(other.trans).scale(self.ratio) + self.trans,
        )

    def inverse(self) -> "Similitude":
        """Algebraic inverse; expanding when self is contracting."""
        oinv = self.orth.inverse()
        rinv = Q1 / self.ratio
        return Similitude(rinv, oinv, oinv.apply(self.trans).scale(-rinv))

    def power(self, k: int) -> "Similitude":
        if k < 0:
            raise ValueError("power requires k >= 0")
        acc = Similitude.identity(self.dim)
        for _ in range(k):
            acc = acc.compose(self)
        return acc

    def fixed_point(self) -> Vec:
        """Unique solution of s(x) = x; requires ratio < 1 so I - rO is invertible."""
        if not self.contracting:
            raise ValueError("fixed_point requires a contracting similitude")
        d = self.dim
        # Rows of I - r*O.
        mat = [[Q0] * d for _ in range(d)]
        for i in range(d):
            mat[i][i] += Q1
            mat[i][self.orth.perm[i]] -= self.ratio * self.orth.signs[i]
        rhs = list(self.trans.coords)
        return Vec(*_solve_linear(mat, rhs))


def _solve_linear(mat: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction]:
    """Exact Gaussian elimination for small d x d systems."""
    d = len(rhs)
    a = [row[:] + [rhs[i]] for i, row in enumerate(mat)]
    for col in range(d):
        piv = next((r for r in range(col, d) if a[r][col] != 0), None)
        if piv is None:
            raise ValueError("singular system")
        a[col], a[piv] = a[piv], a[col]
        inv = Q1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for r in range(d):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [a[r][d] for r in range(d)]
