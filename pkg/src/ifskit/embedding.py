"""Self-embedding machinery: commensurability, relation systems, openness.

An embedding certificate is a finite closure system of exact identities
g o phi_i = phi_u o g' (u a non-empty word, g' another certified generator or
the identity). Completeness plus exactness implies g(K) is a subset of K for
every generator g: unrolling the relations t times traps g(K) inside a union
of cylinder images of a fixed bounded box, whose Hausdorff distance to K
shrinks like the t-th power of the contraction ratio, so g(K) lies in the
closed set K. The certificate is therefore sound on its own; searching for
one may fail (None = unknown), but a returned certificate never lies.

The openness decision consumes such a certificate and replays the
constructive content of the common-linear-part case: power f and the IFS
until both the ratios and the orthogonal parts match, decompose the powered
level into chains, follow the orbit of each chain under f^k, and verify cell
by cell, with exact identities, that f^k maps each chain ONTO a translate
chain inside one cell. The output is f^k(K) as an explicit finite union of
cells, cross-checked against the integer count identity; openness of f(K)
itself follows because a similitude image being open is inherited downward
from any power.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .chains import ChainStructure, chain_decomposition, chain_level
from .exact import Q, Q0, Q1, Similitude, Vec
from .ifs import (
    IFS,
    ResourceCapExceeded,
    SSCStatus,
    Word,
    all_words,
    check_ssc,
    locate_point,
)


class PreconditionError(Exception):
    """A stated precondition of the decision fails (exit class 3)."""


class NotHomogeneousOrthogonal(PreconditionError):
    """The orthogonal parts block the common-linear-part machinery."""


class InconsistentResult(RuntimeError):
    """The orbit or counting cross-checks contradict sound inputs: either an
    implementation bug or unsound evidence."""


@dataclass(frozen=True)
class PowerRelation:
    """Minimal positive pair with r_f^k = r^p, as an exact rational identity."""

    k: int
    p: int


def _prime_exponents(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    f = 2
    while f * f <= n:
        while n % f == 0:
            out[f] = out.get(f, 0) + 1
            n //= f
        f += 1 if f == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _exponent_vector(q: Fraction) -> dict[int, int]:
    vec = _prime_exponents(q.numerator)
    for prime, e in _prime_exponents(q.denominator).items():
        vec[prime] = vec.get(prime, 0) - e
    return {prime: e for prime, e in vec.items() if e != 0}


def log_commensurability(r: Fraction, r_f: Fraction) -> PowerRelation | None:
    """Decide r_f^k = r^p exactly via prime-exponent proportionality.

    None means log r_f / log r is irrational, so no power identity exists.
    """
    if not (Q0 < r < Q1 and Q0 < r_f < Q1):
        raise ValueError("both ratios must lie strictly between 0 and 1")
    er = _exponent_vector(r)
    ef = _exponent_vector(r_f)
    if set(er) != set(ef):
        return None
    lam = None
    for prime, e in er.items():
        cand = Q(ef[prime], e)
        if lam is None:
            lam = cand
        elif cand != lam:
            return None
    k, p = lam.denominator, lam.numerator
    assert r_f**k == r**p
    return PowerRelation(k, p)


def _ratio_feasible(ifs: IFS, q: Fraction, length: int) -> bool:
    if ifs.homogeneous:
        return ifs.ratio**length == q
    lo = min(s.ratio for s in ifs.maps) ** length
    hi = max(s.ratio for s in ifs.maps) ** length
    return lo <= q <= hi


def word_of_cylinder(ifs: IFS, s: Similitude, length: int) -> Word | None:
    """The unique w of the given length with phi_w = s exactly, if one exists.

    Descends one letter at a time; a true cylinder starting with i maps the
    invariant box into phi_i(box), so that inclusion prunes without ever
    discarding a match. The bottom of the recursion compares against the
    identity exactly.
    """
    if not _ratio_feasible(ifs, s.ratio, length):
        return None
    box = ifs.invariant_box()

    def rec(cur: Similitude, remaining: int) -> Word | None:
        if remaining == 0:
            return () if cur.is_identity() else None
        cur_box = cur.apply_box(box)
        for i in ifs.alphabet:
            if ifs.map(i).apply_box(box).contains_box(cur_box):
                sub = rec(ifs.map(i).inverse().compose(cur), remaining - 1)
                if sub is not None:
                    return (i,) + sub
        return None

    return rec(s, length)


def relation_search(
    f: Similitude, ifs: IFS, max_k: int = 4, max_word_len: int = 8
) -> tuple[int, Word, Word] | None:
    """Search for an exact identity f^k o phi_i = phi_j.

    Enumerates k, then |i|, then i lexicographically; the length of j is
    pinned down by the ratio identity. None on budget exhaustion.
    """
    for k in range(1, max_k + 1):
        g = f.power(k)
        for li in range(1, max_word_len + 1):
            for i_word in all_words(ifs.m, li):
                cand = g.compose(ifs.cylinder(i_word))
                for lj in range(1, max_word_len + 1):
                    if not _ratio_feasible(ifs, cand.ratio, lj):
                        continue
                    j_word = word_of_cylinder(ifs, cand, lj)
                    if j_word is not None:
                        return (k, i_word, j_word)
    return None


@dataclass(frozen=True)
class EmbeddingCertificate:
    """Complete exact relation system proving g(K) in K for every generator.

    relations maps (generator index, letter) to (word u, target) where target
    is a generator index or None for the identity; the encoded identity is
    G[gi] o phi_letter = phi_u o (G[target] or id), verified exactly.
    """

    subject: Similitude
    generators: tuple[Similitude, ...]
    relations: dict[tuple[int, int], tuple[Word, int | None]]

    def verify(self, ifs: IFS) -> bool:
        """Recheck completeness and every identity; independent of the search."""
        ident = Similitude.identity(ifs.dim)
        if self.subject != self.generators[0]:
            return False
        for gi in range(len(self.generators)):
            for letter in ifs.alphabet:
                rel = self.relations.get((gi, letter))
                if rel is None:
                    return False
                word, target = rel
                if len(word) < 1:
                    return False
                rhs_tail = ident if target is None else self.generators[target]
                lhs = self.generators[gi].compose(ifs.map(letter))
                if lhs != ifs.cylinder(word).compose(rhs_tail):
                    return False
        return True

    def first_letters(self, gi: int = 0) -> set[int]:
        """Level-1 cells that the generator's image certifiably meets."""
        return {word[0] for (g, _), (word, _) in self.relations.items() if g == gi}


def _plausible_generator(g: Similitude, ifs: IFS) -> bool:
    """Cheap necessary conditions for g(K) in K; prunes the discovery search.

    A ratio above 1 cannot embed a compact set in itself; neither can a pure
    nonzero translation (iterating it escapes any bounded set); and a genuine
    embedder must send exact attractor points into the invariant box.
    """
    if g.ratio > Q1:
        return False
    if g.ratio == Q1 and g.orth.is_identity() and g.trans.sqnorm() != Q0:
        return False
    box = ifs.invariant_box()
    return all(box.contains_point(g.apply(fp)) for fp in ifs.fixed_points())


def _cells_containing_points(ifs: IFS, points: list[Vec], length: int) -> list[Word]:
    """All length-`length` words whose cell box contains every given point."""
    box = ifs.invariant_box()
    out: list[Word] = []

    def rec(w: Word, pts: list[Vec]):
        if len(w) == length:
            out.append(w)
            return
        for i in ifs.alphabet:
            b = ifs.map(i).apply_box(box)
            if all(b.contains_point(p) for p in pts):
                inv = ifs.map(i).inverse()
                rec(w + (i,), [inv.apply(p) for p in pts])

    rec((), points)
    return out


def certify_embedding(
    f: Similitude,
    ifs: IFS,
    extra_generators: tuple[Similitude, ...] = (),
    max_word_len: int = 8,
    max_generators: int = 16,
) -> EmbeddingCertificate | None:
    """Build a complete exact relation system containing f, or None.

    Worklist over (generator, letter). For each task the composed map
    g o phi_letter is matched against phi_u o h for h = identity, then each
    known generator (the word length is forced by the ratio identity), and
    failing that the search admits phi_u^-1 o g o phi_letter as a new
    generator for the geometrically plausible candidates u of increasing
    length. extra_generators join the system up front and receive their own
    obligations, so certifying several maps jointly is one call.
    """
    generators: list[Similitude] = [f]
    for g in extra_generators:
        if g not in generators:
            generators.append(g)
    # A nonzero pure translation can never embed a compact attractor into
    # itself (iterating it escapes every bounded set): reject up front.
    for g in generators:
        if g.ratio == Q1 and g.orth.is_identity() and g.trans.sqnorm() != Q0:
            return None
    relations: dict[tuple[int, int], tuple[Word, int | None]] = {}
    queue: deque[tuple[int, int]] = deque(
        (gi, i) for gi in range(len(generators)) for i in ifs.alphabet
    )
    fixes = ifs.fixed_points()

    def find_relation(gi: int, letter: int) -> tuple[Word, int | None] | None:
        comp = generators[gi].compose(ifs.map(letter))
        targets: list[int | None] = [None] + list(range(len(generators)))
        for target in targets:
            cand = comp if target is None else comp.compose(generators[target].inverse())
            for length in range(1, max_word_len + 1):
                if not _ratio_feasible(ifs, cand.ratio, length):
                    continue
                u = word_of_cylinder(ifs, cand, length)
                if u is not None:
                    return (u, target)
        # Discovery: admit a new generator behind a plausible cell.
        pts = [comp.apply(fp) for fp in fixes]
        for length in range(1, max_word_len + 1):
            for u in _cells_containing_points(ifs, pts, length):
                g2 = ifs.cylinder(u).inverse().compose(comp)
                if g2.is_identity():
                    return (u, None)
                for known, existing in enumerate(generators):
                    if g2 == existing:
                        return (u, known)
                if len(generators) >= max_generators:
                    continue
                if _plausible_generator(g2, ifs):
                    generators.append(g2)
                    new_gi = len(generators) - 1
                    queue.extend((new_gi, i) for i in ifs.alphabet)
                    return (u, new_gi)
        return None

    while queue:
        gi, letter = queue.popleft()
        if (gi, letter) in relations:
            continue
        rel = find_relation(gi, letter)
        if rel is None:
            return None
        relations[(gi, letter)] = rel

    cert = EmbeddingCertificate(f, tuple(generators), relations)
    assert cert.verify(ifs)
    return cert


@dataclass(frozen=True)
class CellUnion:
    """A finite set of same-length words representing a union of cells."""

    level: int
    words: tuple[Word, ...]
    source: str

    def __post_init__(self):
        assert len(set(self.words)) == len(self.words)
        assert all(len(w) == self.level for w in self.words)


@dataclass(frozen=True)
class OrbitTrace:
    """Per-chain orbit log: visited chain indices and the detected cycle."""

    start: int
    steps: tuple[tuple[int, int], ...]  # (letter into, chain index reached)
    cycle: tuple[int, int]  # positions s < t in the visit sequence with E_s = E_t


@dataclass(frozen=True)
class OpennessCertificate:
    relation: PowerRelation
    chain_structure: ChainStructure
    orbit: tuple[OrbitTrace, ...]
    assignments: tuple[tuple[int, int, int], ...]  # (chain, letter, image chain)
    cell_union: CellUnion
    power_reduction_used: bool
    conclusion: str


def _powered_system(ifs: IFS, p: int, cap: int) -> tuple[IFS, list[Word]]:
    if ifs.m**p > cap:
        raise ResourceCapExceeded(f"powered alphabet {ifs.m}^{p} exceeds cap {cap}")
    words = all_words(ifs.m, p)
    maps = [ifs.cylinder(w) for w in words]
    return IFS(maps, box=ifs.invariant_box()), words


def _chain_sample_point(psi: IFS, chain: tuple[Word, ...]) -> Vec:
    """Lexicographically smallest exact attractor point of the chain."""
    fixes = psi.fixed_points()
    best = None
    for w in chain:
        cyl = psi.cylinder(w)
        for fp in fixes:
            pt = cyl.apply(fp)
            if best is None or pt < best:
                best = pt
    return best


def openness_decision(
    f: Similitude,
    ifs: IFS,
    evidence: EmbeddingCertificate,
    depth: int = 6,
    max_word_len: int = 8,
    max_generators: int = 16,
    power_cap: int = 4096,
    cells_cap: int = 20_000,
) -> OpennessCertificate | None:
    """Decide that f^k(K) is a finite union of cells and output which ones.

    Requires verified embedding evidence for f and a certified SSC. Output
    cells are verified by exact identity matching per cell (falling back to a
    recursive embedding certificate for the unit-ratio comparison map) and
    cross-checked against the count identity |W| = m_psi^(n-1). Returns None
    when a budget runs out; raises NotHomogeneousOrthogonal when the
    orthogonal parts rule the method out, InconsistentResult when the checks
    contradict what sound inputs imply.
    """
    if not ifs.homogeneous:
        raise PreconditionError("IFS is not homogeneous: no common contraction ratio")
    if not evidence.verify(ifs):
        raise ValueError("embedding evidence does not verify against this IFS")
    if evidence.subject != f:
        raise ValueError("evidence certifies a different map")

    ssc = check_ssc(ifs, depth)
    if ssc.status is SSCStatus.VIOLATED:
        raise PreconditionError("strong separation fails: level-1 cells share a point")
    if ssc.status is SSCStatus.UNKNOWN:
        return None

    r = ifs.ratio
    common = ifs.common_orth()
    if common is None:
        if f.ratio != r:
            raise NotHomogeneousOrthogonal(
                "orthogonal parts vary and the ratio differs: powering is unavailable"
            )
        touched = evidence.first_letters(0)
        orths = {ifs.map(i).orth for i in touched}
        if len(orths) != 1 or f.orth not in orths:
            raise NotHomogeneousOrthogonal(
                "orthogonal parts differ on the level-1 cells meeting f(K)"
            )
        k, p = 1, 1
    else:
        rel0 = log_commensurability(r, f.ratio)
        if rel0 is None:
            raise InconsistentResult(
                "certified embedding with incommensurable ratios: unsound evidence or bug"
            )
        bound = lcm(f.orth.order(), common.order())
        t = next(
            t
            for t in range(1, bound + 1)
            if f.orth.power(rel0.k * t) == common.power(rel0.p * t)
        )
        k, p = rel0.k * t, rel0.p * t

    if (k, p) == (1, 1):
        psi, psi_words = ifs, [(i,) for i in ifs.alphabet]
        g = f
    else:
        psi, psi_words = _powered_system(ifs, p, power_cap)
        g = f.power(k)
        assert g.ratio == r**p

    n = chain_level(psi, depth)
    if n is None:
        return None
    if psi.m ** (n - 1) > cells_cap:
        raise ResourceCapExceeded(f"chain level {n} needs {psi.m}^{n - 1} cells")
    cs = chain_decomposition(psi, n, depth)

    # One orbit step per chain: locate g(sample) to find the unique (i, E').
    assignments: list[tuple[int, int, int]] = []
    step: dict[int, tuple[int, int]] = {}
    for e, chain in enumerate(cs.chains):
        x = _chain_sample_point(psi, chain)
        y = g.apply(x)
        letter_word = locate_point(psi, y, 1, depth)
        if letter_word is None:
            return None
        letter = letter_word[0]
        inner = psi.map(letter).inverse().apply(y)
        if n - 1 == 0:
            w2: Word = ()
        else:
            w2 = locate_point(psi, inner, n - 1, depth)
            if w2 is None:
                return None
        e2 = cs.chain_of(w2)
        step[e] = (letter, e2)
        assignments.append((e, letter, e2))

    orbit = []
    for e in range(len(cs.chains)):
        seen = {e: 0}
        seq = [e]
        steps = []
        cur = e
        while True:
            letter, nxt = step[cur]
            steps.append((letter, nxt))
            if nxt in seen:
                cycle = (seen[nxt], len(seq))
                break
            seen[nxt] = len(seq)
            seq.append(nxt)
            cur = nxt
        orbit.append(OrbitTrace(e, tuple(steps), cycle))

    # Verify, cell by exact cell, that g maps each chain onto its image chain.
    matched_all: set[Word] = set()
    for e, letter, e2 in assignments:
        chain, image = cs.chains[e], cs.chains[e2]
        if len(chain) != len(image):
            raise InconsistentResult("chain and image chain have different cell counts")
        matched: set[Word] = set()
        for w in chain:
            comp = g.compose(psi.cylinder(w))
            inner = psi.map(letter).inverse().compose(comp)
            w2 = word_of_cylinder(psi, inner, n - 1)
            if w2 is not None:
                if w2 not in image:
                    raise InconsistentResult("exact cell image escapes the located chain")
                matched.add((letter,) + w2)
                continue
            # Comparison map fixes K: certify it as a unit-ratio embedding.
            q = psi.fixed_points()[w[-1] - 1 if w else 0]
            y = comp.apply(q)
            target = locate_point(psi, y, n, depth)
            if target is None:
                return None
            if target[0] != letter or target[1:] not in image:
                raise InconsistentResult("fallback cell location contradicts the orbit")
            h = psi.cylinder(target).inverse().compose(comp)
            assert h.ratio == Q1
            hcert = certify_embedding(
                h, ifs, max_word_len=max_word_len, max_generators=max_generators
            )
            if hcert is None:
                return None
            matched.add(target)
        if matched != {(letter,) + w2 for w2 in image}:
            raise InconsistentResult("chain image is not onto the located chain")
        matched_all |= matched

    if len(matched_all) != psi.m ** (n - 1):
        raise InconsistentResult("cell count violates the measure identity")

    def expand(w: Word) -> Word:
        return sum((psi_words[c - 1] for c in w), ())

    words = tuple(sorted(expand(w) for w in matched_all))
    cell_union = CellUnion(
        level=p * n,
        words=words,
        source=f"f^{k}(K)" if k > 1 else "f(K)",
    )
    subject = f"f^{k}(K)" if k > 1 else "f(K)"
    conclusion = (
        f"{subject} is the disjoint union of {len(words)} level-{p * n} cells, "
        "hence relatively open in K"
    )
    if k > 1:
        conclusion += "; openness of f(K) follows since some power of f has open image"
    return OpennessCertificate(
        relation=PowerRelation(k, p),
        chain_structure=cs,
        orbit=tuple(orbit),
        assignments=tuple(assignments),
        cell_union=cell_union,
        power_reduction_used=k > 1,
        conclusion=conclusion,
    )
