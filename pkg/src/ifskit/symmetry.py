"""Symmetry decision for 1D attractors with two opposite-orientation IFSs.

Given {rx + a_i} and {-rx + b_j} claimed to generate the same attractor S
with strong separation, the decision verifies every hypothesis it can
(counts, separation, hull agreement, same attractor), checks the endpoint
identities b_i - r = a_i in hull-normalized coordinates, and emits a
reflection certificate: exact identities pairing g o phi_i with the psi maps
for g(x) = -x + 1, which together with the certified attractor equality give
g(S) = S, i.e. -S = S + c with c = -(A + B) in original coordinates.

The underlying theorem is used as a refutation principle only: a failed check
is reported as counterevidence against the weakest verified hypothesis, never
as a disproof of the theorem.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .embedding import EmbeddingCertificate, certify_embedding
from .exact import Q0, Q1, SignedPermutation, Similitude, Vec
from .ifs import IFS, SSCStatus, check_ssc, image_gap_lower


@dataclass(frozen=True)
class SymmetryProblem:
    """Two 1D homogeneous IFSs of opposite orientation and equal ratio."""

    phi: IFS
    psi: IFS

    def validate(self) -> str | None:
        """None when structurally well-formed, else a description of the flaw."""
        if self.phi.dim != 1 or self.psi.dim != 1:
            return "both systems must be one-dimensional"
        if not (self.phi.homogeneous and self.psi.homogeneous):
            return "both systems must be homogeneous"
        if any(s.orth.signs[0] != 1 for s in self.phi.maps):
            return "phi system must be orientation-preserving"
        if any(s.orth.signs[0] != -1 for s in self.psi.maps):
            return "psi system must be orientation-reversing"
        if self.phi.ratio != self.psi.ratio:
            return "ratio magnitudes differ"
        return None


def normalize_hull(ifs: IFS) -> tuple[IFS, tuple[Fraction, Fraction]]:
    """Exact convex hull [A, B] of the attractor plus the conjugated system.

    The hull endpoints satisfy A = min_i L_i(A, B), B = max_i U_i(A, B) with
    L_i, U_i the linear endpoint images of [A, B] under phi_i. Each choice of
    attaining indices gives a 2x2 linear system; the consistent solution is
    the hull (the endpoint operator is an r-contraction, so it is unique).
    Returns the system conjugated by the affine map sending [A, B] to [0, 1].
    """
    if ifs.dim != 1:
        raise ValueError("hull normalization is one-dimensional")
    solutions = []
    for lo_map in ifs.maps:
        for hi_map in ifs.maps:
            # A = lower end of lo_map image, B = upper end of hi_map image.
            sol = _solve_endpoint_pair(lo_map, hi_map)
            if sol is None:
                continue
            a, b = sol
            if a > b:
                continue
            lows = [_interval_image(s, a, b)[0] for s in ifs.maps]
            highs = [_interval_image(s, a, b)[1] for s in ifs.maps]
            if a == min(lows) and b == max(highs):
                solutions.append((a, b))
    if not solutions:
        raise RuntimeError("endpoint case analysis found no consistent hull")
    a, b = solutions[0]
    assert all(sol == (a, b) for sol in solutions)
    if a == b:
        raise ValueError("degenerate hull: attractor is a single point")
    scale = Q1 / (b - a)
    t = Similitude(scale, SignedPermutation.identity(1), Vec(-a * scale))
    conj = IFS([t.compose(s).compose(t.inverse()) for s in ifs.maps])
    return conj, (a, b)


def _interval_image(s: Similitude, a: Fraction, b: Fraction) -> tuple[Fraction, Fraction]:
    lo = s.apply(Vec(a)).coords[0]
    hi = s.apply(Vec(b)).coords[0]
    return (lo, hi) if lo <= hi else (hi, lo)


def _solve_endpoint_pair(lo_map: Similitude, hi_map: Similitude):
    """Solve A = lower end of lo_map([A,B]), B = upper end of hi_map([A,B])."""
    r1, s1, a1 = lo_map.ratio, lo_map.orth.signs[0], lo_map.trans.coords[0]
    r2, s2, a2 = hi_map.ratio, hi_map.orth.signs[0], hi_map.trans.coords[0]
    # A = r1*A + a1 (s1=+1) or -r1*B + a1 (s1=-1); B symmetric.
    # Write as A = cAA*A + cAB*B + a1, B = cBA*A + cBB*B + a2.
    cAA, cAB = (r1, Q0) if s1 == 1 else (Q0, -r1)
    cBA, cBB = (Q0, r2) if s2 == 1 else (-r2, Q0)
    det = (Q1 - cAA) * (Q1 - cBB) - cAB * cBA
    if det == 0:
        return None
    a = ((Q1 - cBB) * a1 + cAB * a2) / det
    b = (cBA * a1 + (Q1 - cAA) * a2) / det
    return a, b


class SameAttractorStatus(Enum):
    CERTIFIED = "certified"
    REFUTED = "refuted"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class SameAttractorEvidence:
    """Certificate that the psi system generates the phi attractor.

    Embedding relations prove each psi_j maps S_phi into S_phi; the
    disjointness bounds prove the psi_j images of S_phi are pairwise
    disjoint. The m image pieces each carry a 1/m share of the measure, so
    their disjoint union exhausts S_phi and S_phi is the psi attractor.
    """

    status: SameAttractorStatus
    reason: str
    embedding: EmbeddingCertificate | None = None
    disjointness: tuple[tuple[int, int, Fraction], ...] = ()


def same_attractor_check(
    problem: SymmetryProblem, depth: int = 6, max_word_len: int = 8, max_generators: int = 16
) -> SameAttractorEvidence:
    """Certify S_psi = S_phi for a structurally valid problem.

    Assumes both systems already SSC-certified and hulls already matched (the
    caller's responsibility; symmetry_decision does both).
    """
    phi, psi = problem.phi, problem.psi
    if psi.m != phi.m:
        return SameAttractorEvidence(
            SameAttractorStatus.REFUTED,
            f"map counts differ ({psi.m} vs {phi.m}), the count identity fails",
        )
    cert = certify_embedding(
        psi.maps[0],
        phi,
        extra_generators=tuple(psi.maps[1:]),
        max_word_len=max_word_len,
        max_generators=max_generators,
    )
    if cert is None:
        return SameAttractorEvidence(
            SameAttractorStatus.UNKNOWN, "no embedding certificate within budget"
        )
    disjointness = []
    for i in range(psi.m):
        for j in range(i + 1, psi.m):
            gap = image_gap_lower(phi, psi.maps[i], psi.maps[j], depth)
            if gap <= Q0:
                return SameAttractorEvidence(
                    SameAttractorStatus.UNKNOWN,
                    f"could not separate psi_{i + 1} and psi_{j + 1} images at depth {depth}",
                    embedding=cert,
                )
            disjointness.append((i + 1, j + 1, gap))
    return SameAttractorEvidence(
        SameAttractorStatus.CERTIFIED,
        "psi maps embed the attractor with pairwise disjoint images",
        embedding=cert,
        disjointness=tuple(disjointness),
    )


@dataclass(frozen=True)
class SymmetryResult:
    c: Fraction
    hull: tuple[Fraction, Fraction]
    endpoint_table: tuple[tuple[Fraction, Fraction], ...]  # (a_i, b_i - r) normalized
    reflection_pairs: tuple[tuple[int, int], ...]
    evidence: SameAttractorEvidence


@dataclass(frozen=True)
class CounterevidenceReport:
    """A verified-hypothesis pipeline failed at the named check."""

    failed_check: str
    detail: str
    passed: tuple[str, ...]


def symmetry_decision(
    problem: SymmetryProblem, depth: int = 6, max_word_len: int = 8, max_generators: int = 16
) -> SymmetryResult | CounterevidenceReport | None:
    """Full pipeline: hypotheses, endpoint identities, reflection certificate.

    Success returns the constant c with -S = S + c (c = -(A+B) for hull
    [A, B]). Any exact check that fails produces a CounterevidenceReport
    naming the failed check and listing what held before it. None only for
    exhausted budgets.
    """
    passed: list[str] = []

    flaw = problem.validate()
    if flaw is not None:
        return CounterevidenceReport("structure", flaw, tuple(passed))
    passed.append("structure")

    if problem.psi.m != problem.phi.m:
        return CounterevidenceReport(
            "map count",
            f"m'={problem.psi.m} differs from m={problem.phi.m}",
            tuple(passed),
        )
    passed.append("map count")

    for name, system in (("phi", problem.phi), ("psi", problem.psi)):
        ssc = check_ssc(system, depth)
        if ssc.status is SSCStatus.VIOLATED:
            return CounterevidenceReport(
                "ssc", f"{name} system violates strong separation", tuple(passed)
            )
        if ssc.status is SSCStatus.UNKNOWN:
            return None
    passed.append("ssc")

    phi_norm, phi_hull = normalize_hull(problem.phi)
    psi_norm, psi_hull = normalize_hull(problem.psi)
    if phi_hull != psi_hull:
        return CounterevidenceReport(
            "hull",
            "attractor hulls differ: "
            f"[{phi_hull[0]}, {phi_hull[1]}] vs [{psi_hull[0]}, {psi_hull[1]}]",
            tuple(passed),
        )
    passed.append("hull")

    r = problem.phi.ratio
    phi_sorted = IFS(sorted(phi_norm.maps, key=lambda s: s.trans.coords[0]))
    psi_sorted = IFS(sorted(psi_norm.maps, key=lambda s: s.trans.coords[0]))
    a = [s.trans.coords[0] for s in phi_sorted.maps]
    b = [s.trans.coords[0] for s in psi_sorted.maps]
    if a[0] != Q0 or b[0] != r:
        return CounterevidenceReport(
            "left endpoint",
            f"normalized a_1={a[0]} (want 0), b_1={b[0]} (want {r})",
            tuple(passed),
        )
    passed.append("left endpoint")

    norm_problem = SymmetryProblem(phi_sorted, psi_sorted)
    evidence = same_attractor_check(norm_problem, depth, max_word_len, max_generators)
    if evidence.status is SameAttractorStatus.UNKNOWN:
        return None
    if evidence.status is SameAttractorStatus.REFUTED:
        return CounterevidenceReport("same attractor", evidence.reason, tuple(passed))
    passed.append("same attractor")

    table = tuple((a[i], b[i] - r) for i in range(len(a)))
    bad = [i for i, (ai, aprime) in enumerate(table) if ai != aprime]
    if bad:
        i = bad[0]
        return CounterevidenceReport(
            "endpoint identities",
            f"a'_{i + 1} = {table[i][1]} differs from a_{i + 1} = {table[i][0]}",
            tuple(passed),
        )
    passed.append("endpoint identities")

    g = Similitude(Q1, SignedPermutation((0,), (-1,)), Vec(Q1))
    pairs = []
    for i, phi_i in enumerate(phi_sorted.maps):
        lhs = g.compose(phi_i)
        j = next((j for j, psi_j in enumerate(psi_sorted.maps) if lhs == psi_j), None)
        if j is None:
            return CounterevidenceReport(
                "reflection certificate",
                f"g o phi_{i + 1} matches no psi map",
                tuple(passed),
            )
        pairs.append((i + 1, j + 1))
    if sorted(j for _, j in pairs) != list(range(1, len(a) + 1)):
        return CounterevidenceReport(
            "reflection certificate", "pairing is not a bijection", tuple(passed)
        )

    A, B = phi_hull
    return SymmetryResult(
        c=-(A + B),
        hull=phi_hull,
        endpoint_table=table,
        reflection_pairs=tuple(pairs),
        evidence=evidence,
    )
