"""End-to-end machine check that the bundled nine-map system has a
self-embedding with a non-open image.

The pipeline certifies, in order:

 (a) strong separation of the nine maps, with squared gap at least 1/16;
 (b) the exact intertwining f o phi_1 = phi_6 o f;
 (c) the eight exact identities decomposing f on the two four-map blocks:
     a bijection s: {2..5} -> {6..9} with f o phi_i = phi_8 o phi_{s(i)} and
     a bijection s': {6..9} -> {6..9} with f o phi_i = phi_9 o phi_{s'(i)};
 (d) an embedding certificate for f whose generator set is {f} alone;
 (e) the chain structure {1}, {2,3,4,5}, {6,7,8,9} at chain level 2;
 (f) for each n <= nmax, a word-prefix certificate that the unrolled image
     of f misses the cell 6^n 7: every term of
     f(K) = phi_6^{n+1} f(K) u union_{k<=n} phi_6^k(A) carries a prefix in
     {6^{n+1}} u {6^k 8, 6^k 9 : k <= n}, and none of these is prefix-
     compatible with 6^n 7, so separation makes the cells disjoint;
 (g) exact witness points y_n inside phi_6^n phi_7(K) whose squared distance
     to f(x_1) is at most 72/36^n, where x_1 is the fixed point of phi_1.

(f) and (g) together put points of K arbitrarily close to f(x_1) that are
certifiably outside f(K): f(x_1) is not an interior point of f(K).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .chains import chain_decomposition, chain_level
from .embedding import certify_embedding, EmbeddingCertificate
from .exact import Q, Similitude, Vec
from .fixtures import example25_ifs, example25_map
from .ifs import SSCStatus, Word, check_ssc


@dataclass(frozen=True)
class StepResult:
    key: str
    title: str
    ok: bool
    detail: str


@dataclass(frozen=True)
class VerificationReport:
    nmax: int
    steps: tuple[StepResult, ...]
    x1: Vec
    fx1: Vec
    certificate: EmbeddingCertificate | None
    conclusion: str

    @property
    def ok(self) -> bool:
        return all(s.ok for s in self.steps)

    @property
    def first_failure(self) -> StepResult | None:
        return next((s for s in self.steps if not s.ok), None)


def _prefix_compatible(u: Word, v: Word) -> bool:
    """True when one word is a prefix of the other (the cells then nest)."""
    n = min(len(u), len(v))
    return u[:n] == v[:n]


def run_verification(nmax: int = 8, depth: int = 6) -> VerificationReport:
    ifs = example25_ifs()
    f = example25_map()
    phi = ifs.map
    steps: list[StepResult] = []
    x1 = phi(1).fixed_point()
    fx1 = f.apply(x1)
    cert: EmbeddingCertificate | None = None

    # (a) separation
    ssc = check_ssc(ifs, depth)
    ok_a = ssc.status is SSCStatus.CERTIFIED and ssc.gap.lower >= Q(1, 16)
    steps.append(
        StepResult(
            "a",
            "strong separation certified with squared gap >= 1/16",
            ok_a,
            f"status={ssc.status.value}, gap lower bound={ssc.gap.lower if ssc.gap else None}",
        )
    )

    # (b) f phi_1 = phi_6 f
    ok_b = f.compose(phi(1)) == phi(6).compose(f)
    steps.append(StepResult("b", "exact identity f o phi_1 = phi_6 o f", ok_b, ""))

    # (c) block decomposition identities
    sigma: dict[int, int] = {}
    sigma2: dict[int, int] = {}
    for i in range(2, 6):
        lhs = f.compose(phi(i))
        sigma[i] = next((j for j in range(6, 10) if lhs == phi(8).compose(phi(j))), 0)
    for i in range(6, 10):
        lhs = f.compose(phi(i))
        sigma2[i] = next((j for j in range(6, 10) if lhs == phi(9).compose(phi(j))), 0)
    spot = Similitude(
        Q(1, 36), phi(2).orth, Vec(Q(35, 24), Q(-50, 24))
    )
    ok_c = (
        sorted(sigma.values()) == [6, 7, 8, 9]
        and sorted(sigma2.values()) == [6, 7, 8, 9]
        and f.compose(phi(2)) == spot
        and f.compose(phi(2)) == phi(8).compose(phi(7))
    )
    steps.append(
        StepResult(
            "c",
            "eight exact identities: f maps each block onto a rotated block",
            ok_c,
            f"s={sigma}, s'={sigma2}, f o phi_2 = x/36 + (35/24, -50/24)",
        )
    )

    # (d) embedding certificate with a single generator
    cert = certify_embedding(f, ifs)
    ok_d = cert is not None and len(cert.generators) == 1 and cert.verify(ifs)
    steps.append(
        StepResult(
            "d",
            "embedding certificate with generator set {f}",
            ok_d,
            f"generators={0 if cert is None else len(cert.generators)}",
        )
    )

    # (e) chains
    n_level = chain_level(ifs, depth=min(depth, 2))
    cs = chain_decomposition(ifs, n_level, depth=min(depth, 2)) if n_level else None
    want = (((1,),), ((2,), (3,), (4,), (5,)), ((6,), (7,), (8,), (9,)))
    ok_e = n_level == 2 and cs is not None and cs.chains == want
    steps.append(
        StepResult(
            "e",
            "chain structure {1}, {2,3,4,5}, {6,7,8,9} at level 2",
            ok_e,
            f"n={n_level}, chains={None if cs is None else cs.chains}",
        )
    )

    if nmax >= 1:
        # (f) prefix-disjointness certificates, one per n
        ok_f = ok_b and ok_c and ok_d
        detail_f = []
        for n in range(1, nmax + 1):
            target = (6,) * n + (7,)
            terms = [(6,) * (n + 1)]
            terms += [(6,) * k + (8,) for k in range(n + 1)]
            terms += [(6,) * k + (9,) for k in range(n + 1)]
            clash = [t for t in terms if _prefix_compatible(t, target)]
            if clash:
                ok_f = False
                detail_f.append(f"n={n}: prefix clash {clash}")
        steps.append(
            StepResult(
                "f",
                f"f(K) misses phi_6^n phi_7(K) for every n <= {nmax} (prefix certificates)",
                ok_f,
                "; ".join(detail_f) if detail_f else f"{nmax} certificates, no prefix clash",
            )
        )

        # (g) witnesses approaching f(x1)
        q7 = phi(7).fixed_point()
        base = fx1.sqdist(q7)
        ok_g = fx1 == phi(6).fixed_point()
        detail_g = []
        y = q7
        for n in range(1, nmax + 1):
            y = phi(6).apply(y)  # y = phi_6^n(fix phi_7), a point of phi_6^n phi_7(K)
            d2 = fx1.sqdist(y)
            bound = Q(72) / Q(36) ** n
            if d2 != base / Q(36) ** n or d2 > bound:
                ok_g = False
                detail_g.append(f"n={n}: {d2} > {bound}")
        steps.append(
            StepResult(
                "g",
                f"exact witnesses y_n with |y_n - f(x_1)|^2 <= 72/36^n, n <= {nmax}",
                ok_g,
                "; ".join(detail_g)
                if detail_g
                else f"witness squared distance at n={nmax}: {base}/36^{nmax}",
            )
        )

    ok_all = all(s.ok for s in steps)
    conclusion = (
        "f embeds K in itself but f(x_1) is not an interior point of f(K): "
        "every neighborhood of f(x_1) meets cells certifiably disjoint from f(K)"
        if ok_all and nmax >= 1
        else ("all requested steps passed" if ok_all else "verification FAILED")
    )
    return VerificationReport(
        nmax=nmax,
        steps=tuple(steps),
        x1=x1,
        fx1=fx1,
        certificate=cert,
        conclusion=conclusion,
    )
