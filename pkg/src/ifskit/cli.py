"""Command-line front end.

Subcommands: check-ssc, gap, chains, dimension, render, embed, openness,
commensurability, symmetry, example25-verify. Inputs are file paths or
bundled fixtures addressed as @name (see ifskit.fixtures). Exit codes:

    0  certified / success
    1  refuted / violated
    2  unknown (budget exhausted)
    3  precondition failure
    4  counterevidence
    64 usage or parse error
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field

from . import fixtures, serialize
from .chains import chain_decomposition, chain_level, chains_ordered_1d
from .embedding import (
    NotHomogeneousOrthogonal,
    PreconditionError,
    certify_embedding,
    log_commensurability,
    openness_decision,
    relation_search,
)
from .ifs import IFS, SSCStatus, check_ssc, dimension, min_gap, word_to_str
from .render import export_figure
from .serialize import ParseError, rational_from_str, rational_to_str
from .symmetry import CounterevidenceReport, SymmetryResult, symmetry_decision
from .verify25 import run_verification

EXIT_OK = 0
EXIT_REFUTED = 1
EXIT_UNKNOWN = 2
EXIT_PRECONDITION = 3
EXIT_COUNTEREVIDENCE = 4
EXIT_USAGE = 64


@dataclass
class RunReport:
    command: str
    inputs: dict
    results: dict
    certificates: dict | None
    exit_status: int
    timings: dict = field(default_factory=dict)

    def to_obj(self) -> dict:
        obj = {
            "command": self.command,
            "inputs": self.inputs,
            "results": self.results,
            "exit_status": self.exit_status,
            "timings": self.timings,
        }
        if self.certificates is not None:
            obj["certificates"] = self.certificates
        return obj


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _load_ifs(arg: str) -> IFS:
    if arg.startswith("@"):
        obj = fixtures.resolve(arg[1:])
        if not isinstance(obj, IFS):
            raise ParseError(f"fixture {arg} is not an IFS")
        return obj
    return serialize.ifs_from_obj(serialize.load_json(arg))


def _load_map(arg: str):
    if arg.startswith("@"):
        obj = fixtures.resolve(arg[1:])
        from .exact import Similitude

        if not isinstance(obj, Similitude):
            raise ParseError(f"fixture {arg} is not a map")
        return obj
    return serialize.similitude_from_obj(serialize.load_json(arg))


def _load_problem(arg: str):
    if arg.startswith("@"):
        obj = fixtures.resolve(arg[1:])
        from .symmetry import SymmetryProblem

        if not isinstance(obj, SymmetryProblem):
            raise ParseError(f"fixture {arg} is not a symmetry problem")
        return obj
    return serialize.problem_from_obj(serialize.load_json(arg))


def _ifs_digest(ifs: IFS) -> str:
    return serialize.digest(serialize.ifs_to_obj(ifs))


def _emit(report: RunReport, fmt: str) -> int:
    if fmt == "structured":
        print(json.dumps(report.to_obj(), sort_keys=True, indent=2))
    else:
        print(f"command: {report.command}")
        for key, val in report.results.items():
            if key == "steps":
                for s in val:
                    mark = "PASS" if s["ok"] else "FAIL"
                    print(f"[{mark}] ({s['step']}) {s['title']}")
                    if s["detail"]:
                        print(f"       {s['detail']}")
            else:
                print(f"{key}: {val}")
        print(f"exit: {report.exit_status}")
    return report.exit_status


def _frac(q) -> str:
    return rational_to_str(q)


def cmd_check_ssc(args) -> RunReport:
    ifs = _load_ifs(args.ifs)
    res = check_ssc(ifs, max_depth=args.depth)
    results: dict = {"status": res.status.value, "depth": res.depth}
    if res.status is SSCStatus.CERTIFIED:
        results["delta_sq_lower"] = _frac(res.gap.lower)
        results["delta_sq_upper"] = _frac(res.gap.upper)
        status = EXIT_OK
    elif res.status is SSCStatus.VIOLATED:
        u, v, p = res.witness
        results["witness_words"] = [word_to_str(u, ifs.m), word_to_str(v, ifs.m)]
        results["witness_point"] = [_frac(c) for c in p.coords]
        status = EXIT_REFUTED
    else:
        status = EXIT_UNKNOWN
    return RunReport(
        "check-ssc", {"ifs": _ifs_digest(ifs)}, results, None, status
    )


def cmd_gap(args) -> RunReport:
    ifs = _load_ifs(args.ifs)
    g = min_gap(ifs, args.depth)
    results = {
        "delta_sq_lower": _frac(g.lower),
        "delta_sq_upper": _frac(g.upper),
        "depth": g.depth,
    }
    return RunReport("gap", {"ifs": _ifs_digest(ifs)}, results, None, EXIT_OK)


def cmd_chains(args) -> RunReport:
    ifs = _load_ifs(args.ifs)
    if not ifs.homogeneous:
        raise PreconditionError("chain decomposition requires a homogeneous IFS")
    n = args.n if args.n is not None else chain_level(ifs, args.depth)
    if n is None:
        return RunReport(
            "chains",
            {"ifs": _ifs_digest(ifs)},
            {"status": "unknown", "why": "separation bounds too loose at this depth"},
            None,
            EXIT_UNKNOWN,
        )
    cs = chain_decomposition(ifs, n, args.depth)
    results = {
        "n": cs.n,
        "level": cs.level,
        "threshold_sq": _frac(cs.threshold_sq),
        "chains": [[word_to_str(w, ifs.m) for w in chain] for chain in cs.chains],
        "ambiguous_pairs": [
            [word_to_str(u, ifs.m), word_to_str(v, ifs.m)] for u, v in cs.flags
        ],
    }
    if ifs.dim == 1:
        ordered = chains_ordered_1d(cs, ifs, args.depth)
        results["ordered"] = [
            [[word_to_str(w, ifs.m) for w in chain], [_frac(lo), _frac(hi)]]
            for chain, (lo, hi) in ordered
        ]
    certs = {
        "separation": {
            f"{word_to_str(u, ifs.m)}|{word_to_str(v, ifs.m)}": _frac(lb)
            for (u, v), lb in sorted(cs.separation.items())
        }
    }
    return RunReport("chains", {"ifs": _ifs_digest(ifs)}, results, certs, EXIT_OK)


def cmd_dimension(args) -> RunReport:
    ifs = _load_ifs(args.ifs)
    if not ifs.homogeneous:
        raise PreconditionError("similarity dimension needs a homogeneous IFS")
    ssc = check_ssc(ifs, args.depth)
    if ssc.status is SSCStatus.VIOLATED:
        return RunReport(
            "dimension",
            {"ifs": _ifs_digest(ifs)},
            {"status": "violated", "why": "level-1 cells share an exact point"},
            None,
            EXIT_REFUTED,
        )
    if ssc.status is SSCStatus.UNKNOWN:
        return RunReport(
            "dimension",
            {"ifs": _ifs_digest(ifs)},
            {"status": "unknown", "why": "separation not certified at this depth"},
            None,
            EXIT_UNKNOWN,
        )
    info = dimension(ifs)
    results = {
        "m": info.m,
        "r": _frac(info.r),
        "alpha_display": f"{info.display:.6f}",
        "identity": f"{info.m} * r^alpha = 1",
    }
    return RunReport("dimension", {"ifs": _ifs_digest(ifs)}, results, None, EXIT_OK)


def cmd_render(args) -> RunReport:
    ifs = _load_ifs(args.ifs)
    svg = export_figure(ifs, args.depth, args.style)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(svg)
    results = {"out": args.out, "bytes": len(svg.encode()), "style": args.style}
    return RunReport("render", {"ifs": _ifs_digest(ifs)}, results, None, EXIT_OK)


def cmd_embed(args) -> RunReport:
    ifs = _load_ifs(args.ifs)
    f = _load_map(args.map)
    cert = certify_embedding(f, ifs, max_word_len=args.budget)
    inputs = {"ifs": _ifs_digest(ifs), "map": serialize.digest(serialize.similitude_to_obj(f))}
    if cert is None:
        return RunReport(
            "embed",
            inputs,
            {"status": "unknown", "why": "no relation system within budget"},
            None,
            EXIT_UNKNOWN,
        )
    obj = serialize.embedding_cert_to_obj(cert)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(obj, fh, sort_keys=True, indent=2)
    results = {
        "status": "certified",
        "generators": len(cert.generators),
        "relations": len(cert.relations),
        "digest": obj["digest"],
    }
    if args.out:
        results["out"] = args.out
    return RunReport("embed", inputs, results, {"embedding": obj}, EXIT_OK)


def cmd_openness(args) -> RunReport:
    ifs = _load_ifs(args.ifs)
    f = _load_map(args.map)
    inputs = {"ifs": _ifs_digest(ifs), "map": serialize.digest(serialize.similitude_to_obj(f))}
    if args.evidence:
        cert = serialize.embedding_cert_from_obj(serialize.load_json(args.evidence))
    else:
        cert = certify_embedding(f, ifs, max_word_len=args.budget)
        if cert is None:
            return RunReport(
                "openness",
                inputs,
                {"status": "unknown", "why": "no embedding evidence within budget"},
                None,
                EXIT_UNKNOWN,
            )
    oc = openness_decision(f, ifs, cert, depth=args.depth, max_word_len=args.budget)
    if oc is None:
        return RunReport(
            "openness",
            inputs,
            {"status": "unknown", "why": "budget exhausted before the cells were verified"},
            None,
            EXIT_UNKNOWN,
        )
    obj = serialize.openness_cert_to_obj(oc)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(obj, fh, sort_keys=True, indent=2)
    results = {
        "status": "open",
        "k": oc.relation.k,
        "p": oc.relation.p,
        "cell_level": oc.cell_union.level,
        "cells": [word_to_str(w, ifs.m) for w in oc.cell_union.words],
        "conclusion": oc.conclusion,
    }
    return RunReport("openness", inputs, results, {"openness": obj}, EXIT_OK)


def cmd_commensurability(args) -> RunReport:
    r = rational_from_str(args.r)
    rf = rational_from_str(args.rf)
    rel = log_commensurability(r, rf)
    inputs = {"r": args.r, "rf": args.rf}
    if rel is None:
        return RunReport(
            "commensurability",
            inputs,
            {"status": "incommensurable", "why": "prime exponent vectors not proportional"},
            None,
            EXIT_REFUTED,
        )
    results = {
        "status": "commensurable",
        "k": rel.k,
        "p": rel.p,
        "identity": f"rf^{rel.k} = r^{rel.p}",
    }
    return RunReport("commensurability", inputs, results, None, EXIT_OK)


def cmd_symmetry(args) -> RunReport:
    problem = _load_problem(args.problem)
    inputs = {"problem": serialize.digest(serialize.problem_to_obj(problem))}
    res = symmetry_decision(problem, depth=args.depth, max_word_len=args.budget)
    if res is None:
        return RunReport(
            "symmetry",
            inputs,
            {"status": "unknown", "why": "budget exhausted"},
            None,
            EXIT_UNKNOWN,
        )
    if isinstance(res, CounterevidenceReport):
        return RunReport(
            "symmetry",
            inputs,
            {
                "status": "counterevidence",
                "failed_check": res.failed_check,
                "detail": res.detail,
                "passed": list(res.passed),
            },
            None,
            EXIT_COUNTEREVIDENCE,
        )
    results = {
        "status": "symmetric",
        "c": _frac(res.c),
        "hull": [_frac(res.hull[0]), _frac(res.hull[1])],
        "endpoint_table": [[_frac(a), _frac(ap)] for a, ap in res.endpoint_table],
        "reflection_pairs": [list(p) for p in res.reflection_pairs],
        "conclusion": f"-S = S + ({_frac(res.c)})",
    }
    certs = None
    if res.evidence.embedding is not None:
        certs = {"same_attractor": serialize.embedding_cert_to_obj(res.evidence.embedding)}
    return RunReport("symmetry", inputs, results, certs, EXIT_OK)


def cmd_example25_verify(args) -> RunReport:
    rep = run_verification(nmax=args.nmax, depth=args.depth)
    results = {
        "nmax": rep.nmax,
        "x1": [_frac(c) for c in rep.x1.coords],
        "f_x1": [_frac(c) for c in rep.fx1.coords],
        "steps": [
            {"step": s.key, "ok": s.ok, "title": s.title, "detail": s.detail}
            for s in rep.steps
        ],
        "conclusion": rep.conclusion,
    }
    certs = None
    if rep.certificate is not None:
        certs = {"embedding": serialize.embedding_cert_to_obj(rep.certificate)}
    if rep.ok:
        status = EXIT_OK
    else:
        fail = rep.first_failure
        results["failed_step"] = fail.key
        status = EXIT_REFUTED
    return RunReport("example25-verify", {"nmax": str(args.nmax)}, results, certs, status)


def build_parser() -> _Parser:
    parser = _Parser(
        prog="ifskit",
        description="Exact decision procedures for self-similar sets.",
        epilog=(
            "Inputs are JSON files or bundled fixtures (@example25, @example25-f, "
            "@cantor, @cantor-f12, @interval-osc, @near-touch, @cantor-pair, "
            "@fifth-three-pair, @broken-pair)."
        ),
    )
    sub = parser.add_subparsers(dest="cmd", required=True)

    def common(p, depth=True, budget=False):
        if depth:
            p.add_argument("--depth", type=int, default=6, help="refinement depth budget")
        if budget:
            p.add_argument("--budget", type=int, default=8, help="search word-length budget")
        p.add_argument(
            "--format", choices=("text", "structured"), default="text", help="report format"
        )

    p = sub.add_parser("check-ssc", help="certify or refute strong separation")
    p.add_argument("ifs")
    common(p)
    p.set_defaults(fn=cmd_check_ssc)

    p = sub.add_parser("gap", help="certified bounds for the least cell gap")
    p.add_argument("ifs")
    common(p)
    p.set_defaults(fn=cmd_gap)

    p = sub.add_parser("chains", help="threshold-connected chain decomposition")
    p.add_argument("ifs")
    p.add_argument("--n", type=int, default=None, help="override the computed chain level")
    common(p)
    p.set_defaults(fn=cmd_chains)

    p = sub.add_parser("dimension", help="similarity dimension (homogeneous, separated)")
    p.add_argument("ifs")
    common(p)
    p.set_defaults(fn=cmd_dimension)

    p = sub.add_parser("render", help="write an SVG figure of the cover or points")
    p.add_argument("ifs")
    p.add_argument("--style", choices=("boxes", "points"), default="boxes")
    p.add_argument("--out", required=True)
    common(p)
    p.set_defaults(fn=cmd_render)

    p = sub.add_parser("embed", help="search for an embedding certificate")
    p.add_argument("ifs")
    p.add_argument("--map", required=True, dest="map")
    p.add_argument("--out", default=None, help="write the certificate document here")
    common(p, budget=True)
    p.set_defaults(fn=cmd_embed)

    p = sub.add_parser("openness", help="decide openness of the embedded image")
    p.add_argument("ifs")
    p.add_argument("--map", required=True, dest="map")
    p.add_argument("--evidence", default=None, help="embedding certificate file")
    p.add_argument("--out", default=None, help="write the openness certificate here")
    common(p, budget=True)
    p.set_defaults(fn=cmd_openness)

    p = sub.add_parser("commensurability", help="decide r_f^k = r^p exactly")
    p.add_argument("r")
    p.add_argument("rf")
    common(p, depth=False)
    p.set_defaults(fn=cmd_commensurability)

    p = sub.add_parser("symmetry", help="1D two-system symmetry decision")
    p.add_argument("problem")
    common(p, budget=True)
    p.set_defaults(fn=cmd_symmetry)

    p = sub.add_parser("example25-verify", help="run the bundled counterexample pipeline")
    p.add_argument("--nmax", type=int, default=8)
    common(p)
    p.set_defaults(fn=cmd_example25_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    start = time.perf_counter()
    try:
        report = args.fn(args)
    except ParseError as exc:
        print(f"ifskit: parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except KeyError as exc:
        print(f"ifskit: {exc.args[0]}", file=sys.stderr)
        return EXIT_USAGE
    except NotHomogeneousOrthogonal as exc:
        print(
            f"ifskit: precondition failure: {exc}\n"
            "note: with varying orthogonal parts no openness claim is made; the "
            "bundled nine-map fixture (@example25) embeds with an image that is "
            "certifiably not open (run: ifskit example25-verify).",
            file=sys.stderr,
        )
        return EXIT_PRECONDITION
    except PreconditionError as exc:
        print(f"ifskit: precondition failure: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except ValueError as exc:
        print(f"ifskit: invalid input: {exc}", file=sys.stderr)
        return EXIT_USAGE
    report.timings["seconds"] = round(time.perf_counter() - start, 6)
    return _emit(report, args.format)


if __name__ == "__main__":
    raise SystemExit(main())
