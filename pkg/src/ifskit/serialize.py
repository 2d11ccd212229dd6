"""File formats and canonical serialization.

All numbers in files use the exact text encoding "p/q" (or "p" for
integers). The IFS format is:

    { "dimension": d,
      "maps": [ { "ratio": "1/6",
                  "orth": {"perm": [1, 0], "signs": [-1, 1]},
                  "trans": ["-15/8", "15/8"] }, ... ] }

with an optional "box" {"lower": [...], "upper": [...]} that is verified as
an invariant box when present. Symmetry problems are {"phi": IFS,
"psi": IFS}. Certificates serialize to plain JSON objects with a sha256
digest over their canonical form so they can be re-verified without
re-searching.
"""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction

from .embedding import EmbeddingCertificate, OpennessCertificate, PowerRelation
from .exact import Box, Q, SignedPermutation, Similitude, Vec
from .ifs import IFS, Word
from .symmetry import SymmetryProblem


class ParseError(ValueError):
    pass


def rational_to_str(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def rational_from_str(s) -> Fraction:
    if isinstance(s, int):
        return Q(s)
    if not isinstance(s, str):
        raise ParseError(f"expected rational string, got {s!r}")
    try:
        if "/" in s:
            num, den = s.split("/")
            return Q(int(num), int(den))
        return Q(int(s))
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad rational {s!r}: {exc}") from exc


def vec_to_obj(v: Vec) -> list[str]:
    return [rational_to_str(c) for c in v.coords]


def vec_from_obj(obj) -> Vec:
    if not isinstance(obj, list) or not obj:
        raise ParseError(f"expected coordinate list, got {obj!r}")
    return Vec(*(rational_from_str(c) for c in obj))


def orth_to_obj(o: SignedPermutation) -> dict:
    return {"perm": list(o.perm), "signs": list(o.signs)}


def orth_from_obj(obj) -> SignedPermutation:
    try:
        return SignedPermutation(tuple(obj["perm"]), tuple(obj["signs"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad signed permutation {obj!r}: {exc}") from exc


def similitude_to_obj(s: Similitude) -> dict:
    return {
        "ratio": rational_to_str(s.ratio),
        "orth": orth_to_obj(s.orth),
        "trans": vec_to_obj(s.trans),
    }


def similitude_from_obj(obj) -> Similitude:
    if not isinstance(obj, dict):
        raise ParseError(f"expected map object, got {obj!r}")
    try:
        return Similitude(
            rational_from_str(obj["ratio"]),
            orth_from_obj(obj["orth"]),
            vec_from_obj(obj["trans"]),
        )
    except KeyError as exc:
        raise ParseError(f"map object missing field {exc}") from exc
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def box_to_obj(b: Box) -> dict:
    return {"lower": vec_to_obj(b.lower), "upper": vec_to_obj(b.upper)}


def box_from_obj(obj) -> Box:
    try:
        return Box(vec_from_obj(obj["lower"]), vec_from_obj(obj["upper"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad box {obj!r}: {exc}") from exc


def ifs_to_obj(ifs: IFS) -> dict:
    return {
        "dimension": ifs.dim,
        "maps": [similitude_to_obj(s) for s in ifs.maps],
    }


def ifs_from_obj(obj) -> IFS:
    if not isinstance(obj, dict):
        raise ParseError(f"expected IFS object, got {obj!r}")
    try:
        maps = [similitude_from_obj(m) for m in obj["maps"]]
    except KeyError as exc:
        raise ParseError(f"IFS object missing field {exc}") from exc
    box = box_from_obj(obj["box"]) if "box" in obj else None
    try:
        ifs = IFS(maps, box=box)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc
    if "dimension" in obj and obj["dimension"] != ifs.dim:
        raise ParseError(
            f"declared dimension {obj['dimension']} does not match maps ({ifs.dim})"
        )
    return ifs


def problem_to_obj(problem: SymmetryProblem) -> dict:
    return {"phi": ifs_to_obj(problem.phi), "psi": ifs_to_obj(problem.psi)}


def problem_from_obj(obj) -> SymmetryProblem:
    if not isinstance(obj, dict) or "phi" not in obj or "psi" not in obj:
        raise ParseError("symmetry problem needs 'phi' and 'psi' systems")
    return SymmetryProblem(ifs_from_obj(obj["phi"]), ifs_from_obj(obj["psi"]))


def word_to_obj(w: Word) -> list[int]:
    return list(w)


def embedding_cert_to_obj(cert: EmbeddingCertificate) -> dict:
    relations = [
        {
            "generator": gi,
            "letter": letter,
            "word": word_to_obj(word),
            "target": target,
        }
        for (gi, letter), (word, target) in sorted(cert.relations.items())
    ]
    payload = {
        "subject": similitude_to_obj(cert.subject),
        "generators": [similitude_to_obj(g) for g in cert.generators],
        "relations": relations,
    }
    payload["digest"] = digest(payload)
    return payload


def embedding_cert_from_obj(obj) -> EmbeddingCertificate:
    try:
        subject = similitude_from_obj(obj["subject"])
        generators = tuple(similitude_from_obj(g) for g in obj["generators"])
        relations = {
            (rel["generator"], rel["letter"]): (tuple(rel["word"]), rel["target"])
            for rel in obj["relations"]
        }
    except (KeyError, TypeError) as exc:
        raise ParseError(f"bad embedding certificate: {exc}") from exc
    return EmbeddingCertificate(subject, generators, relations)


def openness_cert_to_obj(cert: OpennessCertificate) -> dict:
    cs = cert.chain_structure
    payload = {
        "power": {"k": cert.relation.k, "p": cert.relation.p},
        "chain_level": cs.n,
        "chains": [[word_to_obj(w) for w in chain] for chain in cs.chains],
        "chain_flags": [[word_to_obj(u), word_to_obj(v)] for u, v in cs.flags],
        "orbit": [
            {
                "start": tr.start,
                "steps": [list(step) for step in tr.steps],
                "cycle": list(tr.cycle),
            }
            for tr in cert.orbit
        ],
        "assignments": [list(a) for a in cert.assignments],
        "cell_level": cert.cell_union.level,
        "cells": [word_to_obj(w) for w in cert.cell_union.words],
        "source": cert.cell_union.source,
        "power_reduction_used": cert.power_reduction_used,
        "conclusion": cert.conclusion,
    }
    payload["digest"] = digest(payload)
    return payload


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def digest(obj) -> str:
    return hashlib.sha256(canonical_json(obj).encode()).hexdigest()


def load_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path} is not valid JSON: {exc}") from exc
