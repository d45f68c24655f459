"""JSON certificates and their payload-only re-verification.

Every certificate is a JSON object with the shape

    {"kind": ..., "ring": ..., "payload": {...}, "verified": true,
     "tool_version": ...}

where the payload alone carries enough data to recheck the claim: the
verifier never needs the random seed or intermediate state of the run that
produced the document.  verify_document is the single entry point the
`verify` subcommand uses; it re-parses the payload, redoes the relevant
exact computation, and raises VerificationFailed on the first mismatch.
"""

from __future__ import annotations

import json
import math

from . import __version__
from .elemgen import Decomposition
from .errors import ParseError, VerificationFailed
from .lemma import (
    ConjugateFactor,
    ConjugateWitness,
    ManyUnitsCertificate,
    epsilon_ideal,
    verify_certificate,
    verify_witness,
)
from .norms import (
    AxiomReport,
    FiniteGroupTable,
    LemmaBoundReport,
    NormTable,
    check_norm_axioms,
    conjugation_closure,
)
from .rings import PrincipalIdeal, RingDescriptor, in_ideal, parse_element, parse_ring, quotient
from .sl2 import Mat2, diag, parse_matrix, word_from_json, word_to_json

KINDS = (
    "many-units",
    "lemma2-witness",
    "h-decomposition",
    "decomposition",
    "norm-experiment",
    "axiom-report",
)


def make_document(kind: str, ring: RingDescriptor, payload: dict) -> dict:
    if kind not in KINDS:
        raise ValueError(f"unknown certificate kind {kind!r}")
    return {
        "kind": kind,
        "ring": ring.name,
        "payload": payload,
        "verified": True,
        "tool_version": __version__,
    }


def dumps(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2)


# ---------------------------------------------------------------------------
# payload builders


def many_units_payload(cert: ManyUnitsCertificate) -> dict:
    return {
        "c": str(cert.c),
        "v": str(cert.v),
        "u": str(cert.u),
        "k": cert.k,
        "y": str(cert.y),
        "check_u8": cert.check_u8,
        "epsilon_generator": str(epsilon_ideal(cert).generator),
    }


def witness_payload(w: ConjugateWitness) -> dict:
    return {
        "matrix": str(w.matrix),
        "u": str(w.u),
        "z": str(w.z),
        "t": str(w.t),
        "q": str(w.q),
        "p": str(w.p),
        "sign_convention": "p = -q - z",
        "Y": str(w.Y),
        "target": str(w.target),
        "factors": [
            {
                "conjugator": word_to_json(f.conjugator),
                "core": "A^-1" if f.core_inverted else "A",
            }
            for f in w.factors
        ],
    }


def decomposition_payload(dec: Decomposition, unit=None) -> dict:
    payload = {
        "matrix": str(dec.matrix),
        "word": word_to_json(dec.word),
        "length": dec.length,
    }
    if unit is not None:
        payload["unit"] = str(unit)
    return payload


def experiment_payload(
    report: LemmaBoundReport, matrix: Mat2, cert: ManyUnitsCertificate
) -> dict:
    return {
        "matrix": str(matrix),
        "unit_certificate": many_units_payload(cert),
        "modulus": report.modulus,
        "quotient_index": report.quotient_index,
        "group_order": report.group_order,
        "generator_count": report.generator_count,
        "requested": report.requested,
        "nontrivial_count": report.nontrivial_count,
        "trivial_count": report.trivial_count,
        "histogram": {str(k): v for k, v in sorted(report.histogram.items(), key=str)},
        "max_norm": report.max_norm,
        "bound": report.bound,
        "all_within_bound": report.all_within_bound,
        "samples": [{"j": j, "norm": n} for j, n in report.samples],
    }


def axiom_report_payload(
    modulus_text: str,
    seed_texts: list[str],
    group_order: int,
    generator_count: int,
    report: AxiomReport,
) -> dict:
    return {
        "modulus": modulus_text,
        "seed": list(seed_texts),
        "group_order": group_order,
        "generator_count": generator_count,
        "all_passed": report.all_passed,
        "axioms": {
            check.name: {
                "passed": check.passed,
                "counterexample": check.counterexample,
            }
            for check in report.checks
        },
    }


# ---------------------------------------------------------------------------
# payload parsers


def parse_many_units(ring: RingDescriptor, payload: dict) -> ManyUnitsCertificate:
    try:
        return ManyUnitsCertificate(
            c=parse_element(ring, payload["c"]),
            v=parse_element(ring, payload["v"]),
            u=parse_element(ring, payload["u"]),
            k=int(payload["k"]),
            y=parse_element(ring, payload["y"]),
            check_u8=bool(payload["check_u8"]),
        )
    except (KeyError, TypeError) as exc:
        raise ParseError(f"malformed many-units payload: {exc!r}") from None


def parse_witness(ring: RingDescriptor, payload: dict) -> ConjugateWitness:
    try:
        factors = []
        for entry in payload["factors"]:
            core = entry["core"]
            if core not in ("A", "A^-1"):
                raise ParseError(f"factor core must be 'A' or 'A^-1', got {core!r}")
            factors.append(
                ConjugateFactor(
                    conjugator=word_from_json(ring, entry["conjugator"]),
                    core_inverted=(core == "A^-1"),
                )
            )
        return ConjugateWitness(
            matrix=parse_matrix(ring, payload["matrix"]),
            u=parse_element(ring, payload["u"]),
            z=parse_element(ring, payload["z"]),
            t=parse_element(ring, payload["t"]),
            q=parse_element(ring, payload["q"]),
            p=parse_element(ring, payload["p"]),
            Y=parse_matrix(ring, payload["Y"]),
            factors=tuple(factors),
            target=parse_matrix(ring, payload["target"]),
        )
    except (KeyError, TypeError) as exc:
        raise ParseError(f"malformed witness payload: {exc!r}") from None


# ---------------------------------------------------------------------------
# verification dispatch


def _verify_many_units(ring: RingDescriptor, payload: dict) -> None:
    cert = parse_many_units(ring, payload)
    verify_certificate(cert)
    if "epsilon_generator" in payload:
        recorded = parse_element(ring, payload["epsilon_generator"])
        if recorded != epsilon_ideal(cert).generator:
            raise VerificationFailed("recorded epsilon generator is wrong")


def _verify_witness(ring: RingDescriptor, payload: dict) -> None:
    verify_witness(parse_witness(ring, payload))


def _verify_decomposition(ring: RingDescriptor, payload: dict, h_kind: bool) -> None:
    try:
        matrix = parse_matrix(ring, payload["matrix"])
        word = word_from_json(ring, payload["word"])
        length = int(payload["length"])
    except (KeyError, TypeError) as exc:
        raise ParseError(f"malformed decomposition payload: {exc!r}") from None
    try:
        dec = Decomposition(matrix, word)
    except ValueError as exc:
        raise VerificationFailed(str(exc)) from None
    if dec.length != length:
        raise VerificationFailed(f"recorded length {length}, actual {dec.length}")
    if h_kind:
        unit = parse_element(ring, payload["unit"])
        if matrix != diag(unit):
            raise VerificationFailed("matrix is not diag(u, 1/u) for the recorded unit")
        if dec.length != 6:
            raise VerificationFailed("the diagonal decomposition must have six factors")


def _verify_experiment(ring: RingDescriptor, payload: dict) -> None:
    try:
        matrix = parse_matrix(ring, payload["matrix"])
        nested = payload["unit_certificate"]
        modulus = parse_element(ring, payload["modulus"])
        bound = int(payload["bound"])
        samples = payload["samples"]
    except (KeyError, TypeError) as exc:
        raise ParseError(f"malformed experiment payload: {exc!r}") from None
    cert = parse_many_units(ring, nested)
    verify_certificate(cert)
    if cert.c != matrix.c:
        raise VerificationFailed("unit certificate does not match the matrix corner")
    eps_ideal = PrincipalIdeal(epsilon_ideal(cert).generator)
    q = quotient(PrincipalIdeal(modulus))
    if q.index != int(payload["quotient_index"]):
        raise VerificationFailed("recorded quotient index is wrong")
    table = FiniteGroupTable(q)
    if len(table) != int(payload["group_order"]):
        raise VerificationFailed("recorded group order is wrong")
    a_bar = table.from_matrix(matrix)
    gens = conjugation_closure(table, [a_bar, table.inv(a_bar)])
    if len(gens) != int(payload["generator_count"]):
        raise VerificationFailed("recorded generating set size is wrong")
    norms = NormTable(table, gens, check=False)
    histogram: dict = {}
    max_norm: float = 0
    for entry in samples:
        j = parse_element(ring, entry["j"])
        if not in_ideal(j, eps_ideal):
            raise VerificationFailed(f"sampled {j} lies outside the epsilon ideal")
        image = table.transvection("12", j)
        if image == table.identity:
            raise VerificationFailed(f"sampled {j} has trivial image, not a valid sample")
        norm = norms.length(image)
        recorded = math.inf if entry["norm"] == "inf" else int(entry["norm"])
        if norm != recorded:
            raise VerificationFailed(
                f"recorded norm {entry['norm']} for {j}, recomputed {norm}"
            )
        key = "inf" if norm == math.inf else norm
        histogram[str(key)] = histogram.get(str(key), 0) + 1
        max_norm = max(max_norm, norm)
    if len(samples) != int(payload["nontrivial_count"]):
        raise VerificationFailed("nontrivial_count does not match the sample list")
    if histogram != {str(k): v for k, v in payload["histogram"].items()}:
        raise VerificationFailed("histogram does not match the sample list")
    recorded_max = payload["max_norm"]
    recorded_max = math.inf if recorded_max == "inf" else int(recorded_max)
    if samples and max_norm != recorded_max:
        raise VerificationFailed("recorded max norm is wrong")
    within = all(
        (math.inf if e["norm"] == "inf" else int(e["norm"])) <= bound for e in samples
    )
    if within != bool(payload["all_within_bound"]):
        raise VerificationFailed("all_within_bound flag does not match the samples")


def _verify_axiom_report(ring: RingDescriptor, payload: dict) -> None:
    try:
        modulus = parse_element(ring, payload["modulus"])
        seed_texts = payload["seed"]
        axioms = payload["axioms"]
    except (KeyError, TypeError) as exc:
        raise ParseError(f"malformed axiom-report payload: {exc!r}") from None
    table = FiniteGroupTable(quotient(PrincipalIdeal(modulus)))
    if len(table) != int(payload["group_order"]):
        raise VerificationFailed("recorded group order is wrong")
    seed = [table.from_matrix(parse_matrix(ring, text)) for text in seed_texts]
    gens = conjugation_closure(table, seed)
    if len(gens) != int(payload["generator_count"]):
        raise VerificationFailed("recorded generating set size is wrong")
    report = check_norm_axioms(NormTable(table, gens, check=False))
    if report.all_passed != bool(payload["all_passed"]):
        raise VerificationFailed("all_passed flag does not re-verify")
    for check in report.checks:
        recorded = axioms.get(check.name)
        if recorded is None:
            raise VerificationFailed(f"axiom {check.name} missing from the report")
        if bool(recorded["passed"]) != check.passed:
            raise VerificationFailed(f"axiom {check.name} result does not re-verify")
        if recorded.get("counterexample") != check.counterexample:
            raise VerificationFailed(f"axiom {check.name} counterexample differs")


def verify_document(doc) -> dict:
    """Recheck a certificate document from its payload alone.

    Returns a small summary dict on success; raises ParseError for malformed
    documents and VerificationFailed when any recorded claim fails to recheck.
    """
    if not isinstance(doc, dict):
        raise ParseError("certificate must be a JSON object")
    kind = doc.get("kind")
    if kind not in KINDS:
        raise ParseError(f"unknown certificate kind {kind!r}")
    if not isinstance(doc.get("payload"), dict):
        raise ParseError("certificate payload must be a JSON object")
    ring = parse_ring(doc.get("ring", ""))
    payload = doc["payload"]
    if kind == "many-units":
        _verify_many_units(ring, payload)
    elif kind == "lemma2-witness":
        _verify_witness(ring, payload)
    elif kind == "h-decomposition":
        _verify_decomposition(ring, payload, h_kind=True)
    elif kind == "decomposition":
        _verify_decomposition(ring, payload, h_kind=False)
    elif kind == "norm-experiment":
        _verify_experiment(ring, payload)
    else:
        _verify_axiom_report(ring, payload)
    if not doc.get("verified", False):
        raise VerificationFailed("document is marked verified = false")
    return {"kind": kind, "ring": ring.name, "ok": True}
