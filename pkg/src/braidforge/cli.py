"""Batch command-line front end.

Subcommands: convert, verify, report, cert-gen, v2503.  Everything speaks
JSON files with deterministic key ordering; there is no interactive mode.

Exit codes: 0 success/verified, 1 checked-and-rejected, 2 usage or domain
error (including malformed input files), 3 internal invariant violation.
Set BRAIDFORGE_LOG to quiet (default), info, or debug for stderr logging.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

from . import __version__
from .braid import BraidWord, closure_components, one_bridge_braid, positive_closure_genus
from .errors import (
    BraidforgeError,
    CertError,
    CertGenError,
    DomainError,
    InternalInvariantViolation,
    MoveError,
    NotAKnot,
    NotPositiveBraid,
    TraceError,
    UnsupportedCase,
    UnsupportedPresentation,
    WitnessError,
)
from .invariants import alexander_from_braid, format_poly, same_closure_evidence
from .knotgroup import Presentation, fox_alexander, one_bridge_presentation
from .markov import MoveTrace, ttk_to_one_bridge, verify_trace
from .ordercert import (
    certificate_from_json,
    certificate_to_json,
    check_certificate,
    property_d_certificate,
    property_d_inputs,
    satellite_certificate,
    satellite_inputs,
    v2503_bundle,
)

EXIT_OK = 0
EXIT_REJECTED = 1
EXIT_USAGE = 2
EXIT_INTERNAL = 3

log = logging.getLogger("braidforge")

_REJECTIONS = (
    TraceError,
    CertError,
    WitnessError,
    UnsupportedCase,
    NotAKnot,
    NotPositiveBraid,
)
_USAGE_ERRORS = (DomainError, UnsupportedPresentation, MoveError, CertGenError)


def _dump_json(data, path=None):
    text = json.dumps(data, sort_keys=True, indent=2)
    if path is None:
        print(text)
    else:
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(text + "\n")


def _load_json(path):
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return json.load(handle)
    except (OSError, json.JSONDecodeError) as exc:
        raise DomainError(f"cannot read JSON file {path}: {exc}") from exc


def cmd_convert(args) -> int:
    result = ttk_to_one_bridge(args.p, args.q, args.l, args.n)
    verify_trace(result.trace)
    start, end = result.trace.start, result.trace.end
    if closure_components(start) == 1:
        evidence = same_closure_evidence(start, end)
        if not evidence.consistent():
            raise InternalInvariantViolation(
                "conversion produced a closure with a different Alexander polynomial"
            )
        verdict = "consistent"
    else:
        if closure_components(start) != closure_components(end):
            raise InternalInvariantViolation(
                "conversion changed the number of closure components"
            )
        verdict = "n/a(link)"
    print(f"B({result.omega},{result.t},{result.b}) alexander={verdict}")
    if args.out:
        _dump_json(result.trace.to_json(), args.out)
        log.info("trace written to %s", args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    payload = _load_json(args.path)
    if not isinstance(payload, dict):
        raise DomainError("verification payload must be a JSON object")
    if "steps" in payload:
        trace = MoveTrace.from_json(payload)
        verify_trace(trace)
        print(f"verified: trace with {len(trace.steps)} steps")
        return EXIT_OK
    if "nodes" in payload:
        if not args.pres:
            raise DomainError("certificate verification needs --pres")
        pres = Presentation.from_json(_load_json(args.pres))
        S, target, cert = certificate_from_json(payload)
        check_certificate(pres, S, target, cert)
        print(f"verified: certificate with {len(cert.nodes)} nodes")
        return EXIT_OK
    raise DomainError("payload is neither a trace nor a certificate")


def cmd_report(args) -> int:
    braid = BraidWord.from_json(_load_json(args.braid))
    report: dict = {
        "strands": braid.strands,
        "letters": list(braid.letters),
        "components": closure_components(braid),
    }
    delta = None
    if args.genus or args.figure:
        genus = positive_closure_genus(braid)
        report["genus"] = genus.genus
        report["slope_threshold"] = genus.slope_threshold
    if args.alexander or args.figure or args.csv:
        delta = alexander_from_braid(braid)
        report["alexander"] = format_poly(delta)
        report["alexander_coeffs"] = delta.to_json()
    if args.presentation:
        if closure_components(braid) != 1:
            raise NotAKnot("presentation output requires a knot closure")
        pres = _presentation_for(braid)
        report["presentation"] = pres.to_json()
        report["fox_alexander"] = format_poly(fox_alexander(pres))
    if args.csv:
        with open(args.csv, "w", encoding="utf-8") as handle:
            handle.write("exponent,coefficient\n")
            for exp, coeff in sorted(delta.coeffs().items()):
                handle.write(f"{exp},{coeff}\n")
        log.info("coefficients written to %s", args.csv)
    if args.figure:
        from .plotting import render_alexander_figure

        render_alexander_figure(
            braid,
            delta,
            args.figure,
            genus=report.get("genus"),
            slope_threshold=report.get("slope_threshold"),
        )
        log.info("figure written to %s", args.figure)
    _dump_json(report, args.out)
    return EXIT_OK


def _presentation_for(braid: BraidWord) -> Presentation:
    """Recognize a 1-bridge braid word and build its knot group presentation."""
    letters = braid.letters
    omega = braid.strands
    for b in range(0, omega - 1):
        for t in range(1, (len(letters) // max(omega - 1, 1)) + 2):
            try:
                candidate = one_bridge_braid(omega, t, b)
            except DomainError:
                continue
            if candidate.letters == letters:
                return one_bridge_presentation(omega, t, b)
    raise DomainError(
        "braid is not a 1-bridge braid word B(omega,t,b); "
        "presentation output needs one"
    )


def cmd_cert_gen(args) -> int:
    if args.companion_cert or args.companion_pres or args.companion_genus is not None:
        if not (
            args.companion_cert
            and args.companion_pres
            and args.companion_genus is not None
        ):
            raise DomainError(
                "satellite mode needs --companion-cert, --companion-pres, "
                "and --companion-genus together"
            )
        companion = Presentation.from_json(_load_json(args.companion_pres))
        _, _, ccert = certificate_from_json(_load_json(args.companion_cert))
        cert = satellite_certificate(
            ccert, companion, args.companion_genus, args.omega, args.t, args.b
        )
        pres, S, target = satellite_inputs(
            companion, args.companion_genus, args.omega, args.t, args.b
        )
        kind = "satellite"
    else:
        cert = property_d_certificate(args.omega, args.t, args.b)
        pres, S, target = property_d_inputs(args.omega, args.t, args.b)
        kind = "property-D"
    check_certificate(pres, S, target, cert)
    print(
        f"accepted: {kind} certificate for B({args.omega},{args.t},{args.b}) "
        f"with {len(cert.nodes)} nodes"
    )
    if args.out:
        _dump_json(certificate_to_json(cert, S, target), args.out)
        log.info("certificate written to %s", args.out)
    if args.pres_out:
        _dump_json(pres.to_json(), args.pres_out)
        log.info("presentation written to %s", args.pres_out)
    return EXIT_OK


def cmd_v2503(args) -> int:
    bundle = v2503_bundle()
    for name, detail in bundle.checks:
        print(f"{name}: ok ({detail})")
    if args.cert_out:
        _dump_json(
            certificate_to_json(
                bundle.certificate,
                list(bundle.certificate_S),
                bundle.certificate_target,
            ),
            args.cert_out,
        )
    if args.pres_out:
        _dump_json(bundle.presentation.to_json(), args.pres_out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="braidforge",
        description="Braid conversions, knot group presentations, and "
        "membership certificates over JSON files.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    convert = sub.add_parser(
        "convert", help="convert a twisted torus braid to 1-bridge form"
    )
    convert.add_argument("--p", type=int, required=True)
    convert.add_argument("--q", type=int, required=True)
    convert.add_argument("--l", type=int, required=True)
    convert.add_argument("--n", type=int, required=True)
    convert.add_argument("--out", help="write the Markov trace to this JSON file")
    convert.set_defaults(func=cmd_convert)

    verify = sub.add_parser("verify", help="replay a trace or certificate file")
    verify.add_argument("path", help="trace JSON or certificate JSON")
    verify.add_argument("--pres", help="presentation JSON (certificates only)")
    verify.set_defaults(func=cmd_verify)

    report = sub.add_parser("report", help="compute invariants of a braid")
    report.add_argument("--braid", required=True, help="braid JSON file")
    report.add_argument("--presentation", action="store_true")
    report.add_argument("--alexander", action="store_true")
    report.add_argument("--genus", action="store_true")
    report.add_argument("--figure", help="render the coefficient profile to this file")
    report.add_argument("--csv", help="write coefficients as CSV to this file")
    report.add_argument("--out", help="write the JSON report here instead of stdout")
    report.set_defaults(func=cmd_report)

    cert = sub.add_parser(
        "cert-gen", help="generate a property-(D) or satellite certificate"
    )
    cert.add_argument("--omega", type=int, required=True)
    cert.add_argument("--t", type=int, required=True)
    cert.add_argument("--b", type=int, required=True)
    cert.add_argument("--companion-cert")
    cert.add_argument("--companion-pres")
    cert.add_argument("--companion-genus", type=int)
    cert.add_argument("--out", help="write the certificate JSON here")
    cert.add_argument("--pres-out", help="write the presentation JSON here")
    cert.set_defaults(func=cmd_cert_gen)

    v2503 = sub.add_parser("v2503", help="run the bundled v2503 checks")
    v2503.add_argument("--cert-out", help="write the lambda certificate here")
    v2503.add_argument("--pres-out", help="write the presentation here")
    v2503.set_defaults(func=cmd_v2503)
    return parser


def main(argv=None) -> int:
    levels = {"quiet": logging.WARNING, "info": logging.INFO, "debug": logging.DEBUG}
    level = levels.get(os.environ.get("BRAIDFORGE_LOG", "quiet"), logging.WARNING)
    logging.basicConfig(level=level, stream=sys.stderr, format="%(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors, matching our convention
        return int(exc.code) if exc.code else 0
    try:
        return args.func(args)
    except _REJECTIONS as exc:
        print(f"rejected: {exc}", file=sys.stderr)
        return EXIT_REJECTED
    except _USAGE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InternalInvariantViolation as exc:
        print(f"internal invariant violation: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except BraidforgeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
