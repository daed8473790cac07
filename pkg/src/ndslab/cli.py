"""Command-line front end: run property checks on NDSL files and execute the
scenario corpus, with human-readable tables or machine-readable JSON reports.

Exit codes: 0 all witnessed / all expectations met, 1 a check came back
refuted, 2 a check stayed inconclusive (widen the horizon), 3 input errors.
The JSON report is byte-identical across runs for identical inputs and
configuration, apart from the timing fields; NDSLAB_ALPHA_BITS overrides the
circle enclosure precision.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time

from . import __version__
from . import checkers as ck
from . import corpus as corpus_mod
from . import ndsl

SCHEMA_VERSION = 1


def _alpha_bits() -> int:
    raw = os.environ.get("NDSLAB_ALPHA_BITS", "")
    return int(raw) if raw.isdigit() else 96


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ndslab",
        description="verification toolkit for non-autonomous map sequences",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    chk = sub.add_parser("check", help="run property checks on an NDSL file")
    chk.add_argument("file", help="NDSL source file")
    chk.add_argument(
        "--property", action="append", default=[],
        help="property to check, e.g. transitive or multi-transitive:2 "
        "(repeatable; defaults to the file's check directives)",
    )
    chk.add_argument("--system", default=None, help="system name (default: first defined)")
    chk.add_argument("--horizon", type=int, default=512)
    chk.add_argument("--basis", type=int, default=2)
    chk.add_argument("--law-horizon", type=int, default=2048)
    chk.add_argument("--format", choices=("table", "json"), default="table")
    chk.add_argument(
        "--diagnostics-json", action="store_true",
        help="emit parse diagnostics as JSON lines on stderr",
    )

    cor = sub.add_parser("corpus", help="run the scenario corpus")
    cor.add_argument("--filter", default=None, help="scenario name filter (substring or prefix*)")
    cor.add_argument("--format", choices=("table", "json"), default="table")
    return parser


def _report_envelope(mode: str, digest: str, configuration: dict) -> dict:
    return {
        "tool": "ndslab",
        "version": __version__,
        "schema": SCHEMA_VERSION,
        "mode": mode,
        "input_digest": digest,
        "configuration": configuration,
    }


def _json_safe(value):
    if isinstance(value, dict):
        return {str(k): _json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_safe(v) for v in value]
    if isinstance(value, (int, float, str, bool)) or value is None:
        return value
    return str(value)


def cmd_check(args) -> int:
    try:
        with open(args.file, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        print(f"ndslab: cannot read {args.file}: {exc.strerror}", file=sys.stderr)
        return 3
    digest = hashlib.sha256(raw).hexdigest()
    try:
        doc = ndsl.parse(raw.decode("utf-8", errors="replace"))
    except ndsl.NdslParseError as exc:
        for diag in exc.diagnostics:
            if args.diagnostics_json:
                print(json.dumps(diag.to_json(), sort_keys=True), file=sys.stderr)
            else:
                print(f"{args.file}:{diag.render()}", file=sys.stderr)
        return 3
    requests = []
    if args.property:
        name = args.system or doc.names[0]
        try:
            system = doc.system(name)
        except KeyError:
            print(f"ndslab: no system named {name!r} in {args.file}", file=sys.stderr)
            return 3
        for rendered in args.property:
            head, _, tail = rendered.partition(":")
            try:
                prop = ndsl.parse_property(
                    head, [_param(p) for p in tail.split(",")] if tail else []
                )
            except ValueError as exc:
                print(f"ndslab: {exc}", file=sys.stderr)
                return 3
            requests.append((name, prop, args.horizon, args.basis))
    else:
        if not doc.checks:
            print(f"ndslab: {args.file} has no check directives and no --property given",
                  file=sys.stderr)
            return 3
        for chk in doc.checks:
            requests.append(
                (chk.system, chk.prop, chk.horizon or args.horizon, chk.basis or args.basis)
            )
    checks = []
    worst = 0
    for name, prop, horizon, basis in requests:
        t0 = time.perf_counter()
        verdict = ck.check_property(
            doc.system(name), prop, basis_resolution=basis, horizon=horizon,
            law_horizon=args.law_horizon,
        )
        ms = (time.perf_counter() - t0) * 1000
        checks.append(
            {
                "system": name,
                "property": ndsl.render_property(prop),
                "status": verdict.status,
                "basis": basis,
                "horizon": horizon,
                "evidence": _json_safe(verdict.evidence),
                "caveats": list(verdict.caveats),
                "timing_ms": round(ms, 3),
            }
        )
        if verdict.status == ck.REFUTED:
            worst = max(worst, 1)
        elif verdict.status == ck.INCONCLUSIVE:
            worst = max(worst, 2)
    report = _report_envelope(
        "check", digest,
        {
            "basis": args.basis,
            "horizon": args.horizon,
            "law_horizon": args.law_horizon,
            "alpha_bits": _alpha_bits(),
        },
    )
    report["checks"] = checks
    if args.format == "json":
        print(json.dumps(report, sort_keys=True, indent=2))
    else:
        for c in checks:
            print(f"{c['status']:<13} {c['system']:<10} {c['property']:<28} "
                  f"basis={c['basis']} horizon={c['horizon']}")
            for caveat in c["caveats"]:
                print(f"              note: {caveat}")
    return worst


def _param(text: str):
    from fractions import Fraction

    return Fraction(text)


def cmd_corpus(args) -> int:
    t0 = time.perf_counter()
    reports = corpus_mod.run_corpus(args.filter)
    ms = (time.perf_counter() - t0) * 1000
    if args.filter and not reports:
        print(f"ndslab: no scenario matches {args.filter!r}", file=sys.stderr)
    scenarios = [
        {
            "name": rep.name,
            "passed": rep.passed,
            "results": [
                {
                    "description": r.description,
                    "expected": r.expected,
                    "actual": r.actual,
                    "passed": r.passed,
                    "citation": r.citation,
                    "evidence_digest": r.evidence_digest,
                }
                for r in rep.results
            ],
        }
        for rep in reports
    ]
    report = _report_envelope("corpus", args.filter or "all", {"alpha_bits": _alpha_bits()})
    report["scenarios"] = scenarios
    report["timing_ms"] = round(ms, 3)
    if args.format == "json":
        print(json.dumps(report, sort_keys=True, indent=2))
    else:
        width = max((len(r.description) for rep in reports for r in rep.results), default=20)
        for rep in reports:
            for r in rep.results:
                flag = "PASS" if r.passed else "FAIL"
                print(f"{flag} {rep.name:<28} {r.description:<{width}} -> {r.actual}")
    return 0 if all(rep.passed for rep in reports) else 1


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "check":
        return cmd_check(args)
    return cmd_corpus(args)


if __name__ == "__main__":
    sys.exit(main())
