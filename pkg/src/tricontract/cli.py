"""``tri-contract`` command line.

Exit codes: 0 success, 1 a negative mathematical verdict (invalid metric,
not contracting, no fixed point), 2 usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

import numpy as np

from tricontract.analysis import (
    certify,
    check_contraction,
    periodicity_report,
    triple_table,
)
from tricontract.errors import DomainError, MetricError, MetricInvalidError
from tricontract.fixtures import EXAMPLES, example_document
from tricontract.metric import SelfMap, parse_space, random_finite_metric, serialize_space, validate_metric
from tricontract.phi import MAX, SQRTSQ, SUM, PhiSpec, pnorm
from tricontract.solver import DEFAULT_MAX_ITER, VerdictKind, picard_iterate

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE = 0, 1, 2

EXAMPLE_PHIS = (SUM, MAX, pnorm(2), SQRTSQ)
# functional whose values the worked example tabulates
EXAMPLE_TABLE_PHI = {"2.1": MAX, "2.2": SQRTSQ}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _num(x: float) -> str:
    return f"{x:.12g}"


def _emit(out, fmt: str, payload: dict, text: str) -> None:
    if fmt == "json":
        out.write(json.dumps(payload, indent=2) + "\n")
    else:
        out.write(text.rstrip("\n") + "\n")


def _read_input(path: str, validate: bool = True):
    try:
        with open(path, encoding="utf-8") as fh:
            document = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror or exc}") from None
    return parse_space(document, validate=validate)


def _phi(text: str) -> PhiSpec:
    try:
        return PhiSpec.parse(text)
    except DomainError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _require_map(selfmap, path):
    if selfmap is None:
        raise UsageError(f"{path} has no \"map\" section")
    return selfmap


def _cert_text(cert) -> str:
    witness = ", ".join(cert.witness) if cert.witness else "-"
    return (
        f"phi: {cert.phi}\n"
        f"alpha_star: {_num(cert.alpha_star)}\n"
        f"witness: ({witness})\n"
        f"contracting: {str(cert.contracting).lower()}\n"
        f"triples_checked: {cert.triples_checked}\n"
    )


def _cmd_validate(args, out) -> int:
    space, _ = _read_input(args.input, validate=False)
    report = validate_metric(space)
    payload = {
        "symmetric_ok": report.symmetric_ok,
        "zero_diagonal_ok": report.zero_diagonal_ok,
        "positivity_ok": report.positivity_ok,
        "triangle_ok": report.triangle_ok,
        "violations": [
            {"axiom": v["axiom"], "points": list(v["points"]), "values": list(v["values"])}
            for v in report.violations
        ],
    }
    lines = [f"points: {len(space)}"]
    for flag in ("symmetric_ok", "zero_diagonal_ok", "positivity_ok", "triangle_ok"):
        lines.append(f"{flag}: {str(payload[flag]).lower()}")
    lines += [f"violation: {v['message']}" for v in report.violations]
    _emit(out, args.format, payload, "\n".join(lines))
    return EXIT_OK if report.ok else EXIT_NEGATIVE


def _cmd_certify(args, out) -> int:
    space, selfmap = _read_input(args.input)
    selfmap = _require_map(selfmap, args.input)
    if args.alpha is not None:
        if not 0.0 <= args.alpha < 1.0:
            raise UsageError(f"--alpha must lie in [0, 1), got {args.alpha}")
        bad = check_contraction(space, selfmap, args.phi, args.alpha)
        payload = {
            "phi": str(args.phi),
            "alpha": args.alpha,
            "holds": not bad,
            "violations": [
                {"triple": list(t.triple), "image_phi": t.image_phi, "preimage_phi": t.preimage_phi,
                 "ratio": t.ratio}
                for t in bad
            ],
        }
        lines = [f"phi: {args.phi}", f"alpha: {_num(args.alpha)}", f"holds: {str(not bad).lower()}"]
        lines += [
            f"violation: ({', '.join(t.triple)}) image={_num(t.image_phi)} "
            f"preimage={_num(t.preimage_phi)} ratio={_num(t.ratio)}"
            for t in bad
        ]
        _emit(out, args.format, payload, "\n".join(lines))
        return EXIT_OK if not bad else EXIT_NEGATIVE
    cert = certify(space, selfmap, args.phi)
    _emit(out, args.format, cert.to_dict(), _cert_text(cert))
    return EXIT_OK if cert.contracting else EXIT_NEGATIVE


def _cmd_solve(args, out) -> int:
    space, selfmap = _read_input(args.input)
    selfmap = _require_map(selfmap, args.input)
    if args.start not in space:
        raise UsageError(f"--start {args.start!r} is not a point of {args.input}")
    if not args.eps > 0:
        raise UsageError(f"--eps must be positive, got {args.eps}")
    cert = certify(space, selfmap, args.phi)
    if not cert.contracting:
        payload = {"certificate": cert.to_dict(), "trace": None}
        text = _cert_text(cert) + "not contracting: Picard iteration is not covered by the theorem\n"
        _emit(out, args.format, payload, text)
        return EXIT_NEGATIVE
    trace = picard_iterate(space, selfmap, args.start, cert, eps=args.eps, max_iter=args.max_iter)
    v = trace.verdict
    lines = [
        _cert_text(cert).rstrip("\n"),
        f"orbit: {' -> '.join(trace.steps)}",
        f"d0: {_num(trace.d0)}",
        "d_seq: " + ", ".join(_num(d) for d in trace.d_seq),
        "tail_bounds: " + (", ".join(_num(b) for b in trace.bounds) or "-"),
    ]
    if v.kind is VerdictKind.FIXED_POINT:
        lines.append(f"verdict: fixed point {v.point}")
    elif v.kind is VerdictKind.PERIOD2:
        lines.append(f"verdict: period-2 orbit {v.point} <-> {v.partner}; no fixed point exists")
    else:
        lines.append(f"verdict: {v.kind.value}")
    _emit(out, args.format, {"certificate": cert.to_dict(), "trace": trace.to_dict()}, "\n".join(lines))
    return EXIT_OK if v.kind is VerdictKind.FIXED_POINT else EXIT_NEGATIVE


def _cmd_fixed_points(args, out) -> int:
    space, selfmap = _read_input(args.input)
    selfmap = _require_map(selfmap, args.input)
    report = periodicity_report(space, selfmap)
    text = (
        f"fixed_points: {', '.join(report.fixed_points) or '-'}\n"
        f"period2_points: {', '.join(report.period2_points) or '-'}\n"
    )
    _emit(out, args.format, report.to_dict(), text)
    return EXIT_OK if report.fixed_points else EXIT_NEGATIVE


def _cmd_examples(args, out) -> int:
    name = args.name
    space, selfmap = parse_space(example_document(name))
    table_phi = EXAMPLE_TABLE_PHI[name]
    certs = [certify(space, selfmap, phi) for phi in EXAMPLE_PHIS]
    rows = triple_table(space, selfmap, table_phi)
    report = periodicity_report(space, selfmap)
    best = next(c for c in certs if c.phi == table_phi)
    orbits = {}
    if best.contracting:
        for x in space.labels:
            orbits[x] = picard_iterate(space, selfmap, x, best)

    payload = {
        "example": name,
        "points": list(space.labels),
        "map": {x: selfmap(x) for x in space.labels},
        "certificates": [c.to_dict() for c in certs],
        "table": {
            "phi": str(table_phi),
            "rows": [
                {"triple": list(r.triple), "image_phi": r.image_phi, "preimage_phi": r.preimage_phi,
                 "ratio": r.ratio}
                for r in rows
            ],
        },
        "periodicity": report.to_dict(),
        "orbits": {x: t.to_dict() for x, t in orbits.items()},
    }

    lines = [f"Example {name}: {len(space)} points, map "
             + ", ".join(f"T{x}={selfmap(x)}" for x in space.labels)]
    lines.append("")
    lines.append(f"{'phi':<9}{'alpha_star':>16}  {'witness':<11}contracting")
    for c in certs:
        lines.append(f"{str(c.phi):<9}{_num(c.alpha_star):>16}  {'(' + ','.join(c.witness) + ')':<11}"
                     f"{str(c.contracting).lower()}")
    lines.append("")
    lines.append(f"phi = {table_phi} on every triple (image vs preimage):")
    for r in rows:
        lines.append(f"  ({','.join(r.triple)})  phi(T)={_num(r.image_phi):<16} "
                     f"phi={_num(r.preimage_phi):<16} ratio={_num(r.ratio)}")
    lines.append("")
    lines.append(f"fixed points: {', '.join(report.fixed_points) or '-'}")
    lines.append(f"period-2 points: {', '.join(report.period2_points) or '-'}")
    for x, t in orbits.items():
        lines.append(f"orbit from {x}: {' -> '.join(t.steps)}  ({t.verdict.kind.value})")
    _emit(out, args.format, payload, "\n".join(lines))
    return EXIT_OK


def _cmd_random(args, out) -> int:
    if args.n < 3:
        raise UsageError(f"--n must be at least 3, got {args.n}")
    space = random_finite_metric(args.n, args.seed)
    rng = np.random.default_rng([args.seed, 1])
    targets = rng.integers(0, len(space), size=len(space))
    selfmap = SelfMap.from_table({x: space.labels[t] for x, t in zip(space.labels, targets)}, space)
    doc = serialize_space(space, selfmap)
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(doc)
        except OSError as exc:
            raise UsageError(f"cannot write {args.out}: {exc.strerror or exc}") from None
    else:
        out.write(doc)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tri-contract", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    def fmt(p):
        p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("validate", help="check the metric axioms of an input file")
    p.add_argument("--input", required=True)
    fmt(p)
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("certify", help="compute the minimal contraction constant")
    p.add_argument("--input", required=True)
    p.add_argument("--phi", type=_phi, default=SUM)
    p.add_argument("--alpha", type=float, help="list triples violating this alpha instead")
    fmt(p)
    p.set_defaults(func=_cmd_certify)

    p = sub.add_parser("solve", help="run Picard iteration from a start point")
    p.add_argument("--input", required=True)
    p.add_argument("--phi", type=_phi, default=SUM)
    p.add_argument("--start", required=True)
    p.add_argument("--eps", type=float, default=1e-9)
    p.add_argument("--max-iter", type=int, default=DEFAULT_MAX_ITER)
    fmt(p)
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("fixed-points", help="list fixed points and prime-period-2 points")
    p.add_argument("--input", required=True)
    fmt(p)
    p.set_defaults(func=_cmd_fixed_points)

    p = sub.add_parser("examples", help="run the bundled worked examples")
    p.add_argument("name", choices=sorted(EXAMPLES))
    fmt(p)
    p.set_defaults(func=_cmd_examples)

    p = sub.add_parser("random", help="generate a random metric space and map")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_random)
    return parser


def run(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        err.write(f"{exc}\n")
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        return args.func(args, out)
    except UsageError as exc:
        err.write(f"tri-contract: {exc}\n")
        return EXIT_USAGE
    except MetricInvalidError as exc:
        err.write(f"tri-contract: {exc}\n")
        return EXIT_NEGATIVE
    except (MetricError, DomainError, KeyError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        err.write(f"tri-contract: {msg}\n")
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
