"""Command-line front end.

Every command prints one JSON document on stdout; diagnostics go to stderr.
Exit status: 0 on success, 1 when a domain check fails, 2 on unreadable or
malformed input.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from . import boxes, cj, formats, operators, synthesis, upb
from .errors import InvalidBox, InvalidPovm, NotHermitian, TraceRuleError
from .witness import DEFAULT_RESTARTS, certify_witness

log = logging.getLogger("tracerule")

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _check(name, passed, value, tolerance) -> dict:
    return {"name": name, "passed": bool(passed), "value": value, "tolerance": tolerance}


def _report(command, inputs, results, checks=(), **extra) -> dict:
    doc = {
        "command": command,
        "inputs": inputs,
        "results": results,
        "checks": [c if isinstance(c, dict) else _check(*c) for c in checks],
    }
    doc.update(extra)
    return doc


def _read(path, reader):
    try:
        return reader(formats.load(path))
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except (formats.FormatError, InvalidBox, InvalidPovm, NotHermitian) as exc:
        raise InputError(f"{path}: {exc}") from None


def _write(path, doc):
    Path(path).write_text(formats.dumps(doc) + "\n")
    log.info("wrote %s", path)


def cmd_ns_check(args):
    box = _read(args.box, formats.box_from_json)
    ok, violation = boxes.is_nonsignalling(box)
    return _report(
        "ns-check",
        {"box": str(args.box)},
        {"nonsignalling": ok, "max_violation": violation},
        [("nonsignalling", ok, violation, boxes.NS_TOL)],
    )


def cmd_synthesize(args):
    box = _read(args.box, formats.box_from_json)
    model = synthesis.synthesize(box, seed=args.seed)
    err = model.round_trip_error(box)
    dual_err = model.duality_error()
    herm = float(np.abs(model.operator.matrix - model.operator.matrix.conj().T).max())
    trace_err = abs(model.operator.trace() - 1.0)
    if args.output:
        _write(args.output, formats.synthesis_to_json(model))
    return _report(
        "synthesize",
        {"box": str(args.box), "seed": args.seed, "output": args.output},
        {
            "local_dim": model.local_dim,
            "round_trip_max_error": err,
            "duality_max_error": dual_err,
            "trace_error": trace_err,
            "hermiticity_error": herm,
        },
        [
            ("round_trip", err < 1e-9, err, 1e-9),
            ("duality", dual_err < 1e-10, dual_err, 1e-10),
            ("unit_trace", trace_err < 1e-9, trace_err, 1e-9),
            ("hermitian", herm < 1e-12, herm, 1e-12),
        ],
    )


def cmd_evaluate(args):
    op, mm = _read(args.model, formats.model_from_json)
    box = operators.evaluate_box(op, mm)
    ok, violation = boxes.is_nonsignalling(box)
    return _report(
        "evaluate",
        {"model": str(args.model)},
        {"valid_probabilities": box.valid_probabilities, "ns_max_violation": violation},
        [("nonsignalling", ok, violation, boxes.NS_TOL)],
        box=formats.box_to_json(box),
    )


def cmd_upb(args):
    out = upb.upb_report(theta=args.theta, restarts=args.restarts, seed=args.seed, grid=args.grid)
    return _report(
        "upb",
        {"theta": args.theta, "restarts": args.restarts, "seed": args.seed, "grid": args.grid},
        out["results"],
        out["checks"],
    )


def cmd_prbox_demo(args):
    op = operators.pr_operator()
    mm = operators.pr_measurements()
    box = operators.evaluate_box(op, mm)
    err = box.max_abs_diff(boxes.pr_box())
    cls = operators.classify(op, samples=args.restarts, seed=args.seed)
    verdict, res = certify_witness(op, restarts=args.restarts, seed=args.seed)
    if args.output:
        _write(args.output, formats.model_to_json(op, mm))
    return _report(
        "prbox-demo",
        {"restarts": args.restarts, "seed": args.seed},
        {
            "max_error": err,
            "classification": cls.as_dict(),
            "witness_verdict": verdict.value,
            "violating_product_value": res.value,
            "violating_product_state": [formats.encode_vector(v) for v in res.argmin.locals],
        },
        [
            ("reproduces_pr_box", err < 1e-12, err, 1e-12),
            ("not_positive", not cls.positive, cls.min_eigenvalue, 0.0),
            ("not_a_witness", verdict == operators.WitnessVerdict.VIOLATED, res.value, -1e-8),
        ],
    )


def cmd_random(args):
    scenario = boxes.Scenario(args.parties, args.settings, args.outcomes)
    box = boxes.random_ns_box(scenario, seed=args.seed)
    doc = formats.box_to_json(box)
    if args.output:
        _write(args.output, doc)
    return doc


def cmd_cj_verify(args):
    trials = cj.run_trials(args.trials, seed=args.seed)
    phi = operators.maximally_entangled(2)
    psi = np.outer(phi, phi.conj())
    mm = operators.MeasurementModel([
        operators.projective_from_bases([np.eye(2), np.array([[1, 1], [1, -1]]) / np.sqrt(2)]),
        operators.projective_from_bases([np.eye(2), np.array([[1, 1j], [1, -1j]]) / np.sqrt(2)]),
    ])
    transpose = cj.verify_gleason_identity(psi, cj.transpose_map(2), mm)
    ident = cj.verify_gleason_identity(psi, cj.identity_map(2), mm)
    return _report(
        "cj-verify",
        {"trials": args.trials, "seed": args.seed},
        {
            "random_max_discrepancy": trials["max_discrepancy"],
            "random_dual_povms_valid": trials["dual_povms_valid"],
            "transpose_discrepancy": transpose.max_discrepancy,
            "transpose_witness_min_eigenvalue": transpose.witness_min_eigenvalue,
            "identity_discrepancy": ident.max_discrepancy,
        },
        [
            ("random_trials", trials["max_discrepancy"] < 1e-10, trials["max_discrepancy"], 1e-10),
            ("random_dual_povms_valid", trials["dual_povms_valid"], None, 1e-10),
            ("transpose_fixture", transpose.max_discrepancy < 1e-10, transpose.max_discrepancy, 1e-10),
            ("transpose_choi_indefinite", transpose.witness_min_eigenvalue < 0,
             transpose.witness_min_eigenvalue, 0.0),
            ("identity_fixture", ident.max_discrepancy < 1e-14, ident.max_discrepancy, 1e-14),
        ],
    )


def cmd_bell_beta(args):
    box = _read(args.box, formats.box_from_json)
    verdict = boxes.bell_verdict(box)
    return _report(
        "bell-beta",
        {"box": str(args.box)},
        verdict._asdict(),
    )


def cmd_classify(args):
    op = _read(args.operator, formats.operator_from_json)
    cls = operators.classify(op, samples=args.restarts, seed=args.seed)
    return _report(
        "classify",
        {"operator": str(args.operator), "restarts": args.restarts, "seed": args.seed},
        cls.as_dict(),
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tracerule", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        p = sub.add_parser(name, help=help_)
        p.set_defaults(func=func)
        return p

    def seeded(p, restarts=False):
        p.add_argument("--seed", type=int, default=0)
        if restarts:
            p.add_argument("--restarts", type=int, default=DEFAULT_RESTARTS)
        return p

    p = add("ns-check", cmd_ns_check, "check the no-signalling conditions of a box")
    p.add_argument("box")

    p = seeded(add("synthesize", cmd_synthesize, "build an operator + measurements model for a box"))
    p.add_argument("box")
    p.add_argument("-o", "--output")

    p = add("evaluate", cmd_evaluate, "evaluate the trace rule of an operator + measurements model")
    p.add_argument("model")

    p = seeded(add("upb", cmd_upb, "three-qubit UPB witness and Bell gap report"), restarts=True)
    p.add_argument("--theta", type=float, default=None,
                   help="|e> = cos(theta)|0> + sin(theta)|1> (default (|0>-|1>)/sqrt 2)")
    p.add_argument("--grid", type=int, default=None, help="cross-check epsilon on a grid of this size")

    p = seeded(add("prbox-demo", cmd_prbox_demo, "PR box from a Bell-diagonal operator"), restarts=True)
    p.add_argument("-o", "--output", help="write the operator + measurements model here")

    p = seeded(add("random", cmd_random, "random nonsignalling box"))
    p.add_argument("parties", type=int)
    p.add_argument("settings", type=int)
    p.add_argument("outcomes", type=int)
    p.add_argument("-o", "--output")

    p = seeded(add("cj-verify", cmd_cj_verify, "check the bipartite witness/state trace identity"))
    p.add_argument("--trials", type=int, default=100)

    p = add("bell-beta", cmd_bell_beta, "tripartite Bell value of a (3,2,2) box")
    p.add_argument("box")

    p = seeded(add("classify", cmd_classify, "positivity / witness classification of an operator"),
               restarts=True)
    p.add_argument("operator")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        stream=sys.stderr, format="%(levelname)s: %(message)s")
    try:
        doc = args.func(args)
    except InputError as exc:
        log.error("%s", exc)
        return EXIT_INPUT
    except TraceRuleError as exc:
        log.error("%s: %s", type(exc).__name__, exc)
        return EXIT_FAIL
    print(formats.dumps(doc))
    failed = [c["name"] for c in doc.get("checks", []) if not c["passed"]]
    if failed:
        log.error("failed checks: %s", ", ".join(failed))
        return EXIT_FAIL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
