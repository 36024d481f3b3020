"""Command-line front end: JSON in, JSON out, deterministic.

Subcommands: family-build, verify, iso, enumerate, classify, calibrate.
Exactly one JSON document is written to stdout per invocation; errors are
JSON objects on stderr.  Exit codes: 0 success/yes, 1 check-failed/no,
2 usage or format error.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import algebra as alg
from . import families as fam
from . import iso
from .scalar import GaussianRational

DEFAULT_SEED = 2024
DEFAULT_SAMPLES = 25


class CliError(Exception):
    pass


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, indent=2) + "\n")


def _scalar_arg(text: str) -> GaussianRational:
    try:
        return GaussianRational.parse(text)
    except ValueError as exc:
        raise CliError(str(exc)) from exc


def _load_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise CliError(f"malformed JSON in {path}: {exc}") from exc


def _params_from_args(args) -> fam.FamilyParamsM1 | fam.FamilyParamsM2:
    if args.params:
        obj = _load_json(args.params)
        params = fam.params_from_json(obj)
        if args.kind and params.kind != args.kind:
            raise CliError(f"--kind {args.kind} does not match params file kind {params.kind}")
        if args.n and params.n != args.n:
            raise CliError(f"--n {args.n} does not match params file n {params.n}")
        return params
    if not args.kind or not args.n:
        raise CliError("--kind and --n are required without --params")
    betas = {}
    if args.betas:
        try:
            raw = json.loads(args.betas)
        except json.JSONDecodeError as exc:
            raise CliError(f"malformed --betas JSON: {exc}") from exc
        betas = {int(j): GaussianRational.from_json(c) for j, c in raw.items()}
    if args.kind == "m1":
        return fam.FamilyParamsM1(
            n=args.n,
            gamma=_scalar_arg(args.gamma) if args.gamma else GaussianRational(0),
            betas=betas,
            beta=_scalar_arg(args.beta) if args.beta else GaussianRational(0),
        )
    if args.gamma or args.beta:
        raise CliError("the m2 family has no gamma or beta parameter")
    return fam.FamilyParamsM2(n=args.n, betas=betas)


def cmd_family_build(args) -> int:
    params = _params_from_args(args)
    A = fam.build_family(params)
    doc = A.to_json()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=2)
            fh.write("\n")
        _emit({"written": args.out, "n": A.n, "m": A.m, "params": params.to_json()})
    else:
        _emit(doc)
    return 0


def cmd_verify(args) -> int:
    A = alg.SuperAlgebra.from_json(_load_json(args.algebra))
    closure = alg.check_graded_closure(A)
    leibniz = alg.check_leibniz(A)
    series = alg.lower_central_series(A)
    dims = [s.dim for s in series]
    nilpotent = series[-1].dim == 0
    nilindex = len(series) if nilpotent else None
    report = {
        "graded_closure": {"ok": closure.ok, "violations": [list(v) for v in closure.violations]},
        "leibniz": {
            "ok": leibniz.ok,
            "violations": [
                {"triple": [v.x, v.y, v.z], "residual": [c.to_json() for c in v.residual]}
                for v in leibniz.violations[:20]
            ],
        },
        "nilindex": nilindex if nilpotent else "not nilpotent",
        "series_dims": dims,
        "char_sequence": None,
        "right_annihilator_dim": alg.right_annihilator(A).dim,
        "generators": None,
    }
    if nilpotent and A.n:
        cs = alg.char_sequence(A, extra_samples=args.samples, seed=args.seed)
        report["char_sequence"] = {
            "even_part": list(cs.sequence.even_part),
            "odd_part": list(cs.sequence.odd_part),
            "witness_even": [c.to_json() for c in cs.witness_even],
            "witness_odd": [c.to_json() for c in cs.witness_odd],
        }
    if nilpotent:
        even, odd, _reps = alg.minimal_generators(A)
        report["generators"] = {"even": even, "odd": odd}
    _emit(report)
    return 0 if closure.ok and leibniz.ok else 1


def cmd_iso(args) -> int:
    P = fam.params_from_json(_load_json(args.params_a))
    Q = fam.params_from_json(_load_json(args.params_b))
    if P.kind != Q.kind or P.n != Q.n:
        raise CliError("parameter files differ in kind or n")
    result = iso.decide_iso(P, Q)
    verified = None
    if result.witness is not None:
        verified = iso.verify_witness(P, Q, result.witness)
    _emit(
        {
            "isomorphic": result.isomorphic,
            "witness": result.witness.to_json() if result.witness else None,
            "witness_verified": verified,
            "witness_note": result.witness_note,
            "trace": result.trace,
        }
    )
    return 0 if result.isomorphic else 1


def cmd_enumerate(args) -> int:
    descriptors = fam.enumerate_representatives(args.n, args.kind)
    _emit([d.to_json() for d in descriptors])
    return 0


def cmd_classify(args) -> int:
    P = fam.params_from_json(_load_json(args.params))
    _emit(
        {
            "descriptor": iso.classify(P).to_json(),
            "fingerprint": iso.fingerprint(P).to_json(),
        }
    )
    return 0


def cmd_calibrate(args) -> int:
    table = iso.calibrate_exponents(args.n, args.kind, seed=args.seed, samples=args.samples)
    slots = {
        ("gamma" if k == "gamma" else "beta" if k == "beta" else f"beta_{k}"): {
            "a_exp": v[0],
            "b_exp": v[1],
        }
        for k, v in table.items()
    }
    doc = {"kind": args.kind, "n": args.n, "slots": slots}
    if args.kind == "m2":
        doc["exponent_form"] = "2j-3"
    _emit(doc)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="superleibniz",
        description="Build, verify, classify and compare nilpotent Leibniz superalgebra family members.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("family-build", help="write a family member's structure constants")
    p.add_argument("--kind", choices=("m1", "m2"))
    p.add_argument("--n", type=int)
    p.add_argument("--gamma", help="scalar, e.g. '1', '1/2', '1+i'")
    p.add_argument("--beta", help="scalar")
    p.add_argument("--betas", help='JSON object {"j": scalar}')
    p.add_argument("--params", help="parameter JSON file (alternative to inline flags)")
    p.add_argument("--out", "-o", help="output path (stdout when omitted)")
    p.set_defaults(func=cmd_family_build)

    p = sub.add_parser("verify", help="run all structural checks on an algebra file")
    p.add_argument("algebra")
    p.add_argument("--samples", type=int, default=DEFAULT_SAMPLES, help=f"extra random elements for the characteristic sequence (default {DEFAULT_SAMPLES})")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED, help=f"PRNG seed (default {DEFAULT_SEED})")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("iso", help="decide isomorphism of two parameter files")
    p.add_argument("params_a")
    p.add_argument("params_b")
    p.set_defaults(func=cmd_iso)

    p = sub.add_parser("enumerate", help="list the classification's representative cells")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--kind", choices=("m1", "m2"), required=True)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("classify", help="classify a parameter file")
    p.add_argument("params")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("calibrate", help="re-fit the base-change exponent table from transports")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--kind", choices=("m1", "m2"), required=True)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--samples", type=int, default=4)
    p.set_defaults(func=cmd_calibrate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CliError, ValueError) as exc:
        sys.stderr.write(json.dumps({"error": str(exc)}) + "\n")
        return 2
    except iso.CalibrationError as exc:
        sys.stderr.write(json.dumps({"error": f"calibration failed: {exc}"}) + "\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
