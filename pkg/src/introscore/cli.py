"""Command-line interface.

Exit codes: 0 success, 1 input or validation error, 2 numeric degeneracy
(flat posterior, rank-deficient design).  Every output embeds or sits next
to a run manifest; nothing time-dependent is written, so identical
invocations produce identical bytes.
"""

from __future__ import annotations

import argparse
import re
import sys
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from . import bayes, calibration, formats, linear, quadratic, synthetic
from .errors import InputError, IntroscoreError, NumericError
from .profile import NormConfig, validate
from .report import RunManifest, emit_report


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(f"{self.prog}: {message}")


def _write_text(output: str | None, text: str) -> None:
    if output in (None, "-"):
        sys.stdout.write(text)
        return
    try:
        Path(output).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise InputError(f"{output}: cannot write ({exc.strerror})") from None


def _sidecar(output: str) -> Path:
    return Path(output).with_suffix(".manifest.json")


def _write_csv(args, header, rows, manifest: RunManifest) -> None:
    if args.output in (None, "-"):
        raise InputError("CSV output needs --output (the manifest is written beside it)")
    try:
        formats.write_rows(args.output, header, rows)
    except OSError as exc:
        raise InputError(f"{args.output}: cannot write ({exc.strerror})") from None
    _sidecar(args.output).write_text(formats.dumps(manifest.to_dict()), encoding="utf-8")


def _require(args, *names):
    for n in names:
        if getattr(args, n.replace("-", "_")) is None:
            raise InputError(f"{args.command}: --{n} is required")


def _norm_config(args) -> NormConfig:
    if args.norm_config is None:
        return NormConfig()
    return NormConfig.from_dict(formats.load_json(args.norm_config))


def _parse_prior(text: str) -> bayes.Prior:
    if text == "uniform":
        return bayes.Prior.uniform()
    m = re.fullmatch(r"normal:([^,]+),([^,]+)", text)
    if m:
        try:
            return bayes.Prior.normal(float(m.group(1)), float(m.group(2)))
        except ValueError:
            raise InputError(f"bad --prior {text!r}") from None
    doc = formats.load_json(text)
    return bayes.Prior.from_dict(doc.get("prior", doc))


def _bayes_params(args) -> tuple[list[bayes.FactorParams], bayes.Prior]:
    _require(args, "factor-params")
    doc = formats.load_json(args.factor_params)
    try:
        factors, prior = bayes.params_from_dict(doc)
    except InputError as exc:
        raise InputError(f"{args.factor_params}: {exc}") from None
    if args.prior is not None:
        prior = _parse_prior(args.prior)
    return factors, prior


def _manifest(args, inputs=(), params=()) -> RunManifest:
    return RunManifest(
        command=args.command,
        input_paths=[str(p) for p in inputs if p is not None],
        parameter_paths=[str(p) for p in params if p is not None],
        seed=args.seed,
    )


# --- subcommands ---------------------------------------------------------------


def cmd_validate(args) -> int:
    _require(args, "input")
    raws = formats.read_profiles(args.input)
    rows, n_bad = [], 0
    for i, raw in enumerate(raws, start=1):
        bad = validate(raw)
        n_bad += bool(bad)
        rows.append({"row": i, "id": raw.id, "ok": not bad, "violations": [v._asdict() for v in bad]})
    doc = {"manifest": _manifest(args, [args.input]).to_dict(), "n_rows": len(rows), "n_invalid": n_bad, "rows": rows}
    _write_text(args.output, formats.dumps(doc))
    if n_bad:
        first = next(r for r in rows if not r["ok"])
        v = first["violations"][0]
        print(f"{args.input}: row {first['row']}, column {v['field']!r}: violates {v['constraint']} ({n_bad} invalid row(s))", file=sys.stderr)
        return 1
    return 0


def cmd_score(args) -> int:
    _require(args, "input", "weights")
    table = formats.read_table(args.input, _norm_config(args))
    weights = linear.LinearWeights.from_dict(formats.load_json(args.weights))
    rng = np.random.default_rng(args.seed) if args.seed is not None else None
    records = []
    for rid, x in zip(table.ids, table.features):
        parts = linear.partial_effects(x, weights)
        s = linear.score(x, weights, rng)
        records.append({"id": rid, "score": s, "out_of_range": linear.out_of_range(s), "contributions": parts.as_dict()})
    manifest = _manifest(args, [args.input], [args.weights, args.norm_config])
    if args.format == "csv":
        header = ["id", "score", "out_of_range", *linear.WEIGHT_NAMES]
        rows = [[r["id"], r["score"], r["out_of_range"], *r["contributions"].values()] for r in records]
        _write_csv(args, header, rows, manifest)
    else:
        _write_text(args.output, formats.dumps({"manifest": manifest.to_dict(), "records": records}))
    return 0


def _infer_row(obs, prior, args, seed) -> dict[str, Any]:
    post = bayes.posterior_grid(obs, prior, args.grid_points)
    coeffs = quadratic.quad_coeffs(obs, prior)
    cf, cf_edge = quadratic.map_closed_form(coeffs)
    num, _ = bayes.map_numeric(obs, prior)
    rec = {
        "posterior": post.summary(),
        "map_closed_form": cf,
        "map_numeric": num,
        "on_boundary": cf_edge,
        "agreement_delta": abs(cf - num),
        "quadratic": coeffs.to_dict(),
    }
    if seed is not None:
        rec["mc"] = bayes.posterior_mc(obs, prior, args.mc_samples, seed).to_dict()
    return rec


def cmd_infer(args) -> int:
    _require(args, "input")
    factors, prior = _bayes_params(args)
    table = formats.read_table(args.input, _norm_config(args))
    seeds: list[Any] = [None] * len(table.ids)
    if args.mc_samples is not None:
        if args.seed is None:
            raise InputError("infer: --mc-samples needs --seed")
        seeds = np.random.SeedSequence(args.seed).spawn(len(table.ids))
    records = []
    for rid, x, seed in zip(table.ids, table.features, seeds):
        try:
            rec = _infer_row(bayes.observe(x, factors), prior, args, seed)
        except NumericError as exc:
            raise type(exc)(f"{args.input}: row id {rid!r}: {exc}") from None
        records.append({"id": rid, **rec})
    manifest = _manifest(args, [args.input], [args.factor_params, args.prior, args.norm_config])
    if args.format == "csv":
        header = ["id", "mean", "variance", "ci_lo", "ci_hi", "map_grid", "map_closed_form", "map_numeric", "on_boundary", "agreement_delta", "a1", "a2", "a3"]
        rows = []
        for r in records:
            p, q = r["posterior"], r["quadratic"]
            rows.append([r["id"], p["mean"], p["variance"], *p["credible_interval_95"], p["map"], r["map_closed_form"], r["map_numeric"], r["on_boundary"], r["agreement_delta"], q["a1"], q["a2"], q["a3"]])
        _write_csv(args, header, rows, manifest)
    else:
        _write_text(args.output, formats.dumps({"manifest": manifest.to_dict(), "prior": prior.to_dict(), "records": records}))
    return 0


def cmd_calibrate(args) -> int:
    _require(args, "input")
    if args.weights is None and args.factor_params is None:
        raise InputError("calibrate: give --weights and/or --factor-params as output paths")
    cohort = formats.read_table(args.input, _norm_config(args)).cohort()
    manifest = _manifest(args, [args.input], [args.norm_config])
    doc: dict[str, Any] = {"manifest": manifest.to_dict(), "n": len(cohort)}
    if args.weights is not None:
        weights, diag = linear.fit_ols(cohort.features, cohort.labels, intercept=args.intercept)
        _write_text(args.weights, formats.dumps(weights.to_dict()))
        doc["linear"] = diag.to_dict()
    if args.factor_params is not None:
        try:
            ids = [int(s) for s in args.factors.split(",")]
        except ValueError:
            raise InputError(f"--factors must be comma-separated integers, got {args.factors!r}") from None
        factors = calibration.fit_factor_params(cohort, ids)
        prior = calibration.fit_prior(cohort.labels, args.prior_kind)
        _write_text(args.factor_params, formats.dumps(bayes.params_to_dict(factors, prior)))
        doc["bayes"] = bayes.params_to_dict(factors, prior)
    _write_text(args.output, formats.dumps(doc))
    return 0


def cmd_simulate(args) -> int:
    _require(args, "input", "seed", "output")
    cfg = synthetic.GenConfig.from_dict(formats.load_json(args.input))
    cfg.seed = args.seed
    cohort = synthetic.generate_cohort(cfg)
    formats.write_cohort(args.output, cohort)
    _sidecar(args.output).write_text(formats.dumps(_manifest(args, [args.input]).to_dict()), encoding="utf-8")
    return 0


def cmd_recover(args) -> int:
    _require(args, "input")
    factors, prior = _bayes_params(args)
    cohort = formats.read_table(args.input, _norm_config(args)).cohort()
    kw: dict[str, Any] = {}
    if args.estimator in synthetic.RANDOMIZED_ESTIMATORS:
        if args.seed is None:
            raise InputError(f"recover: estimator {args.estimator!r} needs --seed")
        kw = {"seed": args.seed, "n_samples": args.mc_samples or 10_000}
    elif args.estimator in ("grid_mean", "grid_map"):
        kw = {"n_points": args.grid_points}
    est = synthetic.estimate_cohort(cohort.features, factors, prior, args.estimator, **kw)
    rep = synthetic.recovery_report(cohort, est, args.estimator)
    doc = {"manifest": _manifest(args, [args.input], [args.factor_params, args.prior]).to_dict(), **rep.to_dict()}
    _write_text(args.output, formats.dumps(doc))
    return 0


def _safe_name(rid: str) -> str:
    return re.sub(r"[^A-Za-z0-9._-]", "_", rid) or "row"


def cmd_report(args) -> int:
    _require(args, "input", "output")
    factors, prior = _bayes_params(args)
    table = formats.read_table(args.input, _norm_config(args))
    pick = list(zip(table.ids, table.features))
    if args.id is not None:
        pick = [(rid, x) for rid, x in pick if rid == args.id]
        if not pick:
            raise InputError(f"{args.input}: no row with id {args.id!r}")
    out = Path(args.output)
    out.mkdir(parents=True, exist_ok=True)
    manifest = _manifest(args, [args.input], [args.factor_params, args.prior, args.norm_config])
    for rid, x in pick:
        post = bayes.posterior_grid(bayes.observe(x, factors), prior, args.grid_points)
        emit_report(post, out / f"{_safe_name(rid)}.csv", manifest)
    return 0


COMMANDS = {
    "validate": (cmd_validate, "check profile rows and list violations"),
    "score": (cmd_score, "linear score and per-term contributions"),
    "infer": (cmd_infer, "posterior summaries, closed-form and numeric MAP"),
    "calibrate": (cmd_calibrate, "fit linear weights and/or factor parameters"),
    "simulate": (cmd_simulate, "generate a synthetic labelled cohort"),
    "recover": (cmd_recover, "score an estimator against cohort labels"),
    "report": (cmd_report, "posterior density tables for plotting"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="introscore", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, (_, help_) in COMMANDS.items():
        p = sub.add_parser(name, help=help_)
        p.add_argument("--input")
        p.add_argument("--output")
        p.add_argument("--weights")
        p.add_argument("--factor-params")
        p.add_argument("--prior", help="'uniform', 'normal:MU,SIGMA' or a JSON file")
        p.add_argument("--grid-points", type=int, default=1001)
        p.add_argument("--mc-samples", type=int)
        p.add_argument("--seed", type=int)
        p.add_argument("--norm-config")
        p.add_argument("--format", choices=("json", "csv"), default="json")
        if name == "calibrate":
            p.add_argument("--factors", default=",".join(map(str, bayes.DEFAULT_FACTOR_IDS)))
            p.add_argument("--prior-kind", choices=("uniform", "normal"), default="uniform")
            p.add_argument("--intercept", action="store_true")
        if name == "recover":
            p.add_argument("--estimator", choices=sorted(synthetic.ESTIMATORS), default="posterior_mean")
        if name == "report":
            p.add_argument("--id")
    return parser


def run_command(argv: Sequence[str]) -> int:
    """Run one CLI invocation and return its exit code."""
    try:
        args = build_parser().parse_args(list(argv))
        return COMMANDS[args.command][0](args)
    except NumericError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except IntroscoreError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()
