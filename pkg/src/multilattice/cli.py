"""
Batch command-line driver
=========================

One JSON config describes one run:

    {
      "command": "cross" | "plan" | "approximate" | "converge"
                 | "lowerbound" | "tract-check",
      "params": { ... command-specific keys ... },
      "seed": 0,                # optional, overridden by --seed
      "output_dir": "out"       # optional, overridden by --output
    }

Configs are validated strictly (unknown keys rejected).  Every emitted file
embeds the config hash: the SHA-256 of the canonical JSON of
{command, params, seed}.  Output directory and thread count never enter the
hash, so reruns of one semantic config are byte-identical.

Exit status: 0 on success, 2 when the run completed but a theoretical
assumption behind the guarantees failed (plan uncovered, eta too small, or
c at or below the sufficient constant 121.078 with delta = 1/2), 1 on hard
errors (bad config, resource caps).

See the README for the per-command parameter tables.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import warnings
from pathlib import Path

from . import construction
from .approx import (
    SampledFunction,
    TrigPolynomial,
    error_report,
    linf_estimate_against,
    mult_coeffs,
    uncovered_indices,
)
from .construction import PlanParams, build_plan, verify_plan
from .cross import cardinality_bound, enumerate_cross, tail_bound
from .lowerbound import cf_short_vector, fooling_error, pigeonhole_short_vector
from .rng import generator
from .testbed import (
    BernoulliProductFunction,
    CSV_HEADER,
    ExperimentConfig,
    convergence_experiment,
    random_on_cross_poly,
)
from .weights import SmoothnessParams, TheoryParams, WeightSpec, tractability_check

COMMANDS = ("cross", "plan", "approximate", "converge", "lowerbound", "tract-check")


class ConfigError(ValueError):
    pass


def _check_keys(obj: dict, where: str, required: dict, optional: dict) -> dict:
    if not isinstance(obj, dict):
        raise ConfigError(f"{where}: expected an object")
    unknown = set(obj) - set(required) - set(optional)
    if unknown:
        raise ConfigError(f"{where}: unknown keys {sorted(unknown)}")
    out = {}
    for key, typ in required.items():
        if key not in obj:
            raise ConfigError(f"{where}: missing required key {key!r}")
        out[key] = _coerce(obj[key], typ, f"{where}.{key}")
    for key, typ in optional.items():
        if key in obj:
            out[key] = _coerce(obj[key], typ, f"{where}.{key}")
    return out


def _coerce(value, typ, where: str):
    if typ is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"{where}: expected a number")
        return float(value)
    if typ is int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"{where}: expected an integer")
        return value
    if typ is bool:
        if not isinstance(value, bool):
            raise ConfigError(f"{where}: expected a boolean")
        return value
    if typ is str:
        if not isinstance(value, str):
            raise ConfigError(f"{where}: expected a string")
        return value
    if typ is list:
        if not isinstance(value, list):
            raise ConfigError(f"{where}: expected a list")
        return value
    if typ is dict:
        if not isinstance(value, dict):
            raise ConfigError(f"{where}: expected an object")
        return value
    raise AssertionError(typ)


def config_hash(command: str, params: dict, seed: int) -> str:
    canonical = json.dumps(
        {"command": command, "params": params, "seed": seed},
        sort_keys=True,
        separators=(",", ":"),
    )
    return hashlib.sha256(canonical.encode()).hexdigest()


def _write_json(path: Path, payload: dict, chash: str):
    payload = dict(payload)
    payload["config_hash"] = chash
    path.write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n")


def _cross_from_params(obj: dict, where: str):
    fields = _check_keys(
        obj,
        where,
        required={"d": int, "alpha": float, "M": float, "weights": dict},
        optional={},
    )
    spec = WeightSpec.from_json_dict(fields["weights"])
    params = SmoothnessParams(alpha=fields["alpha"], m_radius=fields["M"], dim=fields["d"])
    return params, spec


def _run_cross(params: dict, seed: int, outdir: Path, chash: str) -> int:
    fields = _check_keys(
        params,
        "params",
        required={"d": int, "alpha": float, "M": float, "weights": dict},
        optional={"lambda": float},
    )
    sp, spec = _cross_from_params(
        {k: fields[k] for k in ("d", "alpha", "M", "weights")}, "params"
    )
    cross = enumerate_cross(sp, spec)
    with open(outdir / "cross.csv", "w") as fh:
        cross.to_csv(fh, header_comment=f"config_hash={chash}")
    meta = cross.metadata()
    if "lambda" in fields:
        theory = TheoryParams(lam=fields["lambda"])
        meta["cardinality_bound"] = cardinality_bound(sp, spec, theory)
        if theory.lam < 2.0 and sp.m_radius >= 1.0:
            meta["tail_bound"] = tail_bound(sp, spec, theory)
    _write_json(outdir / "cross_meta.json", meta, chash)
    return 0


def _plan_params(fields: dict, seed: int) -> PlanParams:
    return PlanParams(
        c=fields.get("c", 122.0),
        delta=fields.get("delta", 0.5),
        seed=seed,
        retry_cap_factor=fields.get("retry_cap_factor", 10),
    )


def _run_plan(params: dict, seed: int, outdir: Path, chash: str) -> int:
    fields = _check_keys(
        params,
        "params",
        required={"cross": dict},
        optional={"c": float, "delta": float, "retry_cap_factor": int, "check_radius": int},
    )
    sp, spec = _cross_from_params(fields["cross"], "params.cross")
    cross = enumerate_cross(sp, spec)
    pp = _plan_params(fields, seed)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        plan = build_plan(cross, pp)
    report = verify_plan(cross, plan, check_radius=fields.get("check_radius", 0))
    _write_json(outdir / "plan.json", plan.to_json_dict(), chash)
    _write_json(outdir / "plan_report.json", report.to_json_dict(), chash)
    degraded = (
        bool(caught)
        or not plan.covered
        or not plan.assumption_ok
        or (pp.delta == 0.5 and pp.c <= construction.C_SUFFICIENT)
    )
    return 2 if degraded else 0


def _named_function(obj: dict, cross, seed: int):
    kind = obj.get("type")
    if kind == "bernoulli":
        fields = _check_keys(
            obj,
            "params.function",
            required={"type": str, "degree": int, "gammas": list},
            optional={},
        )
        fn = BernoulliProductFunction(
            dim=cross.dim, degree=fields["degree"], gammas=tuple(fields["gammas"])
        )
        sampled = SampledFunction(
            evaluator=fn, dim=cross.dim, known_coefficients=fn.coeffs_on(cross.indices)
        )
        return sampled, fn.l2_mass_outside(cross), fn
    if kind == "random_poly":
        fields = _check_keys(
            obj,
            "params.function",
            required={"type": str},
            optional={"unit_norm": bool},
        )
        poly = random_on_cross_poly(cross, seed=seed, unit_norm=fields.get("unit_norm", False))
        sampled = SampledFunction.from_trig_polynomial(poly, cross.dim)
        return sampled, 0.0, None
    raise ConfigError(f"params.function.type must be 'bernoulli' or 'random_poly', got {kind!r}")


def _run_approximate(params: dict, seed: int, outdir: Path, chash: str) -> int:
    fields = _check_keys(
        params,
        "params",
        required={"cross": dict, "function": dict},
        optional={"c": float, "delta": float, "retry_cap_factor": int, "grid_per_dim": int},
    )
    sp, spec = _cross_from_params(fields["cross"], "params.cross")
    cross = enumerate_cross(sp, spec)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        plan = build_plan(cross, _plan_params(fields, seed))
    sampled, off_mass, closed_form = _named_function(fields["function"], cross, seed)
    approx = mult_coeffs(sampled, plan, cross)
    with open(outdir / "coefficients.csv", "w") as fh:
        approx.to_csv(fh, dim=cross.dim, header_comment=f"config_hash={chash}")
    grid = fields.get("grid_per_dim", 32)
    truth = sampled.known_coefficients
    if closed_form is not None:
        # closed-form ground truth: exact L2 via on-cross Parseval + off mass
        on = sum(abs(truth[k] - approx.terms[k]) ** 2 for k in cross.indices)
        l2 = float((on + off_mass) ** 0.5)
        linf = float(linf_estimate_against(closed_form, approx, cross.dim, grid))
        rep = {"l2_exact": l2, "linf_estimate": linf}
    else:
        rep = error_report(truth, approx, cross, grid)
    rep["uncovered_count"] = len(uncovered_indices(plan, cross))
    _write_json(outdir / "error.json", rep, chash)
    degraded = bool(caught) or not plan.covered
    return 2 if degraded else 0


def _run_converge(params: dict, seed: int, outdir: Path, chash: str) -> int:
    fields = _check_keys(
        params,
        "params",
        required={"d": int, "alpha_eff": float, "weights": dict, "m_grid": list},
        optional={
            "degree": int,
            "fn_gammas": list,
            "c": float,
            "delta": float,
            "num_shifts": int,
            "grid_per_dim": int,
            "compare_single": bool,
        },
    )
    cfg = ExperimentConfig(
        dim=fields["d"],
        alpha_eff=fields["alpha_eff"],
        spec=WeightSpec.from_json_dict(fields["weights"]),
        m_grid=tuple(float(m) for m in fields["m_grid"]),
        degree=fields.get("degree", 1),
        fn_gammas=tuple(fields["fn_gammas"]) if "fn_gammas" in fields else None,
        c=fields.get("c", 122.0),
        delta=fields.get("delta", 0.5),
        seed=seed,
        num_shifts=fields.get("num_shifts", 16),
        grid_per_dim=fields.get("grid_per_dim", 64),
        compare_single=fields.get("compare_single", True),
    )
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        result = convergence_experiment(cfg)
    for name, rows in (
        ("convergence_multi.csv", result.rows),
        ("convergence_single.csv", result.single_rows),
    ):
        if not rows and name.endswith("single.csv"):
            continue
        with open(outdir / name, "w") as fh:
            fh.write(f"# config_hash={chash}\n{CSV_HEADER}\n")
            for row in rows:
                fh.write(row.csv_line() + "\n")
    _write_json(outdir / "convergence_summary.json", result.summary_dict(), chash)
    degraded = bool(caught) or any(not r.covered for r in result.rows)
    return 2 if degraded else 0


def _run_lowerbound(params: dict, seed: int, outdir: Path, chash: str) -> int:
    fields = _check_keys(
        params,
        "params",
        required={"num_pairs": int, "n_min": int, "n_max": int, "alphas": list},
        optional={},
    )
    from .primes import primes_above

    primes = []
    gen = primes_above(fields["n_min"] - 1)
    while True:
        p = next(gen)
        if p > fields["n_max"]:
            break
        primes.append(p)
    if not primes:
        raise ConfigError("no primes in [n_min, n_max]")
    rng = generator(seed, 0)
    alphas = [float(a) for a in fields["alphas"]]
    lines = []
    for _ in range(fields["num_pairs"]):
        n = int(primes[rng.integers(len(primes))])
        g = (int(rng.integers(1, n)), int(rng.integers(1, n)))
        for method, builder in (
            ("pigeonhole", pigeonhole_short_vector),
            ("continued_fraction", cf_short_vector),
        ):
            sdv = builder(n, g)
            for alpha in alphas:
                fe = fooling_error(n, alpha, sdv)
                lines.append(
                    f"{n},{g[0]},{g[1]},{method},{sdv.h[0]},{sdv.h[1]},"
                    f"{fe['error_value']!r},{fe['floor']!r}"
                )
    with open(outdir / "lowerbound.csv", "w") as fh:
        fh.write(f"# config_hash={chash}\nN,g1,g2,method,h1,h2,error_value,floor\n")
        for line in lines:
            fh.write(line + "\n")
    return 0


def _run_tract_check(params: dict, seed: int, outdir: Path, chash: str) -> int:
    fields = _check_keys(
        params,
        "params",
        required={"weights": dict, "alpha": float, "lambda": float},
        optional={"pod_c": float, "dim": int},
    )
    spec = WeightSpec.from_json_dict(fields["weights"])
    report = tractability_check(
        spec,
        fields["alpha"],
        fields["lambda"],
        pod_c=fields.get("pod_c", 1.0),
        dim=fields.get("dim"),
    )
    _write_json(outdir / "tract_report.json", report.to_json_dict(), chash)
    return 0


_RUNNERS = {
    "cross": _run_cross,
    "plan": _run_plan,
    "approximate": _run_approximate,
    "converge": _run_converge,
    "lowerbound": _run_lowerbound,
    "tract-check": _run_tract_check,
}


def run(config: dict, seed_override: int | None = None, output_override: str | None = None) -> int:
    """Validate and execute one config; returns the process exit status."""
    top = _check_keys(
        config,
        "config",
        required={"command": str, "params": dict},
        optional={"seed": int, "output_dir": str},
    )
    command = top["command"]
    if command not in COMMANDS:
        raise ConfigError(f"unknown command {command!r}; expected one of {COMMANDS}")
    seed = seed_override if seed_override is not None else top.get("seed", 0)
    outdir = Path(output_override if output_override is not None else top.get("output_dir", "."))
    outdir.mkdir(parents=True, exist_ok=True)
    chash = config_hash(command, top["params"], seed)
    status = _RUNNERS[command](top["params"], seed, outdir, chash)
    resolved = {
        "command": command,
        "params": top["params"],
        "seed": seed,
        "exit_status": status,
    }
    _write_json(outdir / "run_config.json", resolved, chash)
    return status


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="multilattice",
        description="Batch driver for lattice construction, reconstruction, and bound checks.",
    )
    parser.add_argument("--config", required=True, help="path to a JSON run config")
    parser.add_argument("--seed", type=int, default=None, help="override the config seed")
    parser.add_argument("--output", default=None, help="override the output directory")
    parser.add_argument(
        "--threads",
        type=int,
        default=None,
        help="worker threads (results are identical for any value)",
    )
    args = parser.parse_args(argv)
    if args.threads is not None:
        os.environ["OMP_NUM_THREADS"] = str(args.threads)
        os.environ["OPENBLAS_NUM_THREADS"] = str(args.threads)
    try:
        config = json.loads(Path(args.config).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return 1
    try:
        return run(config, seed_override=args.seed, output_override=args.output)
    except (ConfigError, ValueError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
