"""Command-line front end.

Subcommands:
  eval      evaluate pdf/cdf (and the CDF's two parts) on a grid
  fit       moment-match a basis and emit the coefficient vector
  converge  error-vs-truncation study against an independent reference
  validate  run the named validation checks

Distribution spec documents are JSON, read from a file or stdin ('-'):

  {
    "source": {"kind": "family", "name": "nakagami_m", "params": {"m": 2.5, "omega": 1.0}},
    "basis":  {"alpha": 2.0, "b": 0.4, "beta": 1.5},      # optional; fitted when absent
    "n_max":  64,                                          # optional
    "tol":    1e-10,                                       # truncation tolerance
    "grid":   {"min": 0.0, "max": 5.0, "count": 20}
  }

Alternative sources: {"kind": "samples", "path": "data.txt", "alpha": 2.0,
"k_max": 16} for a plain-text sample file (one value per line, '#' comments)
and {"kind": "ncx2", "nu": 4.0, "lambda": 2.0} for the noncentral
chi-square basis (alpha=1, b=2, beta=nu/2-1) with its closed-form
coefficients; that source fixes the basis, so "basis" must be omitted.

Exit codes: 0 success, 1 validation/numerical failure, 2 usage or spec
error, 3 degenerate moment fit. Numbers are serialized with 17 significant
digits so output is byte-stable for fixed inputs and seed.
"""

import argparse
import json
import sys
from dataclasses import dataclass

import numpy as np

from . import coefficients as co
from . import ncx2, oracle, series, validate
from .errors import (
    CapabilityError,
    ConvergenceError,
    DataError,
    DomainError,
    FitError,
    LagfadeError,
    NumericalError,
    RangeError,
)

__all__ = ["main"]


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


class SpecDocError(ValueError):
    """Malformed distribution spec document."""


def _load_doc(path: str) -> dict:
    try:
        if path == "-":
            doc = json.load(sys.stdin)
        else:
            with open(path, "r", encoding="utf-8") as fh:
                doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise SpecDocError(f"cannot read spec document {path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise SpecDocError("spec document must be a JSON object")
    return doc


def _family_from(name: str, params: dict) -> co.FamilyParams:
    cls = co.FAMILIES.get(name)
    if cls is None:
        raise SpecDocError(
            f"unknown family {name!r}; choose from {sorted(co.FAMILIES)}"
        )
    try:
        return cls(**params)
    except TypeError as exc:
        raise SpecDocError(f"bad parameters for family {name!r}: {exc}") from exc


@dataclass
class Distribution:
    spec: series.SeriesSpec
    coeffs: series.CoefficientVector
    flags: tuple
    n_used: int
    converged: bool


def _build_distribution(doc: dict, tol_override: float | None) -> tuple:
    """Returns (Distribution, grid array). Raises SpecDocError on bad docs."""
    source = doc.get("source")
    if not isinstance(source, dict) or "kind" not in source:
        raise SpecDocError('spec document needs a "source" object with a "kind"')
    kind = source["kind"]
    n_max = int(doc.get("n_max", 64))
    if n_max < 0:
        raise SpecDocError("n_max must be >= 0")
    basis = doc.get("basis")

    provider = None
    if kind == "family":
        fam = _family_from(source.get("name", ""), source.get("params", {}))
        provider = co.family_moments(fam, k_max=n_max)
    elif kind == "samples":
        if "path" not in source or "alpha" not in source:
            raise SpecDocError('samples source needs "path" and "alpha"')
        samples = co.load_samples(source["path"])
        provider = co.empirical_moments(
            samples, float(source["alpha"]), int(source.get("k_max", n_max))
        )
        n_max = min(n_max, provider.k_max)
    elif kind == "ncx2":
        if basis is not None:
            raise SpecDocError(
                'the "ncx2" source fixes its basis; drop the "basis" field'
            )
        if "nu" not in source:
            raise SpecDocError('ncx2 source needs "nu" (and optionally "lambda")')
        p = ncx2.Ncx2Params(float(source["nu"]), float(source.get("lambda", 0.0)))
        spec = ncx2.series_spec_for(p)
        coeffs = ncx2.series_coefficients(p, n_max)
        flags = tuple(False for _ in coeffs.c)
    else:
        raise SpecDocError(f'unknown source kind {kind!r}')

    if provider is not None:
        if basis is not None:
            try:
                spec = series.SeriesSpec(
                    float(basis["alpha"]), float(basis["b"]), float(basis["beta"])
                )
            except (KeyError, TypeError) as exc:
                raise SpecDocError(f"bad basis object: {exc}") from exc
        else:
            spec = co.fit_spec(provider)
        coeffs = co.coefficient_vector(provider, spec, n_max)
        flags = co.cancellation_flags(coeffs, provider)

    grid_doc = doc.get("grid")
    if not isinstance(grid_doc, dict):
        raise SpecDocError('spec document needs a "grid" object (min, max, count)')
    try:
        lo, hi, count = float(grid_doc["min"]), float(grid_doc["max"]), int(grid_doc["count"])
    except (KeyError, TypeError, ValueError) as exc:
        raise SpecDocError(f"bad grid object: {exc}") from exc
    if count < 2 or not (0.0 <= lo <= hi):
        raise SpecDocError("grid needs count >= 2 and 0 <= min <= max")
    grid = np.linspace(lo, hi, count)

    tol = float(tol_override if tol_override is not None else doc.get("tol", 1e-10))
    x_max = series.to_power_variable(hi, spec)
    report = series.choose_truncation(spec, coeffs, x_max, tol)
    n_used = report.n_used if report.converged else coeffs.n_max
    dist = Distribution(
        spec=spec,
        coeffs=coeffs.truncate(n_used),
        flags=flags[: n_used + 1],
        n_used=n_used,
        converged=report.converged,
    )
    return dist, grid


def _cmd_eval(args) -> int:
    dist, grid = _build_distribution(_load_doc(args.spec_doc), args.tol)
    pdf = series.pdf_grid(dist.spec, dist.coeffs, grid)
    s_part, g_part = series.cdf_parts_grid(dist.spec, dist.coeffs, grid)
    cdf = s_part + g_part
    if args.format == "csv":
        print("r,pdf,cdf,series_part,gamma_part")
        for i in range(grid.size):
            print(
                ",".join(
                    _fmt(v) for v in (grid[i], pdf[i], cdf[i], s_part[i], g_part[i])
                )
            )
    else:
        rows = [
            {
                "r": float(grid[i]),
                "pdf": float(pdf[i]),
                "cdf": float(cdf[i]),
                "series_part": float(s_part[i]),
                "gamma_part": float(g_part[i]),
            }
            for i in range(grid.size)
        ]
        doc = {
            "basis": {
                "alpha": dist.spec.alpha,
                "b": dist.spec.b,
                "beta": dist.spec.beta,
            },
            "n_used": dist.n_used,
            "rows": rows,
        }
        print(json.dumps(doc, indent=2))
    return 0


def _parse_params(pairs) -> dict:
    out = {}
    for pair in pairs or ():
        if "=" not in pair:
            raise SpecDocError(f"--param expects key=value, got {pair!r}")
        key, val = pair.split("=", 1)
        try:
            out[key.strip()] = float(val)
        except ValueError as exc:
            raise SpecDocError(f"--param value must be numeric, got {pair!r}") from exc
    return out


def _cmd_fit(args) -> int:
    if (args.family is None) == (args.samples is None):
        raise SpecDocError("fit needs exactly one of --family or --samples")
    if args.family is not None:
        fam = _family_from(args.family, _parse_params(args.param))
        provider = co.family_moments(fam, k_max=max(args.n_max, 2))
        alpha = provider.alpha
    else:
        if args.alpha is None:
            raise SpecDocError("--samples requires --alpha")
        samples = co.load_samples(args.samples)
        provider = co.empirical_moments(samples, args.alpha, max(args.n_max, 2))
        alpha = args.alpha
    spec = co.fit_spec(provider, alpha)
    vec = co.coefficient_vector(provider, spec, args.n_max)
    flags = co.cancellation_flags(vec, provider)
    if args.format == "csv":
        print("n,coefficient,cancellation_ratio,unreliable")
        for n, (c, ratio, flag) in enumerate(zip(vec.c, vec.cancellation, flags)):
            print(f"{n},{_fmt(c)},{_fmt(ratio)},{str(flag).lower()}")
    else:
        doc = {
            "alpha": spec.alpha,
            "b": spec.b,
            "beta": spec.beta,
            "coefficients": list(vec.c),
            "cancellation_flags": list(flags),
        }
        print(json.dumps(doc, indent=2))
    return 0


def _cmd_converge(args) -> int:
    doc = _load_doc(args.spec_doc)
    dist, grid = _build_distribution(doc, args.tol)
    try:
        n_list = sorted({int(s) for s in args.n_list.split(",") if s.strip() != ""})
    except ValueError as exc:
        raise SpecDocError(f"--n-list must be comma-separated integers: {exc}") from exc
    if not n_list or n_list[0] < 0:
        raise SpecDocError("--n-list needs nonnegative integers")

    source_kind = doc.get("source", {}).get("kind")
    if args.reference == "oracle":
        if source_kind != "ncx2":
            raise SpecDocError('--reference oracle is only available for the "ncx2" source')
        p = ncx2.Ncx2Params(
            float(doc["source"]["nu"]), float(doc["source"].get("lambda", 0.0))
        )
        ref = np.array([ncx2.ncx2_cdf_oracle(p, float(r)) for r in grid])
    else:
        ref = np.empty(grid.size)
        for i, r_val in enumerate(grid):
            if r_val == 0.0:
                ref[i] = 0.0
                continue
            ref[i] = oracle.integrate(
                lambda t: series.pdf_grid(dist.spec, dist.coeffs, t),
                0.0,
                float(r_val),
                1e-10,
            ).value

    rows = []
    for n in n_list:
        n_eff = min(n, dist.coeffs.n_max)
        cdf = series.cdf_grid(dist.spec, dist.coeffs.truncate(n_eff), grid)
        rows.append((n, float(np.max(np.abs(cdf - ref)))))
    if args.format == "csv":
        print("N,max_abs_cdf_error")
        for n, err in rows:
            print(f"{n},{_fmt(err)}")
    else:
        print(json.dumps({"rows": [{"N": n, "max_abs_cdf_error": e} for n, e in rows]}, indent=2))
    return 0


def _cmd_validate(args) -> int:
    report = validate.run_validation(seed=args.seed, level=args.level)
    if args.format == "csv":
        print("name,measured,tolerance,comparison,passed,seconds")
        for r in report.results:
            print(
                f"{r.name},{_fmt(r.measured)},{_fmt(r.tolerance)},"
                f"{r.comparison},{str(r.passed).lower()},{r.seconds:.2f}"
            )
    elif args.format == "json":
        doc = {
            "level": report.level,
            "seed": report.seed,
            "passed": report.passed,
            "results": [
                {
                    "name": r.name,
                    "measured": r.measured,
                    "tolerance": r.tolerance,
                    "comparison": r.comparison,
                    "passed": r.passed,
                    "seconds": round(r.seconds, 3),
                }
                for r in report.results
            ],
        }
        print(json.dumps(doc, indent=2))
    else:
        print(report.render())
    return 0 if report.passed else 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lagfade",
        description="Laguerre-series fading-envelope distributions: evaluate, fit, study, validate.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("csv", "json", "text"), default=None)
    common.add_argument("--tol", type=float, default=None, help="truncation tolerance override")
    common.add_argument("--seed", type=int, default=validate.DEFAULT_SEED)
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", parents=[common], help="evaluate pdf/cdf on a grid")
    p_eval.add_argument("spec_doc", help="JSON spec document path, or '-' for stdin")
    p_eval.set_defaults(fn=_cmd_eval, default_format="csv")

    p_fit = sub.add_parser("fit", parents=[common], help="moment-match a basis")
    p_fit.add_argument("--family", choices=sorted(co.FAMILIES), default=None)
    p_fit.add_argument("--param", action="append", metavar="KEY=VALUE")
    p_fit.add_argument("--samples", default=None, help="sample file path")
    p_fit.add_argument("--alpha", type=float, default=None)
    p_fit.add_argument("--n-max", type=int, default=16)
    p_fit.set_defaults(fn=_cmd_fit, default_format="json")

    p_conv = sub.add_parser("converge", parents=[common], help="error vs truncation order")
    p_conv.add_argument("spec_doc")
    p_conv.add_argument("--n-list", default="0,1,2,4,8,16,32,64")
    p_conv.add_argument("--reference", choices=("oracle", "quadrature"), default="quadrature")
    p_conv.set_defaults(fn=_cmd_converge, default_format="csv")

    p_val = sub.add_parser("validate", parents=[common], help="run the validation checks")
    p_val.add_argument("--level", choices=("quick", "full"), default="quick")
    p_val.set_defaults(fn=_cmd_validate, default_format="text")
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.format is None:
        args.format = args.default_format
    if args.format == "text" and args.command != "validate":
        args.format = "csv"
    try:
        return args.fn(args)
    except FitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (SpecDocError, DataError, DomainError, CapabilityError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ConvergenceError, NumericalError, RangeError, LagfadeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
