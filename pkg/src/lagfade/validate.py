"""Named validation checks behind ``lagfade validate`` and the test suite.

Each check measures one property of the build against an independent
reference (quadrature, closed forms, exact coefficients, Monte Carlo) and
reports the observed error next to its tolerance. ``quick`` shrinks grids
and sample counts to finish in seconds; ``full`` runs everything at the
sizes the tolerances were calibrated for.
"""

import math
import time
from dataclasses import dataclass

import numpy as np

from . import _kernels
from . import coefficients as co
from . import ncx2, oracle, series, specfun
from .errors import DomainError

__all__ = ["CheckResult", "ValidationReport", "run_validation"]

DEFAULT_SEED = 20260810


@dataclass(frozen=True)
class CheckResult:
    name: str
    measured: float
    tolerance: float
    passed: bool
    comparison: str  # "<=" or ">"
    seconds: float


@dataclass(frozen=True)
class ValidationReport:
    level: str
    seed: int
    results: tuple

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def render(self) -> str:
        lines = [f"validation level={self.level} seed={self.seed}"]
        for r in self.results:
            verdict = "PASS" if r.passed else "FAIL"
            op = "must stay <=" if r.comparison == "<=" else "must exceed"
            lines.append(
                f"{verdict}  {r.name:<34s} measured {r.measured:.3e}  "
                f"{op} {r.tolerance:.1e}  [{r.seconds:.2f}s]"
            )
        lines.append("overall: " + ("PASS" if self.passed else "FAIL"))
        return "\n".join(lines)


def _timed(name, tolerance, measured_fn, comparison="<="):
    t0 = time.perf_counter()
    measured = float(measured_fn())
    dt = time.perf_counter() - t0
    passed = measured <= tolerance if comparison == "<=" else measured > tolerance
    return CheckResult(name, measured, tolerance, passed, comparison, dt)


_NU_LAM_FULL = tuple((nu, lam) for nu in (1.0, 4.0, 7.0) for lam in (0.5, 2.0, 5.0))
_NU_LAM_QUICK = ((4.0, 2.0), (1.0, 0.5))


def _builtin_cases(n_max=40):
    """(label, spec, coeffs, r_max) for the built-in test distributions."""
    cases = []
    for label, fam, r_max in (
        ("rayleigh", co.Rayleigh(1.0), 3.0),
        ("nakagami", co.NakagamiM(2.5, 1.0), 3.0),
        ("weibull", co.Weibull(3.0, 1.0), 2.5),
        ("ncx2-fitted", co.NoncentralChiSquare(4.0, 2.0), 15.0),
    ):
        prov = co.family_moments(fam, k_max=n_max)
        spec = co.fit_spec(prov)
        cases.append((label, spec, co.coefficient_vector(prov, spec, n_max), r_max))
    p = ncx2.Ncx2Params(4.0, 2.0)
    cases.append(
        ("ncx2-mapped", ncx2.series_spec_for(p), ncx2.series_coefficients(p, n_max), 15.0)
    )
    return cases


def _orthogonality_error(betas, n_top):
    worst = 0.0
    for beta in betas:
        for n in range(n_top + 1):
            for l in range(n + 1):
                diag = math.exp(specfun.log_gamma(1.0 + beta)) * specfun.gen_binomial(n, beta)
                scale = max(
                    diag,
                    math.exp(specfun.log_gamma(1.0 + beta)) * specfun.gen_binomial(l, beta),
                )
                cutoff = oracle.exp_tail_cutoff(beta + n + l, 1e-11 * scale)

                def f(x, l=l, n=n, beta=beta):
                    return (
                        x**beta
                        * np.exp(-x)
                        * _kernels.laguerre_grid(l, beta, x)
                        * _kernels.laguerre_grid(n, beta, x)
                    )

                q = oracle.integrate(f, 0.0, cutoff, 1e-10 * scale)
                expected = diag if n == l else 0.0
                worst = max(worst, abs(q.value - expected) / scale)
    return worst


def _weight_omission_deviation():
    # beta = 2, n = l = 1, integrand missing the x^beta weight
    beta = 2.0
    expected = math.exp(specfun.log_gamma(3.0)) * specfun.gen_binomial(1, beta)  # 6

    def f(x):
        l1 = _kernels.laguerre_grid(1, beta, x)
        return np.exp(-x) * l1 * l1

    q = oracle.integrate(f, 0.0, oracle.exp_tail_cutoff(4.0, 1e-12), 1e-10)
    return abs(q.value - expected) / expected


def _cdf_vs_quadrature_error(cases, grid_points):
    worst = 0.0
    for _, spec, coeffs, r_max in cases:
        grid = np.linspace(0.0, r_max, grid_points)
        cdf_vals = series.cdf_grid(spec, coeffs, grid)
        for r_val, f_val in zip(grid, cdf_vals):
            if r_val == 0.0:
                worst = max(worst, abs(f_val))
                continue
            q = oracle.integrate(
                lambda t, spec=spec, coeffs=coeffs: series.pdf_grid(spec, coeffs, t),
                0.0,
                float(r_val),
                1e-10,
            )
            worst = max(worst, abs(f_val - q.value))
    return worst


def _erratum_series_part():
    p = ncx2.Ncx2Params(4.0, 2.0)
    spec, coeffs = ncx2.series_spec_for(p), ncx2.series_coefficients(p, 64)
    s, _ = series.cdf_parts_grid(spec, coeffs, [100.0, 120.0, 140.0])
    return float(np.max(np.abs(s)))


def _erratum_gamma_deficit():
    p = ncx2.Ncx2Params(4.0, 2.0)
    spec, coeffs = ncx2.series_spec_for(p), ncx2.series_coefficients(p, 64)
    _, g = series.cdf_parts_grid(spec, coeffs, [100.0, 120.0, 140.0])
    return float(np.max(1.0 - g))


def _special_case_coefficient_error(combos, n_top):
    worst = 0.0
    for nu, lam in combos:
        prov = co.family_moments(co.NoncentralChiSquare(nu, lam), k_max=n_top)
        spec = ncx2.series_spec_for(ncx2.Ncx2Params(nu, lam))
        expected = 1.0
        for n in range(n_top + 1):
            got = co.coefficient(prov, spec, n)
            worst = max(worst, abs(got - expected) / abs(expected))
            expected *= (-0.5 * lam) / (n + 1.0)
    return worst


def _cdf_series_vs_oracle_error(combos, grid_points):
    worst = 0.0
    for nu, lam in combos:
        p = ncx2.Ncx2Params(nu, lam)
        coeffs = ncx2.series_coefficients(p, 64)
        rep = series.choose_truncation(ncx2.series_spec_for(p), coeffs, 15.0, 1e-12)
        n_used = rep.n_used if rep.converged else 64
        for r_val in np.linspace(0.25, 30.0, grid_points):
            got = ncx2.ncx2_cdf_series(p, float(r_val), n_used)
            ref = ncx2.ncx2_cdf_oracle(p, float(r_val))
            worst = max(worst, abs(got - ref))
    return worst


def _central_collapse_error(grid_points):
    worst = 0.0
    for nu in (1.0, 2.0, 4.0, 7.0):
        p = ncx2.Ncx2Params(nu, 0.0)
        for r_val in np.linspace(0.25, 30.0, grid_points):
            got = ncx2.ncx2_cdf_series(p, float(r_val), 48)
            ref = specfun.reg_lower_gamma(0.5 * nu, 0.5 * float(r_val))
            worst = max(worst, abs(got - ref))
    return worst


def _unification_error(combos, grid_points):
    worst = 0.0
    for nu, lam in combos:
        p = ncx2.Ncx2Params(nu, lam)
        spec, coeffs = ncx2.series_spec_for(p), ncx2.series_coefficients(p, 48)
        grid = np.linspace(0.25, 30.0, grid_points)
        a = ncx2.ncx2_cdf_series_grid(p, grid, 48)
        b = series.cdf_grid(spec, coeffs, grid)
        worst = max(worst, float(np.max(np.abs(a - b))))
    return worst


def _pdf_series_vs_reference_error(combos, n_points):
    worst = 0.0
    for nu, lam in combos:
        p = ncx2.Ncx2Params(nu, lam)
        for r_val in np.linspace(0.1, 30.0, n_points):
            got = ncx2.ncx2_pdf_series(p, float(r_val), 40)
            ref = ncx2.ncx2_pdf_reference(p, float(r_val))
            worst = max(worst, abs(got - ref))
    return worst


def _pdf_normalization_error(combos):
    worst = 0.0
    for nu, lam in combos:
        p = ncx2.Ncx2Params(nu, lam)
        cutoff = 60.0
        while 1.0 - ncx2.ncx2_cdf_oracle(p, cutoff) > 1e-11:
            cutoff += 20.0
        q = oracle.integrate(
            lambda t, p=p: series.pdf_grid(
                ncx2.series_spec_for(p), ncx2.series_coefficients(p, 40), t
            ),
            0.0,
            cutoff,
            1e-10,
        )
        worst = max(worst, abs(q.value - 1.0))
    return worst


def _rayleigh_coefficient_error():
    worst = 0.0
    for omega in (0.5, 1.0, 2.0):
        prov = co.family_moments(co.Rayleigh(omega), k_max=10)
        spec = series.SeriesSpec(2.0, omega, 0.0)
        for n in range(1, 11):
            worst = max(worst, abs(co.coefficient(prov, spec, n)))
    return worst


def _rayleigh_cdf_error(grid_points):
    worst = 0.0
    for omega in (0.5, 1.0, 2.0):
        spec = series.SeriesSpec(2.0, omega, 0.0)
        coeffs = series.CoefficientVector((1.0,) + (0.0,) * 10)
        for r_val in np.linspace(0.0, 3.0, grid_points):
            got = series.cdf_at(spec, coeffs, float(r_val))
            ref = 1.0 - math.exp(-r_val * r_val / omega)
            worst = max(worst, abs(got - ref))
    return worst


def _misscaled_first_coefficient():
    prov = co.family_moments(co.Rayleigh(2.0), k_max=4)
    spec = series.SeriesSpec(2.0, 2.0, 0.0)
    return abs(co.coefficient_misscaled(prov, spec, 1))


def _dkw_excess(seed, count):
    p = ncx2.Ncx2Params(4.0, 2.0)
    samples = np.sort(ncx2.ncx2_sample(p, seed, count))
    rep = oracle.dkw_check(
        samples, lambda v: ncx2.ncx2_cdf_series_grid(p, v, 48), 1.0 - 1e-6
    )
    return rep.max_deviation / rep.band  # < 1 means inside the band


_FIT_POINTS = {
    "rayleigh": (co.Rayleigh(0.5), co.Rayleigh(1.0), co.Rayleigh(2.0)),
    "weibull": (co.Weibull(0.8, 1.0), co.Weibull(3.0, 1.0), co.Weibull(2.2, 1.7)),
    "nakagami_m": (co.NakagamiM(0.6, 1.0), co.NakagamiM(2.5, 1.0), co.NakagamiM(4.0, 0.7)),
    "alpha_mu": (co.AlphaMu(1.5, 0.8, 1.0), co.AlphaMu(3.0, 2.0, 1.3), co.AlphaMu(2.0, 1.0, 1.0)),
    "hoyt": (co.Hoyt(0.3, 1.0), co.Hoyt(0.7, 2.0), co.Hoyt(1.0, 1.0)),
    "rician": (co.Rician(0.0, 1.0), co.Rician(1.5, 1.0), co.Rician(6.0, 2.0)),
    "kappa_mu": (co.KappaMu(1.2, 2.0, 1.0), co.KappaMu(3.0, 0.8, 1.4), co.KappaMu(0.5, 1.5, 2.0)),
    "ncx2": (
        co.NoncentralChiSquare(1.0, 0.5),
        co.NoncentralChiSquare(4.0, 2.0),
        co.NoncentralChiSquare(7.0, 5.0),
    ),
}


def _fit_residual(points_per_family):
    worst = 0.0
    for fams in _FIT_POINTS.values():
        for fam in fams[:points_per_family]:
            prov = co.family_moments(fam, k_max=4)
            spec = co.fit_spec(prov)
            worst = max(worst, abs(co.coefficient(prov, spec, 1)))
            worst = max(worst, abs(co.coefficient(prov, spec, 2)))
    return worst


def _cdf_normalization_deficit(cases):
    worst = 0.0
    for _, spec, coeffs, _ in cases:
        r50 = (50.0 * spec.b) ** (1.0 / spec.alpha)
        worst = max(worst, abs(1.0 - series.cdf_at(spec, coeffs, r50)))
    return worst


def run_validation(seed: int = DEFAULT_SEED, level: str = "quick") -> ValidationReport:
    if level not in ("quick", "full"):
        raise DomainError(f"level must be 'quick' or 'full', got {level!r}")
    full = level == "full"
    combos = _NU_LAM_FULL if full else _NU_LAM_QUICK
    grid_points = 20 if full else 8
    cases = _builtin_cases()
    if not full:
        cases = [cases[0], cases[-1]]

    results = [
        _timed(
            "orthogonality",
            1e-8,
            lambda: _orthogonality_error(
                (0.0, 0.5, 1.7, 3.0) if full else (0.0, 1.7),
                8 if full else 4,
            ),
        ),
        _timed("weight-omission-witness", 0.10, _weight_omission_deviation, comparison=">"),
        _timed("cdf-pdf-consistency", 1e-8, lambda: _cdf_vs_quadrature_error(cases, grid_points)),
        _timed("erratum-series-part-tiny", 1e-6, _erratum_series_part),
        _timed("erratum-gamma-carries-mass", 1e-8, _erratum_gamma_deficit),
        _timed(
            "special-case-coefficients",
            1e-8,
            lambda: _special_case_coefficient_error(combos, 12 if full else 8),
        ),
        _timed("cdf-series-vs-oracle", 1e-6, lambda: _cdf_series_vs_oracle_error(combos, grid_points)),
        _timed("central-collapse", 1e-12, lambda: _central_collapse_error(grid_points)),
        _timed("series-paths-unification", 1e-12, lambda: _unification_error(combos, grid_points)),
        _timed(
            "pdf-series-vs-reference",
            1e-8,
            lambda: _pdf_series_vs_reference_error(combos, 25 if full else 9),
        ),
        _timed(
            "pdf-normalization",
            1e-8,
            lambda: _pdf_normalization_error(combos if full else combos[:1]),
        ),
        _timed("rayleigh-coefficients-vanish", 1e-10, _rayleigh_coefficient_error),
        _timed("rayleigh-cdf-closed-form", 1e-12, lambda: _rayleigh_cdf_error(grid_points)),
        _timed("misscaled-moments-materiality", 0.10, _misscaled_first_coefficient, comparison=">"),
        _timed("monte-carlo-dkw", 1.0, lambda: _dkw_excess(seed, 100000 if full else 20000)),
        _timed("moment-fit-residuals", 1e-10, lambda: _fit_residual(3 if full else 1)),
        _timed("cdf-normalization", 1e-6, lambda: _cdf_normalization_deficit(cases)),
    ]
    return ValidationReport(level=level, seed=seed, results=tuple(results))
