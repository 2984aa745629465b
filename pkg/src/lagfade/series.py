"""Unified Laguerre-series engine for fading-envelope distributions.

The density of the envelope R in the power variable x = r^alpha / b is the
weighted expansion

    f_R(r) = (alpha / b^(beta+1)) * sum_n C_n [n! / Gamma(n+beta+1)]
             * exp(-x) * r^(alpha(beta+1)-1) * L_n^beta(x),

and its distribution function splits into a polynomial series plus a
regularized lower-incomplete-gamma term

    F_R(R) = x^(beta+1) e^{-x} * sum_{n>=1} C_n [Gamma(n)/Gamma(n+beta+1)]
             * L_{n-1}^{beta+1}(x)  +  P(beta+1, x).

The summation starts at n = 1 because L_{n-1}^{beta+1} does not exist for
n = 0; the n = 0 contribution is exactly the P(beta+1, x) term. Dropping
that term makes the "CDF" tend to 0 instead of 1 in the upper tail, which
``cdf_parts`` exposes directly.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import ConvergenceError, DomainError, NumericalError

__all__ = [
    "SeriesSpec",
    "CoefficientVector",
    "TruncationReport",
    "to_power_variable",
    "pdf_at",
    "pdf_grid",
    "cdf_at",
    "cdf_grid",
    "cdf_parts",
    "cdf_parts_grid",
    "cdf_at_clamped",
    "choose_truncation",
]


@dataclass(frozen=True)
class SeriesSpec:
    """Transform/scale parameters (alpha, b, beta) defining the series basis."""

    alpha: float
    b: float
    beta: float

    def __post_init__(self):
        if not (math.isfinite(self.alpha) and self.alpha > 0.0):
            raise DomainError(f"alpha must be finite and > 0, got {self.alpha!r}")
        if not (math.isfinite(self.b) and self.b > 0.0):
            raise DomainError(f"b must be finite and > 0, got {self.b!r}")
        if not (math.isfinite(self.beta) and self.beta > -1.0):
            # the orthogonality weight x^beta e^{-x} must be integrable
            raise DomainError(f"beta must be finite and > -1, got {self.beta!r}")


@dataclass(frozen=True)
class CoefficientVector:
    """Truncated expansion coefficients C_0..C_N with C_0 = 1.

    ``cancellation`` optionally carries the per-coefficient cancellation
    ratios recorded while summing moments (see the coefficients module).
    """

    c: tuple
    cancellation: tuple | None = None

    def __post_init__(self):
        c = tuple(float(v) for v in self.c)
        object.__setattr__(self, "c", c)
        if len(c) == 0:
            raise DomainError("coefficient vector must contain C_0")
        if c[0] != 1.0:
            raise DomainError(f"C_0 must be exactly 1, got {c[0]!r}")
        if not all(math.isfinite(v) for v in c):
            raise DomainError("coefficients must all be finite")
        if self.cancellation is not None and len(self.cancellation) != len(c):
            raise DomainError("cancellation diagnostics must match coefficient count")
        object.__setattr__(self, "_arr", np.array(c, dtype=np.float64))

    def __len__(self):
        return len(self.c)

    @property
    def n_max(self) -> int:
        return len(self.c) - 1

    def as_array(self) -> np.ndarray:
        return self._arr

    def truncate(self, n_used: int) -> "CoefficientVector":
        """Keep C_0..C_{n_used}."""
        if n_used < 0 or n_used > self.n_max:
            raise DomainError(f"n_used must lie in [0, {self.n_max}], got {n_used}")
        canc = self.cancellation[: n_used + 1] if self.cancellation else None
        return CoefficientVector(self.c[: n_used + 1], canc)


@dataclass(frozen=True)
class TruncationReport:
    n_used: int
    last_term_magnitude: float
    tail_estimate: float
    converged: bool


def to_power_variable(r: float, spec: SeriesSpec) -> float:
    """x = r^alpha / b."""
    if not (r >= 0.0):
        raise DomainError(f"envelope value must be >= 0, got {r!r}")
    return r ** spec.alpha / spec.b


def _as_grid(r) -> np.ndarray:
    arr = np.atleast_1d(np.asarray(r, dtype=np.float64))
    if arr.ndim != 1:
        raise DomainError("grid must be one-dimensional")
    if not np.all(np.isfinite(arr)) or np.any(arr < 0.0):
        raise DomainError("envelope values must be finite and >= 0")
    return arr


def pdf_grid(spec: SeriesSpec, coeffs: CoefficientVector, r) -> np.ndarray:
    """Truncated series density evaluated on a grid of envelope values."""
    r = _as_grid(r)
    expo = spec.alpha * (spec.beta + 1.0) - 1.0
    if expo < 0.0 and np.any(r == 0.0):
        raise DomainError(
            "density is singular at r = 0 when alpha*(beta+1) < 1; evaluate at r > 0"
        )
    x = r ** spec.alpha / spec.b
    s = _kernels.pdf_series_sum(x, coeffs.as_array(), spec.beta)
    out = (spec.alpha / spec.b ** (spec.beta + 1.0)) * np.exp(-x) * r ** expo * s
    if not np.all(np.isfinite(out)):
        raise NumericalError("pdf accumulation produced non-finite values")
    return out


def pdf_at(spec: SeriesSpec, coeffs: CoefficientVector, r: float) -> float:
    """Truncated series density at a single envelope value."""
    return float(pdf_grid(spec, coeffs, [r])[0])


def _gamma_term(a: float, x: np.ndarray) -> np.ndarray:
    # seam kept separate so a corrupted build is detectable by the validator
    vals = _kernels.reg_lower_gamma_grid(a, x)
    if np.any(np.isnan(vals)):
        raise ConvergenceError(f"P({a}, x) did not converge on the grid")
    return vals


def cdf_parts_grid(spec: SeriesSpec, coeffs: CoefficientVector, R):
    """(series_part, gamma_part) arrays; their sum is the truncated CDF."""
    R = _as_grid(R)
    x = R ** spec.alpha / spec.b
    t = _kernels.cdf_series_sum(x, coeffs.as_array(), spec.beta)
    series_part = x ** (spec.beta + 1.0) * np.exp(-x) * t
    gamma_part = _gamma_term(spec.beta + 1.0, x)
    if not (np.all(np.isfinite(series_part)) and np.all(np.isfinite(gamma_part))):
        raise NumericalError("cdf accumulation produced non-finite values")
    return series_part, gamma_part


def cdf_parts(spec: SeriesSpec, coeffs: CoefficientVector, R: float):
    """Polynomial series part and incomplete-gamma part of the CDF at R.

    series_part + gamma_part reproduces ``cdf_at`` bit for bit: ``cdf_at``
    is defined as exactly this sum.
    """
    s, g = cdf_parts_grid(spec, coeffs, [R])
    return float(s[0]), float(g[0])


def cdf_grid(spec: SeriesSpec, coeffs: CoefficientVector, R) -> np.ndarray:
    s, g = cdf_parts_grid(spec, coeffs, R)
    return s + g


def cdf_at(spec: SeriesSpec, coeffs: CoefficientVector, R: float) -> float:
    """Truncated CDF at R. Not clamped: truncation error is left visible."""
    s, g = cdf_parts(spec, coeffs, R)
    return s + g


def cdf_at_clamped(spec: SeriesSpec, coeffs: CoefficientVector, R: float):
    """CDF clamped to [0, 1], plus a flag telling whether clamping occurred."""
    raw = cdf_at(spec, coeffs, R)
    clamped = min(1.0, max(0.0, raw))
    return clamped, clamped != raw


_PROBE_POINTS = 65


def choose_truncation(
    spec: SeriesSpec, coeffs: CoefficientVector, x_max: float, tol: float
) -> TruncationReport:
    """Smallest N whose trailing CDF terms stay below tol on a probe grid.

    Terms are probed on a uniform grid of the power variable x in
    [0, x_max]; N is accepted once three consecutive term maxima fall below
    tol (a single accidentally tiny term of an alternating series must not
    end the scan). Exhausting the coefficient vector mid-run still counts as
    converged; never entering a run does not.
    """
    if not (tol > 0.0):
        raise DomainError(f"tol must be > 0, got {tol!r}")
    if not (x_max >= 0.0):
        raise DomainError(f"x_max must be >= 0, got {x_max!r}")
    grid = np.linspace(0.0, float(x_max), _PROBE_POINTS)
    maxima = np.asarray(_kernels.cdf_term_maxima(grid, coeffs.as_array(), spec.beta))
    n_cap = coeffs.n_max
    run = 0
    for n in range(1, n_cap + 1):
        if maxima[n] < tol:
            run += 1
            if run == 3:
                n_used = n - 3
                return TruncationReport(
                    n_used=n_used,
                    last_term_magnitude=float(maxima[n_used]) if n_used >= 1 else 0.0,
                    tail_estimate=float(np.sum(maxima[n_used + 1 : n_used + 4])),
                    converged=True,
                )
        else:
            run = 0
    if run > 0:
        n_used = n_cap - run
        return TruncationReport(
            n_used=n_used,
            last_term_magnitude=float(maxima[n_used]) if n_used >= 1 else 0.0,
            tail_estimate=float(np.sum(maxima[n_used + 1 :])),
            converged=True,
        )
    return TruncationReport(
        n_used=n_cap,
        last_term_magnitude=float(maxima[n_cap]) if n_cap >= 1 else 0.0,
        tail_estimate=float(maxima[n_cap]) if n_cap >= 1 else 0.0,
        converged=False,
    )
