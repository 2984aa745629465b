"""Noncentral chi-square: the fully worked special case of the series engine.

The basis mapping is alpha = 1, b = 2, beta = nu/2 - 1 with coefficients
C_n = (-lam/2)^n / n!. Three independent routes to the same distribution
live here: the Bessel-form reference density, the Laguerre series PDF/CDF,
and a Poisson-mixture-of-central-chi-squares CDF oracle that shares no code
with the Laguerre path beyond the incomplete gamma.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels, series, specfun
from .errors import DomainError, NumericalError

__all__ = [
    "Ncx2Params",
    "series_spec_for",
    "series_coefficients",
    "ncx2_pdf_reference",
    "ncx2_pdf_series",
    "ncx2_cdf_series",
    "ncx2_cdf_series_grid",
    "ncx2_cdf_oracle",
    "ncx2_sample",
]


@dataclass(frozen=True)
class Ncx2Params:
    """Degrees of freedom nu > 0 and noncentrality lam >= 0."""

    nu: float
    lam: float

    def __post_init__(self):
        if not (math.isfinite(self.nu) and self.nu > 0.0):
            raise DomainError(f"nu must be finite and > 0, got {self.nu!r}")
        if not (math.isfinite(self.lam) and self.lam >= 0.0):
            raise DomainError(f"lam must be finite and >= 0, got {self.lam!r}")


def series_spec_for(p: Ncx2Params) -> series.SeriesSpec:
    """The special-case basis (alpha=1, b=2, beta=nu/2-1)."""
    return series.SeriesSpec(alpha=1.0, b=2.0, beta=0.5 * p.nu - 1.0)


def series_coefficients(p: Ncx2Params, n_max: int) -> series.CoefficientVector:
    """C_n = (-lam/2)^n / n!, built by ratio recurrence."""
    if n_max < 0:
        raise DomainError(f"n_max must be >= 0, got {n_max!r}")
    c = [1.0]
    for n in range(1, n_max + 1):
        c.append(c[-1] * (-0.5 * p.lam) / n)
    return series.CoefficientVector(tuple(c))


def ncx2_pdf_reference(p: Ncx2Params, r: float) -> float:
    """Bessel-form density, evaluated in log space.

    f(r) = (e^{-(r+lam)/2}/2) (r/lam)^{nu/4-1/2} I_{nu/2-1}(sqrt(lam r)).
    The lam = 0 limit uses the central chi-square form directly; the printed
    (r/lam) base is singular there even though the limit is finite.
    """
    if not (r > 0.0) or not math.isfinite(r):
        raise DomainError(f"reference pdf needs r > 0, got {r!r}")
    half_nu = 0.5 * p.nu
    if p.lam == 0.0:
        return math.exp(
            (half_nu - 1.0) * math.log(r)
            - 0.5 * r
            - half_nu * math.log(2.0)
            - math.lgamma(half_nu)
        )
    z = math.sqrt(p.lam * r)
    bess = specfun.bessel_i(half_nu - 1.0, z)
    log_f = (
        -0.5 * (r + p.lam)
        + (0.25 * p.nu - 0.5) * (math.log(r) - math.log(p.lam))
        + math.log(bess)
        - math.log(2.0)
    )
    return math.exp(log_f)


def ncx2_pdf_series(p: Ncx2Params, r: float, n_terms: int) -> float:
    """Laguerre-series density, truncated after the j = n_terms term.

    Evaluates through the generic series engine with the special-case basis
    and coefficients, so it is bit-identical to ``series.pdf_at`` at equal
    truncation.
    """
    return series.pdf_at(series_spec_for(p), series_coefficients(p, n_terms), r)


def ncx2_cdf_series_grid(p: Ncx2Params, R, n_terms: int) -> np.ndarray:
    """Series CDF on a grid; own accumulation of the per-term factors.

    F(R) = (R/2)^{nu/2} e^{-R/2} sum_{n>=1} (-lam/2)^n / (Gamma(n+nu/2) n)
           * L_{n-1}^{nu/2}(R/2) + P(nu/2, R/2).

    The per-term factor equals C_n Gamma(n)/Gamma(n+beta+1) of the unified
    CDF under the special-case mapping; the two code paths are compared in
    the tests.
    """
    if n_terms < 0:
        raise DomainError(f"n_terms must be >= 0, got {n_terms!r}")
    R = np.atleast_1d(np.asarray(R, dtype=np.float64))
    if not np.all(np.isfinite(R)) or np.any(R < 0.0):
        raise DomainError("R must be finite and >= 0")
    x = 0.5 * R
    s = _kernels.gg_cdf_series_sum(x, float(p.nu), float(p.lam), int(n_terms))
    series_part = x ** (0.5 * p.nu) * np.exp(-x) * s
    gamma_part = _kernels.reg_lower_gamma_grid(0.5 * p.nu, x)
    out = series_part + gamma_part
    if not np.all(np.isfinite(out)):
        raise NumericalError("series CDF accumulation produced non-finite values")
    return out


def ncx2_cdf_series(p: Ncx2Params, R: float, n_terms: int) -> float:
    return float(ncx2_cdf_series_grid(p, [R], n_terms)[0])


_POISSON_TAIL = 1e-14


def ncx2_cdf_oracle(p: Ncx2Params, R: float) -> float:
    """Poisson mixture of central chi-squares, the independent CDF reference.

    F(R) = sum_k e^{-lam/2} (lam/2)^k / k! * P(nu/2 + k, R/2), expanded
    outward from the Poisson mode so large lam cannot underflow the early
    weights, and truncated once the accumulated weight leaves less than
    1e-14 in the tails.
    """
    if not (R >= 0.0) or not math.isfinite(R):
        raise DomainError(f"R must be finite and >= 0, got {R!r}")
    if R == 0.0:
        return 0.0
    half_nu = 0.5 * p.nu
    half_r = 0.5 * R
    h = 0.5 * p.lam
    if h == 0.0:
        return specfun.reg_lower_gamma(half_nu, half_r)
    mode = int(h)
    w_mode = math.exp(mode * math.log(h) - h - math.lgamma(mode + 1.0))
    total = w_mode * specfun.reg_lower_gamma(half_nu + mode, half_r)
    acc = w_mode
    w_up, w_down = w_mode, w_mode
    k_up, k_down = mode, mode
    while acc < 1.0 - _POISSON_TAIL:
        k_up += 1
        w_up *= h / k_up
        total += w_up * specfun.reg_lower_gamma(half_nu + k_up, half_r)
        acc += w_up
        if k_down > 0:
            w_down *= k_down / h
            k_down -= 1
            total += w_down * specfun.reg_lower_gamma(half_nu + k_down, half_r)
            acc += w_down
    return total


def ncx2_sample(p: Ncx2Params, seed: int, count: int) -> np.ndarray:
    """Seeded draws via the mixture representation.

    K ~ Poisson(lam/2), then Gamma(shape = nu/2 + K, scale = 2); valid for
    non-integer nu, unlike summing squared normals.
    """
    if count < 1:
        raise DomainError(f"count must be >= 1, got {count!r}")
    rng = np.random.default_rng(seed)
    k = rng.poisson(0.5 * p.lam, size=count)
    return rng.gamma(shape=0.5 * p.nu + k, scale=2.0, size=count)
