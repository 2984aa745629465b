"""Laguerre polynomial-series PDF/CDF engine for fading envelope distributions.

The ``series`` module evaluates the unified expansion; ``coefficients``
derives expansion coefficients from envelope moments (closed-form families
or sample data); ``ncx2`` is the fully worked noncentral chi-square special
case; ``specfun`` and ``oracle`` supply the special functions and the
independent verification machinery; ``validate`` runs the named checks the
``lagfade`` CLI exposes.
"""

from .coefficients import (
    AlphaMu,
    Hoyt,
    KappaMu,
    MomentProvider,
    NakagamiM,
    NoncentralChiSquare,
    Rayleigh,
    Rician,
    Weibull,
    coefficient,
    coefficient_vector,
    empirical_moments,
    family_moment,
    family_moments,
    fit_spec,
    load_samples,
)
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
from .ncx2 import (
    Ncx2Params,
    ncx2_cdf_oracle,
    ncx2_cdf_series,
    ncx2_pdf_reference,
    ncx2_pdf_series,
    ncx2_sample,
)
from .series import (
    CoefficientVector,
    SeriesSpec,
    TruncationReport,
    cdf_at,
    cdf_at_clamped,
    cdf_parts,
    choose_truncation,
    pdf_at,
    to_power_variable,
)
from .specfun import bessel_i, gen_binomial, laguerre, laguerre_batch, log_gamma, reg_lower_gamma

__version__ = "0.1.0"
