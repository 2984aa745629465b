"""Expansion coefficients from envelope moments, and moment providers.

The coefficient of order n for basis (alpha, b, beta) is the expectation of
L_n^beta at the power variable x = r^alpha / b:

    C_n = sum_{k=0}^{n} C(n+beta, n-k) * (-1)^k / k! * E[r^(alpha k)] / b^k.

The alternating sum cancels brutally (measured amplification beyond 1e20 for
n = 12 at small noncentrality), far past what float64 compensated summation
can absorb, so the sum is carried out in exact rational arithmetic: every
float input is a rational number, and all built-in family moments are finite
rational expressions in their (float) parameters. Each coefficient also
records its cancellation ratio, the factor by which relative error in the
input moments is amplified; only empirical providers can be poisoned that
way, so only their coefficients are ever flagged unreliable.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import CapabilityError, DataError, DomainError, FitError
from .series import CoefficientVector, SeriesSpec

__all__ = [
    "FamilyParams",
    "Rayleigh",
    "Weibull",
    "NakagamiM",
    "AlphaMu",
    "Hoyt",
    "Rician",
    "KappaMu",
    "NoncentralChiSquare",
    "FAMILIES",
    "MomentProvider",
    "family_moment",
    "family_moments",
    "empirical_moments",
    "load_samples",
    "coefficient",
    "coefficient_vector",
    "coefficient_misscaled",
    "cancellation_flags",
    "fit_spec",
    "UNRELIABLE_CANCELLATION",
]

UNRELIABLE_CANCELLATION = 1e12


def _rising(a: Fraction, k: int) -> Fraction:
    out = Fraction(1)
    for i in range(k):
        out *= a + i
    return out


def _ncx2_raw_moment(nu: Fraction, lam: Fraction, k: int) -> Fraction:
    # E[X^k] = 2^k sum_j C(k,j) (lam/2)^j Gamma(nu/2+k)/Gamma(nu/2+j)
    half = nu / 2
    h = lam / 2
    tot = Fraction(0)
    for j in range(k + 1):
        tot += math.comb(k, j) * h**j * _rising(half + j, k - j)
    return 4**k * tot / 2**k


def _gauss_even_moment(j: int, var: Fraction) -> Fraction:
    # E[N(0, var)^(2j)] = (2j)! / (2^j j!) * var^j
    return Fraction(math.factorial(2 * j), 2**j * math.factorial(j)) * var**j


def _require(cond: bool, msg: str):
    if not cond:
        raise DomainError(msg)


class FamilyParams:
    """Base of the built-in fading families; see the concrete subclasses."""

    def default_alpha(self) -> float:
        raise NotImplementedError

    def supports_alpha(self, alpha: float) -> bool:
        return alpha == self.default_alpha()

    def moment_exact(self, alpha: float, k: int) -> Fraction:
        raise NotImplementedError


@dataclass(frozen=True)
class Rayleigh(FamilyParams):
    omega: float = 1.0  # E[R^2]

    def __post_init__(self):
        _require(math.isfinite(self.omega) and self.omega > 0, "Rayleigh needs omega > 0")

    def default_alpha(self):
        return 2.0

    def moment_exact(self, alpha, k):
        return Fraction(math.factorial(k)) * Fraction(self.omega) ** k


@dataclass(frozen=True)
class Weibull(FamilyParams):
    shape: float  # c
    scale: float = 1.0  # omega

    def __post_init__(self):
        _require(math.isfinite(self.shape) and self.shape > 0, "Weibull needs shape > 0")
        _require(math.isfinite(self.scale) and self.scale > 0, "Weibull needs scale > 0")

    def default_alpha(self):
        return self.shape

    def moment_exact(self, alpha, k):
        # (R/scale)^c is unit-exponential, so E[R^(ck)] = (scale^c)^k k!.
        # scale^c is rounded to float once; everything downstream is exact in it.
        s = Fraction(self.scale**self.shape)
        return Fraction(math.factorial(k)) * s**k


@dataclass(frozen=True)
class NakagamiM(FamilyParams):
    m: float
    omega: float = 1.0

    def __post_init__(self):
        _require(math.isfinite(self.m) and self.m > 0, "Nakagami-m needs m > 0")
        _require(math.isfinite(self.omega) and self.omega > 0, "Nakagami-m needs omega > 0")

    def default_alpha(self):
        return 2.0

    def moment_exact(self, alpha, k):
        # R^2 ~ Gamma(m, omega/m)
        m = Fraction(self.m)
        return (Fraction(self.omega) / m) ** k * _rising(m, k)


@dataclass(frozen=True)
class AlphaMu(FamilyParams):
    alpha: float  # power exponent of the family
    mu: float
    r_hat: float = 1.0  # alpha-root mean value, E[R^alpha] = r_hat^alpha

    def __post_init__(self):
        _require(math.isfinite(self.alpha) and self.alpha > 0, "alpha-mu needs alpha > 0")
        _require(math.isfinite(self.mu) and self.mu > 0, "alpha-mu needs mu > 0")
        _require(math.isfinite(self.r_hat) and self.r_hat > 0, "alpha-mu needs r_hat > 0")

    def default_alpha(self):
        return self.alpha

    def moment_exact(self, alpha, k):
        # R^alpha / r_hat^alpha ~ Gamma(mu, 1/mu); r_hat^alpha rounded once
        mu = Fraction(self.mu)
        s = Fraction(self.r_hat**self.alpha)
        return s**k * _rising(mu, k) / mu**k


@dataclass(frozen=True)
class Hoyt(FamilyParams):
    q: float
    omega: float = 1.0

    def __post_init__(self):
        _require(math.isfinite(self.q) and 0 < self.q <= 1, "Hoyt needs q in (0, 1]")
        _require(math.isfinite(self.omega) and self.omega > 0, "Hoyt needs omega > 0")

    def default_alpha(self):
        return 2.0

    def moment_exact(self, alpha, k):
        # R^2 = X^2 + Y^2 with independent zero-mean Gaussians of variance
        # omega/(1+q^2) and omega q^2/(1+q^2)
        qq = Fraction(self.q) ** 2
        var1 = Fraction(self.omega) / (1 + qq)
        var2 = Fraction(self.omega) * qq / (1 + qq)
        tot = Fraction(0)
        for j in range(k + 1):
            tot += (
                math.comb(k, j)
                * _gauss_even_moment(j, var1)
                * _gauss_even_moment(k - j, var2)
            )
        return tot


@dataclass(frozen=True)
class Rician(FamilyParams):
    k_factor: float
    omega: float = 1.0

    def __post_init__(self):
        _require(math.isfinite(self.k_factor) and self.k_factor >= 0, "Rician needs K >= 0")
        _require(math.isfinite(self.omega) and self.omega > 0, "Rician needs omega > 0")

    def default_alpha(self):
        return 2.0

    def moment_exact(self, alpha, k):
        # R^2 is a scaled noncentral chi-square with 2 d.o.f.
        kf = Fraction(self.k_factor)
        s = Fraction(self.omega) / (2 * (1 + kf))
        return s**k * _ncx2_raw_moment(Fraction(2), 2 * kf, k)


@dataclass(frozen=True)
class KappaMu(FamilyParams):
    kappa: float
    mu: float
    omega: float = 1.0

    def __post_init__(self):
        _require(math.isfinite(self.kappa) and self.kappa >= 0, "kappa-mu needs kappa >= 0")
        _require(math.isfinite(self.mu) and self.mu > 0, "kappa-mu needs mu > 0")
        _require(math.isfinite(self.omega) and self.omega > 0, "kappa-mu needs omega > 0")

    def default_alpha(self):
        return 2.0

    def moment_exact(self, alpha, k):
        kap = Fraction(self.kappa)
        mu = Fraction(self.mu)
        s = Fraction(self.omega) / (2 * mu * (1 + kap))
        return s**k * _ncx2_raw_moment(2 * mu, 2 * mu * kap, k)


@dataclass(frozen=True)
class NoncentralChiSquare(FamilyParams):
    nu: float
    lam: float = 0.0

    def __post_init__(self):
        _require(math.isfinite(self.nu) and self.nu > 0, "noncentral chi-square needs nu > 0")
        _require(math.isfinite(self.lam) and self.lam >= 0, "noncentral chi-square needs lam >= 0")

    def default_alpha(self):
        return 1.0

    def moment_exact(self, alpha, k):
        return _ncx2_raw_moment(Fraction(self.nu), Fraction(self.lam), k)


FAMILIES = {
    "rayleigh": Rayleigh,
    "weibull": Weibull,
    "nakagami_m": NakagamiM,
    "alpha_mu": AlphaMu,
    "hoyt": Hoyt,
    "rician": Rician,
    "kappa_mu": KappaMu,
    "ncx2": NoncentralChiSquare,
}


@dataclass(frozen=True)
class MomentProvider:
    """Maps k to E[r^(alpha k)] for k in [0, k_max], rationally.

    ``exact`` records whether the moments are closed forms (coefficients
    derived from them are exact) or float-valued sample statistics.
    """

    alpha: float
    k_max: int
    exact: bool
    moments: tuple

    def __post_init__(self):
        if len(self.moments) != self.k_max + 1:
            raise DomainError("moment table must cover k = 0..k_max")
        if self.moments[0] != 1:
            raise DomainError("moment(0) must equal 1 (normalized density)")
        if any(m <= 0 for m in self.moments):
            raise DataError("all moments must be positive")

    def moment(self, k: int) -> float:
        return float(self.moment_exact(k))

    def moment_exact(self, k: int) -> Fraction:
        if k < 0 or int(k) != k:
            raise DomainError(f"moment order must be an integer >= 0, got {k!r}")
        if k > self.k_max:
            raise CapabilityError(f"moment order {k} exceeds k_max = {self.k_max}")
        return self.moments[int(k)]


def family_moment(family: FamilyParams, alpha: float, k: int) -> float:
    """Closed-form E[R^(alpha k)] for a built-in family at its supported alpha."""
    if k < 0 or int(k) != k:
        raise DomainError(f"moment order must be an integer >= 0, got {k!r}")
    if not family.supports_alpha(alpha):
        raise CapabilityError(
            f"{type(family).__name__} supports alpha = {family.default_alpha()}, got {alpha}"
        )
    if k == 0:
        return 1.0
    return float(family.moment_exact(alpha, int(k)))


def family_moments(family: FamilyParams, alpha: float | None = None, k_max: int = 64) -> MomentProvider:
    """Moment provider backed by the family's closed forms."""
    if alpha is None:
        alpha = family.default_alpha()
    if not family.supports_alpha(alpha):
        raise CapabilityError(
            f"{type(family).__name__} supports alpha = {family.default_alpha()}, got {alpha}"
        )
    moments = tuple(
        Fraction(1) if k == 0 else family.moment_exact(alpha, k) for k in range(k_max + 1)
    )
    return MomentProvider(alpha=float(alpha), k_max=k_max, exact=True, moments=moments)


def empirical_moments(samples, alpha: float, k_max: int) -> MomentProvider:
    """Moment provider from observed envelope values: moment(k) = mean(r^(alpha k))."""
    arr = np.asarray(samples, dtype=np.float64).ravel()
    if arr.size == 0:
        raise DataError("empirical moments need at least one sample")
    if not np.all(np.isfinite(arr)) or np.any(arr < 0.0):
        raise DataError("samples must be finite and >= 0")
    if not (alpha > 0.0 and math.isfinite(alpha)):
        raise DomainError(f"alpha must be > 0, got {alpha!r}")
    moments = [Fraction(1)]
    for k in range(1, k_max + 1):
        mk = float(np.mean(arr ** (alpha * k)))
        if not math.isfinite(mk):
            raise DataError(f"sample moment of order alpha*{k} overflowed; lower k_max")
        if mk <= 0.0:
            raise DataError("sample moments must be positive (all-zero data is degenerate)")
        moments.append(Fraction(mk))
    return MomentProvider(alpha=float(alpha), k_max=k_max, exact=False, moments=tuple(moments))


def load_samples(path) -> np.ndarray:
    """Read one nonnegative decimal per line; '#' starts a comment."""
    try:
        arr = np.loadtxt(path, comments="#", dtype=np.float64, ndmin=1)
    except (ValueError, OSError) as exc:
        raise DataError(f"cannot read sample file {path}: {exc}") from exc
    arr = arr.ravel()
    if arr.size == 0:
        raise DataError(f"sample file {path} contains no data")
    if not np.all(np.isfinite(arr)) or np.any(arr < 0.0):
        raise DataError(f"sample file {path} contains negative or non-finite values")
    return arr


def _gen_binomial_exact(top: Fraction, m: int) -> Fraction:
    # C(top, m) = prod_{i=1..m} (top - m + i) / i
    out = Fraction(1)
    for i in range(1, m + 1):
        out *= (top - m + i) / i
    return out


def _to_float(fr: Fraction) -> float:
    try:
        return float(fr)
    except OverflowError:
        return math.inf if fr > 0 else -math.inf


def _coefficient_sum(provider, spec, n, per_k_scale):
    beta = Fraction(spec.beta)
    total = Fraction(0)
    peak = Fraction(0)
    for k in range(n + 1):
        term = (
            _gen_binomial_exact(n + beta, n - k)
            * Fraction((-1) ** k, math.factorial(k))
            * provider.moment_exact(k)
            * per_k_scale(k)
        )
        total += term
        peak = max(peak, abs(term), abs(total))
    if total == 0:
        ratio = 1.0 if peak == 0 else math.inf
    else:
        ratio = _to_float(peak / abs(total))
    return _to_float(total), ratio


def _check_pairing(provider: MomentProvider, spec: SeriesSpec, n: int):
    if n < 0 or int(n) != n:
        raise DomainError(f"coefficient order must be an integer >= 0, got {n!r}")
    if n > provider.k_max:
        raise CapabilityError(f"coefficient order {n} needs moments beyond k_max = {provider.k_max}")
    if provider.alpha != spec.alpha:
        raise DomainError(
            f"provider is bound to alpha = {provider.alpha}, spec has alpha = {spec.alpha}"
        )


def coefficient(provider: MomentProvider, spec: SeriesSpec, n: int) -> float:
    """C_n for the given basis, from the provider's moments."""
    _check_pairing(provider, spec, n)
    b = Fraction(spec.b)
    value, _ = _coefficient_sum(provider, spec, int(n), lambda k: b**-k)
    return value


def coefficient_misscaled(provider: MomentProvider, spec: SeriesSpec, n: int) -> float:
    """Deliberately wrong variant scaling every moment by 1/b instead of 1/b^k.

    Kept as a sensitivity witness: with this scaling even the Rayleigh
    expansion stops collapsing to its single term.
    """
    _check_pairing(provider, spec, n)
    b = Fraction(spec.b)
    value, _ = _coefficient_sum(provider, spec, int(n), lambda k: 1 / b)
    return value


def coefficient_vector(provider: MomentProvider, spec: SeriesSpec, n_max: int) -> CoefficientVector:
    """C_0..C_{n_max} with per-coefficient cancellation diagnostics."""
    _check_pairing(provider, spec, n_max)
    b = Fraction(spec.b)
    values = []
    ratios = []
    for n in range(int(n_max) + 1):
        v, r = _coefficient_sum(provider, spec, n, lambda k: b**-k)
        values.append(v)
        ratios.append(r)
    return CoefficientVector(tuple(values), tuple(ratios))


def cancellation_flags(vec: CoefficientVector, provider: MomentProvider) -> tuple:
    """True where a coefficient is numerically untrustworthy.

    Exact (closed-form) providers never trip the flag: their sums are exact.
    """
    if vec.cancellation is None:
        raise DomainError("coefficient vector carries no cancellation diagnostics")
    if provider.exact:
        return tuple(False for _ in vec.cancellation)
    return tuple(r > UNRELIABLE_CANCELLATION for r in vec.cancellation)


def fit_spec(provider: MomentProvider, alpha: float | None = None) -> SeriesSpec:
    """Moment-matched basis: b and beta solving C_1 = C_2 = 0.

    b = (mu2 - mu1^2)/mu1 and beta = mu1^2/(mu2 - mu1^2) - 1 where
    mu_j = E[r^(j alpha)].
    """
    if alpha is None:
        alpha = provider.alpha
    if alpha != provider.alpha:
        raise DomainError(f"provider is bound to alpha = {provider.alpha}, got {alpha}")
    if provider.k_max < 2:
        raise CapabilityError("moment matching needs moments of order 1 and 2")
    mu1 = provider.moment_exact(1)
    mu2 = provider.moment_exact(2)
    var = mu2 - mu1 * mu1
    if var <= 0:
        raise FitError("mu2 <= mu1^2: degenerate (deterministic) data cannot be fitted")
    b = var / mu1
    beta = mu1 * mu1 / var - 1
    return SeriesSpec(alpha=float(alpha), b=float(b), beta=float(beta))
