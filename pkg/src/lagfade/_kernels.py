"""Hot numerical kernels.

Every kernel exists twice: a scalar-loop version (compiled with numba when
available, see ``_jit``) and a vectorized pure-numpy twin. The public names
at the bottom of this module dispatch to the compiled loops by default and
to the numpy twins when ``LAGFADE_NO_NUMBA=1``.

Conventions shared by all kernels:

* Laguerre polynomials follow the upward three-term recurrence
  (k+1) L_{k+1}^mu = (2k+1+mu-x) L_k^mu - (k+mu) L_{k-1}^mu,
  seeded with L_0 = 1 and L_1 = 1+mu-x.
* Term weights are carried by multiplicative ratio updates, never by naked
  gamma calls, so order-64 series cannot overflow.
* Series accumulation is Kahan-compensated; alternating coefficients make
  cancellation the dominant error source.
* ``reg_lower_gamma`` kernels return NaN when the iteration cap (10000) is
  hit; wrappers convert that sentinel into ConvergenceError.
"""

import math

import numpy as np

from ._jit import JIT_ENABLED, jit_compile

_GAMMA_ITMAX = 10000
_GAMMA_EPS = 1e-16
_TINY = 1e-300


# ---------------------------------------------------------------------------
# loop implementations (numba targets)
# ---------------------------------------------------------------------------

def _laguerre_scan_loops(n_max, mu, x):
    out = np.empty(n_max + 1, dtype=np.float64)
    out[0] = 1.0
    if n_max == 0:
        return out
    lm = 1.0
    l = 1.0 + mu - x
    out[1] = l
    for k in range(1, n_max):
        lm, l = l, ((2.0 * k + 1.0 + mu - x) * l - (k + mu) * lm) / (k + 1.0)
        out[k + 1] = l
    return out


def _laguerre_grid_loops(n, mu, x):
    out = np.empty(x.shape[0], dtype=np.float64)
    for i in range(x.shape[0]):
        xi = x[i]
        lm = 0.0
        l = 1.0
        for k in range(n):
            lm, l = l, ((2.0 * k + 1.0 + mu - xi) * l - (k + mu) * lm) / (k + 1.0)
        out[i] = l
    return out


def _pdf_series_sum_loops(x, coeffs, beta):
    # sum_n c_n [n!/Gamma(n+beta+1)] L_n^beta(x_i); weight ratio w_n/w_{n-1} = n/(n+beta)
    n_coeff = coeffs.shape[0]
    w0 = math.exp(-math.lgamma(beta + 1.0))
    out = np.empty(x.shape[0], dtype=np.float64)
    for i in range(x.shape[0]):
        xi = x[i]
        lm = 0.0
        l = 1.0
        w = w0
        s = 0.0
        comp = 0.0
        for n in range(n_coeff):
            t = coeffs[n] * w * l
            y = t - comp
            tt = s + y
            comp = (tt - s) - y
            s = tt
            lm, l = l, ((2.0 * n + 1.0 + beta - xi) * l - (n + beta) * lm) / (n + 1.0)
            w *= (n + 1.0) / (n + 1.0 + beta)
        out[i] = s
    return out


def _cdf_series_sum_loops(x, coeffs, beta):
    # sum_{n>=1} c_n [Gamma(n)/Gamma(n+beta+1)] L_{n-1}^{beta+1}(x_i);
    # ratio v_{n+1}/v_n = n/(n+1+beta)
    n_coeff = coeffs.shape[0]
    mu = beta + 1.0
    v1 = math.exp(-math.lgamma(beta + 2.0))
    out = np.empty(x.shape[0], dtype=np.float64)
    for i in range(x.shape[0]):
        xi = x[i]
        lm = 0.0
        l = 1.0
        v = v1
        s = 0.0
        comp = 0.0
        for n in range(1, n_coeff):
            t = coeffs[n] * v * l
            y = t - comp
            tt = s + y
            comp = (tt - s) - y
            s = tt
            k = n - 1.0
            lm, l = l, ((2.0 * k + 1.0 + mu - xi) * l - (k + mu) * lm) / (k + 1.0)
            v *= n / (n + 1.0 + beta)
        out[i] = s
    return out


def _cdf_term_maxima_loops(x, coeffs, beta):
    # maxima[n] = max_i |c_n v_n x_i^{beta+1} e^{-x_i} L_{n-1}^{beta+1}(x_i)|, maxima[0] = 0
    n_coeff = coeffs.shape[0]
    mu = beta + 1.0
    maxima = np.zeros(n_coeff, dtype=np.float64)
    for i in range(x.shape[0]):
        xi = x[i]
        if xi > 0.0:
            pref = math.exp((beta + 1.0) * math.log(xi) - xi)
        else:
            pref = 0.0
        lm = 0.0
        l = 1.0
        v = math.exp(-math.lgamma(beta + 2.0))
        for n in range(1, n_coeff):
            m = abs(coeffs[n] * v * l) * pref
            if m > maxima[n]:
                maxima[n] = m
            k = n - 1.0
            lm, l = l, ((2.0 * k + 1.0 + mu - xi) * l - (k + mu) * lm) / (k + 1.0)
            v *= n / (n + 1.0 + beta)
    return maxima


def _gg_cdf_series_sum_loops(x, nu, lam, n_terms):
    # sum_{n=1}^{n_terms} (-lam/2)^n / (Gamma(n+nu/2) n) * L_{n-1}^{nu/2}(x_i);
    # ratio u_{n+1}/u_n = (-lam/2) n / ((n+1)(n+nu/2))
    mu = 0.5 * nu
    u1 = (-0.5 * lam) * math.exp(-math.lgamma(1.0 + 0.5 * nu))
    out = np.empty(x.shape[0], dtype=np.float64)
    for i in range(x.shape[0]):
        xi = x[i]
        lm = 0.0
        l = 1.0
        u = u1
        s = 0.0
        comp = 0.0
        for n in range(1, n_terms + 1):
            t = u * l
            y = t - comp
            tt = s + y
            comp = (tt - s) - y
            s = tt
            k = n - 1.0
            lm, l = l, ((2.0 * k + 1.0 + mu - xi) * l - (k + mu) * lm) / (k + 1.0)
            u *= (-0.5 * lam) * n / ((n + 1.0) * (n + 0.5 * nu))
        out[i] = s
    return out


def _reg_lower_gamma_scalar_loops(a, x):
    if x == 0.0:
        return 0.0
    lead = math.exp(-x + a * math.log(x) - math.lgamma(a))
    if x < a + 1.0:
        ap = a
        d = 1.0 / a
        s = d
        for _ in range(_GAMMA_ITMAX):
            ap += 1.0
            d *= x / ap
            s += d
            if abs(d) < abs(s) * _GAMMA_EPS:
                return s * lead
        return np.nan
    # modified Lentz continued fraction for the upper tail
    b = x + 1.0 - a
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    for i in range(1, _GAMMA_ITMAX + 1):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _TINY:
            d = _TINY
        c = b + an / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _GAMMA_EPS:
            return 1.0 - lead * h
    return np.nan


def _make_reg_lower_gamma_grid(scalar_fn):
    def _grid(a, x):
        out = np.empty(x.shape[0], dtype=np.float64)
        for i in range(x.shape[0]):
            out[i] = scalar_fn(a, x[i])
        return out

    return _grid


# ---------------------------------------------------------------------------
# vectorized numpy twins
# ---------------------------------------------------------------------------

def _laguerre_grid_numpy(n, mu, x):
    lm = np.zeros_like(x)
    l = np.ones_like(x)
    for k in range(n):
        lm, l = l, ((2.0 * k + 1.0 + mu - x) * l - (k + mu) * lm) / (k + 1.0)
    return l


def _pdf_series_sum_numpy(x, coeffs, beta):
    lm = np.zeros_like(x)
    l = np.ones_like(x)
    w = math.exp(-math.lgamma(beta + 1.0))
    s = np.zeros_like(x)
    comp = np.zeros_like(x)
    for n in range(coeffs.shape[0]):
        t = coeffs[n] * w * l
        y = t - comp
        tt = s + y
        comp = (tt - s) - y
        s = tt
        lm, l = l, ((2.0 * n + 1.0 + beta - x) * l - (n + beta) * lm) / (n + 1.0)
        w *= (n + 1.0) / (n + 1.0 + beta)
    return s


def _cdf_series_sum_numpy(x, coeffs, beta):
    mu = beta + 1.0
    lm = np.zeros_like(x)
    l = np.ones_like(x)
    v = math.exp(-math.lgamma(beta + 2.0))
    s = np.zeros_like(x)
    comp = np.zeros_like(x)
    for n in range(1, coeffs.shape[0]):
        t = coeffs[n] * v * l
        y = t - comp
        tt = s + y
        comp = (tt - s) - y
        s = tt
        k = n - 1.0
        lm, l = l, ((2.0 * k + 1.0 + mu - x) * l - (k + mu) * lm) / (k + 1.0)
        v *= n / (n + 1.0 + beta)
    return s


def _cdf_term_maxima_numpy(x, coeffs, beta):
    mu = beta + 1.0
    pref = np.where(x > 0.0, np.exp((beta + 1.0) * np.log(np.where(x > 0.0, x, 1.0)) - x), 0.0)
    lm = np.zeros_like(x)
    l = np.ones_like(x)
    v = math.exp(-math.lgamma(beta + 2.0))
    maxima = np.zeros(coeffs.shape[0], dtype=np.float64)
    for n in range(1, coeffs.shape[0]):
        maxima[n] = np.max(np.abs(coeffs[n] * v * l) * pref) if x.size else 0.0
        k = n - 1.0
        lm, l = l, ((2.0 * k + 1.0 + mu - x) * l - (k + mu) * lm) / (k + 1.0)
        v *= n / (n + 1.0 + beta)
    return maxima


def _gg_cdf_series_sum_numpy(x, nu, lam, n_terms):
    mu = 0.5 * nu
    lm = np.zeros_like(x)
    l = np.ones_like(x)
    u = (-0.5 * lam) * math.exp(-math.lgamma(1.0 + 0.5 * nu))
    s = np.zeros_like(x)
    comp = np.zeros_like(x)
    for n in range(1, n_terms + 1):
        t = u * l
        y = t - comp
        tt = s + y
        comp = (tt - s) - y
        s = tt
        k = n - 1.0
        lm, l = l, ((2.0 * k + 1.0 + mu - x) * l - (k + mu) * lm) / (k + 1.0)
        u *= (-0.5 * lam) * n / ((n + 1.0) * (n + 0.5 * nu))
    return s


def _reg_lower_gamma_grid_numpy(a, x):
    out = np.zeros_like(x)
    pos = x > 0.0
    if not pos.any():
        return out
    xs = x[pos]
    lead = np.exp(-xs + a * np.log(xs) - math.lgamma(a))
    res = np.empty_like(xs)
    lo = xs < a + 1.0
    if lo.any():
        xl = xs[lo]
        ap = a
        d = np.full(xl.shape, 1.0 / a)
        s = d.copy()
        done = False
        for _ in range(_GAMMA_ITMAX):
            ap += 1.0
            d = d * xl / ap
            s = s + d
            if np.all(np.abs(d) < np.abs(s) * _GAMMA_EPS):
                done = True
                break
        vals = s * lead[lo]
        if not done:
            vals = np.full(xl.shape, np.nan)
        res[lo] = vals
    hi = ~lo
    if hi.any():
        xh = xs[hi]
        b = xh + 1.0 - a
        c = np.full(xh.shape, 1.0 / _TINY)
        d = 1.0 / b
        h = d.copy()
        done = False
        for i in range(1, _GAMMA_ITMAX + 1):
            an = -i * (i - a)
            b = b + 2.0
            d = an * d + b
            d = np.where(np.abs(d) < _TINY, _TINY, d)
            c = b + an / c
            c = np.where(np.abs(c) < _TINY, _TINY, c)
            d = 1.0 / d
            delta = d * c
            h = h * delta
            if np.all(np.abs(delta - 1.0) < _GAMMA_EPS):
                done = True
                break
        vals = 1.0 - lead[hi] * h
        if not done:
            vals = np.full(xh.shape, np.nan)
        res[hi] = vals
    out[pos] = res
    return out


def _reg_lower_gamma_scalar_numpy(a, x):
    return float(_reg_lower_gamma_grid_numpy(a, np.array([x], dtype=np.float64))[0])


# ---------------------------------------------------------------------------
# dispatch
# ---------------------------------------------------------------------------

if JIT_ENABLED:
    laguerre_scan = jit_compile(_laguerre_scan_loops)
    laguerre_grid = jit_compile(_laguerre_grid_loops)
    pdf_series_sum = jit_compile(_pdf_series_sum_loops)
    cdf_series_sum = jit_compile(_cdf_series_sum_loops)
    cdf_term_maxima = jit_compile(_cdf_term_maxima_loops)
    gg_cdf_series_sum = jit_compile(_gg_cdf_series_sum_loops)
    reg_lower_gamma_scalar = jit_compile(_reg_lower_gamma_scalar_loops)
    reg_lower_gamma_grid = jit_compile(_make_reg_lower_gamma_grid(reg_lower_gamma_scalar))
else:
    laguerre_scan = _laguerre_scan_loops
    laguerre_grid = _laguerre_grid_numpy
    pdf_series_sum = _pdf_series_sum_numpy
    cdf_series_sum = _cdf_series_sum_numpy
    cdf_term_maxima = _cdf_term_maxima_numpy
    gg_cdf_series_sum = _gg_cdf_series_sum_numpy
    reg_lower_gamma_scalar = _reg_lower_gamma_scalar_loops
    reg_lower_gamma_grid = _reg_lower_gamma_grid_numpy
