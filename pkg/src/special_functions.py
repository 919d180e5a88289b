# src/special_functions.py

import numpy as np
from scipy import special
from scipy.integrate import solve_ivp
from typing import Dict, Tuple, Union
import logging

from .error_handling import AccuracyError, DomainError

ArrayLike = Union[float, complex, np.ndarray]

# Lanczos approximation, g=7, n=9
LANCZOS_G = 7.0
LANCZOS_COEFFICIENTS = np.array([
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
])
HALF_LOG_TWO_PI = 0.5 * np.log(2.0 * np.pi)

EPS = np.finfo(float).eps
SERIES_MAX_TERMS = 4000
SERIES_W_LIMIT = 0.9
SERIES_TOLERANCE = 1e-12
ODE_RTOL = 1e-12
ODE_ATOL = 1e-14

def _is_nonpositive_integer(z: np.ndarray) -> np.ndarray:
    """Mask of entries sitting on 0, -1, -2, ..."""
    return (z.imag == 0) & (z.real <= 0) & (z.real == np.round(z.real))

def _log_sin_pi(z: np.ndarray) -> np.ndarray:
    """log sin(pi z) without overflow for large |Im z|"""
    w = np.pi * z
    out = np.empty(w.shape, dtype=complex)
    big = np.abs(w.imag) > 20.0
    small = ~big
    out[small] = np.log(np.sin(w[small]))
    up = big & (w.imag > 0)
    # sin w = (i/2) e^{-iw} (1 - e^{2iw})
    out[up] = np.log(0.5j) - 1j * w[up] + np.log1p(-np.exp(2j * w[up]))
    down = big & (w.imag < 0)
    # sin w = (-i/2) e^{iw} (1 - e^{-2iw})
    out[down] = np.log(-0.5j) + 1j * w[down] + np.log1p(-np.exp(-2j * w[down]))
    # principal argument, as np.log gives on the small branch
    out[big] = out[big].real + 1j * np.angle(np.exp(1j * out[big].imag))
    return out

def log_gamma(z: ArrayLike) -> ArrayLike:
    """
    Complex log-Gamma by the Lanczos approximation

    Arguments with Re z < 1/2 go through the reflection formula with the
    2*pi*i*floor(Re z / 2 + 1/4) correction that keeps the principal branch.

    Args:
        z: complex scalar or array avoiding the poles 0, -1, -2, ...

    Returns:
        log Gamma(z) with the shape of z
    """
    scalar = np.ndim(z) == 0
    z = np.atleast_1d(np.asarray(z, dtype=complex)).ravel()
    poles = _is_nonpositive_integer(z)
    if np.any(poles):
        raise DomainError("log_gamma", f"Gamma pole at z={z[poles][0].real:g}")

    reflect = z.real < 0.5
    w = np.where(reflect, -z, z - 1.0)
    series = np.full(w.shape, LANCZOS_COEFFICIENTS[0], dtype=complex)
    for i in range(1, len(LANCZOS_COEFFICIENTS)):
        series += LANCZOS_COEFFICIENTS[i] / (w + i)
    t = w + LANCZOS_G + 0.5
    result = HALF_LOG_TWO_PI + (w + 0.5) * np.log(t) - t + np.log(series)

    if np.any(reflect):
        zr = z[reflect]
        branch = np.copysign(2.0 * np.pi, zr.imag) * np.floor(0.5 * zr.real + 0.25)
        result[reflect] = np.log(np.pi) + 1j * branch - _log_sin_pi(zr) - result[reflect]
    return result[0] if scalar else result

def _canonical_order(a: np.ndarray, b: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Order (a, b) lexicographically so that F(a,b) and F(b,a) share one evaluation"""
    swap = (a.real > b.real) | ((a.real == b.real) & (a.imag > b.imag))
    return np.where(swap, b, a), np.where(swap, a, b)

def hypergeometric_series(a: np.ndarray, b: np.ndarray, c: np.ndarray,
                          w: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Maclaurin series of 2F1(a, b; c; w) for 0 <= w < 1, elementwise

    Returns:
        (sum, achieved relative tolerance); the tolerance is eps times the
        ratio of the absolute series to the sum, infinite when the series
        did not settle within SERIES_MAX_TERMS
    """
    a, b, c, w = np.broadcast_arrays(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex),
                                     np.asarray(c, dtype=complex), np.asarray(w, dtype=float))
    total = np.ones(w.shape, dtype=complex)
    term = np.ones(w.shape, dtype=complex)
    magnitude = np.ones(w.shape)
    quiet = np.zeros(w.shape, dtype=int)
    active = w != 0

    k = 0
    while np.any(active) and k < SERIES_MAX_TERMS:
        idx = np.nonzero(active)
        term[idx] = term[idx] * (a[idx] + k) * (b[idx] + k) / ((c[idx] + k) * (k + 1)) * w[idx]
        total[idx] += term[idx]
        size = np.abs(term[idx])
        magnitude[idx] += size
        small = size <= EPS * np.abs(total[idx])
        quiet[idx] = np.where(small, quiet[idx] + 1, 0)
        active[idx] = quiet[idx] < 2
        k += 1

    with np.errstate(divide="ignore", invalid="ignore"):
        achieved = EPS * magnitude / np.abs(total)
    achieved = np.where(np.isfinite(achieved), achieved, np.inf)
    achieved[active] = np.inf
    return total, achieved

def _pfaff_value(a: np.ndarray, b: np.ndarray, c: np.ndarray,
                 tau: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """2F1(a, b; c; -sinh^2 tau) through F(a, c-b; c; tanh^2 tau)"""
    series, achieved = hypergeometric_series(a, c - b, c, np.tanh(tau) ** 2)
    return np.exp(-2.0 * a * np.log(np.cosh(tau))) * series, achieved

def hypergeometric_radial_table(a: ArrayLike, b: ArrayLike, c: complex, tau: ArrayLike,
                                rtol: float = ODE_RTOL) -> np.ndarray:
    """
    Table of 2F1(a_j, b_j; c; -sinh^2 tau_k)

    Radii up to a starting point tau0 use the transformed series; the rest
    come from integrating the hypergeometric equation in tau from tau0 for
    all parameter pairs at once. The unknown is rescaled by
    exp(2 min(Re a, Re b) tau) so the tolerance stays relative at large tau.

    Args:
        a, b: parameter vectors of equal length
        c: shared third parameter
        tau: nonnegative radii
        rtol: relative tolerance of the integrator

    Returns:
        complex array of shape (len(a), len(tau))
    """
    a = np.atleast_1d(np.asarray(a, dtype=complex))
    b = np.atleast_1d(np.asarray(b, dtype=complex))
    a, b = np.broadcast_arrays(a, b)
    c = complex(c)
    tau = np.atleast_1d(np.asarray(tau, dtype=float))
    if np.any(tau < 0):
        raise DomainError("hypergeometric_radial_table", "radii must be nonnegative")

    out = np.empty((a.size, tau.size), dtype=complex)
    scale = max(1.0, float(np.max(np.abs(a)) + np.max(np.abs(b))))
    tau0 = min(0.5, 2.0 / scale)

    near = tau <= tau0
    if np.any(near):
        values, achieved = _pfaff_value(a[:, None], b[:, None], c, tau[near][None, :])
        worst = float(np.max(achieved))
        if worst > SERIES_TOLERANCE:
            raise AccuracyError("hypergeometric_radial_table", worst,
                                "series near the origin did not converge")
        out[:, near] = values

    far = ~near
    if np.any(far):
        targets, inverse = np.unique(tau[far], return_inverse=True)
        table = _integrate_radial_equation(a, b, c, tau0, targets, rtol)
        out[:, far] = table[:, inverse]
    return out

def _integrate_radial_equation(a: np.ndarray, b: np.ndarray, c: complex, tau0: float,
                               targets: np.ndarray, rtol: float) -> np.ndarray:
    """DOP853 march of y'' + P(tau) y' + 4ab y = 0 from tau0 to sorted targets"""
    n = a.size
    start = np.array([tau0])
    y0, err0 = _pfaff_value(a, b, c, start)
    # dF/dz = (ab/c) F(a+1, b+1; c+1; z), dz/dtau = -sinh(2 tau)
    shifted, err1 = _pfaff_value(a + 1.0, b + 1.0, c + 1.0, start)
    worst = float(max(np.max(err0), np.max(err1)))
    if worst > SERIES_TOLERANCE:
        raise AccuracyError("hypergeometric_radial_table", worst,
                            "starting values for the radial equation are inaccurate")
    dy0 = (a * b / c) * shifted * (-np.sinh(2.0 * tau0))

    kappa = 2.0 * np.minimum(a.real, b.real)
    growth = np.exp(kappa * tau0)
    v0 = growth * y0
    dv0 = growth * (dy0 + kappa * y0)

    p_coth = 2.0 * c - 1.0
    p_tanh = 2.0 * (a + b) - 2.0 * c + 1.0
    q = 4.0 * a * b

    def rhs(t, state):
        v = state[:n]
        dv = state[n:]
        p = p_coth / np.tanh(t) + p_tanh * np.tanh(t)
        ddv = -(p - 2.0 * kappa) * dv - (kappa ** 2 - p * kappa + q) * v
        return np.concatenate([dv, ddv])

    solution = solve_ivp(rhs, (tau0, float(targets[-1])), np.concatenate([v0, dv0]),
                         method="DOP853", t_eval=targets, rtol=rtol, atol=ODE_ATOL)
    if not solution.success:
        raise AccuracyError("hypergeometric_radial_table", rtol, solution.message)
    return solution.y[:n, :] * np.exp(-kappa[:, None] * targets[None, :])

def gauss_2f1(a: ArrayLike, b: ArrayLike, c: ArrayLike, z: ArrayLike) -> ArrayLike:
    """
    Gauss hypergeometric function 2F1(a, b; c; z) for z <= 0

    The Pfaff transformation maps z to w = z/(z-1) in [0, 1) where the series
    converges. For w > 0.9, or when cancellation spoils the series, the value
    comes from integrating the hypergeometric equation instead.

    Args:
        a, b, c: complex parameters (broadcastable), c not in {0, -1, -2, ...}
        z: real arguments, z <= 0

    Returns:
        2F1(a, b; c; z) with the broadcast shape of the inputs
    """
    scalar = all(np.ndim(v) == 0 for v in (a, b, c, z))
    a, b, c, z = np.broadcast_arrays(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex),
                                     np.asarray(c, dtype=complex), np.asarray(z, dtype=float))
    shape = z.shape
    a, b, c, z = (np.array(v).ravel() for v in (a, b, c, z))

    if np.any(z > 0):
        raise DomainError("gauss_2f1", f"z must be <= 0, got z={float(np.max(z)):g}")
    poles = _is_nonpositive_integer(c)
    if np.any(poles):
        raise DomainError("gauss_2f1", f"c={c[poles][0].real:g} is a pole of the series")

    a, b = _canonical_order(a, b)
    w = z / (z - 1.0)
    values = np.empty(z.shape, dtype=complex)
    achieved = np.full(z.shape, np.inf)

    use_series = w <= SERIES_W_LIMIT
    if np.any(use_series):
        m = use_series
        series, err = hypergeometric_series(a[m], c[m] - b[m], c[m], w[m])
        values[m] = np.exp(-a[m] * np.log1p(-z[m])) * series
        achieved[m] = err

    fallback = achieved > SERIES_TOLERANCE
    if np.any(fallback):
        values[fallback] = _ode_fallback(a[fallback], b[fallback], c[fallback], z[fallback])

    values = values.reshape(shape)
    return complex(values) if scalar else values

def _ode_fallback(a: np.ndarray, b: np.ndarray, c: np.ndarray, z: np.ndarray) -> np.ndarray:
    """Evaluate points grouped by parameter triple through the radial equation"""
    tau = np.arcsinh(np.sqrt(-z))
    groups: Dict[Tuple[complex, complex, complex], list] = {}
    for i, key in enumerate(zip(a, b, c)):
        groups.setdefault(key, []).append(i)

    out = np.empty(z.shape, dtype=complex)
    for (ga, gb, gc), members in groups.items():
        members = np.array(members)
        out[members] = hypergeometric_radial_table(ga, gb, gc, tau[members])[0]
    logging.debug(f"2F1 ODE fallback used for {z.size} points in {len(groups)} groups")
    return out

def _check_order(nu: float, function: str) -> None:
    if nu < -0.5:
        raise DomainError(function, f"order nu={nu:g} is below -1/2")

def _check_argument(x: np.ndarray, function: str) -> None:
    if np.any(x < 0):
        raise DomainError(function, "argument must be nonnegative")

def bessel_j(nu: float, x: ArrayLike) -> ArrayLike:
    """Bessel function of the first kind J_nu(x) for nu >= -1/2, x >= 0"""
    _check_order(nu, "bessel_j")
    scalar = np.ndim(x) == 0
    x = np.asarray(x, dtype=float)
    _check_argument(x, "bessel_j")
    if nu < 0 and np.any(x == 0):
        raise DomainError("bessel_j", f"J_{nu:g} is singular at x=0")
    values = special.jv(nu, x)
    return float(values) if scalar else values

def normalized_bessel_j(nu: float, x: ArrayLike) -> ArrayLike:
    """
    Normalized Bessel function j_nu(x) = Gamma(nu+1) (x/2)^(-nu) J_nu(x)

    Args:
        nu: order, nu >= -1/2
        x: nonnegative arguments

    Returns:
        j_nu(x); exactly 1 at x = 0
    """
    _check_order(nu, "normalized_bessel_j")
    scalar = np.ndim(x) == 0
    x = np.atleast_1d(np.asarray(x, dtype=float))
    _check_argument(x, "normalized_bessel_j")

    out = np.empty(x.shape)
    tiny = x < 1e-3
    u = (0.5 * x[tiny]) ** 2
    out[tiny] = 1.0 - u / (nu + 1.0) + u ** 2 / (2.0 * (nu + 1.0) * (nu + 2.0))
    rest = ~tiny
    xr = x[rest]
    out[rest] = special.gamma(nu + 1.0) * (0.5 * xr) ** (-nu) * special.jv(nu, xr)
    return float(out[0]) if scalar else out.reshape(np.shape(x))

def bessel_j_series(nu: float, x: float, max_terms: int = 500) -> float:
    """J_nu(x) by its power series, summed to machine tolerance"""
    _check_order(nu, "bessel_j_series")
    if x < 0:
        raise DomainError("bessel_j_series", "argument must be nonnegative")
    if x == 0:
        return 1.0 if nu == 0 else 0.0
    half = 0.5 * x
    term = half ** nu / special.gamma(nu + 1.0)
    total = term
    for k in range(max_terms):
        term *= -half * half / ((k + 1.0) * (k + 1.0 + nu))
        total += term
        if abs(term) <= EPS * abs(total):
            break
    return float(total)

def bessel_j_recurrence(nu: float, x: float) -> float:
    """
    J_nu(x) by Miller's backward recurrence

    The recurrence runs on orders mu + k with mu the fractional part of nu
    and is normalised by (x/2)^mu = sum_k (mu+2k) Gamma(mu+k)/k! J_{mu+2k}(x).
    Independent of the power series, accurate for moderate and large x.
    """
    _check_order(nu, "bessel_j_recurrence")
    if x < 0:
        raise DomainError("bessel_j_recurrence", "argument must be nonnegative")
    if x == 0:
        return bessel_j_series(nu, x)

    mu = nu if nu < 1.0 else nu - np.floor(nu)
    target = int(round(nu - mu))
    top = int(max(target, np.ceil(x))) + 60

    f = np.zeros(top + 2)
    f[top] = 1.0
    for k in range(top, 0, -1):
        f[k - 1] = 2.0 * (mu + k) / x * f[k] - f[k + 1]
        if abs(f[k - 1]) > 1e250:
            f[k - 1:] *= 1e-250

    evens = np.arange(0, top + 1, 2)
    ks = evens // 2
    weights = np.empty(ks.size)
    weights[0] = special.gamma(mu + 1.0)
    rest = ks[1:]
    weights[1:] = (mu + 2.0 * rest) * np.exp(special.gammaln(mu + rest) - special.gammaln(rest + 1.0))
    norm = np.dot(weights, f[evens]) / (0.5 * x) ** mu
    return float(f[target] / norm)
