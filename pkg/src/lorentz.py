# src/lorentz.py

import numpy as np
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple, Union
import logging

from .error_handling import ConfigurationError
from .reports import InequalityReport
from .sampling import SampledRadialFunction, WeightedMeasure, lp_norm
from .utils import fit_power_law

ONEIL_SLACK = 1e-9

@dataclass(frozen=True, eq=False)
class RearrangementProfile:
    """Data class for the step profile of a non-increasing rearrangement f*

    f*(t) = values[k] on [breakpoints[k], breakpoints[k+1]) and 0 beyond the
    last breakpoint. Values are strictly decreasing and positive.
    """
    breakpoints: np.ndarray
    values: np.ndarray

    @property
    def size(self) -> int:
        return self.values.size

    def __call__(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        index = np.searchsorted(self.breakpoints, t, side="right") - 1
        padded = np.append(self.values, 0.0)
        index = np.where((index < 0) | (index >= self.size), self.size, index)
        return padded[index]

    def lp_integral(self, p: float) -> float:
        """integral of (f*)^p dt"""
        if self.size == 0:
            return 0.0
        return float(np.sum(self.values ** p * np.diff(self.breakpoints)))

def _profile(magnitudes: np.ndarray, masses: np.ndarray) -> RearrangementProfile:
    keep = (masses > 0) & (magnitudes > 0)
    if not np.any(keep):
        return RearrangementProfile(np.zeros(1), np.zeros(0))
    # equal values merge into one segment, so tie order cannot matter
    levels, inverse = np.unique(magnitudes[keep], return_inverse=True)
    level_mass = np.bincount(inverse, weights=masses[keep])
    values = levels[::-1]
    breakpoints = np.concatenate(([0.0], np.cumsum(level_mass[::-1])))
    return RearrangementProfile(breakpoints, values)

def rearrangement(f: SampledRadialFunction) -> RearrangementProfile:
    """
    Non-increasing rearrangement f*(t) = inf{s : lambda_f(s) <= t}

    Each node is a cell with value |f(x_i)| and mass w_i * density(x_i);
    sorting the cells by value and accumulating masses gives f* exactly.
    """
    return _profile(np.abs(f.values), f.measure.cell_masses)

def distribution_function(f: SampledRadialFunction, s) -> Union[float, np.ndarray]:
    """lambda_f(s): mass of the cells where |f| > s"""
    scalar = np.ndim(s) == 0
    s = np.atleast_1d(np.asarray(s, dtype=float))
    magnitude = np.abs(f.values)
    masses = f.measure.cell_masses
    out = np.array([float(np.sum(masses[magnitude > level])) for level in s])
    return float(out[0]) if scalar else out

def _as_profile(f) -> RearrangementProfile:
    if isinstance(f, RearrangementProfile):
        return f
    if hasattr(f, "as_sampled"):
        f = f.as_sampled()
    return rearrangement(f)

def lorentz_norm(f, p: float, q: float) -> float:
    """
    Lorentz quasi-norm ||f||*_{p,q} from the step profile of f*

    q < inf: ((q/p) integral t^(q/p-1) f*(t)^q dt)^(1/q), evaluated per segment as
    v_k^q (t_k^(q/p) - t_(k-1)^(q/p)). q = inf: sup_t t lambda_f(t)^(1/p), attained
    at breakpoints. p = inf is only defined with q = inf (the sup norm).

    Args:
        f: SampledRadialFunction, SpectralFunction or RearrangementProfile
        p: first index in [1, inf]
        q: second index in (0, inf]

    Returns:
        the quasi-norm; inf (with a warning) when it diverges
    """
    if p < 1:
        raise ConfigurationError("p", f"Lorentz index p must be >= 1, got {p:g}")
    if q <= 0:
        raise ConfigurationError("q", f"Lorentz index q must be positive, got {q:g}")
    if np.isinf(p) and not np.isinf(q):
        raise ConfigurationError("q", "L^{inf,q} is only defined for q = inf")

    profile = _as_profile(f)
    if profile.size == 0:
        return 0.0
    peak = float(profile.values[0])
    scaled = profile.values / peak
    t = profile.breakpoints

    if np.isinf(q):
        if np.isinf(p):
            return peak
        result = peak * float(np.max(scaled * t[1:] ** (1.0 / p)))
    else:
        exponent = q / p
        increments = t[1:] ** exponent - t[:-1] ** exponent
        result = peak * float(np.sum(scaled ** q * increments)) ** (1.0 / q)

    if not np.isfinite(result):
        logging.warning(f"Lorentz norm L^({p:g},{q:g}) diverged")
        return float("inf")
    return result

def oneil_constant(q: float) -> float:
    """Constant C_q = ((q-1) 2^(q-1))^(1/q) valid for the normalised quasi-norms"""
    return ((q - 1.0) * 2.0 ** (q - 1.0)) ** (1.0 / q)

def _same_measure(a: WeightedMeasure, b: WeightedMeasure) -> bool:
    if a is b:
        return True
    return (a.label is b.label and a.grid.key == b.grid.key
            and np.array_equal(a.density, b.density))

def oneil_check(g: SampledRadialFunction, h: SampledRadialFunction, q: float,
                slack: float = ONEIL_SLACK) -> InequalityReport:
    """
    O'Neil product estimate ||gh||*_{q',q} <= C ||g||_q ||h||*_{r,inf}, r = q/(q-2)

    The pass bound uses oneil_constant(q); whether the constant-1 form held is
    recorded as a non-blocking sub-check.

    Args:
        g: first factor
        h: second factor on the same measure
        q: exponent > 2
        slack: relative tolerance on the bound

    Returns:
        InequalityReport with one row
    """
    if not q > 2:
        raise ConfigurationError("q", f"O'Neil check needs q > 2, got {q:g}")
    if not _same_measure(g.measure, h.measure):
        raise ConfigurationError("measure", "O'Neil check needs g and h on the same measure")

    q_dual = q / (q - 1.0)
    r = q / (q - 2.0)
    constant = oneil_constant(q)
    product = SampledRadialFunction(g.measure, g.values * h.values, f"{g.label}*{h.label}")

    report = InequalityReport(
        inequality_id="oneil",
        datum={"measure": g.measure.label.value},
        parameters={"q": q, "q_dual": q_dual, "r": r, "constant": constant},
        bound=constant * (1.0 + slack),
        grid=g.grid.metadata(),
    )
    lhs = lorentz_norm(product, q_dual, q)
    rhs = lp_norm(g, q) * lorentz_norm(h, r, float("inf"))
    row = report.add_row(product.label or "pair", lhs, rhs)
    report.add_sub_check("constant_one_form", row.ratio, 1.0 + slack, blocking=False)
    return report

def _as_sampled(output) -> SampledRadialFunction:
    return output.as_sampled() if hasattr(output, "as_sampled") else output

def weak_type_constant(outputs: Sequence, inputs: Sequence[SampledRadialFunction],
                       t_grid: Optional[np.ndarray] = None, p: float = 1.0,
                       q: float = 1.0, measure: Optional[WeightedMeasure] = None) -> float:
    """
    Empirical weak type (p,q) constant max_f sup_t t nu({|Tf| > t})^(1/q) / ||f||_p

    The superlevel sets are measured with the output's own measure (or the given
    one). Without a t grid the supremum is taken exactly over the profile
    breakpoints.
    """
    if len(outputs) != len(inputs):
        raise ConfigurationError("weak_type_constant", "outputs and inputs must pair up")
    best = 0.0
    for output, f in zip(outputs, inputs):
        sampled = _as_sampled(output)
        if measure is not None:
            sampled = sampled.on_measure(measure)
        norm = lp_norm(f, p)
        if t_grid is None:
            level = lorentz_norm(sampled, q, float("inf"))
        else:
            t = np.asarray(t_grid, dtype=float)
            level = float(np.max(t * distribution_function(sampled, t) ** (1.0 / q)))
        if level == 0.0:
            continue
        if norm == 0.0:
            return float("inf")
        best = max(best, level / norm)
    return best

def weak_type_profile(output, input_norm: float, t_values: np.ndarray, q: float = 1.0) -> np.ndarray:
    """t nu({|Tf| > t})^(1/q) / ||f|| on a grid of levels"""
    t = np.asarray(t_values, dtype=float)
    sampled = _as_sampled(output)
    if input_norm == 0:
        return np.zeros_like(t)
    return t * distribution_function(sampled, t) ** (1.0 / q) / input_norm

def young_sublevel_constant(psi_values: np.ndarray, measure: WeightedMeasure,
                            t_values: np.ndarray) -> Tuple[float, float]:
    """
    Sublevel constant sup_t mu({psi <= t}) / t for a sampled Young function

    Returns:
        (supremum, fitted log-log slope of mu({psi <= t}) / t)
    """
    t = np.asarray(t_values, dtype=float)
    psi = np.abs(np.asarray(psi_values))
    masses = measure.cell_masses
    if psi.shape != masses.shape:
        raise ConfigurationError("young_sublevel_constant", "psi does not match the measure grid")
    ratios = np.array([float(np.sum(masses[psi <= level])) for level in t]) / t
    slope, _, _ = fit_power_law(t, ratios)
    return float(np.max(ratios)), slope

def power_sublevel_constant(ball_constant: float, dimension: float, k: float,
                            t_values: np.ndarray) -> Tuple[float, float]:
    """
    Sublevel constant for psi(x) = ||x||^k against a homogeneous measure

    mu({||x||^k <= t}) = ball_constant t^(dimension/k); bounded by t exactly when
    k = dimension.

    Returns:
        (supremum over t_values, fitted slope)
    """
    if k <= 0:
        raise ConfigurationError("k", f"Young exponent must be positive, got {k:g}")
    t = np.asarray(t_values, dtype=float)
    ratios = ball_constant * t ** (dimension / k) / t
    slope, _, _ = fit_power_law(t, ratios)
    return float(np.max(ratios)), slope
