# src/sampling.py

import numpy as np
from scipy import special
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Optional
import logging

from .error_handling import CalibrationError, ConfigurationError, DomainError, IntegrabilityError
from .root_datum import RootDatum, density_J, dunkl_weight, plancherel_density

DEFAULT_X_MAX = 20.0
DEFAULT_LAMBDA_MAX = 60.0
DEFAULT_PANEL_ORDER = 64
DEFAULT_PANELS_PER_UNIT = 1.0

FAMILIES = ("gaussian_bump", "cosh_power", "plateau_bump", "random_band")

@dataclass(frozen=True, eq=False)
class RadialGrid:
    """
    Composite Gauss-Legendre grid on [0, x_max]

    With a non-zero endpoint_exponent e the first panel carries Gauss-Jacobi
    nodes for the weight x^e, and its weights are divided by x^e at the nodes,
    so integrands behaving like x^e * (smooth) near 0 keep spectral accuracy.
    """
    nodes: np.ndarray
    weights: np.ndarray
    x_max: float
    panels: int
    order: int
    endpoint_exponent: float = 0.0

    @classmethod
    def from_panels(cls, x_max: float, panels: int, order: int = DEFAULT_PANEL_ORDER,
                    endpoint_exponent: float = 0.0) -> "RadialGrid":
        if x_max <= 0 or panels < 1 or order < 1:
            raise ConfigurationError("grid", f"invalid grid x_max={x_max}, panels={panels}, order={order}")
        if endpoint_exponent <= -1.0:
            raise ConfigurationError("grid", f"endpoint exponent must be > -1, got {endpoint_exponent:g}")
        t, w = np.polynomial.legendre.leggauss(order)
        edges = np.linspace(0.0, x_max, panels + 1)
        half = 0.5 * np.diff(edges)
        mid = 0.5 * (edges[1:] + edges[:-1])
        nodes = mid[:, None] + half[:, None] * t[None, :]
        weights = half[:, None] * w[None, :]
        if endpoint_exponent != 0.0:
            tj, wj = special.roots_jacobi(order, 0.0, endpoint_exponent)
            nodes[0] = half[0] * (tj + 1.0)
            weights[0] = half[0] * wj * (tj + 1.0) ** (-endpoint_exponent)
        nodes = nodes.ravel()
        weights = weights.ravel()
        nodes.setflags(write=False)
        weights.setflags(write=False)
        return cls(nodes, weights, float(x_max), int(panels), int(order), float(endpoint_exponent))

    @classmethod
    def build(cls, x_max: float, panel_order: int = DEFAULT_PANEL_ORDER,
              panels_per_unit: float = DEFAULT_PANELS_PER_UNIT,
              endpoint_exponent: float = 0.0) -> "RadialGrid":
        """Grid with roughly panels_per_unit panels per unit length"""
        panels = max(1, int(np.ceil(x_max * panels_per_unit - 1e-9)))
        return cls.from_panels(x_max, panels, panel_order, endpoint_exponent)

    def refined(self, factor: int) -> "RadialGrid":
        """Same rule with the panel count multiplied by factor"""
        return RadialGrid.from_panels(self.x_max, self.panels * int(factor), self.order,
                                      self.endpoint_exponent)

    def with_endpoint_exponent(self, exponent: float) -> "RadialGrid":
        """Same panels with the first-panel rule adapted to x^exponent"""
        if float(exponent) == self.endpoint_exponent:
            return self
        return RadialGrid.from_panels(self.x_max, self.panels, self.order, exponent)

    @property
    def size(self) -> int:
        return self.nodes.size

    @property
    def key(self) -> tuple:
        return (self.x_max, self.panels, self.order, self.endpoint_exponent)

    def metadata(self) -> dict:
        meta = {"x_max": self.x_max, "panels": self.panels, "order": self.order, "nodes": self.size}
        if self.endpoint_exponent:
            meta["endpoint_exponent"] = self.endpoint_exponent
        return meta

def default_radial_grid() -> RadialGrid:
    return RadialGrid.build(DEFAULT_X_MAX)

def default_spectral_grid() -> RadialGrid:
    return RadialGrid.build(DEFAULT_LAMBDA_MAX)

class MeasureLabel(str, Enum):
    """Which measure a density realises"""
    MU_J = "mu_J"
    NU_PLANCHEREL = "nu_plancherel"
    NU_BAR = "nu_bar"
    MU0_FLAT = "mu0_flat"
    LEBESGUE = "lebesgue"

@dataclass(frozen=True, eq=False)
class WeightedMeasure:
    """Data class for a density against Lebesgue measure on a radial grid"""
    grid: RadialGrid
    density: np.ndarray
    label: MeasureLabel
    params: Dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "label", MeasureLabel(self.label))
        density = np.array(self.density, dtype=float)
        if density.shape != self.grid.nodes.shape:
            raise DomainError("WeightedMeasure", "density does not match the grid")
        if not np.all(np.isfinite(density)) or np.any(density < 0):
            raise DomainError("WeightedMeasure", f"density of {self.label.value} must be finite and >= 0")
        density.setflags(write=False)
        object.__setattr__(self, "density", density)

    @property
    def cell_masses(self) -> np.ndarray:
        return self.grid.weights * self.density

def lebesgue(grid: RadialGrid) -> WeightedMeasure:
    return WeightedMeasure(grid, np.ones(grid.size), MeasureLabel.LEBESGUE)

def mu_measure(datum: RootDatum, grid: RadialGrid) -> WeightedMeasure:
    """dmu = J(x) dx"""
    return WeightedMeasure(grid, density_J(datum, grid.nodes), MeasureLabel.MU_J)

def nu_measure(datum: RootDatum, grid: RadialGrid) -> WeightedMeasure:
    """dnu = kappa |c(i xi)|^-2 dxi"""
    return WeightedMeasure(grid, plancherel_density(datum, grid.nodes), MeasureLabel.NU_PLANCHEREL)

def nu_bar_measure(datum: RootDatum, grid: RadialGrid, a: float, b: float) -> WeightedMeasure:
    """dnu_bar = |W|^-1 xi^a (1+xi)^b dnu"""
    xi = grid.nodes
    density = xi ** a * (1.0 + xi) ** b * plancherel_density(datum, xi) / datum.weyl_order
    return WeightedMeasure(grid, density, MeasureLabel.NU_BAR, {"a": float(a), "b": float(b)})

def mu0_measure(datum: RootDatum, grid: RadialGrid) -> WeightedMeasure:
    """dmu0 = omega_m(x) dx in rank one"""
    return WeightedMeasure(grid, dunkl_weight(datum, grid.nodes), MeasureLabel.MU0_FLAT)

def nu0_measure(datum: RootDatum, grid: RadialGrid) -> WeightedMeasure:
    """Flat spectral measure kappa_0 omega_m(xi) dxi"""
    if datum.flat_kappa is None:
        raise CalibrationError(datum.label, "flat Plancherel constant is not calibrated")
    density = datum.flat_kappa * dunkl_weight(datum, grid.nodes)
    return WeightedMeasure(grid, density, MeasureLabel.MU0_FLAT, {"spectral": 1.0})

@dataclass(frozen=True, eq=False)
class SampledRadialFunction:
    """Data class for node values of a radial function and the measure it lives against"""
    measure: WeightedMeasure
    values: np.ndarray
    label: str = ""

    def __post_init__(self):
        values = np.array(self.values, dtype=complex)
        if values.shape != self.measure.grid.nodes.shape:
            raise DomainError("SampledRadialFunction", "values do not match the grid")
        if not np.all(np.isfinite(values)):
            raise DomainError("SampledRadialFunction", f"non-finite values in {self.label or 'function'}")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def grid(self) -> RadialGrid:
        return self.measure.grid

    @property
    def support_radius(self) -> float:
        nonzero = np.nonzero(self.values)[0]
        return float(self.grid.nodes[nonzero[-1]]) if nonzero.size else 0.0

    @property
    def compactly_supported(self) -> bool:
        """True when the sampled values end in a run of zeros"""
        return self.values.size > 0 and self.values[-1] == 0

    def with_values(self, values: np.ndarray, label: Optional[str] = None) -> "SampledRadialFunction":
        return SampledRadialFunction(self.measure, values, self.label if label is None else label)

    def on_measure(self, measure: WeightedMeasure) -> "SampledRadialFunction":
        """Same values against another measure on the same grid"""
        if measure.grid is not self.grid and measure.grid.key != self.grid.key:
            raise ConfigurationError("measure", "cannot move a function to a different grid")
        return SampledRadialFunction(measure, self.values, self.label)

    def scaled(self, factor: complex) -> "SampledRadialFunction":
        return self.with_values(factor * self.values)

@dataclass
class QuadratureResult:
    """Data class for a quadrature value and its truncation estimate"""
    value: complex
    tail_error: float

def integrate(f: SampledRadialFunction) -> QuadratureResult:
    """
    Integral of f against its measure by the panel rule

    The tail estimate extrapolates the last two panel masses of |f| as a
    geometric sequence; a non-decaying tail reports the last panel mass.
    """
    masses = f.measure.cell_masses
    value = complex(np.sum(f.values * masses))
    grid = f.grid
    panel_mass = np.sum((np.abs(f.values) * masses).reshape(grid.panels, grid.order), axis=1)
    last = float(panel_mass[-1])
    if last == 0.0:
        tail = 0.0
    elif grid.panels < 2 or panel_mass[-2] == 0.0:
        tail = last
    else:
        ratio = last / float(panel_mass[-2])
        tail = last * ratio / (1.0 - ratio) if ratio < 1.0 else last
    return QuadratureResult(value, tail)

def lp_norm(f: SampledRadialFunction, p: float) -> float:
    """(integral |f|^p dmeasure)^(1/p); p = inf gives the max over charged nodes"""
    return weighted_lp_norm(f.values, f.measure.cell_masses, p)

def weighted_lp_norm(values: np.ndarray, masses: np.ndarray, p: float) -> float:
    """L^p norm of cell values against cell masses, scaled by the peak to avoid overflow"""
    if p < 1:
        raise ConfigurationError("p", f"L^p norms need p >= 1, got {p:g}")
    magnitude = np.abs(values)
    if np.isinf(p):
        charged = masses > 0
        return float(np.max(magnitude[charged])) if np.any(charged) else 0.0
    peak = float(np.max(magnitude)) if magnitude.size else 0.0
    if peak == 0.0:
        return 0.0
    return peak * float(np.sum((magnitude / peak) ** p * masses)) ** (1.0 / p)

def gaussian_bump(x: np.ndarray, center: float = 0.0, width: float = 1.0) -> np.ndarray:
    """Even Gaussian bump, f(0) = 1 when centered at the origin"""
    if width <= 0:
        raise ConfigurationError("width", f"gaussian_bump width must be positive, got {width:g}")
    return 0.5 * (np.exp(-((x - center) / width) ** 2) + np.exp(-((x + center) / width) ** 2))

def cosh_power(x: np.ndarray, sigma: float) -> np.ndarray:
    """(cosh x)^-sigma"""
    log_cosh = np.abs(x) + np.log1p(np.exp(-2.0 * np.abs(x))) - np.log(2.0)
    return np.exp(-sigma * log_cosh)

def _smooth_step(v: np.ndarray) -> np.ndarray:
    """C-infinity step: 0 for v <= 0, 1 for v >= 1"""
    def e(u):
        out = np.zeros_like(u)
        pos = u > 0
        out[pos] = np.exp(-1.0 / u[pos])
        return out
    up = e(v)
    return up / (up + e(1.0 - v))

def plateau_bump(x: np.ndarray, center: float = 0.0, plateau: float = 1.0,
                 transition: float = 1.0) -> np.ndarray:
    """Equal to 1 within plateau of center, vanishing beyond plateau + transition"""
    if plateau < 0 or transition <= 0:
        raise ConfigurationError("plateau_bump", "need plateau >= 0 and transition > 0")
    if center != 0 and center <= plateau + transition:
        raise ConfigurationError("plateau_bump",
                                 "an off-center bump must stay away from the origin "
                                 "(center > plateau + transition)")
    distance = np.abs(np.abs(x) - center)
    return _smooth_step((plateau + transition - distance) / transition)

def random_band(x: np.ndarray, seed: int = 0, modes: int = 6, bandwidth: float = 3.0,
                width: float = 2.0) -> np.ndarray:
    """Gaussian envelope times a random cosine sum, scaled to max 1"""
    rng = np.random.default_rng(seed)
    freqs = rng.uniform(0.0, bandwidth, modes)
    amps = rng.normal(size=modes)
    values = np.exp(-(x / width) ** 2) * (np.cos(np.outer(x, freqs)) @ amps)
    peak = np.max(np.abs(values))
    return values / peak if peak > 0 else values

def assert_tail_decay(values: np.ndarray, nodes: np.ndarray, rate: float, condition: str) -> None:
    """
    Reject values whose |f(x)| e^(rate x) does not decay on the last quarter of the grid

    Raises:
        IntegrabilityError naming the condition
    """
    start = (3 * nodes.size) // 4
    tail = np.abs(values[start:])
    if tail.size < 2 or tail[0] == 0 and tail[-1] == 0:
        return
    with np.errstate(divide="ignore"):
        log_g = np.log(tail) + rate * nodes[start:]
    if not log_g[-1] < np.max(log_g[: max(1, tail.size // 2)]):
        raise IntegrabilityError(condition,
                                 f"|f(x)| e^({rate:.4g} x) is not decaying on the last quarter of the grid")

def make_test_function(family: str, measure: WeightedMeasure, rho: float = 0.0,
                       q: float = 1.0, **params) -> SampledRadialFunction:
    """
    Build a member of a test family on a measure

    Args:
        family: one of FAMILIES
        measure: measure the function is attached to
        rho: growth rate of the measure (J grows like e^(2 rho x))
        q: exponent whose integrability is guarded
        **params: family parameters

    Returns:
        SampledRadialFunction labelled with its parameters
    """
    x = measure.grid.nodes
    if family == "gaussian_bump":
        center = float(params.get("center", 0.0))
        width = float(params.get("width", 1.0))
        values = gaussian_bump(x, center, width)
        label = f"gaussian_bump(center={center:g},width={width:g})"
    elif family == "cosh_power":
        if "sigma" not in params:
            raise ConfigurationError("cosh_power", "missing sigma")
        sigma = float(params["sigma"])
        if sigma <= 2.0 * rho / q:
            raise IntegrabilityError("sigma > 2*rho/q",
                                     f"cosh_power needs sigma > {2.0 * rho / q:.6g}, got {sigma:g}")
        values = cosh_power(x, sigma)
        label = f"cosh_power(sigma={sigma:g})"
    elif family == "plateau_bump":
        center = float(params.get("center", 0.0))
        plateau = float(params.get("plateau", 1.0))
        transition = float(params.get("transition", 1.0))
        values = plateau_bump(x, center, plateau, transition)
        label = f"plateau_bump(center={center:g},plateau={plateau:g},transition={transition:g})"
    elif family == "random_band":
        seed = int(params.get("seed", 0))
        modes = int(params.get("modes", 6))
        bandwidth = float(params.get("bandwidth", 3.0))
        width = float(params.get("width", 2.0))
        values = random_band(x, seed, modes, bandwidth, width)
        label = f"random_band(seed={seed},modes={modes},bandwidth={bandwidth:g},width={width:g})"
    else:
        raise ConfigurationError("family", f"unknown test family '{family}', expected one of {FAMILIES}")

    assert_tail_decay(values, x, 2.0 * rho / q, f"|f(x)| e^(2 rho x / q) decays (q={q:g})")
    logging.debug(f"Built test function {label} on {measure.label.value}")
    return SampledRadialFunction(measure, values, label)
