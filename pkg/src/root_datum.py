# src/root_datum.py

import numpy as np
from dataclasses import dataclass, replace
from enum import Enum
from typing import Optional, Tuple, Union
from scipy import special

from .error_handling import CalibrationError, ConfigurationError, DomainError
from .special_functions import _is_nonpositive_integer, log_gamma

ArrayLike = Union[float, complex, np.ndarray]

class DatumKind(str, Enum):
    """Supported geometries"""
    RANK_ONE = "rank_one"
    FLAT_PRODUCT = "flat_product"

@dataclass(frozen=True)
class RootDatum:
    """Data class for a root datum with its calibrated Plancherel constants"""
    kind: DatumKind
    multiplicities: Tuple[float, ...]
    kappa: Optional[float] = None
    flat_kappa: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "kind", DatumKind(self.kind))
        object.__setattr__(self, "multiplicities", tuple(float(m) for m in self.multiplicities))
        m = self.multiplicities
        if self.kind is DatumKind.RANK_ONE:
            if len(m) != 2:
                raise ConfigurationError("datum.multiplicities",
                                         "rank one takes the pair (m_alpha, m_2alpha)")
            if m[0] < 0 or m[1] < 0 or m[0] + m[1] <= 0:
                raise ConfigurationError("datum.multiplicities",
                                         f"need m_alpha, m_2alpha >= 0 with positive sum, got {m}")
        else:
            if len(m) == 0 or any(mi <= 0 for mi in m):
                raise ConfigurationError("datum.multiplicities",
                                         f"flat product needs positive per-axis multiplicities, got {m}")

    @classmethod
    def rank_one(cls, m_alpha: float, m_2alpha: float = 0.0) -> "RootDatum":
        return cls(DatumKind.RANK_ONE, (m_alpha, m_2alpha))

    @classmethod
    def flat_product(cls, *multiplicities: float) -> "RootDatum":
        return cls(DatumKind.FLAT_PRODUCT, tuple(multiplicities))

    @property
    def is_rank_one(self) -> bool:
        return self.kind is DatumKind.RANK_ONE

    @property
    def rank(self) -> int:
        return 1 if self.is_rank_one else len(self.multiplicities)

    @property
    def m_alpha(self) -> float:
        return self.multiplicities[0]

    @property
    def m_2alpha(self) -> float:
        return self.multiplicities[1] if self.is_rank_one else 0.0

    @property
    def rho(self) -> float:
        """rho in rank one; half the norm of 2*rho for the product case"""
        if self.is_rank_one:
            return self.m_alpha / 2.0 + self.m_2alpha
        return 0.5 * float(np.linalg.norm(self.multiplicities))

    @property
    def beta(self) -> float:
        if self.is_rank_one:
            return self.m_alpha + self.m_2alpha
        return float(sum(self.multiplicities))

    @property
    def endpoint_exponent(self) -> float:
        """Non-integer beta in rank one, where J(x) ~ x^beta is not smooth at 0; else 0"""
        if self.is_rank_one and not float(self.beta).is_integer():
            return float(self.beta)
        return 0.0

    @property
    def indivisible_roots(self) -> int:
        return self.rank

    @property
    def weyl_order(self) -> int:
        return 2 ** self.rank

    @property
    def flat_degree(self) -> float:
        """Homogeneity degree of the flat weight; plays the role of 2*rho"""
        return self.beta

    @property
    def bessel_indices(self) -> Tuple[float, ...]:
        if self.is_rank_one:
            return ((self.beta - 1.0) / 2.0,)
        return tuple((m - 1.0) / 2.0 for m in self.multiplicities)

    @property
    def bessel_index(self) -> float:
        return self.bessel_indices[0]

    @property
    def label(self) -> str:
        if self.is_rank_one:
            return f"rank_one(m_alpha={self.m_alpha:g}, m_2alpha={self.m_2alpha:g})"
        inner = ", ".join(f"{m:g}" for m in self.multiplicities)
        return f"flat_product(m=({inner}))"

    def with_calibration(self, kappa: Optional[float] = None,
                         flat_kappa: Optional[float] = None) -> "RootDatum":
        """Copy of the datum carrying calibrated constants"""
        return replace(self,
                       kappa=self.kappa if kappa is None else float(kappa),
                       flat_kappa=self.flat_kappa if flat_kappa is None else float(flat_kappa))

    def describe(self) -> dict:
        return {
            "kind": self.kind.value,
            "multiplicities": list(self.multiplicities),
            "rho": self.rho,
            "beta": self.beta,
            "rank": self.rank,
            "kappa": self.kappa,
            "flat_kappa": self.flat_kappa,
        }

@dataclass(frozen=True)
class TubeParameter:
    """Data class for an exponent p and a real shift inside the tube C(eps_p rho)"""
    p: float
    eta: float
    rho: float

    def __post_init__(self):
        if not 1.0 < self.p <= 2.0:
            raise ConfigurationError("p", f"tube exponent p={self.p:g} must lie in (1, 2]")
        if self.eta != 0.0 and abs(self.eta) >= self.bound:
            raise ConfigurationError(
                "eta",
                f"|eta|={abs(self.eta):g} must be < eps_p*rho = {self.bound:.6g} "
                f"(p={self.p:g}, rho={self.rho:g})"
            )

    @property
    def eps_p(self) -> float:
        return 2.0 / self.p - 1.0

    @property
    def bound(self) -> float:
        return self.eps_p * self.rho

def _require_rank_one(datum: RootDatum, function: str) -> None:
    if not datum.is_rank_one:
        raise DomainError(function, f"needs a rank-one datum, got {datum.label}")

def density_J(datum: RootDatum, x: ArrayLike) -> ArrayLike:
    """Radial density J(x) = (2 sinh x)^m_alpha (2 sinh 2x)^m_2alpha"""
    _require_rank_one(datum, "density_J")
    scalar = np.ndim(x) == 0
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise DomainError("density_J", "radial argument must be nonnegative")
    values = (2.0 * np.sinh(x)) ** datum.m_alpha * (2.0 * np.sinh(2.0 * x)) ** datum.m_2alpha
    return float(values) if scalar else values

def _log_c_unnormalized(datum: RootDatum, lam: np.ndarray) -> np.ndarray:
    """log of 2^-lam Gamma(lam) / (Gamma(lam/2+m_alpha/4+1/2) Gamma(lam/2+m_alpha/4+m_2alpha/2))"""
    first = lam / 2.0 + datum.m_alpha / 4.0 + 0.5
    second = lam / 2.0 + datum.m_alpha / 4.0 + datum.m_2alpha / 2.0
    return -lam * np.log(2.0) + log_gamma(lam) - log_gamma(first) - log_gamma(second)

def c_function(datum: RootDatum, lam: ArrayLike) -> ArrayLike:
    """
    Harish-Chandra c-function in rank one, normalised by c(rho) = 1

    Args:
        datum: rank-one datum
        lam: complex spectral parameter(s), not at a pole of Gamma(lam)

    Returns:
        c(lam) with the shape of lam
    """
    _require_rank_one(datum, "c_function")
    scalar = np.ndim(lam) == 0
    lam = np.atleast_1d(np.asarray(lam, dtype=complex)).ravel()
    if np.any(_is_nonpositive_integer(lam)):
        bad = lam[_is_nonpositive_integer(lam)][0].real
        raise DomainError("c_function", f"pole of Gamma(lambda) at lambda={bad:g}")

    first = lam / 2.0 + datum.m_alpha / 4.0 + 0.5
    second = lam / 2.0 + datum.m_alpha / 4.0 + datum.m_2alpha / 2.0
    zeros = _is_nonpositive_integer(first) | _is_nonpositive_integer(second)
    out = np.zeros(lam.shape, dtype=complex)
    regular = ~zeros
    if np.any(regular):
        norm = _log_c_unnormalized(datum, np.array([datum.rho], dtype=complex))[0]
        out[regular] = np.exp(_log_c_unnormalized(datum, lam[regular]) - norm)
    return complex(out[0]) if scalar else out

def inverse_c_squared(datum: RootDatum, xi: ArrayLike) -> ArrayLike:
    """|c(i xi)|^-2 for xi >= 0, with the limit value 0 at xi = 0"""
    _require_rank_one(datum, "inverse_c_squared")
    scalar = np.ndim(xi) == 0
    xi = np.atleast_1d(np.asarray(xi, dtype=float))
    out = np.zeros(xi.shape)
    nonzero = xi != 0
    if np.any(nonzero):
        norm = _log_c_unnormalized(datum, np.array([datum.rho], dtype=complex))[0].real
        log_c = _log_c_unnormalized(datum, 1j * np.abs(xi[nonzero])).real - norm
        out[nonzero] = np.exp(-2.0 * log_c)
    return float(out[0]) if scalar else out

def plancherel_density(datum: RootDatum, xi: ArrayLike) -> ArrayLike:
    """Calibrated Plancherel density kappa |c(i xi)|^-2"""
    if datum.kappa is None:
        raise CalibrationError(datum.label, "Plancherel constant kappa is not calibrated")
    return datum.kappa * inverse_c_squared(datum, xi)

def c_function_bounds(datum: RootDatum, xi: np.ndarray) -> Tuple[float, float]:
    """Range of |c(i xi)|^-2 / (xi^2 (1+xi)^(beta-2)) over the sample xi > 0"""
    xi = np.asarray(xi, dtype=float)
    model = xi ** 2 * (1.0 + xi) ** (datum.beta - 2.0 * datum.indivisible_roots)
    ratio = inverse_c_squared(datum, xi) / model
    return float(np.min(ratio)), float(np.max(ratio))

def g_function(datum: RootDatum, s: ArrayLike) -> ArrayLike:
    """G(s) = s^(2|S0+|+1) (1+s)^(beta-2|S0+|)"""
    n0 = datum.indivisible_roots
    s = np.asarray(s, dtype=float)
    return s ** (2 * n0 + 1) * (1.0 + s) ** (datum.beta - 2.0 * n0)

def g_derivative(datum: RootDatum, s: ArrayLike) -> ArrayLike:
    n0 = datum.indivisible_roots
    s = np.asarray(s, dtype=float)
    head = 2 * n0 + 1
    tail = datum.beta - 2.0 * n0
    return head * s ** (head - 1) * (1.0 + s) ** tail + tail * s ** head * (1.0 + s) ** (tail - 1.0)

def dunkl_weight(datum: RootDatum, x: ArrayLike) -> ArrayLike:
    """
    Flat weight omega_m

    Rank one: |x|^(m_alpha+m_2alpha) elementwise on radii. Product case:
    prod_i |x_i|^m_i over the last axis, which must have length n.
    """
    x = np.asarray(x, dtype=float)
    if datum.is_rank_one:
        values = np.abs(x) ** datum.beta
        return float(values) if values.ndim == 0 else values
    n = datum.rank
    if x.ndim == 0 or x.shape[-1] != n:
        raise DomainError("dunkl_weight", f"expected points of dimension {n}, got shape {x.shape}")
    values = np.prod(np.abs(x) ** np.asarray(datum.multiplicities), axis=-1)
    return float(values) if values.ndim == 0 else values

def flat_plancherel_reference(datum: RootDatum) -> float:
    """Closed-form flat Plancherel constant prod_i 1/(2^(2 nu_i) Gamma(nu_i+1)^2)"""
    value = 1.0
    for nu in datum.bessel_indices:
        value /= 2.0 ** (2.0 * nu) * special.gamma(nu + 1.0) ** 2
    return float(value)

def ball_measure_constant(datum: RootDatum) -> float:
    """omega_m-measure of the unit ball intersected with the positive orthant"""
    m = np.asarray(datum.multiplicities if not datum.is_rank_one else (datum.beta,))
    halves = (m + 1.0) / 2.0
    log_value = np.sum(special.gammaln(halves)) - len(m) * np.log(2.0) - special.gammaln(1.0 + np.sum(halves))
    return float(np.exp(log_value))
