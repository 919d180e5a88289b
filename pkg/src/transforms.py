# src/transforms.py

import numpy as np
from dataclasses import dataclass
from typing import Iterator, List, Optional, Sequence, Tuple, Union
import logging

from .error_handling import (CalibrationError, ConfigurationError, DomainError,
                             SpectralTailError)
from .root_datum import (RootDatum, TubeParameter, dunkl_weight, inverse_c_squared,
                         plancherel_density)
from .sampling import (MeasureLabel, RadialGrid, SampledRadialFunction, WeightedMeasure,
                       assert_tail_decay, default_radial_grid, integrate, lp_norm,
                       make_test_function, mu0_measure, mu_measure, nu0_measure, nu_measure)
from .special_functions import gauss_2f1, hypergeometric_radial_table, normalized_bessel_j

KERNEL_RTOL = 1e-10
KERNEL_CHUNK = 256
SUPPORT_CUTOFF = 1e-18
TAIL_WARNING = 1e-6
INVERSION_TAIL_GUARD = 1e-8

REFERENCE_FAMILY = "gaussian_bump"
REFERENCE_PARAMS = {"center": 0.0, "width": 0.75}

@dataclass(frozen=True, eq=False)
class SpectralFunction:
    """Data class for transform values on a spectral grid, possibly at a real shift"""
    measure: WeightedMeasure
    values: np.ndarray
    eta: float = 0.0
    label: str = ""

    def __post_init__(self):
        values = np.array(self.values, dtype=complex)
        if values.shape != self.measure.grid.nodes.shape:
            raise DomainError("SpectralFunction", "values do not match the spectral grid")
        if not np.all(np.isfinite(values)):
            raise DomainError("SpectralFunction", f"non-finite transform values in {self.label}")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def grid(self) -> RadialGrid:
        return self.measure.grid

    def as_sampled(self, measure: Optional[WeightedMeasure] = None) -> SampledRadialFunction:
        """View as a sampled function on the spectral side (for norms and rearrangements)"""
        return SampledRadialFunction(measure or self.measure, self.values, self.label)

    def with_values(self, values: np.ndarray) -> "SpectralFunction":
        return SpectralFunction(self.measure, values, self.eta, self.label)

    def scaled(self, factor: complex) -> "SpectralFunction":
        return self.with_values(factor * self.values)

def _require_rank_one(datum: RootDatum, function: str) -> None:
    if not datum.is_rank_one:
        raise DomainError(function, f"needs a rank-one datum, got {datum.label}")

def _jacobi_parameters(datum: RootDatum, lam):
    rho = datum.rho
    return (rho + lam) / 2.0, (rho - lam) / 2.0, (datum.beta + 1.0) / 2.0

def phi(datum: RootDatum, lam: complex, x) -> Union[complex, np.ndarray]:
    """
    Spherical function phi_lambda(x) = 2F1((rho+lambda)/2, (rho-lambda)/2; (beta+1)/2; -sinh^2 x)

    Args:
        datum: rank-one datum
        lam: complex spectral parameter (broadcasts against x)
        x: nonnegative radii

    Returns:
        phi_lambda(x)
    """
    _require_rank_one(datum, "phi")
    if np.any(np.asarray(x) < 0):
        raise DomainError("phi", "radial argument must be nonnegative")
    a, b, c = _jacobi_parameters(datum, np.asarray(lam, dtype=complex))
    return gauss_2f1(a, b, c, -np.sinh(np.asarray(x, dtype=float)) ** 2)

def spherical_kernel(datum: RootDatum, lambdas: np.ndarray, x: np.ndarray,
                     rtol: float = KERNEL_RTOL) -> np.ndarray:
    """Table phi_{lambda_j}(x_k) of shape (len(lambdas), len(x))"""
    _require_rank_one(datum, "spherical_kernel")
    a, b, c = _jacobi_parameters(datum, np.asarray(lambdas, dtype=complex))
    return hypergeometric_radial_table(a, b, c, x, rtol=rtol)

def _kernel_chunks(datum: RootDatum, lambdas: np.ndarray, x: np.ndarray, rtol: float,
                   chunk: int) -> Iterator[Tuple[slice, np.ndarray]]:
    for start in range(0, lambdas.size, chunk):
        window = slice(start, min(start + chunk, lambdas.size))
        yield window, spherical_kernel(datum, lambdas[window], x, rtol)

def _spectral_measure(datum: RootDatum, spectral: RadialGrid) -> WeightedMeasure:
    if datum.kappa is not None:
        return nu_measure(datum, spectral)
    return WeightedMeasure(spectral, inverse_c_squared(datum, spectral.nodes),
                           MeasureLabel.NU_PLANCHEREL, {"uncalibrated": 1.0})

def _validate_shift(datum: RootDatum, eta: float, p: Optional[float]) -> None:
    if p is not None:
        TubeParameter(p, eta, datum.rho)
    elif abs(eta) > datum.rho:
        raise ConfigurationError("eta", f"|eta|={abs(eta):g} exceeds rho={datum.rho:g}; "
                                        "the kernel is unbounded there")

def ho_transform_many(datum: RootDatum, functions: Sequence[SampledRadialFunction],
                      spectral: RadialGrid, eta: float = 0.0, p: Optional[float] = None,
                      rtol: float = KERNEL_RTOL, chunk: int = KERNEL_CHUNK) -> List[SpectralFunction]:
    """
    Forward transform of a batch of functions sharing one radial grid

    The kernel table is built once per chunk of spectral nodes and contracted
    against every function; radii where all integrands are negligible are skipped.

    Args:
        datum: rank-one datum
        functions: functions on dmu = J dx over a common grid
        spectral: grid of xi values
        eta: real shift, values are F f(i xi + eta)
        p: exponent whose tube C(eps_p rho) the shift must lie in, if given
        rtol: kernel integration tolerance
        chunk: spectral nodes per kernel table

    Returns:
        one SpectralFunction per input
    """
    _require_rank_one(datum, "ho_transform")
    _validate_shift(datum, eta, p)
    out_measure = _spectral_measure(datum, spectral)
    if not functions:
        return []

    grid = functions[0].grid
    for f in functions:
        if f.grid.key != grid.key:
            raise ConfigurationError("ho_transform", "batched functions must share a radial grid")
        if f.measure.label is not MeasureLabel.MU_J:
            raise ConfigurationError("ho_transform",
                                     f"{f.label} lives on {f.measure.label.value}, expected mu_J")
        assert_tail_decay(f.values, grid.nodes, datum.rho + abs(eta),
                          "|f(x)| e^((rho+|eta|) x) decays")

    weighted = np.array([f.values * f.measure.cell_masses for f in functions])
    magnitude = np.max(np.abs(weighted), axis=0)
    active = magnitude > SUPPORT_CUTOFF * np.max(magnitude) if np.max(magnitude) > 0 else magnitude > 0
    values = np.zeros((len(functions), spectral.size), dtype=complex)

    if np.any(active):
        lambdas = 1j * spectral.nodes + eta
        nodes = grid.nodes[active]
        block = weighted[:, active]
        for window, kernel in _kernel_chunks(datum, lambdas, nodes, rtol, chunk):
            values[:, window] = block @ kernel.T

    results = []
    envelope = np.exp((abs(eta) - datum.rho) * grid.nodes) * (1.0 + grid.nodes)
    for f, row in zip(functions, values):
        tail = integrate(f.with_values(np.abs(f.values) * envelope)).tail_error
        scale = float(np.max(np.abs(row))) if row.size else 0.0
        if scale > 0 and tail > TAIL_WARNING * scale:
            logging.warning(f"Quadrature tail estimate {tail:.2e} exceeds {TAIL_WARNING:g} "
                            f"of the transform of {f.label}")
        results.append(SpectralFunction(out_measure, row, float(eta), f.label))
    return results

def ho_transform(datum: RootDatum, f: SampledRadialFunction, spectral: RadialGrid,
                 eta: float = 0.0, p: Optional[float] = None) -> SpectralFunction:
    """Forward transform F f(i xi + eta) = integral f(x) phi_{i xi + eta}(x) J(x) dx"""
    return ho_transform_many(datum, [f], spectral, eta, p)[0]

def ho_inverse_many(datum: RootDatum, spectra: Sequence[SpectralFunction], radial: RadialGrid,
                    rtol: float = KERNEL_RTOL, chunk: int = KERNEL_CHUNK) -> List[SampledRadialFunction]:
    """
    Inverse transform f(x) = integral g(xi) phi_{-i xi}(x) dnu(xi) on a radial grid

    Raises:
        SpectralTailError when |g| on the last tenth of the spectral grid exceeds
        1e-8 of its maximum
    """
    _require_rank_one(datum, "ho_inverse")
    target = mu_measure(datum, radial)
    if not spectra:
        return []
    spectral = spectra[0].grid
    density = plancherel_density(datum, spectral.nodes)
    last_decade = spectral.nodes >= 0.9 * spectral.x_max
    for g in spectra:
        if g.eta != 0.0:
            raise ConfigurationError("ho_inverse", f"inversion needs eta=0, got {g.eta:g}")
        if g.grid.key != spectral.key:
            raise ConfigurationError("ho_inverse", "batched spectra must share a spectral grid")
        peak = float(np.max(np.abs(g.values)))
        if peak > 0 and np.max(np.abs(g.values[last_decade])) > INVERSION_TAIL_GUARD * peak:
            logging.warning(f"Spectrum of {g.label} has not decayed by xi={spectral.x_max:g}")
            raise SpectralTailError(g.label or "spectrum",
                                    f"|g| on the last decade exceeds {INVERSION_TAIL_GUARD:g} of its max; "
                                    "increase lambda_max")

    weighted = np.array([g.values * density * spectral.weights for g in spectra])
    values = np.zeros((len(spectra), radial.size), dtype=complex)
    if np.any(weighted != 0):
        # phi is even in lambda, so phi_{-i xi} = phi_{i xi}
        lambdas = 1j * spectral.nodes
        for window, kernel in _kernel_chunks(datum, lambdas, radial.nodes, rtol, chunk):
            values += weighted[:, window] @ kernel
    return [SampledRadialFunction(target, row, g.label) for g, row in zip(spectra, values)]

def ho_inverse(datum: RootDatum, g: SpectralFunction,
               radial: Optional[RadialGrid] = None) -> SampledRadialFunction:
    """Inverse transform of one spectrum (default radial grid when none is given)"""
    radial = radial or default_radial_grid().with_endpoint_exponent(datum.endpoint_exponent)
    return ho_inverse_many(datum, [g], radial)[0]

def flat_psi(datum: RootDatum, xi, x):
    """
    Flat kernel psi(xi, x)

    Rank one: the normalized Bessel function j_nu(xi x) with nu = (beta-1)/2.
    Product case: prod_i j_{nu_i}(xi_i x_i) over the last axis.
    """
    xi = np.asarray(xi, dtype=float)
    x = np.asarray(x, dtype=float)
    if datum.is_rank_one:
        return normalized_bessel_j(datum.bessel_index, np.abs(xi * x))
    n = datum.rank
    if xi.shape[-1:] != (n,) or x.shape[-1:] != (n,):
        raise DomainError("flat_psi", f"expected points of dimension {n}")
    out = np.ones(np.broadcast(xi[..., 0], x[..., 0]).shape)
    for i, nu in enumerate(datum.bessel_indices):
        out = out * normalized_bessel_j(nu, np.abs(xi[..., i] * x[..., i]))
    return out

def axis_datum(datum: RootDatum, axis: int) -> RootDatum:
    """Rank-one flat factor of a product datum (weight |x|^m_i, index (m_i-1)/2)"""
    m = datum.multiplicities[axis] if not datum.is_rank_one else datum.beta
    return RootDatum.rank_one(m, 0.0)

@dataclass(frozen=True, eq=False)
class TensorProductFunction:
    """Data class for f(x) = prod_i f_i(x_i) on a product of radial grids"""
    factors: Tuple[SampledRadialFunction, ...]
    label: str = ""

    def scaled(self, factor: complex) -> "TensorProductFunction":
        return TensorProductFunction((self.factors[0].scaled(factor),) + self.factors[1:], self.label)

    def values(self) -> np.ndarray:
        out = np.ones(1, dtype=complex)
        for factor in self.factors:
            out = np.multiply.outer(out, factor.values).ravel()
        return out

    def masses(self) -> np.ndarray:
        return tensor_masses([factor.measure for factor in self.factors])

    def points(self) -> np.ndarray:
        return tensor_points([factor.grid for factor in self.factors])

@dataclass(frozen=True, eq=False)
class TensorSpectralFunction:
    """Data class for the factor-wise flat transform of a tensor product

    Factors carry the raw weights |xi_i|^m_i; the calibrated constant kappa_0
    multiplies the product measure once.
    """
    factors: Tuple[SpectralFunction, ...]
    label: str = ""
    constant: float = 1.0

    def scaled(self, factor: complex) -> "TensorSpectralFunction":
        head = self.factors[0].scaled(factor)
        return TensorSpectralFunction((head,) + self.factors[1:], self.label, self.constant)

    def values(self) -> np.ndarray:
        out = np.ones(1, dtype=complex)
        for factor in self.factors:
            out = np.multiply.outer(out, factor.values).ravel()
        return out

    def masses(self) -> np.ndarray:
        return self.constant * tensor_masses([factor.measure for factor in self.factors])

    def points(self) -> np.ndarray:
        return tensor_points([factor.grid for factor in self.factors])

def tensor_masses(measures: Sequence[WeightedMeasure]) -> np.ndarray:
    out = np.ones(1)
    for measure in measures:
        out = np.multiply.outer(out, measure.cell_masses).ravel()
    return out

def tensor_points(grids: Sequence[RadialGrid]) -> np.ndarray:
    mesh = np.meshgrid(*[grid.nodes for grid in grids], indexing="ij")
    return np.stack([axis.ravel() for axis in mesh], axis=-1)

def _flat_transform_rank_one(datum: RootDatum, f: SampledRadialFunction, spectral: RadialGrid,
                             chunk: int) -> SpectralFunction:
    if f.measure.label is not MeasureLabel.MU0_FLAT:
        raise ConfigurationError("flat_transform",
                                 f"{f.label} lives on {f.measure.label.value}, expected mu0_flat")
    if datum.flat_kappa is not None:
        out_measure = nu0_measure(datum, spectral)
    else:
        out_measure = WeightedMeasure(spectral, dunkl_weight(datum, spectral.nodes),
                                      MeasureLabel.MU0_FLAT, {"spectral": 1.0, "uncalibrated": 1.0})
    weighted = f.values * f.measure.cell_masses
    active = weighted != 0
    values = np.zeros(spectral.size, dtype=complex)
    if np.any(active):
        x = f.grid.nodes[active]
        for start in range(0, spectral.size, chunk):
            window = slice(start, min(start + chunk, spectral.size))
            kernel = normalized_bessel_j(datum.bessel_index, np.outer(spectral.nodes[window], x))
            values[window] = kernel @ weighted[active]
    return SpectralFunction(out_measure, values, 0.0, f.label)

def flat_transform(datum: RootDatum, f: Union[SampledRadialFunction, TensorProductFunction],
                   spectral: RadialGrid, chunk: int = 512):
    """
    Flat transform F0 f(xi) = integral f(x) psi(xi, x) omega_m(x) dx

    Rank one takes a SampledRadialFunction on mu0; the product case takes a
    TensorProductFunction and transforms factor by factor.
    """
    if datum.is_rank_one:
        if isinstance(f, TensorProductFunction):
            if len(f.factors) != 1:
                raise ConfigurationError("flat_transform", "rank one takes a single factor")
            f = f.factors[0]
        return _flat_transform_rank_one(datum, f, spectral, chunk)

    if not isinstance(f, TensorProductFunction):
        raise ConfigurationError("flat_transform",
                                 f"rank {datum.rank} flat transforms need a tensor-product input")
    if len(f.factors) != datum.rank:
        raise ConfigurationError("flat_transform",
                                 f"expected {datum.rank} factors, got {len(f.factors)}")
    factors = tuple(_flat_transform_rank_one(axis_datum(datum, axis), factor, spectral, chunk)
                    for axis, factor in enumerate(f.factors))
    constant = datum.flat_kappa if datum.flat_kappa is not None else 1.0
    return TensorSpectralFunction(factors, f.label, constant)

def eps_contraction(datum: RootDatum, eps: float, xi: float, x) -> Union[complex, np.ndarray]:
    """Contracted kernel phi_{i xi / eps}(eps x)"""
    _require_rank_one(datum, "eps_contraction")
    if not 0.0 < eps <= 1.0:
        raise ConfigurationError("eps", f"contraction parameter must lie in (0, 1], got {eps:g}")
    return phi(datum, 1j * xi / eps, eps * np.asarray(x, dtype=float))

def reference_function(measure: WeightedMeasure) -> SampledRadialFunction:
    """Calibration bump, kept out of every test family"""
    return make_test_function(REFERENCE_FAMILY, measure, **REFERENCE_PARAMS)

def calibrate_kappa(datum: RootDatum, radial: RadialGrid, spectral: RadialGrid) -> float:
    """kappa = ||f0||^2_mu / integral |F f0|^2 |c|^-2 dxi for the reference bump"""
    bare = RootDatum(datum.kind, datum.multiplicities)
    f0 = reference_function(mu_measure(bare, radial))
    transform = ho_transform(bare, f0, spectral)
    denominator = float(np.sum(np.abs(transform.values) ** 2 * transform.measure.cell_masses))
    if denominator <= 0:
        raise CalibrationError(datum.label, "reference transform vanished")
    return lp_norm(f0, 2.0) ** 2 / denominator

def calibrate_flat_kappa(datum: RootDatum, radial: RadialGrid, spectral: RadialGrid) -> float:
    """Flat analogue of calibrate_kappa; factor-wise in the product case"""
    value = 1.0
    for axis in range(datum.rank):
        sub = axis_datum(datum, axis)
        f0 = reference_function(mu0_measure(sub, radial))
        transform = _flat_transform_rank_one(sub, f0, spectral, 512)
        denominator = float(np.sum(np.abs(transform.values) ** 2 * transform.measure.cell_masses))
        if denominator <= 0:
            raise CalibrationError(datum.label, "flat reference transform vanished")
        value *= lp_norm(f0, 2.0) ** 2 / denominator
    return value

def calibrate(datum: RootDatum, radial: RadialGrid, spectral: RadialGrid) -> RootDatum:
    """
    Datum carrying both calibrated Plancherel constants

    The curved constant is only defined in rank one; the flat one always.
    """
    kappa = calibrate_kappa(datum, radial, spectral) if datum.is_rank_one else None
    flat_kappa = calibrate_flat_kappa(datum, radial, spectral)
    logging.info(f"Calibrated {datum.label}: kappa={kappa}, flat_kappa={flat_kappa:.12g}")
    return datum.with_calibration(kappa=kappa, flat_kappa=flat_kappa)
