import pytest
import numpy as np

from src.error_handling import ConfigurationError, DomainError, SpectralTailError
from src.root_datum import RootDatum
from src.sampling import (RadialGrid, SampledRadialFunction, integrate, lebesgue, lp_norm,
                          make_test_function, mu0_measure, mu_measure, weighted_lp_norm)
from src.transforms import (SpectralFunction, TensorProductFunction, eps_contraction, flat_psi,
                            flat_transform, ho_inverse, ho_inverse_many, ho_transform,
                            ho_transform_many, phi, spherical_kernel)

def test_phi_at_origin_and_at_rho(datum):
    """Test phi_lambda(0) = 1 and phi_rho = 1"""
    assert phi(datum, 3.0j, 0.0) == pytest.approx(1.0)
    x = np.linspace(0.0, 5.0, 11)
    np.testing.assert_allclose(phi(datum, datum.rho, x), np.ones_like(x), atol=1e-12)

def test_phi_is_even_in_lambda(datum):
    """Test phi_lambda = phi_-lambda"""
    x = np.linspace(0.0, 4.0, 9)
    np.testing.assert_allclose(phi(datum, 2.0j + 0.2, x), phi(datum, -2.0j - 0.2, x), rtol=1e-10)

def test_three_dimensional_kernel():
    """Test phi_{i xi}(t) = sin(xi t) / (xi sinh t) for m = (2, 0)"""
    sphere = RootDatum.rank_one(2.0, 0.0)
    t = np.linspace(0.05, 6.0, 60)
    for xi in (0.5, 1.0, 5.0):
        np.testing.assert_allclose(phi(sphere, 1j * xi, t), np.sin(xi * t) / (xi * np.sinh(t)), atol=1e-9)
    table = spherical_kernel(sphere, 1j * np.array([0.5, 5.0]), t, rtol=1e-12)
    np.testing.assert_allclose(table[1], np.sin(5.0 * t) / (5.0 * np.sinh(t)), atol=1e-9)

def test_kernel_bounded_on_closed_tube(datum):
    """Test |phi_{i xi + eta}(x)| <= 1 for |eta| <= rho"""
    etas = np.linspace(-datum.rho, datum.rho, 11)
    x = np.linspace(0.0, 10.0, 40)
    for xi in (0.0, 1.0, 5.0):
        table = spherical_kernel(datum, 1j * xi + etas, x, rtol=1e-12)
        assert np.max(np.abs(table)) <= 1.0 + 1e-8

def test_kappa_matches_half_line_constant(calibrated):
    """Test the calibrated constant against 1/(2 pi)"""
    assert calibrated.kappa == pytest.approx(1.0 / (2.0 * np.pi), rel=1e-3)
    assert calibrated.flat_kappa == pytest.approx(1.0, rel=1e-3)

def test_plancherel_isometry(context):
    """Test ||F f||_{L^2(nu)} = ||f||_{L^2(mu)} on the default family"""
    for _, f, F, _ in context.curved_pairs(0.0):
        assert lp_norm(F.as_sampled(), 2.0) / lp_norm(f, 2.0) == pytest.approx(1.0, abs=1e-3)

def test_inversion_roundtrip(context):
    """Test relative L^2(mu) roundtrip error below 1e-3"""
    pairs = [(f, F) for _, f, F, _ in context.curved_pairs(0.0) if f is not None]
    inverses = ho_inverse_many(context.datum, [F for _, F in pairs], context.radial)
    for (f, _), g in zip(pairs, inverses):
        error = lp_norm(f.with_values(f.values - g.values), 2.0) / lp_norm(f, 2.0)
        assert error < 1e-3

def test_plancherel_isometry_each_datum(datum_context):
    """Test the isometry for m = (1, 0), (2, 1) and (0.5, 0.3)"""
    for _, f, F, _ in datum_context.curved_pairs(0.0):
        if f is not None:
            assert lp_norm(F.as_sampled(), 2.0) / lp_norm(f, 2.0) == pytest.approx(1.0, abs=1e-3)

def test_inversion_roundtrip_each_datum(datum_context):
    """Test roundtrip error below 1e-3 and a spectral tail under the inversion guard"""
    ctx = datum_context
    assert ctx.radial.endpoint_exponent == ctx.datum.endpoint_exponent
    pairs = [(f, F) for _, f, F, _ in ctx.curved_pairs(0.0) if f is not None]
    last_decade = ctx.spectral.nodes >= 0.9 * ctx.spectral.x_max
    for _, F in pairs:
        assert np.max(np.abs(F.values[last_decade])) <= 1e-8 * np.max(np.abs(F.values))
    inverses = ho_inverse_many(ctx.datum, [F for _, F in pairs], ctx.radial)
    for (f, _), g in zip(pairs, inverses):
        error = lp_norm(f.with_values(f.values - g.values), 2.0) / lp_norm(f, 2.0)
        assert error < 1e-3

def test_narrow_plateau_acts_as_point_mass(calibrated):
    """Test F f(i xi) = M phi_{i xi}(2) for a narrow plateau bump of mu-mass M at x0 = 2"""
    radial = RadialGrid.from_panels(4.0, 4, order=64)
    f = make_test_function("plateau_bump", mu_measure(calibrated, radial), rho=calibrated.rho,
                           center=2.0, plateau=0.002, transition=0.004)
    mass = integrate(f).value.real
    xi = np.array([0.5, 1.0, 4.0])
    spectral = RadialGrid(xi, np.ones(3), 4.0, 1, 3)
    F = ho_transform(calibrated, f, spectral)
    expected = mass * np.array([phi(calibrated, 1j * v, 2.0) for v in xi])
    np.testing.assert_allclose(F.values, expected, rtol=1e-3)

def test_single_transform_matches_batch(context):
    """Test ho_transform against the batched form"""
    f = context.curved_functions()[0][1]
    single = ho_transform(context.datum, f, context.spectral)
    np.testing.assert_allclose(single.values, context.transforms(0.0)[0].values, rtol=1e-12, atol=1e-15)

def test_transform_rejects_wrong_measure(context):
    """Test that inputs must live on dmu"""
    f = SampledRadialFunction(lebesgue(context.radial), np.exp(-context.radial.nodes ** 2))
    with pytest.raises(ConfigurationError):
        ho_transform(context.datum, f, context.spectral)

def test_shift_outside_tube_rejected(context):
    """Test the tube guard on the shift"""
    f = context.curved_functions()[0][1]
    with pytest.raises(ConfigurationError, match="eps_p"):
        ho_transform(context.datum, f, context.spectral, eta=0.2, p=1.5)
    with pytest.raises(ConfigurationError):
        ho_transform(context.datum, f, context.spectral, eta=2.0)

def test_shifted_transform_decays(context):
    """Test that F f(i xi + eta) is small at Lambda_max inside the tube"""
    f = context.curved_functions()[0][1]
    F = ho_transform(context.datum, f, context.spectral, eta=0.1, p=1.5)
    assert F.eta == 0.1
    assert abs(F.values[-1]) < 1e-3 * np.max(np.abs(F.values))

def test_inverse_tail_guard(context):
    """Test that a slowly decaying spectrum is refused"""
    F = context.transforms(0.0)[0]
    flat = SpectralFunction(F.measure, np.ones(F.values.size), 0.0, "flat")
    with pytest.raises(SpectralTailError):
        ho_inverse(context.datum, flat, context.radial)

def test_inverse_needs_zero_shift(context):
    """Test that shifted spectra cannot be inverted"""
    F = context.transforms(0.0)[0]
    shifted = SpectralFunction(F.measure, F.values, 0.1, "shifted")
    with pytest.raises(ConfigurationError):
        ho_inverse(context.datum, shifted, context.radial)

def test_empty_batch(context):
    """Test that an empty batch returns nothing"""
    assert ho_transform_many(context.datum, [], context.spectral) == []

def test_flat_kernel_closed_form():
    """Test psi(xi, x) = sin(xi x)/(xi x) for beta = 2"""
    datum = RootDatum.rank_one(2.0, 0.0)
    x = np.linspace(0.05, 5.0, 50)
    np.testing.assert_allclose(flat_psi(datum, 1.5, x), np.sin(1.5 * x) / (1.5 * x), atol=1e-12)

def test_flat_plancherel_rank_one(context):
    """Test the flat isometry on the family"""
    for f in context.flat_functions():
        F0 = flat_transform(context.datum, f, context.spectral)
        assert lp_norm(F0.as_sampled(), 2.0) / lp_norm(f, 2.0) == pytest.approx(1.0, abs=1e-3)

def test_flat_transform_product_case(product_context):
    """Test factor-wise transforms and the tensor isometry"""
    datum = product_context.datum
    f = product_context.flat_functions()[0]
    assert isinstance(f, TensorProductFunction)
    F0 = flat_transform(datum, f, product_context.spectral)
    assert len(F0.factors) == datum.rank
    assert F0.constant == pytest.approx(datum.flat_kappa)
    ratio = weighted_lp_norm(F0.values(), F0.masses(), 2.0) / weighted_lp_norm(f.values(), f.masses(), 2.0)
    assert ratio == pytest.approx(1.0, abs=1e-2)

def test_flat_transform_product_needs_tensor(product_context):
    """Test that a radial input is refused in rank two"""
    radial = product_context.radial
    f = make_test_function("gaussian_bump", mu0_measure(RootDatum.rank_one(1.0), radial))
    with pytest.raises(ConfigurationError):
        flat_transform(product_context.datum, f, product_context.spectral)

def test_flat_psi_dimension_check():
    """Test point dimension in the product case"""
    datum = RootDatum.flat_product(1.0, 2.0)
    with pytest.raises(DomainError):
        flat_psi(datum, np.ones(3), np.ones(3))

def test_eps_contraction_converges(datum):
    """Test the contracted kernel against psi at eps = 0.05"""
    t = np.linspace(0.0, 5.0, 101)
    error = np.max(np.abs(eps_contraction(datum, 0.05, 1.0, t) - flat_psi(datum, 1.0, t)))
    assert error <= 0.05
    with pytest.raises(ConfigurationError):
        eps_contraction(datum, 0.0, 1.0, t)

def test_curved_kernel_needs_rank_one():
    """Test curved transforms refuse product data"""
    datum = RootDatum.flat_product(1.0, 1.0)
    grid = RadialGrid.build(4.0, 8)
    with pytest.raises(DomainError):
        phi(datum, 1j, grid.nodes)
