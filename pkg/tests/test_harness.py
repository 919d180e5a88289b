import pytest
import numpy as np

from src.error_handling import ConfigurationError
from src.harness import (FamilyMember, HarnessContext, WeightSpec, check_flat_hl, check_flat_rs,
                         check_hausdorff_young, check_hausdorff_young_shifted, check_hl_ver3_i,
                         check_hl_ver3_ii, check_hl_weighted, check_hl_young, default_family,
                         rs_exponent)
from src.reports import InequalityReport

def sub_check(report, name):
    return next(check for check in report.sub_checks if check.name == name)

def test_default_family(datum):
    """Test widths, centers and the cosh_power member"""
    family = default_family(datum)
    assert len(family) == 6
    assert family[-1] == FamilyMember.of("cosh_power", sigma=3.0)

def test_natural_weight_spec(datum):
    """Test k = beta and the balance condition for m = (1, 0)"""
    weight = WeightSpec.natural(datum)
    assert (weight.k, weight.a, weight.b) == (1.0, 0.0, -4.0)
    assert all(weight.conditions(datum).values())
    weight.validate(datum)

def test_weight_spec_rejects_unbalanced(datum):
    """Test that a violated condition names itself"""
    with pytest.raises(ConfigurationError, match="a\\+b\\+beta\\+n"):
        WeightSpec(1.0, 0.0, -3.0).validate(datum)

def test_rs_exponent():
    """Test 1/r = 1 - (q'-1)/p'"""
    assert rs_exponent(1.5, 2.0) == pytest.approx(1.5)
    assert rs_exponent(2.0, 2.0) == pytest.approx(2.0)
    with pytest.raises(ConfigurationError):
        rs_exponent(1.5, 1.2)

def test_hausdorff_young_ratios(context):
    """Test finite ratios and the Lorentz sub-check"""
    report = check_hausdorff_young(context, 1.5)
    assert isinstance(report, InequalityReport)
    assert len(report.active_rows) == len(context.family)
    assert 0 < report.max_ratio < np.inf
    assert sub_check(report, "homogeneity").passed
    assert "spectrum" in report.plots
    assert report.passed

def test_hausdorff_young_degenerates_to_plancherel(context):
    """Test that p = 2 gives ratio 1 on every member"""
    report = check_hausdorff_young(context, 2.0, bound=1.0 + 1e-3)
    for row in report.active_rows:
        assert row.ratio == pytest.approx(1.0, abs=1e-3)
    assert report.passed

def test_hausdorff_young_exponent_range(context):
    """Test p outside (1, 2]"""
    with pytest.raises(ConfigurationError):
        check_hausdorff_young(context, 2.5)

def test_declared_bound_fails_report(context):
    """Test that a max ratio above the bound fails the report"""
    report = check_hausdorff_young(context, 1.5, bound=1e-6)
    assert not report.passed

def test_shifted_inside_tube(context):
    """Test the shifted check decays at Lambda_max"""
    report = check_hausdorff_young_shifted(context, 1.5, 0.1)
    assert report.parameters["tube_bound"] == pytest.approx(0.5 / 3.0)
    assert sub_check(report, "decay_at_lambda_max").passed
    assert report.passed

def test_shifted_outside_tube(context):
    """Test that eta beyond eps_p rho is refused"""
    with pytest.raises(ConfigurationError, match="eps_p"):
        check_hausdorff_young_shifted(context, 1.5, 0.2)

def test_hl_weighted_with_natural_weight(context):
    """Test rows, the weak type constant and the psi bound"""
    report = check_hl_weighted(context, 1.5)
    assert report.parameters["b"] == -4.0
    assert np.isfinite(sub_check(report, "weak_1_1_constant").value)
    assert sub_check(report, "psi_bounded").passed
    assert "weak_type_profile" in report.plots
    assert report.passed

def test_hl_weighted_rejects_p_two(context):
    """Test the open exponent interval"""
    with pytest.raises(ConfigurationError):
        check_hl_weighted(context, 2.0)

def test_hl_young(context):
    """Test finite ratios for q = 3"""
    report = check_hl_young(context, 3.0)
    assert 0 < report.max_ratio < np.inf
    assert np.isfinite(sub_check(report, "young_constant_psi_h").value)
    with pytest.raises(ConfigurationError):
        check_hl_young(context, 2.0)

def test_hl_ver3_i(context):
    """Test part (i) at a shift inside the tube"""
    report = check_hl_ver3_i(context, 2.0, 1.5, eta=0.1)
    assert report.parameters["r"] == pytest.approx(1.5)
    assert sub_check(report, "g_trick_upper").passed
    assert report.passed

def test_hl_ver3_i_exponent_order(context):
    """Test p <= q"""
    with pytest.raises(ConfigurationError):
        check_hl_ver3_i(context, 1.5, 1.8)

def test_hl_ver3_ii(context):
    """Test part (ii) and the sup norm against L^1"""
    report = check_hl_ver3_ii(context, 2.0, 3.0)
    assert sub_check(report, "sup_vs_l1").passed
    assert report.passed

def test_hl_ver3_ii_needs_zero_shift(context):
    """Test that a nonzero eta is refused for p >= 2"""
    with pytest.raises(ConfigurationError, match="eta=0"):
        check_hl_ver3_ii(context, 2.0, 3.0, eta=0.1)

def test_curved_checks_need_rank_one(product_context):
    """Test the rank-one guard"""
    with pytest.raises(ConfigurationError):
        check_hausdorff_young(product_context, 1.5)

def test_flat_hl(context):
    """Test the flat analogue in rank one"""
    report = check_flat_hl(context, 1.5)
    assert report.parameters["weight_exponent"] == pytest.approx(-1.0)
    assert 0 < report.max_ratio < np.inf

def test_flat_hl_product(product_context):
    """Test the flat analogue on a rank-two product"""
    report = check_flat_hl(product_context, 1.5)
    assert len(report.active_rows) == len(product_context.family)
    assert 0 < report.max_ratio < np.inf

def test_flat_rs_parts(context):
    """Test both parts and the Young sweep of part (ii)"""
    first = check_flat_rs(context, 2.0, 1.5, part="i")
    assert first.inequality_id == "flat_rs_i"
    second = check_flat_rs(context, 2.0, 3.0, part="ii")
    assert second.parameters["k"] == pytest.approx(2.0)
    assert sub_check(second, "young_constant_norm_power").passed
    assert sub_check(second, "young_sweep_k=1.5").passed
    with pytest.raises(ConfigurationError):
        check_flat_rs(context, 2.0, 3.0, part="iii")

def test_explicit_functions_replace_family(context):
    """Test that given functions replace the context family"""
    f = context.curved_functions()[1][1]
    report = check_hausdorff_young(context, 1.5, functions=[f])
    assert [row.function_id for row in report.rows] == [f.label]

def test_refined_context_keeps_constants(context):
    """Test that refinement keeps the calibration"""
    fine = context.refined(2)
    assert fine.datum.kappa == context.datum.kappa
    assert fine.radial.panels == 2 * context.radial.panels

def test_flagged_member_is_excluded(datum, radial_grid, spectral_grid):
    """Test that a non-integrable member becomes a flagged row"""
    ctx = HarnessContext.build(datum, radial_grid, spectral_grid,
                               family=[FamilyMember.of("gaussian_bump", width=1.0),
                                       FamilyMember.of("cosh_power", sigma=0.5)])
    report = check_hausdorff_young(ctx, 1.5)
    assert [row.flagged for row in report.rows] == [False, True]
    assert report.passed
