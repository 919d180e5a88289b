import pytest
import numpy as np

from src.error_handling import ConfigurationError
from src.harness import FamilyMember, WeightSpec
from src.root_datum import RootDatum
from src.suites import (SuiteRequest, c_function_suite, closed_forms_suite, contraction_study,
                        flat_limit_suite, kernel_bound_suite, lorentz_properties_suite,
                        oneil_suite, plancherel_suite, run_suite, run_suites, validate_request)

def sub_check(report, name):
    return next(check for check in report.sub_checks if check.name == name)

def test_validate_accepts_default_shapes(datum):
    """Test requests that would run"""
    for request in (SuiteRequest("a", "hausdorff_young", p=1.5),
                    SuiteRequest("b", "hausdorff_young_shifted", p=1.5, eta=0.1),
                    SuiteRequest("c", "hl_weighted", p=1.5, weight=WeightSpec(1.0, 0.0, -4.0)),
                    SuiteRequest("d", "hl_ver3_ii", q=2.0, p=3.0),
                    SuiteRequest("e", "flat_rs", q=2.0, p=3.0, part="ii"),
                    SuiteRequest("f", "oneil")):
        validate_request(datum, request)

@pytest.mark.parametrize("request_, context", [
    (SuiteRequest("x", "fourier"), "check"),
    (SuiteRequest("x", "hausdorff_young"), "hausdorff_young"),
    (SuiteRequest("x", "hausdorff_young", p=2.5), "p"),
    (SuiteRequest("x", "hausdorff_young_shifted", p=1.5, eta=0.2), "eta"),
    (SuiteRequest("x", "hl_weighted", p=1.5, weight=WeightSpec(1.0, 0.0, -3.0)), "weight"),
    (SuiteRequest("x", "hl_ver3_i", q=1.5, p=1.8), "p"),
    (SuiteRequest("x", "hl_ver3_ii", q=2.0, p=3.0, eta=0.1), "eta"),
    (SuiteRequest("x", "flat_rs", q=2.0, p=1.5, part="iii"), "part"),
    (SuiteRequest("x", "flat_limit", eps_values=(0.1, 0.0)), "eps_values"),
    (SuiteRequest("x", "hausdorff_young", p=1.5, family=[FamilyMember.of("cosh_power", sigma=1.0)]), "family"),
])
def test_validate_rejects(datum, request_, context):
    """Test the parameter named by each rejection"""
    with pytest.raises(ConfigurationError) as info:
        validate_request(datum, request_)
    assert info.value.context == context

def test_validate_rank_one_checks_on_product():
    """Test that curved checks need a rank-one datum"""
    with pytest.raises(ConfigurationError):
        validate_request(RootDatum.flat_product(1.0, 1.0), SuiteRequest("x", "kernel_bound"))
    validate_request(RootDatum.flat_product(1.0, 1.0), SuiteRequest("x", "flat_hl", p=1.5))

def test_plancherel_suite(context):
    """Test isometry rows and the roundtrip sub-check"""
    report = plancherel_suite(context)
    assert sub_check(report, "roundtrip_error").passed
    assert sub_check(report, "isometry_deviation").passed
    assert report.passed

def test_kernel_bound_suite(context):
    """Test the kernel bound on the closed tube"""
    report = kernel_bound_suite(context, samples=12)
    assert len(report.rows) == 3
    assert report.parameters["x_max"] == context.radial.x_max
    assert report.passed

def test_plancherel_suite_on_each_datum(datum_context):
    """Test the plancherel suite for m = (1, 0), (2, 1) and (0.5, 0.3)"""
    report = plancherel_suite(datum_context)
    assert sub_check(report, "isometry_deviation").passed
    assert sub_check(report, "roundtrip_error").passed
    assert report.error is None
    assert report.passed

def test_c_function_suite(context):
    """Test c(rho) = 1 and a finite two-sided bound"""
    report = c_function_suite(context)
    assert sub_check(report, "c_at_rho").passed
    assert report.passed

def test_closed_forms_suite(context):
    """Test every closed form within its tolerance"""
    report = closed_forms_suite(context)
    assert report.max_ratio <= 1.0
    assert report.passed

def test_contraction_study_monotone(datum):
    """Test nonincreasing errors and a positive rate"""
    study = contraction_study(datum)
    assert study["monotone"]
    assert study["errors"][-1] < study["errors"][0]
    assert study["rate"] > 0
    with pytest.raises(ConfigurationError):
        contraction_study(RootDatum.flat_product(1.0, 1.0))

def test_flat_limit_suite(context):
    """Test the small-eps error sub-check and the plot series"""
    report = flat_limit_suite(context)
    assert sub_check(report, "error_at_small_eps").passed
    assert report.plots["contraction_errors"]["x"] == [0.2, 0.1, 0.05, 0.02]
    assert report.passed

def test_lorentz_properties_suite(context):
    """Test the Lorentz identities on the seeded sample"""
    report = lorentz_properties_suite(context, seed=3, samples=20)
    assert report.passed

def test_oneil_suite(context):
    """Test the normalised O'Neil rows and the recorded constant-one count"""
    report = oneil_suite(context, seed=3, samples=10)
    assert len(report.rows) == 30
    assert not sub_check(report, "constant_one_violations").blocking
    assert report.passed

def test_seeded_suites_are_deterministic(context):
    """Test that one seed gives one report"""
    first = oneil_suite(context, seed=5, samples=5).to_dict()
    second = oneil_suite(context, seed=5, samples=5).to_dict()
    assert first == second

def test_run_suite_records_errors(context):
    """Test that a failing suite is reported, not raised"""
    report = run_suite(context, SuiteRequest("bad", "hausdorff_young", p=3.0))
    assert report.suite_id == "bad"
    assert report.error is not None
    assert not report.passed
    assert "suite_seconds" in report.timings

def test_run_suite_captures_unexpected_errors(context, monkeypatch):
    """Test that an arbitrary exception marks the suite failed"""
    def explode(*args, **kwargs):
        raise RuntimeError("boom")
    monkeypatch.setattr("src.suites.check_hausdorff_young", explode)
    report = run_suite(context, SuiteRequest("hy", "hausdorff_young", p=1.5))
    assert "boom" in report.error

def test_run_suite_refinement_drift(context):
    """Test the refinement sub-check on a stable suite"""
    report = run_suite(context, SuiteRequest("hy2", "hausdorff_young", p=2.0), refine=2)
    drift = sub_check(report, "refinement_drift")
    assert drift.value < 0.02
    assert drift.detail["factor"] == 2

def test_run_suites_filter(context):
    """Test --suite filtering and the unknown id"""
    requests = [SuiteRequest("closed", "closed_forms"), SuiteRequest("c", "c_function")]
    reports = run_suites(context, requests, only="c")
    assert [r.suite_id for r in reports] == ["c"]
    with pytest.raises(ConfigurationError):
        run_suites(context, requests, only="missing")

def test_request_family_replaces_context_family(context):
    """Test a per-suite family"""
    request = SuiteRequest("one", "hausdorff_young", p=1.5,
                           family=[FamilyMember.of("gaussian_bump", width=1.0)])
    report = run_suite(context, request)
    assert len(report.rows) == 1
    assert np.isfinite(report.max_ratio)
