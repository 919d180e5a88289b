# src/suites.py

import numpy as np
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence
import logging
import time

from .error_handling import ConfigurationError, HarmonicAnalysisError
from .harness import (FamilyMember, HarnessContext, WeightSpec, check_flat_hl, check_flat_rs,
                      check_hausdorff_young, check_hausdorff_young_shifted, check_hl_ver3_i,
                      check_hl_ver3_ii, check_hl_weighted, check_hl_young, flat_arrays, flat_pairs,
                      rs_exponent)
from .lorentz import lorentz_norm, oneil_check, oneil_constant, rearrangement
from .reports import InequalityReport
from .root_datum import (RootDatum, TubeParameter, c_function, c_function_bounds, flat_plancherel_reference)
from .sampling import (MeasureLabel, RadialGrid, SampledRadialFunction, WeightedMeasure,
                       lp_norm, weighted_lp_norm)
from .special_functions import bessel_j, bessel_j_recurrence, bessel_j_series
from .transforms import eps_contraction, flat_psi, ho_inverse_many, phi, spherical_kernel
from .utils import fit_power_law, relative_drift

DEFAULT_SEED = 20240607
PLANCHEREL_TOLERANCE = 1e-3
ROUNDTRIP_TOLERANCE = 1e-3
KERNEL_BOUND_SLACK = 1e-8
REFINEMENT_DRIFT = 0.02
WEAK_TYPE_DRIFT = 0.20
CONTRACTION_TOLERANCE = 0.05
CONTRACTION_SLACK = 1e-9

INEQUALITY_CHECKS = ("hausdorff_young", "hausdorff_young_shifted", "hl_weighted", "hl_young",
                     "hl_ver3_i", "hl_ver3_ii", "flat_hl", "flat_rs")
DIAGNOSTIC_CHECKS = ("plancherel", "kernel_bound", "c_function", "closed_forms", "flat_limit",
                     "lorentz_properties", "oneil")
SUITE_CHECKS = INEQUALITY_CHECKS + DIAGNOSTIC_CHECKS

@dataclass
class SuiteRequest:
    """Data class for one configured suite, independent of the config file format"""
    id: str
    check: str
    p: Optional[float] = None
    q: Optional[float] = None
    eta: float = 0.0
    weight: Optional[WeightSpec] = None
    part: str = "i"
    bound: float = float("inf")
    samples: Optional[int] = None
    exponents: Sequence[float] = (3.0, 4.0, 6.0)
    family: List[FamilyMember] = field(default_factory=list)
    eps_values: Sequence[float] = (0.2, 0.1, 0.05, 0.02)
    xi: float = 1.0
    t_max: float = 5.0

def _require(value: Optional[float], name: str, check: str) -> float:
    if value is None:
        raise ConfigurationError(check, f"suite needs parameter '{name}'")
    return float(value)

def validate_request(datum: RootDatum, request: SuiteRequest) -> None:
    """
    Parameter checks a suite would fail on, without any numerical work

    Raises:
        ConfigurationError naming the offending parameter
    """
    check = request.check
    if check not in SUITE_CHECKS:
        raise ConfigurationError("check", f"unknown check '{check}', expected one of {SUITE_CHECKS}")
    curved = check in ("hausdorff_young", "hausdorff_young_shifted", "hl_weighted", "hl_young",
                       "hl_ver3_i", "hl_ver3_ii", "kernel_bound", "c_function", "flat_limit")
    if curved and not datum.is_rank_one:
        raise ConfigurationError(check, f"needs a rank-one datum, got {datum.label}")

    p, q, eta = request.p, request.q, request.eta
    if check == "hausdorff_young":
        p = _require(p, "p", check)
        if not 1.0 < p <= 2.0:
            raise ConfigurationError("p", f"Hausdorff-Young needs p in (1, 2], got {p:g}")
    elif check == "hausdorff_young_shifted":
        TubeParameter(_require(p, "p", check), eta, datum.rho)
    elif check == "hl_weighted":
        p = _require(p, "p", check)
        if not 1.0 < p < 2.0:
            raise ConfigurationError("p", f"weighted HL needs p in (1, 2), got {p:g}")
        (request.weight or WeightSpec.natural(datum)).validate(datum)
    elif check == "hl_young":
        q = _require(q, "q", check)
        if not q > 2.0:
            raise ConfigurationError("q", f"hl_young needs q > 2, got {q:g}")
    elif check == "hl_ver3_i":
        q, p = _require(q, "q", check), _require(p, "p", check)
        if not 1.0 < p <= q <= 2.0:
            raise ConfigurationError("p", f"hl_ver3_i needs 1 < p <= q <= 2, got p={p:g}, q={q:g}")
        TubeParameter(p, eta, datum.rho)
        rs_exponent(p, q)
    elif check == "hl_ver3_ii":
        q, p = _require(q, "q", check), _require(p, "p", check)
        if not 2.0 <= q <= p:
            raise ConfigurationError("p", f"hl_ver3_ii needs 2 <= q <= p, got q={q:g}, p={p:g}")
        if eta != 0.0:
            raise ConfigurationError("eta", f"hl_ver3_ii runs at eta=0 only: the tube C(eps_p rho) "
                                            f"has empty interior for p={p:g} >= 2")
    elif check == "flat_hl":
        p = _require(p, "p", check)
        if not 1.0 < p <= 2.0:
            raise ConfigurationError("p", f"flat HL needs p in (1, 2], got {p:g}")
    elif check == "flat_rs":
        q, p = _require(q, "q", check), _require(p, "p", check)
        if request.part == "i":
            if not 1.0 < p <= q <= 2.0:
                raise ConfigurationError("p", f"flat RS part (i) needs 1 < p <= q <= 2, got p={p:g}, q={q:g}")
            rs_exponent(p, q)
        elif request.part == "ii":
            if not 2.0 <= q <= p:
                raise ConfigurationError("p", f"flat RS part (ii) needs 2 <= q <= p, got q={q:g}, p={p:g}")
        else:
            raise ConfigurationError("part", f"flat RS part must be 'i' or 'ii', got {request.part!r}")
    elif check == "flat_limit":
        if not request.eps_values or any(not 0.0 < e <= 1.0 for e in request.eps_values):
            raise ConfigurationError("eps_values", "contraction parameters must lie in (0, 1]")

    for member in request.family:
        if member.family == "cosh_power":
            sigma = dict(member.params).get("sigma")
            if sigma is not None and datum.is_rank_one and sigma <= 2.0 * datum.rho:
                raise ConfigurationError("family", f"cosh_power needs sigma > 2*rho = {2.0 * datum.rho:g}, "
                                                   f"got {sigma:g}")

def _diagnostic_report(ctx: HarnessContext, check: str, bound: float = 1.0,
                       **parameters) -> InequalityReport:
    return InequalityReport(inequality_id=check, datum=ctx.datum.describe(), parameters=parameters,
                            bound=bound, grid=ctx.grid_metadata())

def plancherel_suite(ctx: HarnessContext) -> InequalityReport:
    """
    Calibration, Plancherel isometry and inversion roundtrip for the context family

    Rows hold ||F f||_{L^2(nu)} / ||f||_{L^2(mu)}; sub-checks bound the deviation
    from 1, the roundtrip error and the flat isometry.
    """
    datum = ctx.datum
    report = _diagnostic_report(ctx, "plancherel", bound=1.0 + PLANCHEREL_TOLERANCE,
                                tolerance=PLANCHEREL_TOLERANCE)
    deviations = []
    if datum.is_rank_one:
        pairs = ctx.curved_pairs(0.0)
        for fid, f, F, reason in pairs:
            if f is None:
                report.flag_row(fid, reason)
                continue
            row = report.add_row(fid, lp_norm(F.as_sampled(), 2.0), lp_norm(f, 2.0))
            deviations.append(abs(row.ratio - 1.0))
        report.add_sub_check("isometry_deviation", max(deviations, default=0.0), PLANCHEREL_TOLERANCE)

        usable = [(f, F) for _, f, F, _ in pairs if f is not None]
        inverses = ho_inverse_many(datum, [F for _, F in usable], ctx.radial)
        errors = []
        for (f, _), g in zip(usable, inverses):
            norm = lp_norm(f, 2.0)
            if norm > 0:
                errors.append(lp_norm(f.with_values(f.values - g.values), 2.0) / norm)
        report.add_sub_check("roundtrip_error", max(errors, default=0.0), ROUNDTRIP_TOLERANCE)
        report.add_sub_check("kappa_vs_half_line", relative_drift(1.0 / (2.0 * np.pi), datum.kappa),
                             blocking=False, kappa=datum.kappa)

    flat_deviation = []
    for _, f, F0, _ in flat_pairs(ctx):
        f_values, f_masses, _ = flat_arrays(f)
        values, masses, _ = flat_arrays(F0)
        norm = weighted_lp_norm(f_values, f_masses, 2.0)
        if norm > 0:
            flat_deviation.append(abs(weighted_lp_norm(values, masses, 2.0) / norm - 1.0))
    report.add_sub_check("flat_isometry_deviation", max(flat_deviation, default=0.0), PLANCHEREL_TOLERANCE)
    report.add_sub_check("flat_kappa_vs_closed_form",
                         relative_drift(flat_plancherel_reference(datum), datum.flat_kappa),
                         blocking=False, flat_kappa=datum.flat_kappa)
    return report

def kernel_bound_suite(ctx: HarnessContext, samples: int = 50,
                       xi_values: Sequence[float] = (0.0, 1.0, 5.0)) -> InequalityReport:
    """max |phi_{i xi + eta}(x)| on a samples x samples grid of |eta| <= rho and x in [0, x_max]"""
    datum = ctx.datum
    if not datum.is_rank_one:
        raise ConfigurationError("kernel_bound", "kernel bound needs a rank-one datum")
    report = _diagnostic_report(ctx, "kernel_bound", bound=1.0 + KERNEL_BOUND_SLACK, samples=samples,
                                x_max=ctx.radial.x_max)
    etas = np.linspace(-datum.rho, datum.rho, samples)
    x = np.linspace(0.0, ctx.radial.x_max, samples)
    for xi in xi_values:
        table = spherical_kernel(datum, 1j * xi + etas, x, rtol=1e-12)
        report.add_row(f"xi={xi:g}", float(np.max(np.abs(table))), 1.0)
    return report

def c_function_suite(ctx: HarnessContext) -> InequalityReport:
    """c(rho) = 1 and the two-sided estimate of |c(i xi)|^-2 against xi^2 (1+xi)^(beta-2)"""
    datum = ctx.datum
    if not datum.is_rank_one:
        raise ConfigurationError("c_function", "c-function checks need a rank-one datum")
    report = _diagnostic_report(ctx, "c_function", bound=float("inf"))
    at_rho = abs(c_function(datum, datum.rho) - 1.0)
    report.add_sub_check("c_at_rho", at_rho, 1e-12)
    lower, upper = c_function_bounds(datum, np.logspace(-2, 2, 400))
    report.add_row("two_sided_bound", upper, lower)
    report.add_sub_check("lower_bound_positive", lower, passed=lower > 0 and np.isfinite(upper))
    return report

def closed_forms_suite(ctx: HarnessContext) -> InequalityReport:
    """Closed-form cross-checks; rows are error / tolerance so the bound is 1"""
    report = _diagnostic_report(ctx, "closed_forms", bound=1.0)
    t = np.linspace(0.05, 5.0, 100)

    sphere = RootDatum.rank_one(2.0, 0.0)
    worst = 0.0
    for xi in (0.5, 1.0, 5.0):
        exact = np.sin(xi * t) / (xi * np.sinh(t))
        worst = max(worst, float(np.max(np.abs(phi(sphere, 1j * xi, t) - exact))))
        table = spherical_kernel(sphere, np.array([1j * xi]), t, rtol=1e-12)[0]
        worst = max(worst, float(np.max(np.abs(table - exact))))
    report.add_row("curved_kernel_m2", worst, 1e-9)

    flat_error = max(float(np.max(np.abs(flat_psi(sphere, xi, t) - np.sin(xi * t) / (xi * t))))
                     for xi in (0.5, 1.0, 5.0))
    report.add_row("flat_kernel_m2", flat_error, 1e-12)

    x = np.linspace(0.1, 20.0, 200)
    half = float(np.max(np.abs(bessel_j(0.5, x) - np.sqrt(2.0 / (np.pi * x)) * np.sin(x))))
    report.add_row("bessel_half_order", half, 1e-10)

    samples = (0.3, 2.0, 7.5)
    series = max(abs(bessel_j_series(1.5, v) - bessel_j(1.5, v)) for v in samples)
    recurrence = max(abs(bessel_j_recurrence(1.5, v) - bessel_j(1.5, v)) for v in samples)
    report.add_row("bessel_series", series, 1e-10)
    report.add_row("bessel_recurrence", recurrence, 1e-10)
    return report

def contraction_study(datum: RootDatum, eps_values: Sequence[float] = (0.2, 0.1, 0.05, 0.02),
                      xi: float = 1.0, t_max: float = 5.0, samples: int = 101) -> Dict:
    """
    Sup errors of phi_{i xi / eps}(eps t) against psi(xi, t) over t in [0, t_max]

    Returns:
        dict with eps, errors, monotone verdict and the fitted rate (slope, prefactor, R^2)
    """
    if not datum.is_rank_one:
        raise ConfigurationError("limits", "the contraction study needs a rank-one datum")
    t = np.linspace(0.0, t_max, samples)
    limit = flat_psi(datum, xi, t)
    errors = [float(np.max(np.abs(eps_contraction(datum, eps, xi, t) - limit))) for eps in eps_values]
    order = np.argsort(-np.asarray(eps_values))
    ordered = np.asarray(errors)[order]
    monotone = bool(np.all(np.diff(ordered) <= CONTRACTION_SLACK))
    slope, prefactor, r2 = fit_power_law(np.asarray(eps_values)[order], ordered)
    logging.info(f"Contraction errors {dict(zip(eps_values, errors))}, empirical rate {slope:.3f}")
    return {"eps": list(eps_values), "errors": errors, "monotone": monotone,
            "rate": slope, "prefactor": prefactor, "r2": r2, "xi": xi, "t_max": t_max}

def flat_limit_suite(ctx: HarnessContext, eps_values: Sequence[float] = (0.2, 0.1, 0.05, 0.02),
                     xi: float = 1.0, t_max: float = 5.0) -> InequalityReport:
    """Contraction errors per eps; the error must be <= 0.05 once eps <= 0.05 and nonincreasing"""
    study = contraction_study(ctx.datum, eps_values, xi, t_max)
    report = _diagnostic_report(ctx, "flat_limit", bound=float("inf"), xi=xi, t_max=t_max)
    for eps, error in zip(study["eps"], study["errors"]):
        report.add_row(f"eps={eps:g}", error, CONTRACTION_TOLERANCE)
    small = [e for eps, e in zip(study["eps"], study["errors"]) if eps <= CONTRACTION_TOLERANCE]
    report.add_sub_check("error_at_small_eps", max(small, default=0.0), CONTRACTION_TOLERANCE)
    report.add_sub_check("monotone", float(study["monotone"]), passed=study["monotone"])
    report.add_sub_check("empirical_rate", study["rate"], blocking=False, r2=study["r2"])
    report.add_plot("contraction_errors", study["eps"], study["errors"], "eps", "sup_error")
    return report

def random_step_function(rng: np.random.Generator, cells: int,
                         measure: Optional[WeightedMeasure] = None) -> SampledRadialFunction:
    """Step function with one node per cell, random masses and values with ties"""
    if measure is None:
        grid = RadialGrid.from_panels(float(cells), cells, order=1)
        measure = WeightedMeasure(grid, rng.uniform(0.1, 3.0, cells), MeasureLabel.LEBESGUE)
    values = np.round(rng.uniform(0.0, 4.0, measure.grid.size), 1)
    return SampledRadialFunction(measure, values, "step")

def lorentz_properties_suite(ctx: HarnessContext, seed: int = DEFAULT_SEED,
                             samples: int = 100) -> InequalityReport:
    """Lorentz identities on random step functions; rows are worst error / tolerance"""
    rng = np.random.default_rng(seed)
    report = _diagnostic_report(ctx, "lorentz_properties", bound=1.0, seed=seed, samples=samples)
    diagonal, monotone, weak, equi, permuted = 0.0, 0.0, 0.0, 0.0, 0.0
    for _ in range(samples):
        f = random_step_function(rng, int(rng.integers(10, 51)))
        for p in (1.5, 2.0, 3.0):
            norm = lp_norm(f, p)
            if norm > 0:
                diagonal = max(diagonal, abs(lorentz_norm(f, p, p) - norm) / norm)
            strong = lorentz_norm(f, p, 1.0)
            if strong > 0:
                monotone = max(monotone, (lorentz_norm(f, p, 2.0) - strong) / strong)
            weak_norm = lorentz_norm(f, p, float("inf"))
            for q in (1.0, 2.0, 4.0):
                lq = lorentz_norm(f, p, q)
                if lq > 0:
                    weak = max(weak, (weak_norm - lq) / lq)
        profile = rearrangement(f)
        for p in (1.0, 2.0, 3.5):
            direct = lp_norm(f, p) ** p
            if direct > 0:
                equi = max(equi, abs(profile.lp_integral(p) - direct) / direct)
        order = rng.permutation(f.values.size)
        shuffled = SampledRadialFunction(
            WeightedMeasure(f.grid, f.measure.density[order], f.measure.label), f.values[order])
        other = rearrangement(shuffled)
        if other.size != profile.size:
            permuted = float("inf")
        elif profile.size:
            permuted = max(permuted, float(np.max(np.abs(other.breakpoints - profile.breakpoints))),
                           float(np.max(np.abs(other.values - profile.values))))
    report.add_row("diagonal_equals_lp", diagonal, 1e-10)
    report.add_row("second_index_monotone", max(monotone, 0.0), 1e-12)
    report.add_row("weak_dominated", max(weak, 0.0), 1e-12)
    report.add_row("equimeasurable", equi, 1e-10)
    report.add_row("permutation_invariant", permuted, 1e-9)
    return report

def oneil_suite(ctx: HarnessContext, seed: int = DEFAULT_SEED, samples: int = 100,
                exponents: Sequence[float] = (3.0, 4.0, 6.0)) -> InequalityReport:
    """O'Neil estimate on random step pairs; rows are normalised by C_q so the bound is 1"""
    rng = np.random.default_rng(seed)
    report = _diagnostic_report(ctx, "oneil", bound=1.0 + 1e-9, seed=seed, samples=samples,
                                exponents=list(exponents))
    violations = 0
    raw = 0.0
    for q in exponents:
        constant = oneil_constant(q)
        for index in range(samples):
            g = random_step_function(rng, int(rng.integers(10, 51)))
            h = random_step_function(rng, g.grid.size, g.measure)
            single = oneil_check(g, h, q)
            row = single.rows[0]
            report.add_row(f"q={q:g}#{index}", row.lhs, row.rhs * constant)
            raw = max(raw, row.ratio)
            if row.ratio > 1.0 + 1e-9:
                violations += 1
    report.add_sub_check("constant_one_violations", violations, 0.0, blocking=False, max_raw_ratio=raw)
    report.notes.append("pass bound uses C_q = ((q-1) 2^(q-1))^(1/q); the constant-1 form is recorded")
    return report

def _with_family(ctx: HarnessContext, request: SuiteRequest) -> HarnessContext:
    if not request.family:
        return ctx
    return HarnessContext(ctx.datum, ctx.radial, ctx.spectral, list(request.family))

def execute(ctx: HarnessContext, request: SuiteRequest, seed: int = DEFAULT_SEED) -> InequalityReport:
    """Dispatch one suite on a context"""
    ctx = _with_family(ctx, request)
    check = request.check
    bound = request.bound
    if check == "hausdorff_young":
        return check_hausdorff_young(ctx, _require(request.p, "p", check), bound=bound)
    if check == "hausdorff_young_shifted":
        return check_hausdorff_young_shifted(ctx, _require(request.p, "p", check), request.eta, bound=bound)
    if check == "hl_weighted":
        return check_hl_weighted(ctx, _require(request.p, "p", check), request.weight, bound=bound)
    if check == "hl_young":
        return check_hl_young(ctx, _require(request.q, "q", check), bound=bound)
    if check == "hl_ver3_i":
        return check_hl_ver3_i(ctx, _require(request.q, "q", check), _require(request.p, "p", check),
                               request.eta, bound=bound)
    if check == "hl_ver3_ii":
        return check_hl_ver3_ii(ctx, _require(request.q, "q", check), _require(request.p, "p", check),
                                request.eta, bound=bound)
    if check == "flat_hl":
        return check_flat_hl(ctx, _require(request.p, "p", check), bound=bound)
    if check == "flat_rs":
        return check_flat_rs(ctx, _require(request.q, "q", check), _require(request.p, "p", check),
                             request.part, bound=bound)
    if check == "plancherel":
        return plancherel_suite(ctx)
    if check == "kernel_bound":
        return kernel_bound_suite(ctx, request.samples or 50)
    if check == "c_function":
        return c_function_suite(ctx)
    if check == "closed_forms":
        return closed_forms_suite(ctx)
    if check == "flat_limit":
        return flat_limit_suite(ctx, request.eps_values, request.xi, request.t_max)
    if check == "lorentz_properties":
        return lorentz_properties_suite(ctx, seed, request.samples or 100)
    if check == "oneil":
        return oneil_suite(ctx, seed, request.samples or 100, request.exponents)
    raise ConfigurationError("check", f"unknown check '{check}', expected one of {SUITE_CHECKS}")

def _failed_report(ctx: HarnessContext, request: SuiteRequest, message: str) -> InequalityReport:
    report = InequalityReport(inequality_id=request.check, datum=ctx.datum.describe(), parameters={},
                              bound=request.bound, grid=ctx.grid_metadata())
    report.error = message
    return report

def run_suite(ctx: HarnessContext, request: SuiteRequest, refine: Optional[int] = None,
              seed: int = DEFAULT_SEED) -> InequalityReport:
    """
    Run one suite; numerical failures mark the suite failed instead of raising

    Args:
        ctx: harness context
        request: suite parameters
        refine: when > 1, rerun on grids with refine times the panels and record
            the drift of the max ratio (2 %, 20 % for weak-type constants)
        seed: seed for the randomised suites

    Returns:
        InequalityReport with suite_id set and timings filled
    """
    start = time.perf_counter()
    logging.info(f"Running suite {request.id} ({request.check})")
    try:
        report = execute(ctx, request, seed)
    except HarmonicAnalysisError as e:
        logging.error(f"Suite {request.id} failed: {str(e)}")
        report = _failed_report(ctx, request, str(e))
    except Exception as e:
        logging.error(f"Suite {request.id} failed: {str(e)}")
        report = _failed_report(ctx, request, f"Suite {request.id} failed: {str(e)}")
    report.suite_id = request.id

    if refine and refine > 1 and report.error is None and request.check in INEQUALITY_CHECKS:
        try:
            _record_refinement(ctx, request, report, refine, seed)
        except Exception as e:
            logging.error(f"Refinement of suite {request.id} failed: {str(e)}")
            report.error = f"Refinement failed: {str(e)}"

    report.timings["suite_seconds"] = time.perf_counter() - start
    level = logging.info if report.passed else logging.warning
    level(f"Suite {request.id}: max ratio {report.max_ratio:.6g}, passed={report.passed}")
    return report

def _record_refinement(ctx: HarnessContext, request: SuiteRequest, report: InequalityReport,
                       refine: int, seed: int) -> None:
    refined = execute(ctx.refined(refine), request, seed)
    report.add_sub_check("refinement_drift", relative_drift(report.max_ratio, refined.max_ratio),
                         REFINEMENT_DRIFT, factor=refine, refined_max_ratio=refined.max_ratio)
    coarse_weak = {c.name: c.value for c in report.sub_checks if c.name.startswith("weak_")}
    for check in refined.sub_checks:
        if check.name in coarse_weak:
            report.add_sub_check(f"refinement_drift_{check.name}",
                                 relative_drift(coarse_weak[check.name], check.value),
                                 WEAK_TYPE_DRIFT, factor=refine)

def run_suites(ctx: HarnessContext, requests: Sequence[SuiteRequest], refine: Optional[int] = None,
               seed: int = DEFAULT_SEED, only: Optional[str] = None) -> List[InequalityReport]:
    """Run the requested suites in order, optionally filtered by id"""
    selected = [r for r in requests if only is None or r.id == only]
    if only is not None and not selected:
        raise ConfigurationError("suite", f"no suite with id '{only}'")
    return [run_suite(ctx, request, refine, seed) for request in selected]
