# src/harness.py

import numpy as np
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple
import logging
import time

from .error_handling import ConfigurationError, IntegrabilityError
from .lorentz import (lorentz_norm, power_sublevel_constant, weak_type_constant,
                      weak_type_profile, young_sublevel_constant)
from .reports import InequalityReport, ReportRow, SubCheck
from .root_datum import (RootDatum, TubeParameter, ball_measure_constant, density_J,
                         dunkl_weight, g_derivative, inverse_c_squared)
from .sampling import (MeasureLabel, RadialGrid, SampledRadialFunction, WeightedMeasure,
                       default_radial_grid, default_spectral_grid, lp_norm, make_test_function,
                       mu0_measure, mu_measure, nu_bar_measure, weighted_lp_norm)
from .transforms import (SpectralFunction, TensorProductFunction, axis_datum, calibrate,
                         flat_transform, ho_transform_many)

__all__ = [
    "FamilyMember", "HarnessContext", "InequalityReport", "ReportRow", "SubCheck", "WeightSpec",
    "default_family", "check_hausdorff_young", "check_hausdorff_young_shifted",
    "check_hl_weighted", "check_hl_young", "check_hl_ver3_i", "check_hl_ver3_ii",
    "check_flat_hl", "check_flat_rs",
]

HOMOGENEITY_SCALE = 3.0
HOMOGENEITY_TOLERANCE = 1e-12
DECAY_TOLERANCE = 1e-3
YOUNG_LEVELS = np.logspace(-3, 3, 61)
G_TRICK_RANGE = (0.1, 50.0)
SUP_SLACK = 1e-6
MAX_TENSOR_POINTS = 4_000_000

@dataclass(frozen=True)
class FamilyMember:
    """Data class for one parametrised test function"""
    family: str
    params: Tuple[Tuple[str, float], ...] = ()

    @classmethod
    def of(cls, family: str, **params) -> "FamilyMember":
        return cls(family, tuple(sorted((k, float(v)) for k, v in params.items())))

    def build(self, measure, rho: float = 0.0, q: float = 1.0) -> SampledRadialFunction:
        return make_test_function(self.family, measure, rho=rho, q=q, **dict(self.params))

def default_family(datum: RootDatum) -> List[FamilyMember]:
    """Widths {0.5, 1, 2} and centers {0, 1.5}, plus cosh_power(2 rho + 2)"""
    members = [FamilyMember.of("gaussian_bump", center=c, width=w)
               for c, w in ((0.0, 0.5), (0.0, 1.0), (0.0, 2.0), (1.5, 0.5), (1.5, 1.0))]
    members.append(FamilyMember.of("cosh_power", sigma=2.0 * datum.rho + 2.0))
    return members

@dataclass
class WeightSpec:
    """Data class for the weight exponents (k, a, b) of the weighted HL inequality"""
    k: float
    a: float
    b: float

    @classmethod
    def natural(cls, datum: RootDatum, a: float = 0.0) -> "WeightSpec":
        """k = beta and b solving a + b + beta + n = -(k + n)"""
        n = datum.rank
        k = datum.beta
        return cls(k, a, -(k + n) - datum.beta - n - a)

    def conditions(self, datum: RootDatum) -> Dict[str, bool]:
        n = datum.rank
        beta = datum.beta
        target = -(self.k + n)
        scale = max(1.0, abs(target))
        return {
            "a+b+beta+n=-(k+n)": abs(self.a + self.b + beta + n - target) <= 1e-12 * scale,
            "2(k+n)+a>=0": 2.0 * (self.k + n) + self.a >= 0,
            "2(k+n)+a+b<=0": 2.0 * (self.k + n) + self.a + self.b <= 0,
            "beta+n>0": beta + n > 0,
            "k>=0": self.k >= 0,
        }

    def advisory(self, datum: RootDatum) -> Dict[str, bool]:
        """Recorded, never blocking"""
        return {"a+b<=(2/3)(n-beta)": self.a + self.b <= (2.0 / 3.0) * (datum.rank - datum.beta)}

    def validate(self, datum: RootDatum) -> None:
        failed = [name for name, ok in self.conditions(datum).items() if not ok]
        if failed:
            raise ConfigurationError("weight", f"WeightSpec(k={self.k:g}, a={self.a:g}, b={self.b:g}) "
                                               f"violates: {', '.join(failed)}")

    def psi(self, datum: RootDatum, xi: np.ndarray) -> np.ndarray:
        """psi(xi) = xi^(2(k+n)+a) (1+xi)^b, bounded iff the two proof-side conditions hold"""
        n = datum.rank
        return xi ** (2.0 * (self.k + n) + self.a) * (1.0 + xi) ** self.b

@dataclass
class HarnessContext:
    """Calibrated datum, grids and the test family shared by the checks"""
    datum: RootDatum
    radial: RadialGrid
    spectral: RadialGrid
    family: List[FamilyMember]
    _curved: Optional[List[Tuple[str, Optional[SampledRadialFunction], str]]] = field(default=None, repr=False)
    _transforms: Dict[float, List[SpectralFunction]] = field(default_factory=dict, repr=False)

    @classmethod
    def build(cls, datum: RootDatum, radial: Optional[RadialGrid] = None,
              spectral: Optional[RadialGrid] = None,
              family: Optional[List[FamilyMember]] = None) -> "HarnessContext":
        """
        Context with calibrated Plancherel constants

        Args:
            datum: root datum, calibrated here when its constants are missing
            radial: radial grid (default X_max grid); for non-integer beta its first
                panel is rebuilt with Gauss-Jacobi nodes for J(x) ~ x^beta
            spectral: spectral grid (default Lambda_max grid)
            family: test family (default_family when None)
        """
        radial = (radial or default_radial_grid()).with_endpoint_exponent(datum.endpoint_exponent)
        spectral = spectral or default_spectral_grid()
        needs_kappa = datum.is_rank_one and datum.kappa is None
        if needs_kappa or datum.flat_kappa is None:
            datum = calibrate(datum, radial, spectral)
        return cls(datum, radial, spectral, list(family) if family is not None else default_family(datum))

    def refined(self, factor: int) -> "HarnessContext":
        """Same datum (constants kept) on grids with factor times the panels"""
        return HarnessContext(self.datum, self.radial.refined(factor), self.spectral.refined(factor),
                              list(self.family))

    def grid_metadata(self) -> Dict:
        return {"radial": self.radial.metadata(), "spectral": self.spectral.metadata()}

    def curved_functions(self) -> List[Tuple[str, Optional[SampledRadialFunction], str]]:
        """(id, function or None, reason) for every member on dmu"""
        if self._curved is None:
            measure = mu_measure(self.datum, self.radial)
            built = []
            for member in self.family:
                try:
                    f = member.build(measure, rho=self.datum.rho)
                    built.append((f.label, f, ""))
                except IntegrabilityError as e:
                    logging.warning(f"Skipping {member.family}: {str(e)}")
                    built.append((member.family, None, str(e)))
            self._curved = built
        return self._curved

    def transforms(self, eta: float = 0.0) -> List[SpectralFunction]:
        """Batched transforms of the usable curved members, cached per shift"""
        key = float(eta)
        if key not in self._transforms:
            functions = [f for _, f, _ in self.curved_functions() if f is not None]
            self._transforms[key] = ho_transform_many(self.datum, functions, self.spectral, eta=key)
        return self._transforms[key]

    def curved_pairs(self, eta: float = 0.0,
                     functions: Optional[Sequence[SampledRadialFunction]] = None):
        """(id, f, F f) triples; flagged members come back with F = None"""
        if functions is not None:
            transforms = ho_transform_many(self.datum, list(functions), self.spectral, eta=eta)
            return [(f.label, f, F, "") for f, F in zip(functions, transforms)]
        transforms = iter(self.transforms(eta))
        return [(fid, f, next(transforms) if f is not None else None, reason)
                for fid, f, reason in self.curved_functions()]

    def flat_functions(self) -> List:
        """Members on the flat measure; tensor products of the member in the product case"""
        if self.datum.is_rank_one:
            measure = mu0_measure(self.datum, self.radial)
            return [member.build(measure) for member in self.family]
        points = self.radial.size ** self.datum.rank
        if points > MAX_TENSOR_POINTS:
            raise ConfigurationError("grid", f"tensor grid of {points} points exceeds {MAX_TENSOR_POINTS}; "
                                             "reduce x_max or panel_order for product data")
        out = []
        for member in self.family:
            factors = tuple(member.build(mu0_measure(axis_datum(self.datum, i), self.radial))
                            for i in range(self.datum.rank))
            out.append(TensorProductFunction(factors, f"{factors[0].label}^{self.datum.rank}"))
        return out

def _new_report(ctx: HarnessContext, inequality_id: str, parameters: Dict[str, float],
                bound: float = float("inf")) -> InequalityReport:
    return InequalityReport(inequality_id=inequality_id, datum=ctx.datum.describe(),
                            parameters=dict(parameters), bound=bound, grid=ctx.grid_metadata())

def _fill_rows(report: InequalityReport, pairs, sides: Callable) -> None:
    """
    Add one row per (id, f, F, reason) and the homogeneity probe

    sides(f, F) returns (lhs, rhs); flagged members become excluded rows.
    """
    probe = None
    for fid, f, F, reason in pairs:
        if f is None:
            report.flag_row(fid, reason)
            continue
        try:
            lhs, rhs = sides(f, F)
        except IntegrabilityError as e:
            logging.warning(f"{report.inequality_id}: row {fid} flagged: {str(e)}")
            report.flag_row(fid, str(e))
            continue
        row = report.add_row(fid, lhs, rhs)
        if probe is None and row.ratio > 0 and np.isfinite(row.ratio):
            probe = (f, F, row.ratio)
    if probe is not None:
        f, F, ratio = probe
        scaled = sides(f.scaled(HOMOGENEITY_SCALE), F.scaled(HOMOGENEITY_SCALE))
        scaled_ratio = ReportRow.from_sides("probe", *scaled).ratio
        report.add_sub_check("homogeneity", abs(scaled_ratio - ratio) / ratio, HOMOGENEITY_TOLERANCE,
                             scale=HOMOGENEITY_SCALE)

def _timed(report: InequalityReport, start: float) -> InequalityReport:
    report.timings["check_seconds"] = time.perf_counter() - start
    return report

def _dual(p: float) -> float:
    return float("inf") if p == 1 else p / (p - 1.0)

def rs_exponent(p: float, q: float) -> float:
    """r with 1/r = 1 - (q'-1)/p'; must be positive"""
    inverse_r = 1.0 - (_dual(q) - 1.0) / _dual(p)
    if inverse_r <= 0:
        raise ConfigurationError("r", f"1/r = 1 - (q'-1)/p' = {inverse_r:g} must be positive")
    return 1.0 / inverse_r

def _require_rank_one(ctx: HarnessContext, check: str) -> None:
    if not ctx.datum.is_rank_one:
        raise ConfigurationError(check, f"curved checks need a rank-one datum, got {ctx.datum.label}")

def check_hausdorff_young(ctx: HarnessContext, p: float,
                          functions: Optional[Sequence[SampledRadialFunction]] = None,
                          bound: float = float("inf")) -> InequalityReport:
    """
    Hausdorff-Young ||F f||_{L^p'(nu)} <= c_p ||f||_{L^p(mu)}

    Also records the Lorentz-space form ||F f||*_{p',p} / ||f||_p.

    Args:
        ctx: harness context
        p: exponent in (1, 2]
        functions: replaces the context family when given
        bound: declared bound on the max ratio

    Returns:
        InequalityReport with one row per function
    """
    start = time.perf_counter()
    _require_rank_one(ctx, "hausdorff_young")
    if not 1.0 < p <= 2.0:
        raise ConfigurationError("p", f"Hausdorff-Young needs p in (1, 2], got {p:g}")
    q = _dual(p)
    report = _new_report(ctx, "hausdorff_young", {"p": p, "q": q}, bound)
    pairs = ctx.curved_pairs(0.0, functions)

    _fill_rows(report, pairs, lambda f, F: (lp_norm(F.as_sampled(), q), lp_norm(f, p)))

    lorentz_ratios = [lorentz_norm(F, q, p) / lp_norm(f, p)
                      for _, f, F, _ in pairs if f is not None and lp_norm(f, p) > 0]
    report.add_sub_check("lorentz_form_ratio", max(lorentz_ratios, default=0.0))
    for _, f, F, _ in pairs[:1]:
        if F is not None:
            report.add_plot("spectrum", F.grid.nodes, np.abs(F.values), "xi", "abs_transform")
    return _timed(report, start)

def check_hausdorff_young_shifted(ctx: HarnessContext, p: float, eta: float,
                                  functions: Optional[Sequence[SampledRadialFunction]] = None,
                                  bound: float = float("inf")) -> InequalityReport:
    """L^q and sup-norm Hausdorff-Young inequalities at a shift inside the tube C(eps_p rho)"""
    start = time.perf_counter()
    _require_rank_one(ctx, "hausdorff_young_shifted")
    tube = TubeParameter(p, eta, ctx.datum.rho)
    q = _dual(p)
    report = _new_report(ctx, "hausdorff_young_shifted",
                         {"p": p, "q": q, "eta": eta, "tube_bound": tube.bound}, bound)
    pairs = ctx.curved_pairs(eta, functions)

    _fill_rows(report, pairs, lambda f, F: (lp_norm(F.as_sampled(), q), lp_norm(f, p)))

    sup_ratios, decay = [], []
    for _, f, F, _ in pairs:
        if f is None:
            continue
        norm = lp_norm(f, p)
        peak = float(np.max(np.abs(F.values)))
        if norm > 0:
            sup_ratios.append(peak / norm)
        if peak > 0:
            decay.append(abs(F.values[-1]) / peak)
    report.add_sub_check("sup_norm_ratio", max(sup_ratios, default=0.0))
    report.add_sub_check("decay_at_lambda_max", max(decay, default=0.0), DECAY_TOLERANCE)
    return _timed(report, start)

def check_hl_weighted(ctx: HarnessContext, p: float, weight: Optional[WeightSpec] = None,
                      functions: Optional[Sequence[SampledRadialFunction]] = None,
                      bound: float = float("inf")) -> InequalityReport:
    """
    Weighted Hardy-Littlewood inequality through T f = |lambda|^(k+n) F f

    Rows are the final inequality
    ((1/|W|) int |F f|^p |lambda|^((k+n)p+a) (1+|lambda|)^b dnu)^(1/p) <= C ||f||_p.
    Sub-checks cover the strong (2,2) bound, the boundedness of psi and the weak
    (1,1) constant of T against dnu_bar.
    """
    start = time.perf_counter()
    _require_rank_one(ctx, "hl_weighted")
    if not 1.0 < p < 2.0:
        raise ConfigurationError("p", f"weighted HL needs p in (1, 2), got {p:g}")
    datum = ctx.datum
    weight = weight or WeightSpec.natural(datum)
    weight.validate(datum)
    n = datum.rank
    report = _new_report(ctx, "hl_weighted",
                         {"p": p, "k": weight.k, "a": weight.a, "b": weight.b, "n": n}, bound)
    for name, ok in weight.advisory(datum).items():
        report.add_sub_check(f"condition {name}", float(ok), passed=ok, blocking=False)
    report.notes.append(f"|W|={datum.weyl_order} divides dnu_bar and the final integral")

    xi = ctx.spectral.nodes
    nu_bar = nu_bar_measure(datum, ctx.spectral, weight.a, weight.b)
    final_weight = xi ** ((weight.k + n) * p + weight.a) * (1.0 + xi) ** weight.b / datum.weyl_order
    pairs = ctx.curved_pairs(0.0, functions)

    def sides(f, F):
        masses = F.measure.cell_masses * final_weight
        return weighted_lp_norm(F.values, masses, p), lp_norm(f, p)

    _fill_rows(report, pairs, sides)

    psi = weight.psi(datum, xi)
    report.add_sub_check("psi_bounded", float(np.max(psi)), minimum=float(np.min(psi)))

    outputs, inputs, strong = [], [], []
    for fid, f, F, _ in pairs:
        if f is None:
            continue
        sampled = F.with_values(xi ** (weight.k + n) * F.values).as_sampled(nu_bar)
        outputs.append(sampled)
        inputs.append(f)
        norm2 = lp_norm(f, 2.0)
        if norm2 > 0:
            strong.append(lp_norm(sampled, 2.0) / norm2)
    report.add_sub_check("strong_2_2_ratio", max(strong, default=0.0))
    weak = weak_type_constant(outputs, inputs, p=1.0, q=1.0)
    report.add_sub_check("weak_1_1_constant", weak)

    if outputs:
        norm1 = lp_norm(inputs[0], 1.0)
        levels = np.logspace(-6, 1, 57) * max(norm1, 1e-300)
        report.add_plot("weak_type_profile", levels, weak_type_profile(outputs[0], norm1, levels), "t", "ratio")
    return _timed(report, start)

def check_hl_young(ctx: HarnessContext, q: float,
                   functions: Optional[Sequence[SampledRadialFunction]] = None,
                   bound: float = float("inf")) -> InequalityReport:
    """((1/|W|) int |F f|^q dnu)^(1/q) <= D_q ||f||_{(q),psi_h} with psi_h = cosh(x) J(x)"""
    start = time.perf_counter()
    _require_rank_one(ctx, "hl_young")
    if not q > 2.0:
        raise ConfigurationError("q", f"hl_young needs q > 2, got {q:g}")
    datum = ctx.datum
    report = _new_report(ctx, "hl_young", {"q": q}, bound)
    x = ctx.radial.nodes
    psi_h = np.cosh(x) * density_J(datum, x)
    young_weight = psi_h ** (q - 2.0)
    pairs = ctx.curved_pairs(0.0, functions)

    def sides(f, F):
        integrand = np.abs(f.values) ** q * young_weight * f.measure.density
        if np.any(integrand > 0):
            _assert_decaying(integrand, x, "||f||_(q),psi_h < inf")
        lhs = lp_norm(F.as_sampled(), q) / datum.weyl_order ** (1.0 / q)
        return lhs, weighted_lp_norm(f.values, f.measure.cell_masses * young_weight, q)

    _fill_rows(report, pairs, sides)
    constant, slope = young_sublevel_constant(psi_h, mu_measure(datum, ctx.radial), YOUNG_LEVELS)
    report.add_sub_check("young_constant_psi_h", constant, slope=slope)
    report.notes.append(f"lhs carries 1/|W| with |W|={datum.weyl_order}")
    return _timed(report, start)

def _assert_decaying(integrand: np.ndarray, nodes: np.ndarray, condition: str) -> None:
    """The weighted integrand must fall off over the last quarter of the grid"""
    start = (3 * nodes.size) // 4
    tail = integrand[start:]
    head = np.max(integrand)
    if tail[-1] > 1e-12 * head and not tail[-1] < np.max(tail[: max(1, tail.size // 2)]):
        raise IntegrabilityError(condition, "weighted integrand does not decay on the grid")

def check_hl_ver3_i(ctx: HarnessContext, q: float, p: float, eta: float = 0.0,
                    functions: Optional[Sequence[SampledRadialFunction]] = None,
                    bound: float = float("inf")) -> InequalityReport:
    """
    (int |F f(i xi + eta)|^r (xi |c|^-2)^(r/p' - 1) dnu)^(1/r) <= C ||f||_p, 1/r = 1 - (q'-1)/p'

    The auxiliary operator T f = |F f(. + eta)| (xi |c|^-2)^(q/q') is checked for
    strong type (q, q') and weak type (1,1) against xi^-q |c|^(-2(1-q)) dxi, and
    the comparison G'(xi) ~ |c(i xi)|^-2 is swept.
    """
    start = time.perf_counter()
    _require_rank_one(ctx, "hl_ver3_i")
    if not 1.0 < q <= 2.0:
        raise ConfigurationError("q", f"hl_ver3_i needs q in (1, 2], got {q:g}")
    if not 1.0 < p <= q:
        raise ConfigurationError("p", f"hl_ver3_i needs 1 < p <= q = {q:g}, got {p:g}")
    TubeParameter(p, eta, ctx.datum.rho)
    datum = ctx.datum
    n = datum.rank
    p_dual, q_dual = _dual(p), _dual(q)
    r = rs_exponent(p, q)
    report = _new_report(ctx, "hl_ver3_i", {"q": q, "p": p, "eta": eta, "r": r}, bound)

    xi = ctx.spectral.nodes
    c_inv = inverse_c_squared(datum, xi)
    G = xi * c_inv
    with np.errstate(divide="ignore"):
        row_weight = np.where(G > 0, G ** (r / p_dual - 1.0), 0.0)
    pairs = ctx.curved_pairs(eta, functions)

    _fill_rows(report, pairs, lambda f, F: (weighted_lp_norm(F.values, F.measure.cell_masses * row_weight, r),
                                            lp_norm(f, p)))

    with np.errstate(divide="ignore", invalid="ignore"):
        aux_density = np.where(xi > 0, xi ** (-n * q) * c_inv ** (1.0 - n * q), 0.0)
    aux_measure = WeightedMeasure(ctx.spectral, aux_density, MeasureLabel.NU_BAR, {"q": q, "n": float(n)})
    aux_factor = G ** (n * q / q_dual)
    outputs, inputs, strong = [], [], []
    for _, f, F, _ in pairs:
        if f is None:
            continue
        T = F.with_values(np.abs(F.values) * aux_factor)
        sampled = T.as_sampled(aux_measure)
        outputs.append(sampled)
        inputs.append(f)
        norm_q = lp_norm(f, q)
        if norm_q > 0:
            strong.append(lp_norm(sampled, q_dual) / norm_q)
    report.add_sub_check("strong_q_qdual_ratio", max(strong, default=0.0))
    report.add_sub_check("weak_1_1_constant", weak_type_constant(outputs, inputs, p=1.0, q=1.0))

    lo, hi = G_TRICK_RANGE
    sweep = np.logspace(np.log10(lo), np.log10(hi), 200)
    ratio = g_derivative(datum, sweep) / inverse_c_squared(datum, sweep)
    report.add_sub_check("g_trick_upper", float(np.max(ratio)),
                         passed=bool(np.all(np.isfinite(ratio)) and np.min(ratio) > 0),
                         lower=float(np.min(ratio)))
    return _timed(report, start)

def check_hl_ver3_ii(ctx: HarnessContext, q: float, p: float, eta: float = 0.0,
                     functions: Optional[Sequence[SampledRadialFunction]] = None,
                     bound: float = float("inf")) -> InequalityReport:
    """(int |F f|^p dnu)^(1/p) <= C ||f||_(p) with ||f||_(p) = (int |f|^p J^(p-2) dmu)^(1/p)"""
    start = time.perf_counter()
    _require_rank_one(ctx, "hl_ver3_ii")
    if not 2.0 <= q <= p:
        raise ConfigurationError("p", f"hl_ver3_ii needs 2 <= q <= p, got q={q:g}, p={p:g}")
    if eta != 0.0:
        raise ConfigurationError("eta", f"hl_ver3_ii runs at eta=0 only: the tube C(eps_p rho) "
                                        f"has empty interior for p={p:g} >= 2")
    datum = ctx.datum
    report = _new_report(ctx, "hl_ver3_ii", {"q": q, "p": p, "eta": 0.0}, bound)
    report.notes.append("tube hypothesis is vacuous for p >= 2; run at eta = 0")
    x = ctx.radial.nodes
    J = density_J(datum, x)
    young_weight = J ** (p - 2.0)
    pairs = ctx.curved_pairs(0.0, functions)

    def sides(f, F):
        integrand = np.abs(f.values) ** p * young_weight * f.measure.density
        if np.any(integrand > 0):
            _assert_decaying(integrand, x, "||f||_(p) < inf")
        return lp_norm(F.as_sampled(), p), weighted_lp_norm(f.values, f.measure.cell_masses * young_weight, p)

    _fill_rows(report, pairs, sides)

    sup_ratios, intermediate = [], []
    for _, f, F, _ in pairs:
        if f is None:
            continue
        norm1 = lp_norm(f, 1.0)
        if norm1 > 0:
            sup_ratios.append(float(np.max(np.abs(F.values))) / norm1)
        norm_dual = lp_norm(f, _dual(q))
        if norm_dual > 0:
            intermediate.append(lp_norm(F.as_sampled(), q) / norm_dual)
    report.add_sub_check("sup_vs_l1", max(sup_ratios, default=0.0), 1.0 + SUP_SLACK)
    report.add_sub_check("intermediate_q_ratio", max(intermediate, default=0.0))
    constant, slope = young_sublevel_constant(J, mu_measure(datum, ctx.radial), YOUNG_LEVELS)
    report.add_sub_check("young_constant_J", constant, slope=slope)
    return _timed(report, start)

def flat_arrays(obj) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(values, masses, radii) for a rank-one or tensor object"""
    if hasattr(obj, "factors"):
        points = obj.points()
        return obj.values(), obj.masses(), np.linalg.norm(points, axis=-1)
    sampled = obj.as_sampled() if hasattr(obj, "as_sampled") else obj
    return sampled.values, sampled.measure.cell_masses, sampled.grid.nodes

def flat_pairs(ctx: HarnessContext, functions=None):
    """(id, f, F0 f) for the flat family or the given functions"""
    if functions is None:
        functions = ctx.flat_functions()
    return [(f.label, f, flat_transform(ctx.datum, f, ctx.spectral), "") for f in functions]

def check_flat_hl(ctx: HarnessContext, p: float, functions=None,
                  bound: float = float("inf")) -> InequalityReport:
    """(int |lambda|^((2 rho + d)(p-2)) |F0 f|^p dnu0)^(1/p) <= C ||f||_{L^p(mu0)}, read with d = n"""
    start = time.perf_counter()
    if not 1.0 < p <= 2.0:
        raise ConfigurationError("p", f"flat HL needs p in (1, 2], got {p:g}")
    datum = ctx.datum
    n = datum.rank
    exponent = (datum.flat_degree + n) * (p - 2.0)
    report = _new_report(ctx, "flat_hl", {"p": p, "weight_exponent": exponent, "d": n}, bound)
    report.notes.append("d read as n, the dimension of the flat space")

    def sides(f, F):
        values, masses, radii = flat_arrays(F)
        with np.errstate(divide="ignore"):
            w = np.where(radii > 0, radii ** exponent, 0.0)
        f_values, f_masses, _ = flat_arrays(f)
        return weighted_lp_norm(values, masses * w, p), weighted_lp_norm(f_values, f_masses, p)

    _fill_rows(report, flat_pairs(ctx, functions), sides)
    return _timed(report, start)

def check_flat_rs(ctx: HarnessContext, q: float, p: float, part: str = "i", functions=None,
                  bound: float = float("inf")) -> InequalityReport:
    """
    Flat analogue of the two-part Hardy-Littlewood theorem

    Part "i": 1 < p <= q <= 2, weight (|xi| omega(xi))^(r/p' - 1), rhs ||f||_{L^p(mu0)}.
    Part "ii": 2 <= q <= p, rhs ||f||_{m,(p)} built from the Young function
    |x|^k with k = 2 rho + n; the sublevel sweep is recorded at k and k +- 0.5.
    """
    start = time.perf_counter()
    datum = ctx.datum
    n = datum.rank
    degree = datum.flat_degree
    pairs = flat_pairs(ctx, functions)

    if part == "i":
        if not 1.0 < p <= q <= 2.0:
            raise ConfigurationError("p", f"flat RS part (i) needs 1 < p <= q <= 2, got p={p:g}, q={q:g}")
        p_dual = _dual(p)
        r = rs_exponent(p, q)
        report = _new_report(ctx, "flat_rs_i", {"q": q, "p": p, "r": r}, bound)

        def sides(f, F):
            values, masses, radii = flat_arrays(F)
            spectral_points = F.points() if hasattr(F, "points") else F.grid.nodes
            omega = dunkl_weight(datum, spectral_points)
            with np.errstate(divide="ignore"):
                base = radii * omega
                w = np.where(base > 0, base ** (r / p_dual - 1.0), 0.0)
            f_values, f_masses, _ = flat_arrays(f)
            return weighted_lp_norm(values, masses * w, r), weighted_lp_norm(f_values, f_masses, p)

        _fill_rows(report, pairs, sides)
        return _timed(report, start)

    if part != "ii":
        raise ConfigurationError("part", f"flat RS part must be 'i' or 'ii', got {part!r}")
    if not 2.0 <= q <= p:
        raise ConfigurationError("p", f"flat RS part (ii) needs 2 <= q <= p, got q={q:g}, p={p:g}")
    k = degree + n
    report = _new_report(ctx, "flat_rs_ii", {"q": q, "p": p, "k": k}, bound)
    report.notes.append(f"Young function |x|^k with k = 2 rho + n = {k:g}; weight |x|^(k(p-2))")

    def sides(f, F):
        values, masses, _ = flat_arrays(F)
        f_values, f_masses, radii = flat_arrays(f)
        young_weight = radii ** (k * (p - 2.0))
        return weighted_lp_norm(values, masses, p), weighted_lp_norm(f_values, f_masses * young_weight, p)

    _fill_rows(report, pairs, sides)
    ball = ball_measure_constant(datum)
    dimension = degree + n
    constant, slope = power_sublevel_constant(ball, dimension, k, YOUNG_LEVELS)
    report.add_sub_check("young_constant_norm_power", constant, passed=abs(slope) < 1e-9,
                         slope=slope, k=k)
    for shifted in (k - 0.5, k + 0.5):
        value, off_slope = power_sublevel_constant(ball, dimension, shifted, YOUNG_LEVELS)
        report.add_sub_check(f"young_sweep_k={shifted:g}", value, passed=abs(off_slope) > 1e-3,
                             blocking=False, slope=off_slope)
    return _timed(report, start)
