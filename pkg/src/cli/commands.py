"""
Subcommand pipelines for the strip lab command line.
Each command returns a verdict over its residual table and the artifacts it wrote.
"""

import logging
from pathlib import Path
from typing import Callable, Dict, List, Tuple

import numpy as np
from pydantic import ValidationError

from models.domain import (
    AnalyticFnSpec,
    DeltaRoute,
    DeltaSettings,
    FactorPair,
    FunctionKind,
    GaugeConvention,
    GridSpec,
    OracleParams,
    QHeisParams,
    RunConfig,
    StripDomain,
    Subcommand,
)
from models.reports import VerificationResult
from strip.closed_form import (
    oracle_line,
    oracle_w,
    oracle_ratio_residual,
    seeded_interior_points,
    zero_pole_catalog,
)
from strip.errors import UsageError
from strip.factorizer import (
    continue_into_strip,
    factorize,
    gauge_ratio,
    iterated_relation_residual,
    polar_decompose,
    upper_edge_residual,
)
from strip.operator_lab import (
    adjoint_residual,
    band_limit,
    build_operator_suite,
    core_vectors,
    diagonalization_residual,
    frobenius_residual,
    hermiticity_residual,
    intertwining_residual,
    kernel_proxy,
    qheis_equivalence_residual,
    qheis_residuals,
    qheis_suite,
    scaling_covariance_residual,
    svd_polar_compare,
)
from strip.sine_blocks import sine_block
from strip.special_fn import delta_eval, delta_recursion_residual, euler_mascheroni
from strip.strip_core import BoundaryApproach, boundary_convergence_check, central_max, class_membership_estimate
from utils.line_io import json_text, pair_to_json, write_line, write_table, write_text
from utils.verifier import ResidualVerifier

logger = logging.getLogger(__name__)

CommandResult = Tuple[VerificationResult, List[Path]]

DELTA_POINTS = 100
DELTA_RADIUS = 5.0
RATIO_POINTS = 50
CATALOG_DEPTH = 2
POLE_OFFSET = 1e-9
COVARIANCE_MODE = 4
EQUIVALENCE_SPACING = 1.0 / 32.0
POLAR_BAND = 0.125
NORM_LINES = 9
NORM_STEPS = 10
GAUGE_ROTATION = np.exp(0.7j)


def _finish(cfg: RunConfig, verifier: ResidualVerifier, artifacts: List[Path]) -> CommandResult:
    result = verifier.result()
    artifacts.append(write_table(cfg.output_path, f"{cfg.subcommand.value}_residuals", result, cfg.format.value))
    return result, artifacts


def _tag(y: float) -> str:
    return f"y{y:+g}"


def _spectral_leaves(f: AnalyticFnSpec) -> bool:
    """Whether f has factors handled by the truncated spectral continuation"""
    return any(leaf.kind == FunctionKind.COSINE_OFFSET for leaf in f.leaves())


def _trigonometric_on_grid(f: AnalyticFnSpec, grid: GridSpec) -> bool:
    """Whether every factor of f is a trigonometric polynomial with window-commensurate frequencies"""
    for leaf in f.leaves():
        if leaf.kind == FunctionKind.IDENTITY:
            return False
        if leaf.kind in (FunctionKind.SCALED_SINE, FunctionKind.COSINE_OFFSET) and not grid.is_commensurate(leaf.beta):
            return False
        if leaf.kind == FunctionKind.EXPONENTIAL and not grid.is_commensurate(leaf.kappa):
            return False
    return True


def _exact_polar_case(f: AnalyticFnSpec, alpha: float, grid: GridSpec) -> bool:
    """Zero-free products whose factor phases are commensurate pure exponentials"""
    for leaf in f.leaves():
        if leaf.kind == FunctionKind.EXPONENTIAL:
            if not grid.is_commensurate(0.5 * leaf.kappa):
                return False
        elif leaf.kind == FunctionKind.CONSTANT:
            if not grid.is_commensurate(np.log(abs(leaf.constant)) / (2.0 * alpha)):
                return False
        else:
            return False
    return True


def _reference_w1(f: AnalyticFnSpec, alpha: float, grid: GridSpec) -> np.ndarray:
    """Closed-form w1 on the real grid, available for z and 2·sin(βz), β > 0"""
    if f.kind == FunctionKind.IDENTITY:
        return oracle_line(1, grid, 0.0, OracleParams(alpha=alpha)).values
    if f.kind == FunctionKind.SCALED_SINE and f.beta > 0:
        return sine_block(1, grid.x, f.beta, alpha)
    raise UsageError(f"no closed-form reference for {f.label}; use --gauge center")


def _factor(cfg: RunConfig) -> FactorPair:
    reference = None
    if cfg.gauge == GaugeConvention.MATCH_REFERENCE:
        reference = _reference_w1(cfg.function, cfg.alpha, cfg.grid)
    return factorize(cfg.function, cfg.alpha, cfg.grid, cfg.gauge, reference)


def run_delta(cfg: RunConfig) -> CommandResult:
    """Δ at one point, its functional equation at seeded points and the fixed values"""
    verifier = ResidualVerifier(cfg.tolerances)
    z = cfg.point
    value = delta_eval(z)
    product_value = delta_eval(z, DeltaSettings(route=DeltaRoute.PRODUCT))

    verifier.check("Δ(1) = 1", abs(delta_eval(1.0) - 1.0), "machine")
    verifier.check("Δ(1/2) = 1/√π", abs(delta_eval(0.5) - 1.0 / np.sqrt(np.pi)), "delta")
    verifier.check(f"Δ(z) = zΔ(z+1) at z={z}", delta_recursion_residual(z), "delta")

    rng = np.random.default_rng(cfg.seed)
    radius = DELTA_RADIUS * np.sqrt(rng.uniform(size=DELTA_POINTS))
    points = radius * np.exp(2j * np.pi * rng.uniform(size=DELTA_POINTS))
    worst = max(delta_recursion_residual(complex(p)) for p in points)
    verifier.check(f"Δ(z) = zΔ(z+1) at {DELTA_POINTS} seeded points", worst, "delta")

    route_gap = abs(value - product_value) / max(abs(value), 1e-300)
    verifier.check("asymptotic vs product route", route_gap, "delta", asserted=False)

    payload = {
        "z": [z.real, z.imag],
        "delta": [value.real, value.imag],
        "delta_product_route": [product_value.real, product_value.imag],
        "euler_mascheroni": euler_mascheroni(),
    }
    artifacts = [write_text(cfg.output_path, "delta.json", json_text(payload))]
    return _finish(cfg, verifier, artifacts)


def run_oracle(cfg: RunConfig) -> CommandResult:
    """Closed-form pair for f(z) = z: sampled lines, unimodularity, ratio identities, catalog"""
    verifier = ResidualVerifier(cfg.tolerances)
    params = OracleParams(alpha=cfg.alpha)
    artifacts = []
    for y in cfg.lines or [0.0]:
        for which in (1, 2):
            line = oracle_line(which, cfg.grid, y, params)
            artifacts.append(write_line(cfg.output_path, f"w{which}_{_tag(y)}", line, cfg.format.value))

    for which in (1, 2):
        real = oracle_line(which, cfg.grid, 0.0, params).values
        verifier.check(f"|w{which}(x)| = 1", float(np.max(np.abs(np.abs(real) - 1.0))), "unimodular")

    points = seeded_interior_points(params, RATIO_POINTS, cfg.seed)
    ratios = np.array([oracle_ratio_residual(p, params) for p in points])
    verifier.check("w1(z)/w2(z-2αi) = z-αi", float(ratios[:, 0].max()), "exact")
    verifier.check("w2(z)/w1(z-2αi) = z-αi", float(ratios[:, 1].max()), "exact")

    catalog = zero_pole_catalog(params, CATALOG_DEPTH)
    verifier.check("w1 vanishes at (4n+1)αi", max(abs(oracle_w(1, z, params)) for z in catalog.w1_zeros), "exact")
    verifier.check("w2 vanishes at (4n+3)αi", max(abs(oracle_w(2, z, params)) for z in catalog.w2_zeros), "exact")
    verifier.check_above("w1 blows up at -(4n+1)αi",
                         min(abs(oracle_w(1, z + POLE_OFFSET, params)) for z in catalog.w1_poles), "blow-up")
    verifier.check_above("w2 blows up at -(4n+3)αi",
                         min(abs(oracle_w(2, z + POLE_OFFSET, params)) for z in catalog.w2_poles), "blow-up")
    return _finish(cfg, verifier, artifacts)


def run_factorize(cfg: RunConfig) -> CommandResult:
    """Factor pair, its boundary relations, gauge uniqueness and continued lines"""
    verifier = ResidualVerifier(cfg.tolerances)
    f, grid = cfg.function, cfg.grid
    pair = _factor(cfg)
    artifacts = [write_text(cfg.output_path, "pair.json", pair_to_json(pair))]

    verifier.check("w1(x) = f(x-αi)·w2(x-2αi)", pair.residual_b2, "exact")
    verifier.check("w2(x) = f̄(x-αi)·w1(x-2αi)", pair.residual_b3, "exact")
    for which in (1, 2):
        verifier.check(f"w{which}(x+4αi) iterated relation", iterated_relation_residual(pair, which),
                       "exact", asserted=not _spectral_leaves(f))
    verifier.check("w1(x+2αi) = f(x+αi)·w2(x)", upper_edge_residual(pair), "exact",
                   asserted=not _spectral_leaves(f))
    verifier.check("|w1(x)| = 1", central_max(np.abs(pair.w1_real_line) - 1.0, grid), "exact")
    verifier.check("|w2(x)| = 1", central_max(np.abs(pair.w2_real_line) - 1.0, grid), "exact")

    rotated = factorize(f, cfg.alpha, grid, GaugeConvention.MATCH_REFERENCE, GAUGE_ROTATION * pair.w1_real_line)
    ratio = gauge_ratio(pair, rotated)
    verifier.check("gauge ratio constant (w1)", ratio["std1"], "gauge")
    verifier.check("gauge ratio constant (w2)", ratio["std2"], "gauge")
    verifier.check("gauge ratio equal across w1, w2", abs(ratio["c1"] - ratio["c2"]), "gauge")
    verifier.check("|gauge ratio| = 1", abs(abs(ratio["c1"]) - 1.0), "exact")

    for y in cfg.lines:
        for which in (1, 2):
            if which == 1 and not 0.0 <= y <= 2.0 * cfg.alpha:
                continue
            line = continue_into_strip(pair, [y], which)[float(y)]
            artifacts.append(write_line(cfg.output_path, f"w{which}_{_tag(y)}", line, cfg.format.value))
    return _finish(cfg, verifier, artifacts)


def run_polar(cfg: RunConfig) -> CommandResult:
    """Polar decomposition f(z) = u_f(z+αi)·g_f(z) from the factor pair"""
    verifier = ResidualVerifier(cfg.tolerances)
    f, grid = cfg.function, cfg.grid
    pair = _factor(cfg)
    polar = polar_decompose(pair, f, cfg.alpha)

    g = polar.g_real.values
    window = grid.central_half
    verifier.check("g_f(x) >= 0", max(0.0, -float(np.min(g.real[window]))), "exact")
    verifier.check("Im g_f(x) = 0", float(np.max(np.abs(g.imag[window]))), "exact")
    verifier.check("|u_f(x)| = 1", central_max(np.abs(polar.u_real.values) - 1.0, grid), "exact")
    exact = all(leaf.kind != FunctionKind.IDENTITY for leaf in f.leaves())
    verifier.check("f(x) = u_f(x+αi)·g_f(x)", polar.recon_residual, "polar" if exact else "oracle")

    artifacts = []
    for stem, line in (("u_real", polar.u_real), ("u_upper", polar.u_upper),
                       ("g_real", polar.g_real), ("g_lower", polar.g_lower)):
        artifacts.append(write_line(cfg.output_path, stem, line, cfg.format.value))
    return _finish(cfg, verifier, artifacts)


def run_opcheck(cfg: RunConfig) -> CommandResult:
    """Operator identities of e^{±2αP}, L_f, R_f and A_f"""
    verifier = ResidualVerifier(cfg.tolerances)
    f, grid = cfg.function, cfg.grid
    suite = build_operator_suite(f, cfg.alpha, grid)
    t = COVARIANCE_MODE * grid.frequency_step

    identity = np.eye(grid.n)
    verifier.check("e^(2αP) e^(-2αP) = I",
                   frobenius_residual(suite.expP_plus.entries @ suite.expP_minus.entries, identity), "identity")
    verifier.check("L_f† = R_f", adjoint_residual(suite), "identity")
    verifier.check("A_f = A_f†", hermiticity_residual(suite.Af), "identity")
    verifier.check("B = B†", hermiticity_residual(suite.B), "identity")
    verifier.check("U(-t) A_f U(t) = e^(2αt) A_f",
                   scaling_covariance_residual(suite, t, cfg.band_fraction, cfg.seed), "covariance")

    columns = band_limit(core_vectors(grid), grid, cfg.band_fraction)
    verifier.check("e^(2αP) f(x) = f(x-2αi) e^(2αP)", intertwining_residual(f, cfg.alpha, grid, columns),
                   "operator", asserted=_trigonometric_on_grid(f, grid))
    verifier.check("σ_min(L_f)", kernel_proxy(suite), "exact", asserted=False)

    fine = GridSpec.centered(grid.n, EQUIVALENCE_SPACING)
    if _exact_polar_case(f, cfg.alpha, grid):
        polar_suite, band, tolerance, asserted = suite, cfg.band_fraction, "exact", True
    elif f.kind == FunctionKind.SCALED_SINE and fine.is_commensurate(0.5 * abs(f.beta)):
        polar_suite = build_operator_suite(f, cfg.alpha, fine)
        band, tolerance, asserted = POLAR_BAND, "equivalence", True
    else:
        polar_suite, band, tolerance, asserted = suite, cfg.band_fraction, "equivalence", False
    pair = factorize(f, cfg.alpha, polar_suite.grid)
    report = svd_polar_compare(polar_suite, pair, band)
    verifier.check("polar unitary vs w1·w̄2", report.unitary_residual, tolerance, asserted=asserted)
    verifier.check("|L_f| vs w2 e^(2αP) w̄2", report.modulus_residual, tolerance, asserted=asserted)
    verifier.check("|L_f†| vs w1 e^(2αP) w̄1", report.adjoint_modulus_residual, tolerance, asserted=asserted)
    verifier.check("W† A_f W = B", diagonalization_residual(polar_suite, pair, band), tolerance, asserted=asserted)
    return _finish(cfg, verifier, [])


def run_qheis(cfg: RunConfig) -> CommandResult:
    """q-deformed Heisenberg relations and the unitary equivalence of ρ(x) and ρ(p)"""
    verifier = ResidualVerifier(cfg.tolerances)
    try:
        params = QHeisParams.on_grid(cfg.alpha, cfg.beta_index, cfg.grid)
    except ValidationError as e:
        raise UsageError(f"beta-index {cfg.beta_index} gives q = 1") from e
    logger.info(f"q = {params.q:.6g}, beta_h = {params.beta_h:.6g}")

    suite = qheis_suite(params, cfg.grid)
    verifier.extend(qheis_residuals(suite, params, cfg.band_fraction, cfg.seed).items(), "operator")

    fine = GridSpec.centered(cfg.grid.n, EQUIVALENCE_SPACING)
    fine_params = QHeisParams(alpha=params.alpha, beta_h=params.beta_h)
    fine_suite = qheis_suite(fine_params, fine)
    pair = factorize(AnalyticFnSpec.scaled_sine(params.beta_h), params.alpha, fine)
    verifier.check("(WV)† ρ(x) (WV) = ρ(p)",
                   qheis_equivalence_residual(fine_suite, pair, fine_params, cfg.band_fraction), "equivalence")
    verifier.check_above("V† ρ(x) V = ρ(p) without W",
                         qheis_equivalence_residual(fine_suite, None, fine_params, cfg.band_fraction),
                         "negative-control")

    payload = {"alpha": params.alpha, "beta_h": params.beta_h, "q": params.q, "q_half": params.q_half}
    artifacts = [write_text(cfg.output_path, "qheis.json", json_text(payload))]
    return _finish(cfg, verifier, artifacts)


def _monotone_rows(verifier: ResidualVerifier, approach: BoundaryApproach, distances: List[float]) -> None:
    first = distances[0] if distances and distances[0] > 0 else 0.0
    if first == 0.0:
        verifier.check(f"boundary approach ({approach.value}) nonincreasing", 0.0, "exact")
        return
    increase = max([0.0] + [b - a for a, b in zip(distances, distances[1:])])
    verifier.check(f"boundary approach ({approach.value}) nonincreasing", increase / first, "exact")
    verifier.check(f"boundary approach ({approach.value}) last/first", distances[-1] / first, "contraction")


def run_norm(cfg: RunConfig) -> CommandResult:
    """Weighted class membership on the strip |Im z| < α and convergence to both edges"""
    verifier = ResidualVerifier(cfg.tolerances)
    dom = StripDomain(upper=cfg.alpha, lower=-cfg.alpha, epsilon=cfg.epsilon)
    gammas = cfg.gammas or [2.0 * cfg.epsilon + 0.5, 4.0 * cfg.epsilon + 1.0]
    report = class_membership_estimate(cfg.function, dom, cfg.grid, gammas, NORM_LINES)
    for gamma, value in report.sup_norms.items():
        verifier.check(f"sup weighted norm, γ={gamma:g}", value, "norm-overflow")

    distances: Dict[str, List[float]] = {}
    for approach in BoundaryApproach:
        sequence = boundary_convergence_check(cfg.function, dom, cfg.grid, gammas[0], approach, NORM_STEPS)
        distances[approach.value] = sequence
        _monotone_rows(verifier, approach, sequence)

    payload = {
        "sup_norms": {f"{gamma:g}": value for gamma, value in report.sup_norms.items()},
        "lines": report.lines,
        "verdict": report.verdict,
        "boundary_distances": distances,
    }
    artifacts = [write_text(cfg.output_path, "norm.json", json_text(payload))]
    return _finish(cfg, verifier, artifacts)


COMMANDS: Dict[Subcommand, Callable[[RunConfig], CommandResult]] = {
    Subcommand.DELTA: run_delta,
    Subcommand.ORACLE: run_oracle,
    Subcommand.FACTORIZE: run_factorize,
    Subcommand.POLAR: run_polar,
    Subcommand.OPCHECK: run_opcheck,
    Subcommand.QHEIS: run_qheis,
    Subcommand.NORM: run_norm,
}
