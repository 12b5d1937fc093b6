import logging
import operator
from dataclasses import dataclass
from functools import reduce
from pathlib import Path
from typing import Callable, Optional

import numpy as np
import yaml

from fermi_forge.asymptotics import (
    RecoveryReport,
    recover_k_at_point,
    recover_scalar_at_point,
)
from fermi_forge.calderon import (
    DiskQuadrature,
    carleman_verify,
    diffeomorphism_defect,
    gauge_defect,
    harmonic_extension,
    holo_trace_test,
    homology_periods,
    log_trace,
    project_to_conjugable,
    random_fields,
    schrodinger_dn,
    trace_of,
    wkb_ansatz,
)
from fermi_forge.cgo import CGOGrid, Phase, decay_fit, decay_phase, decay_sweep
from fermi_forge.formats import (
    write_boundary_function,
    write_field,
    write_mesh,
    write_table,
)
from fermi_forge.forward import (
    dn_from_volumes,
    msq_jacobian,
    nonlinear_dn,
    solve_minimal_graph,
)
from fermi_forge.geometry import (
    TensorField2,
    annulus,
    boundary_flat_cutoff,
    build_mesh,
    check_minimality,
    evaluate_jets,
    gaussian,
    unit_disk,
)
from fermi_forge.linearize import verify_identity_2, verify_identity_3
from fermi_forge.pde_core import BoundaryFunction, dn_matrix

from .config import ExperimentConfig, boundary_data, validate, write_config
from .svg import write_loglog_svg

logger = logging.getLogger(__name__)

FLAT_ORDER = 6
FRECHET_STEP = 1e-3
WKB_SLOPES = {1: 0.8, 2: 1.8, 3: 2.7}
N_HOLOMORPHIC = 10
N_CARLEMAN_FIELDS = 50
WKB_WIDTH = 0.3
DIFFEOMORPHISM_MODES = 4


@dataclass(frozen=True)
class Check:
    """
    An asserted bound lower <= value <= upper; strict bounds exclude the
    endpoints. NaN values fail.
    """

    name: str
    value: float
    lower: float = -np.inf
    upper: float = np.inf
    strict: bool = False

    @property
    def passed(self) -> bool:
        if self.strict:
            return bool(self.lower < self.value < self.upper)
        return bool(self.lower <= self.value <= self.upper)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "value": float(self.value),
            "lower": float(self.lower),
            "upper": float(self.upper),
            "passed": self.passed,
        }


@dataclass(frozen=True)
class RunResult:
    out: Path
    checks: list[Check]

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def exit_code(self) -> int:
        return 0 if self.passed else 1


def _forward_problem(config: ExperimentConfig):
    mesh = build_mesh(config.make_domain(), config.level)
    f = reduce(operator.add, boundary_data(config, config.boundary))
    return config.make_family(), mesh, f


def run_forward(config: ExperimentConfig, out: Path) -> list[Check]:
    """
    Solves the minimal graph for the boundary data and checks that the
    first variation of the area matches the DN pairing.
    """
    family, mesh, f = _forward_problem(config)
    solution = solve_minimal_graph(family, mesh, f, tol=config.tol)

    write_mesh(out / "mesh.txt", mesh, name=config.family.name)
    write_field(out / "graph.csv", solution.u)
    history = solution.residual_history
    rows = [{"iteration": i, "residual": r} for i, r in enumerate(history)]
    write_table(out / "newton.csv", rows)

    w = BoundaryFunction.trigonometric(
        mesh.domain, 1, kind="sin", n_modes=config.n_modes
    )
    volumes = dn_from_volumes(family, mesh, f, w)
    minimality = check_minimality(family, mesh)

    constant = solution.convergence_constant
    summary = {
        "area": solution.area,
        "iterations": solution.iterations,
        "residual": solution.residual,
        "convergence_constant": np.nan if constant is None else constant,
        "minimality_residual": minimality.max_residual,
        "volume_difference": volumes.finite_difference,
        "dn_pairing": volumes.boundary_integral,
    }
    write_table(out / "forward.csv", [summary])

    return [
        Check("newton_residual", solution.residual, upper=config.tol),
        Check(
            "volume_dn",
            volumes.difference,
            upper=config.bound("volume_dn", 1e-4),
        ),
    ]


def run_dnmap(config: ExperimentConfig, out: Path) -> list[Check]:
    """
    Computes the nonlinear DN map of the boundary data and the linearized
    DN matrix at the zero graph, and checks that the latter is Hermitian
    and is the Frechet derivative of the former.
    """
    family, mesh, f = _forward_problem(config)
    n_modes = config.n_modes

    nonlinear = nonlinear_dn(family, mesh, f, n_modes)
    write_boundary_function(out / "nonlinear_dn.csv", nonlinear)

    zero = np.zeros(mesh.n_nodes)
    linear = dn_matrix(msq_jacobian(family, mesh, zero), n_modes)
    rows = [
        {"row": i, "col": j, "real": value.real, "imag": value.imag}
        for (i, j), value in np.ndenumerate(linear.matrix)
    ]
    write_table(out / "dn_matrix.csv", rows)

    plus = nonlinear_dn(family, mesh, FRECHET_STEP * f, n_modes)
    minus = nonlinear_dn(family, mesh, -FRECHET_STEP * f, n_modes)
    derivative = (plus - minus) / (2 * FRECHET_STEP)
    expected = linear.apply(f)
    gap = (derivative - expected).norm() / max(expected.norm(), 1e-300)

    return [
        Check(
            "hermitian_defect",
            linear.hermitian_defect(),
            upper=config.bound("hermitian_defect", 1e-8),
        ),
        Check("frechet_gap", gap, upper=config.bound("frechet_gap", 1e-4)),
    ]


def run_identities(config: ExperimentConfig, out: Path) -> list[Check]:
    family = config.make_family()
    mesh = build_mesh(config.make_domain(), config.level)
    data = boundary_data(config, config.data)

    verify = verify_identity_2 if config.order == 2 else verify_identity_3
    report = verify(family, mesh, data, eps=config.eps)
    write_table(out / f"identity_{config.order}.csv", report.to_rows())

    default = 1e-2 if config.order == 2 else 3e-2
    bound = config.bound("identity_residual", default)
    return [Check("identity_residual", report.residual, upper=bound)]


def run_cgo_decay(config: ExperimentConfig, out: Path) -> list[Check]:
    """
    Sweeps the CGO remainder norms over h and fits their decay rates. The
    Morse phase decays like h^{1/2} to h, the others at least like h.
    """
    phase = decay_phase(config.phase, config.point())
    grid = CGOGrid(size=config.grid)
    h = config.h_values()

    rows = decay_sweep(phase, h, config.p_norms, grid)
    write_table(out / "decay.csv", rows)

    p = 2.0 if 2 in config.p_norms else float(config.p_norms[0])

    def fit(quantity):
        selected = [
            row
            for row in rows
            if row["quantity"] == quantity and float(row["p"]) == p
        ]
        values = [row["norm"] for row in selected]
        resolved = [row["resolved"] for row in selected]
        result = decay_fit(values, h, resolved)

        write_loglog_svg(
            out / f"decay_{quantity}.svg",
            h,
            values,
            result,
            title=f"{phase.name}: {quantity}",
            ylabel=f"L^{p:g} norm",
        )
        return result

    remainder = fit("r")
    if config.phase == "morse":
        lower, upper = 0.5, 1.0
    else:
        lower, upper = 0.9, np.inf

    checks = [
        Check("r_slope", remainder.slope, lower, upper),
        Check(
            "r_r_squared",
            remainder.r_squared,
            lower=config.bound("r_squared", 0.98),
        ),
    ]

    if config.phase == "line":
        checks.append(Check("d_r_slope", fit("d_r").slope, lower=0.9))

    return checks


def _tensor_target(family, points):
    k1 = evaluate_jets(family, points).k1
    half_trace = 0.5 * (k1[..., 0, 0] + k1[..., 1, 1])
    values = k1 - half_trace[..., None, None] * np.eye(2)
    cutoff = boundary_flat_cutoff(points, FLAT_ORDER)
    return TensorField2(values * cutoff[..., None, None], trace_free=True)


def _recovery(config: ExperimentConfig) -> tuple[RecoveryReport, str]:
    family = config.make_family()
    z0 = config.point()
    grid = CGOGrid(size=config.grid)
    h = config.h_values()

    if config.target == "k1":
        report = recover_k_at_point(
            lambda points: _tensor_target(family, points), z0, h, grid
        )
        return report, "tensor"

    if config.target == "h2":

        def h2(points):
            cutoff = boundary_flat_cutoff(points, FLAT_ORDER)
            return evaluate_jets(family, points).h2 * cutoff

        report = recover_scalar_at_point(h2, z0, h, "second_order", grid)
        return report, "second_order"

    def conformal(points):
        bump = gaussian(points, z0, config.width)
        c = 1 + 0.5 * bump * boundary_flat_cutoff(points, FLAT_ORDER)
        return 1 - 1 / c

    report = recover_scalar_at_point(
        conformal, z0, h, "third_order", grid, family=family
    )
    return report, "third_order"


def run_recover(config: ExperimentConfig, out: Path) -> list[Check]:
    report, mode = _recovery(config)
    write_table(out / "recovery.csv", report.to_rows())

    errors = np.abs(report.estimates - report.true_value)
    write_loglog_svg(
        out / "recovery.svg",
        report.h,
        errors,
        title=f"{config.target} at z0 ({mode})",
        ylabel="|estimate - true|",
    )

    bound = config.bound("relative_error", 0.1)
    checks = [Check("relative_error", report.relative_error, upper=bound)]

    if mode == "third_order":
        order = report.extras["h_terms_order"]
        checks.append(Check("h_terms_order", order, lower=0.9))

    return checks


def _gauge_factor(points):
    radius2 = np.sum(np.asarray(points) ** 2, axis=-1)
    return 1 + 0.3 * (1 - radius2) ** 2


def _potential(points):
    return 1.5 + np.asarray(points)[..., 0]


def _check_gauge(config, out):
    mesh = build_mesh(unit_disk(), config.level)
    defect = gauge_defect(mesh, _gauge_factor, 2.0, config.n_modes)
    write_table(out / "gauge.csv", [{"level": config.level, "defect": defect}])

    bound = config.bound("gauge_defect", 1e-8)
    checks = [Check("gauge_defect", defect, upper=bound)]

    rows, sizes = [], []
    for level in range(config.level, config.level + 3):
        mesh = build_mesh(unit_disk(), level)
        value = diffeomorphism_defect(
            mesh, q=_potential, n_modes=DIFFEOMORPHISM_MODES
        )
        rows.append({"level": level, "defect": value})
        sizes.append(mesh.max_edge_length)

    write_table(out / "gauge_diffeomorphism.csv", rows)
    defects = [row["defect"] for row in rows]
    rate = decay_fit(defects, sizes).slope

    bound = config.bound("diffeomorphism_rate", 1.0)
    checks.append(Check("diffeomorphism_rate", rate, lower=bound))
    return checks


def _check_holo_trace(config, out):
    mesh = build_mesh(unit_disk(), config.level)
    dn = schrodinger_dn(mesh, None, 0.0, config.n_modes)
    rng = np.random.default_rng(config.seed)

    rows = []
    for idx in range(N_HOLOMORPHIC):
        coeffs = rng.normal(size=4) + 1j * rng.normal(size=4)
        f = trace_of(dn, np.polynomial.Polynomial(coeffs))
        rows.append(
            {
                "polynomial": idx,
                "holomorphic": holo_trace_test(f, dn),
                "conjugate": holo_trace_test(f.conj(), dn),
            }
        )

    write_table(out / "holo_trace.csv", rows)
    holomorphic = max(row["holomorphic"] for row in rows)
    conjugate = min(row["conjugate"] for row in rows)

    return [
        Check(
            "holomorphic_residual",
            holomorphic,
            upper=config.bound("holomorphic_residual", 5e-2),
        ),
        Check(
            "conjugate_residual",
            conjugate,
            lower=config.bound("conjugate_residual", 0.1),
        ),
    ]


def _check_carleman(config, out):
    fields = random_fields(config.seed, N_CARLEMAN_FIELDS)
    h = config.h_values()

    resolutions = (16 * (config.level + 1), 16 * (config.level + 2))
    reports = [
        carleman_verify("re_z", 1.0, fields, h, DiskQuadrature(res))
        for res in resolutions
    ]
    write_table(out / "carleman.csv", reports[0].to_rows())

    coarse, fine = (report.min_ratio for report in reports)
    change = abs(coarse - fine) / fine

    return [
        Check("carleman_min_ratio", coarse, lower=0.0, strict=True),
        Check(
            "carleman_stability",
            change,
            upper=config.bound("carleman_stability", 0.2),
        ),
    ]


def _wkb_potential(points):
    return gaussian(points, center=0.1 + 0.1j, width=WKB_WIDTH)


def _check_wkb(config, out):
    grid = CGOGrid(size=config.grid)
    phase = Phase((0, 1), name="line")
    h = config.h_values()

    rows, checks = [], []
    for n_terms, slope in WKB_SLOPES.items():
        result = wkb_ansatz(phase, _wkb_potential, n_terms, h, grid)
        rows.extend(
            {"n_terms": n_terms, "h": x, "residual": value}
            for x, value in zip(result.h, result.residuals)
        )
        checks.append(Check(f"wkb_slope_{n_terms}", result.slope, slope))

        write_loglog_svg(
            out / f"wkb_{n_terms}.svg",
            result.h,
            result.residuals,
            result.fit,
            title=f"WKB residual, {n_terms} terms",
            ylabel="residual",
        )

    write_table(out / "wkb.csv", rows)
    return checks


def _check_periods(config, out):
    inner = config.domain.inner_radius
    mesh = build_mesh(annulus(inner), config.level)
    loop = (1 + inner) / 2

    def re_z(x, y):
        return x

    f = log_trace(mesh, config.n_modes) + BoundaryFunction.from_callable(
        mesh.domain, re_z, config.n_modes
    )
    projected = project_to_conjugable(mesh, f, loop)
    twice = project_to_conjugable(mesh, projected, loop)

    (before,) = homology_periods(mesh, harmonic_extension(mesh, f), (loop,))
    (after,) = homology_periods(
        mesh, harmonic_extension(mesh, projected), (loop,)
    )
    idempotency = (twice - projected).norm() / projected.norm()

    rows = [
        {"quantity": "period", "value": abs(before)},
        {"quantity": "projected_period", "value": abs(after)},
        {"quantity": "idempotency", "value": idempotency},
    ]
    write_table(out / "periods.csv", rows)

    return [
        Check(
            "projected_period",
            abs(after),
            upper=config.bound("projected_period", 1e-3),
        ),
        Check(
            "idempotency",
            idempotency,
            upper=config.bound("idempotency", 1e-8),
        ),
    ]


CALDERON_CHECKS: dict[str, Callable] = {
    "gauge": _check_gauge,
    "holo-trace": _check_holo_trace,
    "carleman": _check_carleman,
    "wkb": _check_wkb,
    "periods": _check_periods,
}


def run_calderon_checks(config: ExperimentConfig, out: Path) -> list[Check]:
    return CALDERON_CHECKS[config.check](config, out)


RUNNERS: dict[str, Callable[[ExperimentConfig, Path], list[Check]]] = {
    "forward": run_forward,
    "dnmap": run_dnmap,
    "identities": run_identities,
    "cgo-decay": run_cgo_decay,
    "recover": run_recover,
    "calderon-checks": run_calderon_checks,
}


def run(config: ExperimentConfig, out: Optional[Path] = None) -> RunResult:
    """
    Validates the configuration, runs its subcommand and writes the
    artifacts: CSV tables, SVG plots, the echoed ``config.yaml`` and a
    ``summary.yaml`` with the pass/fail state of every asserted bound.

    Parameters
    ----------
    config
        The experiment configuration.
    out
        Output directory, by default ``config.out``.

    Returns
    -------
    RunResult
        The checks; its exit code is 0 iff all of them pass.
    """
    validate(config)

    out = Path(config.out if out is None else out)
    out.mkdir(parents=True, exist_ok=True)
    write_config(out / "config.yaml", config)

    logger.info(f"Running {config.subcommand} into {out}.")
    checks = RUNNERS[config.subcommand](config, out)
    result = RunResult(out, checks)

    summary = {
        "subcommand": config.subcommand,
        "passed": result.passed,
        "checks": [check.to_dict() for check in checks],
    }
    with open(out / "summary.yaml", "w") as fh:
        yaml.safe_dump(summary, fh, sort_keys=False)

    for check in checks:
        state = "passed" if check.passed else "FAILED"
        logger.info(f"{check.name} = {check.value:.4g}: {state}.")

    return result
