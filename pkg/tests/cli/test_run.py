import numpy as np
import pytest
from numpy.testing import assert_, assert_equal, assert_raises

from fermi_forge.cli import (
    Check,
    DomainConfig,
    ExperimentConfig,
    FamilyConfig,
    RunResult,
    SweepConfig,
    load_config,
    run,
)
from fermi_forge.exceptions import ConfigError
from fermi_forge.formats import read_table


def test_forward_artifacts(tmp_path):
    config = ExperimentConfig(subcommand="forward", level=1)
    result = run(config, tmp_path)

    for name in (
        "config.yaml",
        "summary.yaml",
        "mesh.txt",
        "graph.csv",
        "newton.csv",
        "forward.csv",
    ):
        assert_((tmp_path / name).exists(), msg=name)

    newton = result.checks[0]
    assert_equal(newton.name, "newton_residual")
    assert_(newton.passed)
    assert_(result.exit_code in (0, 1))

    echoed = load_config(tmp_path / "config.yaml")
    assert_equal(echoed, config)


def test_identities_are_reproducible(tmp_path):
    config = ExperimentConfig(subcommand="identities", level=1)
    run(config, tmp_path / "first")
    run(config, tmp_path / "second")

    first = (tmp_path / "first" / "identity_2.csv").read_bytes()
    second = (tmp_path / "second" / "identity_2.csv").read_bytes()
    assert_equal(first, second)


def test_invalid_config_writes_nothing(tmp_path):
    config = ExperimentConfig(h_sweep=SweepConfig(0.5, 0.1, 4))

    with assert_raises(ConfigError):
        run(config, tmp_path / "out")

    assert_(not (tmp_path / "out").exists())


def test_gauge_check_passes(tmp_path):
    config = ExperimentConfig(subcommand="calderon-checks", level=1)
    result = run(config, tmp_path)

    assert_equal(result.exit_code, 0)
    rows = read_table(tmp_path / "gauge.csv")
    assert_(rows[0]["defect"] < 1e-8)

    rows = read_table(tmp_path / "gauge_diffeomorphism.csv")
    assert_equal([row["level"] for row in rows], [1, 2, 3])
    assert_(rows[-1]["defect"] < rows[0]["defect"])


def test_periods_check_passes(tmp_path):
    config = ExperimentConfig(
        subcommand="calderon-checks",
        check="periods",
        domain=DomainConfig("annulus", 0.5),
        level=3,
        n_modes=16,
    )
    result = run(config, tmp_path)

    assert_equal(result.exit_code, 0)
    rows = read_table(tmp_path / "periods.csv")
    expected = ["period", "projected_period", "idempotency"]
    assert_equal([row["quantity"] for row in rows], expected)


def test_cgo_decay_artifacts(tmp_path):
    config = ExperimentConfig(
        subcommand="cgo-decay",
        grid=64,
        h_sweep=SweepConfig(0.1, 1.0, 5),
    )
    result = run(config, tmp_path)

    for name in ("decay.csv", "decay_r.svg", "decay_d_r.svg"):
        assert_((tmp_path / name).exists(), msg=name)

    names = [check.name for check in result.checks]
    assert_equal(names, ["r_slope", "r_r_squared", "d_r_slope"])
    assert_(result.exit_code in (0, 1))


def test_recover_artifacts(tmp_path):
    config = ExperimentConfig(
        subcommand="recover",
        target="h2",
        family=FamilyConfig("conformal"),
        grid=64,
        h_sweep=SweepConfig(0.15, 0.3, 3),
    )
    result = run(config, tmp_path)

    assert_((tmp_path / "recovery.csv").exists())
    assert_((tmp_path / "recovery.svg").exists())
    assert_equal([check.name for check in result.checks], ["relative_error"])


@pytest.mark.parametrize(
    "check, passed",
    [
        (Check("a", 0.5, upper=1.0), True),
        (Check("a", 1.0, upper=1.0), True),
        (Check("a", 1.0, upper=1.0, strict=True), False),
        (Check("a", 0.0, lower=0.0, strict=True), False),
        (Check("a", np.nan, upper=1.0), False),
        (Check("a", np.nan), False),
    ],
)
def test_check_bounds(check: Check, passed: bool):
    assert_equal(check.passed, passed)


def test_run_result_exit_code(tmp_path):
    good = Check("a", 0.0, upper=1.0)
    bad = Check("b", 2.0, upper=1.0)

    assert_equal(RunResult(tmp_path, [good]).exit_code, 0)
    assert_equal(RunResult(tmp_path, [good, bad]).exit_code, 1)
    assert_equal(RunResult(tmp_path, []).exit_code, 0)
