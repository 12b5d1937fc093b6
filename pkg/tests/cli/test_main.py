import shutil

import pytest
from numpy.testing import assert_, assert_equal, assert_raises

from fermi_forge.cli.main import (
    EXIT_FAILED,
    EXIT_INVALID,
    EXIT_PASS,
    EXIT_RESOURCE,
    _params,
    build_parser,
    exit_code,
    main,
    make_config,
)
from fermi_forge.exceptions import (
    ConfigError,
    GoldenMismatchError,
    NewtonDivergenceError,
    ResourceError,
    UnderResolvedOscillationError,
)
from fermi_forge.formats import write_table


def test_gauge_check_passes(tmp_path):
    argv = ["calderon-checks", "--level", "1", "--out", str(tmp_path)]
    assert_equal(main(argv), EXIT_PASS)
    assert_((tmp_path / "summary.yaml").exists())


def test_resource_cap_exit_code(tmp_path):
    argv = ["forward", "--level", "99", "--out", str(tmp_path / "out")]
    assert_equal(main(argv), EXIT_RESOURCE)
    assert_(not (tmp_path / "out").exists())


def test_invalid_sweep_exit_code(tmp_path):
    argv = ["forward", "--h-min", "0.5", "--h-max", "0.1"]
    assert_equal(main(argv + ["--out", str(tmp_path)]), EXIT_INVALID)


def test_flags_override_config_file(tmp_path):
    path = tmp_path / "config.yaml"
    path.write_text("level: 3\nseed: 4\nfamily:\n  name: shear\n")

    argv = ["identities", "--config", str(path), "--level", "1"]
    argv += ["--param", "tau=0.2", "--data", "fourier:n=1"]
    config = make_config(build_parser().parse_args(argv))

    assert_equal(config.subcommand, "identities")
    assert_equal(config.level, 1)
    assert_equal(config.seed, 4)
    assert_equal(config.family.name, "shear")
    assert_equal(config.family.params, {"tau": 0.2})
    assert_equal(config.data, ["fourier:n=1"])


def test_golden_subcommand(tmp_path):
    out, golden = tmp_path / "out", tmp_path / "golden"
    main(["calderon-checks", "--level", "1", "--out", str(out)])
    golden.mkdir()
    shutil.copy(out / "gauge.csv", golden / "gauge.csv")

    argv = ["golden", str(golden), "--out", str(out)]
    with pytest.warns(UserWarning):
        assert_equal(main(argv), EXIT_PASS)

    write_table(golden / "gauge.csv", [{"level": 1, "defect": 1.0}])
    with pytest.warns(UserWarning):
        assert_equal(main(argv), EXIT_FAILED)

    missing = ["golden", str(tmp_path / "nowhere"), "--out", str(out)]
    assert_equal(main(missing), EXIT_INVALID)


def test_params():
    assert_(_params([]) is None)
    assert_equal(_params(["a=1", "b=x"]), {"a": 1.0, "b": "x"})

    with assert_raises(ValueError):
        _params(["a"])


@pytest.mark.parametrize(
    "err, code",
    [
        (ResourceError("big"), EXIT_RESOURCE),
        (UnderResolvedOscillationError("h"), EXIT_RESOURCE),
        (ConfigError("level"), EXIT_INVALID),
        (FileNotFoundError("path"), EXIT_INVALID),
        (NewtonDivergenceError("stuck"), EXIT_FAILED),
        (GoldenMismatchError("cell"), EXIT_FAILED),
    ],
)
def test_exit_code(err: Exception, code: int):
    assert_equal(exit_code(err), code)
