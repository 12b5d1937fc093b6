import numpy as np
import pytest
from numpy.testing import assert_, assert_equal, assert_raises

from fermi_forge.cgo import (
    DECAY_PHASES,
    CGOGrid,
    decay_fit,
    decay_phase,
    decay_sweep,
)


def test_decay_phases():
    for name in DECAY_PHASES:
        assert_(decay_phase(name).name == name)

    assert_(decay_phase("morse").antiholomorphic)
    assert_equal(decay_phase("line").critical_points(), [])

    with assert_raises(ValueError):
        decay_phase("spiral")


def test_rows_and_unresolved_points():
    grid = CGOGrid(size=64)
    rows = decay_sweep(decay_phase("morse"), [0.05, 1.0], (2, 4), grid)

    assert_equal(len(rows), 2 * (2 * 3 + 1))
    assert_equal(
        set(rows[0]), {"h", "phase", "p", "quantity", "norm", "resolved"}
    )

    unresolved = [row for row in rows if row["h"] == 0.05]
    assert_(all(not row["resolved"] for row in unresolved))
    assert_(all(np.isnan(row["norm"]) for row in unresolved))

    resolved = [row for row in rows if row["h"] == 1.0]
    assert_(all(row["resolved"] for row in resolved))
    assert_(all(np.isfinite(row["norm"]) for row in resolved))


@pytest.mark.filterwarnings("ignore:The values of h")
def test_remainder_decays_for_critical_point_free_phase():
    grid = CGOGrid(size=256)
    h_list = np.geomspace(0.04, 0.2, 5)
    rows = decay_sweep(decay_phase("line"), h_list, (2,), grid)

    norms = [row["norm"] for row in rows if row["quantity"] == "r"]
    fit = decay_fit(norms, h_list)
    assert_(fit.slope > 0.7, msg=f"slope {fit.slope:.3f}")
