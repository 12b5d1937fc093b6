import numpy as np
from numpy.testing import assert_, assert_equal

from fermi_forge.cgo import decay_fit
from fermi_forge.cli import loglog_svg, write_loglog_svg


def test_markers_and_fitted_line():
    h = np.geomspace(0.05, 0.5, 6)
    values = 2 * h**1.5
    svg = loglog_svg(h, values, decay_fit(values, h), title="r & d_r")

    assert_(svg.startswith("<svg"))
    assert_(svg.rstrip().endswith("</svg>"))
    assert_equal(svg.count("<circle"), 6)
    assert_equal(svg.count("<line"), 1)
    assert_("slope 1.500" in svg)
    assert_("r &amp; d_r" in svg)


def test_non_positive_values_are_skipped():
    h = np.array([0.1, 0.2, 0.3, 0.4])
    values = np.array([1.0, 0.0, np.nan, 2.0])

    assert_equal(loglog_svg(h, values).count("<circle"), 2)
    assert_equal(loglog_svg(h, np.zeros(4)).count("<circle"), 0)


def test_write_loglog_svg(tmp_path):
    path = tmp_path / "plot.svg"
    h = np.array([0.1, 1.0])
    write_loglog_svg(path, h, h**2, ylabel="norm")

    text = path.read_text()
    assert_(text.startswith("<svg"))
    assert_(">norm<" in text)
