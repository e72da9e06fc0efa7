import hashlib

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cicqpt.errors import GridError
from cicqpt.scan import (
    ScanResult,
    detect_kinks,
    emit_csv,
    emit_svg,
    format_number,
    grid_step,
    susceptibility,
    uniform_grid,
)


def test_uniform_grid_hits_integers_exactly():
    g = uniform_grid(-2, 3, 0.01)
    assert g.size == 501 and -1.0 in g and 1.0 in g and g[-1] == 3.0


def test_uniform_grid_errors():
    with pytest.raises(GridError):
        uniform_grid(1, 1, 0.1)
    with pytest.raises(GridError):
        uniform_grid(0, 1, 0.3)
    with pytest.raises(GridError):
        uniform_grid(0, 1, -0.1)
    with pytest.raises(GridError):
        grid_step([0.0, 0.1, 0.3])


def test_susceptibility_linear_and_quadratic():
    x = uniform_grid(0, 1, 0.1)
    assert np.allclose(susceptibility(x, 2 * x), 2, atol=1e-12)
    s = susceptibility(x, x**2)
    assert np.allclose(s[1:-1], 2 * x[1:-1], atol=1e-12)
    # 3-point one-sided formulas are exact for quadratics too
    assert s[0] == pytest.approx(0.0, abs=1e-12) and s[-1] == pytest.approx(2.0, abs=1e-12)


def test_susceptibility_needs_five_points():
    with pytest.raises(GridError):
        susceptibility([0, 1, 2, 3], [0, 1, 2, 3])


def test_interior_susceptibility_is_central_difference():
    x = uniform_grid(0, 2, 0.05)
    v = np.exp(np.sin(3 * x))
    s = susceptibility(x, v)
    h = x[1] - x[0]
    assert np.max(np.abs(s[1:-1] - (v[2:] - v[:-2]) / (2 * h))) < 1e-12


@pytest.mark.parametrize("fn", [np.sin, np.cos, np.exp, lambda x: 3 * x**3 - x + 1, lambda x: x**5])
def test_smooth_curves_have_no_kinks(fn):
    x = uniform_grid(0, 1, 0.01)
    assert detect_kinks(x, fn(x)) == []


def test_constructed_kink():
    x = uniform_grid(0, 1, 0.01)
    pts = detect_kinks(x, np.maximum(np.abs(x), 0.5))
    assert len(pts) == 1 and abs(pts[0].location - 0.5) <= 0.01
    assert pts[0].label == "kink"


@given(st.floats(min_value=0.2, max_value=0.8), st.floats(min_value=0.2, max_value=3.0))
@settings(max_examples=60, deadline=None)
def test_off_grid_kink_located_within_a_step(x0, slope):
    x = uniform_grid(0, 1, 0.01)
    v = np.sin(x) + slope * np.maximum(x - x0, 0)
    pts = detect_kinks(x, v)
    assert len(pts) == 1
    assert abs(pts[0].location - x0) <= 0.01


def test_jump_labelled_discontinuity_and_scores_sorted():
    x = uniform_grid(0, 2, 0.01)
    v = np.where(x < 0.503, 1.0, 0.5 * x) + 0.3 * np.maximum(x - 1.5, 0)
    pts = detect_kinks(x, v)
    assert [p.label for p in pts] == ["discontinuity", "kink"]
    assert pts[0].score >= pts[1].score
    assert abs(pts[0].location - 0.503) <= 0.01 and abs(pts[1].location - 1.5) <= 0.01


def test_all_zero_curve():
    x = uniform_grid(0, 1, 0.1)
    assert detect_kinks(x, np.zeros_like(x)) == []


def test_kinks_need_nine_points():
    with pytest.raises(GridError):
        detect_kinks(np.arange(8.0), np.arange(8.0))


def test_format_number():
    assert format_number(0.1 + 0.2) == "0.3"
    assert format_number(0.0) == "0"
    assert format_number(-1.23456789012345e-7) == "-1.23456789012e-07"
    assert format_number("Az") == "Az"


def _result(n=11):
    x = uniform_grid(0, 1, 1 / (n - 1))
    return ScanResult.from_values(x, np.maximum(x, 0.5))


def test_csv_layout(tmp_path):
    x = uniform_grid(0, 0.4, 0.1)
    res = ScanResult(x, x**2, susceptibility(x, x**2), extra_columns={"aux": -x}, trailing_columns={"tag": ["p"] * 5})
    path = tmp_path / "out.csv"
    emit_csv(res, path)
    raw = path.read_bytes()
    assert b"\r" not in raw
    lines = raw.decode().splitlines()
    assert lines[0] == "parameter,aux,cic,susceptibility,tag"
    assert len(lines) == 6
    assert lines[2].split(",")[:3] == ["0.1", "-0.1", "0.01"]


def test_three_point_csv_has_four_lines(tmp_path):
    res = ScanResult(np.array([0.0, 0.5, 1.0]), np.zeros(3), np.zeros(3))
    emit_csv(res, tmp_path / "s.csv")
    assert len((tmp_path / "s.csv").read_text().splitlines()) == 4


def test_csv_is_deterministic(tmp_path):
    emit_csv(_result(), tmp_path / "a.csv")
    emit_csv(_result(), tmp_path / "b.csv")
    digest = lambda p: hashlib.sha256(p.read_bytes()).hexdigest()  # noqa: E731
    assert digest(tmp_path / "a.csv") == digest(tmp_path / "b.csv")


def test_csv_io_error_names_path(tmp_path):
    with pytest.raises(OSError, match="missing"):
        emit_csv(_result(), tmp_path / "missing" / "x.csv")


def test_svg_marks_single_kink(tmp_path):
    path = tmp_path / "plot.svg"
    emit_svg(_result(101), path, title="demo")
    text = path.read_text()
    assert text.startswith("<svg") and text.rstrip().endswith("</svg>")
    assert text.count('class="critical"') == 1
    assert "stroke-dasharray" in text and "<polyline" in text
    assert "href" not in text  # self-contained


def test_svg_rejects_empty(tmp_path):
    with pytest.raises(ValueError):
        emit_svg(ScanResult(np.array([]), np.array([]), np.array([])), tmp_path / "e.svg")
