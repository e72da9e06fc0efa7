import numpy as np
import pytest

from cicqpt.cic import cic_forward
from cicqpt.kitaev import (
    KitaevCouplings,
    LinkType,
    Phase,
    bz_integrand,
    cic_link,
    dirac_points,
    line_point,
    line_scan,
    link_bloch_state,
    link_correlator,
    link_pair_state,
    symmetric_line,
    parse_line,
    phase_region,
)

# nested scipy quad over the full zone at 1e-11, independent of the adaptive rule
REFERENCE = {
    ((1 / 3, 1 / 3, 1 / 3), "z"): 0.5248657458506312,
    ((0.25, 0.25, 0.5), "z"): 0.8420525790463074,
    ((0.25, 0.25, 0.5), "x"): 0.29090122840982585,
    ((0.1, 0.1, 0.8), "z"): 0.9921172991236163,
    ((0.4, 0.4, 0.2), "z"): 0.3162825486790597,
    ((0.4, 0.4, 0.2), "x"): 0.602019011598315,
}


@pytest.mark.parametrize("key", sorted(REFERENCE))
def test_correlator_matches_reference(key):
    j, link = key
    assert link_correlator(KitaevCouplings(*j), link, tol=1e-8) == pytest.approx(REFERENCE[key], abs=1e-8)


def test_trivial_and_cancelling_points():
    assert abs(cic_link(KitaevCouplings(0, 0, 1), "z", tol=1e-8) - 1) < 1e-8
    assert abs(cic_link(KitaevCouplings(0.5, 0.5, 0), "z", tol=1e-6)) < 1e-6


def test_symmetric_point_links_agree():
    j = KitaevCouplings(1 / 3, 1 / 3, 1 / 3)
    vals = [link_correlator(j, link, tol=1e-7) for link in "xyz"]
    assert max(vals) - min(vals) < 2e-6


def test_permutation_symmetry():
    j = KitaevCouplings(0.2, 0.35, 0.45)
    assert link_correlator(j, "x") == pytest.approx(link_correlator(KitaevCouplings(0.45, 0.35, 0.2), "z"), abs=2e-6)
    assert link_correlator(j, "y") == pytest.approx(link_correlator(KitaevCouplings(0.2, 0.45, 0.35), "z"), abs=2e-6)
    # swapping Jx and Jy leaves the z link unchanged
    assert link_correlator(j, "z") == pytest.approx(link_correlator(KitaevCouplings(0.35, 0.2, 0.45), "z"), abs=2e-6)


def test_link_state_consistency_with_general_optimizer():
    j = KitaevCouplings(0.25, 0.25, 0.5)
    c = link_correlator(j, "z")
    rho = link_pair_state(c, "z")
    assert cic_forward(rho).value == pytest.approx(cic_link(j, "z"), abs=1e-5)
    rep = link_bloch_state(c, "x")
    assert rep.T[0, 0] == c and np.count_nonzero(rep.T) == 1


def test_integrand_bounded_and_defined_at_zeros():
    j = KitaevCouplings(1 / 3, 1 / 3, 1 / 3)
    w = np.linspace(-np.pi, np.pi, 101)
    vals = bz_integrand(j, *np.meshgrid(w, w))
    assert np.all(np.abs(vals) <= 1.0 + 1e-15)
    assert bz_integrand(KitaevCouplings(0, 0, 0), 0.3, 0.1) == 0.0


@pytest.mark.parametrize("j", [(1 / 3, 1 / 3, 1 / 3), (0.2, 0.35, 0.45), (0.25, 0.25, 0.5), (-0.3, 0.4, 0.5)])
def test_dirac_points_are_zeros(j):
    j = KitaevCouplings(*j)
    pts = dirac_points(j)
    assert pts
    for wx, wy in pts:
        assert abs(j.jz + j.jx * np.exp(1j * wx) + j.jy * np.exp(1j * wy)) < 1e-12


def test_gapped_phase_returns_gap_minimum():
    j = KitaevCouplings(0.1, 0.1, 0.8)
    (wx, wy), = dirac_points(j)
    gap = abs(j.jz + j.jx * np.exp(1j * wx) + j.jy * np.exp(1j * wy))
    assert gap == pytest.approx(0.6)


def test_phase_regions():
    assert phase_region(KitaevCouplings(1 / 3, 1 / 3, 1 / 3)) is Phase.GAPLESS_B
    assert phase_region(KitaevCouplings(0.1, 0.1, 0.8)) is Phase.GAPPED_AZ
    assert phase_region(KitaevCouplings(0.7, 0.2, 0.1)) is Phase.GAPPED_AX
    assert phase_region(KitaevCouplings(0.25, 0.25, 0.5)) is Phase.GAPLESS_B


def test_lines_and_parsing():
    assert symmetric_line(0.4) == KitaevCouplings(0.3, 0.3, 0.4)
    assert line_point(0.5, 0.2).jx == pytest.approx(0.1)
    assert parse_line("jx = jy = (1 - jz)/2") == 0.5
    assert parse_line("ratio=0.25") == 0.25
    with pytest.raises(ValueError):
        parse_line("jx=2jy")
    with pytest.raises(ValueError):
        parse_line("ratio=1.5")
    assert LinkType.parse("X") is LinkType.X


def test_tolerance_bounds():
    with pytest.raises(ValueError):
        link_correlator(KitaevCouplings(0, 0, 1), tol=1e-14)
    with pytest.raises(ValueError):
        KitaevCouplings(np.nan, 0, 1)


def test_gapped_interior_scan_is_smooth():
    res = line_scan(0.6, 0.9, 0.002, "z")
    assert res.critical_points == []
    assert set(res.trailing_columns["phase"]) == {"Az"}


def test_scan_finds_transition_on_narrow_window():
    res = line_scan(0.3, 0.7, 0.002, "x", threads=2)
    assert len(res.critical_points) == 1
    assert abs(res.critical_points[0].location - 0.5) <= 0.002
    assert list(res.columns()) == ["jz", "jx", "jy", "correlator", "cic", "susceptibility", "phase"]


def test_scan_range_validation():
    with pytest.raises(ValueError):
        line_scan(0.5, 1.2, 0.01)
