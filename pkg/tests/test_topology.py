import numpy as np
import pytest

from bloch_braids import (DimerParams, ModelSpec, bloch_matrix, bloch_matrix_z,
                          dimer_ep_lines, dimer_ep_zplane, discriminant, eigenvalues,
                          ep_zplane_numeric, find_eps_k, gamma_axis_references,
                          most_degenerate_point, phase_diagram, total_braid_index,
                          winding_number, zone_boundary_degeneracy_residual)
from bloch_braids.errors import DegenerateModel, ReferenceOnBand, UnsupportedDegree
from bloch_braids.models import characteristic_coefficients
from conftest import PI4


# -- discriminant ---------------------------------------------------------------

def test_discriminant_quadratic():
    assert discriminant([1.0, 0.0, 0.75]) == pytest.approx(-3.0)
    assert discriminant([1.0, -2.0, 1.0]) == pytest.approx(0.0)


def test_discriminant_cubic_known():
    # (E-1)(E-2)(E-3) = E^3 - 6E^2 + 11E - 6: disc = prod of squared gaps
    assert discriminant([1.0, -6.0, 11.0, -6.0]) == pytest.approx(4.0)


def test_discriminant_dimer_on_ep_line():
    spec = ModelSpec.dimer(1.0, 1.5, 0.3, 0.5, 1)
    c = characteristic_coefficients(bloch_matrix(spec, np.pi))
    assert abs(discriminant(c)) < 1e-10


def test_discriminant_rejects_other_degrees():
    with pytest.raises(UnsupportedDegree):
        discriminant([1.0, 0.0, 0.0, 0.0, 1.0])


# -- dimer exceptional lines -------------------------------------------------------

def test_dimer_ep_lines_values():
    lines = dimer_ep_lines(1.0, 1.5)
    gammas = sorted(g for g, _ in lines)
    assert gammas == pytest.approx([-2.5, -0.5, 0.5, 2.5])
    by_gamma = {round(g, 6): k for g, k in lines}
    assert by_gamma[0.5] == pytest.approx(np.pi)
    assert by_gamma[2.5] == pytest.approx(0.0)


def test_dimer_ep_lines_equal_hoppings():
    lines = dimer_ep_lines(1.0, 1.0, m=2)
    assert any(abs(g) < 1e-15 and k == pytest.approx(np.pi / 2) for g, k in lines)


def test_dimer_ep_lines_zero_beta():
    gammas = sorted(abs(g) for g, _ in dimer_ep_lines(1.0, 0.0))
    assert gammas == pytest.approx([1.0, 1.0, 1.0, 1.0])


def test_dimer_bands_vanish_on_ep_lines():
    from bloch_braids import dimer_bands_analytic
    for gamma, k in dimer_ep_lines(1.0, 1.5):
        p = DimerParams(1.0, 1.5, 0.3, gamma, 1)
        e1, e2 = dimer_bands_analytic(p, k)
        assert abs(e1) < 1e-8 and abs(e2) < 1e-8


# -- z-plane formula ----------------------------------------------------------------

def test_zplane_m1_location():
    p = DimerParams(1.0, 1.5, 0.3, 1.0, 1)
    zs = dimer_ep_zplane(p)
    assert len(zs) == 1
    np.testing.assert_allclose(zs[0], -0.75, atol=1e-12)


def test_zplane_m2_locations():
    p = DimerParams(1.0, 1.5, 0.3, 1.0, 2)
    zs = sorted(dimer_ep_zplane(p), key=lambda z: z.imag)
    assert len(zs) == 2
    np.testing.assert_allclose(zs[0], -1j * np.sqrt(0.75), atol=1e-12)
    np.testing.assert_allclose(zs[1], 1j * np.sqrt(0.75), atol=1e-12)


def test_zplane_m3_locations():
    p = DimerParams(1.0, 1.5, 0.3, 1.0, 3)
    zs = dimer_ep_zplane(p)
    assert len(zs) == 3
    radius = 0.75 ** (1.0 / 3.0)
    angles = sorted(np.angle(z) % (2 * np.pi) for z in zs)
    np.testing.assert_allclose([abs(z) for z in zs], [radius] * 3, atol=1e-12)
    np.testing.assert_allclose(angles, [np.pi / 3, np.pi, 5 * np.pi / 3], atol=1e-12)


def test_zplane_points_satisfy_continued_condition():
    rng = np.random.default_rng(83)
    for _ in range(50):
        p = DimerParams(rng.uniform(0.2, 2.0), rng.uniform(0.2, 2.0),
                        rng.uniform(-1.0, 1.0), rng.uniform(-2.0, 2.0),
                        int(rng.integers(1, 4)))
        for z in dimer_ep_zplane(p):
            assert zone_boundary_degeneracy_residual(p, z) < 1e-10


def test_zplane_degenerate_model():
    with pytest.raises(DegenerateModel):
        dimer_ep_zplane(DimerParams(0.0, 1.5, 0.3, 1.0, 1))


def test_zplane_numeric_zeros_have_coalescing_pairs():
    spec = ModelSpec.dimer(1.0, 1.5, 0.3, 1.0, 1)
    eps = ep_zplane_numeric(spec)
    assert len(eps) == 4
    for ep in eps:
        ev = eigenvalues(bloch_matrix_z(spec, ep.location))
        gaps = sorted(abs(ev[i] - ev[j]) for i in range(2) for j in range(i + 1, 2))
        assert gaps[0] < 1e-6 * (1 + np.abs(ev).max())


def test_zplane_numeric_trimer_count_and_symmetry(fig3_trimer):
    # beta -> -beta flips the sign of every branch point location
    eps_a = ep_zplane_numeric(fig3_trimer(-1.2, 0.7))
    eps_b = ep_zplane_numeric(fig3_trimer(1.2, 0.7))
    za = sorted(np.round([-ep.location for ep in eps_a], 8).tolist(), key=lambda z: (z.real, z.imag))
    zb = sorted(np.round([ep.location for ep in eps_b], 8).tolist(), key=lambda z: (z.real, z.imag))
    np.testing.assert_allclose(za, zb, atol=1e-6)


# -- momentum-space search ------------------------------------------------------------

def test_find_eps_on_line(fig1_dimer):
    eps = find_eps_k(fig1_dimer(0.5))
    assert len(eps) == 1
    assert abs(eps[0].k - np.pi) < 1e-6
    assert abs(eps[0].energy) < 1e-8
    assert eps[0].bands == (1, 2)


def test_find_eps_trivial_region(fig1_dimer):
    assert find_eps_k(fig1_dimer(0.2)) == []


def test_find_eps_outer_line(fig1_dimer):
    eps = find_eps_k(fig1_dimer(2.5))
    ks = sorted(ep.k if ep.k < np.pi else ep.k - 2 * np.pi for ep in eps)
    assert any(abs(k) < 1e-6 for k in ks)


def test_find_eps_trimer_boundary(fig3_trimer):
    # locate the exact boundary gamma by bisecting the (real) discriminant at
    # the coalescence momentum, then ask the search for the point
    def disc_at(gamma, k):
        spec = fig3_trimer(0.8, gamma)
        return discriminant(characteristic_coefficients(bloch_matrix(spec, k))).real

    lo, hi = 0.01, 0.2
    assert disc_at(lo, 0.0) * disc_at(hi, 0.0) < 0
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if disc_at(mid, 0.0) * disc_at(lo, 0.0) > 0:
            lo = mid
        else:
            hi = mid
    spec = fig3_trimer(0.8, 0.5 * (lo + hi))
    eps = find_eps_k(spec)
    assert len(eps) >= 1
    ep = min(eps, key=lambda e: abs(e.k))
    assert abs(ep.k) < 1e-3 or abs(ep.k - 2 * np.pi) < 1e-3
    assert abs(ep.energy - (-0.7317)) < 1e-3
    assert ep.bands == (1, 2)


def test_most_degenerate_point_near_boundary(fig3_trimer):
    ep = most_degenerate_point(fig3_trimer(0.8, 0.0959))
    assert abs(ep.energy.real - (-0.73)) < 0.02
    assert ep.bands == (1, 2)


def test_ep_onset_matches_analytic_lines():
    # for random hoppings, the gamma at which the zone-edge (zone-centre)
    # discriminant dips to zero matches beta -/+ alpha; the search op then
    # certifies the point as an exceptional point
    from bloch_braids.topology import _golden_min

    rng = np.random.default_rng(97)
    for trial in range(100):
        alpha = rng.uniform(0.2, 2.0)
        beta = rng.uniform(0.2, 2.0)
        delta = rng.uniform(0.1, 1.0)
        m = int(rng.integers(1, 4))
        for k_star, target in ((np.pi / m, abs(beta - alpha)), (0.0, beta + alpha)):
            def disc_mag(gamma):
                spec = ModelSpec.dimer(alpha, beta, delta, gamma, m)
                c = characteristic_coefficients(bloch_matrix(spec, k_star))
                return abs(discriminant(c))

            g_star = _golden_min(disc_mag, max(0.0, target - 0.3), target + 0.3)
            assert abs(g_star - target) < 1e-6
            if trial < 10:
                eps = find_eps_k(ModelSpec.dimer(alpha, beta, delta, g_star, m))
                assert any(abs(ep.k - k_star) < 1e-3 or abs(ep.k - k_star - 2 * np.pi / m) < 1e-3
                           or abs(abs(ep.k - k_star) - 2 * np.pi) < 1e-3 for ep in eps)


# -- winding numbers --------------------------------------------------------------------

def test_winding_dimer_generator(fig1_dimer):
    assert winding_number(fig1_dimer(1.0), 0.0).nu == 1


def test_winding_dimer_inverse(fig1_dimer):
    assert winding_number(fig1_dimer(-1.0), 0.0).nu == -1


def test_winding_trefoil(fig1_dimer):
    assert winding_number(fig1_dimer(1.0, m=3), 0.0).nu == 3


def test_winding_trivial(fig1_dimer):
    assert winding_number(fig1_dimer(0.2), 0.0).nu == 0


def test_winding_residual_and_grid_stability(fig1_dimer):
    spec = fig1_dimer(1.0)
    for samples in (512, 1024, 2048):
        result = winding_number(spec, 0.0, samples)
        assert result.nu == 1
        assert result.residual < 1e-6


def test_winding_sign_rule(fig1_dimer):
    rng = np.random.default_rng(89)
    for gamma in rng.uniform(0.6, 2.4, 8):
        plus = winding_number(fig1_dimer(gamma), 0.0).nu
        minus = winding_number(fig1_dimer(-gamma), 0.0).nu
        assert plus == -minus


def test_winding_m_scaling(fig1_dimer):
    base = winding_number(fig1_dimer(1.0, m=1), 0.0).nu
    for m in (2, 3):
        assert winding_number(fig1_dimer(1.0, m=m), 0.0).nu == m * base


def test_winding_reference_on_band(fig1_dimer):
    spec = fig1_dimer(1.0)
    from bloch_braids import dimer_bands_analytic
    e_on_band = dimer_bands_analytic(spec.params, 0.7)[0]
    with pytest.raises(ReferenceOnBand):
        winding_number(spec, complex(e_on_band))


# -- reference energies and total index ---------------------------------------------------

def test_gamma_axis_references_trimer(fig3_trimer):
    refs = gamma_axis_references(fig3_trimer(0.8, 0.2))
    assert len(refs) == 1
    g_star, energy, pair = refs[0]
    assert 0 < g_star < 0.2
    assert abs(energy.real - (-0.73)) < 0.02
    assert pair == (1, 2)
    refs = gamma_axis_references(fig3_trimer(1.0, 0.1))
    assert refs == []


def test_reference_energies_dedupe_double_crossed_line(fig3_trimer):
    # at small beta the gamma ray crosses the same (1,2) exceptional line
    # twice; the pair contributes one reference, taken at the nearer crossing
    from bloch_braids import reference_energies
    refs = gamma_axis_references(fig3_trimer(0.2, 0.8))
    assert len(refs) == 2
    assert refs[0][2] == refs[1][2] == (1, 2)
    unique = reference_energies(fig3_trimer(0.2, 0.8))
    assert len(unique) == 1
    assert abs(unique[0] - refs[-1][1]) < 1e-9


def test_total_braid_index_dimer(fig1_dimer):
    index = total_braid_index(fig1_dimer(1.0))
    assert index.nu == 1
    assert index.references == (0j,)


def test_total_braid_index_trimer_pairs(fig3_trimer):
    for beta in (-1.2, 1.2):
        index = total_braid_index(fig3_trimer(beta, 0.7))
        assert index.nu == 2
        assert len(index.references) == 2
        assert all(p.nu == 1 for p in index.parts)


def test_total_braid_index_trivial(fig3_trimer):
    assert total_braid_index(fig3_trimer(1.0, 0.1)).nu == 0


def test_total_braid_index_rejects_generic():
    spec = ModelSpec.generic([(0, np.eye(2))])
    with pytest.raises(ValueError):
        total_braid_index(spec)


# -- phase diagrams -------------------------------------------------------------------------

def test_phase_diagram_dimer_regions(fig1_dimer):
    pd = phase_diagram(fig1_dimer(0.0), ("beta", 1.2, 1.8, 7), ("gamma", -1.2, 1.2, 25),
                       samples=512)
    cell = pd.cell_at(1.5, 1.0)
    assert (cell.word, cell.nu) == ("t1", 1)
    cell = pd.cell_at(1.5, -0.2)
    assert (cell.word, cell.nu) == ("e", 0)
    cell = pd.cell_at(1.5, -1.0)
    assert (cell.word, cell.nu) == ("T1", -1)


def test_phase_diagram_labels_change_across_line(fig1_dimer):
    # crossing gamma = beta - 1 at beta = 1.5 flips e <-> t1
    pd = phase_diagram(fig1_dimer(0.0), ("beta", 1.5, 1.6, 2), ("gamma", 0.3, 0.7, 17),
                       samples=512)
    col = [pd.cell_at(1.5, g) for g in np.linspace(0.3, 0.7, 17)]
    words = [c.word for c in col]
    assert words[0] == "e" and words[-1] == "t1"
    changes = sum(1 for a, b in zip(words, words[1:]) if a != b)
    assert changes <= 2  # single boundary, possibly with one DEGENERATE cell on it


def test_phase_diagram_trimer_example_cells(fig3_trimer):
    pd = phase_diagram(fig3_trimer(1.0, 0.1), ("beta", -1.2, 1.6, 8), ("gamma", 0.1, 0.7, 4),
                       samples=512)
    assert pd.cell_at(1.0, 0.1).word == "e"
    assert pd.cell_at(0.8, 0.2).word == "t1"
    assert pd.cell_at(1.6, 0.3).word == "t2"
    a = pd.cell_at(-1.2, 0.7)
    b = pd.cell_at(1.2, 0.7)
    assert a.word == "t1 t2" and a.nu == 2
    assert b.word == "t1 t2" and b.nu == 2  # canonical cyclic text coincides...
    assert a.permutation != b.permutation   # ...but the closure separates the phases
    assert a.label != b.label


def test_phase_diagram_degenerate_marker(fig1_dimer):
    # a cell pinned exactly on gamma = beta - alpha
    pd = phase_diagram(fig1_dimer(0.0), ("beta", 1.5, 1.6, 2), ("gamma", 0.5, 0.6, 2),
                       samples=512)
    cell = pd.cell_at(1.5, 0.5)
    assert cell.degenerate and cell.word == "DEGENERATE"


def test_phase_diagram_boundary_segments(fig1_dimer):
    pd = phase_diagram(fig1_dimer(0.0), ("beta", 1.4, 1.6, 3), ("gamma", 0.2, 0.8, 13),
                       samples=512)
    segs = pd.boundary_segments()
    assert segs, "no boundary found around the exceptional line"
    for seg in segs:
        beta, gamma = seg["point"]
        assert abs(gamma - (beta - 1.0)) < 0.06
    polys = pd.boundary_polylines()
    assert all(len(p["points"]) >= 1 for p in polys)


def test_phase_diagram_delta_zero_warns(fig1_dimer):
    spec = ModelSpec.dimer(1.0, 1.5, 0.0, 1.0, 1)
    with pytest.warns(UserWarning):
        phase_diagram(spec, ("beta", 1.4, 1.6, 2), ("gamma", 0.1, 0.2, 2), samples=128)


def test_phase_diagram_rejects_unknown_axis(fig1_dimer):
    with pytest.raises(ValueError):
        phase_diagram(fig1_dimer(1.0), ("zeta", 0.0, 1.0, 3), ("gamma", 0.0, 1.0, 3))
    with pytest.raises(ValueError):
        phase_diagram(fig1_dimer(1.0), ("m", 1.0, 3.0, 3), ("gamma", 0.0, 1.0, 3))
