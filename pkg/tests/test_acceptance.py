"""Acceptance suite: end-to-end checks of the reference physics.

Every test prints one PASS/FAIL line (run pytest with -s to see them all).
Two sub-clauses are implemented exactly as specified but are known to be
unsatisfiable and carry strict xfail markers with the reasoning inline: the
recovered second reference energy (1.4799 vs the quoted 1.4 +/- 0.05), and
the band permutation quoted for the four-letter three-band braid, which
contradicts the permutation arithmetic fixed by the two-letter braids.
"""

import numpy as np
import pytest

from bloch_braids import (ModelSpec, Permutation, cyclic_canonical, exponent_sum,
                          extract_braid_word, find_eps_k, free_reduce,
                          gamma_axis_references, phase_diagram, total_braid_index,
                          track_bands, dimer_ep_zplane, winding_number, word_from_text,
                          word_to_text, words_cyclic_equal)
from bloch_braids.errors import DegeneracyEncountered
from bloch_braids.sweep import dimer_winding_row
from conftest import PI4


def report(tag: str, ok: bool, detail: str = "") -> None:
    status = "PASS" if ok else "FAIL"
    print(f"[acceptance] {tag}: {status}" + (f" - {detail}" if detail else ""))


def dimer(gamma, m=1, beta=1.5):
    return ModelSpec.dimer(1.0, beta, 0.3, gamma, m)


def trimer(beta, gamma, m=1):
    return ModelSpec.trimer(1.0, beta, 0.3, gamma, 0.7, m)


def braid_of(spec, k0):
    traj = track_bands(spec, k0)
    return extract_braid_word(traj), traj.closure


# -- criterion 1: two-band braid sequence -------------------------------------------

def test_criterion_1_two_band_braid_sequence():
    ok = True
    words = {}
    for gamma, expected_word, expected_nu in ((-1.0, "T1", -1), (-0.2, "e", 0), (1.0, "t1", 1)):
        word, _ = braid_of(dimer(gamma), 0.0)
        nu = winding_number(dimer(gamma), 0.0).nu
        words[gamma] = (word_to_text(word), nu)
        ok &= word_to_text(word) == expected_word and nu == expected_nu
    for gamma in (-0.5, 0.5):
        with pytest.raises(DegeneracyEncountered):
            track_bands(dimer(gamma), 0.0)
        eps = find_eps_k(dimer(gamma))
        ok &= len(eps) == 1 and abs(eps[0].k - np.pi) < 1e-6 and abs(eps[0].energy) < 1e-8
    report("criterion 1 (two-band braid sequence)", ok,
           f"words/nu at gamma=-1,-0.2,1: {words}; gamma=+/-0.5 degenerate with EP at k=pi")
    assert ok


# -- criterion 2: Hopf link and trefoil -----------------------------------------------

def test_criterion_2_hopf_link_and_trefoil():
    ok = True
    word2, closure2 = braid_of(dimer(1.0, m=2), 0.0)
    ok &= word_to_text(word2) == "t1 t1"
    ok &= winding_number(dimer(1.0, m=2), 0.0).nu == 2
    ok &= closure2 == Permutation.identity(2)
    word3, closure3 = braid_of(dimer(1.0, m=3), 0.0)
    ok &= word_to_text(word3) == "t1 t1 t1"
    ok &= winding_number(dimer(1.0, m=3), 0.0).nu == 3
    ok &= closure3 == Permutation.transposition(2, 0)
    for m in (2, 3):
        zs = dimer_ep_zplane(dimer(1.0, m=m).params)
        ok &= len(zs) == m
        ok &= all(abs(abs(z) - 0.75 ** (1.0 / m)) < 1e-10 for z in zs)
    report("criterion 2 (Hopf link and trefoil)", ok,
           "m=2: t1 t1 / nu=2 / identity closure; m=3: t1 t1 t1 / nu=3 / swap; "
           "m z-plane points at radius 0.75^(1/m)")
    assert ok


# -- criterion 3: two-band phase boundaries --------------------------------------------

LINES = (lambda b: b - 1.0, lambda b: -(b - 1.0), lambda b: b + 1.0, lambda b: -(b + 1.0))


@pytest.fixture(scope="session")
def dimer_sweep():
    template = ModelSpec.dimer(1.0, 1.5, 0.3, 0.0, 1)
    return phase_diagram(template, ("beta", 0.0, 3.0, 300), ("gamma", -3.0, 3.0, 600),
                         samples=512)


def test_criterion_3_phase_boundaries(dimer_sweep):
    pd = dimer_sweep
    cell_tol = pd.axis1.spacing + pd.axis2.spacing
    ok = True

    degenerate = pd.degenerate_cells()
    for cell in degenerate:
        dist = min(abs(cell.value2 - line(cell.value1)) for line in LINES)
        ok &= dist <= cell_tol

    # labels flip between the trivial word and a single generator across each line
    checks = 0
    flips_wrong = 0
    inner_margin = 3 * pd.axis2.spacing
    for beta in np.arange(0.15, 2.95, 0.05):
        for line, inner, outer in (
                (lambda b: abs(b - 1.0), "e", None),      # inner |gamma| < |beta-1|: trivial
                (lambda b: b + 1.0, None, "e")):          # outer |gamma| > beta+1: trivial
            edge = line(beta)
            if edge < inner_margin or edge > 3.0 - inner_margin:
                continue
            for sign in (1.0, -1.0):
                generator = "t1" if sign > 0 else "T1"
                below = pd.cell_at(beta, sign * (edge - inner_margin))
                above = pd.cell_at(beta, sign * (edge + inner_margin))
                if below.degenerate or above.degenerate:
                    continue
                want_below = inner if inner is not None else generator
                want_above = generator if inner is not None else outer
                checks += 1
                if below.word != want_below or above.word != want_above:
                    flips_wrong += 1
    ok &= flips_wrong == 0 and checks > 60
    report("criterion 3 (two-band phase boundaries, 300x600 sweep)", ok,
           f"{len(degenerate)} degenerate cells all within one cell of the four lines; "
           f"{checks} straddles of the lines checked, {flips_wrong} wrong "
           "(labels flip e <-> t1/T1)")
    assert ok


# -- criterion 4: three-band generators --------------------------------------------------

def test_criterion_4_three_band_generators():
    ok = True
    expected = [
        ((1.0, 0.1), "e", 0, Permutation.identity(3)),
        ((0.8, 0.2), "t1", 1, Permutation.transposition(3, 0)),
        ((1.6, 0.3), "t2", 1, Permutation.transposition(3, 1)),
    ]
    seen = {}
    for (beta, gamma), want_word, want_nu, want_perm in expected:
        spec = trimer(beta, gamma)
        word, closure = braid_of(spec, PI4)
        nu = total_braid_index(spec).nu
        seen[(beta, gamma)] = (word_to_text(word), nu, closure.cycle_str())
        ok &= word_to_text(word) == want_word
        ok &= nu == want_nu
        ok &= closure == want_perm
    report("criterion 4 (three-band generators)", ok, f"{seen}")
    assert ok


@pytest.mark.xfail(strict=True, reason=(
    "recovered boundary energies are -0.7317 and 1.4799; the second lies 0.0799 "
    "from the quoted 1.4, outside the stated 0.05 window (the quoted value "
    "truncates 1.48)"))
def test_criterion_4_boundary_reference_energies():
    refs = [e for _, e, _ in gamma_axis_references(trimer(0.8, 0.2))]
    refs += [e for _, e, _ in gamma_axis_references(trimer(1.6, 0.3))]
    near_first = min(abs(e - (-0.7)) for e in refs)
    near_second = min(abs(e - 1.4) for e in refs)
    ok = near_first <= 0.05 and near_second <= 0.05
    report("criterion 4 (boundary EP reference energies)", ok,
           f"recovered {[f'{e:.4f}' for e in refs]}; distance to -0.7: {near_first:.4f}, "
           f"to 1.4: {near_second:.4f} (> 0.05)")
    assert ok


# -- criterion 5: non-commuting two-letter braids ------------------------------------------

def test_criterion_5_non_abelian_swap():
    ok = True
    word_a, closure_a = braid_of(trimer(-1.2, 0.7), PI4)
    word_b, closure_b = braid_of(trimer(1.2, 0.7), PI4)
    ok &= word_to_text(word_a) == "t1 t2"
    ok &= word_to_text(word_b) == "t2 t1"
    ok &= closure_a.band_mapping_str() == "(E1,E2,E3)->(E2,E3,E1)"
    ok &= closure_b.band_mapping_str() == "(E1,E2,E3)->(E3,E1,E2)"
    ok &= total_braid_index(trimer(-1.2, 0.7)).nu == 2
    ok &= total_braid_index(trimer(1.2, 0.7)).nu == 2
    ok &= closure_a != closure_b
    report("criterion 5 (non-commuting two-letter braids)", ok,
           f"t1 t2 -> {closure_a.band_mapping_str()}, t2 t1 -> {closure_b.band_mapping_str()}, "
           "both nu=2, permutations differ")
    assert ok


# -- criterion 6: inverse generators ----------------------------------------------------------

def test_criterion_6_inverse_generators():
    ok = True
    cases = [
        ((0.8, -0.2), "T1", -1, (0.8, 0.2)),
        ((1.6, -0.3), "T2", -1, (1.6, 0.3)),
        ((1.2, -0.7), "T2 T1", -2, (1.2, 0.7)),
    ]
    seen = {}
    for (beta, gamma), want_word, want_nu, positive in cases:
        word, closure = braid_of(trimer(beta, gamma), PI4)
        _, closure_pos = braid_of(trimer(*positive), PI4)
        nu = total_braid_index(trimer(beta, gamma)).nu
        seen[(beta, gamma)] = (word_to_text(word), nu)
        ok &= words_cyclic_equal(word, word_from_text(want_word, 3))
        ok &= nu == want_nu
        ok &= closure == closure_pos
    report("criterion 6 (inverse generators)", ok,
           f"{seen}; permutations match the positive-gamma runs")
    assert ok


# -- criterion 7: m-fold generalization ---------------------------------------------------------

def test_criterion_7_m_fold_words_and_indices():
    ok = True
    word_a, closure_a = braid_of(trimer(0.8, 0.2, m=2), PI4)
    word_b, closure_b = braid_of(trimer(1.6, 0.3, m=2), PI4)
    word_c, closure_c = braid_of(trimer(1.2, 0.7, m=2), PI4)
    ok &= word_to_text(word_a) == "t1 t1"
    ok &= word_to_text(word_b) == "t2 t2"
    ok &= words_cyclic_equal(word_c, word_from_text("t2 t1 t2 t1", 3))
    ok &= total_braid_index(trimer(0.8, 0.2, m=2)).nu == 2
    ok &= total_braid_index(trimer(1.6, 0.3, m=2)).nu == 2
    ok &= total_braid_index(trimer(1.2, 0.7, m=2)).nu == 4
    ok &= closure_a == Permutation.identity(3)
    ok &= closure_b == Permutation.identity(3)
    report("criterion 7 (m-fold generalization)", ok,
           f"m=2 words {word_to_text(word_a)!r}, {word_to_text(word_b)!r}, "
           f"{word_to_text(word_c)!r}; nu = 2, 2, 4; first two close trivially")
    assert ok


@pytest.mark.xfail(strict=True, reason=(
    "the four-letter braid is the square of the two-letter braid whose band "
    "mapping is (E3,E1,E2); squaring a 3-cycle yields the inverse cycle, so the "
    "tracked mapping is necessarily (E2,E3,E1), not the quoted (E3,E1,E2)"))
def test_criterion_7_four_letter_band_permutation_as_stated():
    _, closure = braid_of(trimer(1.2, 0.7, m=2), PI4)
    ok = closure.band_mapping_str() == "(E1,E2,E3)->(E3,E1,E2)"
    report("criterion 7 (four-letter braid band permutation as stated)", ok,
           f"tracked mapping is {closure.band_mapping_str()}")
    assert ok


# -- criterion 8: property suites ------------------------------------------------------------------

def test_criterion_8a_trace_det_conservation():
    from bloch_braids import bloch_matrix, eigenvalues
    from conftest import random_dimer, random_trimer
    rng = np.random.default_rng(101)
    worst = 0.0
    for _ in range(1000):
        spec = random_dimer(rng) if rng.random() < 0.5 else random_trimer(rng)
        k = rng.uniform(0, 2 * np.pi)
        h = bloch_matrix(spec, k).entries
        ev = eigenvalues(h)
        tr = np.trace(h)
        det = np.linalg.det(h)
        worst = max(worst,
                    abs(ev.sum() - tr) / (1 + abs(tr)),
                    abs(ev.prod() - det) / (1 + abs(det)))
    ok = worst < 1e-8
    report("criterion 8a (trace/determinant conservation, 1000 draws)", ok,
           f"worst relative defect {worst:.2e}")
    assert ok


def test_criterion_8b_conjugation_symmetry():
    from bloch_braids import bloch_matrix, eigenvalues
    from conftest import random_dimer, random_trimer
    rng = np.random.default_rng(103)
    worst = 0.0
    for _ in range(1000):
        spec = random_dimer(rng) if rng.random() < 0.5 else random_trimer(rng)
        k = rng.uniform(0, 2 * np.pi)
        ev = np.sort_complex(eigenvalues(bloch_matrix(spec, k)))
        flipped = spec.replace_param("gamma", -spec.params.gamma)
        ev_flip = np.sort_complex(eigenvalues(bloch_matrix(flipped, k)).conj())
        worst = max(worst, float(np.abs(ev - ev_flip).max()))
    ok = worst < 1e-10
    report("criterion 8b (spectrum conjugation under gamma sign flip)", ok,
           f"worst multiset deviation {worst:.2e}")
    assert ok


def test_criterion_8c_exponent_sum_equals_winding_on_sweeps(dimer_sweep):
    # two-band plane: reference energy zero, row-vectorised winding
    pd = dimer_sweep
    checked = 0
    mismatches = 0
    gammas = pd.axis2.values()
    for i, row in enumerate(pd.cells):
        beta = row[0].value1
        mask = np.array([not c.degenerate for c in row])
        nus, ok_mask = dimer_winding_row(1.0, beta, 0.3, gammas, 1)
        for j, cell in enumerate(row):
            if cell.degenerate:
                continue
            if ok_mask[j]:
                nu = int(nus[j])
            else:
                nu = winding_number(ModelSpec.dimer(1.0, beta, 0.3, float(gammas[j]), 1), 0.0).nu
            checked += 1
            mismatches += (nu != cell.nu)
    ok_dimer = mismatches == 0 and checked > 100000

    # three-band plane containing all five labelled phases; the gamma-axis
    # boundary references are shared per column
    template = trimer(1.0, 0.1)
    betas = np.round(np.arange(-1.6, 1.81, 0.2), 10)
    gammas3 = np.round(np.arange(0.1, 0.81, 0.1), 10)
    pd3 = phase_diagram(template, ("beta", float(betas[0]), float(betas[-1]), len(betas)),
                        ("gamma", float(gammas3[0]), float(gammas3[-1]), len(gammas3)),
                        samples=512)
    checked3 = 0
    mismatches3 = 0
    for i, beta in enumerate(betas):
        refs = gamma_axis_references(trimer(float(beta), float(gammas3[-1])), coarse_steps=24)
        for j, gamma in enumerate(gammas3):
            cell = pd3.cells[i][j]
            if cell.degenerate:
                continue
            cell_spec = trimer(float(beta), float(gamma))
            # one reference per coalescing pair, taken at the crossing
            # nearest the cell (same dedupe rule as reference_energies)
            active = []
            seen_pairs = set()
            for g_star, energy, pair in reversed(refs):
                if g_star >= gamma or pair in seen_pairs:
                    continue
                seen_pairs.add(pair)
                if any(abs(energy - e) < 1e-3 * (1 + abs(energy)) for e in active):
                    continue
                active.append(energy)
            nu = sum(winding_number(cell_spec, e).nu for e in active)
            checked3 += 1
            mismatches3 += (nu != cell.nu)
    ok_trimer = mismatches3 == 0 and checked3 > 100
    ok = ok_dimer and ok_trimer
    report("criterion 8c (exponent sum = winding index on both sweeps)", ok,
           f"two-band: {checked}[-{mismatches}] cells; three-band: {checked3}[-{mismatches3}] cells")
    assert ok


def test_criterion_8d_braid_group_axioms_bulk():
    from bloch_braids import BraidWord, concat, induced_permutation, inverse
    rng = np.random.default_rng(107)
    for _ in range(10000):
        n_strands = int(rng.integers(2, 6))
        def rand_word():
            length = int(rng.integers(0, 9))
            return BraidWord(tuple((int(rng.integers(1, n_strands)), int(rng.choice([-1, 1])))
                                   for _ in range(length)), n_strands)
        a, b = rand_word(), rand_word()
        assert len(free_reduce(concat(a, inverse(a)))) == 0
        assert exponent_sum(concat(a, b)) == exponent_sum(a) + exponent_sum(b)
        assert induced_permutation(concat(a, b)) == \
            induced_permutation(a).then(induced_permutation(b))
    report("criterion 8d (braid group axioms, 10^4 random words)", True, "")


def test_criterion_8e_analytic_vs_companion_eigensolver():
    from bloch_braids import bloch_matrix, dimer_bands_analytic, solve_cubic
    from bloch_braids.models import characteristic_coefficients
    from conftest import random_dimer, random_trimer
    rng = np.random.default_rng(109)
    worst = 0.0
    for _ in range(400):
        spec = random_dimer(rng) if rng.random() < 0.5 else random_trimer(rng)
        k = rng.uniform(0, 2 * np.pi)
        coeffs = characteristic_coefficients(bloch_matrix(spec, k))
        n = spec.n_bands
        companion = np.zeros((n, n), dtype=complex)
        companion[1:, :-1] = np.eye(n - 1)
        companion[:, -1] = -coeffs[1:][::-1]
        oracle = np.sort_complex(np.linalg.eigvals(companion))
        if spec.kind == "dimer":
            mine = np.sort_complex(np.array(dimer_bands_analytic(spec.params, k)))
        else:
            mine = np.sort_complex(solve_cubic(coeffs))
        worst = max(worst, float(np.abs(mine - oracle).max()))
    ok = worst < 1e-8
    report("criterion 8e (closed forms vs companion-matrix oracle)", ok,
           f"worst deviation {worst:.2e}")
    assert ok
