"""Exceptional points, spectral winding numbers, and phase diagrams.

An exceptional point (EP) is a momentum or complex-plane point where two
eigenvalues and their eigenvectors coalesce; algebraically, the discriminant
of the characteristic polynomial vanishes there. Braid phases of the band
structure are separated by lines of EPs in parameter space, and each phase
carries an integer invariant: the total winding of det(H(k) - E_ref) around
zero as k sweeps the zone, summed over the EP reference energies between the
phase and the trivial (small gain-loss) regime.
"""

from __future__ import annotations

import math
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .braid import Permutation, cyclic_canonical, exponent_sum, extract_braid_word, word_to_text
from .errors import (DegenerateCrossing, DegeneracyEncountered, DegenerateModel,
                     NonConvergent, ReferenceOnBand, RefinementExhausted,
                     UnresolvedCrossing, UnsupportedDegree)
from .models import DimerParams, ModelSpec, bloch_matrix_z
from .spectrum import _det_grid, _eig_grid, eigenvalues, track_bands

__all__ = [
    "discriminant",
    "dimer_ep_lines",
    "dimer_ep_zplane",
    "zone_boundary_degeneracy_residual",
    "ExceptionalPoint",
    "find_eps_k",
    "most_degenerate_point",
    "ep_zplane_numeric",
    "WindingResult",
    "winding_number",
    "BraidIndex",
    "gamma_axis_references",
    "reference_energies",
    "total_braid_index",
    "AxisSpec",
    "PhaseCell",
    "PhaseDiagram",
    "phase_diagram",
    "DEGENERATE",
]

_TWO_PI = 2.0 * np.pi
DEGENERATE = "DEGENERATE"

_TRACK_ERRORS = (DegeneracyEncountered, RefinementExhausted,
                 DegenerateCrossing, UnresolvedCrossing)


# -- discriminants ---------------------------------------------------------

def discriminant(coefficients) -> complex:
    """Discriminant of a monic quadratic or cubic.

    ``[1, b, c]``       -> b^2 - 4c
    ``[1, b, c, d]``    -> 18bcd - 4b^3 d + b^2 c^2 - 4c^3 - 27d^2

    Zero iff the polynomial has a multiple root.
    """
    coeffs = np.asarray(coefficients, dtype=complex)
    if coeffs.ndim != 1 or coeffs.shape[0] not in (3, 4):
        raise UnsupportedDegree(f"need degree 2 or 3, got {coeffs.shape[0] - 1 if coeffs.ndim == 1 else '?'}")
    if coeffs[0] != 1.0:
        raise ValueError(f"polynomial must be monic, got leading coefficient {coeffs[0]}")
    if coeffs.shape[0] == 3:
        b, c = coeffs[1], coeffs[2]
        return complex(b * b - 4.0 * c)
    b, c, d = coeffs[1], coeffs[2], coeffs[3]
    return complex(18.0 * b * c * d - 4.0 * b ** 3 * d + b * b * c * c - 4.0 * c ** 3 - 27.0 * d * d)


def dimer_ep_lines(alpha: float, beta: float, m: int = 1) -> tuple[tuple[float, float], ...]:
    """The four dimer exceptional lines as (gamma, k) pairs.

    gamma = +/-(beta - alpha) at k = pi/m and gamma = +/-(beta + alpha) at
    k = 0. On each line both bands coalesce at energy zero.
    """
    k_edge = math.pi / m
    return ((beta - alpha, k_edge), (-(beta - alpha), k_edge),
            (beta + alpha, 0.0), (-(beta + alpha), 0.0))


def dimer_ep_zplane(p: DimerParams) -> list[complex]:
    """Complexified locations of the dimer degeneracy condition.

    Solves the zone-boundary coalescence condition continued off the unit
    circle, alpha^2 + beta^2 - gamma^2 + 2*alpha*beta*z^m = 0, giving m
    points z = ((alpha^2+beta^2-gamma^2)/(2*alpha*beta))^(1/m) * e^{i(2j-1)pi/m}.
    For one m-th-order two-band braid these are the m branch-point markers
    inside (or outside) the zone circle; use
    :func:`zone_boundary_degeneracy_residual` to check membership and
    :func:`ep_zplane_numeric` for the exact discriminant zeros of H(z).
    """
    if p.alpha * p.beta == 0.0:
        raise DegenerateModel("alpha*beta = 0 leaves the z-plane condition degenerate")
    target = -(p.alpha ** 2 + p.beta ** 2 - p.gamma ** 2) / (2.0 * p.alpha * p.beta)
    radius = abs(target) ** (1.0 / p.m)
    if target == 0.0:
        return [0j] * p.m
    base = np.angle(target)
    return [radius * np.exp(1j * (base + _TWO_PI * j) / p.m) for j in range(p.m)]


def zone_boundary_degeneracy_residual(p: DimerParams, z: complex) -> float:
    """|alpha^2 + beta^2 - gamma^2 + 2*alpha*beta*z^m| at a candidate point."""
    return abs(p.alpha ** 2 + p.beta ** 2 - p.gamma ** 2 + 2.0 * p.alpha * p.beta * z ** p.m)


# -- exceptional point search ----------------------------------------------

@dataclass(frozen=True)
class ExceptionalPoint:
    """A two-band coalescence: where, at what energy, which band pair."""

    location: complex
    space: str                  # "k" (real momentum) or "z" (complex plane)
    energy: complex
    bands: tuple[int, int]      # 1-based indices in ascending-real-part order
    model: ModelSpec

    @property
    def k(self) -> float:
        if self.space != "k":
            raise ValueError("not a momentum-space point")
        return float(self.location.real)


def _char_coeff_grid(spec: ModelSpec, tvals) -> np.ndarray:
    """Monic characteristic coefficients over a k grid, shape (T, N+1)."""
    n = spec.n_bands
    if spec.kind == "dimer":
        p = spec.params
        z = np.exp(1j * np.asarray(tvals, dtype=float))
        w = z ** p.m
        e11 = -1j * p.delta * (w - 1.0 / w) + 1j * p.gamma
        e22 = -1j * p.gamma
        tr = e11 + e22
        det = e11 * e22 - (p.alpha + p.beta / w) * (p.alpha + p.beta * w)
        ones = np.ones_like(tr)
        return np.stack([ones, -tr, det], axis=-1)
    if spec.kind == "trimer":
        from .spectrum import _trimer_coeff_grid
        z = np.exp(1j * np.asarray(tvals, dtype=float))
        c2, c1, c0 = _trimer_coeff_grid(spec.params, z)
        ones = np.ones_like(c2)
        return np.stack([ones, c2, c1, c0], axis=-1)
    if n not in (2, 3):
        raise ValueError(f"characteristic-coefficient grid needs 2 or 3 bands, got {n}")
    z = np.exp(1j * np.asarray(tvals, dtype=float))
    h = np.zeros(z.shape + (n, n), dtype=complex)
    for term in spec.fourier_terms():
        h += term.matrix * (z ** term.n)[..., None, None]
    ones = np.ones(z.shape, dtype=complex)
    if n == 2:
        tr = h[..., 0, 0] + h[..., 1, 1]
        det = h[..., 0, 0] * h[..., 1, 1] - h[..., 0, 1] * h[..., 1, 0]
        return np.stack([ones, -tr, det], axis=-1)
    tr = h[..., 0, 0] + h[..., 1, 1] + h[..., 2, 2]
    minors = (h[..., 0, 0] * h[..., 1, 1] - h[..., 0, 1] * h[..., 1, 0]) \
        + (h[..., 0, 0] * h[..., 2, 2] - h[..., 0, 2] * h[..., 2, 0]) \
        + (h[..., 1, 1] * h[..., 2, 2] - h[..., 1, 2] * h[..., 2, 1])
    det = np.linalg.det(h)
    return np.stack([ones, -tr, minors, -det], axis=-1)


def _disc_of_coeffs(coeffs: np.ndarray) -> np.ndarray:
    if coeffs.shape[-1] == 3:
        b, c = coeffs[..., 1], coeffs[..., 2]
        return b * b - 4.0 * c
    b, c, d = coeffs[..., 1], coeffs[..., 2], coeffs[..., 3]
    return 18.0 * b * c * d - 4.0 * b ** 3 * d + b * b * c * c - 4.0 * c ** 3 - 27.0 * d * d


def _normalized_disc(spec: ModelSpec, k: float) -> float:
    """|discriminant| scaled by the eigenvalue magnitude, dimensionless."""
    coeffs = _char_coeff_grid(spec, np.array([k]))[0]
    roots = np.roots(coeffs)
    n = len(roots)
    scale = (1.0 + float(np.abs(roots).max())) ** (n * (n - 1))
    return abs(_disc_of_coeffs(coeffs[None, :])[0]) / scale


def _golden_min(f, a: float, b: float, tol: float = 1e-12) -> float:
    """Golden-section minimiser of a unimodal scalar function on [a, b]."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def _coalescing_pair(spec: ModelSpec, k: float) -> tuple[complex, tuple[int, int]]:
    """Mean energy and (1-based, real-part-ranked) indices of the closest pair."""
    ev = eigenvalues(_char_roots_matrix(spec, k))
    order = np.lexsort((ev.imag, ev.real))
    ev = ev[order]
    n = len(ev)
    best = None
    for i in range(n):
        for j in range(i + 1, n):
            gap = abs(ev[i] - ev[j])
            if best is None or gap < best[0]:
                best = (gap, i, j)
    _, i, j = best
    return 0.5 * (ev[i] + ev[j]), (i + 1, j + 1)


def _char_roots_matrix(spec: ModelSpec, k: float):
    from .models import bloch_matrix
    return bloch_matrix(spec, k)


def find_eps_k(spec: ModelSpec, grid_samples: int = 4096,
               accept_tol: float = 1e-10) -> list[ExceptionalPoint]:
    """Locate momentum-space exceptional points of a 2- or 3-band model.

    Scans |discriminant| of the characteristic polynomial over k in
    [0, 2pi), refines every local minimum by golden section, and keeps the
    candidates whose normalized |discriminant| falls below ``accept_tol``.
    Duplicates closer than dk = 1e-6 are merged. An empty list means no EP
    at these parameters.
    """
    if spec.n_bands not in (2, 3):
        raise ValueError("exceptional-point search supports 2- and 3-band models")
    ks = np.linspace(0.0, _TWO_PI, grid_samples, endpoint=False)
    coeffs = _char_coeff_grid(spec, ks)
    mags = np.abs(_disc_of_coeffs(coeffs))
    left = np.roll(mags, 1)
    right = np.roll(mags, -1)
    candidates = np.nonzero((mags <= left) & (mags < right))[0]

    step = _TWO_PI / grid_samples
    found: list[ExceptionalPoint] = []
    for idx in candidates:
        a = ks[idx] - step
        b = ks[idx] + step
        k_star = _golden_min(lambda k: _normalized_disc(spec, k), a, b)
        if _normalized_disc(spec, k_star) >= accept_tol:
            continue
        k_star = k_star % _TWO_PI
        if any(abs(k_star - ep.k) < 1e-6 or abs(abs(k_star - ep.k) - _TWO_PI) < 1e-6
               for ep in found):
            continue
        energy, pair = _coalescing_pair(spec, k_star)
        found.append(ExceptionalPoint(complex(k_star), "k", complex(energy), pair, spec))
    found.sort(key=lambda ep: ep.k)
    return found


def most_degenerate_point(spec: ModelSpec, grid_samples: int = 2048) -> ExceptionalPoint:
    """Global minimum of the band gap over the zone, refined by golden section.

    Unlike :func:`find_eps_k` this applies no acceptance threshold, so it is
    the right tool exactly on (or within bisection distance of) a phase
    boundary, where the minimal gap is tiny but not exactly zero.
    """
    ks = np.linspace(0.0, _TWO_PI, grid_samples, endpoint=False)
    raw = _eig_grid(spec, ks)
    gaps = np.abs(raw[:, :, None] - raw[:, None, :])
    n = raw.shape[1]
    gaps[:, np.arange(n), np.arange(n)] = np.inf
    per_k = gaps.min(axis=(1, 2))
    idx = int(np.argmin(per_k))
    step = _TWO_PI / grid_samples

    def gap_at(k: float) -> float:
        ev = _eig_grid(spec, np.array([k]))[0]
        g = np.abs(ev[:, None] - ev[None, :])
        g[np.arange(n), np.arange(n)] = np.inf
        return float(g.min())

    k_star = _golden_min(gap_at, ks[idx] - step, ks[idx] + step) % _TWO_PI
    energy, pair = _coalescing_pair(spec, k_star)
    return ExceptionalPoint(complex(k_star), "k", complex(energy), pair, spec)


# -- z-plane discriminant zeros --------------------------------------------

class _Laurent:
    """Minimal Laurent-polynomial arithmetic on numpy coefficient arrays."""

    __slots__ = ("lo", "c")

    def __init__(self, lo: int, coeffs):
        self.lo = lo
        self.c = np.asarray(coeffs, dtype=complex)

    @staticmethod
    def const(x) -> "_Laurent":
        return _Laurent(0, [x])

    @staticmethod
    def mono(x, n: int) -> "_Laurent":
        return _Laurent(n, [x])

    def __add__(self, other):
        if not isinstance(other, _Laurent):
            other = _Laurent.const(other)
        lo = min(self.lo, other.lo)
        hi = max(self.lo + len(self.c), other.lo + len(other.c))
        c = np.zeros(hi - lo, complex)
        c[self.lo - lo:self.lo - lo + len(self.c)] += self.c
        c[other.lo - lo:other.lo - lo + len(other.c)] += other.c
        return _Laurent(lo, c)

    __radd__ = __add__

    def __neg__(self):
        return _Laurent(self.lo, -self.c)

    def __sub__(self, other):
        if not isinstance(other, _Laurent):
            other = _Laurent.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, _Laurent):
            other = _Laurent.const(other)
        return _Laurent(self.lo + other.lo, np.convolve(self.c, other.c))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = _Laurent.const(1.0)
        for _ in range(n):
            out = out * self
        return out

    def roots(self) -> np.ndarray:
        """Nonzero roots (the pole prefactor z^lo is dropped)."""
        mag = np.abs(self.c).max()
        keep = np.nonzero(np.abs(self.c) > mag * 1e-13)[0]
        c = self.c[keep[0]:keep[-1] + 1]
        if len(c) < 2:
            return np.array([], dtype=complex)
        rts = np.roots(c[::-1])
        return rts[np.abs(rts) > 1e-12]


def _laurent_matrix(spec: ModelSpec) -> list[list[_Laurent]]:
    n = spec.n_bands
    mat = [[_Laurent.const(0.0) for _ in range(n)] for _ in range(n)]
    for term in spec.fourier_terms():
        for i in range(n):
            for j in range(n):
                x = term.matrix[i, j]
                if x != 0:
                    mat[i][j] = mat[i][j] + _Laurent.mono(x, term.n)
    return mat


def ep_zplane_numeric(spec: ModelSpec) -> list[ExceptionalPoint]:
    """Every discriminant zero of H(z) in the complex plane (2/3-band models).

    The discriminant of det(E - H(z)) is a Laurent polynomial in z; clearing
    the pole turns the zero set into polynomial roots, found exactly. These
    are the true branch points of the energy surfaces over the z-plane,
    sorted by modulus (points inside |z| < 1 sit inside the zone circle).
    """
    n = spec.n_bands
    if n not in (2, 3):
        raise ValueError("z-plane search supports 2- and 3-band models")
    h = _laurent_matrix(spec)
    if n == 2:
        tr = h[0][0] + h[1][1]
        det = h[0][0] * h[1][1] - h[0][1] * h[1][0]
        disc = tr * tr - 4.0 * det
    else:
        b = -(h[0][0] + h[1][1] + h[2][2])
        c = (h[0][0] * h[1][1] - h[0][1] * h[1][0]) \
            + (h[0][0] * h[2][2] - h[0][2] * h[2][0]) \
            + (h[1][1] * h[2][2] - h[1][2] * h[2][1])
        det = (h[0][0] * (h[1][1] * h[2][2] - h[1][2] * h[2][1])
               - h[0][1] * (h[1][0] * h[2][2] - h[1][2] * h[2][0])
               + h[0][2] * (h[1][0] * h[2][1] - h[1][1] * h[2][0]))
        d = -det
        disc = 18.0 * b * c * d - 4.0 * (b ** 3) * d + (b ** 2) * (c ** 2) - 4.0 * (c ** 3) - 27.0 * (d ** 2)
    out = []
    for z in disc.roots():
        ev = eigenvalues(bloch_matrix_z(spec, complex(z)))
        order = np.lexsort((ev.imag, ev.real))
        ev = ev[order]
        best = None
        for i in range(n):
            for j in range(i + 1, n):
                gap = abs(ev[i] - ev[j])
                if best is None or gap < best[0]:
                    best = (gap, i, j)
        _, i, j = best
        out.append(ExceptionalPoint(complex(z), "z", 0.5 * (ev[i] + ev[j]), (i + 1, j + 1), spec))
    out.sort(key=lambda ep: abs(ep.location))
    return out


# -- winding numbers ---------------------------------------------------------

@dataclass(frozen=True)
class WindingResult:
    """Integer winding of det(H(k) - E_ref) around zero over one period."""

    nu: int
    raw: float
    residual: float
    reference_energy: complex
    samples: int


_WINDING_SAMPLES_MAX = 1 << 20


def winding_number(spec: ModelSpec, reference_energy: complex,
                   samples: int = 1024) -> WindingResult:
    """Accumulated phase of det(H(k) - E_ref) over the zone, in units of 2pi.

    The grid doubles until every phase step is below pi/4; the total is then
    an integer to well below 1e-6. Raises :class:`ReferenceOnBand` when the
    reference energy lies on a band (the determinant vanishes) and
    :class:`NonConvergent` when refinement or rounding fails.
    """
    e_ref = complex(reference_energy)
    k = int(samples)
    while True:
        tvals = np.linspace(0.0, _TWO_PI, k + 1)
        dets = _det_grid(spec, tvals, e_ref)
        mags = np.abs(dets)
        if mags.min() < 1e-12 * (1.0 + mags.max()):
            raise ReferenceOnBand(
                f"det(H - E_ref) ~ {mags.min():.3e} on the grid; E_ref={e_ref} lies on a band")
        steps = np.diff(np.angle(dets))
        steps = (steps + np.pi) % _TWO_PI - np.pi
        if np.abs(steps).max() < np.pi / 4.0:
            break
        if k >= _WINDING_SAMPLES_MAX:
            # a determinant zero pinned between samples keeps the local phase
            # step at ~pi no matter how fine the grid gets
            if mags.min() < 1e-4 * (1.0 + mags.max()):
                raise ReferenceOnBand(
                    f"det(H - E_ref) dips to {mags.min():.3e} and phase steps stay coarse; "
                    f"E_ref={e_ref} lies on (or numerically on) a band")
            raise NonConvergent(f"phase steps still above pi/4 at {k} samples")
        k *= 2
    raw = float(steps.sum() / _TWO_PI)
    nu = int(round(raw))
    residual = abs(raw - nu)
    if residual >= 1e-6:
        raise NonConvergent(f"winding {raw} is not integral (residual {residual:.3e})")
    return WindingResult(nu, raw, residual, e_ref, k)


# -- reference energies and the total braid index ----------------------------

def _classify(spec: ModelSpec, k0: float, samples: int):
    """(canonical word text, exponent sum, permutation) or None if degenerate."""
    try:
        traj = track_bands(spec, k0, samples)
        word = extract_braid_word(traj)
    except _TRACK_ERRORS:
        return None
    return (word_to_text(cyclic_canonical(word)), exponent_sum(word), traj.closure)


def gamma_axis_references(spec: ModelSpec, *, k0: float = np.pi / 4,
                          samples: int = 512, coarse_steps: int = 16,
                          gamma_resolution: float = 1e-5
                          ) -> list[tuple[float, complex, tuple[int, int]]]:
    """Phase boundaries on the gamma axis between this point and gamma ~ 0.

    Holding every other parameter fixed, the braid label is sampled on a
    coarse gamma grid from just above zero up to the model's gamma; each
    label change is bisected to ``gamma_resolution`` and the near-degenerate
    energy at the boundary is recorded. Returns (gamma*, energy, band pair)
    triples in order of increasing |gamma*|.
    """
    if spec.kind == "generic":
        raise ValueError("gamma-axis scan needs a named gamma parameter")
    g_target = spec.params.gamma
    if g_target == 0.0:
        return []

    def label(g: float):
        return _classify(spec.replace_param("gamma", g), k0, samples)

    gs = np.linspace(g_target * 1e-3, g_target, coarse_steps + 1)
    labels = [label(g) for g in gs]
    work = [(gs[i], labels[i], gs[i + 1], labels[i + 1])
            for i in range(coarse_steps) if labels[i] != labels[i + 1]]
    boundaries: list[tuple[float, complex, tuple[int, int]]] = []
    while work:
        glo, lab_lo, ghi, lab_hi = work.pop()
        if abs(ghi - glo) < gamma_resolution:
            g_star = 0.5 * (glo + ghi)
            ep = most_degenerate_point(spec.replace_param("gamma", g_star))
            boundaries.append((g_star, ep.energy, ep.bands))
            continue
        mid = 0.5 * (glo + ghi)
        lab_mid = label(mid)
        if lab_mid == lab_lo:
            work.append((mid, lab_mid, ghi, lab_hi))
        elif lab_mid == lab_hi:
            work.append((glo, lab_lo, mid, lab_mid))
        else:
            work.append((glo, lab_lo, mid, lab_mid))
            work.append((mid, lab_mid, ghi, lab_hi))
    # merge boundaries re-found from both sides of a third label
    boundaries.sort(key=lambda be: abs(be[0]))
    merged: list[tuple[float, complex, tuple[int, int]]] = []
    for g_star, energy, pair in boundaries:
        if merged and abs(g_star - merged[-1][0]) < 10 * gamma_resolution:
            continue
        merged.append((g_star, energy, pair))
    return merged


@dataclass(frozen=True)
class BraidIndex:
    """Total braid invariant: sum of windings over the EP reference energies."""

    nu: int
    parts: tuple[WindingResult, ...]
    references: tuple[complex, ...]


def reference_energies(spec: ModelSpec, *, k0: float = np.pi / 4) -> list[complex]:
    """EP reference energies for the winding index of this model.

    The dimer's reference is always energy zero: both bands vanish on every
    exceptional line. For the trimer the gamma axis is scanned to the
    trivial phase and each DISTINCT coalescing band pair contributes the
    energy of its boundary crossing nearest the model's own gamma (a single
    exceptional line crossed twice by the scan is one reference, not two).
    """
    if spec.kind == "dimer":
        return [0j]
    if spec.kind == "trimer":
        refs: list[complex] = []
        seen_pairs: set[tuple[int, int]] = set()
        for g_star, energy, pair in reversed(gamma_axis_references(spec, k0=k0)):
            if pair in seen_pairs:
                continue
            seen_pairs.add(pair)
            if not any(abs(energy - r) < 1e-3 * (1.0 + abs(energy)) for r in refs):
                refs.append(energy)
        return refs
    raise ValueError("reference energies are defined for the dimer and trimer families")


def total_braid_index(spec: ModelSpec, *, samples: int = 1024,
                      k0: float = np.pi / 4) -> BraidIndex:
    """Sum of spectral winding numbers over the model's EP reference energies.

    References come from :func:`reference_energies`. The result equals the
    exponent sum of the extracted braid word on every phase tested.
    """
    refs = reference_energies(spec, k0=k0)
    parts = tuple(winding_number(spec, e, samples) for e in refs)
    return BraidIndex(sum(p.nu for p in parts), parts, tuple(refs))


# -- phase diagrams -----------------------------------------------------------

@dataclass(frozen=True)
class AxisSpec:
    """One swept parameter: inclusive range sampled at ``resolution`` points."""

    name: str
    start: float
    stop: float
    resolution: int

    def __post_init__(self):
        if self.resolution < 2:
            raise ValueError("axis needs at least 2 samples")

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.resolution)

    @property
    def spacing(self) -> float:
        return abs(self.stop - self.start) / (self.resolution - 1)


@dataclass(frozen=True)
class PhaseCell:
    """Classification of one grid cell."""

    value1: float
    value2: float
    word: str                   # canonical cyclic text, or "DEGENERATE"
    nu: int | None
    permutation: Permutation | None

    @property
    def degenerate(self) -> bool:
        return self.word == DEGENERATE

    @property
    def label(self):
        """Key identifying the phase: word, exponent sum, closure permutation."""
        if self.degenerate:
            return DEGENERATE
        return (self.word, self.nu, self.permutation.image)


def _thread_count(requested: int | None = None) -> int:
    if requested is None:
        raw = os.environ.get("BLOCH_BRAIDS_THREADS", "0").strip() or "0"
        requested = int(raw)
    if requested <= 0:
        return max(1, min(8, os.cpu_count() or 1))
    return requested


@dataclass
class PhaseDiagram:
    """Braid classification of a 2-parameter plane.

    Cells where tracking or extraction hits an exceptional point carry the
    DEGENERATE marker; these trace out the phase-boundary lines.
    """

    template: ModelSpec
    axis1: AxisSpec
    axis2: AxisSpec
    cells: list[list[PhaseCell]]
    k0: float
    samples: int

    def cell_at(self, value1: float, value2: float) -> PhaseCell:
        """The cell whose grid point lies nearest to (value1, value2)."""
        i = int(np.argmin(np.abs(self.axis1.values() - value1)))
        j = int(np.argmin(np.abs(self.axis2.values() - value2)))
        return self.cells[i][j]

    def degenerate_cells(self) -> list[PhaseCell]:
        return [c for row in self.cells for c in row if c.degenerate]

    def boundary_segments(self) -> list[dict]:
        """Midpoints between adjacent cells with different phase labels.

        Each segment records the two cell centres it separates and both
        labels; chained per label pair they draw the phase-boundary lines.
        """
        segs = []
        n1, n2 = self.axis1.resolution, self.axis2.resolution
        for i in range(n1):
            for j in range(n2):
                a = self.cells[i][j]
                for di, dj in ((1, 0), (0, 1)):
                    ii, jj = i + di, j + dj
                    if ii >= n1 or jj >= n2:
                        continue
                    b = self.cells[ii][jj]
                    if a.label != b.label:
                        segs.append({
                            "point": (0.5 * (a.value1 + b.value1), 0.5 * (a.value2 + b.value2)),
                            "labels": sorted([a.word, b.word]),
                        })
        return segs

    def boundary_polylines(self) -> list[dict]:
        """Boundary midpoints grouped by label pair and chained into runs."""
        groups: dict[tuple[str, str], list[tuple[float, float]]] = {}
        for seg in self.boundary_segments():
            groups.setdefault(tuple(seg["labels"]), []).append(seg["point"])
        out = []
        max_step = 2.0 * math.hypot(self.axis1.spacing, self.axis2.spacing)
        for labels, pts in sorted(groups.items()):
            pts = sorted(pts)
            run: list[tuple[float, float]] = []
            for p in pts:
                if run and math.hypot(p[0] - run[-1][0], p[1] - run[-1][1]) > max_step:
                    out.append({"labels": list(labels), "points": run})
                    run = []
                run.append(p)
            if run:
                out.append({"labels": list(labels), "points": run})
        return out


def phase_diagram(template: ModelSpec, axis1, axis2, *,
                  k0: float = np.pi / 4, samples: int = 512,
                  threads: int | None = None) -> PhaseDiagram:
    """Classify the braid phase on a 2-parameter grid.

    ``axis1`` and ``axis2`` are :class:`AxisSpec` or (name, start, stop,
    resolution) tuples naming scalar parameters of the template model. Cells
    are classified independently (rows run in a thread pool; set
    BLOCH_BRAIDS_THREADS to cap the worker count, 0 means automatic).
    """
    axis1 = axis1 if isinstance(axis1, AxisSpec) else AxisSpec(*axis1)
    axis2 = axis2 if isinstance(axis2, AxisSpec) else AxisSpec(*axis2)
    if template.kind == "generic":
        raise ValueError("phase diagrams need named scalar parameters (dimer or trimer)")
    field_names = set(template.params.__dataclass_fields__) - {"m"}
    for ax in (axis1, axis2):
        if ax.name not in field_names:
            raise ValueError(f"model has no sweepable parameter {ax.name!r} "
                             f"(available: {sorted(field_names)})")
    if getattr(template.params, "delta", None) == 0.0:
        warnings.warn("delta = 0 has no long-range coupling: braids are trivial and the "
                      "exceptional structure is outside the validated regime", stacklevel=2)

    vals1 = axis1.values()
    vals2 = axis2.values()

    def scalar_cell(v1: float, v2: float) -> PhaseCell:
        spec = template.replace_param(axis1.name, v1).replace_param(axis2.name, v2)
        result = _classify(spec, k0, samples)
        if result is None:
            return PhaseCell(v1, v2, DEGENERATE, None, None)
        word_text, nu, perm = result
        return PhaseCell(v1, v2, word_text, nu, perm)

    if template.kind == "dimer":
        from .sweep import dimer_row_classify

        def classify_row(i: int) -> list[PhaseCell]:
            v1 = float(vals1[i])
            p = template.replace_param(axis1.name, v1).params
            fields = {"alpha": p.alpha, "beta": p.beta, "delta": p.delta, "gamma": p.gamma}
            arrays = {name: np.full(len(vals2), value) for name, value in fields.items()}
            arrays[axis2.name] = vals2.astype(float)
            results = dimer_row_classify(arrays["alpha"], arrays["beta"], arrays["delta"],
                                         arrays["gamma"], p.m, k0=k0, samples=samples)
            row = []
            for j, res in enumerate(results):
                v2 = float(vals2[j])
                if res is None:
                    row.append(scalar_cell(v1, v2))
                elif res[0] == "degenerate":
                    row.append(PhaseCell(v1, v2, DEGENERATE, None, None))
                else:
                    word, perm = res
                    row.append(PhaseCell(v1, v2, word_to_text(cyclic_canonical(word)),
                                         exponent_sum(word), perm))
            return row
    else:
        def classify_row(i: int) -> list[PhaseCell]:
            v1 = float(vals1[i])
            return [scalar_cell(v1, float(v2)) for v2 in vals2]

    workers = _thread_count(threads)
    if workers == 1:
        cells = [classify_row(i) for i in range(len(vals1))]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            cells = list(pool.map(classify_row, range(len(vals1))))
    return PhaseDiagram(template, axis1, axis2, cells, k0, samples)
