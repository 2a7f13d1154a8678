"""Complex band structures: eigenvalues, tracking, and loop trajectories.

Eigenvalues of the 2x2 and 3x3 families use closed forms (quadratic formula
and a polished Cardano cubic); larger generic models fall back to LAPACK.
Bands sampled over one zone period are stitched into continuous trajectories
by minimal-total-distance matching between consecutive samples, with the
grid refined adaptively until the largest matched jump is below half the
smallest inter-band gap. The permutation of band labels after one full
traversal (the closure permutation) is recorded on the trajectory.
"""

from __future__ import annotations

import cmath
import itertools
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .braid import Permutation
from .errors import DegeneracyEncountered, RefinementExhausted
from .models import DimerParams, ModelSpec, bloch_matrix_z, characteristic_coefficients

__all__ = [
    "dimer_bands_analytic",
    "solve_cubic",
    "eigenvalues",
    "BandSample",
    "sample_bands",
    "BandTrajectory",
    "track_bands",
    "riemann_loop",
    "DEGENERACY_RTOL",
    "TRACK_SAMPLES_DEFAULT",
    "TRACK_SAMPLES_MAX",
]

DEGENERACY_RTOL = 1e-8          # min gap below this (times scale) is an EP
TRACK_SAMPLES_DEFAULT = 512
TRACK_SAMPLES_MAX = 65536
_TWO_PI = 2.0 * np.pi


# -- closed-form solvers ---------------------------------------------------

def dimer_bands_analytic(p: DimerParams, k):
    """The two dimer bands at momentum k (scalar or array).

    E_{1,2}(k) = delta*sin(mk) -/+ sqrt(alpha^2 + beta^2
                 + 2*alpha*beta*cos(mk) + (i*gamma + delta*sin(mk))^2)

    with the principal square root. Both values satisfy the characteristic
    polynomial of the dimer matrix; continuity across the branch cut is the
    tracker's job, not this formula's.
    """
    k = np.asarray(k, dtype=float)
    s = p.delta * np.sin(p.m * k)
    radicand = (p.alpha ** 2 + p.beta ** 2 + 2 * p.alpha * p.beta * np.cos(p.m * k)
                + (1j * p.gamma + s) ** 2)
    root = np.sqrt(radicand + 0j)
    return s - root, s + root


def _cubic_roots_vec(b, c, d):
    """Roots of E^3 + b E^2 + c E + d, elementwise over arrays.

    Cardano in depressed form with the better-conditioned cube-root branch,
    then one Newton step per root. Multiple roots are returned with
    multiplicity (the Newton step is skipped where the derivative is tiny).
    """
    b = np.asarray(b, dtype=complex)
    c = np.asarray(c, dtype=complex)
    d = np.asarray(d, dtype=complex)
    p = c - b * b / 3.0
    q = 2.0 * b ** 3 / 27.0 - b * c / 3.0 + d
    s = np.sqrt((q / 2.0) ** 2 + (p / 3.0) ** 3)
    u3a = -q / 2.0 + s
    u3b = -q / 2.0 - s
    u3 = np.where(np.abs(u3a) >= np.abs(u3b), u3a, u3b)
    tiny = np.abs(u3) == 0.0
    u = np.where(tiny, 1.0, u3) ** (1.0 / 3.0)
    v = np.where(tiny, 0.0, -p / (3.0 * u))
    u = np.where(tiny, 0.0, u)
    omega = np.exp(2j * np.pi / 3.0)
    t0 = u + v
    t1 = u * omega + v / omega
    t2 = u / omega + v * omega
    roots = np.stack([t0, t1, t2], axis=-1) - b[..., None] / 3.0

    bb = b[..., None]
    cc = c[..., None]
    dd = d[..., None]
    f = ((roots + bb) * roots + cc) * roots + dd
    df = (3.0 * roots + 2.0 * bb) * roots + cc
    scale = 1.0 + np.abs(bb) + np.abs(cc) + np.abs(dd)
    safe = np.abs(df) > 1e-12 * scale
    roots = np.where(safe, roots - f / np.where(safe, df, 1.0), roots)
    return roots


def solve_cubic(coefficients) -> np.ndarray:
    """Roots of a monic cubic given as ``[1, b, c, d]`` (descending powers)."""
    coefficients = np.asarray(coefficients, dtype=complex)
    if coefficients.shape != (4,):
        raise ValueError(f"need 4 coefficients of a monic cubic, got shape {coefficients.shape}")
    if coefficients[0] != 1.0:
        raise ValueError(f"cubic must be monic, got leading coefficient {coefficients[0]}")
    b, c, d = coefficients[1], coefficients[2], coefficients[3]
    return _cubic_roots_vec(b, c, d).reshape(3)


def _eig2_from_entries(e11, e12, e21, e22):
    mean = 0.5 * (e11 + e22)
    off = np.sqrt((0.5 * (e11 - e22)) ** 2 + e12 * e21 + 0j)
    return np.stack([mean - off, mean + off], axis=-1)


def eigenvalues(matrix) -> np.ndarray:
    """Eigenvalues of a Bloch matrix: closed forms for N in {2, 3}, else LAPACK."""
    mat = np.asarray(getattr(matrix, "entries", matrix), dtype=complex)
    n = mat.shape[0]
    if n == 2:
        return _eig2_from_entries(mat[0, 0], mat[0, 1], mat[1, 0], mat[1, 1]).reshape(2)
    if n == 3:
        coeffs = characteristic_coefficients(mat)
        return solve_cubic(coeffs)
    return np.linalg.eigvals(mat)


# -- grid evaluation -------------------------------------------------------

def _points(tvals, radius):
    tvals = np.asarray(tvals, dtype=float)
    z = np.exp(1j * tvals)
    if radius is not None:
        z = radius * z
    return z


def _trimer_coeff_grid(p, z):
    """Characteristic coefficients (c2, c1, c0) of the trimer over a z grid."""
    w = z ** p.m
    e11 = 1j * p.delta * (w ** 2 - w ** -2) + 1j * p.gamma
    e22 = p.v
    e33 = -1j * p.gamma
    b2 = p.beta ** 2
    a2 = p.alpha ** 2
    c2 = -(e11 + e22 + e33)
    c1 = (e11 * e22 - a2) + (e11 * e33 - b2) + (e22 * e33 - a2)
    det = (e11 * (e22 * e33 - a2)
           - p.alpha * (p.alpha * e33 - p.alpha * (p.beta * w))
           + (p.beta / w) * (a2 - e22 * (p.beta * w)))
    c0 = -det
    return c2, c1, c0


def _eig_grid(spec: ModelSpec, tvals, radius=None) -> np.ndarray:
    """Raw (unordered) eigenvalues over a parameter grid, shape (T, N)."""
    z = _points(tvals, radius)
    if spec.kind == "dimer":
        p = spec.params
        w = z ** p.m
        e11 = -1j * p.delta * (w - 1.0 / w) + 1j * p.gamma
        e22 = np.full_like(z, -1j * p.gamma)
        e12 = p.alpha + p.beta / w
        e21 = p.alpha + p.beta * w
        return _eig2_from_entries(e11, e12, e21, e22)
    if spec.kind == "trimer":
        c2, c1, c0 = _trimer_coeff_grid(spec.params, z)
        return _cubic_roots_vec(c2, c1, c0)
    n = spec.n_bands
    h = np.zeros(z.shape + (n, n), dtype=complex)
    for term in spec.fourier_terms():
        h += term.matrix * (z ** term.n)[..., None, None]
    return np.linalg.eigvals(h)


def _det_grid(spec: ModelSpec, tvals, e_ref: complex, radius=None) -> np.ndarray:
    """det(H - E_ref) over a parameter grid."""
    z = _points(tvals, radius)
    if spec.kind == "dimer":
        p = spec.params
        w = z ** p.m
        e11 = -1j * p.delta * (w - 1.0 / w) + 1j * p.gamma - e_ref
        e22 = -1j * p.gamma - e_ref
        e12 = p.alpha + p.beta / w
        e21 = p.alpha + p.beta * w
        return e11 * e22 - e12 * e21
    if spec.kind == "trimer":
        c2, c1, c0 = _trimer_coeff_grid(spec.params, z)
        # det(H - E) = (-1)^3 * det(E - H) = -(E^3 + c2 E^2 + c1 E + c0)
        e = e_ref
        return -(((e + c2) * e + c1) * e + c0)
    n = spec.n_bands
    h = np.zeros(z.shape + (n, n), dtype=complex)
    for term in spec.fourier_terms():
        h += term.matrix * (z ** term.n)[..., None, None]
    return np.linalg.det(h - e_ref * np.eye(n))


def _raw_scalar_factory(spec: ModelSpec, radius) -> Callable[[float], np.ndarray]:
    """Fast scalar evaluator of raw eigenvalues at one parameter value.

    Crossing bisection calls this thousands of times per sweep, so the
    built-in families use plain cmath instead of numpy.
    """
    r = 1.0 if radius is None else float(radius)
    if spec.kind == "dimer":
        p = spec.params

        def eval_dimer(t: float) -> np.ndarray:
            w = (r * cmath.exp(1j * t)) ** p.m
            e11 = -1j * p.delta * (w - 1.0 / w) + 1j * p.gamma
            e22 = -1j * p.gamma
            mean = 0.5 * (e11 + e22)
            off = cmath.sqrt((0.5 * (e11 - e22)) ** 2
                             + (p.alpha + p.beta / w) * (p.alpha + p.beta * w))
            return np.array([mean - off, mean + off])

        return eval_dimer
    if spec.kind == "trimer":
        p = spec.params
        a2 = p.alpha ** 2
        b2 = p.beta ** 2

        def eval_trimer(t: float) -> np.ndarray:
            w = (r * cmath.exp(1j * t)) ** p.m
            e11 = 1j * p.delta * (w * w - 1.0 / (w * w)) + 1j * p.gamma
            e33 = -1j * p.gamma
            c2 = -(e11 + p.v + e33)
            c1 = (e11 * p.v - a2) + (e11 * e33 - b2) + (p.v * e33 - a2)
            det = (e11 * (p.v * e33 - a2)
                   - p.alpha * (p.alpha * e33 - p.alpha * p.beta * w)
                   + (p.beta / w) * (a2 - p.v * p.beta * w))
            c0 = -det
            # depressed Cardano, one Newton polish
            pp = c1 - c2 * c2 / 3.0
            qq = 2.0 * c2 ** 3 / 27.0 - c2 * c1 / 3.0 + c0
            s = cmath.sqrt((qq / 2.0) ** 2 + (pp / 3.0) ** 3)
            u3 = -qq / 2.0 + s
            alt = -qq / 2.0 - s
            if abs(alt) > abs(u3):
                u3 = alt
            if u3 == 0.0:
                base = -c2 / 3.0
                return np.array([base, base, base])
            u = u3 ** (1.0 / 3.0)
            v = -pp / (3.0 * u)
            omega = complex(-0.5, 0.8660254037844386)
            roots = [u + v - c2 / 3.0,
                     u * omega + v / omega - c2 / 3.0,
                     u / omega + v * omega - c2 / 3.0]
            scale = 1.0 + abs(c2) + abs(c1) + abs(c0)
            out = []
            for rt in roots:
                df = (3.0 * rt + 2.0 * c2) * rt + c1
                if abs(df) > 1e-12 * scale:
                    f = ((rt + c2) * rt + c1) * rt + c0
                    rt = rt - f / df
                out.append(rt)
            return np.array(out)

        return eval_trimer

    def eval_generic(t: float) -> np.ndarray:
        z = r * cmath.exp(1j * t)
        return np.linalg.eigvals(bloch_matrix_z(spec, z).entries)

    return eval_generic


# -- matching --------------------------------------------------------------

_PERMS3 = tuple(itertools.permutations(range(3)))
_PERMS3_ARR = np.array(_PERMS3)
# _COMPOSE3[a, b] = index of the permutation (P_a after P_b): x -> P_a[P_b[x]]
_COMPOSE3 = np.array([[ _PERMS3.index(tuple(pa[pb[x]] for x in range(3)))
                        for pb in _PERMS3] for pa in _PERMS3])


def _match_chain(raw: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Chain consecutive samples into continuous bands.

    Returns ``(indices, jumps)``: ``indices[j, n]`` is the raw column of
    band n at sample j (bands start in ascending real-part order with
    imaginary-part tie-break), and ``jumps[j]`` is the largest matched step
    between samples j and j+1.
    """
    t, n = raw.shape
    p0 = np.lexsort((raw[0].imag, raw[0].real))
    if n == 2:
        d_keep = np.maximum(np.abs(raw[1:, 0] - raw[:-1, 0]), np.abs(raw[1:, 1] - raw[:-1, 1]))
        s_keep = np.abs(raw[1:, 0] - raw[:-1, 0]) + np.abs(raw[1:, 1] - raw[:-1, 1])
        d_swap = np.maximum(np.abs(raw[1:, 1] - raw[:-1, 0]), np.abs(raw[1:, 0] - raw[:-1, 1]))
        s_swap = np.abs(raw[1:, 1] - raw[:-1, 0]) + np.abs(raw[1:, 0] - raw[:-1, 1])
        swap = s_swap < s_keep
        jumps = np.where(swap, d_swap, d_keep)
        flips = np.concatenate([[0], np.cumsum(swap) % 2])
        indices = np.where(flips[:, None] == 0, p0[None, :], p0[None, ::-1])
        return indices.astype(np.intp), jumps
    if n == 3:
        costs = np.empty((6, t - 1))
        maxes = np.empty((6, t - 1))
        for i, perm in enumerate(_PERMS3):
            d = np.abs(raw[1:, list(perm)] - raw[:-1, :])
            costs[i] = d.sum(axis=1)
            maxes[i] = d.max(axis=1)
        decisions = np.argmin(costs, axis=0)
        jumps = maxes[decisions, np.arange(t - 1)]
        prefix = np.empty(t, dtype=np.intp)
        prefix[0] = 0  # identity is _PERMS3[0]
        comp = _COMPOSE3
        pr = 0
        for j in range(t - 1):
            pr = comp[decisions[j], pr]
            prefix[j + 1] = pr
        indices = _PERMS3_ARR[prefix][:, p0]
        return indices.astype(np.intp), jumps
    from scipy.optimize import linear_sum_assignment
    indices = np.empty((t, n), dtype=np.intp)
    indices[0] = p0
    jumps = np.empty(t - 1)
    current = np.arange(n)
    chain = [np.arange(n)]
    for j in range(t - 1):
        cost = np.abs(raw[j + 1][None, :] - raw[j][:, None])
        _, cols = linear_sum_assignment(cost)
        jumps[j] = cost[np.arange(n), cols].max()
        current = cols[current]
        chain.append(current.copy())
    for j in range(1, t):
        indices[j] = chain[j][p0]
    return indices, jumps


# -- trajectories ----------------------------------------------------------

@dataclass(frozen=True)
class BandSample:
    """Raw spectrum at one momentum: the N eigenvalues in solver order."""

    k: float
    energies: np.ndarray

    @property
    def n_bands(self) -> int:
        return len(self.energies)


def sample_bands(spec: ModelSpec, k: float) -> BandSample:
    """Unordered eigenvalues of H(k); band identity is the tracker's job."""
    return BandSample(float(k), _eig_grid(spec, np.array([k]))[0])


@dataclass
class BandTrajectory:
    """Continuity-tracked bands over one closed loop in parameter space.

    ``t_grid`` holds the loop parameter: momentum k for zone trajectories,
    the angle of z = r*exp(i*theta) for circles in the complex plane.
    ``bands[n]`` is the n-th tracked band, ordered at the base point by
    ascending real part (ties by imaginary part). ``closure`` satisfies
    bands[n][-1] == bands[closure(n)][0] within the closure tolerance.
    """

    model: ModelSpec
    t_grid: np.ndarray
    bands: np.ndarray
    closure: Permutation
    initial_order: np.ndarray
    radius: float | None = None
    scale: float = 1.0
    min_gap: float = 0.0
    max_jump: float = 0.0
    _evaluator: Callable[[float], np.ndarray] | None = field(default=None, repr=False)

    @property
    def n_bands(self) -> int:
        return self.bands.shape[0]

    @property
    def samples(self) -> int:
        return len(self.t_grid) - 1

    @property
    def k0(self) -> float:
        return float(self.t_grid[0])

    @property
    def k_grid(self) -> np.ndarray:
        return self.t_grid

    @property
    def closure_permutation(self) -> Permutation:
        return self.closure

    def evaluate_raw(self, t: float) -> np.ndarray:
        """Unordered eigenvalues at an arbitrary loop parameter."""
        if self._evaluator is None:
            self._evaluator = _raw_scalar_factory(self.model, self.radius)
        return self._evaluator(t)


def _closure_permutation(bands: np.ndarray, tol: float) -> Permutation | None:
    starts = bands[:, 0]
    ends = bands[:, -1]
    n = bands.shape[0]
    image = []
    for i in range(n):
        dist = np.abs(starts - ends[i])
        j = int(np.argmin(dist))
        if dist[j] > tol:
            return None
        image.append(j)
    if sorted(image) != list(range(n)):
        return None
    return Permutation(tuple(image))


def _track(spec: ModelSpec, t0: float, samples: int, radius) -> BandTrajectory:
    if samples < 64:
        raise ValueError(f"need at least 64 samples, got {samples}")
    k = int(samples)
    t0 = float(t0)
    nudges = 0
    while True:
        tvals = t0 + np.linspace(0.0, _TWO_PI, k + 1)
        raw = _eig_grid(spec, tvals, radius)
        scale = 1.0 + float(np.abs(raw).max())
        gaps = np.abs(raw[:, :, None] - raw[:, None, :])
        gaps[:, np.arange(raw.shape[1]), np.arange(raw.shape[1])] = np.inf
        min_gap = float(gaps.min())
        if min_gap < DEGENERACY_RTOL * scale:
            raise DegeneracyEncountered(
                f"minimum band gap {min_gap:.3e} below tolerance "
                f"{DEGENERACY_RTOL * scale:.3e}; parameters sit on an exceptional point")
        # a real-part tie at the base point leaves the initial order, and any
        # crossing pinned there, ill-defined: shift the base by one grid step
        first = np.sort(raw[0].real)
        if np.min(np.diff(first)) < 1e-9 * scale and nudges < 8:
            t0 += _TWO_PI / k
            nudges += 1
            continue
        indices, jumps = _match_chain(raw)
        bands = raw[np.arange(k + 1)[:, None], indices].T
        max_jump = float(jumps.max())
        closure = _closure_permutation(bands, 1e-8 * scale)
        if max_jump < 0.5 * min_gap and closure is not None:
            return BandTrajectory(
                model=spec, t_grid=tvals, bands=bands, closure=closure,
                initial_order=indices[0].copy(), radius=radius, scale=scale,
                min_gap=min_gap, max_jump=max_jump)
        if k >= TRACK_SAMPLES_MAX:
            raise RefinementExhausted(
                f"no stable matching at {k} samples "
                f"(max jump {max_jump:.3e}, min gap {min_gap:.3e})")
        k *= 2


def track_bands(spec: ModelSpec, k0: float = 0.0,
                samples: int = TRACK_SAMPLES_DEFAULT) -> BandTrajectory:
    """Track the complex bands over one Brillouin-zone period [k0, k0+2pi].

    The sample count doubles (up to a cap) until the largest matched jump is
    below half the smallest inter-band gap and the endpoint multiset closes
    onto the starting one. Raises :class:`DegeneracyEncountered` on (or
    numerically on) an exceptional point and :class:`RefinementExhausted`
    when the cap is reached.
    """
    return _track(spec, k0, samples, None)


def riemann_loop(spec: ModelSpec, radius: float, samples: int = TRACK_SAMPLES_DEFAULT,
                 theta0: float = 0.0) -> BandTrajectory:
    """Track eigenvalues of H(z) along the circle z = radius * exp(i*theta).

    radius = 1 reproduces :func:`track_bands` up to sampling. The loop shows
    which branch points in the z-plane the bands wind around.
    """
    if radius <= 0:
        raise ValueError(f"radius must be positive, got {radius}")
    return _track(spec, theta0, samples, float(radius))
