"""Bloch Hamiltonians of one-dimensional gain-loss lattices.

Two concrete families are built in:

* a dimer chain (two sites per cell, onsite +i*gamma / -i*gamma) with
  intra-cell hopping ``alpha`` and m-th-neighbour hoppings ``beta`` (between
  sublattices) and ``delta`` (gain-site to gain-site),

      H(k) = [[2*delta*sin(m*k) + i*gamma,  alpha + beta*exp(-i*m*k)],
              [alpha + beta*exp(+i*m*k),   -i*gamma]]

* a trimer chain (three sites per cell) with intra-cell coupling ``alpha``,
  m-th-neighbour coupling ``beta``, 2m-th-neighbour coupling ``delta`` and a
  real onsite potential ``v`` on the middle site,

      H(k) = [[-2*delta*sin(2*m*k) + i*gamma,  alpha,  beta*exp(-i*m*k)],
              [alpha,                         v,       alpha],
              [beta*exp(+i*m*k),              alpha,  -i*gamma]]

plus a generic N-band family given as a finite Fourier sum sum_n A_n e^{ink}.
Every model can also be evaluated off the Brillouin zone at a complex
coordinate z, where each e^{ik} is replaced by z (so e^{-imk} -> z^{-m});
on the unit circle z = e^{ik} this reproduces the momentum-space matrix.
Momentum is measured in units of the inverse lattice constant, so the zone
has period 2*pi.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from .errors import ZeroModulus

__all__ = [
    "DimerParams",
    "TrimerParams",
    "FourierTerm",
    "GenericParams",
    "ModelSpec",
    "BlochMatrix",
    "dimer_hamiltonian",
    "trimer_hamiltonian",
    "bloch_matrix",
    "bloch_matrix_z",
    "characteristic_coefficients",
    "model_from_json",
    "model_to_json",
]


def _require_finite(**fields: float) -> None:
    for name, value in fields.items():
        if not math.isfinite(value):
            raise ValueError(f"{name} must be finite, got {value!r}")


@dataclass(frozen=True)
class DimerParams:
    """Parameters of the two-band gain-loss dimer chain."""

    alpha: float
    beta: float
    delta: float
    gamma: float
    m: int = 1

    def __post_init__(self):
        _require_finite(alpha=self.alpha, beta=self.beta,
                        delta=self.delta, gamma=self.gamma)
        if self.m < 1 or self.m != int(self.m):
            raise ValueError(f"neighbour order m must be a positive integer, got {self.m}")


@dataclass(frozen=True)
class TrimerParams:
    """Parameters of the three-band gain-loss trimer chain."""

    alpha: float
    beta: float
    delta: float
    gamma: float
    v: float
    m: int = 1

    def __post_init__(self):
        _require_finite(alpha=self.alpha, beta=self.beta, delta=self.delta,
                        gamma=self.gamma, v=self.v)
        if self.m < 1 or self.m != int(self.m):
            raise ValueError(f"neighbour order m must be a positive integer, got {self.m}")


@dataclass(frozen=True)
class FourierTerm:
    """One term A * e^{i n k} of a generic Bloch Hamiltonian."""

    n: int
    matrix: np.ndarray

    def __post_init__(self):
        mat = np.asarray(self.matrix, dtype=complex)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError(f"Fourier coefficient must be a square matrix, got shape {mat.shape}")
        if not np.all(np.isfinite(mat)):
            raise ValueError("Fourier coefficient matrix contains non-finite entries")
        object.__setattr__(self, "matrix", mat)


@dataclass(frozen=True)
class GenericParams:
    """A user-defined N-band model as a finite Fourier sum."""

    dimension: int
    terms: tuple[FourierTerm, ...]

    def __post_init__(self):
        if self.dimension < 2:
            raise ValueError("generic models need at least 2 bands")
        terms = tuple(self.terms)
        for t in terms:
            if t.matrix.shape != (self.dimension, self.dimension):
                raise ValueError(
                    f"Fourier term for n={t.n} has shape {t.matrix.shape}, "
                    f"expected ({self.dimension}, {self.dimension})")
        object.__setattr__(self, "terms", terms)


@dataclass(frozen=True)
class ModelSpec:
    """A Bloch-Hamiltonian family: dimer, trimer, or generic Fourier sum."""

    kind: str
    params: DimerParams | TrimerParams | GenericParams

    _KINDS = ("dimer", "trimer", "generic")

    def __post_init__(self):
        if self.kind not in self._KINDS:
            raise ValueError(f"unknown model kind {self.kind!r}")
        expected = {"dimer": DimerParams, "trimer": TrimerParams,
                    "generic": GenericParams}[self.kind]
        if not isinstance(self.params, expected):
            raise TypeError(f"{self.kind} model needs {expected.__name__}, "
                            f"got {type(self.params).__name__}")

    @staticmethod
    def dimer(alpha: float, beta: float, delta: float, gamma: float, m: int = 1) -> "ModelSpec":
        return ModelSpec("dimer", DimerParams(alpha, beta, delta, gamma, m))

    @staticmethod
    def trimer(alpha: float, beta: float, delta: float, gamma: float,
               v: float, m: int = 1) -> "ModelSpec":
        return ModelSpec("trimer", TrimerParams(alpha, beta, delta, gamma, v, m))

    @staticmethod
    def generic(terms: Sequence[tuple[int, np.ndarray]]) -> "ModelSpec":
        fts = tuple(FourierTerm(int(n), np.asarray(a, dtype=complex)) for n, a in terms)
        if not fts:
            raise ValueError("generic model needs at least one Fourier term")
        return ModelSpec("generic", GenericParams(fts[0].matrix.shape[0], fts))

    @property
    def n_bands(self) -> int:
        if self.kind == "dimer":
            return 2
        if self.kind == "trimer":
            return 3
        return self.params.dimension

    def replace_param(self, name: str, value: float) -> "ModelSpec":
        """New spec with one named scalar parameter replaced (sweeps)."""
        if self.kind == "generic":
            raise ValueError("generic models have no named scalar parameters")
        if name not in {f.name for f in self.params.__dataclass_fields__.values()}:
            raise ValueError(f"model has no parameter {name!r}")
        return ModelSpec(self.kind, replace(self.params, **{name: value}))

    def fourier_terms(self) -> tuple[FourierTerm, ...]:
        """The model as a Fourier sum sum_n A_n e^{ink}.

        The dimer's 2*delta*sin(mk) diagonal is stored as
        -i*delta*(e^{imk} - e^{-imk}) so that substituting e^{ik} -> z is the
        single evaluation rule for every entry.
        """
        if self.kind == "dimer":
            p = self.params
            a0 = np.array([[1j * p.gamma, p.alpha], [p.alpha, -1j * p.gamma]], dtype=complex)
            a_plus = np.array([[-1j * p.delta, 0.0], [p.beta, 0.0]], dtype=complex)
            a_minus = np.array([[1j * p.delta, p.beta], [0.0, 0.0]], dtype=complex)
            return (FourierTerm(0, a0), FourierTerm(p.m, a_plus), FourierTerm(-p.m, a_minus))
        if self.kind == "trimer":
            p = self.params
            a0 = np.array([[1j * p.gamma, p.alpha, 0.0],
                           [p.alpha, p.v, p.alpha],
                           [0.0, p.alpha, -1j * p.gamma]], dtype=complex)
            a_p = np.zeros((3, 3), complex)
            a_p[2, 0] = p.beta
            a_m = np.zeros((3, 3), complex)
            a_m[0, 2] = p.beta
            a_2p = np.zeros((3, 3), complex)
            a_2p[0, 0] = 1j * p.delta
            a_2m = np.zeros((3, 3), complex)
            a_2m[0, 0] = -1j * p.delta
            return (FourierTerm(0, a0), FourierTerm(p.m, a_p), FourierTerm(-p.m, a_m),
                    FourierTerm(2 * p.m, a_2p), FourierTerm(-2 * p.m, a_2m))
        return self.params.terms

    # -- JSON -------------------------------------------------------------

    def to_json_dict(self) -> dict:
        if self.kind == "dimer":
            p = self.params
            return {"kind": "dimer", "params": {"alpha": p.alpha, "beta": p.beta,
                                                "delta": p.delta, "gamma": p.gamma, "m": p.m}}
        if self.kind == "trimer":
            p = self.params
            return {"kind": "trimer", "params": {"alpha": p.alpha, "beta": p.beta,
                                                 "delta": p.delta, "gamma": p.gamma,
                                                 "v": p.v, "m": p.m}}
        p = self.params
        return {"kind": "generic", "params": {
            "dimension": p.dimension,
            "terms": [{"n": t.n,
                       "matrix": [[[float(x.real), float(x.imag)] for x in row]
                                  for row in t.matrix]}
                      for t in p.terms]}}

    @staticmethod
    def from_json_dict(doc: dict) -> "ModelSpec":
        try:
            kind = doc["kind"]
            params = doc["params"]
        except (KeyError, TypeError) as exc:
            raise ValueError(f"model document must have 'kind' and 'params': {exc}") from exc
        if kind == "dimer":
            return ModelSpec.dimer(float(params["alpha"]), float(params["beta"]),
                                   float(params["delta"]), float(params["gamma"]),
                                   int(params.get("m", 1)))
        if kind == "trimer":
            return ModelSpec.trimer(float(params["alpha"]), float(params["beta"]),
                                    float(params["delta"]), float(params["gamma"]),
                                    float(params["v"]), int(params.get("m", 1)))
        if kind == "generic":
            terms = []
            for t in params["terms"]:
                mat = np.array([[complex(re, im) for re, im in row] for row in t["matrix"]])
                terms.append((int(t["n"]), mat))
            return ModelSpec.generic(terms)
        raise ValueError(f"unknown model kind {kind!r}")


def model_to_json(spec: ModelSpec) -> str:
    return json.dumps(spec.to_json_dict(), indent=2)


def model_from_json(text: str) -> ModelSpec:
    return ModelSpec.from_json_dict(json.loads(text))


@dataclass(frozen=True)
class BlochMatrix:
    """An evaluated Bloch matrix together with its evaluation point.

    ``space`` is "k" for real momentum and "z" for a complexified point.
    """

    entries: np.ndarray
    point: complex
    space: str = "k"

    def __post_init__(self):
        mat = np.asarray(self.entries, dtype=complex)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError(f"Bloch matrix must be square, got shape {mat.shape}")
        object.__setattr__(self, "entries", mat)

    @property
    def n(self) -> int:
        return self.entries.shape[0]


def dimer_hamiltonian(p: DimerParams, k: float) -> BlochMatrix:
    """The 2x2 dimer Bloch matrix at real momentum k."""
    s = 2.0 * p.delta * np.sin(p.m * k)
    off_minus = p.alpha + p.beta * np.exp(-1j * p.m * k)
    off_plus = p.alpha + p.beta * np.exp(1j * p.m * k)
    mat = np.array([[s + 1j * p.gamma, off_minus],
                    [off_plus, -1j * p.gamma]])
    return BlochMatrix(mat, k, "k")


def trimer_hamiltonian(p: TrimerParams, k: float) -> BlochMatrix:
    """The 3x3 trimer Bloch matrix at real momentum k."""
    s = -2.0 * p.delta * np.sin(2 * p.m * k)
    mat = np.array([
        [s + 1j * p.gamma, p.alpha, p.beta * np.exp(-1j * p.m * k)],
        [p.alpha, p.v, p.alpha],
        [p.beta * np.exp(1j * p.m * k), p.alpha, -1j * p.gamma],
    ])
    return BlochMatrix(mat, k, "k")


def bloch_matrix(spec: ModelSpec, k: float) -> BlochMatrix:
    """Evaluate any model at real momentum k."""
    if spec.kind == "dimer":
        return dimer_hamiltonian(spec.params, k)
    if spec.kind == "trimer":
        return trimer_hamiltonian(spec.params, k)
    return bloch_matrix_z(spec, np.exp(1j * k))


def bloch_matrix_z(spec: ModelSpec, z: complex) -> BlochMatrix:
    """Evaluate a model at complex coordinate z, replacing e^{ik} by z.

    At |z| = 1 this coincides with :func:`bloch_matrix` at k = arg z.
    Raises :class:`ZeroModulus` for z = 0 when the model has negative
    Fourier exponents (the matrix has a pole there).
    """
    z = complex(z)
    terms = spec.fourier_terms()
    if z == 0 and any(t.n < 0 for t in terms):
        raise ZeroModulus("z = 0 is a pole of this model (negative Fourier exponents)")
    n = spec.n_bands
    mat = np.zeros((n, n), dtype=complex)
    for t in terms:
        mat += t.matrix * z ** t.n
    return BlochMatrix(mat, z, "z")


def characteristic_coefficients(matrix) -> np.ndarray:
    """Monic characteristic polynomial coefficients of a square matrix.

    Returns ``[1, c_{N-1}, ..., c_0]`` (descending powers) with
    det(E*I - M) = E^N + c_{N-1} E^{N-1} + ... + c_0, computed by the
    Faddeev-LeVerrier recursion (no eigendecomposition involved, so it can
    serve as an independent check on eigenvalue routines).
    """
    mat = np.asarray(getattr(matrix, "entries", matrix), dtype=complex)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ValueError(f"need a square matrix, got shape {mat.shape}")
    n = mat.shape[0]
    coeffs = np.empty(n + 1, dtype=complex)
    coeffs[0] = 1.0
    work = mat.copy()
    for i in range(1, n + 1):
        c = -np.trace(work) / i
        coeffs[i] = c
        if i < n:
            work = mat @ (work + c * np.eye(n))
    return coeffs
