"""See-saw search for the quantum maximum over 3-qubit pure states and qubit observables.

Observables are ``n . sigma`` with unit Bloch vectors n, so any expectation value
of the Bell operator only depends on the state's Pauli correlation tensor
``S[i, j, k] = <psi| s_i (x) s_j (x) s_k |psi>``. The iteration alternates

1. for each party in turn, replace every Bloch vector by its normalized local
   gradient (the exact optimum with everything else fixed);
2. replace the state by the top eigenvector of the 8x8 Bell operator.

Neither step can lower the objective. Randomness comes from numpy's PCG64 bit
generator; restart r uses the r-th child of ``SeedSequence(seed)``.
"""

from __future__ import annotations

import logging
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ._parallel import worker_count
from .errors import InvalidParameterError, InvalidStateError, UnsupportedFamilyError
from .quantum import CorrelationTensor, MeasurementAngles, quantum_lower_bound
from .tensor import BellTensor

log = logging.getLogger(__name__)

PAULI = np.array([
    [[0, 1], [1, 0]],
    [[0, -1j], [1j, 0]],
    [[1, 0], [0, -1]],
], dtype=complex)

DEFAULT_RESTARTS = 20
DEFAULT_TOL = 1e-9
MAX_ITER = 10_000
NORM_TOL = 1e-12
DEGENERACY_TOL = 1e-10
MONOTONE_SLACK = 1e-10


class ConjectureWarning(UserWarning):
    """Numerical optimum above the closed-form quantum lower bound."""


@dataclass(frozen=True, eq=False)
class OptResult:
    value: float
    angles: MeasurementAngles
    state: np.ndarray
    iterations: int
    converged: bool
    restarts_used: int

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "angles": self.angles.to_dict(),
            "state": [[float(z.real), float(z.imag)] for z in self.state],
            "iterations": self.iterations,
            "converged": self.converged,
            "restarts_used": self.restarts_used,
        }


def observables(angles: MeasurementAngles) -> np.ndarray:
    """2x2 observable matrices, shape (3, m, 2, 2)."""
    return np.einsum("pmi,ixy->pmxy", angles.bloch_vectors(), PAULI)


def _check_state(state) -> np.ndarray:
    psi = np.asarray(state, dtype=complex).reshape(-1)
    if psi.shape != (8,):
        raise InvalidStateError(f"state must have 8 amplitudes, got {psi.size}")
    if abs(np.linalg.norm(psi) - 1.0) > NORM_TOL:
        raise InvalidStateError(f"state norm is {np.linalg.norm(psi):.15g}, expected 1")
    return psi


def bell_operator(t: BellTensor, angles: MeasurementAngles) -> np.ndarray:
    obs = observables(angles)
    w = np.einsum("abc,axy,bzw,cuv->xzuywv", t.coeffs, obs[0], obs[1], obs[2])
    return w.reshape(8, 8)


def evaluate_operator(t: BellTensor, angles: MeasurementAngles, state) -> float:
    psi = _check_state(state)
    return float(np.real(np.vdot(psi, bell_operator(t, angles) @ psi)))


def state_correlators(angles: MeasurementAngles, state) -> CorrelationTensor:
    """``<psi| A_a (x) B_b (x) C_c |psi>`` for every setting triple, via explicit Kronecker products."""
    psi = _check_state(state)
    obs = observables(angles)
    m = angles.m
    values = np.empty((m, m, m))
    for a in range(m):
        for b in range(m):
            ab = np.kron(obs[0, a], obs[1, b])
            for c in range(m):
                values[a, b, c] = np.vdot(psi, np.kron(ab, obs[2, c]) @ psi).real
    return CorrelationTensor(m=m, values=values)


def _pauli_tensor(psi: np.ndarray) -> np.ndarray:
    p = psi.reshape(2, 2, 2)
    return np.einsum("abc,iad,jbe,kcf,def->ijk", p.conj(), PAULI, PAULI, PAULI, p).real


def _operator_from_kernel(kernel: np.ndarray) -> np.ndarray:
    return np.einsum("ijk,iad,jbe,kcf->abcdef", kernel, PAULI, PAULI, PAULI).reshape(8, 8)


def top_eigenvector(h: np.ndarray) -> tuple[float, np.ndarray]:
    """Largest eigenpair of a Hermitian matrix with a basis-defined choice of vector.

    In a degenerate top eigenspace the first computational basis vector with a
    nonzero projection is projected and normalized. The phase is then fixed so
    that the first largest-magnitude amplitude is real positive.
    """
    evals, evecs = np.linalg.eigh(h)
    top = evals[-1]
    block = evecs[:, evals >= top - DEGENERACY_TOL * max(1.0, abs(top))]
    if block.shape[1] == 1:
        v = block[:, 0]
    else:
        proj = block @ block.conj().T
        k = int(np.flatnonzero(np.linalg.norm(proj, axis=0) > 1e-6)[0])
        v = proj[:, k] / np.linalg.norm(proj[:, k])
    mags = np.abs(v)
    k = int(np.flatnonzero(mags >= mags.max() - 1e-9)[0])
    v = v * (np.conj(v[k]) / mags[k])
    return float(top), v


def _random_bloch(rng: np.random.Generator, m: int) -> np.ndarray:
    cos_t = rng.uniform(-1.0, 1.0, size=(3, m))
    phi = rng.uniform(0.0, 2 * np.pi, size=(3, m))
    sin_t = np.sqrt(1.0 - cos_t**2)
    return np.stack([sin_t * np.cos(phi), sin_t * np.sin(phi), cos_t], axis=-1)


_GRAD = (
    "abc,bj,ck,ijk->ai",
    "abc,ai,ck,ijk->bj",
    "abc,ai,bj,ijk->ck",
)


def _single_run(coeffs: np.ndarray, rng: np.random.Generator, tol: float, max_iter: int):
    m = coeffs.shape[0]
    n = _random_bloch(rng, m)
    kernel = np.einsum("abc,ai,bj,ck->ijk", coeffs, n[0], n[1], n[2])
    value, psi = top_eigenvector(_operator_from_kernel(kernel))
    converged = False
    it = 0
    while it < max_iter:
        it += 1
        s = _pauli_tensor(psi)
        for p in range(3):
            others = [n[q] for q in range(3) if q != p]
            g = np.einsum(_GRAD[p], coeffs, *others, s)
            norms = np.linalg.norm(g, axis=1)
            live = norms > 1e-14
            n[p][live] = g[live] / norms[live, None]
        kernel = np.einsum("abc,ai,bj,ck->ijk", coeffs, n[0], n[1], n[2])
        new, psi = top_eigenvector(_operator_from_kernel(kernel))
        if new < value - MONOTONE_SLACK * max(1.0, abs(value)):
            raise RuntimeError(f"see-saw objective decreased: {value!r} -> {new!r}")
        gain = new - value
        value = max(value, new)
        if gain <= tol * max(1.0, abs(value)):
            converged = True
            break
    return value, n, psi, it, converged


def seesaw_quantum_max(
    t: BellTensor,
    restarts: int = DEFAULT_RESTARTS,
    seed: int = 0,
    tol: float = DEFAULT_TOL,
    max_iter: int = MAX_ITER,
) -> OptResult:
    if restarts < 1:
        raise InvalidParameterError(f"restarts must be >= 1, got {restarts}")
    if tol <= 0:
        raise InvalidParameterError(f"tol must be > 0, got {tol}")
    children = np.random.SeedSequence(seed).spawn(restarts)

    def run(ss):
        return _single_run(t.coeffs, np.random.Generator(np.random.PCG64(ss)), tol, max_iter)

    with ThreadPoolExecutor(max_workers=worker_count(restarts)) as pool:
        runs = list(pool.map(run, children))

    values = np.array([r[0] for r in runs])
    best_val = values.max()
    idx = int(np.flatnonzero(values >= best_val - 1e-12 * max(1.0, abs(best_val)))[0])
    value, n, psi, it, converged = runs[idx]
    angles = MeasurementAngles.from_bloch(n)
    # report the value of the stored strategy itself
    value = evaluate_operator(t, angles, psi)
    log.debug("restart values: %s", values)

    try:
        q = quantum_lower_bound(t)
    except UnsupportedFamilyError:
        q = None
    if q is not None and value > q + 1e-6:
        warnings.warn(
            f"see-saw value {value!r} exceeds the closed-form quantum lower bound {q!r}",
            ConjectureWarning,
            stacklevel=2,
        )
    return OptResult(
        value=value, angles=angles, state=psi, iterations=it,
        converged=converged, restarts_used=restarts,
    )
