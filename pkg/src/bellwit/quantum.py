"""Bell values of qubit measurement strategies on the (noisy) GHZ state.

Each party's setting mu is the +-1 observable ``n . sigma`` with Bloch vector
``n = (sin(theta) cos(phi), sin(theta) sin(phi), cos(theta))``. On
``rho(V) = V |GHZ><GHZ| + (1 - V) I/8`` the three-party correlator is

    V * sin(thA) sin(thB) sin(thC) * cos(phA + phB + phC)

since the maximally mixed part gives zero for traceless observables.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError, InvalidDataError, InvalidParameterError, UnsupportedFamilyError
from .tensor import BellTensor, Family

PARTIES = ("A", "B", "C")
CORRELATOR_TOL = 1e-9
TWO_PI = 2.0 * np.pi


@dataclass(frozen=True, eq=False)
class MeasurementAngles:
    """Polar angles ``theta[party, setting]`` and azimuths ``phi[party, setting]`` in radians."""

    m: int
    theta: np.ndarray
    phi: np.ndarray

    def __post_init__(self):
        theta = np.array(self.theta, dtype=float)
        phi = np.array(self.phi, dtype=float)
        if theta.shape != (3, self.m) or phi.shape != (3, self.m):
            raise DimensionMismatchError(
                f"angle arrays must have shape (3, {self.m}), got {theta.shape} and {phi.shape}"
            )
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "phi", phi)

    def bloch_vectors(self) -> np.ndarray:
        """Unit vectors with shape (3 parties, m settings, 3 components)."""
        st = np.sin(self.theta)
        return np.stack(
            [st * np.cos(self.phi), st * np.sin(self.phi), np.cos(self.theta)], axis=-1
        )

    @classmethod
    def from_bloch(cls, vectors: np.ndarray) -> MeasurementAngles:
        v = np.asarray(vectors, dtype=float)
        v = v / np.linalg.norm(v, axis=-1, keepdims=True)
        theta = np.arccos(np.clip(v[..., 2], -1.0, 1.0))
        phi = np.mod(np.arctan2(v[..., 1], v[..., 0]), TWO_PI)
        return cls(m=v.shape[1], theta=theta, phi=phi)

    def normalized(self) -> MeasurementAngles:
        """Same observables with theta in [0, pi] and phi in [0, 2pi)."""
        return MeasurementAngles.from_bloch(self.bloch_vectors())

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "theta": {p: self.theta[i].tolist() for i, p in enumerate(PARTIES)},
            "phi": {p: self.phi[i].tolist() for i, p in enumerate(PARTIES)},
        }

    @classmethod
    def from_dict(cls, data: dict) -> MeasurementAngles:
        try:
            return cls(
                m=int(data["m"]),
                theta=[data["theta"][p] for p in PARTIES],
                phi=[data["phi"][p] for p in PARTIES],
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidDataError(f"malformed angles document: {exc}") from exc


@dataclass(frozen=True, eq=False)
class CorrelationTensor:
    m: int
    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.shape != (self.m,) * 3:
            raise DimensionMismatchError(
                f"correlation values must have shape {(self.m,) * 3}, got {values.shape}"
            )
        if not np.all(np.isfinite(values)) or np.any(np.abs(values) > 1.0 + CORRELATOR_TOL):
            raise InvalidDataError("correlators must lie in [-1, 1]")
        object.__setattr__(self, "values", values)

    def to_dict(self) -> dict:
        return {"m": self.m, "values": self.values.tolist()}

    @classmethod
    def from_dict(cls, data: dict) -> CorrelationTensor:
        try:
            return cls(m=int(data["m"]), values=data["values"])
        except (KeyError, TypeError) as exc:
            raise InvalidDataError(f"malformed correlation document: {exc}") from exc


@dataclass(frozen=True)
class StateSpec:
    visibility: float = 1.0

    def __post_init__(self):
        if not 0.0 <= self.visibility <= 1.0:
            raise InvalidParameterError(f"visibility must be in [0, 1], got {self.visibility}")


def ghz_correlators(angles: MeasurementAngles, state: StateSpec = StateSpec()) -> CorrelationTensor:
    s = np.sin(angles.theta)
    p = angles.phi
    values = (
        s[0][:, None, None] * s[1][None, :, None] * s[2][None, None, :]
        * np.cos(p[0][:, None, None] + p[1][None, :, None] + p[2][None, None, :])
    )
    return CorrelationTensor(m=angles.m, values=state.visibility * values)


def canonical_angles(t: BellTensor) -> MeasurementAngles:
    """Equatorial settings that make every GHZ correlator equal its Bell coefficient.

    All measurements lie in the x-y plane (theta = pi/2); with theta = 0 every
    correlator would vanish.
    """
    mu = np.arange(t.m, dtype=float)
    if t.family is Family.COSINE:
        phi = np.pi * (mu - t.delta / 3.0) / t.m
    elif t.family is Family.PARITY:
        phi = np.pi * mu / t.m
    else:
        raise UnsupportedFamilyError("canonical angles exist only for cosine and parity tensors")
    phi = np.mod(phi, TWO_PI)
    return MeasurementAngles(
        m=t.m, theta=np.full((3, t.m), np.pi / 2), phi=np.tile(phi, (3, 1))
    )


def bell_value(t: BellTensor, c: CorrelationTensor) -> float:
    if t.m != c.m:
        raise DimensionMismatchError(f"tensor has m={t.m}, correlations have m={c.m}")
    return float(np.sum(t.coeffs * c.values))


def quantum_lower_bound(t: BellTensor) -> float:
    if t.family is Family.COSINE:
        return t.m**3 / 2.0
    if t.family is Family.PARITY:
        return float(t.m**2)
    raise UnsupportedFamilyError("no closed-form quantum bound for custom tensors")


def no_signalling_limit(t: BellTensor) -> float:
    return float(np.sum(np.abs(t.coeffs)))
