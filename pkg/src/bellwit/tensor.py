"""Bell-coefficient tensors M[alpha, beta, gamma] for three parties with m settings each.

Two families are built in:

* cosine: ``M = cos(pi (alpha + beta + gamma - delta) / m)``. m=2, delta=0 is the
  Mermin polynomial; m=3, delta=-1/2 is the three-setting inequality of Bancal et al.
* parity: nonzero only where ``alpha + beta + gamma`` is a multiple of m, with sign
  ``(-1)**((alpha + beta + gamma) // m)`` (extended parity game).

Anything else is a custom tensor, usable wherever no closed form is needed.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass

import numpy as np

from .errors import InvalidDataError, InvalidParameterError, UnsupportedFamilyError

ZERO_TOL = 1e-12
DEFAULT_DELTA = -0.5


class Family(str, enum.Enum):
    COSINE = "cosine"
    PARITY = "parity"
    CUSTOM = "custom"


@dataclass(frozen=True, eq=False)
class BellTensor:
    m: int
    family: Family
    coeffs: np.ndarray
    delta: float | None = None

    def __post_init__(self):
        if self.m < 2:
            raise InvalidParameterError(f"m must be >= 2, got {self.m}")
        coeffs = np.asarray(self.coeffs, dtype=float)
        if coeffs.shape != (self.m,) * 3:
            raise InvalidDataError(
                f"coeffs must have shape {(self.m,) * 3}, got {coeffs.shape}"
            )
        coeffs.setflags(write=False)
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "family", Family(self.family))

    def is_party_symmetric(self, tol: float = ZERO_TOL) -> bool:
        c = self.coeffs
        return all(
            np.allclose(c, c.transpose(p), rtol=0.0, atol=tol)
            for p in itertools.permutations(range(3))
        )

    def validate(self) -> None:
        """Check the family-specific invariants; raise InvalidDataError naming the failure."""
        if self.family is Family.COSINE:
            if self.delta is None:
                raise InvalidDataError("cosine tensor requires delta")
            expected = _cosine_coeffs(self.m, self.delta)
            err = np.max(np.abs(self.coeffs - expected))
            if err > ZERO_TOL:
                raise InvalidDataError(
                    f"cosine coefficients deviate from defining formula by {err:.3g}"
                )
        elif self.family is Family.PARITY:
            if not np.all(np.isin(self.coeffs, (-1.0, 0.0, 1.0))):
                raise InvalidDataError("parity coefficients must lie in {-1, 0, +1}")
            if nonzero_count(self) != self.m**2:
                raise InvalidDataError(
                    f"parity tensor must have m^2 = {self.m**2} nonzero entries"
                )
            if not slice_structure_check(self):
                raise InvalidDataError("parity slices are not signed permutation matrices")
            if not np.array_equal(self.coeffs, _parity_coeffs(self.m)):
                raise InvalidDataError("parity coefficients do not match the parity rule")

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "family": self.family.value,
            "delta": self.delta,
            "coeffs": self.coeffs.tolist(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> BellTensor:
        """Inverse of :meth:`to_dict`; ``coeffs`` is nested as coeffs[alpha][beta][gamma]."""
        try:
            m = int(data["m"])
            family = Family(data.get("family", "custom"))
            coeffs = np.array(data["coeffs"], dtype=float)
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidDataError(f"malformed tensor document: {exc}") from exc
        delta = data.get("delta")
        tensor = cls(m=m, family=family, coeffs=coeffs,
                     delta=None if delta is None else float(delta))
        tensor.validate()
        return tensor


def _index_sums(m: int) -> np.ndarray:
    r = np.arange(m)
    return r[:, None, None] + r[None, :, None] + r[None, None, :]


def _cosine_coeffs(m: int, delta: float) -> np.ndarray:
    c = np.cos(np.pi * (_index_sums(m) - delta) / m)
    # exact zeros of cos come out as ~1e-17
    c[np.abs(c) < ZERO_TOL] = 0.0
    return c


def _parity_coeffs(m: int) -> np.ndarray:
    s = _index_sums(m)
    sign = np.where((s // m) % 2 == 0, 1.0, -1.0)
    return np.where(s % m == 0, sign, 0.0)


def build_cosine_tensor(m: int, delta: float = DEFAULT_DELTA) -> BellTensor:
    if m < 2:
        raise InvalidParameterError(f"m must be >= 2, got {m}")
    delta = float(delta)
    return BellTensor(m=m, family=Family.COSINE, coeffs=_cosine_coeffs(m, delta), delta=delta)


def build_parity_tensor(m: int) -> BellTensor:
    # indices run over 0..m-1 so that the tensor has m^3 entries and m^2 nonzeros
    if m < 2:
        raise InvalidParameterError(f"m must be >= 2, got {m}")
    return BellTensor(m=m, family=Family.PARITY, coeffs=_parity_coeffs(m))


def build_tensor(family: Family | str, m: int, delta: float = DEFAULT_DELTA) -> BellTensor:
    family = Family(family)
    if family is Family.COSINE:
        return build_cosine_tensor(m, delta)
    if family is Family.PARITY:
        return build_parity_tensor(m)
    raise UnsupportedFamilyError("custom tensors are loaded from file, not built")


def nonzero_count(t: BellTensor) -> int:
    return int(np.count_nonzero(np.abs(t.coeffs) > ZERO_TOL))


def _is_signed_permutation(mat: np.ndarray) -> bool:
    nz = np.abs(mat) > ZERO_TOL
    if not np.all(np.abs(np.abs(mat[nz]) - 1.0) <= ZERO_TOL):
        return False
    return bool(np.all(nz.sum(axis=0) == 1) and np.all(nz.sum(axis=1) == 1))


def slice_structure_check(t: BellTensor) -> bool:
    """True iff every slice with one index fixed is a signed permutation matrix."""
    if t.family is not Family.PARITY:
        raise UnsupportedFamilyError(
            f"slice structure is defined for the parity family, not {t.family.value}"
        )
    c = t.coeffs
    for axis in range(3):
        for k in range(t.m):
            if not _is_signed_permutation(np.take(c, k, axis=axis)):
                return False
    return True
