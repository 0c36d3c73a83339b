"""Biseparable bounds for three-party correlation Bell expressions.

If party X holds no entanglement with the other two, its outcomes can be fixed
to a sign vector and the expression collapses to a bipartite correlation
inequality with reduced coefficient matrix ``sum_x signs[x] M[x, ., .]``. The
quantum value of that bipartite inequality is at most ``m * sigma_max``; the
biseparable maximum is bounded by the largest such value over sign vectors and
over the choice of X.

For both built-in families the reduced matrices are negacyclic up to a column
reversal, so their spectrum is available in closed form from the first row.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import quantum
from ._parallel import worker_count
from .errors import (
    BudgetExceededError,
    InvalidParameterError,
    NotAvailableError,
    NotModifiedCirculantError,
    UnsupportedFamilyError,
)
from .tensor import BellTensor, Family

PARTIES = ("A", "B", "C")
MAX_BRUTEFORCE_M = 20
STRUCTURE_TOL = 1e-12
TIE_TOL = 1e-12
_CHUNK = 2048

# contraction of the tensor with a batch of sign vectors along each party's index
_CONTRACT = {"A": "sa,abc->sbc", "B": "sb,abc->sac", "C": "sc,abc->sab"}


def is_power_of_two(m: int) -> bool:
    return m >= 1 and (m & (m - 1)) == 0


@dataclass(frozen=True, eq=False)
class ReducedMatrix:
    m: int
    entries: np.ndarray
    signs: np.ndarray
    party: str = "A"


@dataclass(frozen=True, eq=False)
class SpectrumResult:
    eigenvalues: np.ndarray
    omega: np.ndarray
    reordered: np.ndarray

    def eigenvector(self, j: int) -> np.ndarray:
        return self.omega[j] ** np.arange(len(self.omega))


def _check_signs(signs, m: int) -> np.ndarray:
    s = np.asarray(signs, dtype=float)
    if s.shape != (m,):
        raise InvalidParameterError(f"sign vector must have length {m}, got shape {s.shape}")
    if not np.all(np.abs(s) == 1.0):
        raise InvalidParameterError("sign vector entries must be +1 or -1")
    return s


def reduced_matrix(t: BellTensor, party: str, signs) -> ReducedMatrix:
    if party not in _CONTRACT:
        raise InvalidParameterError(f"party must be one of {PARTIES}, got {party!r}")
    s = _check_signs(signs, t.m)
    entries = np.einsum(_CONTRACT[party], s[None, :], t.coeffs)[0]
    return ReducedMatrix(m=t.m, entries=entries, signs=s.astype(int), party=party)


def _entries(r) -> np.ndarray:
    return np.asarray(r.entries if isinstance(r, ReducedMatrix) else r, dtype=float)


def is_modified_circulant(r, tol: float = STRUCTURE_TOL) -> bool:
    """Rows shift left by one; the element wrapping round to the end changes sign."""
    a = _entries(r)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        return False
    shifted = np.allclose(a[1:, :-1], a[:-1, 1:], rtol=0.0, atol=tol)
    wrapped = np.allclose(a[1:, -1], -a[:-1, 0], rtol=0.0, atol=tol)
    return bool(shifted and wrapped)


def mod_circulant_spectrum(r) -> SpectrumResult:
    """Eigenvalues of the column-reversed (negacyclic) form of a modified circulant matrix.

    With ``omega_j = exp(2 pi i (j + 1/2) / m)`` the vector ``(1, omega_j, ..., omega_j^(m-1))``
    is an eigenvector for every negacyclic matrix, with eigenvalue
    ``sum_g row0[g] * omega_j^g``.
    """
    a = _entries(r)
    if not is_modified_circulant(a):
        raise NotModifiedCirculantError("matrix is not modified circulant")
    m = a.shape[0]
    reordered = a[:, ::-1]
    omega = np.exp(2j * np.pi * (np.arange(m) + 0.5) / m)
    powers = omega[:, None] ** np.arange(m)[None, :]
    return SpectrumResult(eigenvalues=powers @ reordered[0], omega=omega, reordered=reordered)


def singular_upper_bound(r) -> float:
    a = _entries(r)
    if not a.size:
        return 0.0
    return a.shape[0] * float(np.linalg.svd(a, compute_uv=False)[0])


def sign_vectors(m: int, start: int = 0, stop: int | None = None) -> np.ndarray:
    """Sign vectors with signs[0] = +1 in binary-counter order.

    Counter value k encodes signs[1:] most significant bit first, bit 1 meaning -1.
    """
    stop = 2 ** (m - 1) if stop is None else stop
    k = np.arange(start, stop, dtype=np.int64)
    shifts = np.arange(m - 2, -1, -1, dtype=np.int64)
    bits = (k[:, None] >> shifts[None, :]) & 1
    signs = np.ones((len(k), m))
    signs[:, 1:] = 1.0 - 2.0 * bits
    return signs


@dataclass(frozen=True, eq=False)
class BruteForceResult:
    value: float
    best_signs: np.ndarray
    party: str
    party_values: dict = field(default_factory=dict)


def _chunk_values(coeffs: np.ndarray, party: str, start: int, stop: int) -> np.ndarray:
    m = coeffs.shape[0]
    mats = np.einsum(_CONTRACT[party], sign_vectors(m, start, stop), coeffs)
    return m * np.linalg.svd(mats, compute_uv=False)[:, 0]


def biseparable_upper_bruteforce(t: BellTensor, max_m: int = MAX_BRUTEFORCE_M) -> BruteForceResult:
    """Maximize ``m * sigma_max`` of the reduced matrix over parties A, B, C and all sign vectors.

    signs[0] is fixed to +1 (a global sign flip leaves singular values unchanged).
    The witness is the first (party, sign vector) in enumeration order whose value
    is within ``TIE_TOL`` (relative) of the maximum.
    """
    m = t.m
    if m > max_m:
        raise BudgetExceededError(
            f"brute force over 2^{m - 1} sign vectors exceeds the budget (m <= {max_m}); "
            "use the closed form"
        )
    n = 2 ** (m - 1)
    bounds = [(lo, min(lo + _CHUNK, n)) for lo in range(0, n, _CHUNK)]
    values = {}
    with ThreadPoolExecutor(max_workers=worker_count(len(bounds) * 3)) as pool:
        for party in PARTIES:
            parts = pool.map(lambda b, p=party: _chunk_values(t.coeffs, p, *b), bounds)
            values[party] = np.concatenate(list(parts))

    party_values = {p: float(v.max()) for p, v in values.items()}
    if t.family is not Family.CUSTOM or t.is_party_symmetric():
        spread = max(party_values.values()) - min(party_values.values())
        if spread > 1e-9:
            raise RuntimeError(
                f"party-symmetric tensor gave unequal per-party bounds {party_values}"
            )
    best = max(party_values.values())
    cutoff = best - TIE_TOL * max(1.0, abs(best))
    for party in PARTIES:
        hits = np.flatnonzero(values[party] >= cutoff)
        if hits.size:
            k = int(hits[0])
            return BruteForceResult(
                value=float(values[party][k]),
                best_signs=sign_vectors(m, k, k + 1)[0].astype(int),
                party=party,
                party_values=party_values,
            )
    raise AssertionError("unreachable: maximum not found")


def biseparable_closed(t: BellTensor) -> float:
    m = t.m
    if t.family is Family.COSINE:
        return m**2 / (2.0 * math.sin(math.pi / (2 * m)))
    if t.family is Family.PARITY:
        if not is_power_of_two(m):
            raise NotAvailableError(
                f"no tight closed-form biseparable bound for parity with m={m} (not a power of 2)"
            )
        return m / math.sin(math.pi / (2 * m))
    raise UnsupportedFamilyError("no closed-form biseparable bound for custom tensors")


def planar_vector_lower_bound(t: BellTensor, signs=None) -> float:
    """Biseparably achievable value from planar unit vectors.

    Cecil's vectors point at ``pi * gamma / m``; each of Bob's vectors is aligned
    with its row's weighted sum of Cecil's vectors, giving ``sum_b |sum_g M[b, g] C_g|``.
    """
    signs = np.ones(t.m) if signs is None else signs
    mbar = reduced_matrix(t, "A", signs).entries
    ang = np.pi * np.arange(t.m) / t.m
    cvec = np.stack([np.cos(ang), np.sin(ang)], axis=1)
    return float(np.sum(np.linalg.norm(mbar @ cvec, axis=1)))


def cosine_polygon_value(m: int, signs, delta: float) -> float:
    """``m^2/2 * |sum_a signs[a] exp(i pi (a - delta') / m)|`` with ``delta' = delta - m + 1``.

    The j = 0 eigenvalue of the reduced cosine matrix, times m, as a sum of polygon vertices.
    """
    s = _check_signs(signs, m)
    dprime = delta - m + 1
    z = np.sum(s * np.exp(1j * np.pi * (np.arange(m) - dprime) / m))
    return m**2 / 2.0 * float(abs(z))


def d_sums(m: int) -> np.ndarray:
    """Trigonometric sums D1..D4 for j = 0..m-1, shape (4, m).

    D1 = sum_g cos(pi g/m) cos(2 pi (j+1/2) g/m), D2 = cos*sin, D3 = sin*cos, D4 = sin*sin.
    """
    g = np.arange(m)[None, :]
    j = np.arange(m)[:, None]
    a = np.pi * g / m
    b = 2 * np.pi * (j + 0.5) * g / m
    return np.array([
        np.sum(np.cos(a) * np.cos(b), axis=1),
        np.sum(np.cos(a) * np.sin(b), axis=1),
        np.sum(np.sin(a) * np.cos(b), axis=1),
        np.sum(np.sin(a) * np.sin(b), axis=1),
    ])


@dataclass
class BoundsReport:
    m: int
    family: str
    Q_lower: float | None
    B: float | None
    B_closed: float | None
    B_bruteforce: float | None
    B_planar_lower: float | None
    NS_limit: float
    V_threshold: float | None
    best_signs: list | None
    party: str | None
    provenance: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return dict(vars(self))


def compute_bounds(t: BellTensor, bruteforce: bool = True) -> BoundsReport:
    """Every bound this package can produce for ``t``, each tagged with where it came from."""
    prov = {}
    try:
        q = quantum.quantum_lower_bound(t)
        prov["Q_lower"] = "closed form; GHZ state with canonical equatorial settings"
    except UnsupportedFamilyError:
        q = None
        prov["Q_lower"] = "unavailable for custom tensors"

    try:
        b_closed = biseparable_closed(t)
        prov["B_closed"] = "closed form; tight (upper bound attained by planar vectors)"
    except (NotAvailableError, UnsupportedFamilyError) as exc:
        b_closed = None
        prov["B_closed"] = f"unavailable: {exc}"

    b_brute = signs = party = None
    if bruteforce and t.m <= MAX_BRUTEFORCE_M:
        res = biseparable_upper_bruteforce(t)
        b_brute, signs, party = res.value, res.best_signs.tolist(), res.party
        prov["B_bruteforce"] = "m * sigma_max maximized over parties and sign vectors"
    else:
        prov["B_bruteforce"] = "skipped (disabled or m above enumeration budget)"

    b_planar = planar_vector_lower_bound(t) if t.family is not Family.CUSTOM else None
    prov["B_planar_lower"] = (
        "achievable value, all signs +1, planar vectors" if b_planar is not None
        else "unavailable for custom tensors"
    )

    if b_closed is not None:
        b = b_closed
        prov["B"] = "closed form"
    elif b_brute is not None:
        b = b_brute
        prov["B"] = "brute-force upper bound, tightness unknown"
    else:
        b = None
        prov["B"] = "unavailable"

    v = b / q if (b is not None and q) else None
    prov["V_threshold"] = (
        "B / Q_lower" + ("" if b_closed is not None else " (conservative, from upper bound)")
        if v is not None else "unavailable"
    )
    prov["NS_limit"] = "sum of |coefficients|"
    return BoundsReport(
        m=t.m, family=t.family.value, Q_lower=q, B=b, B_closed=b_closed,
        B_bruteforce=b_brute, B_planar_lower=b_planar, NS_limit=quantum.no_signalling_limit(t),
        V_threshold=v, best_signs=signs, party=party, provenance=prov,
    )
