"""Collective polarization operators for a photon beam.

Each photon in a beam is a two-mode (two-polarization) system, so a beam of
N photons carries a collective "spin" built from per-photon ladder operators
s+ = a2^dag a1, s- = s+^dag, s3 = a2^dag a2 - a1^dag a1.  Because the
beam-beam interaction is symmetric under photon exchange within a beam, and
all initial states used here are symmetric product states, the dynamics
stays inside the permutation-symmetric (Dicke) sector: dimension N+1 instead
of 2^N.  This module builds the collective operators in that sector, the
Stokes read-out, the 45-degree analysis rotation, and a brute-force
full-product-space oracle used to validate the reduction at small N.

Conventions
-----------
* Dicke basis is ordered by ascending magnetic quantum number
  m = -j, ..., +j with j = N/2.  The state with every photon in mode 2
  ("spin up") is the last basis vector.
* Operators are stored unnormalized: S3 has integer spectrum
  {-N, -N+2, ..., N}; the per-photon observables of the dynamics are
  S_alpha / N.  This keeps matrix entries free of N-dependent rounding.
* Two-beam product states are flattened row-major with the first beam's
  index outermost: component (m_a, m_b) sits at flat index
  (m_a + j_a) * (N_b + 1) + (m_b + j_b).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np
import scipy.sparse as sp

OP_KINDS = ("S1", "S2", "S3", "Splus", "Sminus", "Identity")

#: single-photon operators in the (mode1, mode2) basis, s3 = diag(-1, +1)
PHOTON_S1 = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
PHOTON_S2 = np.array([[0.0, 1.0j], [-1.0j, 0.0]], dtype=complex)
PHOTON_S3 = np.array([[-1.0, 0.0], [0.0, 1.0]], dtype=complex)


def check_beam_size(n_photons) -> int:
    """Validate a photon number; the Dicke dimension is n_photons + 1."""
    n = int(n_photons)
    if n != n_photons or n < 1:
        raise ValueError(f"beam size must be a positive integer, got {n_photons!r}")
    return n


def m_values(n_photons: int) -> np.ndarray:
    """Magnetic quantum numbers m = -j ... +j of the Dicke ladder, ascending."""
    j = n_photons / 2.0
    return np.arange(-j, j + 0.5, 1.0)


@dataclass(frozen=True)
class CollectiveOp:
    """A collective beam operator in the Dicke basis (sparse, (N+1)x(N+1))."""

    n_photons: int
    kind: str
    matrix: sp.csr_matrix

    @property
    def dim(self) -> int:
        return self.n_photons + 1


def _ladder_coeffs(n_photons: int) -> np.ndarray:
    # S+|j,m> = sqrt((j-m)(j+m+1)) |j,m+1>; (j-m)(j+m+1) is an exact integer
    j = n_photons / 2.0
    m = m_values(n_photons)[:-1]
    return np.sqrt((j - m) * (j + m + 1.0))


def collective_op(n_photons: int, kind: str) -> CollectiveOp:
    """Build a collective polarization operator for one beam of N photons.

    Kinds: "S1", "S2", "S3", "Splus", "Sminus", "Identity".  S1, S2, S3 obey
    [S1, S2] = 2i S3 (cyclic) and S1^2 + S2^2 + S3^2 = N(N+2) Identity;
    dividing by N recovers the normalized per-photon commutation relations.
    """
    n = check_beam_size(n_photons)
    if kind not in OP_KINDS:
        raise ValueError(f"unknown operator kind {kind!r}; expected one of {OP_KINDS}")
    dim = n + 1
    if kind == "Identity":
        mat = sp.identity(dim, dtype=complex, format="csr")
    elif kind == "S3":
        mat = sp.diags(2.0 * m_values(n) + 0.0j, format="csr")
    else:
        c = _ladder_coeffs(n)
        splus = sp.diags(c.astype(complex), -1, format="csr")
        if kind == "Splus":
            mat = splus
        elif kind == "Sminus":
            mat = splus.conjugate().transpose().tocsr()
        elif kind == "S1":
            mat = (splus + splus.T).tocsr()
        else:  # S2 = (S+ - S-)/i
            mat = ((splus - splus.T) / 1.0j).tocsr()
    return CollectiveOp(n_photons=n, kind=kind, matrix=mat)


def rotate_basis_45(op: CollectiveOp) -> CollectiveOp:
    """Analysis observable after a 45-degree plane-polarization rotation.

    A 45-degree rotation of the plane-polarization axes is a 90-degree
    rotation on the Poincare sphere taking S3 into S1, so the rotated
    population-difference observable of a beam is its S1 operator.  The
    same handedness is used for both beams; only products of two rotated
    observables enter the reported correlators, which makes them invariant
    under flipping both signs at once.
    """
    if op.kind != "S3":
        raise ValueError(f"rotate_basis_45 expects an S3 operator, got {op.kind!r}")
    return collective_op(op.n_photons, "S1")


@dataclass
class QuantumState:
    """Pure state of two beams in the product Dicke space.

    ``amplitudes`` has length (N_a+1)(N_b+1), flattened row-major with the
    first beam's m index outermost.
    """

    n_a: int
    n_b: int
    amplitudes: np.ndarray

    def __post_init__(self):
        self.n_a = check_beam_size(self.n_a)
        self.n_b = check_beam_size(self.n_b)
        amp = np.asarray(self.amplitudes, dtype=complex).ravel()
        expected = (self.n_a + 1) * (self.n_b + 1)
        if amp.size != expected:
            raise ValueError(f"amplitude vector has length {amp.size}, expected {expected}")
        self.amplitudes = amp

    @property
    def dim(self) -> int:
        return (self.n_a + 1) * (self.n_b + 1)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def as_matrix(self) -> np.ndarray:
        """Amplitudes reshaped to (N_a+1, N_b+1), rows indexed by m_a."""
        return self.amplitudes.reshape(self.n_a + 1, self.n_b + 1)

    def check_normalized(self, tol: float = 1e-10):
        if abs(self.norm() - 1.0) > tol:
            raise ValueError(f"state norm {self.norm()} deviates from 1 by more than {tol}")


def product_dicke_state(n_a: int, n_b: int, m_a: float, m_b: float) -> QuantumState:
    """Product state |j_a, m_a> x |j_b, m_b>."""
    j_a, j_b = n_a / 2.0, n_b / 2.0
    ia, ib = round(m_a + j_a), round(m_b + j_b)
    if not (0 <= ia <= n_a) or not (0 <= ib <= n_b):
        raise ValueError(f"(m_a, m_b) = ({m_a}, {m_b}) outside the Dicke ladders")
    amp = np.zeros((n_a + 1) * (n_b + 1), dtype=complex)
    amp[ia * (n_b + 1) + ib] = 1.0
    return QuantumState(n_a, n_b, amp)


def spin_coherent(n_photons: int, amp_mode1: complex, amp_mode2: complex) -> np.ndarray:
    """Dicke amplitudes of the symmetric product state (a|1> + b|2>)^(x N).

    Component k (i.e. m = k - j) carries sqrt(C(N,k)) a^(N-k) b^k.
    """
    n = check_beam_size(n_photons)
    a, b = complex(amp_mode1), complex(amp_mode2)
    nrm = np.hypot(abs(a), abs(b))
    if nrm == 0:
        raise ValueError("zero per-photon amplitude")
    a, b = a / nrm, b / nrm
    ks = np.arange(n + 1)
    vec = np.array([np.sqrt(comb(n, int(k))) for k in ks], dtype=complex)
    vec *= a ** (n - ks) * b ** ks
    return vec


@dataclass(frozen=True)
class StokesVector:
    """Stokes parameters of one beam: intensity s0 and (Q, U, V) in [-1, 1]."""

    s0: float
    Q: float
    U: float
    V: float

    def degree_of_polarization(self) -> float:
        return float(np.sqrt(self.Q**2 + self.U**2 + self.V**2))


def _beam_expectation(state: QuantumState, beam: str, op: sp.spmatrix) -> float:
    psi = state.as_matrix()
    if beam == "a":
        val = np.vdot(psi, op @ psi)
    elif beam == "b":
        val = np.vdot(psi, psi @ op.T)
    else:
        raise ValueError(f"beam must be 'a' or 'b', got {beam!r}")
    return float(val.real)


def stokes_of(state: QuantumState, beam: str = "a") -> StokesVector:
    """Stokes vector of one beam: Q = <S3>/N, U = <S1>/N, V = <S2>/N.

    Labels are the plane-polarization ones; in circular-basis runs the
    physical roles permute (the computed Q is then the circular degree).
    """
    state.check_normalized(1e-8)
    n = state.n_a if beam == "a" else state.n_b
    q = _beam_expectation(state, beam, collective_op(n, "S3").matrix) / n
    u = _beam_expectation(state, beam, collective_op(n, "S1").matrix) / n
    v = _beam_expectation(state, beam, collective_op(n, "S2").matrix) / n
    return StokesVector(s0=float(n), Q=q, U=u, V=v)


# ---------------------------------------------------------------------------
# brute-force oracle on the full 2^(N_a+N_b) product space
# ---------------------------------------------------------------------------

MAX_BRUTE_PHOTONS = 8


def _embed_single(op: np.ndarray, k: int, n_total: int) -> np.ndarray:
    out = np.array([[1.0 + 0.0j]])
    for i in range(n_total):
        out = np.kron(out, op if i == k else np.eye(2, dtype=complex))
    return out


def brute_force_embed(n_a: int, n_b: int, theta: float, basis: str, g: float = 1.0) -> np.ndarray:
    """Dense two-beam Hamiltonian on the full 2^(N_a+N_b) product space.

    Independent oracle for the Dicke-sector reduction: the same two-photon
    interaction is summed over every (beam-a photon, beam-b photon) pair,
    with no symmetry assumption.  Evolution under this matrix, started from
    a symmetric product state, must reproduce the collective-space dynamics
    exactly.  Limited to N_a + N_b <= 8 photons.
    """
    n_a, n_b = check_beam_size(n_a), check_beam_size(n_b)
    if n_a + n_b > MAX_BRUTE_PHOTONS:
        raise ValueError(f"brute force limited to {MAX_BRUTE_PHOTONS} photons total")
    if basis not in ("plane", "circular"):
        raise ValueError(f"basis must be 'plane' or 'circular', got {basis!r}")
    n = n_a + n_b
    c, s2 = np.cos(theta), np.sin(theta) ** 2
    dim = 2**n
    ham = np.zeros((dim, dim), dtype=complex)
    for i in range(n_a):
        a1 = _embed_single(PHOTON_S1, i, n)
        a23 = _embed_single(PHOTON_S2 if basis == "circular" else PHOTON_S3, i, n)
        for jj in range(n_a, n):
            b1 = _embed_single(PHOTON_S1, jj, n)
            b23 = _embed_single(PHOTON_S2 if basis == "circular" else PHOTON_S3, jj, n)
            sign = 1.0 if basis == "circular" else -1.0
            ham += sign * s2 * (a23 + b23) + 2.0 * c * (a1 @ b1) + (1 + c * c) * (a23 @ b23)
    return g * ham


def brute_force_operator(n_a: int, n_b: int, beam: str, kind: str) -> np.ndarray:
    """Collective operator (sum over the beam's photons) on the full space."""
    n = n_a + n_b
    single = {"S1": PHOTON_S1, "S2": PHOTON_S2, "S3": PHOTON_S3}[kind]
    rng = range(n_a) if beam == "a" else range(n_a, n)
    dim = 2**n
    out = np.zeros((dim, dim), dtype=complex)
    for k in rng:
        out += _embed_single(single, k, n)
    return out


def brute_force_product_state(n_a: int, n_b: int, a_photon: np.ndarray, b_photon: np.ndarray) -> np.ndarray:
    """Full-space product state with every beam photon in the given 2-vector."""
    a = np.asarray(a_photon, dtype=complex)
    b = np.asarray(b_photon, dtype=complex)
    a = a / np.linalg.norm(a)
    b = b / np.linalg.norm(b)
    psi = np.array([1.0 + 0.0j])
    for _ in range(n_a):
        psi = np.kron(psi, a)
    for _ in range(n_b):
        psi = np.kron(psi, b)
    return psi


def brute_force_reduced_density(psi: np.ndarray, n_a: int, n_b: int) -> np.ndarray:
    """Reduced density matrix of beam a from a full-space pure state."""
    mat = np.asarray(psi, dtype=complex).reshape(2**n_a, 2**n_b)
    return mat @ mat.conj().T
