"""Exact quantum evolution in the product Dicke space and its diagnostics.

The full two-beam problem is propagated as a Schrodinger equation with the
sparse collective Hamiltonian, using a Krylov (Lanczos) short-time stepper
whose step control is tied to norm and energy drift rather than to a fixed
formula.  Helicity-conserving runs (circular basis, theta = 0) are reduced
to a single total-m block, which is real tridiagonal in the block
coordinates; those are propagated spectrally (exact up to the
eigendecomposition), which is what makes N = 1600 photons per beam cheap.

Diagnostics follow the collective observables per photon:

* sigma3, tau3      population differences / N,
* zeta              <sigma3 tau3> - <sigma3><tau3>, the defect of the
                    mean-field factorization (zero in any product state),
* zeta_rot          the same correlator after the 45-degree analysis
                    rotation (sigma3' = sigma1),
* S_ent             von Neumann entropy (nats) of one beam's reduced
                    density matrix,
* Var(N_up - N_dn)  variance of the unnormalized population difference of
                    a single beam.

Time is dimensionless: the analyses build Hamiltonians with g = 1/N so the
integration time is directly the rescaled time of the collective runs.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.linalg import eigh_tridiagonal

from .coupling import MTotalBlock, TwoBeamHamiltonian, build_hamiltonian, block_restrict
from .series_tools import peak_locations, zero_crossings
from .spinspace import QuantumState, collective_op, product_dicke_state

DEFAULT_TOL = 1e-9
_KRYLOV_DIM = 36


# ---------------------------------------------------------------------------
# propagation
# ---------------------------------------------------------------------------


@dataclass
class EvolutionPlan:
    """Hamiltonian, sample times and drift budget for one evolution."""

    hamiltonian: object  # TwoBeamHamiltonian or MTotalBlock
    t_grid: np.ndarray
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        self.t_grid = np.asarray(self.t_grid, dtype=float)
        if self.t_grid.ndim != 1 or self.t_grid.size < 1:
            raise ValueError("t_grid must be a nonempty 1-d array")
        if np.any(np.diff(self.t_grid) <= 0):
            raise ValueError("t_grid must be strictly increasing")
        if not 0.0 < self.tol <= 1e-6:
            raise ValueError("tol must lie in (0, 1e-6]")


def _matrix_inf_norm(mat: sp.spmatrix) -> float:
    return float(np.max(np.abs(mat).sum(axis=1))) if mat.nnz else 0.0


def _lanczos_apply(mat, v, dt, local_tol, m=_KRYLOV_DIM):
    """One Krylov approximation of exp(-i dt H) v with an error estimate.

    Full reorthogonalization keeps the basis orthonormal at these problem
    sizes, so the returned vector's norm equals ||v|| up to roundoff; the
    returned estimate is the standard last-component residual bound.
    """
    n = v.shape[0]
    m = min(m, n)
    basis = np.empty((m, n), dtype=complex)
    alphas = np.empty(m)
    betas = np.empty(m)
    beta0 = np.linalg.norm(v)
    if beta0 == 0:
        return v.copy(), 0.0
    basis[0] = v / beta0
    k_used = m
    for k in range(m):
        w = mat @ basis[k]
        alphas[k] = np.vdot(basis[k], w).real
        w -= alphas[k] * basis[k]
        if k > 0:
            w -= betas[k - 1] * basis[k - 1]
        # full reorthogonalization against the built basis
        coeffs = basis[: k + 1].conj() @ w
        w -= coeffs @ basis[: k + 1]
        betas[k] = np.linalg.norm(w)
        if betas[k] < 1e-14 * max(1.0, abs(alphas[k])):
            k_used = k + 1
            break
        if k + 1 < m:
            basis[k + 1] = w / betas[k]
    k = k_used
    evals, evecs = eigh_tridiagonal(alphas[:k], betas[: k - 1])
    small = evecs @ (np.exp(-1j * dt * evals) * evecs[0])
    err = abs(betas[k - 1] * dt * small[-1]) if k == m else 0.0
    out = beta0 * (small @ basis[:k])
    return out, float(err)


def propagate_krylov(mat: sp.spmatrix, psi0: np.ndarray, t_grid, tol=DEFAULT_TOL):
    """Yield (t, psi) at each grid time via adaptive Lanczos substeps."""
    hnorm = _matrix_inf_norm(mat)
    psi = psi0.astype(complex).copy()
    t_now = 0.0
    t_grid = np.asarray(t_grid, dtype=float)
    total = max(t_grid[-1], 1e-30)
    dt_cap = 0.5 * _KRYLOV_DIM / hnorm if hnorm > 0 else total
    dt_try = dt_cap
    for t_target in t_grid:
        while t_now < t_target - 1e-14 * total:
            dt = min(dt_try, t_target - t_now)
            budget = tol * max(dt / total, 1e-3) * 0.1
            out, err = _lanczos_apply(mat, psi, dt, budget)
            tries = 0
            while err > budget and tries < 40:
                dt *= 0.5
                out, err = _lanczos_apply(mat, psi, dt, budget)
                tries += 1
            if err > budget:
                raise RuntimeError("Krylov propagator cannot meet the drift budget")
            psi = out
            t_now += dt
            dt_try = min(dt * 1.25, dt_cap) if err < 0.1 * budget else dt
        yield t_target, psi


def _is_real_tridiagonal(mat: sp.spmatrix):
    coo = mat.tocoo()
    if np.max(np.abs(coo.data.imag), initial=0.0) > 0.0:
        return None
    off = coo.col - coo.row
    if np.any(np.abs(off) > 1):
        return None
    n = mat.shape[0]
    diag = np.zeros(n)
    lower = np.zeros(n - 1)
    upper = np.zeros(n - 1)
    for r, c, v in zip(coo.row, coo.col, coo.data.real):
        if r == c:
            diag[r] += v
        elif c == r - 1:
            lower[c] += v
        else:
            upper[r] += v
    if not np.allclose(lower, upper, rtol=0, atol=0):
        return None
    return diag, lower


def propagate_spectral(diag, off, psi0, t_grid, chunk=512):
    """Exact evolution of a real symmetric tridiagonal Hamiltonian.

    Yields (t, psi) at the grid times from one eigendecomposition;
    vectorized over time chunks to bound memory.
    """
    evals, evecs = eigh_tridiagonal(diag, off)
    coef = evecs.T @ psi0
    t_grid = np.asarray(t_grid, dtype=float)
    for start in range(0, t_grid.size, chunk):
        ts = t_grid[start : start + chunk]
        block = evecs @ (coef[:, None] * np.exp(-1j * np.outer(evals, ts)))
        for i, t in enumerate(ts):
            yield t, block[:, i]


def _project_to_block(state: QuantumState, block: MTotalBlock, tol=1e-12) -> np.ndarray:
    amp = state.amplitudes
    sub = amp[block.flat_indices]
    outside = np.linalg.norm(amp) ** 2 - np.linalg.norm(sub) ** 2
    if outside > tol:
        raise ValueError(
            f"state has weight {outside:.3e} outside the total_m={block.total_m} block"
        )
    return sub.astype(complex)


def _embed_from_block(vec: np.ndarray, block: MTotalBlock) -> QuantumState:
    amp = np.zeros((block.n_a + 1) * (block.n_b + 1), dtype=complex)
    amp[block.flat_indices] = vec
    return QuantumState(block.n_a, block.n_b, amp)


def _propagate_any(ham, psi0, t_grid, tol):
    """Dispatch: spectral for real tridiagonal blocks, Krylov otherwise."""
    mat = ham.matrix
    tri = _is_real_tridiagonal(mat) if isinstance(ham, MTotalBlock) else None
    if tri is not None and mat.shape[0] > 2:
        return propagate_spectral(tri[0], tri[1], psi0, t_grid)
    return propagate_krylov(mat, psi0, t_grid, tol)


def evolve(initial: QuantumState, plan: EvolutionPlan):
    """Propagate a state and return the list of states at plan.t_grid.

    Accepts a full-space Hamiltonian or an invariant block (the initial
    state must then be supported in the block).  Norm and energy drifts are
    checked against plan.tol; energy drift is measured relative to the
    Hamiltonian's norm scale so that zero-energy initial states are handled.
    """
    initial.check_normalized(1e-8)
    ham = plan.hamiltonian
    is_block = isinstance(ham, MTotalBlock)
    psi0 = _project_to_block(initial, ham) if is_block else initial.amplitudes.copy()
    mat = ham.matrix
    scale = max(_matrix_inf_norm(mat), 1e-30)
    e0 = np.vdot(psi0, mat @ psi0).real
    states = []
    for _, psi in _propagate_any(ham, psi0, plan.t_grid, plan.tol):
        drift_norm = abs(np.linalg.norm(psi) - 1.0)
        drift_energy = abs(np.vdot(psi, mat @ psi).real - e0) / scale
        if drift_norm > plan.tol or drift_energy > max(plan.tol, 1e-12):
            raise RuntimeError(
                f"drift exceeded tolerance: norm {drift_norm:.2e}, energy {drift_energy:.2e}"
            )
        states.append(
            _embed_from_block(psi, ham) if is_block else QuantumState(ham.n_a, ham.n_b, psi.copy())
        )
    return states


# ---------------------------------------------------------------------------
# observables
# ---------------------------------------------------------------------------


def expectations(state: QuantumState):
    """(sigma3, tau3, zeta) of a two-beam state, per-photon normalized."""
    psi = state.as_matrix()
    prob = np.abs(psi) ** 2
    qa = (2.0 * np.arange(state.n_a + 1) - state.n_a) / state.n_a
    qb = (2.0 * np.arange(state.n_b + 1) - state.n_b) / state.n_b
    pa = prob.sum(axis=1)
    pb = prob.sum(axis=0)
    sigma3 = float(qa @ pa)
    tau3 = float(qb @ pb)
    corr = float(qa @ prob @ qb)
    return sigma3, tau3, corr - sigma3 * tau3


def zeta_rotated(state: QuantumState) -> float:
    """Correlation defect of the rotated observables sigma3' = sigma1."""
    psi = state.as_matrix()
    s1a = collective_op(state.n_a, "S1").matrix
    s1b = collective_op(state.n_b, "S1").matrix
    left = s1a @ psi
    right = psi @ s1b  # S1 is symmetric
    ea = np.vdot(psi, left).real / state.n_a
    eb = np.vdot(psi, right).real / state.n_b
    eab = np.vdot(left, right).real / (state.n_a * state.n_b)
    return float(eab - ea * eb)


def reduced_density(state: QuantumState, keep: str = "a") -> np.ndarray:
    """Reduced density matrix of one beam, rho[m, m'] (Hermitian, trace 1)."""
    psi = state.as_matrix()
    if keep == "a":
        return psi @ psi.conj().T
    if keep == "b":
        return psi.T @ psi.conj()
    raise ValueError(f"keep must be 'a' or 'b', got {keep!r}")


def entanglement_entropy(rho: np.ndarray) -> float:
    """Von Neumann entropy -Tr[rho ln rho] in nats, with 0 ln 0 = 0."""
    evals = np.linalg.eigvalsh(rho)
    evals = evals[evals > 1e-300]
    return float(-np.sum(evals * np.log(evals)))


def variance_ndiff(state: QuantumState, beam: str = "a") -> float:
    """Variance of the unnormalized population difference N_up - N_down."""
    psi = state.as_matrix()
    prob = np.abs(psi) ** 2
    n = state.n_a if beam == "a" else state.n_b
    p = prob.sum(axis=1) if beam == "a" else prob.sum(axis=0)
    vals = 2.0 * np.arange(n + 1) - n
    mean = vals @ p
    return float(vals**2 @ p - mean**2)


@dataclass
class ObservableSeries:
    """Time series of the collective diagnostics along one evolution.

    sigma3_rot and tau3_rot are the rotated single-beam means <sigma1>/N,
    <tau1>/N used by the plateau protocol; they vanish identically inside a
    total-m block.
    """

    t: np.ndarray
    sigma3: np.ndarray
    tau3: np.ndarray
    zeta: np.ndarray
    zeta_rot: np.ndarray
    s_ent: np.ndarray
    var_ndiff: np.ndarray
    norm: np.ndarray
    energy: np.ndarray
    sigma3_rot: np.ndarray = None
    tau3_rot: np.ndarray = None
    n_a: int = 0
    n_b: int = 0


def _block_series(block: MTotalBlock, psi0, t_grid, tol) -> ObservableSeries:
    ma = np.array([p[0] for p in block.index_map])
    mb = np.array([p[1] for p in block.index_map])
    qa = 2.0 * ma / block.n_a
    qb = 2.0 * mb / block.n_b
    # in-block part of S1 T1 (the helicity-preserving S+T- + S-T+ pieces)
    ja, jb = block.n_a / 2.0, block.n_b / 2.0
    up = np.sqrt((ja - ma[:-1]) * (ja + ma[:-1] + 1.0)) * np.sqrt(
        (jb + mb[:-1]) * (jb - mb[:-1] + 1.0)
    )
    nt = len(t_grid)
    cols = {
        name: np.empty(nt)
        for name in ("sigma3", "tau3", "zeta", "zeta_rot", "s_ent", "var_ndiff", "norm", "energy")
    }
    mat = block.matrix
    for k, (_, psi) in enumerate(_propagate_any(block, psi0, t_grid, tol)):
        prob = np.abs(psi) ** 2
        s3 = qa @ prob
        t3 = qb @ prob
        cols["sigma3"][k] = s3
        cols["tau3"][k] = t3
        cols["zeta"][k] = (qa * qb) @ prob - s3 * t3
        cross = 2.0 * np.sum(up * (np.conj(psi[1:]) * psi[:-1]).real)
        cols["zeta_rot"][k] = cross / (block.n_a * block.n_b)
        pe = prob[prob > 1e-300]
        cols["s_ent"][k] = -np.sum(pe * np.log(pe))
        vals = 2.0 * ma
        cols["var_ndiff"][k] = vals**2 @ prob - (vals @ prob) ** 2
        cols["norm"][k] = np.linalg.norm(psi)
        cols["energy"][k] = np.vdot(psi, mat @ psi).real
    zeros = np.zeros(nt)  # <S1> leaves the block, so the rotated means vanish
    return ObservableSeries(
        t=np.asarray(t_grid, float),
        sigma3_rot=zeros,
        tau3_rot=zeros.copy(),
        n_a=block.n_a,
        n_b=block.n_b,
        **cols,
    )


def _full_series(ham: TwoBeamHamiltonian, psi0, t_grid, tol) -> ObservableSeries:
    n_a, n_b = ham.n_a, ham.n_b
    s1a = collective_op(n_a, "S1").matrix
    s1b = collective_op(n_b, "S1").matrix
    qa = (2.0 * np.arange(n_a + 1) - n_a) / n_a
    qb = (2.0 * np.arange(n_b + 1) - n_b) / n_b
    nt = len(t_grid)
    cols = {
        name: np.empty(nt)
        for name in ("sigma3", "tau3", "zeta", "zeta_rot", "s_ent", "var_ndiff", "norm", "energy")
    }
    rot_a = np.empty(nt)
    rot_b = np.empty(nt)
    mat = ham.matrix
    for k, (_, psi) in enumerate(propagate_krylov(mat, psi0, t_grid, tol)):
        m = psi.reshape(n_a + 1, n_b + 1)
        prob = np.abs(m) ** 2
        pa, pb = prob.sum(axis=1), prob.sum(axis=0)
        s3, t3 = qa @ pa, qb @ pb
        cols["sigma3"][k] = s3
        cols["tau3"][k] = t3
        cols["zeta"][k] = qa @ prob @ qb - s3 * t3
        left = s1a @ m
        right = m @ s1b
        ea = np.vdot(m, left).real / n_a
        eb = np.vdot(m, right).real / n_b
        rot_a[k] = ea
        rot_b[k] = eb
        cols["zeta_rot"][k] = np.vdot(left, right).real / (n_a * n_b) - ea * eb
        cols["s_ent"][k] = entanglement_entropy(m @ m.conj().T)
        vals = 2.0 * np.arange(n_a + 1) - n_a
        cols["var_ndiff"][k] = vals**2 @ pa - (vals @ pa) ** 2
        cols["norm"][k] = np.linalg.norm(psi)
        cols["energy"][k] = np.vdot(psi, mat @ psi).real
    return ObservableSeries(
        t=np.asarray(t_grid, float), sigma3_rot=rot_a, tau3_rot=rot_b, n_a=n_a, n_b=n_b, **cols
    )


def observable_series(initial: QuantumState, plan: EvolutionPlan) -> ObservableSeries:
    """Propagate and record the full diagnostic series without storing states."""
    initial.check_normalized(1e-8)
    ham = plan.hamiltonian
    if isinstance(ham, MTotalBlock):
        psi0 = _project_to_block(initial, ham)
        series = _block_series(ham, psi0, plan.t_grid, plan.tol)
    else:
        series = _full_series(ham, initial.amplitudes.copy(), plan.t_grid, plan.tol)
    _check_drift(series, plan)
    return series


def _check_drift(series: ObservableSeries, plan: EvolutionPlan):
    norm_drift = float(np.max(np.abs(series.norm - 1.0)))
    scale = max(_matrix_inf_norm(plan.hamiltonian.matrix), 1e-30)
    energy_drift = float(np.max(np.abs(series.energy - series.energy[0]))) / scale
    if norm_drift > plan.tol:
        raise RuntimeError(f"norm drift {norm_drift:.3e} exceeds tolerance {plan.tol}")
    if energy_drift > max(plan.tol, 1e-12):
        raise RuntimeError(f"energy drift {energy_drift:.3e} exceeds tolerance")


# ---------------------------------------------------------------------------
# protocol analyses
# ---------------------------------------------------------------------------

#: |sigma3| level separating "hold" segments from "transition" segments in
#: the break-time decomposition (half-maximum convention; see the report).
HOLD_BAND = 0.5
#: band width around the plateau median for plateau detection
PLATEAU_BAND = 0.05
#: rise time is the first time the signal reaches this fraction of plateau
RISE_FRACTION = 0.9


def opposed_helicity_initial(n: int) -> QuantumState:
    """|m_a = +j, m_b = -j>: beam a fully in mode 2, beam b fully in mode 1."""
    j = n / 2.0
    return product_dicke_state(n, n, j, -j)


def _hold_transition(t, s3, band):
    """Hold/transition split over the first full turnover cycle.

    The cycle window runs from t = 0 to the re-entry of sigma3 into the +band
    region after visiting -1 (falling back to the last grid time if the
    return is not reached).  Hold is the time spent with |sigma3| > band.
    """
    above = s3 > band
    below = s3 < -band
    # find re-entry into +band after having been in -band
    seen_bottom = False
    t_cycle = t[-1]
    for k in range(len(t)):
        if below[k]:
            seen_bottom = True
        elif seen_bottom and above[k]:
            t_cycle = t[k]
            break
    mask = t <= t_cycle
    inside = np.abs(s3[mask]) > band
    dt = np.gradient(t[mask])
    hold = float(np.sum(dt[inside]))
    return hold, float(t_cycle - hold), float(t_cycle)


@dataclass
class BreakTimeReport:
    """Per-N break-time data for the opposed-helicity head-on protocol."""

    n_list: list
    first_crossings: np.ndarray
    crossing_sets: list
    slope_vs_logn: float
    intercept: float
    hold_times: np.ndarray
    transition_times: np.ndarray
    hold_band: float
    series: list  # ObservableSeries per N


def break_time_analysis(
    n_list,
    t_end: float = 8.0,
    dt_sample: float = 0.002,
    tol: float = DEFAULT_TOL,
    hold_band: float = HOLD_BAND,
) -> BreakTimeReport:
    """Run the head-on opposed-helicity protocol for each N and analyze it.

    Circular basis, theta = 0, initial |m_a=j, m_b=-j>, evolved inside the
    total_m = 0 block with g = 1/N.  Reports first zero crossings of
    sigma3, the fit of crossing time against ln N, and the hold/transition
    decomposition at the configured band.
    """
    n_list = list(n_list)
    t_grid = np.arange(0.0, t_end + 0.5 * dt_sample, dt_sample)
    all_series = []
    firsts = []
    sets = []
    holds = []
    transitions = []
    for n in n_list:
        ham = build_hamiltonian("circular", 0.0, n, n, 1.0 / n)
        block = block_restrict(ham, 0.0)
        plan = EvolutionPlan(block, t_grid, tol)
        series = observable_series(opposed_helicity_initial(n), plan)
        crossings = zero_crossings(series.t, series.sigma3)
        if crossings.size == 0:
            raise RuntimeError(f"no sigma3 zero crossing for N={n} within t_end={t_end}")
        hold, trans, _ = _hold_transition(series.t, series.sigma3, hold_band)
        all_series.append(series)
        firsts.append(crossings[0])
        sets.append(crossings)
        holds.append(hold)
        transitions.append(trans)
    firsts = np.asarray(firsts)
    if len(n_list) >= 2:
        slope, intercept = np.polyfit(np.log(n_list), firsts, 1)
    else:
        slope, intercept = float("nan"), float("nan")
    return BreakTimeReport(
        n_list=n_list,
        first_crossings=firsts,
        crossing_sets=sets,
        slope_vs_logn=float(slope),
        intercept=float(intercept),
        hold_times=np.asarray(holds),
        transition_times=np.asarray(transitions),
        hold_band=hold_band,
        series=all_series,
    )


@dataclass
class PlateauReport:
    """Per-N plateau data for the plane-basis rotated-correlation protocol."""

    n_list: list
    cos_theta: float
    plateau_heights: np.ndarray
    rise_times: np.ndarray
    hang_times: np.ndarray
    max_sigma3_rot: np.ndarray  # max |<sigma3'>| inside the plateau
    series: list


def plateau_window(n: int) -> float:
    """Evolution window long enough to contain the plateau and its end dip."""
    return 4.0 + 0.85 * n


def plateau_analysis(
    n_list,
    cos_theta: float = 1.0,
    dt_sample: float = 0.02,
    tol: float = DEFAULT_TOL,
    t_end=None,
) -> PlateauReport:
    """Run the plane-basis protocol and extract the |zeta'| plateau per N.

    Plane basis at the given cos(theta), initial |m_a=j, m_b=-j> (sigma3 =
    +1, tau3 = -1 eigenstates), g = 1/N, full product space.  The plateau is
    the longest interval where |zeta'| stays within PLATEAU_BAND of its
    window median; rise time is the first passage of RISE_FRACTION times the
    plateau height; hang time is the plateau length.
    """
    n_list = list(n_list)
    theta = float(np.arccos(np.clip(cos_theta, -1.0, 1.0)))
    heights, rises, hangs, s3max, all_series = [], [], [], [], []
    for n in n_list:
        window = plateau_window(n) if t_end is None else float(t_end)
        t_grid = np.arange(0.0, window + 0.5 * dt_sample, dt_sample)
        ham = build_hamiltonian("plane", theta, n, n, 1.0 / n)
        plan = EvolutionPlan(ham, t_grid, tol)
        series = observable_series(opposed_helicity_initial(n), plan)
        azr = np.abs(series.zeta_rot)
        med = float(np.median(azr))
        inband = np.abs(azr - med) < PLATEAU_BAND
        best_len, best = 0.0, (0, 0)
        k = 0
        while k < len(t_grid):
            if inband[k]:
                start = k
                while k < len(t_grid) and inband[k]:
                    k += 1
                if t_grid[k - 1] - t_grid[start] > best_len:
                    best_len = t_grid[k - 1] - t_grid[start]
                    best = (start, k - 1)
            else:
                k += 1
        if best_len == 0.0:
            raise RuntimeError(f"no plateau found for N={n} (cos theta = {cos_theta})")
        height = float(np.median(azr[best[0] : best[1] + 1]))
        reach = np.where(azr >= RISE_FRACTION * height)[0]
        rise = float(t_grid[reach[0]]) if reach.size else float("nan")
        heights.append(height)
        rises.append(rise)
        hangs.append(best_len)
        lo, hi = best
        s3max.append(
            float(
                max(
                    np.max(np.abs(series.sigma3_rot[lo : hi + 1])),
                    np.max(np.abs(series.tau3_rot[lo : hi + 1])),
                )
            )
        )
        all_series.append(series)
    return PlateauReport(
        n_list=n_list,
        cos_theta=cos_theta,
        plateau_heights=np.asarray(heights),
        rise_times=np.asarray(rises),
        hang_times=np.asarray(hangs),
        max_sigma3_rot=np.asarray(s3max),
        series=all_series,
    )


# ---------------------------------------------------------------------------
# persistence
# ---------------------------------------------------------------------------

CSV_COLUMNS = "t,sigma3,tau3,zeta,zeta_rot,s_ent,var_ndiff,norm,energy"

_CHECKPOINT_MAGIC = b"PXQS"
_CHECKPOINT_VERSION = 1
_BASIS_CODE = {"plane": 0, "circular": 1, "none": 2}
_BASIS_NAME = {v: k for k, v in _BASIS_CODE.items()}


def write_csv(series: ObservableSeries, path):
    """Write the diagnostic series in the documented column layout."""
    with open(path, "w", encoding="ascii") as fh:
        fh.write(CSV_COLUMNS + "\n")
        for k in range(len(series.t)):
            row = (
                series.t[k],
                series.sigma3[k],
                series.tau3[k],
                series.zeta[k],
                series.zeta_rot[k],
                series.s_ent[k],
                series.var_ndiff[k],
                series.norm[k],
                series.energy[k],
            )
            fh.write(",".join(f"{v:.17g}" for v in row) + "\n")


def save_checkpoint(path, state: QuantumState, basis: str = "none", theta: float = 0.0, t: float = 0.0):
    """Binary checkpoint: header + interleaved re/im little-endian float64.

    Layout: magic "PXQS", uint32 version, uint32 N_a, uint32 N_b,
    uint8 basis code (0 plane / 1 circular / 2 none), float64 theta,
    float64 t, then 2*(N_a+1)*(N_b+1) little-endian float64 values
    alternating re, im.
    """
    header = struct.pack(
        "<4sIIIBdd",
        _CHECKPOINT_MAGIC,
        _CHECKPOINT_VERSION,
        state.n_a,
        state.n_b,
        _BASIS_CODE[basis],
        float(theta),
        float(t),
    )
    payload = np.empty(2 * state.amplitudes.size, dtype="<f8")
    payload[0::2] = state.amplitudes.real
    payload[1::2] = state.amplitudes.imag
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(payload.tobytes())


def load_checkpoint(path):
    """Read a checkpoint written by save_checkpoint.

    Returns (state, basis, theta, t).
    """
    header_size = struct.calcsize("<4sIIIBdd")
    with open(path, "rb") as fh:
        head = fh.read(header_size)
        magic, version, n_a, n_b, basis_code, theta, t = struct.unpack("<4sIIIBdd", head)
        if magic != _CHECKPOINT_MAGIC:
            raise ValueError(f"{path} is not a polex checkpoint")
        if version != _CHECKPOINT_VERSION:
            raise ValueError(f"unsupported checkpoint version {version}")
        raw = np.frombuffer(fh.read(), dtype="<f8")
    amp = raw[0::2] + 1j * raw[1::2]
    return QuantumState(n_a, n_b, amp), _BASIS_NAME[basis_code], theta, t
