"""Quantum propagation, diagnostics, and the protocol analyses."""

import numpy as np
import pytest
import scipy.sparse as sp
from scipy.linalg import expm

from polex import coupling, quantum
from polex.coupling import TwoBeamHamiltonian, block_restrict, build_hamiltonian
from polex.quantum import (
    EvolutionPlan,
    break_time_analysis,
    entanglement_entropy,
    evolve,
    expectations,
    load_checkpoint,
    observable_series,
    opposed_helicity_initial,
    plateau_analysis,
    reduced_density,
    save_checkpoint,
    variance_ndiff,
    write_csv,
    zeta_rotated,
)
from polex.series_tools import peak_locations, zero_crossings
from polex.spinspace import QuantumState, product_dicke_state, spin_coherent


def cat_state(n, sign=+1.0):
    """(|j,-j> + sign |-j,j>)/sqrt(2) on two beams of n photons."""
    j = n / 2.0
    amp = product_dicke_state(n, n, j, -j).amplitudes + sign * product_dicke_state(
        n, n, -j, j
    ).amplitudes
    return QuantumState(n, n, amp / np.linalg.norm(amp))


def aligned_cat_state(n):
    """(|j,j> + |-j,-j>)/sqrt(2)."""
    j = n / 2.0
    amp = product_dicke_state(n, n, j, j).amplitudes + product_dicke_state(n, n, -j, -j).amplitudes
    return QuantumState(n, n, amp / np.linalg.norm(amp))


class TestEvolve:
    def test_zero_hamiltonian_keeps_state(self):
        n = 3
        dim = (n + 1) ** 2
        ham = TwoBeamHamiltonian(
            basis="circular", theta=0.0, n_a=n, n_b=n, g=1.0,
            matrix=sp.csr_matrix((dim, dim), dtype=complex), conserves_total_m=True,
        )
        psi0 = opposed_helicity_initial(n)
        states = evolve(psi0, EvolutionPlan(ham, np.linspace(0.5, 2.0, 4), 1e-9))
        for st in states:
            np.testing.assert_allclose(st.amplitudes, psi0.amplitudes, atol=1e-14)

    def test_two_level_rabi_flop(self):
        # N=1 per beam, circular, theta=0: the total_m = 0 block is 2x2 with
        # off-diagonal 4g, so <sigma3>(t) = cos(8 g t)
        g = 1.0
        ham = build_hamiltonian("circular", 0.0, 1, 1, g)
        block = block_restrict(ham, 0.0)
        t_grid = np.linspace(0.01, 2.0, 40)
        series = observable_series(opposed_helicity_initial(1), EvolutionPlan(block, t_grid, 1e-9))
        np.testing.assert_allclose(series.sigma3, np.cos(8.0 * g * t_grid), atol=1e-10)

    def test_krylov_matches_dense_expm(self):
        n = 4
        ham = build_hamiltonian("plane", 0.3, n, n, 0.25)
        psi0 = opposed_helicity_initial(n)
        t_grid = np.linspace(0.25, 3.0, 6)
        states = evolve(psi0, EvolutionPlan(ham, t_grid, 1e-9))
        for t, st in zip(t_grid, states):
            exact = expm(-1j * t * ham.matrix.toarray()) @ psi0.amplitudes
            assert np.max(np.abs(exact - st.amplitudes)) < 1e-9

    def test_block_evolution_embeds_correctly(self):
        n = 6
        ham = build_hamiltonian("circular", 0.0, n, n, 1.0 / n)
        block = block_restrict(ham, 0.0)
        t_grid = np.array([0.5, 1.5])
        states_blk = evolve(opposed_helicity_initial(n), EvolutionPlan(block, t_grid, 1e-9))
        states_ful = evolve(opposed_helicity_initial(n), EvolutionPlan(ham, t_grid, 1e-9))
        for sb, sf in zip(states_blk, states_ful):
            assert np.max(np.abs(sb.amplitudes - sf.amplitudes)) < 1e-9

    def test_rejects_state_outside_block(self):
        n = 3
        ham = build_hamiltonian("circular", 0.0, n, n, 1.0)
        block = block_restrict(ham, 0.0)
        outside = product_dicke_state(n, n, n / 2.0, n / 2.0)  # total_m = n
        with pytest.raises(ValueError):
            evolve(outside, EvolutionPlan(block, np.array([1.0]), 1e-9))

    def test_plan_validation(self):
        ham = build_hamiltonian("circular", 0.0, 2, 2, 1.0)
        with pytest.raises(ValueError):
            EvolutionPlan(ham, np.array([1.0, 0.5]), 1e-9)
        with pytest.raises(ValueError):
            EvolutionPlan(ham, np.array([1.0]), 1e-3)


class TestExpectations:
    @pytest.mark.parametrize("n", [1, 3, 6])
    def test_product_states_have_zero_zeta(self, n):
        j = n / 2.0
        st = product_dicke_state(n, n, j, -j)
        s3, t3, zeta = expectations(st)
        assert (s3, t3) == (1.0, -1.0)
        assert zeta == 0.0

    def test_opposed_cat(self):
        s3, t3, zeta = expectations(cat_state(5))
        assert abs(s3) < 1e-14 and abs(t3) < 1e-14
        assert abs(zeta + 1.0) < 1e-14  # <s3 t3> = -1 in this superposition

    def test_aligned_cat(self):
        _, _, zeta = expectations(aligned_cat_state(4))
        assert abs(zeta - 1.0) < 1e-14

    def test_zeta_rotated_product_state(self):
        assert abs(zeta_rotated(product_dicke_state(4, 4, 2.0, -2.0))) < 1e-14

    def test_zeta_rotated_cat_in_rotated_eigenbasis(self):
        # equal superposition of both-beams-x-polarized extremal states
        n = 4
        plus = spin_coherent(n, 1.0, 1.0)
        minus = spin_coherent(n, 1.0, -1.0)
        amp = np.kron(plus, plus) + np.kron(minus, minus)
        st = QuantumState(n, n, amp / np.linalg.norm(amp))
        assert abs(zeta_rotated(st) - 1.0) < 1e-12


class TestReducedDensity:
    def test_product_state_rank_one(self):
        rho = reduced_density(product_dicke_state(3, 3, 1.5, -0.5), "a")
        evals = np.sort(np.linalg.eigvalsh(rho))
        assert abs(evals[-1] - 1.0) < 1e-14
        assert np.max(np.abs(evals[:-1])) < 1e-14

    def test_cat_state_half_half(self):
        rho = reduced_density(cat_state(4), "a")
        evals = np.sort(np.linalg.eigvalsh(rho))[-2:]
        np.testing.assert_allclose(evals, [0.5, 0.5], atol=1e-14)

    def test_evolved_state_is_physical(self):
        n = 4
        ham = build_hamiltonian("plane", 0.2, n, n, 1.0 / n)
        st = evolve(opposed_helicity_initial(n), EvolutionPlan(ham, np.array([1.3]), 1e-9))[0]
        for keep in ("a", "b"):
            rho = reduced_density(st, keep)
            assert abs(np.trace(rho).real - 1.0) < 1e-12
            assert np.min(np.linalg.eigvalsh(rho)) > -1e-12
            assert np.max(np.abs(rho - rho.conj().T)) < 1e-14


class TestEntropy:
    def test_pure_state_zero(self):
        assert entanglement_entropy(np.diag([1.0, 0.0, 0.0])) == 0.0

    def test_cat_exactly_log2(self):
        # the cat state's reduced density matrix, written exactly
        assert entanglement_entropy(np.diag([0.5, 0.5])) == np.log(2.0)
        # and through the constructed state
        rho = reduced_density(cat_state(6), "a")
        assert abs(entanglement_entropy(rho) - np.log(2.0)) < 1e-13

    def test_maximally_mixed(self):
        n = 7
        rho = np.eye(n + 1) / (n + 1)
        assert abs(entanglement_entropy(rho) - np.log(n + 1)) < 1e-12

    def test_entropy_bounded_by_log_dim(self):
        n = 5
        ham = build_hamiltonian("circular", 0.0, n, n, 1.0 / n)
        block = block_restrict(ham, 0.0)
        series = observable_series(
            opposed_helicity_initial(n), EvolutionPlan(block, np.arange(0.0, 4.0, 0.05), 1e-9)
        )
        assert np.all(series.s_ent >= -1e-12)
        assert np.all(series.s_ent <= np.log(n + 1) + 1e-12)


class TestVariance:
    def test_eigenstate_zero(self):
        assert variance_ndiff(product_dicke_state(5, 5, 2.5, -2.5), "a") == 0.0

    def test_cat_state_n_squared(self):
        n = 6
        assert abs(variance_ndiff(cat_state(n), "a") - n**2) < 1e-12


class TestSeriesTools:
    def test_zero_crossings_of_sine(self):
        t = np.arange(0.0, 10.0, 0.01)
        roots = zero_crossings(t, np.sin(t + 0.2))
        expected = [np.pi - 0.2, 2 * np.pi - 0.2, 3 * np.pi - 0.2]
        np.testing.assert_allclose(roots[:3], expected, atol=1e-6)

    def test_peaks_of_sine(self):
        t = np.arange(0.0, 20.0, 0.01)
        times, heights = peak_locations(t, np.sin(t), min_height=0.5)
        np.testing.assert_allclose(times[:3], [np.pi / 2, 2.5 * np.pi, 4.5 * np.pi], atol=1e-4)
        np.testing.assert_allclose(heights[:3], 1.0, atol=1e-6)

    def test_flat_top_yields_single_peak(self):
        t = np.linspace(0, 10, 2001)
        y = np.tanh(t) * (1 + 1e-9 * np.sin(40 * t))  # jittery plateau
        times, _ = peak_locations(t, y, min_height=0.5)
        assert len(times) <= 1


class TestObservableSeries:
    def test_block_and_full_paths_agree(self):
        n = 16
        ham = build_hamiltonian("circular", 0.0, n, n, 1.0 / n)
        block = block_restrict(ham, 0.0)
        t_grid = np.arange(0.0, 2.5, 0.02)
        init = opposed_helicity_initial(n)
        sb = observable_series(init, EvolutionPlan(block, t_grid, 1e-9))
        sf = observable_series(init, EvolutionPlan(ham, t_grid, 1e-9))
        for name in ("sigma3", "tau3", "zeta", "zeta_rot", "s_ent", "var_ndiff"):
            assert np.max(np.abs(getattr(sb, name) - getattr(sf, name))) < 1e-10

    def test_exchange_antisymmetry(self):
        n = 24
        ham = build_hamiltonian("circular", 0.0, n, n, 1.0 / n)
        block = block_restrict(ham, 0.0)
        series = observable_series(
            opposed_helicity_initial(n), EvolutionPlan(block, np.arange(0.0, 4.0, 0.01), 1e-9)
        )
        assert np.max(np.abs(series.tau3 + series.sigma3)) < 1e-8

    def test_zeta_zero_at_start(self):
        n = 8
        ham = build_hamiltonian("plane", 0.1, n, n, 1.0 / n)
        series = observable_series(
            opposed_helicity_initial(n), EvolutionPlan(ham, np.arange(0.0, 0.5, 0.05), 1e-9)
        )
        assert series.zeta[0] == 0.0
        assert abs(series.zeta_rot[0]) < 1e-12


class TestBreakTime:
    def test_small_n_ordering_and_turnover(self):
        report = break_time_analysis([8, 16], t_end=4.0, dt_sample=0.005)
        assert report.first_crossings[1] > report.first_crossings[0]
        for series in report.series:
            assert series.sigma3.min() < -0.9

    def test_charge_conserved(self):
        report = break_time_analysis([12], t_end=3.0, dt_sample=0.005)
        series = report.series[0]
        charge = series.sigma3 + series.tau3
        assert np.max(np.abs(charge - charge[0])) < 1e-10

    def test_missing_crossing_raises(self):
        with pytest.raises(RuntimeError):
            break_time_analysis([8], t_end=0.05, dt_sample=0.001)


class TestPlateau:
    def test_small_n_plateau_shape(self):
        report = plateau_analysis([15], cos_theta=1.0, dt_sample=0.02)
        assert abs(report.plateau_heights[0] - 0.5) < 0.05
        assert report.hang_times[0] > 5.0
        assert report.rise_times[0] < 3.0
        assert report.max_sigma3_rot[0] < 0.1


class TestPersistence:
    def test_checkpoint_roundtrip(self, tmp_path):
        n = 3
        ham = build_hamiltonian("plane", 0.4, n, n, 1.0 / n)
        st = evolve(opposed_helicity_initial(n), EvolutionPlan(ham, np.array([0.9]), 1e-9))[0]
        path = tmp_path / "state.pxqs"
        save_checkpoint(path, st, basis="plane", theta=0.4, t=0.9)
        loaded, basis, theta, t = load_checkpoint(path)
        assert (basis, theta, t) == ("plane", 0.4, 0.9)
        assert (loaded.n_a, loaded.n_b) == (n, n)
        np.testing.assert_array_equal(loaded.amplitudes, st.amplitudes)

    def test_checkpoint_layout(self, tmp_path):
        # documented layout: magic, version, sizes, basis code, theta, t,
        # then interleaved re/im little-endian float64
        st = product_dicke_state(1, 1, 0.5, -0.5)
        path = tmp_path / "s.pxqs"
        save_checkpoint(path, st, basis="circular", theta=0.25, t=2.0)
        raw = path.read_bytes()
        assert raw[:4] == b"PXQS"
        payload = np.frombuffer(raw[len(raw) - 8 * 2 * 4 :], dtype="<f8")
        np.testing.assert_array_equal(payload[0::2], st.amplitudes.real)
        np.testing.assert_array_equal(payload[1::2], st.amplitudes.imag)

    def test_checkpoint_rejects_garbage(self, tmp_path):
        path = tmp_path / "bad.pxqs"
        path.write_bytes(b"NOPE" + b"\x00" * 64)
        with pytest.raises(ValueError):
            load_checkpoint(path)

    def test_csv_columns_and_determinism(self, tmp_path):
        n = 4
        ham = build_hamiltonian("circular", 0.0, n, n, 1.0 / n)
        block = block_restrict(ham, 0.0)
        t_grid = np.arange(0.0, 1.0, 0.05)
        series = observable_series(opposed_helicity_initial(n), EvolutionPlan(block, t_grid, 1e-9))
        p1, p2 = tmp_path / "one.csv", tmp_path / "two.csv"
        write_csv(series, p1)
        series2 = observable_series(opposed_helicity_initial(n), EvolutionPlan(block, t_grid, 1e-9))
        write_csv(series2, p2)
        assert p1.read_text().splitlines()[0] == quantum.CSV_COLUMNS
        assert p1.read_bytes() == p2.read_bytes()
