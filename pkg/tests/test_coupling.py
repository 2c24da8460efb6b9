"""Coupling constants, rate formulas, Hamiltonian assembly and blocks."""

import numpy as np
import pytest
import scipy.sparse as sp
from scipy.linalg import expm

from polex import coupling, spinspace
from polex.coupling import (
    MEASURED_PREFACTOR_RATIO,
    PhysicalInputs,
    block_restrict,
    build_hamiltonian,
    coupling_constants,
    exchange_length,
    export_triplets,
    first_principles_rate,
    hydrogen_R,
    load_triplets,
    total_m_operator,
)
from polex.spinspace import collective_op, product_dicke_state

# hydrogen coupling at omega = 1 eV, n_e = 2.69e19 cm^-3, frozen from a
# 40-digit mpmath evaluation (two independent unit routes agreed to 2e-9,
# limited by CODATA rounding)
R_REFERENCE = 2.16728975e-27


class TestHydrogenR:
    def test_zero_density(self):
        assert hydrogen_R(1.0, 0.0) == 0.0

    def test_omega_squared_homogeneity(self):
        r1 = hydrogen_R(0.7, 3.1e18)
        r2 = hydrogen_R(1.4, 3.1e18)
        assert abs(r2 / r1 - 4.0) < 1e-12

    def test_frozen_reference_value(self):
        assert abs(hydrogen_R(1.0, 2.69e19) / R_REFERENCE - 1.0) < 1e-7

    def test_dipole_regime_warning(self):
        with pytest.warns(UserWarning):
            hydrogen_R(15.0, 1e19)

    def test_rejects_nonpositive_omega(self):
        with pytest.raises(ValueError):
            hydrogen_R(0.0, 1e19)


class TestExchangeLength:
    def unit_inputs(self, **kw):
        base = dict(omega1=1.0, omega2=1.0, rho=1.0, I1=1.0, I2=1.0)
        base.update(kw)
        return PhysicalInputs(**base)

    def test_unit_ratios(self):
        assert exchange_length(self.unit_inputs()) == 1.8e-7

    def test_intensity_scaling(self):
        base = exchange_length(self.unit_inputs())
        scaled = exchange_length(self.unit_inputs(I1=4.0, I2=4.0))
        assert abs(scaled / base - 4.0) < 1e-12

    def test_omega_geometric_mean(self):
        val = exchange_length(self.unit_inputs(omega1=4.0, omega2=1.0))
        assert abs(val - 3.6e-7) < 1e-18

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            exchange_length(self.unit_inputs(I1=0.0))

    def test_photon_density_value(self):
        # 1 W/cm^2 of 1 eV photons: flux/c = 2.0819e8 cm^-3
        n1 = self.unit_inputs().photon_density(1)
        assert abs(n1 / 2.08194e8 - 1.0) < 1e-4

    def test_first_principles_shares_scaling(self):
        # the two rate routes must scale identically even though their
        # prefactors differ by a units-convention factor
        base = self.unit_inputs()
        ratio0 = exchange_length(base) / first_principles_rate(base)
        for kw in (dict(omega1=2.5, omega2=0.4), dict(rho=3.7), dict(I1=9.0, I2=0.25)):
            other = self.unit_inputs(**kw)
            ratio = exchange_length(other) / first_principles_rate(other)
            assert abs(ratio / ratio0 - 1.0) < 1e-9

    def test_prefactor_ratio_regression(self):
        base = self.unit_inputs()
        ratio = exchange_length(base) / first_principles_rate(base)
        assert abs(ratio / MEASURED_PREFACTOR_RATIO - 1.0) < 5e-3

    def test_coupling_constants_bundle(self):
        consts = coupling_constants(self.unit_inputs())
        assert consts.inverse_length == 1.8e-7
        assert consts.R > 0 and consts.n1 > 0 and consts.g == consts.R


def two_photon_matrix(theta, basis):
    c, s2 = np.cos(theta), np.sin(theta) ** 2
    az = spinspace.PHOTON_S2 if basis == "circular" else spinspace.PHOTON_S3
    sign = 1.0 if basis == "circular" else -1.0
    eye = np.eye(2)
    return (
        sign * s2 * (np.kron(az, eye) + np.kron(eye, az))
        + 2 * c * np.kron(spinspace.PHOTON_S1, spinspace.PHOTON_S1)
        + (1 + c * c) * np.kron(az, az)
    )


class TestBuildHamiltonian:
    @pytest.mark.parametrize("basis", ["plane", "circular"])
    @pytest.mark.parametrize("theta", [0.0, 0.3, np.pi / 2, np.pi])
    def test_exact_hermiticity(self, basis, theta):
        ham = build_hamiltonian(basis, theta, 4, 3, 0.7)
        diff = ham.matrix - ham.matrix.conjugate().transpose()
        assert diff.nnz == 0 or np.max(np.abs(diff.data)) == 0.0

    def test_circular_head_on_ladder_form(self):
        # H = 2g (S1T1 + S2T2) = 4g (S+T- + S-T+) at theta = 0
        n_a, n_b, g = 3, 2, 0.5
        ham = build_hamiltonian("circular", 0.0, n_a, n_b, g)
        sp_a = collective_op(n_a, "Splus").matrix
        sm_a = collective_op(n_a, "Sminus").matrix
        sp_b = collective_op(n_b, "Splus").matrix
        sm_b = collective_op(n_b, "Sminus").matrix
        ladder = 4.0 * g * (sp.kron(sp_a, sm_b) + sp.kron(sm_a, sp_b))
        assert np.max(np.abs((ham.matrix - ladder).toarray())) < 1e-14

    def test_total_m_commutator(self):
        ham = build_hamiltonian("circular", 0.0, 4, 4, 1.0)
        qop = total_m_operator(4, 4)
        comm = ham.matrix @ qop - qop @ ham.matrix
        assert comm.nnz == 0 or np.max(np.abs(comm.data)) == 0.0
        assert ham.conserves_total_m

    def test_nonzero_theta_breaks_conservation(self):
        ham = build_hamiltonian("circular", 0.2, 3, 3, 1.0)
        qop = total_m_operator(3, 3)
        comm = (ham.matrix @ qop - qop @ ham.matrix).toarray()
        assert np.max(np.abs(comm)) > 1e-3
        assert not ham.conserves_total_m
        assert not build_hamiltonian("plane", 0.0, 3, 3, 1.0).conserves_total_m

    def test_plane_perpendicular_beams(self):
        # cos(theta) = 0: no S1T1 cross term, single-beam coefficient -g
        n_a, n_b, g = 2, 2, 1.3
        ham = build_hamiltonian("plane", np.pi / 2, n_a, n_b, g)
        z_a = collective_op(n_a, "S3").matrix
        z_b = collective_op(n_b, "S3").matrix
        ia = sp.identity(n_a + 1, dtype=complex)
        ib = sp.identity(n_b + 1, dtype=complex)
        expected = g * (
            -(sp.kron(z_a, ib) * n_b + sp.kron(ia, z_b) * n_a) + sp.kron(z_a, z_b)
        )
        assert np.max(np.abs((ham.matrix - expected).toarray())) < 1e-14

    def test_single_pair_matches_two_photon(self):
        for basis in ("plane", "circular"):
            ham = build_hamiltonian(basis, 0.3, 1, 1, 1.0)
            np.testing.assert_allclose(
                ham.matrix.toarray(), two_photon_matrix(0.3, basis), atol=1e-14
            )

    @pytest.mark.parametrize("basis", ["plane", "circular"])
    def test_nine_point_stencil(self, basis):
        ham = build_hamiltonian(basis, 0.4, 5, 4, 1.0)
        coo = ham.matrix.tocoo()
        nb1 = ham.n_b + 1
        for r, c in zip(coo.row, coo.col):
            assert abs(r // nb1 - c // nb1) <= 1
            assert abs(r % nb1 - c % nb1) <= 1

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_basis_map_unitary(self, n):
        # circular H is the plane H conjugated by exp(i pi S1 / 4) per beam
        theta = 0.6
        plane = build_hamiltonian("plane", theta, n, n, 1.0).matrix.toarray()
        circ = build_hamiltonian("circular", theta, n, n, 1.0).matrix.toarray()
        s1 = collective_op(n, "S1").matrix.toarray()
        w = expm(1j * (np.pi / 4.0) * s1)
        ww = np.kron(w, w)
        np.testing.assert_allclose(ww.conj().T @ plane @ ww, circ, atol=1e-11)

    def test_input_validation(self):
        with pytest.raises(ValueError):
            build_hamiltonian("linear", 0.0, 2, 2, 1.0)
        with pytest.raises(ValueError):
            build_hamiltonian("plane", -0.1, 2, 2, 1.0)
        with pytest.raises(ValueError):
            build_hamiltonian("plane", 0.1, 2, 2, 0.0)


class TestBlockRestrict:
    def test_block_dimension_and_indexing(self):
        n = 5
        ham = build_hamiltonian("circular", 0.0, n, n, 1.0)
        block = block_restrict(ham, 0.0)
        assert block.dim == n + 1
        for m_a, m_b in block.index_map:
            assert m_a + m_b == 0.0

    def test_initial_state_in_block(self):
        n = 4
        ham = build_hamiltonian("circular", 0.0, n, n, 1.0)
        block = block_restrict(ham, 0.0)
        psi = product_dicke_state(n, n, n / 2.0, -n / 2.0).amplitudes
        inside = np.linalg.norm(psi[block.flat_indices])
        assert abs(inside - 1.0) < 1e-14

    def test_block_evolution_matches_full(self):
        n = 4
        g = 1.0 / n
        ham = build_hamiltonian("circular", 0.0, n, n, g)
        block = block_restrict(ham, 0.0)
        psi_full = product_dicke_state(n, n, n / 2.0, -n / 2.0).amplitudes
        psi_block = psi_full[block.flat_indices]
        s3_full = sp.kron(collective_op(n, "S3").matrix, sp.identity(n + 1)).tocsr()
        ma = np.array([p[0] for p in block.index_map])
        for t in np.linspace(0.3, 4.0, 7):
            uf = expm(-1j * t * ham.matrix.toarray()) @ psi_full
            ub = expm(-1j * t * block.matrix.toarray()) @ psi_block
            v_full = np.vdot(uf, s3_full @ uf).real / n
            v_block = float((2 * ma / n) @ (np.abs(ub) ** 2))
            assert abs(v_full - v_block) < 1e-10

    def test_rejects_nonconserving(self):
        ham = build_hamiltonian("plane", 0.0, 3, 3, 1.0)
        with pytest.raises(ValueError):
            block_restrict(ham, 0.0)

    def test_blocks_reconstruct_dimension(self):
        n_a, n_b = 3, 2
        ham = build_hamiltonian("circular", 0.0, n_a, n_b, 1.0)
        total = 0
        for m in np.arange(-(n_a + n_b) / 2.0, (n_a + n_b) / 2.0 + 0.5):
            total += block_restrict(ham, float(m)).dim
        assert total == (n_a + 1) * (n_b + 1)


def test_triplet_export_roundtrip(tmp_path):
    ham = build_hamiltonian("circular", 0.25, 3, 2, 0.8)
    path = tmp_path / "ham.txt"
    export_triplets(ham, path)
    loaded = load_triplets(path)
    assert np.max(np.abs((loaded - ham.matrix).toarray())) < 1e-15
    text = path.read_text().splitlines()
    assert text[0].startswith("#") and "nnz" in text[0]
    assert len(text[2].split()) == 4


def test_constants_table_mentions_codata_values():
    table = coupling.constants_table()
    assert "27.211386245988" in table
    assert "cm" in table
