import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from brightpath.effective import (
    BrightTrajectory,
    GeneralBrightHamiltonian,
    finite_difference_adapter,
    h_eff_couplings,
    h_eff_multi,
    h_eff_single,
)
from brightpath.errors import (
    DerivativeInconsistent,
    NormalizationDriftError,
    NotNormalized,
    NotOrthonormal,
)
from brightpath.lambda_system import CouplingSet, bright_state


def rotating_pair(t):
    value = np.array([np.cos(t), np.sin(t)], dtype=complex)
    rate = np.array([-np.sin(t), np.cos(t)], dtype=complex)
    return value, rate


class TestHEffSingle:
    def test_static_state_gives_zero(self, rng):
        b = rng.normal(size=4) + 1j * rng.normal(size=4)
        b /= np.linalg.norm(b)
        h = h_eff_single(b, np.zeros(4))
        np.testing.assert_allclose(h.matrix, np.zeros((4, 4)), atol=0)

    @pytest.mark.parametrize("t", [0.0, 0.37, 1.2])
    def test_planar_rotation_is_sigma_y(self, t):
        # Hand evaluation: i(|Bdot><B| - |B><Bdot|) for B = (cos t, sin t)
        # collapses to the constant matrix with entries (1,2) = -i, (2,1) = +i.
        b, bdot = rotating_pair(t)
        h = h_eff_single(b, bdot).matrix
        np.testing.assert_allclose(h, np.array([[0, -1j], [1j, 0]]), atol=1e-14)

    def test_pure_phase_rotation(self, rng):
        # B = e^{i w t} v gives -2w |v><v|: the bright ray's phase rate shows
        # up (only) on the bright projector.
        v = rng.normal(size=3) + 1j * rng.normal(size=3)
        v /= np.linalg.norm(v)
        w, t = 1.7, 0.4
        b = np.exp(1j * w * t) * v
        bdot = 1j * w * b
        h = h_eff_single(b, bdot).matrix
        np.testing.assert_allclose(h, -2 * w * np.outer(v, v.conj()), atol=1e-13)

    def test_rejects_unnormalized(self):
        with pytest.raises(NotNormalized):
            h_eff_single(np.array([1.0, 1.0]), np.zeros(2))

    def test_rejects_radial_derivative(self):
        with pytest.raises(DerivativeInconsistent):
            h_eff_single(np.array([1.0, 0.0]), np.array([1.0, 0.0]))

    def test_hermitian_and_dark_sandwich(self, rng):
        b = rng.normal(size=5) + 1j * rng.normal(size=5)
        b /= np.linalg.norm(b)
        bdot = rng.normal(size=5) + 1j * rng.normal(size=5)
        bdot -= np.vdot(b, bdot).real * b
        h = h_eff_single(b, bdot).matrix
        # <d|H|d'> = 0 for dark directions orthogonal to both B and Bdot.
        q, _ = np.linalg.qr(np.stack([b, bdot]).T)
        comp = np.eye(5) - q @ q.conj().T
        assert np.linalg.norm(comp @ h @ comp) < 1e-12

    def test_real_trajectory_has_no_bright_diagonal(self):
        b, bdot = rotating_pair(0.81)
        h = h_eff_single(b, bdot).matrix
        assert abs(b.conj() @ h @ b) < 1e-14


class TestHEffMulti:
    def test_zero_derivatives(self, rng):
        frame = np.linalg.qr(rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4)))[0][:, :2].T
        h = h_eff_multi(frame, np.zeros_like(frame))
        np.testing.assert_allclose(h.matrix, np.zeros((4, 4)), atol=0)

    def test_single_state_reduces_to_h_eff_single(self):
        b, bdot = rotating_pair(0.51)
        multi = h_eff_multi([b], [bdot]).matrix
        single = h_eff_single(b, bdot).matrix
        np.testing.assert_allclose(multi, single, atol=0)

    def test_additivity_with_embedded_rotation(self):
        # A rotating state in the first plane plus a static one elsewhere
        # reproduces the k=1 generator embedded in dimension 4.
        t = 0.37
        b1 = np.array([np.cos(t), np.sin(t), 0, 0], dtype=complex)
        b1dot = np.array([-np.sin(t), np.cos(t), 0, 0], dtype=complex)
        b2 = np.array([0, 0, 1, 0], dtype=complex)
        h = h_eff_multi([b1, b2], [b1dot, np.zeros(4)]).matrix
        expected = np.zeros((4, 4), dtype=complex)
        expected[0, 1], expected[1, 0] = -1j, 1j
        np.testing.assert_allclose(h, expected, atol=1e-14)

    def test_exact_sum_of_singles(self, rng):
        frame = np.linalg.qr(rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5)))[0][:, :3].T
        derivs = []
        for b in frame:
            d = rng.normal(size=5) + 1j * rng.normal(size=5)
            d -= np.vdot(b, d).real * b
            derivs.append(d)
        total = h_eff_multi(frame, derivs).matrix
        summed = sum(h_eff_single(b, d).matrix for b, d in zip(frame, derivs))
        np.testing.assert_allclose(total, summed, atol=1e-13)

    def test_rejects_nonorthonormal_frame(self):
        with pytest.raises(NotOrthonormal):
            h_eff_multi([np.array([1.0, 0]), np.array([1.0, 0])], np.zeros((2, 2)))


class TestHEffCouplings:
    def test_static_drive_gives_zero(self):
        c = CouplingSet(omega=1.0, r=np.array([0.6, 0.8]), phi=np.array([0.1, -0.4]))
        h = h_eff_couplings(c, np.zeros(2), np.zeros(2))
        np.testing.assert_allclose(h.matrix, np.zeros((2, 2)), atol=0)

    def test_two_level_rotation_entry(self):
        # Hand evaluation at r = (cos t, sin t): entry (1,2) = i(rdot1 r2 - r1 rdot2) = -i.
        t = 0.93
        c = CouplingSet(omega=1.0, r=np.array([np.cos(t), np.sin(t)]), phi=np.zeros(2))
        h = h_eff_couplings(c, np.array([-np.sin(t), np.cos(t)]), np.zeros(2)).matrix
        np.testing.assert_allclose(h, np.array([[0, -1j], [1j, 0]]), atol=1e-14)

    def test_single_level_phase_rate(self):
        c = CouplingSet(omega=1.0, r=np.array([1.0]), phi=np.array([0.0]))
        h = h_eff_couplings(c, np.zeros(1), np.array([0.9])).matrix
        np.testing.assert_allclose(h, [[-1.8]], atol=1e-15)

    def test_gauge_diagonal(self, rng):
        r = rng.uniform(0.1, 1.0, size=4)
        r /= np.linalg.norm(r)
        phidot = rng.normal(size=4)
        c = CouplingSet(omega=1.0, r=r, phi=rng.uniform(-np.pi, np.pi, size=4))
        h = h_eff_couplings(c, np.zeros(4), phidot).matrix
        np.testing.assert_allclose(np.diag(h), -2 * r**2 * phidot, atol=1e-14)

    def test_normalization_drift_rejected(self):
        c = CouplingSet(omega=1.0, r=np.array([0.6, 0.8]), phi=np.zeros(2))
        with pytest.raises(NormalizationDriftError):
            h_eff_couplings(c, np.array([1.0, 1.0]), np.zeros(2))

    def test_vanishing_amplitude_is_finite(self):
        c = CouplingSet(omega=1.0, r=np.array([0.0, 1.0]), phi=np.array([0.3, 0.0]))
        h = h_eff_couplings(c, np.array([1.3, 0.0]), np.array([0.7, 0.2])).matrix
        assert np.all(np.isfinite(h))
        np.testing.assert_allclose(h[0, 1], 1.3j * np.exp(0.3j), atol=1e-14)

    @given(seed=st.integers(0, 2**32 - 1), n=st.integers(2, 6))
    @settings(max_examples=60, deadline=None)
    def test_form_equivalence_with_bright_state_construction(self, seed, n):
        # Algebraic identity: the coupling-coefficient form equals
        # i(|Bdot><B| - |B><Bdot|) built from the same r, phi and rates.
        rng = np.random.default_rng(seed)
        r = rng.uniform(0.05, 1.0, size=n)
        r /= np.linalg.norm(r)
        phi = rng.uniform(-np.pi, np.pi, size=n)
        rdot = rng.normal(size=n)
        rdot -= np.dot(r, rdot) * r
        phidot = rng.normal(size=n)
        c = CouplingSet(omega=1.0, r=r, phi=phi)
        b = bright_state(c)
        bdot = (rdot + 1j * r * phidot) * np.exp(1j * phi)
        lhs = h_eff_couplings(c, rdot, phidot).matrix
        rhs = h_eff_single(b, bdot).matrix
        assert np.max(np.abs(lhs - rhs)) < 1e-10


class TestBrightTrajectory:
    def make_rotating(self):
        return BrightTrajectory(
            dim=2,
            k=1,
            t_start=0.0,
            t_end=np.pi,
            value=lambda t: np.atleast_2d(rotating_pair(t)[0]),
            derivative=lambda t: np.atleast_2d(rotating_pair(t)[1]),
        )

    def test_validate_accepts_consistent_trajectory(self):
        self.make_rotating().validate()

    def test_validate_flags_wrong_derivative(self):
        bad = BrightTrajectory(
            dim=2,
            k=1,
            t_start=0.0,
            t_end=np.pi,
            value=lambda t: np.atleast_2d(rotating_pair(t)[0]),
            derivative=lambda t: np.atleast_2d(1.05 * rotating_pair(t)[1]),
        )
        with pytest.raises(DerivativeInconsistent):
            bad.validate()

    def test_validate_flags_jump(self):
        def value(t):
            v = rotating_pair(t)[0] if t < 1.5 else rotating_pair(t + 0.3)[0]
            return np.atleast_2d(v)

        jumpy = BrightTrajectory(
            dim=2,
            k=1,
            t_start=0.0,
            t_end=np.pi,
            value=value,
            derivative=lambda t: np.atleast_2d(rotating_pair(t)[1]),
        )
        with pytest.raises(DerivativeInconsistent):
            jumpy.validate(times=[1.5 - 5e-6])

    def test_reversed_swaps_endpoints_and_flips_rates(self):
        traj = self.make_rotating().reversed()
        np.testing.assert_allclose(traj.value(0.0), np.atleast_2d(rotating_pair(np.pi)[0]), atol=1e-15)
        np.testing.assert_allclose(traj.derivative(0.0), -np.atleast_2d(rotating_pair(np.pi)[1]), atol=1e-15)
        traj.validate()

    def test_concatenate_rejects_discontinuity(self):
        first = self.make_rotating()
        second = BrightTrajectory(
            dim=2,
            k=1,
            t_start=np.pi,
            t_end=2 * np.pi,
            value=lambda t: np.atleast_2d(rotating_pair(t + 0.2)[0]),
            derivative=lambda t: np.atleast_2d(rotating_pair(t + 0.2)[1]),
        )
        with pytest.raises(ValueError):
            BrightTrajectory.concatenate([first, second])


class TestFiniteDifferenceAdapter:
    def test_constant_frame(self):
        frame = np.array([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]], dtype=complex)
        traj = finite_difference_adapter(lambda t: frame, 0.0, 1.0, dim=3, k=2)
        assert np.linalg.norm(traj.derivative(0.5)) < 1e-12

    def test_rotating_frame_accuracy(self):
        traj = finite_difference_adapter(
            lambda t: np.atleast_2d(rotating_pair(t)[0]), 0.0, 2.0, dim=2, h=1e-5
        )
        for t in (0.3, 1.0, 1.7):
            exact = np.atleast_2d(rotating_pair(t)[1])
            assert np.linalg.norm(traj.derivative(t) - exact) < 1e-9

    def test_endpoint_stencils_are_second_order(self):
        traj = finite_difference_adapter(
            lambda t: np.atleast_2d(rotating_pair(t)[0]), 0.0, 2.0, dim=2, h=1e-5
        )
        for t in (0.0, 2.0):
            exact = np.atleast_2d(rotating_pair(t)[1])
            assert np.linalg.norm(traj.derivative(t) - exact) < 1e-8

    def test_rejects_nonorthonormal_values(self):
        traj = finite_difference_adapter(
            lambda t: np.atleast_2d([np.cos(t), np.sin(t) + 0.01]), 0.0, 1.0, dim=2
        )
        with pytest.raises(NotOrthonormal):
            traj.derivative(0.5)


class TestMultiBrightTransport:
    """Two bright pairs rotating at once, checked against the full drive.

    This is the regime the single-bright-state shortcut cannot reach: the
    dark space of a degenerate two-manifold drive whose ground singular
    frame rotates in time.  The geometric generator built from all four
    bright states must transport the dark states exactly where the brute
    force Schroedinger integration of the drive takes them.
    """

    R_DIM, M_DIM = 4, 2
    DIM = R_DIM + M_DIM

    def setup_method(self):
        from brightpath.linalg import expm_hermitian
        from brightpath.morris_shore import TwoManifoldSystem, morris_shore_transform

        rng = np.random.default_rng(5)
        v0 = rng.normal(size=(self.R_DIM, self.M_DIM)) + 1j * rng.normal(size=(self.R_DIM, self.M_DIM))
        v0 /= np.linalg.svd(v0, compute_uv=False)[-1]
        self.v0 = v0
        gen = np.zeros((self.R_DIM, self.R_DIM))
        gen[0, 1], gen[1, 0] = -1.0, 1.0
        gen[2, 3], gen[3, 2] = -0.7, 0.7
        self.gen = gen
        self._expm = expm_hermitian
        base = morris_shore_transform(TwoManifoldSystem(v0))
        self.u0, self.w0, self.dark0 = base.ground_bright, base.excited_bright, base.dark_ground

    def angle(self, t):
        return 1.1 * np.sin(np.pi * t / 2.0) ** 2

    def angle_rate(self, t):
        return 1.1 * (np.pi / 2.0) * np.sin(np.pi * t)

    def u_ground(self, t):
        return self._expm(1j * self.gen, self.angle(t)).matrix.real

    def trajectory(self):
        def value(t):
            out = np.zeros((4, self.DIM), dtype=complex)
            out[:2, : self.R_DIM] = (self.u_ground(t) @ self.u0.T).T
            out[2:, self.R_DIM :] = self.w0
            return out

        def derivative(t):
            out = np.zeros((4, self.DIM), dtype=complex)
            rotated = self.angle_rate(t) * (self.gen @ self.u_ground(t))
            out[:2, : self.R_DIM] = (rotated @ self.u0.T).T
            return out

        return BrightTrajectory(dim=self.DIM, k=4, t_start=0.0, t_end=1.0, value=value, derivative=derivative)

    def full_drive(self, omega):
        def h(t):
            v = self.u_ground(t) @ self.v0
            m = np.zeros((self.DIM, self.DIM), dtype=complex)
            m[: self.R_DIM, self.R_DIM :] = omega * v
            m[self.R_DIM :, : self.R_DIM] = omega * v.conj().T
            return m

        return h

    def dark_frames(self):
        start = np.zeros((2, self.DIM), dtype=complex)
        start[:, : self.R_DIM] = self.dark0
        end = np.zeros((2, self.DIM), dtype=complex)
        end[:, : self.R_DIM] = self.dark0 @ self.u_ground(1.0).T
        return start, end

    def test_trajectory_validates(self):
        self.trajectory().validate()

    def test_geometric_transport_matches_full_drive(self):
        from brightpath.linalg import matrix_distance
        from brightpath.propagators import dark_block, evolve_time_ordered

        traj = self.trajectory()
        geo = evolve_time_ordered(traj.h_eff, 0.0, 1.0, 4096).unitary
        start, end = self.dark_frames()
        block_geo = dark_block(geo, start, end)
        # Geometric propagation stays exactly on the dark bundle.
        assert np.linalg.norm(block_geo.conj().T @ block_geo - np.eye(2)) < 1e-12
        distances = []
        for omega, steps in ((100.0, 16384), (300.0, 32768)):
            full = evolve_time_ordered(self.full_drive(omega), 0.0, 1.0, steps).unitary
            block_full = dark_block(full, start, end)
            distances.append(matrix_distance(block_full, block_geo, "up_to_global_phase"))
        assert distances[0] < 2e-4
        assert distances[1] < distances[0] / 3.0


class TestGeneralBrightHamiltonian:
    def static_pair(self, g_matrix):
        frame = np.array([[1, 0, 0, 0], [0, 0, 1, 0]], dtype=complex)
        traj = BrightTrajectory(
            dim=4,
            k=2,
            t_start=0.0,
            t_end=1.0,
            value=lambda t: frame,
            derivative=lambda t: np.zeros_like(frame),
        )
        return GeneralBrightHamiltonian(frames=traj, g=lambda t: np.asarray(g_matrix, complex))

    def test_assembles_pair_hamiltonian(self):
        gbh = self.static_pair([[0.0, 1.3], [0.0, 0.0]])
        h = gbh.hamiltonian(0.5).matrix
        expected = np.zeros((4, 4), dtype=complex)
        expected[0, 2] = expected[2, 0] = 1.3
        np.testing.assert_allclose(h, expected, atol=0)

    def test_diagonal_g_counts_twice(self):
        gbh = self.static_pair([[0.7 + 0.2j, 1.0], [0.0, 0.0]])
        h = gbh.hamiltonian(0.0).matrix
        # The double sum puts g_ii + g_ii^* = 2 Re(g_ii) on |B_i><B_i|.
        assert abs(h[0, 0] - 1.4) < 1e-14

    def test_rejects_gapless_bright_block(self):
        with pytest.raises(ValueError):
            self.static_pair([[0.0, 0.0], [0.0, 0.0]])
