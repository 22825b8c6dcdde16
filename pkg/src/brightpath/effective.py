"""Geometric effective Hamiltonians built from bright-state trajectories.

The central object is :class:`BrightTrajectory`: a time-dependent orthonormal
set of bright states with first-class derivative access.  From a trajectory
(or from laser coupling coefficients and their rates) these routines build
the Hermitian generator

    H_eff = sum_i  i (|Bdot_i><B_i| - |B_i><Bdot_i|),

whose Schroedinger evolution transports the instantaneous dark subspace
without ever constructing a dark basis.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import (
    DerivativeInconsistent,
    DimensionMismatch,
    NormalizationDriftError,
    NotNormalized,
)
from .lambda_system import CouplingSet
from .linalg import (
    INPUT_ORTHONORMALITY_TOL,
    HermitianOperator,
    check_orthonormal,
)

DERIVATIVE_TANGENCY_TOL = 1e-8
NORMALIZATION_DRIFT_TOL = 1e-8


def h_eff_single(b: np.ndarray, bdot: np.ndarray) -> HermitianOperator:
    """Effective generator i(|Bdot><B| - |B><Bdot|) for one bright state.

    ``b`` must be normalized and ``Re <Bdot|B>`` must vanish (any derivative
    of a normalized trajectory is tangent to the unit sphere).
    """
    b = np.asarray(b, dtype=complex)
    bdot = np.asarray(bdot, dtype=complex)
    if b.shape != bdot.shape or b.ndim != 1:
        raise DimensionMismatch(f"state and derivative shapes differ: {b.shape} vs {bdot.shape}")
    deviation = abs(np.vdot(b, b).real - 1.0)
    if deviation >= 1e-8:
        raise NotNormalized(f"|<B|B> - 1| = {deviation:.3e}")
    tangency = abs(np.vdot(bdot, b).real)
    if tangency >= DERIVATIVE_TANGENCY_TOL * max(1.0, float(np.linalg.norm(bdot))):
        raise DerivativeInconsistent(f"Re <Bdot|B> = {tangency:.3e} is not ~0")
    cross = np.outer(bdot, b.conj())
    return HermitianOperator(1j * (cross - cross.conj().T))


def h_eff_multi(values: Sequence[np.ndarray] | np.ndarray, derivatives: Sequence[np.ndarray] | np.ndarray) -> HermitianOperator:
    """Sum of single-bright-state generators for an orthonormal bright set."""
    frame = np.atleast_2d(np.asarray(values, dtype=complex))
    dframe = np.atleast_2d(np.asarray(derivatives, dtype=complex))
    if frame.shape != dframe.shape:
        raise DimensionMismatch(f"value/derivative shapes differ: {frame.shape} vs {dframe.shape}")
    check_orthonormal(frame)
    for bdot, b in zip(dframe, frame):
        tangency = abs(np.vdot(bdot, b).real)
        if tangency >= DERIVATIVE_TANGENCY_TOL * max(1.0, float(np.linalg.norm(bdot))):
            raise DerivativeInconsistent(f"Re <Bdot_i|B_i> = {tangency:.3e} is not ~0")
    cross = dframe.T @ frame.conj()
    return HermitianOperator(1j * (cross - cross.conj().T))


def h_eff_couplings(c: CouplingSet, rdot, phidot) -> HermitianOperator:
    """Effective generator directly from laser coupling coefficients.

    Entry (i, j) is  r_i r_j [-(phidot_i + phidot_j) + i d/dt ln(r_i/r_j)]
    e^{i(phi_i - phi_j)}, with the logarithmic-derivative term evaluated as
    i (rdot_i r_j - r_i rdot_j), which stays finite when amplitudes vanish.
    """
    rdot = np.asarray(rdot, dtype=float)
    phidot = np.asarray(phidot, dtype=float)
    if rdot.shape != c.r.shape or phidot.shape != c.r.shape:
        raise DimensionMismatch("rdot/phidot must match the coupling set size")
    drift = abs(float(np.sum(c.r * rdot)))
    if drift >= NORMALIZATION_DRIFT_TOL * max(1.0, float(np.linalg.norm(rdot))):
        raise NormalizationDriftError(f"sum(r_i rdot_i) = {drift:.3e} is not ~0")
    gauge = -np.add.outer(phidot, phidot) * np.outer(c.r, c.r)
    twist = 1j * (np.outer(rdot, c.r) - np.outer(c.r, rdot))
    phase = np.exp(1j * np.subtract.outer(c.phi, c.phi))
    return HermitianOperator((gauge + twist) * phase)


@dataclass(frozen=True)
class BrightTrajectory:
    """Time-dependent orthonormal bright frame with analytic derivatives.

    ``value(t)`` returns a (k, dim) array of bright states, ``derivative(t)``
    their time derivatives.  ``breakpoints`` lists interior times where the
    derivative may jump (piecewise schedules); value stays continuous there.
    Evaluation must be pure: the same t always yields the same output.
    """

    dim: int
    k: int
    t_start: float
    t_end: float
    value: Callable[[float], np.ndarray]
    derivative: Callable[[float], np.ndarray]
    breakpoints: tuple[float, ...] = ()

    def h_eff(self, t: float) -> HermitianOperator:
        """The geometric generator carried by this trajectory at time ``t``."""
        return h_eff_multi(self.value(t), self.derivative(t))

    def reversed(self) -> "BrightTrajectory":
        """The same bright path traversed backwards in time."""
        t0, t1 = self.t_start, self.t_end
        return BrightTrajectory(
            dim=self.dim,
            k=self.k,
            t_start=t0,
            t_end=t1,
            value=lambda t: self.value(t0 + t1 - t),
            derivative=lambda t: -self.derivative(t0 + t1 - t),
            breakpoints=tuple(sorted(t0 + t1 - b for b in self.breakpoints)),
        )

    def validate(self, times: Sequence[float] | None = None, steps_h: tuple[float, float] = (1e-4, 1e-5)) -> None:
        """Check orthonormality and derivative consistency at probe times.

        The derivative check requires the central-difference error to fall
        at second order between the two probe steps (a jump in the frame
        shows up as a stagnating error and is flagged).
        """
        if times is None:
            times = self._default_probe_times()
        h_big, h_small = steps_h
        for t in times:
            frame = np.atleast_2d(self.value(t))
            check_orthonormal(frame, tol=INPUT_ORTHONORMALITY_TOL)
            if t - h_big < self.t_start or t + h_big > self.t_end:
                continue
            if any(abs(t - b) < 2 * h_big for b in self.breakpoints):
                continue
            deriv = np.atleast_2d(self.derivative(t))
            err = []
            for h in (h_big, h_small):
                fd = (np.atleast_2d(self.value(t + h)) - np.atleast_2d(self.value(t - h))) / (2 * h)
                err.append(float(np.linalg.norm(fd - deriv)))
            # Second-order decrease, with an absolute floor for trajectories
            # whose finite-difference error already sits at roundoff.
            if err[1] > 1e-9 and err[1] > 0.05 * err[0]:
                raise DerivativeInconsistent(
                    f"central-difference error at t={t:.6g} fell from {err[0]:.3e} "
                    f"to {err[1]:.3e} only; expected second-order decrease"
                )

    def _default_probe_times(self, count: int = 9) -> list[float]:
        span = self.t_end - self.t_start
        raw = [self.t_start + span * (i + 0.5) / count for i in range(count)]
        # Nudge probes off derivative breakpoints.
        return [t + 1e-3 * span if any(abs(t - b) < 1e-6 * span for b in self.breakpoints) else t for t in raw]

    @staticmethod
    def concatenate(pieces: Sequence["BrightTrajectory"], continuity_tol: float = 1e-12) -> "BrightTrajectory":
        """Join consecutive trajectory pieces into one piecewise trajectory.

        Adjacent pieces must agree in dimensions and meet continuously
        (values at the shared boundary equal within ``continuity_tol``).
        """
        if not pieces:
            raise ValueError("need at least one piece")
        dim, k = pieces[0].dim, pieces[0].k
        for left, right in zip(pieces, pieces[1:]):
            if (right.dim, right.k) != (dim, k):
                raise DimensionMismatch("pieces act on different spaces")
            if abs(right.t_start - left.t_end) > 1e-12:
                raise ValueError("pieces must tile the time axis contiguously")
            mismatch = float(np.linalg.norm(np.atleast_2d(left.value(left.t_end)) - np.atleast_2d(right.value(right.t_start))))
            if mismatch > continuity_tol:
                raise ValueError(f"discontinuity {mismatch:.3e} at t={left.t_end!r}")
        edges = [p.t_start for p in pieces[1:]]
        interior = tuple(sorted(set(edges).union(b for p in pieces for b in p.breakpoints)))

        def locate(t: float) -> "BrightTrajectory":
            idx = bisect.bisect_right(edges, t)
            return pieces[idx]

        return BrightTrajectory(
            dim=dim,
            k=k,
            t_start=pieces[0].t_start,
            t_end=pieces[-1].t_end,
            value=lambda t: locate(t).value(t),
            derivative=lambda t: locate(t).derivative(t),
            breakpoints=interior,
        )


def finite_difference_adapter(
    value_only: Callable[[float], np.ndarray],
    t_start: float,
    t_end: float,
    dim: int,
    k: int = 1,
    h: float | None = None,
) -> BrightTrajectory:
    """Wrap a value-only frame schedule with numerical derivatives.

    Central differences in the interior, one-sided second-order stencils at
    the domain endpoints.  Values are passed through unchanged (no
    re-orthonormalization) and are orthonormality-checked at every
    evaluation; the default step is 1e-6 * max(1, |t|).
    """

    def step(t: float) -> float:
        return h if h is not None else 1e-6 * max(1.0, abs(t))

    def value(t: float) -> np.ndarray:
        frame = np.atleast_2d(np.asarray(value_only(t), dtype=complex))
        check_orthonormal(frame)
        return frame

    def derivative(t: float) -> np.ndarray:
        dt = step(t)
        if t - dt >= t_start and t + dt <= t_end:
            return (value(t + dt) - value(t - dt)) / (2 * dt)
        if t + dt > t_end:
            return (3 * value(t) - 4 * value(t - dt) + value(t - 2 * dt)) / (2 * dt)
        return (-3 * value(t) + 4 * value(t + dt) - value(t + 2 * dt)) / (2 * dt)

    return BrightTrajectory(dim=dim, k=k, t_start=t_start, t_end=t_end, value=value, derivative=derivative)


@dataclass(frozen=True)
class GeneralBrightHamiltonian:
    """Drive Hamiltonian expressed through an orthonormal bright set.

    ``H(t) = sum_ij g_ij(t) |B_i><B_j| + g_ij(t)* |B_j><B_i|``; note the
    double sum counts diagonal terms twice, so a diagonal entry g_ii
    contributes 2 Re(g_ii) |B_i><B_i|.  The restriction of H to the bright
    span must stay gapped away from zero over the whole domain.
    """

    frames: BrightTrajectory
    g: Callable[[float], np.ndarray]
    validation_samples: int = field(default=9, repr=False)

    def __post_init__(self):
        t0, t1 = self.frames.t_start, self.frames.t_end
        for i in range(self.validation_samples):
            t = t0 + (t1 - t0) * (i + 0.5) / self.validation_samples
            g = np.asarray(self.g(t), dtype=complex)
            if g.shape != (self.frames.k, self.frames.k):
                raise DimensionMismatch(f"g(t) must be {self.frames.k}x{self.frames.k}, got {g.shape}")
            restriction = g + g.conj().T
            gap = float(np.min(np.abs(np.linalg.eigvalsh(restriction))))
            if gap <= 1e-8 * max(np.linalg.norm(g), 1e-300):
                raise ValueError(f"bright-span eigenvalue {gap:.3e} too close to zero at t={t:.6g}")

    def hamiltonian(self, t: float) -> HermitianOperator:
        """Assemble the full drive Hamiltonian at time ``t``."""
        frame = np.atleast_2d(self.frames.value(t))
        g = np.asarray(self.g(t), dtype=complex)
        half = frame.T @ g @ frame.conj()
        return HermitianOperator(half + half.conj().T)

    def h_eff(self, t: float) -> HermitianOperator:
        """Geometric generator of the dark subspace of this drive."""
        return self.frames.h_eff(t)
