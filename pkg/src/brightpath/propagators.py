"""Unitary propagation of time-dependent Hamiltonians.

Two integrators share the exponential midpoint rule (second order, unitary
by construction): a generic time-ordered product for geometric generators,
and a full Schroedinger integrator for Lambda-system drives that serves as
the brute-force oracle the geometric methods are checked against.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Literal

import numpy as np

from .errors import NonHermitianSample, NonMonotoneMap, NotHermitian
from .lambda_system import CouplingSet, bright_state
from .linalg import (
    HermitianOperator,
    UnitaryOperator,
    as_frame,
    expm_hermitian,
)
from .ramps import ramp_value

DEFAULT_GEOMETRIC_STEPS = 4096
DEFAULT_FULL_STEPS = 65536


@dataclass(frozen=True)
class PropagationResult:
    """A propagated unitary with its discretization diagnostics."""

    unitary: UnitaryOperator
    steps: int
    unitarity_error: float
    method: Literal["effective", "full", "berry"]


@dataclass(frozen=True)
class AdiabaticRunConfig:
    """Settings for a full-dynamics adiabatic run.

    ``omega_T`` is the dimensionless product of the Rabi frequency and the
    total duration; the schedule itself is expressed over normalized
    progress s in [0, 1], optionally reshaped by the ramp profile.
    """

    omega_T: float
    steps: int = DEFAULT_FULL_STEPS
    ramp: Literal["linear", "smooth"] = "linear"

    def __post_init__(self):
        if self.omega_T <= 0:
            raise ValueError(f"omega_T must be positive, got {self.omega_T}")
        if self.steps < 10:
            raise ValueError(f"steps must be >= 10, got {self.steps}")


def _renormalize(u: np.ndarray) -> tuple[UnitaryOperator, float]:
    """Project the accumulated product back onto the unitary group (polar
    decomposition) and report the pre-projection drift."""
    w, _, vh = np.linalg.svd(u)
    clean = w @ vh
    drift = float(np.linalg.norm(clean.conj().T @ u - np.eye(u.shape[0])))
    return UnitaryOperator(clean), drift


def evolve_time_ordered(
    hamiltonian: Callable[[float], HermitianOperator | np.ndarray],
    t0: float,
    t1: float,
    steps: int = DEFAULT_GEOMETRIC_STEPS,
) -> PropagationResult:
    """Time-ordered product of midpoint-rule exponentials.

    U = exp(-i H(m_M) dt) ... exp(-i H(m_1) dt) with m_j the midpoint of the
    j-th subinterval; later factors multiply from the left.
    """
    if steps < 1:
        raise ValueError(f"steps must be >= 1, got {steps}")
    if not t1 > t0:
        raise ValueError(f"need t1 > t0, got [{t0}, {t1}]")
    dt = (t1 - t0) / steps
    dim = None
    u = None
    for j in range(steps):
        mid = t0 + (j + 0.5) * dt
        sample = hamiltonian(mid)
        if not isinstance(sample, HermitianOperator):
            try:
                sample = HermitianOperator(sample)
            except NotHermitian as exc:
                raise NonHermitianSample(f"H({mid:.6g}) failed the hermiticity check: {exc}") from exc
        if u is None:
            dim = sample.dim
            u = np.eye(dim, dtype=complex)
        u = expm_hermitian(sample, dt).matrix @ u
    unitary, drift = _renormalize(u)
    return PropagationResult(unitary=unitary, steps=steps, unitarity_error=drift, method="effective")


def evolve_trajectory(trajectory, t0=None, t1=None, steps: int = DEFAULT_GEOMETRIC_STEPS) -> PropagationResult:
    """Propagate the geometric generator carried by a bright trajectory."""
    t0 = trajectory.t_start if t0 is None else t0
    t1 = trajectory.t_end if t1 is None else t1
    return evolve_time_ordered(trajectory.h_eff, t0, t1, steps)


def _lambda_step_factors(b: np.ndarray, phase: np.ndarray) -> np.ndarray:
    """Exact one-step propagators exp(-i H dt) for Lambda Hamiltonians.

    ``b``: (M, n) bright states per step, ``phase``: (M,) values of
    Omega * dt.  Each factor acts on n+1 levels and is assembled from the
    closed form  1 + (cos p - 1)(P_B + P_e) - i sin p (|B><e| + |e><B|).
    """
    m, n = b.shape
    dim = n + 1
    factors = np.zeros((m, dim, dim), dtype=complex)
    factors[:, range(dim), range(dim)] = 1.0
    cosem = np.cos(phase) - 1.0
    sine = 1j * np.sin(phase)
    factors[:, :n, :n] += cosem[:, None, None] * np.einsum("mi,mj->mij", b, b.conj())
    factors[:, n, n] += cosem
    factors[:, :n, n] -= sine[:, None] * b
    factors[:, n, :n] -= sine[:, None] * b.conj()
    return factors


def _ordered_product(factors: np.ndarray) -> np.ndarray:
    """Product F_{M-1} @ ... @ F_0 via pairwise tree reduction."""
    while factors.shape[0] > 1:
        m = factors.shape[0]
        even = factors[0 : m - m % 2 : 2]
        odd = factors[1 : m : 2]
        merged = np.einsum("mij,mjk->mik", odd, even)
        if m % 2:
            merged = np.concatenate([merged, factors[-1:]], axis=0)
        factors = merged
    return factors[0]


def evolve_full_adiabatic(
    schedule: Callable[[float], CouplingSet],
    config: AdiabaticRunConfig,
) -> PropagationResult:
    """Integrate the full (n+1)-level Schroedinger equation for a drive.

    The coupling schedule is sampled at subinterval midpoints of the
    normalized progress axis (reshaped by ``config.ramp``) and each step is
    the exact exponential of the sampled Lambda Hamiltonian.  This is the
    ground-truth oracle the geometric methods are compared against.
    """
    mids = (np.arange(config.steps) + 0.5) / config.steps
    shaped = ramp_value(config.ramp, mids)
    sample = getattr(schedule, "sample", None)
    if sample is not None:
        r, phi, omega = sample(shaped)
        r = np.asarray(r, dtype=float)
        phi = np.asarray(phi, dtype=float)
        omega = np.broadcast_to(np.asarray(omega, dtype=float), (config.steps,))
    else:
        sets = [schedule(float(s)) for s in shaped]
        r = np.array([c.r for c in sets])
        phi = np.array([c.phi for c in sets])
        omega = np.array([c.omega for c in sets])
    if np.any(omega <= 0):
        raise ValueError("the drive must keep Omega > 0 throughout the run")
    omega0 = omega[0]
    duration = config.omega_T / omega0
    b = r * np.exp(1j * phi)
    factors = _lambda_step_factors(b, omega * (duration / config.steps))
    unitary, drift = _renormalize(_ordered_product(factors))
    return PropagationResult(unitary=unitary, steps=config.steps, unitarity_error=drift, method="full")


def evolve_state_full(
    schedule: Callable[[float], CouplingSet],
    config: AdiabaticRunConfig,
    state: np.ndarray,
    record_every: int = 1,
) -> tuple[np.ndarray, np.ndarray]:
    """Propagate one state through the full dynamics, recording snapshots.

    Returns (times, states) with ``times`` in normalized progress units and
    ``states`` of shape (len(times), n+1); row 0 is the initial state.
    """
    mids = (np.arange(config.steps) + 0.5) / config.steps
    shaped = ramp_value(config.ramp, mids)
    psi = np.asarray(state, dtype=complex).copy()
    c0 = schedule(float(shaped[0]))
    duration = config.omega_T / c0.omega
    dt = duration / config.steps
    times = [0.0]
    snapshots = [psi.copy()]
    n = c0.n
    for j, s in enumerate(shaped):
        c = schedule(float(s))
        bvec = bright_state(c)
        p = c.omega * dt
        amp_b = bvec.conj() @ psi[:n]
        amp_e = psi[n]
        cosem, sin = np.cos(p) - 1.0, np.sin(p)
        psi[:n] += (cosem * amp_b - 1j * sin * amp_e) * bvec
        psi[n] += cosem * amp_e - 1j * sin * amp_b
        if (j + 1) % record_every == 0 or j == config.steps - 1:
            times.append((j + 1) / config.steps)
            snapshots.append(psi.copy())
    return np.asarray(times), np.asarray(snapshots)


def evolve_state_time_ordered(
    hamiltonian: Callable[[float], HermitianOperator | np.ndarray],
    t0: float,
    t1: float,
    steps: int,
    state: np.ndarray,
    record_every: int = 1,
) -> tuple[np.ndarray, np.ndarray]:
    """Midpoint-rule propagation of one state, with snapshots.

    Returns (times, states); row 0 is the initial state at t0.
    """
    dt = (t1 - t0) / steps
    psi = np.asarray(state, dtype=complex).copy()
    times = [t0]
    snapshots = [psi.copy()]
    for j in range(steps):
        mid = t0 + (j + 0.5) * dt
        sample = hamiltonian(mid)
        if not isinstance(sample, HermitianOperator):
            try:
                sample = HermitianOperator(sample)
            except NotHermitian as exc:
                raise NonHermitianSample(f"H({mid:.6g}) failed the hermiticity check: {exc}") from exc
        psi = expm_hermitian(sample, dt).matrix @ psi
        if (j + 1) % record_every == 0 or j == steps - 1:
            times.append(t0 + (j + 1) * dt)
            snapshots.append(psi.copy())
    return np.asarray(times), np.asarray(snapshots)


def dark_block(u: UnitaryOperator | np.ndarray, frame_start, frame_end) -> np.ndarray:
    """Matrix elements M_ab = <end_a| U |start_b> between dark frames."""
    matrix = u.matrix if isinstance(u, UnitaryOperator) else np.asarray(u, dtype=complex)
    start = as_frame(frame_start)
    end = as_frame(frame_end)
    if start.shape != end.shape:
        raise ValueError(f"frames must have matching shapes, got {start.shape} vs {end.shape}")
    return end.conj() @ matrix @ start.T


def leakage(u: UnitaryOperator | np.ndarray, dark_start, p_dark_end: HermitianOperator) -> float:
    """Worst-case population lost from the dark subspace.

    max over input dark basis states d of 1 - <Ud| P_dark_end |Ud>.
    """
    matrix = u.matrix if isinstance(u, UnitaryOperator) else np.asarray(u, dtype=complex)
    start = as_frame(dark_start)
    proj = p_dark_end.matrix
    worst = 0.0
    for d in start:
        image = matrix @ d
        retained = float((image.conj() @ proj @ image).real)
        worst = max(worst, 1.0 - retained)
    return worst


def reparametrize(
    hamiltonian: Callable[[float], HermitianOperator],
    f: Callable[[float], float],
    t0: float,
    t1: float,
    fprime: Callable[[float], float] | None = None,
    check_points: int = 65,
) -> Callable[[float], HermitianOperator]:
    """Rewrite a geometric generator under the time substitution tau = f(t).

    The returned schedule t -> H(f(t)) * f'(t) over [t0, t1] propagates to
    the same unitary as the original (geometric evolution depends on the
    path, not on its parametrization).  ``f`` must be strictly increasing.
    """
    grid = np.linspace(t0, t1, check_points)
    values = np.array([f(float(t)) for t in grid])
    if np.any(np.diff(values) <= 0):
        raise NonMonotoneMap("f must be strictly increasing on the new domain")

    def rate(t: float) -> float:
        if fprime is not None:
            return fprime(t)
        h = 1e-6 * max(1.0, abs(t))
        lo, hi = max(t - h, t0), min(t + h, t1)
        return (f(hi) - f(lo)) / (hi - lo)

    def remapped(t: float) -> HermitianOperator:
        base = hamiltonian(f(t))
        if not isinstance(base, HermitianOperator):
            base = HermitianOperator(base)
        return HermitianOperator(base.matrix * rate(t))

    return remapped
