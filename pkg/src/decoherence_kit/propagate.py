"""Time evolution of density matrices under a superoperator.

The reference integrator is the exact exponential of the generator: for
elementwise (kernel-only) superoperators the exponential is itself
elementwise and cheap at any lattice size; otherwise the dense N^2 x N^2
exponential is computed once per (generator, dt) by scipy's Pade
scaling-and-squaring and cached for repeated stepping.  Classical RK4 exists
to reach lattices too large for the dense exponential.  RK4 snapshots are
re-Hermitized each step but never re-normalized or positivity-projected:
trace drift and transient negativity are diagnostics the verification layer
is supposed to see.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm

from .lattice import DensityMatrix, GuardError, Superoperator, unvec, vec

__all__ = ["Trajectory", "exp_step", "rk4_step", "evolve", "EXP_DENSE_LIMIT"]

EXP_DENSE_LIMIT = 32


@dataclass
class Trajectory:
    times: np.ndarray
    states: list
    observables: dict

    def series(self, name: str) -> np.ndarray:
        return np.asarray(self.observables[name])


def _state_data(sup: Superoperator, rho: DensityMatrix) -> np.ndarray:
    if rho.lattice != sup.lattice:
        raise ValueError("lattice mismatch between state and generator")
    return rho.to_basis(sup.basis).data


def _exp_entry(sup: Superoperator, dt: float, dense_limit: int):
    entry = sup._exp_cache.get(dt)
    if entry is None:
        kernel = sup.hadamard_kernel()
        if kernel is not None:
            entry = ("kernel", np.exp(dt * kernel))
        elif sup.lattice.n_points <= dense_limit:
            entry = ("dense", expm(dt * sup.matrix))
        else:
            raise GuardError(
                f"exp_step guard: N={sup.lattice.n_points} > {dense_limit} for a "
                "non-elementwise generator; use rk4_step"
            )
        sup._exp_cache[dt] = entry
    return entry


def exp_step(sup: Superoperator, rho: DensityMatrix, dt: float,
             dense_limit: int = EXP_DENSE_LIMIT) -> DensityMatrix:
    """vec(rho') = exp(dt L) vec(rho); the exponential is cached per (L, dt)."""
    if dt < 0:
        raise ValueError("dt must be nonnegative")
    data = _state_data(sup, rho)
    if dt == 0.0:
        return DensityMatrix(data.copy(), sup.basis, sup.lattice)
    kind, op = _exp_entry(sup, dt, dense_limit)
    if kind == "kernel":
        out = op * data
    else:
        out = unvec(op @ vec(data))
    return DensityMatrix(out, sup.basis, sup.lattice)


def rk4_step(sup: Superoperator, rho: DensityMatrix, dt: float) -> DensityMatrix:
    """Classical 4th-order Runge-Kutta step with Hermitian re-symmetrization."""
    data = _state_data(sup, rho)
    if dt * sup.norm_estimate() > 1.0:
        warnings.warn(
            f"rk4 step size dt={dt} times generator scale {sup.norm_estimate():.2e} "
            "exceeds 1; expect inaccuracy",
            stacklevel=2,
        )
    k1 = sup.apply_data(data)
    k2 = sup.apply_data(data + 0.5 * dt * k1)
    k3 = sup.apply_data(data + 0.5 * dt * k2)
    k4 = sup.apply_data(data + dt * k3)
    out = data + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    out = 0.5 * (out + out.conj().T)
    return DensityMatrix(out, sup.basis, sup.lattice)


def single_step(sup: Superoperator, rho: DensityMatrix, dt: float,
                dense_limit: int = EXP_DENSE_LIMIT) -> DensityMatrix:
    """Exact step when affordable, RK4 otherwise."""
    try:
        return exp_step(sup, rho, dt, dense_limit)
    except GuardError:
        return rk4_step(sup, rho, dt)


def evolve(sup: Superoperator, rho0: DensityMatrix, t_final: float, dt: float,
           record_every: int = 1, observables=None, store_states: bool = True,
           dense_limit: int = EXP_DENSE_LIMIT) -> Trajectory:
    """Propagate rho0 to t_final, recording named observables along the way.

    observables is a list of (name, function) pairs evaluated on each recorded
    snapshot.  Snapshots are recorded at step 0, every record_every steps,
    and at the final step.
    """
    if t_final < 0:
        raise ValueError("t_final must be nonnegative")
    if t_final > 0 and not dt > 0:
        raise ValueError("dt must be positive")
    observables = list(observables or [])
    n_steps = int(round(t_final / dt)) if t_final > 0 else 0
    if n_steps and abs(n_steps * dt - t_final) > 1e-9 * max(t_final, 1.0):
        warnings.warn(f"t_final={t_final} is not an integer number of dt={dt} steps",
                      stacklevel=2)
    use_exp = sup.hadamard_kernel() is not None or sup.lattice.n_points <= dense_limit
    stepper = exp_step if use_exp else rk4_step

    times, states = [], []
    series = {name: [] for name, _ in observables}

    def record(step, state):
        times.append(step * dt)
        if store_states:
            states.append(state)
        for name, fn in observables:
            series[name].append(fn(state))

    state = rho0.to_basis(sup.basis)
    record(0, state)
    for step in range(1, n_steps + 1):
        state = stepper(sup, state, dt)
        if step % record_every == 0 or step == n_steps:
            record(step, state)
    return Trajectory(np.asarray(times), states, {k: np.asarray(v) for k, v in series.items()})
