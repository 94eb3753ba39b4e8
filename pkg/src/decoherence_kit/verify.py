"""Numerical property checkers: complete positivity, rate profiles, energy
flow, stationarity, detailed balance.

These turn the qualitative claims about the generators into numbers at fixed
lattice sizes.  Everything here is evidence, not proof.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .generators import SqTable, transfer_energy
from .lattice import (
    MOMENTUM,
    POSITION,
    DensityMatrix,
    GuardError,
    Lattice,
    Superoperator,
    min_image_distances,
    vec,
)
from .propagate import Trajectory, single_step

__all__ = [
    "CpReport",
    "RateProfile",
    "CHOI_THRESHOLD",
    "choi_min_eig",
    "state_min_eig",
    "rate_profile",
    "energy_series",
    "stationarity_residual",
    "detailed_balance_defect",
]

CHOI_THRESHOLD = 1e-8
CHOI_SIZE_GUARD = 16


@dataclass(frozen=True)
class CpReport:
    t_probe: float
    min_choi_eig: float
    verdict: str
    threshold: float


@dataclass(frozen=True)
class RateProfile:
    separations: np.ndarray
    rates: np.ndarray


def choi_min_eig(sup: Superoperator, t: float = 0.01,
                 threshold: float = CHOI_THRESHOLD) -> CpReport:
    """Minimum eigenvalue of the Choi matrix of exp(t L).

    The map is applied to every matrix unit E_ij; the Choi matrix is
    C = sum_ij E_ij (x) Phi(E_ij), symmetrized before diagonalization.  The
    map is completely positive iff C is positive semidefinite.
    """
    n = sup.lattice.n_points
    if n > CHOI_SIZE_GUARD:
        raise GuardError(f"Choi test guard: N={n} > {CHOI_SIZE_GUARD}")
    if not t > 0:
        raise ValueError("probe time must be positive")
    phi = expm(t * sup.matrix)
    choi = np.zeros((n * n, n * n), dtype=complex)
    for i in range(n):
        for j in range(n):
            # vec(E_ij) is the (j*n + i)-th unit vector in column stacking
            block = phi[:, j * n + i].reshape((n, n), order="F")
            choi[i * n:(i + 1) * n, j * n:(j + 1) * n] = block
    choi = 0.5 * (choi + choi.conj().T)
    min_eig = float(np.linalg.eigvalsh(choi).min())
    verdict = "cp" if min_eig >= -threshold else "violated"
    return CpReport(t_probe=t, min_choi_eig=min_eig, verdict=verdict, threshold=threshold)


def state_min_eig(rho: DensityMatrix) -> float:
    herm = 0.5 * (rho.data + rho.data.conj().T)
    return float(np.linalg.eigvalsh(herm).min())


def rate_profile(sup: Superoperator, probe: DensityMatrix, seps, dt: float,
                 floor: float = 1e-8) -> RateProfile:
    """Instantaneous decay rate of |rho(x, y)| versus separation.

    rate(s) = -(1/dt) ln(|rho_dt(x,y)| / |rho_0(x,y)|), averaged over pairs at
    minimal-image distance within half a cell of s.  The generator passed in
    must not contain the free-Hamiltonian part (its phase rotation would
    contaminate the modulus decay).  One short step is taken: exact when the
    generator is elementwise or small enough for the dense exponential, a
    single RK4 step otherwise (error O((rate dt)^4) relative).
    """
    lat = sup.lattice
    rho0 = probe.to_basis(POSITION)
    stepped = single_step(sup, rho0, dt)
    rho1 = stepped.to_basis(POSITION)
    d = min_image_distances(lat)
    n = lat.n_points
    offsets_of = lambda s: np.nonzero(np.abs(d - s) <= lat.dx / 2.0 + 1e-12 * lat.dx)[0]  # noqa: E731
    rates = []
    kept = []
    for s in seps:
        num, cnt = 0.0, 0
        for r_off in offsets_of(s):
            if r_off == 0:
                continue
            before = np.abs(np.diag(np.roll(rho0.data, -int(r_off), axis=1)))
            after = np.abs(np.diag(np.roll(rho1.data, -int(r_off), axis=1)))
            ok = before >= floor
            if not np.any(ok):
                continue
            num += float(np.sum(-np.log(after[ok] / before[ok]) / dt))
            cnt += int(np.sum(ok))
        if cnt:
            rates.append(num / cnt)
            kept.append(s)
    if not kept:
        raise ValueError("no pairs with usable off-diagonal weight at the requested separations")
    return RateProfile(np.asarray(kept), np.asarray(rates))


def energy_series(traj: Trajectory, mass: float):
    """Kinetic-energy series <p^2/2M>(t) and its least-squares slope."""
    if not traj.states:
        raise ValueError("trajectory carries no state snapshots")
    energies = []
    for state in traj.states:
        rho_m = state.to_basis(MOMENTUM)
        p = rho_m.lattice.momenta
        energies.append(float(np.real(np.sum(p**2 * np.diag(rho_m.data).real))) / (2.0 * mass))
    energies = np.asarray(energies)
    slope = float(np.polyfit(traj.times, energies, 1)[0]) if len(energies) > 1 else 0.0
    return energies, slope


def stationarity_residual(sup: Superoperator, rho: DensityMatrix,
                          boundary_mask: int) -> float:
    """Bulk-masked ||L[rho]||_F normalized by ||L||_F ||rho||_F.

    The mask removes boundary_mask momentum cells at each window edge (rows
    and columns, applied in the momentum basis) before taking the norm, so
    boundary-truncation artifacts of hard-truncated momentum shifts do not
    dominate the verdict.
    """
    lat = sup.lattice
    n = lat.n_points
    if boundary_mask < 0 or 2 * boundary_mask >= n:
        raise ValueError(f"boundary mask {boundary_mask} swallows the whole grid")
    residual = sup.apply(rho)
    if sup.basis != MOMENTUM:
        residual_dm = DensityMatrix(residual, sup.basis, lat)
        from .lattice import fourier_matrix

        F = fourier_matrix(lat)
        residual = F @ residual_dm.data @ F.conj().T
    if boundary_mask:
        residual = residual.copy()
        residual[:boundary_mask, :] = 0.0
        residual[-boundary_mask:, :] = 0.0
        residual[:, :boundary_mask] = 0.0
        residual[:, -boundary_mask:] = 0.0
    denom = sup.frobenius_norm() * float(np.linalg.norm(rho.data))
    if denom == 0.0:
        return 0.0
    return float(np.linalg.norm(residual)) / denom


def detailed_balance_defect(sq: SqTable, lat: Lattice) -> float:
    """max over sampled (q, p) of |S(q,E) - e^{-beta E} S(-q,-E)| / max(S).

    E = E(q, p) is the energy gained by the test particle; the partner point
    realizing (-q, -E) is (q' , p') = (-q, p + q), since
    E(-q, p+q) = -E(q, p).  Pairs whose partner momentum leaves the lattice
    window, or whose reversed kick is absent from the table, are skipped with
    a warning.  This is the convention under which exp(-beta p^2/2M) is
    stationary for the truncated-shift assembly.
    """
    qs = np.asarray(sq.qs)
    smax = float(sq.values.max())
    if smax == 0.0:
        return 0.0
    p = lat.momenta
    defect = 0.0
    skipped = 0
    for iq, q in enumerate(qs):
        partner = np.nonzero(np.isclose(qs, -q, rtol=0, atol=1e-12 * max(lat.dp, 1.0)))[0]
        if partner.size == 0:
            skipped += lat.n_points
            continue
        ip = int(partner[0])
        e = transfer_energy(q, p, sq.mass)
        pprime = p + q
        inside = (pprime >= p[0] - 1e-9 * lat.dp) & (pprime <= p[-1] + 1e-9 * lat.dp)
        idx = np.rint((pprime - p[0]) / lat.dp).astype(int)
        idx_clip = np.clip(idx, 0, lat.n_points - 1)
        s_partner = sq.values[ip][idx_clip]
        vals = np.abs(sq.values[iq] - np.exp(-sq.beta * e) * s_partner) / smax
        vals = np.where(inside, vals, 0.0)
        skipped += int(np.sum(~inside))
        defect = max(defect, float(vals.max()))
    if skipped:
        warnings.warn(f"detailed-balance check skipped {skipped} off-lattice partner points",
                      stacklevel=2)
    return defect
