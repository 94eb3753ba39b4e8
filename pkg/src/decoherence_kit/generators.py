"""Constructors for the collisional-decoherence master-equation generators.

Each builder returns a :class:`~decoherence_kit.lattice.Superoperator` acting
on density matrices of the given lattice.  Momentum-kick models (Alicki,
Gallis, Diosi, Vacchini) use kicks that are exact multiples of the lattice
momentum spacing, so the kick unitaries e^{i q x / hbar} are circulant phase
factors and every generator built from them commutes exactly with cyclic
position shifts.

Position-difference structures are discretized with the minimal-image
convention of the periodic lattice.  Double position commutators become
elementwise multiplication by -d(x, y)^2 with d the minimal-image distance,
and single commutators [x, .] become elementwise multiplication by the signed
minimal-image displacement.  On the ring this is the unique choice compatible
with cyclic covariance; the price is that the quadratic localization kernels
are not completely positive near the antipodal seam (see README).  The
Caldeira-Leggett builder also offers the plain open-line operator algebra
(minimal_image=False), which is exactly of Lindblad form for chi >= 1/8 but
is neither cyclically covariant nor thermalizing on the ring.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Callable, Sequence, Union

import numpy as np
from scipy import integrate

from .lattice import (
    MOMENTUM,
    POSITION,
    DensityMatrix,
    Lattice,
    Superoperator,
    Term,
    circulant_from_offsets,
    fourier_matrix,
    min_image_distances,
    momentum_operator,
    position_operator,
    signed_min_image,
)

__all__ = [
    "KickTable",
    "SqTable",
    "JoosZeh",
    "CaldeiraLeggett",
    "GRW",
    "Alicki",
    "Gallis93",
    "Diosi",
    "Vacchini",
    "Hamiltonian",
    "LindbladOps",
    "GeneratorSpec",
    "free_hamiltonian",
    "joos_zeh",
    "caldeira_leggett",
    "grw",
    "alicki",
    "tau_from_scattering",
    "gallis93",
    "diosi",
    "vacchini",
    "lindblad_from_ops",
    "linear_ansatz_ops",
    "maxwell_sq_preset",
    "maxwell_sigma",
    "transfer_energy",
    "build_generator",
]


# ---------------------------------------------------------------------------
# tables
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class KickTable:
    """Finite set of momentum kicks q with nonnegative rates w."""

    qs: tuple
    weights: tuple

    def __post_init__(self):
        if len(self.qs) != len(self.weights):
            raise ValueError("qs and weights must have equal length")
        if any(w < 0 for w in self.weights):
            raise ValueError("kick weights must be nonnegative")
        object.__setattr__(self, "qs", tuple(float(q) for q in self.qs))
        object.__setattr__(self, "weights", tuple(float(w) for w in self.weights))

    @staticmethod
    def from_pairs(pairs) -> "KickTable":
        qs, ws = zip(*pairs) if pairs else ((), ())
        return KickTable(tuple(qs), tuple(ws))

    def validate_on_lattice(self, lat: Lattice, tol: float = 1e-9):
        for q in self.qs:
            m = q / lat.dp
            if abs(m - round(m)) > tol:
                raise ValueError(
                    f"kick q={q} is not a multiple of the momentum spacing {lat.dp}"
                )

    def cells(self, lat: Lattice) -> list:
        self.validate_on_lattice(lat)
        return [int(round(q / lat.dp)) for q in self.qs]


def transfer_energy(q, p, mass: float):
    """Energy gained by the test particle in a kick p -> p + q."""
    return ((p + q) ** 2 - p**2) / (2.0 * mass)


@dataclass(frozen=True)
class SqTable:
    """Dynamic structure factor sampled on (kick q, lattice momentum p).

    values[iq, k] = S(qs[iq], p_k) >= 0 with the energy-transfer convention
    E(q, p) = ((p+q)^2 - p^2)/2M.
    """

    qs: tuple
    values: np.ndarray
    beta: float
    mass: float

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.ndim != 2 or vals.shape[0] != len(self.qs):
            raise ValueError("values must have shape (n_kicks, n_points)")
        if np.any(vals < 0):
            raise ValueError("structure factor must be nonnegative")
        object.__setattr__(self, "qs", tuple(float(q) for q in self.qs))
        object.__setattr__(self, "values", vals)


def maxwell_sq_preset(lat: Lattice, kicks: KickTable, beta: float, m_gas: float,
                      mass: float) -> SqTable:
    """Free Maxwell-Boltzmann gas structure factor on the lattice sampling.

    S(q, p) = sqrt(beta m / (2 pi q^2)) * exp(-beta m (E(q,p) + q^2/2m)^2 / (2 q^2)),
    which satisfies S(q, E) = e^{-beta E} S(-q, -E) identically.
    """
    if not (beta > 0 and m_gas > 0 and mass > 0):
        raise ValueError("beta, m_gas and mass must be positive")
    kicks.validate_on_lattice(lat)
    qs = np.asarray(kicks.qs)
    if np.any(qs == 0):
        raise ValueError("q = 0 entry is singular in the free-gas structure factor")
    p = lat.momenta
    vals = np.empty((len(qs), lat.n_points))
    for i, q in enumerate(qs):
        e = transfer_energy(q, p, mass)
        vals[i] = np.sqrt(beta * m_gas / (2.0 * np.pi * q**2)) * np.exp(
            -beta * m_gas * (e + q**2 / (2.0 * m_gas)) ** 2 / (2.0 * q**2)
        )
    return SqTable(tuple(qs), vals, beta, mass)


def maxwell_sigma(beta: float, m_gas: float) -> Callable[[np.ndarray], np.ndarray]:
    """1-D Maxwell-Boltzmann momentum distribution of the gas."""
    def sigma(p):
        return np.sqrt(beta / (2.0 * np.pi * m_gas)) * np.exp(-beta * np.asarray(p) ** 2 / (2.0 * m_gas))
    return sigma


# ---------------------------------------------------------------------------
# generator specs (tagged variants, used by the CLI and decompose_known)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class JoosZeh:
    lam: float


@dataclass(frozen=True)
class CaldeiraLeggett:
    gamma: float
    beta: float
    mass: float
    chi: float = 0.125
    minimal_image: bool = True


@dataclass(frozen=True)
class GRW:
    rate: float
    alpha: float


@dataclass(frozen=True)
class Alicki:
    kicks: KickTable


@dataclass(frozen=True)
class Gallis93:
    qs: tuple
    alpha_vals: tuple
    beta_vals: tuple


@dataclass(frozen=True)
class Diosi:
    sigma: object               # callable p -> density, or array on the momentum grid
    m_gas: float
    mass: float
    density: float
    f: object = None            # callable (q, q') -> amplitude; None means 1
    eps_shell: float | None = None


@dataclass(frozen=True)
class Vacchini:
    sq: SqTable
    t_matrix: object            # callable q -> t~(q), dict, array over kicks, or scalar
    density: float


@dataclass(frozen=True)
class Hamiltonian:
    mass: float


@dataclass(frozen=True)
class LindbladOps:
    ops: tuple


GeneratorSpec = Union[
    JoosZeh, CaldeiraLeggett, GRW, Alicki, Gallis93, Diosi, Vacchini, Hamiltonian, LindbladOps
]


# ---------------------------------------------------------------------------
# builders
# ---------------------------------------------------------------------------

def free_hamiltonian(lat: Lattice, mass: float) -> Superoperator:
    """-(i/hbar)[p^2/2M, rho], assembled in the momentum basis where it is diagonal."""
    if not mass > 0:
        raise ValueError("mass must be positive")
    h = np.diag((lat.momenta**2 / (2.0 * mass)).astype(complex))
    return Superoperator.from_hamiltonian(lat, MOMENTUM, h)


def joos_zeh(lat: Lattice, lam: float) -> Superoperator:
    """Position-localization generator: (L rho)(x, y) = -Lambda d(x,y)^2 rho(x,y).

    d is the minimal-image distance, i.e. -Lambda [x, [x, rho]] with the
    position commutator discretized covariantly on the ring.
    """
    if not lam > 0:
        raise ValueError("localization rate must be positive")
    d = min_image_distances(lat)
    kernel = circulant_from_offsets(lat, -lam * d**2).astype(complex)
    return Superoperator.from_hadamard(lat, POSITION, kernel)


def _double_commutator_terms(a: np.ndarray, coeff: float) -> list:
    """coeff * [A, [A, rho]] = coeff*(A^2 rho - 2 A rho A + rho A^2)."""
    a2 = a @ a
    return [
        Term(None, coeff * a2, None),
        Term(None, -2.0 * coeff * a, a),
        Term(None, None, coeff * a2),
    ]


def caldeira_leggett(lat: Lattice, gamma: float, beta: float, mass: float,
                     chi: float = 0.125, minimal_image: bool = True) -> Superoperator:
    """Quantum-Brownian-motion generator with the chi positivity correction.

    L[rho] = -gamma (2M/beta hbar^2) [x,[x,rho]] - (i gamma/hbar) [x,{p,rho}]
             - chi gamma (beta/M) [p,[p,rho]]

    chi = 0 is the bare high-temperature equation, which is not completely
    positive; chi = 1/8 is the minimal correction that restores a Lindblad
    form.  With minimal_image=True (default) the position commutators use the
    ring's signed minimal-image displacement: the generator then commutes
    exactly with cyclic shifts and drives <p^2> to M/beta on the lattice.
    With minimal_image=False the plain grid operator x is used: the chi >= 1/8
    Lindblad structure is then exact (Choi-positive to machine precision), but
    covariance and thermalization acquire O(1) seam errors.  No single
    discretization has both properties on a compact ring.
    """
    if not (gamma > 0 and beta > 0 and mass > 0):
        raise ValueError("gamma, beta and mass must be positive")
    if chi < 0:
        raise ValueError("chi must be nonnegative")
    hbar = lat.hbar
    c_diff = gamma * 2.0 * mass / (beta * hbar**2)
    c_fric = gamma / hbar
    c_mom = chi * gamma * beta / mass
    p_pos = momentum_operator(lat, POSITION)
    terms = []
    if minimal_image:
        d = min_image_distances(lat)
        s = signed_min_image(lat)
        kernel = circulant_from_offsets(lat, (-c_diff * d**2).astype(complex))
        terms.append(Term(kernel=kernel))
        # -(i gamma/hbar) [x, {p, rho}] with [x, .] as the signed elementwise factor
        s_kernel = circulant_from_offsets(lat, s.astype(complex))
        terms.append(Term(-1j * c_fric * s_kernel, p_pos, None))
        terms.append(Term(-1j * c_fric * s_kernel, None, p_pos))
    else:
        x = position_operator(lat)
        terms += _double_commutator_terms(x, -c_diff)
        xp = x @ p_pos
        terms += [
            Term(None, -1j * c_fric * xp, None),
            Term(None, -1j * c_fric * x, p_pos),
            Term(None, 1j * c_fric * p_pos, x),
            Term(None, None, 1j * c_fric * (p_pos @ x)),
        ]
    if chi > 0:
        terms += _double_commutator_terms(p_pos, -c_mom)
    return Superoperator(lat, POSITION, terms)


def grw(lat: Lattice, rate: float, alpha: float) -> Superoperator:
    """Spontaneous-localization generator with saturating rate profile.

    Elementwise (L rho)(x, y) = -rate * (1 - g(d(x,y))) rho(x, y), where g is
    the Gaussian-overlap sum of the localization integral carried out over the
    periodic grid and normalized so g(0) = 1.  g is a Gram kernel of positive
    operators, so the generator is exactly completely positive, and it matches
    exp(-alpha d^2 / 4) up to aliasing/image corrections that the resolvability
    precondition keeps negligible.
    """
    if not rate > 0:
        raise ValueError("rate must be positive")
    width = 1.0 / np.sqrt(alpha)
    if not (2.0 * lat.dx < width < lat.extent / 4.0):
        raise ValueError(
            f"localization width 1/sqrt(alpha) = {width} outside resolvable band "
            f"({2 * lat.dx}, {lat.extent / 4})"
        )
    n = lat.n_points
    d = min_image_distances(lat)
    gauss = np.exp(-0.5 * alpha * d**2)
    overlap = np.empty(n)
    idx = np.arange(n)
    for r in range(n):
        overlap[r] = np.sum(gauss * gauss[(idx - r) % n])
    g = overlap / overlap[0]
    kernel = circulant_from_offsets(lat, (-rate * (1.0 - g)).astype(complex))
    return Superoperator.from_hadamard(lat, POSITION, kernel)


def alicki(lat: Lattice, kicks: KickTable) -> Superoperator:
    """Pure momentum-kick generator sum_q w(q) (e^{iqx/h} rho e^{-iqx/h} - rho)."""
    kicks.validate_on_lattice(lat)
    n = lat.n_points
    offsets = lat.dx * np.arange(n)
    kernel_vals = np.zeros(n, dtype=complex)
    for q, w in zip(kicks.qs, kicks.weights):
        kernel_vals += w * (np.exp(1j * q * offsets / lat.hbar) - 1.0)
    if not kicks.qs:
        return Superoperator.zero(lat, POSITION)
    kernel = circulant_from_offsets(lat, kernel_vals)
    return Superoperator.from_hadamard(lat, POSITION, kernel)


def tau_from_scattering(g, f, ks: Sequence[float], lat: Lattice) -> KickTable:
    """Reduce an isotropic 3-D scattering kernel to a 1-D kick table.

    tau(k) = |f(k)|^2 (pi/k) * integral_{k/2}^inf g(q)/q^2 dq, from the
    momentum-shell delta of the Gallis-Fleming generator; the weight is split
    evenly between +k and -k with one momentum cell dp of measure each.
    """
    gfun = _as_callable_1d(g)
    ffun = _as_callable_1d(f)
    entries = []
    for k in ks:
        if not k > 0:
            raise ValueError("k values must be positive")
        integrand = lambda q: gfun(q) / q**2  # noqa: E731
        val, err = integrate.quad(integrand, k / 2.0, np.inf, limit=200)
        if not np.isfinite(val) or (abs(val) > 0 and err > 1e-6 * abs(val) + 1e-12):
            raise ValueError(
                f"radial quadrature failed for k={k}: value {val}, error estimate {err} "
                "(is g(q)/q^2 integrable on the shell?)"
            )
        tau = abs(ffun(k)) ** 2 * (np.pi / k) * val
        entries.append((k, tau / 2.0 * lat.dp))
        entries.append((-k, tau / 2.0 * lat.dp))
    table = KickTable.from_pairs(entries)
    table.validate_on_lattice(lat)
    return table


def _as_callable_1d(obj):
    if obj is None:
        return lambda x: 1.0
    if callable(obj):
        return obj
    pts = np.asarray(obj, dtype=float)
    if pts.ndim == 2 and pts.shape[1] == 2:
        xs, ys = pts[:, 0], pts[:, 1]
        return lambda x: np.interp(x, xs, ys, left=0.0, right=0.0)
    raise TypeError("expected a callable or an (n, 2) table of sample points")


def _kick_phase(lat: Lattice, q: float) -> np.ndarray:
    return np.diag(np.exp(1j * q * lat.positions / lat.hbar))


def gallis93(lat: Lattice, qs: Sequence[float], alpha_vals: Sequence[complex],
             beta_vals: Sequence[complex]) -> Superoperator:
    """Lindblad assembly of the kick-plus-friction jump operators.

    Jump operator per lattice kick q (cell weight dp):
        V(q) = alpha(q) e^{iqx/hbar} + beta(q) e^{iqx/hbar} (q p)
    """
    qs = [float(q) for q in qs]
    KickTable(tuple(qs), tuple(0.0 for _ in qs)).validate_on_lattice(lat)
    if not (len(qs) == len(alpha_vals) == len(beta_vals)):
        raise ValueError("qs, alpha_vals and beta_vals must have equal length")
    p_pos = momentum_operator(lat, POSITION)
    eye = np.eye(lat.n_points, dtype=complex)
    terms = []
    for q, a, b in zip(qs, alpha_vals, beta_vals):
        u = _kick_phase(lat, q)
        v = u @ (complex(a) * eye + complex(b) * q * p_pos)
        terms += Superoperator.lindblad_terms(v, weight=lat.dp)
    return Superoperator(lat, POSITION, terms)


def _sigma_values(sigma, args: np.ndarray, lat: Lattice) -> np.ndarray:
    if callable(sigma):
        vals = np.asarray(sigma(args), dtype=float)
    else:
        table = np.asarray(sigma, dtype=float)
        if table.shape != (lat.n_points,):
            raise ValueError("sigma table must be sampled on the momentum lattice")
        vals = np.interp(args, lat.momenta, table, left=0.0, right=0.0)
    if np.any(vals < -1e-15):
        raise ValueError("gas momentum distribution must be nonnegative")
    return np.clip(vals, 0.0, None)


def diosi(lat: Lattice, sigma, m_gas: float, mass: float, density: float,
          f=None, eps_shell: float | None = None) -> Superoperator:
    """Collisional generator with gas-distribution jump operators.

    Double lattice sum over incoming/outgoing momenta (q, q') of Lindblad
    sandwiches with V = sqrt(sigma(q + (m/M)(p + q))) e^{i(q - q')x/hbar},
    weighted by the shell factor G_eps(E(q) - E(q')), E(q) = q^2/2M, and the
    prefactor n m^3 / mu^5.  The energy delta is a normalized Gaussian of
    width eps_shell (default: 3x the median lattice energy-level spacing).
    """
    if not (m_gas > 0 and mass > 0 and density > 0):
        raise ValueError("masses and density must be positive")
    ffun = f if callable(f) else (lambda q, qp: 1.0 if f is None else float(f))
    mu = m_gas * mass / (m_gas + mass)
    pref = density * m_gas**3 / mu**5
    p = lat.momenta
    energies = p**2 / (2.0 * mass)
    spacings = np.diff(np.unique(np.round(energies, 12)))
    median_gap = float(np.median(spacings)) if spacings.size else 1.0
    if eps_shell is None:
        eps_shell = 3.0 * median_gap
    if not eps_shell > 0:
        raise ValueError("eps_shell must be positive")
    if eps_shell < median_gap:
        warnings.warn(
            f"eps_shell {eps_shell:.3e} below the lattice energy spacing "
            f"{median_gap:.3e}: most shells will be empty",
            stacklevel=2,
        )
    F = fourier_matrix(lat)
    n = lat.n_points
    terms = []
    for iq, q in enumerate(p):
        sig = _sigma_values(sigma, q + (m_gas / mass) * (p + q), lat)
        root = np.sqrt(sig)
        for iqp, qp in enumerate(p):
            gauss = np.exp(-0.5 * ((energies[iq] - energies[iqp]) / eps_shell) ** 2)
            shell = gauss / (np.sqrt(2.0 * np.pi) * eps_shell)
            w = pref * shell * abs(ffun(q, qp)) ** 2 * lat.dp**2
            if w < 1e-300:
                continue
            mcell = iq - iqp  # kick (q - q') in units of dp
            shift = np.zeros((n, n))
            ks = np.arange(n)
            keep = (ks + mcell >= 0) & (ks + mcell < n)
            shift[ks[keep] + mcell, ks[keep]] = 1.0
            v = shift @ np.diag(root.astype(complex))
            terms += Superoperator.lindblad_terms(v, weight=w)
    return Superoperator(lat, MOMENTUM, terms)


def _tmatrix_values(t_matrix, qs: tuple) -> np.ndarray:
    if callable(t_matrix):
        return np.asarray([t_matrix(q) for q in qs], dtype=complex)
    if isinstance(t_matrix, dict):
        return np.asarray([t_matrix[q] for q in qs], dtype=complex)
    if np.isscalar(t_matrix):
        return np.full(len(qs), complex(t_matrix))
    arr = np.asarray(t_matrix, dtype=complex)
    if arr.shape != (len(qs),):
        raise ValueError("t-matrix table must align with the kick table")
    return arr


def vacchini(lat: Lattice, sq: SqTable, t_matrix, density: float) -> Superoperator:
    """Dynamic-structure-factor generator in Lindblad form.

    Jump operator per kick q: V_q = T_q sqrt(w_q S(q, p)), with sqrt(S)
    diagonal in the momentum basis, T_q the momentum shift by q hard-truncated
    at the window boundary (amplitudes that would leave the window are
    dropped), and w_q = (2 pi)^4 hbar^2 n |t~(q)|^2 dp.  Truncating inside the
    jump operator keeps the assembly exactly trace-preserving and completely
    positive; with the detailed-balance structure factor the thermal state is
    stationary in the bulk.
    """
    if not density > 0:
        raise ValueError("density must be positive")
    kicks = KickTable(sq.qs, tuple(0.0 for _ in sq.qs))
    cells = kicks.cells(lat)
    tvals = _tmatrix_values(t_matrix, sq.qs)
    n = lat.n_points
    terms = []
    for iq, (q, mcell) in enumerate(zip(sq.qs, cells)):
        w_q = (2.0 * np.pi) ** 4 * lat.hbar**2 * density * abs(tvals[iq]) ** 2 * lat.dp
        root = np.sqrt(w_q * sq.values[iq]).astype(complex)
        shift = np.zeros((n, n))
        ks = np.arange(n)
        keep = (ks + mcell >= 0) & (ks + mcell < n)
        shift[ks[keep] + mcell, ks[keep]] = 1.0
        v = shift @ np.diag(root)
        terms += Superoperator.lindblad_terms(v)
    return Superoperator(lat, MOMENTUM, terms)


def lindblad_from_ops(lat: Lattice, ops: Sequence[np.ndarray],
                      basis: str = POSITION) -> Superoperator:
    """Generic Lindblad dissipator sum_i (V_i rho V_i^dag - (1/2){V_i^dag V_i, rho})."""
    n = lat.n_points
    terms = []
    for v in ops:
        v = np.asarray(v, dtype=complex)
        if v.shape != (n, n):
            raise ValueError(f"operator shape {v.shape} does not match lattice size {n}")
        terms += Superoperator.lindblad_terms(v)
    return Superoperator(lat, basis, terms)


def linear_ansatz_ops(lat: Lattice, coeffs: Sequence[tuple]) -> list:
    """Jump operators V_i = alpha_i p + beta_i x (plain grid operators).

    Feeding these to lindblad_from_ops reproduces the double-commutator
    generators: beta = sqrt(2 Lambda) gives the position-localization model
    (away from the periodic seam) and alpha = sqrt(2 D_p) gives momentum
    localization -D_p [p, [p, rho]] exactly.
    """
    x = position_operator(lat)
    p = momentum_operator(lat, POSITION)
    return [complex(a) * p + complex(b) * x for a, b in coeffs]


def build_generator(lat: Lattice, spec: GeneratorSpec) -> Superoperator:
    """Dispatch a tagged generator spec to its builder."""
    if isinstance(spec, JoosZeh):
        return joos_zeh(lat, spec.lam)
    if isinstance(spec, CaldeiraLeggett):
        return caldeira_leggett(lat, spec.gamma, spec.beta, spec.mass, spec.chi,
                                minimal_image=spec.minimal_image)
    if isinstance(spec, GRW):
        return grw(lat, spec.rate, spec.alpha)
    if isinstance(spec, Alicki):
        return alicki(lat, spec.kicks)
    if isinstance(spec, Gallis93):
        return gallis93(lat, spec.qs, spec.alpha_vals, spec.beta_vals)
    if isinstance(spec, Diosi):
        return diosi(lat, spec.sigma, spec.m_gas, spec.mass, spec.density,
                     f=spec.f, eps_shell=spec.eps_shell)
    if isinstance(spec, Vacchini):
        return vacchini(lat, spec.sq, spec.t_matrix, spec.density)
    if isinstance(spec, Hamiltonian):
        return free_hamiltonian(lat, spec.mass)
    if isinstance(spec, LindbladOps):
        return lindblad_from_ops(lat, spec.ops)
    raise TypeError(f"unknown generator spec {spec!r}")
