"""Translation-covariant generators from the Gaussian + Poisson decomposition.

A translation-covariant semigroup generator splits into a Gaussian
(diffusive) component and a Poisson (jump) component.  Both are assembled
here in the Schroedinger picture (acting on density matrices).

Gaussian component, with y_k = a_k * x and jump functions L_k(p):

    L_G[rho] = -(i/hbar)[a_0 x + H(p), rho]
               + sum_k [ -(1/2) a_k^2 [x, [x, rho]]
                         + a_k [x, rho L_k^dag - L_k rho]
                         + L_k rho L_k^dag - (1/2){L_k^dag L_k, rho} ]

which is the commutator-grouped expansion of the standard form
sum_k (y_k + L_k) rho (y_k + L_k)^dag - K rho - rho K^dag with
K = (1/2) sum_k (y_k^2 + 2 y_k L_k + L_k^dag L_k).  Position commutators are
realized as elementwise multiplication by the ring's signed minimal-image
displacement (squared distance for the double commutator), which makes every
component commute exactly with cyclic lattice shifts.

Poisson component, with measure mu over lattice kicks q, jump functions
L_j(q, p) and compensator amplitudes omega_j(q), U(q) = e^{iqx/hbar}:

    L_P[rho] = int dmu sum_j [ U L_j rho L_j^dag U^dag - (1/2){L_j^dag L_j, rho}
               + omega_j (U rho L_j^dag U^dag - rho L_j^dag)
               + conj(omega_j) (U L_j rho U^dag - L_j rho)
               + |omega_j|^2 (U rho U^dag - rho - i q/(1 + q^2) [x, rho]) ]
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

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
    signed_min_image,
    translate,
)
from .generators import (
    Alicki,
    CaldeiraLeggett,
    Gallis93,
    GeneratorSpec,
    GRW,
    JoosZeh,
    KickTable,
    Vacchini,
)

__all__ = [
    "GaussianPart",
    "PoissonPart",
    "gaussian_component",
    "poisson_component",
    "levy_generator",
    "covariance_defect",
    "decompose_known",
]

R_MAX_DEFAULT = 4


@dataclass(frozen=True)
class GaussianPart:
    """Data of the Gaussian (diffusive) component.

    a[k] are the position coefficients of y_k = a_k x (k = 1..r); a0 is the
    Hamiltonian shift y_0; hamiltonian is H(p) sampled on the momentum grid
    (array) or a callable; jumps[k] is L_k(p) likewise (None entries allowed).
    """

    a: tuple = ()
    a0: float = 0.0
    hamiltonian: object = None
    jumps: tuple = ()
    r_max: int = R_MAX_DEFAULT

    def __post_init__(self):
        r = max(len(self.a), len(self.jumps))
        if r > self.r_max:
            raise ValueError(f"number of Gaussian channels {r} exceeds r_max={self.r_max}")


@dataclass(frozen=True)
class PoissonPart:
    """Data of the Poisson (jump) component.

    measure: kicks q with nonnegative weights mu(q).
    jumps[j]: L_j(q, p), a callable of (q, p) or an array (n_kicks, n_points).
    omegas[j]: omega_j(q), a callable of q or an array (n_kicks,).
    """

    measure: KickTable = field(default_factory=lambda: KickTable((), ()))
    jumps: tuple = ()
    omegas: tuple = ()
    r_max: int = R_MAX_DEFAULT
    approximate: bool = False   # set when a continuous kick density was sampled

    def __post_init__(self):
        if max(len(self.jumps), len(self.omegas)) > self.r_max:
            raise ValueError(f"number of Poisson channels exceeds r_max={self.r_max}")


def _p_function_matrix(lat: Lattice, table) -> np.ndarray | None:
    """Position-basis dense matrix of a function of the momentum operator."""
    if table is None:
        return None
    vals = np.asarray(table(lat.momenta) if callable(table) else table, dtype=complex)
    if vals.shape != (lat.n_points,):
        raise ValueError("momentum-function table must be sampled on the momentum grid")
    F = fourier_matrix(lat)
    return F.conj().T @ np.diag(vals) @ F


def gaussian_component(lat: Lattice, part: GaussianPart) -> Superoperator:
    n = lat.n_points
    d2 = min_image_distances(lat) ** 2
    s = signed_min_image(lat)
    kernel_offsets = np.zeros(n, dtype=complex)
    terms = []
    if part.a0:
        kernel_offsets += (-1j / lat.hbar) * part.a0 * s
    if part.hamiltonian is not None:
        vals = np.asarray(
            part.hamiltonian(lat.momenta) if callable(part.hamiltonian) else part.hamiltonian,
            dtype=complex,
        )
        if np.abs(vals.imag).max() > 1e-12 * max(1.0, np.abs(vals.real).max()):
            raise ValueError("H(p) must be real-valued")
        hx = _p_function_matrix(lat, vals.real)
        c = -1j / lat.hbar
        terms += [Term(None, c * hx, None), Term(None, None, -c * hx)]
    channels = max(len(part.a), len(part.jumps))
    for k in range(channels):
        a_k = part.a[k] if k < len(part.a) else 0.0
        lmat = _p_function_matrix(lat, part.jumps[k]) if k < len(part.jumps) else None
        if a_k:
            kernel_offsets += -0.5 * a_k**2 * d2
        if lmat is not None:
            terms += Superoperator.lindblad_terms(lmat)
            if a_k:
                s_kernel = circulant_from_offsets(lat, (a_k * s).astype(complex))
                # a_k [x, rho L^dag - L rho] as elementwise-signed commutator
                terms.append(Term(s_kernel, None, lmat.conj().T))
                terms.append(Term(s_kernel, -lmat, None))
    if np.any(kernel_offsets):
        terms.insert(0, Term(kernel=circulant_from_offsets(lat, kernel_offsets)))
    return Superoperator(lat, POSITION, terms)


def _poisson_channel_tables(part: PoissonPart, lat: Lattice):
    qs = np.asarray(part.measure.qs)
    mus = np.asarray(part.measure.weights)
    jump_tables = []
    for j, lj in enumerate(part.jumps):
        if lj is None:
            jump_tables.append(None)
        elif callable(lj):
            jump_tables.append(
                np.asarray([[lj(q, p) for p in lat.momenta] for q in qs], dtype=complex)
            )
        else:
            arr = np.asarray(lj, dtype=complex)
            if arr.shape != (len(qs), lat.n_points):
                raise ValueError(f"jump table {j} must have shape (n_kicks, n_points)")
            jump_tables.append(arr)
    omega_tables = []
    for j, om in enumerate(part.omegas):
        if om is None:
            omega_tables.append(None)
        elif callable(om):
            omega_tables.append(np.asarray([om(q) for q in qs], dtype=complex))
        else:
            arr = np.asarray(om, dtype=complex)
            if arr.shape != (len(qs),):
                raise ValueError(f"omega table {j} must have shape (n_kicks,)")
            omega_tables.append(arr)
    return qs, mus, jump_tables, omega_tables


def poisson_component(lat: Lattice, part: PoissonPart) -> Superoperator:
    part.measure.validate_on_lattice(lat)
    qs, mus, jump_tables, omega_tables = _poisson_channel_tables(part, lat)
    # the two Levy integrability conditions (trivially finite on a lattice,
    # validated to mirror the hypotheses of the continuum theorem)
    total_l2 = sum(
        float(np.sum(np.abs(tab) ** 2 * mus[:, None]))
        for tab in jump_tables if tab is not None
    )
    total_om = sum(
        float(np.sum(np.abs(tab) ** 2 * mus * qs**2 / (1.0 + qs**2)))
        for tab in omega_tables if tab is not None
    )
    if not (np.isfinite(total_l2) and np.isfinite(total_om)):
        raise ValueError("Levy integrability conditions violated (non-finite tables)")
    n = lat.n_points
    F = fourier_matrix(lat)
    s = signed_min_image(lat)
    eye = np.eye(n, dtype=complex)
    kernel_offsets = np.zeros(n, dtype=complex)
    terms = []
    n_chan = max(len(jump_tables), len(omega_tables))
    for iq, (q, mu) in enumerate(zip(qs, mus)):
        if mu == 0.0:
            continue
        u = np.diag(np.exp(1j * q * lat.positions / lat.hbar))
        ud = u.conj().T
        for j in range(n_chan):
            lvals = jump_tables[j][iq] if j < len(jump_tables) and jump_tables[j] is not None else None
            omega = (
                complex(omega_tables[j][iq])
                if j < len(omega_tables) and omega_tables[j] is not None
                else 0.0
            )
            lmat = None
            if lvals is not None and np.any(lvals):
                lmat = F.conj().T @ np.diag(lvals) @ F
                terms += Superoperator.lindblad_terms(u @ lmat, weight=mu)
            if omega != 0.0:
                if lmat is not None:
                    ld = lmat.conj().T
                    terms += [
                        Term(None, mu * omega * u, ld @ ud),
                        Term(None, None, -mu * omega * ld),
                        Term(None, mu * np.conj(omega) * (u @ lmat), ud),
                        Term(None, -mu * np.conj(omega) * lmat, None),
                    ]
                w2 = mu * abs(omega) ** 2
                terms += [
                    Term(None, w2 * u, ud),
                    Term(None, -w2 * eye, None),
                ]
                kernel_offsets += -1j * w2 * q / (1.0 + q**2) * s
    if np.any(kernel_offsets):
        terms.append(Term(kernel=circulant_from_offsets(lat, kernel_offsets)))
    return Superoperator(lat, POSITION, terms)


def levy_generator(lat: Lattice, gaussian: GaussianPart, poisson: PoissonPart) -> Superoperator:
    """Full covariant generator; equals the sum of its two components by construction."""
    return gaussian_component(lat, gaussian) + poisson_component(lat, poisson)


def covariance_defect(sup: Superoperator, shifts, probes) -> float:
    """max over shifts s and probes rho of || T_{-s} L[T_s rho] - L[rho] ||_F."""
    defect = 0.0
    for probe in probes:
        rho = probe.to_basis(POSITION) if probe.basis != POSITION else probe
        base = sup.apply_position(rho.data)
        for sft in shifts:
            shifted = np.roll(rho.data, (sft, sft), axis=(0, 1))
            out = sup.apply_position(shifted)
            back = np.roll(out, (-sft, -sft), axis=(0, 1))
            defect = max(defect, float(np.linalg.norm(back - base)))
    return defect


def decompose_known(spec: GeneratorSpec, lat: Lattice) -> tuple:
    """Map a named model onto its Levy-Khinchin data (GaussianPart, PoissonPart).

    Joos-Zeh is pure Gaussian, Alicki pure Poisson, Gallis93 a Poisson part
    with momentum-linear jump functions, GRW a Poisson part whose continuous
    kick density is sampled onto the lattice (approximate flag set), and a
    Vacchini spec decomposes when its truncated momentum shifts never clip
    amplitude (otherwise the jump operators are not of the covariant kick
    form and an error is raised).  A Caldeira-Leggett spec with chi < 1/8 is
    rejected: it is not the generator of a completely positive semigroup.
    """
    empty_poisson = PoissonPart()
    if isinstance(spec, JoosZeh):
        return GaussianPart(a=(np.sqrt(2.0 * spec.lam),)), empty_poisson
    if isinstance(spec, Alicki):
        qs = np.asarray(spec.kicks.qs)
        roots = np.sqrt(np.asarray(spec.kicks.weights))
        jump = np.repeat(roots[:, None], lat.n_points, axis=1).astype(complex)
        measure = KickTable(tuple(qs), tuple(1.0 for _ in qs))
        return GaussianPart(), PoissonPart(measure=measure, jumps=(jump,))
    if isinstance(spec, Gallis93):
        qs = np.asarray(spec.qs)
        table = np.empty((len(qs), lat.n_points), dtype=complex)
        for i, q in enumerate(qs):
            table[i] = complex(spec.alpha_vals[i]) + complex(spec.beta_vals[i]) * q * lat.momenta
        measure = KickTable(tuple(qs), tuple(lat.dp for _ in qs))
        return GaussianPart(), PoissonPart(measure=measure, jumps=(table,))
    if isinstance(spec, GRW):
        # sample the Gaussian kick density of the localization integral onto
        # the lattice: exact on-lattice weights are the DFT of the overlap kernel
        from .generators import grw as _grw

        kernel = _grw(lat, spec.rate, spec.alpha).hadamard_kernel()
        offsets = kernel[:, 0]
        weights = (np.fft.fft(offsets + spec.rate) / lat.n_points).real  # rate * ghat(k) >= 0
        weights = np.clip(weights, 0.0, None)
        qs = lat.dp * ((np.arange(lat.n_points) + lat.n_points // 2) % lat.n_points
                       - lat.n_points // 2)
        keep = weights > 1e-15 * weights.max()
        measure = KickTable(tuple(qs[keep]), tuple(1.0 for _ in qs[keep]))
        jump = np.repeat(np.sqrt(weights[keep])[:, None], lat.n_points, axis=1).astype(complex)
        return GaussianPart(), PoissonPart(measure=measure, jumps=(jump,), approximate=True)
    if isinstance(spec, Vacchini):
        tvals = np.asarray(
            [spec.t_matrix(q) if callable(spec.t_matrix) else spec.t_matrix for q in spec.sq.qs],
            dtype=complex,
        )
        cells = KickTable(spec.sq.qs, tuple(0.0 for _ in spec.sq.qs)).cells(lat)
        n = lat.n_points
        smax = float(spec.sq.values.max()) if spec.sq.values.size else 0.0
        for iq, mcell in enumerate(cells):
            ks = np.arange(n)
            clipped = (ks + mcell < 0) | (ks + mcell >= n)
            if np.any(spec.sq.values[iq][clipped] > 1e-12 * max(smax, 1e-300)):
                raise ValueError(
                    "Vacchini spec not representable as a covariant Poisson component: "
                    f"kick q={spec.sq.qs[iq]} clips nonzero amplitude at the momentum boundary"
                )
        table = np.empty((len(spec.sq.qs), n), dtype=complex)
        for iq, q in enumerate(spec.sq.qs):
            w_q = (2.0 * np.pi) ** 4 * lat.hbar**2 * spec.density * abs(tvals[iq]) ** 2 * lat.dp
            table[iq] = np.sqrt(w_q * spec.sq.values[iq])
        measure = KickTable(spec.sq.qs, tuple(1.0 for _ in spec.sq.qs))
        return GaussianPart(), PoissonPart(measure=measure, jumps=(table,))
    if isinstance(spec, CaldeiraLeggett):
        if spec.chi < 0.125:
            raise ValueError(
                f"Caldeira-Leggett with chi={spec.chi} < 1/8 is not a completely "
                "positive semigroup generator"
            )
        hbar = lat.hbar
        a = np.sqrt(4.0 * spec.mass * spec.gamma / (spec.beta * hbar**2))
        b = spec.gamma / (hbar * a)
        extra = np.sqrt(2.0 * (spec.chi - 0.125) * spec.gamma * spec.beta / spec.mass)
        jumps = [lambda p, b=b: 1j * b * p]
        a_list = [a]
        if extra > 0:
            jumps.append(lambda p, e=extra: e * p + 0j)
            a_list.append(0.0)
        # with y = a x and L = i b p, ab = gamma/hbar, the commutator-grouped
        # Gaussian component reproduces the minimal-image Caldeira-Leggett
        # builder exactly (friction included, no extra Hamiltonian term)
        return GaussianPart(a=tuple(a_list), jumps=tuple(jumps)), empty_poisson
    raise ValueError(f"no Levy-Khinchin decomposition implemented for {spec!r}")
