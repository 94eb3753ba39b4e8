"""Independent oracles used by the test suite.

Everything here recomputes expected values through a different route than the
library code under test: direct matrix-unit loops, explicit Kronecker
assembly, quadrature, and Monte-Carlo integration.
"""

import numpy as np
from scipy import integrate
from scipy.linalg import expm

from decoherence_kit import (
    Lattice,
    Superoperator,
    fourier_matrix,
    momentum_operator,
    position_operator,
)


def spre(a: np.ndarray) -> np.ndarray:
    n = a.shape[0]
    return np.kron(np.eye(n), a)


def spost(b: np.ndarray) -> np.ndarray:
    n = b.shape[0]
    return np.kron(b.T, np.eye(n))


def sandwich(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.kron(b.T, a)


def dissipator_matrix(v: np.ndarray) -> np.ndarray:
    """Dense V rho V^dag - (1/2){V^dag V, rho} via explicit Kronecker products."""
    vd = v.conj().T
    vdv = vd @ v
    return sandwich(v, vd) - 0.5 * spre(vdv) - 0.5 * spost(vdv)


def double_commutator_matrix(a: np.ndarray) -> np.ndarray:
    a2 = a @ a
    return spre(a2) - 2.0 * sandwich(a, a) + spost(a2)


def apply_via_dense(sup: Superoperator, rho: np.ndarray) -> np.ndarray:
    v = sup.matrix @ rho.reshape(-1, order="F")
    return v.reshape(rho.shape, order="F")


def choi_via_reshuffle(sup: Superoperator, t: float) -> float:
    """Choi minimum eigenvalue through the reshuffle identity (independent of
    the matrix-unit loop in the library)."""
    n = sup.lattice.n_points
    phi = expm(t * sup.matrix)
    # C[i n + k, j n + l] = phi[l n + k, j n + i]
    choi = phi.reshape(n, n, n, n).transpose(3, 1, 2, 0).reshape(n * n, n * n)
    choi = 0.5 * (choi + choi.conj().T)
    return float(np.linalg.eigvalsh(choi).min())


def gallis_expanded(lat: Lattice, qs, alpha_vals, beta_vals) -> np.ndarray:
    """Three-term expanded form of the kick-plus-friction generator.

    Derived by expanding the jump-operator assembly per kick q:
        |a|^2 (U rho U^dag - rho)
      + |b|^2 (U K rho K U^dag - (1/2){K^2, rho})
      + U (Re[conj(a) b] {K, rho} + i Im[conj(a) b] [K, rho]) U^dag
      - Re[conj(a) b] {K, rho}
    with U = e^{iqx/hbar}, K = q p, all weighted by the cell measure dp.
    """
    n = lat.n_points
    p = momentum_operator(lat, "position")
    eye = np.eye(n, dtype=complex)
    total = np.zeros((n * n, n * n), dtype=complex)
    for q, a, b in zip(qs, alpha_vals, beta_vals):
        a, b = complex(a), complex(b)
        u = np.diag(np.exp(1j * q * lat.positions / lat.hbar))
        ud = u.conj().T
        k = q * p
        term = abs(a) ** 2 * (sandwich(u, ud) - np.eye(n * n))
        term += abs(b) ** 2 * (sandwich(u @ k, k @ ud) - 0.5 * (spre(k @ k) + spost(k @ k)))
        cross = np.conj(a) * b
        anti = spre(k) + spost(k)
        comm = spre(k) - spost(k)
        term += cross.real * (sandwich(u, ud) @ anti) + 1j * cross.imag * (sandwich(u, ud) @ comm)
        term -= cross.real * anti
        total += lat.dp * term
    return total


def tau_radial(k: float, g=None) -> float:
    """Reference radial reduction tau(k) = (pi/k) * int_{k/2}^inf g(q)/q^2 dq."""
    gfun = g or (lambda q: np.exp(-q * q))
    val, _ = integrate.quad(lambda q: gfun(q) / q**2, k / 2.0, np.inf)
    return np.pi / k * val


def tau_mc(k: float, n_samples: int, eps: float, seed: int) -> tuple:
    """3-D Monte-Carlo quadrature of int d^3q g(q)/(2 q^4) delta(q - |q - k e_z|)
    with a Gaussian-smeared delta of width eps and g(q) = exp(-q^2).

    Samples q from the normalized density pi^{-3/2} e^{-|q|^2}, so the
    estimator weight is pi^{3/2} delta_eps / (2 q^4).  Returns (mean, stderr).
    """
    rng = np.random.default_rng(seed)
    kvec = np.array([0.0, 0.0, k])
    total, total_sq, count = 0.0, 0.0, 0
    remaining = n_samples
    while remaining > 0:
        m = min(2_000_000, remaining)
        q = rng.normal(scale=np.sqrt(0.5), size=(m, 3))
        qn = np.linalg.norm(q, axis=1)
        diff = np.linalg.norm(q - kvec, axis=1)
        delta = np.exp(-0.5 * ((qn - diff) / eps) ** 2) / (np.sqrt(2.0 * np.pi) * eps)
        vals = np.pi**1.5 * delta / (2.0 * qn**4)
        total += vals.sum()
        total_sq += (vals**2).sum()
        count += m
        remaining -= m
    mean = total / count
    stderr = np.sqrt(max(total_sq / count - mean**2, 0.0) / count)
    return mean, stderr


def random_hermitian_unit_trace(n: int, rng) -> np.ndarray:
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    h = 0.5 * (a + a.conj().T)
    h += (1.0 - np.trace(h).real) / n * np.eye(n)
    return h


def random_density(n: int, rng) -> np.ndarray:
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    rho = a @ a.conj().T
    return rho / np.trace(rho).real
