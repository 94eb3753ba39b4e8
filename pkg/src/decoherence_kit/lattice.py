"""Periodic position/momentum lattice, states on it, and dense superoperators.

Conventions
-----------
Positions are x_i = x0 + i*dx (i = 0..N-1) on a ring of extent N*dx; momenta
are p_k = (k - N/2)*dp with dp = 2*pi*hbar/(N*dx), listed in increasing order,
so dp*dx*N = 2*pi*hbar exactly.  The position -> momentum transform is the
unitary matrix F[k, i] = exp(-1j*p_k*x_i/hbar)/sqrt(N); density matrices map
as rho_mom = F @ rho_pos @ F^dag.  A cyclic position shift by s cells
multiplies momentum-basis wavefunctions by exp(-1j*p*s*dx/hbar).

Superoperators are stored as sums of structured terms

    rho  ->  kernel * (left @ rho @ right)

(elementwise kernel, optional left/right factors), which keeps application
cheap for elementwise generators at large N.  The dense N^2 x N^2 matrix
acting on column-major vectorized density matrices is materialized on demand;
with column stacking, vec(A @ X @ B) = kron(B.T, A) @ vec(X).

Distances on the ring are minimal-image: position-difference kernels depend
only on (i - j) mod N, which is what makes the generators built on top of
this module commute exactly with cyclic shifts.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

POSITION = "position"
MOMENTUM = "momentum"
_BASES = (POSITION, MOMENTUM)


class GuardError(ValueError):
    """A numerical size guard was exceeded (dense matrix too large, etc.)."""


@dataclass(frozen=True)
class Lattice:
    """Periodic grid of n_points cells of size dx starting at x0."""

    n_points: int
    dx: float
    x0: float
    hbar: float = 1.0

    def __post_init__(self):
        if self.n_points < 4 or self.n_points % 2 != 0:
            raise ValueError(f"n_points must be even and >= 4, got {self.n_points}")
        if not self.dx > 0:
            raise ValueError(f"dx must be positive, got {self.dx}")
        if not self.hbar > 0:
            raise ValueError(f"hbar must be positive, got {self.hbar}")

    @property
    def extent(self) -> float:
        return self.n_points * self.dx

    @property
    def dp(self) -> float:
        return 2.0 * np.pi * self.hbar / (self.n_points * self.dx)

    @property
    def positions(self) -> np.ndarray:
        return self.x0 + self.dx * np.arange(self.n_points)

    @property
    def momenta(self) -> np.ndarray:
        return (np.arange(self.n_points) - self.n_points // 2) * self.dp


def make_lattice(n_points: int, x_extent: float, hbar: float = 1.0) -> Lattice:
    """Centered periodic lattice with dx = x_extent/n_points."""
    if not x_extent > 0:
        raise ValueError(f"x_extent must be positive, got {x_extent}")
    dx = x_extent / n_points
    return Lattice(n_points=n_points, dx=dx, x0=-x_extent / 2.0, hbar=hbar)


# ---------------------------------------------------------------------------
# cached per-lattice operators
# ---------------------------------------------------------------------------

@lru_cache(maxsize=64)
def fourier_matrix(lat: Lattice) -> np.ndarray:
    """Unitary position->momentum transform F[k, i] = e^{-i p_k x_i / hbar}/sqrt(N)."""
    F = np.exp(-1j * np.outer(lat.momenta, lat.positions) / lat.hbar)
    return F / np.sqrt(lat.n_points)


@lru_cache(maxsize=64)
def position_operator(lat: Lattice) -> np.ndarray:
    """x as a diagonal matrix in the position basis (plain grid values)."""
    return np.diag(lat.positions.astype(complex))


@lru_cache(maxsize=64)
def momentum_operator(lat: Lattice, basis: str = POSITION) -> np.ndarray:
    """p, diagonal in the momentum basis, dense in the position basis."""
    if basis == MOMENTUM:
        return np.diag(lat.momenta.astype(complex))
    F = fourier_matrix(lat)
    return F.conj().T @ np.diag(lat.momenta.astype(complex)) @ F


@lru_cache(maxsize=64)
def min_image_distances(lat: Lattice) -> np.ndarray:
    """Unsigned minimal-image distance d(r) for cell offsets r = 0..N-1."""
    r = np.arange(lat.n_points)
    return lat.dx * np.minimum(r, lat.n_points - r).astype(float)


@lru_cache(maxsize=64)
def signed_min_image(lat: Lattice) -> np.ndarray:
    """Signed minimal-image displacement; the ambiguous antipode maps to 0.

    The antipodal offset r = N/2 is equidistant in both directions; it is set
    to zero so the kernel stays odd, which is what Hermiticity preservation of
    single-commutator structures requires.
    """
    n = lat.n_points
    r = np.arange(n)
    s = (((r + n // 2) % n) - n // 2).astype(float)
    s[n // 2] = 0.0
    return lat.dx * s


def circulant_from_offsets(lat: Lattice, values: np.ndarray) -> np.ndarray:
    """Matrix K[i, j] = values[(i - j) mod N]."""
    n = lat.n_points
    idx = (np.arange(n)[:, None] - np.arange(n)[None, :]) % n
    return np.asarray(values)[idx]


def is_circulant(kernel: np.ndarray) -> bool:
    n = kernel.shape[0]
    idx = (np.arange(n)[:, None] - np.arange(n)[None, :]) % n
    return bool(np.array_equal(kernel, kernel[:, 0][idx]))


def vec(mat: np.ndarray) -> np.ndarray:
    """Column-major (column-stacking) vectorization."""
    return mat.reshape(-1, order="F")


def unvec(v: np.ndarray) -> np.ndarray:
    n = int(round(np.sqrt(v.size)))
    return v.reshape((n, n), order="F")


# ---------------------------------------------------------------------------
# density matrices
# ---------------------------------------------------------------------------

@dataclass
class DensityMatrix:
    """Complex N x N statistical operator tagged with its basis."""

    data: np.ndarray
    basis: str
    lattice: Lattice

    def __post_init__(self):
        if self.basis not in _BASES:
            raise ValueError(f"unknown basis {self.basis!r}")
        self.data = np.asarray(self.data, dtype=complex)
        n = self.lattice.n_points
        if self.data.shape != (n, n):
            raise ValueError(f"expected {(n, n)} matrix, got {self.data.shape}")

    def to_basis(self, target: str) -> "DensityMatrix":
        return change_basis(self, target)

    def trace(self) -> complex:
        return complex(np.trace(self.data))

    def purity(self) -> float:
        return float(np.real(np.trace(self.data @ self.data)))

    def validate(self, herm_tol=1e-12, trace_tol=1e-12, eig_tol=1e-10) -> "DensityMatrix":
        herm = np.abs(self.data - self.data.conj().T).max()
        if herm > herm_tol:
            raise ValueError(f"state not Hermitian: defect {herm:.2e}")
        tr = abs(np.trace(self.data) - 1.0)
        if tr > trace_tol:
            raise ValueError(f"state trace off by {tr:.2e}")
        mineig = float(np.linalg.eigvalsh(0.5 * (self.data + self.data.conj().T)).min())
        if mineig < -eig_tol:
            raise ValueError(f"state not positive semidefinite: min eig {mineig:.2e}")
        return self


def _pure_state(lat: Lattice, psi: np.ndarray, basis: str) -> DensityMatrix:
    psi = psi / np.linalg.norm(psi)
    return DensityMatrix(np.outer(psi, psi.conj()), basis, lat).validate()


def _wrapped_displacement(lat: Lattice, center: float) -> np.ndarray:
    """Displacement x_i - center folded into (-extent/2, extent/2]."""
    ext = lat.extent
    d = lat.positions - center
    return (d + ext / 2.0) % ext - ext / 2.0


def gaussian_state(lat: Lattice, x_c: float, p_c: float, width: float) -> DensityMatrix:
    """Pure Gaussian wavepacket psi(x) ~ exp(-(x-x_c)^2/(4 w^2) + i p_c x/hbar)."""
    if not (width > 2.0 * lat.dx and width < lat.extent / 8.0):
        raise ValueError(
            f"width {width} outside resolvable band ({2 * lat.dx}, {lat.extent / 8})"
        )
    d = _wrapped_displacement(lat, x_c)
    psi = np.exp(-(d**2) / (4.0 * width**2) + 1j * p_c * lat.positions / lat.hbar)
    return _pure_state(lat, psi, POSITION)


def cat_state(lat: Lattice, separation: float, width: float) -> DensityMatrix:
    """Even superposition of two Gaussians at +-separation/2."""
    if not width > 0:
        raise ValueError("width must be positive")
    if not separation + 6.0 * width < lat.extent / 2.0:
        raise ValueError(
            f"cat state overlaps the boundary: separation {separation} + 6*width "
            f"{6 * width} must stay below {lat.extent / 2}"
        )
    dplus = _wrapped_displacement(lat, separation / 2.0)
    dminus = _wrapped_displacement(lat, -separation / 2.0)
    psi = np.exp(-(dplus**2) / (4.0 * width**2)) + np.exp(-(dminus**2) / (4.0 * width**2))
    return _pure_state(lat, psi.astype(complex), POSITION)


def thermal_state(lat: Lattice, beta: float, mass: float) -> DensityMatrix:
    """Momentum-diagonal state with populations ~ exp(-beta p^2 / 2M)."""
    if not beta > 0 or not mass > 0:
        raise ValueError("beta and mass must be positive")
    p = lat.momenta
    p_max = np.abs(p).max()
    if np.exp(-beta * p_max**2 / (2.0 * mass)) > 1e-6:
        warnings.warn(
            "thermal tail truncated by the momentum window "
            f"(boundary weight {np.exp(-beta * p_max**2 / (2 * mass)):.2e})",
            stacklevel=2,
        )
    w = np.exp(-beta * p**2 / (2.0 * mass))
    w /= w.sum()
    return DensityMatrix(np.diag(w.astype(complex)), MOMENTUM, lat).validate()


def maximally_mixed(lat: Lattice, basis: str = POSITION) -> DensityMatrix:
    n = lat.n_points
    return DensityMatrix(np.eye(n, dtype=complex) / n, basis, lat)


def change_basis(rho: DensityMatrix, target: str) -> DensityMatrix:
    if target not in _BASES:
        raise ValueError(f"unknown basis {target!r}")
    if target == rho.basis:
        return DensityMatrix(rho.data.copy(), rho.basis, rho.lattice)
    F = fourier_matrix(rho.lattice)
    if target == MOMENTUM:
        data = F @ rho.data @ F.conj().T
    else:
        data = F.conj().T @ rho.data @ F
    return DensityMatrix(data, target, rho.lattice)


def translate(rho: DensityMatrix, steps: int) -> DensityMatrix:
    """Cyclic shift rho'(i, j) = rho((i-s) mod N, (j-s) mod N)."""
    if rho.basis != POSITION:
        raise ValueError("translate requires a position-basis density matrix")
    data = np.roll(rho.data, (steps, steps), axis=(0, 1))
    return DensityMatrix(data, POSITION, rho.lattice)


# observables ---------------------------------------------------------------

def expect_x(rho: DensityMatrix) -> float:
    r = rho.to_basis(POSITION)
    return float(np.real(np.sum(r.lattice.positions * np.diag(r.data).real)))


def expect_p(rho: DensityMatrix) -> float:
    r = rho.to_basis(MOMENTUM)
    return float(np.real(np.sum(r.lattice.momenta * np.diag(r.data).real)))


def expect_p2(rho: DensityMatrix) -> float:
    r = rho.to_basis(MOMENTUM)
    return float(np.real(np.sum(r.lattice.momenta**2 * np.diag(r.data).real)))


def coherence_at(rho: DensityMatrix, separation: float) -> float:
    """Largest |rho(x, y)| over pairs within half a cell of the separation."""
    r = rho.to_basis(POSITION)
    lat = r.lattice
    d = min_image_distances(lat)
    offsets = np.nonzero(np.abs(d - separation) <= lat.dx / 2.0 + 1e-12 * lat.dx)[0]
    if offsets.size == 0:
        raise ValueError(f"no lattice pairs at separation {separation}")
    best = 0.0
    for r_off in offsets:
        best = max(best, float(np.abs(np.diag(np.roll(r.data, -int(r_off), axis=1))).max()))
    return best


# ---------------------------------------------------------------------------
# superoperators
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Term:
    """One structured contribution rho -> kernel * (left @ rho @ right)."""

    kernel: np.ndarray | None = None
    left: np.ndarray | None = None
    right: np.ndarray | None = None

    def scaled(self, c: complex) -> "Term":
        if self.kernel is not None:
            return Term(self.kernel * c, self.left, self.right)
        if self.left is not None:
            return Term(None, self.left * c, self.right)
        if self.right is not None:
            return Term(None, None, self.right * c)
        raise ValueError("cannot scale an empty term")


DENSE_GUARD = 64  # largest N for which the N^2 x N^2 dense form is materialized


class Superoperator:
    """Linear map on density matrices, stored as a sum of structured terms.

    The ``matrix`` property is the dense N^2 x N^2 representation acting on
    column-major vectorized density matrices; it is built lazily and cached.
    Instances are immutable once constructed: arithmetic returns new objects.
    """

    def __init__(self, lattice: Lattice, basis: str, terms):
        if basis not in _BASES:
            raise ValueError(f"unknown basis {basis!r}")
        self.lattice = lattice
        self.basis = basis
        self.terms = tuple(terms)
        self._dense = None
        self._exp_cache: dict = {}
        self._norm_estimate = None

    # -- construction helpers ------------------------------------------------

    @staticmethod
    def zero(lat: Lattice, basis: str = POSITION) -> "Superoperator":
        return Superoperator(lat, basis, [])

    @staticmethod
    def from_hadamard(lat: Lattice, basis: str, kernel: np.ndarray) -> "Superoperator":
        return Superoperator(lat, basis, [Term(kernel=np.asarray(kernel, dtype=complex))])

    @staticmethod
    def from_hamiltonian(lat: Lattice, basis: str, h: np.ndarray) -> "Superoperator":
        """-(i/hbar) [H, rho] for a Hermitian matrix H."""
        c = -1j / lat.hbar
        return Superoperator(lat, basis, [Term(None, c * h, None), Term(None, None, -c * h)])

    @staticmethod
    def lindblad_terms(v: np.ndarray, weight: float = 1.0) -> list:
        """Terms of w*(V rho V^dag - (1/2){V^dag V, rho})."""
        vd = v.conj().T
        vdv = vd @ v
        return [
            Term(None, weight * v, vd),
            Term(None, -0.5 * weight * vdv, None),
            Term(None, None, -0.5 * weight * vdv),
        ]

    # -- application ----------------------------------------------------------

    def apply_data(self, data: np.ndarray) -> np.ndarray:
        """Apply to a raw matrix already expressed in this superoperator's basis."""
        out = np.zeros_like(data, dtype=complex)
        for t in self.terms:
            y = data
            if t.left is not None:
                y = t.left @ y
            if t.right is not None:
                y = y @ t.right
            if t.kernel is not None:
                y = t.kernel * y
            out += y
        return out

    def apply(self, rho: DensityMatrix) -> np.ndarray:
        """Apply to a state; the result is a raw matrix in this basis."""
        if rho.lattice != self.lattice:
            raise ValueError("lattice mismatch")
        return self.apply_data(rho.to_basis(self.basis).data)

    def apply_position(self, data_pos: np.ndarray) -> np.ndarray:
        """Apply to a position-basis matrix, returning a position-basis matrix."""
        if self.basis == POSITION:
            return self.apply_data(data_pos)
        F = fourier_matrix(self.lattice)
        out = self.apply_data(F @ data_pos @ F.conj().T)
        return F.conj().T @ out @ F

    # -- dense form -----------------------------------------------------------

    @property
    def matrix(self) -> np.ndarray:
        if self._dense is None:
            n = self.lattice.n_points
            if n > DENSE_GUARD:
                raise GuardError(
                    f"dense superoperator guard: N={n} > {DENSE_GUARD}; "
                    "use apply()/rk4 stepping instead"
                )
            eye = np.eye(n, dtype=complex)
            acc = np.zeros((n * n, n * n), dtype=complex)
            for t in self.terms:
                a = t.left if t.left is not None else eye
                b = t.right if t.right is not None else eye
                m = np.kron(b.T, a)
                if t.kernel is not None:
                    m = vec(t.kernel)[:, None] * m
                acc += m
            self._dense = acc
        return self._dense

    def frobenius_norm(self) -> float:
        return float(np.linalg.norm(self.matrix))

    def hadamard_kernel(self) -> np.ndarray | None:
        """Combined elementwise kernel if every term is kernel-only, else None."""
        if not self.terms:
            return None
        if any(t.left is not None or t.right is not None for t in self.terms):
            return None
        total = np.zeros((self.lattice.n_points,) * 2, dtype=complex)
        for t in self.terms:
            total += t.kernel
        return total

    def norm_estimate(self) -> float:
        """Cheap upper-bound-flavored scale estimate used by step-size warnings."""
        if self._norm_estimate is None:
            n = self.lattice.n_points
            est = 0.0
            for t in self.terms:
                s = 1.0
                if t.kernel is not None:
                    s *= float(np.abs(t.kernel).max())
                if t.left is not None:
                    s *= float(np.linalg.norm(t.left, 2))
                if t.right is not None:
                    s *= float(np.linalg.norm(t.right, 2))
                if t.kernel is None and t.left is None and t.right is None:
                    s = 0.0
                est += s
            self._norm_estimate = est if est else 1.0
        return self._norm_estimate

    # -- arithmetic -----------------------------------------------------------

    def to_basis(self, target: str) -> "Superoperator":
        if target == self.basis:
            return self
        F = fourier_matrix(self.lattice)
        if target == MOMENTUM:
            conv = lambda m: F @ m @ F.conj().T  # noqa: E731
        else:
            conv = lambda m: F.conj().T @ m @ F  # noqa: E731
        n = self.lattice.n_points
        new_terms = []
        for t in self.terms:
            if t.kernel is None:
                new_terms.append(
                    Term(
                        None,
                        conv(t.left) if t.left is not None else None,
                        conv(t.right) if t.right is not None else None,
                    )
                )
                continue
            # circulant kernels decompose into lattice-kick sandwiches
            if not is_circulant(t.kernel):
                raise ValueError("cannot change basis of a non-circulant kernel term")
            c = t.kernel[:, 0]
            chat = np.fft.fft(c) / n  # c[r] = sum_k chat[k] e^{+2 pi i k r / N}
            phases = np.exp(2j * np.pi * np.outer(np.arange(n), np.arange(n)) / n)
            for k in range(n):
                if abs(chat[k]) < 1e-18:
                    continue
                d = np.diag(phases[k])
                a = d if t.left is None else d @ t.left
                b = d.conj() if t.right is None else t.right @ d.conj()
                new_terms.append(Term(None, conv(chat[k] * a), conv(b)))
        return Superoperator(self.lattice, target, new_terms)

    def _coerced(self, other: "Superoperator") -> "Superoperator":
        if other.lattice != self.lattice:
            raise ValueError("lattice mismatch")
        return other.to_basis(self.basis)

    def __add__(self, other: "Superoperator") -> "Superoperator":
        other = self._coerced(other)
        return Superoperator(self.lattice, self.basis, self.terms + other.terms)

    def __sub__(self, other: "Superoperator") -> "Superoperator":
        return self + (-1.0) * other

    def __mul__(self, c) -> "Superoperator":
        return Superoperator(self.lattice, self.basis, [t.scaled(c) for t in self.terms])

    __rmul__ = __mul__

    def __neg__(self) -> "Superoperator":
        return (-1.0) * self


def superop_distance(a: Superoperator, b: Superoperator, relative: bool = False) -> float:
    """Frobenius distance between two superoperators (dense, basis-aligned)."""
    if a.lattice != b.lattice:
        raise ValueError("lattice mismatch")
    d = float(np.linalg.norm(a.matrix - b.to_basis(a.basis).matrix))
    if relative:
        scale = max(np.linalg.norm(a.matrix), np.linalg.norm(b.matrix), 1e-300)
        return d / scale
    return d
