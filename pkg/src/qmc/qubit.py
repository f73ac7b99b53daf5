"""Exact 2x2 operator algebra and state primitives for a single qubit.

Conventions used everywhere in this package:

* basis ordering is (|e>, |g>): index 0 is the excited state, so
  sigma_z = diag(+1, -1) and the Bloch z coordinate equals the population
  inversion rho_ee - rho_gg;
* natural units hbar = k_B = 1; energies are angular frequencies and
  entropies are in nats (natural log).

Matrices are plain 2x2 complex numpy arrays.  ``DensityMatrix`` wraps one
behind a validating constructor so that every state circulating in the
package is Hermitian, unit-trace and positive semidefinite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import StateValidationError, ValidationError

HERMITICITY_TOL = 1e-12
TRACE_TOL = 1e-12
POSITIVITY_TOL = 1e-12

IDENTITY = np.eye(2, dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
SIGMA_PLUS = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)   # |e><g|
SIGMA_MINUS = np.array([[0.0, 0.0], [1.0, 0.0]], dtype=complex)  # |g><e|

for _m in (IDENTITY, SIGMA_Z, SIGMA_PLUS, SIGMA_MINUS):
    _m.setflags(write=False)


def _as_matrix2(m) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.shape != (2, 2):
        raise ValidationError(f"expected a 2x2 matrix, got shape {a.shape}")
    return a


def hermiticity_defect(m) -> float:
    """Max-norm distance of m from its own adjoint."""
    a = _as_matrix2(m)
    return float(np.max(np.abs(a - a.conj().T)))


def eigvals_2x2(m) -> tuple[float, float]:
    """Eigenvalues of a Hermitian 2x2 matrix, descending, in closed form.

    Uses the trace/determinant formula written in the numerically stable
    form lambda = mean +- sqrt(((a-d)/2)^2 + |b|^2), whose radicand is
    manifestly non-negative for Hermitian input.
    """
    a = _as_matrix2(m)
    if hermiticity_defect(a) > HERMITICITY_TOL:
        raise ValidationError(
            f"matrix is not Hermitian within {HERMITICITY_TOL:g}"
        )
    ee = a[0, 0].real
    gg = a[1, 1].real
    mean = 0.5 * (ee + gg)
    radius = math.hypot(0.5 * (ee - gg), abs(a[0, 1]))
    return mean + radius, mean - radius


@dataclass(frozen=True, eq=False)
class Hamiltonian:
    """Qubit Hamiltonian (omega/2) sigma_z with level spacing omega > 0."""

    omega: float

    def __post_init__(self):
        if not (self.omega > 0.0) or not math.isfinite(self.omega):
            raise ValidationError(f"omega must be a finite positive number, got {self.omega}")

    @property
    def matrix(self) -> np.ndarray:
        return 0.5 * self.omega * SIGMA_Z


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A validated qubit state.

    The wrapped array is made read-only; operations never mutate a state,
    they return new ones.  Validation tolerances can be widened, which is
    only appropriate for states produced by approximate numerics (the ODE
    oracle); everything else uses the strict defaults.
    """

    mat: np.ndarray
    psd_tol: float = field(default=POSITIVITY_TOL, repr=False)

    def __post_init__(self):
        a = _as_matrix2(self.mat).copy()
        defect = hermiticity_defect(a)
        if defect > HERMITICITY_TOL:
            raise StateValidationError(f"not Hermitian: defect {defect:.3e}")
        tr = a[0, 0].real + a[1, 1].real
        if abs(tr - 1.0) > TRACE_TOL:
            raise StateValidationError(f"trace {tr!r} is not 1 within {TRACE_TOL:g}")
        lo = eigvals_2x2(a)[1]
        if lo < -self.psd_tol:
            raise StateValidationError(f"negative eigenvalue {lo:.3e}")
        a.setflags(write=False)
        object.__setattr__(self, "mat", a)

    # -- constructors -------------------------------------------------

    @classmethod
    def pure(cls, ket) -> "DensityMatrix":
        """Projector |psi><psi| onto a (normalised) state vector."""
        k = np.asarray(ket, dtype=complex).reshape(2)
        norm = math.sqrt(float(np.real(np.vdot(k, k))))
        if norm < 1e-12:
            raise ValidationError("cannot normalise a null ket")
        k = k / norm
        return cls(np.outer(k, k.conj()))

    @classmethod
    def excited(cls) -> "DensityMatrix":
        return cls(np.diag([1.0, 0.0]).astype(complex))

    @classmethod
    def ground(cls) -> "DensityMatrix":
        return cls(np.diag([0.0, 1.0]).astype(complex))

    @classmethod
    def maximally_mixed(cls) -> "DensityMatrix":
        return cls(0.5 * IDENTITY)

    @classmethod
    def from_bloch(cls, x: float, y: float, z: float) -> "DensityMatrix":
        """Inverse of :func:`bloch_coordinates`; requires |r| <= 1."""
        r = math.sqrt(x * x + y * y + z * z)
        if r > 1.0 + POSITIVITY_TOL:
            raise StateValidationError(f"Bloch vector norm {r!r} exceeds 1")
        c = 0.5 * (x - 1j * y)
        return cls(np.array([[0.5 * (1.0 + z), c], [np.conj(c), 0.5 * (1.0 - z)]]))

    # -- accessors ----------------------------------------------------

    @property
    def excited_population(self) -> float:
        return float(self.mat[0, 0].real)

    @property
    def ground_population(self) -> float:
        return float(self.mat[1, 1].real)

    @property
    def coherence(self) -> complex:
        """The (e,g) off-diagonal element."""
        return complex(self.mat[0, 1])

    @property
    def purity(self) -> float:
        return float(np.real(np.trace(self.mat @ self.mat)))


def von_neumann_entropy(rho: DensityMatrix) -> float:
    """-sum_i lambda_i ln lambda_i in nats, with 0 ln 0 = 0.

    Eigenvalues within [-1e-12, 0] are clamped to 0 (rounding debris);
    anything more negative is a bug upstream and raises.  Values are also
    clamped to <= 1 so the result stays inside [0, ln 2].
    """
    s = 0.0
    for lam in eigvals_2x2(rho.mat):
        if lam < -POSITIVITY_TOL:
            raise StateValidationError(f"eigenvalue {lam:.3e} below -{POSITIVITY_TOL:g}")
        lam = min(max(lam, 0.0), 1.0)
        if lam > 0.0:
            s -= lam * math.log(lam)
    return s


def energy_expectation(rho: DensityMatrix, h: Hamiltonian) -> float:
    """Tr(H rho) = (omega/2)(rho_ee - rho_gg)."""
    return 0.5 * h.omega * (rho.excited_population - rho.ground_population)


def bloch_coordinates(rho: DensityMatrix) -> tuple[float, float, float]:
    """(x, y, z) with x = 2 Re rho_eg, y = -2 Im rho_eg, z = rho_ee - rho_gg."""
    c = rho.coherence
    return (2.0 * c.real, -2.0 * c.imag, rho.excited_population - rho.ground_population)
