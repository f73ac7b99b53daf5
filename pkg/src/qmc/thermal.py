"""Second stroke: finite-time relaxation against a thermal radiation bath.

The qubit damped by a bath at temperature T with coupling gamma follows the
standard Born-Markov master equation

    d rho/dt = -i [H, rho]                                   (optional)
             + gamma (n+1) (s- rho s+ - 1/2 {s+ s-, rho})    (emission)
             + gamma  n    (s+ rho s- - 1/2 {s- s+, rho})    (absorption)

with n the Planck occupation at the qubit frequency.  Populations and the
single coherence decouple, so the propagator is closed-form:

    p_e(t)    = p_inf + (p_e(0) - p_inf) e^{-Gamma t},   p_inf = n/(2n+1)
    rho_eg(t) = rho_eg(0) e^{-Gamma t/2} [e^{-i omega t}]

with Gamma = gamma (2n+1).  ``evolve`` implements this exactly and is the
propagator used by the cycle engine.  Two independent cross-checks live
alongside it: a fixed-step 4th-order integrator of the master equation
(``evolve_ode_oracle``) and a generalized-amplitude-damping Kraus
decomposition (``kraus_apply``).  The commutator term only rotates the
coherence phase; it can be switched off (``include_unitary=False``) since
it affects finite-time transition probabilities but none of the
long-contact limits.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, IntegrationError, ValidationError
from .qubit import SIGMA_MINUS, SIGMA_PLUS, DensityMatrix, Hamiltonian

# sigma_+ sigma_- = |e><e| and sigma_- sigma_+ = |g><g|
_PROJ_E = SIGMA_PLUS @ SIGMA_MINUS
_PROJ_G = SIGMA_MINUS @ SIGMA_PLUS


def planck_occupation(temperature: float, omega: float) -> float:
    """Mean thermal photon number 1/(e^{omega/T} - 1) at the qubit frequency."""
    if not (temperature > 0.0):
        raise DomainError(f"temperature must be positive, got {temperature!r}")
    if not (omega > 0.0):
        raise DomainError(f"omega must be positive, got {omega!r}")
    x = omega / temperature
    # exp(-x)/(1 - exp(-x)) never overflows; accurate for small and large x.
    n = math.exp(-x) / -math.expm1(-x)
    if n == 0.0:
        raise DomainError(f"omega/T = {x:g} too large: occupation underflows to 0")
    return n


@dataclass(frozen=True, eq=False)
class BathSpec:
    """A thermal bath: temperature, coupling rate, and stroke duration.

    The derived quantities (occupation, total decay rate, Gibbs state)
    depend on the qubit frequency and are exposed as methods.
    """

    temperature: float
    coupling: float
    contact_time: float

    def __post_init__(self):
        if not (self.temperature > 0.0):
            raise ValidationError(f"bath temperature must be positive, got {self.temperature!r}")
        if not (self.coupling > 0.0):
            raise ValidationError(f"bath coupling must be positive, got {self.coupling!r}")
        if self.contact_time < 0.0:
            raise ValidationError(f"contact time must be >= 0, got {self.contact_time!r}")

    def occupation(self, omega: float) -> float:
        return planck_occupation(self.temperature, omega)

    def decay_rate(self, omega: float) -> float:
        """Gamma = gamma (2n + 1); always exceeds the bare coupling."""
        return self.coupling * (2.0 * self.occupation(omega) + 1.0)

    def gibbs(self, omega: float) -> DensityMatrix:
        """Fixed point of the channel: populations (n, n+1)/(2n+1)."""
        n = self.occupation(omega)
        p_exc = n / (2.0 * n + 1.0)
        return DensityMatrix(np.diag([p_exc, 1.0 - p_exc]).astype(complex))


@dataclass(frozen=True, eq=False)
class ChannelOptions:
    """Switches shared by the propagator and its oracles."""

    include_unitary: bool = True
    integrator_step: float = 0.005

    def __post_init__(self):
        if not (self.integrator_step > 0.0):
            raise ValidationError(f"integrator_step must be positive, got {self.integrator_step!r}")


DEFAULT_OPTIONS = ChannelOptions()


def evolve(
    rho: DensityMatrix,
    bath: BathSpec,
    h: Hamiltonian,
    t: float,
    opts: ChannelOptions = DEFAULT_OPTIONS,
) -> DensityMatrix:
    """Exact finite-time thermal relaxation of rho for a duration t."""
    if t < 0.0:
        raise DomainError(f"evolution time must be >= 0, got {t!r}")
    if t == 0.0:
        return rho
    n = bath.occupation(h.omega)
    gamma_tot = bath.decay_rate(h.omega)
    decay = math.exp(-gamma_tot * t)
    p_exc_inf = n / (2.0 * n + 1.0)
    p_gnd_inf = 1.0 - p_exc_inf
    p_exc = p_exc_inf + (rho.excited_population - p_exc_inf) * decay
    p_gnd = p_gnd_inf + (rho.ground_population - p_gnd_inf) * decay
    c = rho.coherence * math.exp(-0.5 * gamma_tot * t)
    if opts.include_unitary:
        c *= cmath.exp(-1j * h.omega * t)
    return DensityMatrix(np.array([[p_exc, c], [np.conjugate(c), p_gnd]]))


def _master_equation_rhs(m: np.ndarray, h_mat, rate_down: float, rate_up: float, unitary: bool) -> np.ndarray:
    out = rate_down * (SIGMA_MINUS @ m @ SIGMA_PLUS - 0.5 * (_PROJ_E @ m + m @ _PROJ_E))
    out += rate_up * (SIGMA_PLUS @ m @ SIGMA_MINUS - 0.5 * (_PROJ_G @ m + m @ _PROJ_G))
    if unitary:
        out += -1j * (h_mat @ m - m @ h_mat)
    return out


def evolve_ode_oracle(
    rho: DensityMatrix,
    bath: BathSpec,
    h: Hamiltonian,
    t: float,
    opts: ChannelOptions = DEFAULT_OPTIONS,
) -> DensityMatrix:
    """Classical fixed-step RK4 integration of the master equation.

    Deliberately independent of the closed form: it steps the full matrix
    equation with the jump operators spelled out.  The positivity tolerance
    of the returned state is widened to the integrator's accuracy.
    """
    if t < 0.0:
        raise DomainError(f"evolution time must be >= 0, got {t!r}")
    if t == 0.0:
        return rho
    n = bath.occupation(h.omega)
    gamma_tot = bath.decay_rate(h.omega)
    fastest = max(gamma_tot, h.omega if opts.include_unitary else 0.0)
    if opts.integrator_step * fastest > 2.5:
        raise IntegrationError(
            f"step {opts.integrator_step:g} too large for stability "
            f"(fastest rate {fastest:g})"
        )
    steps = max(1, math.ceil(t / opts.integrator_step))
    dt = t / steps
    rate_down = bath.coupling * (n + 1.0)
    rate_up = bath.coupling * n
    h_mat = h.matrix
    unitary = opts.include_unitary

    m = rho.mat.copy()
    for _ in range(steps):
        k1 = _master_equation_rhs(m, h_mat, rate_down, rate_up, unitary)
        k2 = _master_equation_rhs(m + 0.5 * dt * k1, h_mat, rate_down, rate_up, unitary)
        k3 = _master_equation_rhs(m + 0.5 * dt * k2, h_mat, rate_down, rate_up, unitary)
        k4 = _master_equation_rhs(m + dt * k3, h_mat, rate_down, rate_up, unitary)
        m = m + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return DensityMatrix(m, psd_tol=1e-8)


def kraus_operators(
    bath: BathSpec,
    h: Hamiltonian,
    t: float,
    opts: ChannelOptions = DEFAULT_OPTIONS,
) -> list[np.ndarray]:
    """Generalized amplitude damping operators realising the channel.

    Thermal mixing weight (n+1)/(2n+1) on the decay pair and n/(2n+1) on
    the excitation pair, damping eta = 1 - e^{-Gamma t}.  The coherent
    rotation, when enabled, is composed as a unitary prefactor (it commutes
    with the dissipative part for this channel).  Decompositions are not
    unique; only the channel action is contractual.
    """
    if t < 0.0:
        raise DomainError(f"evolution time must be >= 0, got {t!r}")
    n = bath.occupation(h.omega)
    gamma_tot = bath.decay_rate(h.omega)
    eta = -math.expm1(-gamma_tot * t)
    keep = math.sqrt(1.0 - eta)
    jump = math.sqrt(eta)
    w_down = math.sqrt((n + 1.0) / (2.0 * n + 1.0))
    w_up = math.sqrt(n / (2.0 * n + 1.0))
    ops = [
        w_down * np.array([[keep, 0.0], [0.0, 1.0]], dtype=complex),
        w_down * np.array([[0.0, 0.0], [jump, 0.0]], dtype=complex),
        w_up * np.array([[1.0, 0.0], [0.0, keep]], dtype=complex),
        w_up * np.array([[0.0, jump], [0.0, 0.0]], dtype=complex),
    ]
    if opts.include_unitary:
        phase = cmath.exp(-0.5j * h.omega * t)
        u = np.array([[phase, 0.0], [0.0, np.conjugate(phase)]])
        ops = [u @ k for k in ops]
    return ops


def kraus_apply(
    rho: DensityMatrix,
    bath: BathSpec,
    h: Hamiltonian,
    t: float,
    opts: ChannelOptions = DEFAULT_OPTIONS,
) -> DensityMatrix:
    """Apply the channel in its Kraus representation: sum_k K rho K^dag."""
    out = np.zeros((2, 2), dtype=complex)
    for k in kraus_operators(bath, h, t, opts):
        out += k @ rho.mat @ k.conj().T
    return DensityMatrix(out)
