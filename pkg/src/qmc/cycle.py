"""The two-stroke cycle: measurement, conditioned bath contact, steady state.

One cycle measures the qubit in the (theta, phi) basis and then routes it
by outcome: '+' spends tau_c in contact with the cold bath, '-' spends
tau_h with the hot bath.  Because the measurement is rank-1 projective, the
post-measurement state is fully determined by the outcome label, so the
label sequence is exactly a two-state Markov chain with kernel

    q[k'|k] = <psi_k'| V_k[ |psi_k><psi_k| ] |psi_k'>.

Its stationary distribution p_+ = q[+|-] / (q[+|-] - q[+|+] + 1) closes all
per-cycle ensemble averages:

    W   = sum_k p_k [ <psi_k|H|psi_k> - Tr(H rho~_k) ]      measurement work
    Qc  = p_+ [ Tr(H rho~_+) - Tr(H rho_+) ]                cold heat uptake
    Qh  = p_- [ Tr(H rho~_-) - Tr(H rho_-) ]                hot heat uptake
    dSm = sum_k p_k Tr(rho~_k ln rho~_k)                    (= -I here)
    I   = sum_k p_k S_vN(rho~_k)                            information gain
    S   = -Qh/T_h - Qc/T_c                                  bath entropy change
    sigma = I + S >= 0

where rho~_k is the post-feedback state of branch k.  W + Qc + Qh = 0 holds
identically.  The engine also provides the long-contact closed form of
-Qc/Qh, exact limit-cycle iteration of the label distribution, and a seeded
Monte-Carlo sampler of the chain as a stochastic cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from . import chain
from .errors import DegenerateKernelError, ValidationError
from .measurement import MeasurementBasis, projectors
from .qubit import DensityMatrix, Hamiltonian, energy_expectation, von_neumann_entropy
from .thermal import DEFAULT_OPTIONS, BathSpec, ChannelOptions, evolve

DEGENERACY_TOL = 1e-15
MONTE_CARLO_BURN_IN = 100

REGIME_COOLER = "cooler"
REGIME_NON_COOLER = "non-cooler"
REGIME_PURE_INFORMATION = "pure-information"


@dataclass(frozen=True, eq=False)
class CycleSpec:
    """Everything that defines one operating point of the cycle."""

    hamiltonian: Hamiltonian
    basis: MeasurementBasis
    cold: BathSpec
    hot: BathSpec
    options: ChannelOptions = DEFAULT_OPTIONS

    def __post_init__(self):
        if not (self.hot.temperature > self.cold.temperature):
            raise ValidationError(
                f"refrigeration requires T_h > T_c, got T_h={self.hot.temperature!r}, "
                f"T_c={self.cold.temperature!r}"
            )


@dataclass(frozen=True, eq=False)
class TransitionKernel:
    """Column-stochastic outcome kernel; q_pp is q[+|+], q_pm is q[+|-]."""

    q_pp: float
    q_pm: float
    q_mp: float
    q_mm: float

    def __post_init__(self):
        for name, lo, hi in (("+", self.q_pp, self.q_mp), ("-", self.q_pm, self.q_mm)):
            if abs(lo + hi - 1.0) > 1e-12:
                raise ValidationError(f"column '{name}' sums to {lo + hi!r}, not 1")
            for q in (lo, hi):
                if q < -1e-12 or q > 1.0 + 1e-12:
                    raise ValidationError(f"entry {q!r} outside [0, 1]")
        # clip rounding debris so downstream arithmetic sees exact probabilities
        for field_name in ("q_pp", "q_pm", "q_mp", "q_mm"):
            q = getattr(self, field_name)
            object.__setattr__(self, field_name, min(max(q, 0.0), 1.0))

    @property
    def is_degenerate(self) -> bool:
        """True when every distribution is stationary (identity kernel)."""
        return self.q_pm - self.q_pp + 1.0 <= DEGENERACY_TOL

    @property
    def contraction_ratio(self) -> float:
        """Per-cycle geometric convergence factor |q[+|+] - q[+|-]|."""
        return abs(self.q_pp - self.q_pm)


@dataclass(frozen=True, eq=False)
class CycleReport:
    """Steady-state thermodynamic account of one operating point.

    Energies are in units of omega (hbar = 1), entropies in nats.  ``cop``
    and ``cop_ratio`` are None when undefined (no work input and no cold
    heat uptake) and +inf in the pure-information regime.
    """

    p_plus: float
    kernel: TransitionKernel
    W: float
    Qc: float
    Qh: float
    dSm: float
    mutual_info: float
    S_baths: float
    sigma: float
    sigma_cold: float
    sigma_hot: float
    cop: float | None
    cop_carnot: float
    cop_ratio: float | None
    regime: str
    cold_temperature: float
    hot_temperature: float
    include_unitary: bool
    degenerate: bool = False


@dataclass(frozen=True, eq=False)
class CopBound:
    """Outcome of the information-corrected COP bound check."""

    lhs: float
    rhs: float
    holds: bool
    applicable: bool


@dataclass(frozen=True, eq=False)
class EquilibriumHeatRatio:
    ratio: float
    meets_clausius_bound: bool
    degenerate: bool


@dataclass(frozen=True, eq=False)
class LimitCycleStep:
    distribution: tuple[float, float]   # (p_+, p_-) of this cycle's outcome
    state: DensityMatrix                # unselected post-feedback state


@dataclass(frozen=True, eq=False)
class MonteCarloEstimate:
    """Sampled means and standard errors from the outcome chain.

    Standard errors carry the chain autocorrelation factor
    sqrt((1+r)/(1-r)) with r = q[+|+] - q[+|-]; identical seeds give
    identical estimates on either chain backend.
    """

    p_plus: float
    W: float
    Qc: float
    Qh: float
    se_p_plus: float
    se_W: float
    se_Qc: float
    se_Qh: float
    n_samples: int
    n_plus: int
    seed: int
    burn_in: int


@dataclass(frozen=True, eq=False)
class _Branches:
    """Post-measurement and post-feedback states with their energies."""

    rho_plus: DensityMatrix
    rho_minus: DensityMatrix
    fed_plus: DensityMatrix
    fed_minus: DensityMatrix
    e_plus: float
    e_minus: float
    e_fed_plus: float
    e_fed_minus: float


def _branches(spec: CycleSpec) -> _Branches:
    proj_p, proj_m = projectors(spec.basis)
    rho_p = DensityMatrix(proj_p)
    rho_m = DensityMatrix(proj_m)
    fed_p = evolve(rho_p, spec.cold, spec.hamiltonian, spec.cold.contact_time, spec.options)
    fed_m = evolve(rho_m, spec.hot, spec.hamiltonian, spec.hot.contact_time, spec.options)
    h = spec.hamiltonian
    return _Branches(
        rho_p, rho_m, fed_p, fed_m,
        energy_expectation(rho_p, h), energy_expectation(rho_m, h),
        energy_expectation(fed_p, h), energy_expectation(fed_m, h),
    )


def _kernel_from_branches(spec: CycleSpec, br: _Branches) -> TransitionKernel:
    proj_p, proj_m = projectors(spec.basis)

    def overlap(proj, rho):
        return float(np.real(np.trace(proj @ rho.mat)))

    return TransitionKernel(
        q_pp=overlap(proj_p, br.fed_plus),
        q_pm=overlap(proj_p, br.fed_minus),
        q_mp=overlap(proj_m, br.fed_plus),
        q_mm=overlap(proj_m, br.fed_minus),
    )


def transition_kernel(spec: CycleSpec) -> TransitionKernel:
    """Outcome kernel q[k'|k] of one measurement-feedback round."""
    return _kernel_from_branches(spec, _branches(spec))


def steady_p_plus(kernel: TransitionKernel) -> float:
    """Stationary probability of outcome '+'."""
    if kernel.is_degenerate:
        raise DegenerateKernelError(
            "identity kernel: no unique stationary distribution"
        )
    p = kernel.q_pm / (kernel.q_pm - kernel.q_pp + 1.0)
    return min(max(p, 0.0), 1.0)


def _classify(w: float, qc: float, omega: float) -> tuple[float | None, str]:
    """(cop, regime) from the signs of work input and cold heat uptake."""
    if abs(w) > 1e-14 * omega:
        cop = qc / w
        regime = REGIME_COOLER if (w > 0.0 and qc > 0.0) else REGIME_NON_COOLER
        return cop, regime
    if qc > 0.0:
        return math.inf, REGIME_PURE_INFORMATION
    return None, REGIME_NON_COOLER


def cycle_report(spec: CycleSpec) -> CycleReport:
    """Full steady-state report at one operating point.

    A degenerate (identity) kernel only arises when feedback does nothing
    (both post-feedback states equal the post-measurement ones), in which
    case every reported energy and entropy vanishes identically regardless
    of the stationary weight; such a report carries p_plus = 0.5 by
    convention and is flagged ``degenerate``.
    """
    br = _branches(spec)
    kernel = _kernel_from_branches(spec, br)
    t_c = spec.cold.temperature
    t_h = spec.hot.temperature
    cop_carnot = t_c / (t_h - t_c)

    if kernel.is_degenerate:
        return CycleReport(
            p_plus=0.5, kernel=kernel, W=0.0, Qc=0.0, Qh=0.0,
            dSm=0.0, mutual_info=0.0, S_baths=0.0, sigma=0.0,
            sigma_cold=0.0, sigma_hot=0.0,
            cop=None, cop_carnot=cop_carnot, cop_ratio=None,
            regime=REGIME_NON_COOLER,
            cold_temperature=t_c, hot_temperature=t_h,
            include_unitary=spec.options.include_unitary,
            degenerate=True,
        )

    p_plus = steady_p_plus(kernel)
    p_minus = 1.0 - p_plus

    w = p_plus * (br.e_plus - br.e_fed_plus) + p_minus * (br.e_minus - br.e_fed_minus)
    qc = p_plus * (br.e_fed_plus - br.e_plus)
    qh = p_minus * (br.e_fed_minus - br.e_minus)

    ent_fed_plus = von_neumann_entropy(br.fed_plus)
    ent_fed_minus = von_neumann_entropy(br.fed_minus)
    ent_fed = p_plus * ent_fed_plus + p_minus * ent_fed_minus
    d_sm = -ent_fed
    # the post-measurement entropy term vanishes for rank-1 projective
    # measurement, but is computed, not assumed, so I = -dSm stays a check
    ent_post = p_plus * von_neumann_entropy(br.rho_plus) + p_minus * von_neumann_entropy(br.rho_minus)
    mutual_info = ent_fed - ent_post

    s_baths = -qh / t_h - qc / t_c
    sigma = mutual_info + s_baths
    sigma_cold = p_plus * (ent_fed_plus - (br.e_fed_plus - br.e_plus) / t_c)
    sigma_hot = p_minus * (ent_fed_minus - (br.e_fed_minus - br.e_minus) / t_h)

    cop, regime = _classify(w, qc, spec.hamiltonian.omega)
    cop_ratio = None if cop is None else cop / cop_carnot

    return CycleReport(
        p_plus=p_plus, kernel=kernel, W=w, Qc=qc, Qh=qh,
        dSm=d_sm, mutual_info=mutual_info, S_baths=s_baths, sigma=sigma,
        sigma_cold=sigma_cold, sigma_hot=sigma_hot,
        cop=cop, cop_carnot=cop_carnot, cop_ratio=cop_ratio, regime=regime,
        cold_temperature=t_c, hot_temperature=t_h,
        include_unitary=spec.options.include_unitary,
    )


def cop_bound_check(report: CycleReport) -> CopBound:
    """Information-corrected COP bound: eps/eps_C <= 1 + T_h I / W.

    Only meaningful for measurement-driven operation (W > 0); otherwise an
    inapplicable result is returned rather than an error.
    """
    if not (report.W > 0.0):
        return CopBound(lhs=math.nan, rhs=math.nan, holds=True, applicable=False)
    lhs = (report.Qc / report.W) / (report.cold_temperature /
                                    (report.hot_temperature - report.cold_temperature))
    rhs = 1.0 + report.hot_temperature * report.mutual_info / report.W
    return CopBound(lhs=lhs, rhs=rhs, holds=lhs <= rhs + 1e-10, applicable=True)


def equilibrium_heat_ratio(spec: CycleSpec) -> EquilibriumHeatRatio:
    """Closed form of -Qc/Qh in the full-thermalisation limit.

    Evaluated symbolically from the bath occupations and the colatitude
    (contact times are ignored: both strokes are taken to reach their Gibbs
    states).  Also reports whether the ratio meets the bath-entropy bound
    ratio >= T_c/T_h, the condition for cooling beyond the Carnot COP.
    A vanishing denominator yields a signed infinity with a flag.
    """
    omega = spec.hamiltonian.omega
    n_c = spec.cold.occupation(omega)
    n_h = spec.hot.occupation(omega)
    half = 0.5 * spec.basis.theta
    sin2 = math.sin(half) ** 2
    cos2 = math.cos(half) ** 2
    cos_t = math.cos(spec.basis.theta)
    num = spec.hot.coupling * (n_h + sin2) * (cos2 + n_c * cos_t)
    den = spec.cold.coupling * (n_c + cos2) * (-sin2 + n_h * cos_t)
    if den == 0.0:
        ratio = math.inf if num >= 0.0 else -math.inf
        return EquilibriumHeatRatio(ratio=ratio, meets_clausius_bound=True, degenerate=True)
    ratio = num / den
    bound = spec.cold.temperature / spec.hot.temperature
    return EquilibriumHeatRatio(ratio=ratio, meets_clausius_bound=ratio >= bound, degenerate=False)


def iterate_limit_cycle(spec: CycleSpec, rho0: DensityMatrix, n_cycles: int) -> list[LimitCycleStep]:
    """Exact limit-cycle iteration of the outcome distribution (no sampling).

    Cycle 1 measures rho0; afterwards the label distribution propagates
    through the kernel, p(m+1) = q[+|+] p(m) + q[+|-] (1 - p(m)), so the
    deviation from the stationary point shrinks by exactly
    (q[+|+] - q[+|-]) each cycle.  Each step also carries the unselected
    post-feedback state p rho~_+ + (1-p) rho~_-.
    """
    if n_cycles < 1:
        raise ValidationError(f"n_cycles must be >= 1, got {n_cycles}")
    br = _branches(spec)
    kernel = _kernel_from_branches(spec, br)
    proj_p, _ = projectors(spec.basis)
    p = min(max(float(np.real(np.trace(proj_p @ rho0.mat))), 0.0), 1.0)
    steps = []
    for _ in range(n_cycles):
        state = DensityMatrix(p * br.fed_plus.mat + (1.0 - p) * br.fed_minus.mat)
        steps.append(LimitCycleStep(distribution=(p, 1.0 - p), state=state))
        p = kernel.q_pp * p + kernel.q_pm * (1.0 - p)
    return steps


def monte_carlo_oracle(spec: CycleSpec, n_samples: int, seed: int) -> MonteCarloEstimate:
    """Stochastic cross-check: sample outcome labels and average per-cycle
    work and heats.

    The chain starts in '+', burns in for 100 cycles, then accumulates
    n_samples cycles.  Per-cycle contributions depend only on the label
    (the state algebra is the same as in :func:`cycle_report`), so the
    estimates reduce to the '+'-label count, which the compiled kernel
    delivers.
    """
    if n_samples < 1:
        raise ValidationError(f"n_samples must be >= 1, got {n_samples}")
    br = _branches(spec)
    kernel = _kernel_from_branches(spec, br)

    rng = np.random.default_rng(seed)
    uniforms = rng.random(MONTE_CARLO_BURN_IN + n_samples)
    n_plus = int(chain.count_plus_labels(kernel.q_pp, kernel.q_pm, uniforms, MONTE_CARLO_BURN_IN))

    p_hat = n_plus / n_samples
    w_plus = br.e_plus - br.e_fed_plus
    w_minus = br.e_minus - br.e_fed_minus
    qc_plus = br.e_fed_plus - br.e_plus
    qh_minus = br.e_fed_minus - br.e_minus

    r = kernel.q_pp - kernel.q_pm
    if 1.0 - r > 1e-12:
        autocorr = (1.0 + r) / (1.0 - r)
        se_p = math.sqrt(max(p_hat * (1.0 - p_hat), 0.0) * autocorr / n_samples)
    else:
        se_p = math.inf

    return MonteCarloEstimate(
        p_plus=p_hat,
        W=p_hat * w_plus + (1.0 - p_hat) * w_minus,
        Qc=p_hat * qc_plus,
        Qh=(1.0 - p_hat) * qh_minus,
        se_p_plus=se_p,
        se_W=abs(w_plus - w_minus) * se_p,
        se_Qc=abs(qc_plus) * se_p,
        se_Qh=abs(qh_minus) * se_p,
        n_samples=n_samples,
        n_plus=n_plus,
        seed=seed,
        burn_in=MONTE_CARLO_BURN_IN,
    )


def with_parameter(spec: CycleSpec, name: str, value: float) -> CycleSpec:
    """A copy of spec with one scalar parameter replaced.

    Accepted names: theta, phi, tau_c, tau_h, gamma_c, gamma_h, omega,
    T_c, T_h.  Used by the sweep driver; validation errors propagate.
    """
    if name == "theta":
        return replace(spec, basis=MeasurementBasis(value, spec.basis.phi))
    if name == "phi":
        return replace(spec, basis=MeasurementBasis(spec.basis.theta, value))
    if name == "omega":
        return replace(spec, hamiltonian=Hamiltonian(value))
    if name == "tau_c":
        return replace(spec, cold=replace(spec.cold, contact_time=value))
    if name == "tau_h":
        return replace(spec, hot=replace(spec.hot, contact_time=value))
    if name == "gamma_c":
        return replace(spec, cold=replace(spec.cold, coupling=value))
    if name == "gamma_h":
        return replace(spec, hot=replace(spec.hot, coupling=value))
    if name == "T_c":
        return replace(spec, cold=replace(spec.cold, temperature=value))
    if name == "T_h":
        return replace(spec, hot=replace(spec.hot, temperature=value))
    raise ValidationError(f"unknown parameter {name!r}")
