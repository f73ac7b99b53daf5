import math
from dataclasses import dataclass, replace

import numpy as np
import pytest

from qmc import (
    BathSpec,
    CycleSpec,
    DegenerateKernelError,
    DensityMatrix,
    Hamiltonian,
    MeasurementBasis,
    TransitionKernel,
    ValidationError,
    cop_bound_check,
    cycle_report,
    equilibrium_heat_ratio,
    iterate_limit_cycle,
    monte_carlo_oracle,
    planck_occupation,
    projectors,
    steady_p_plus,
    transition_kernel,
    with_parameter,
)
from qmc.cycle import REGIME_NON_COOLER, REGIME_PURE_INFORMATION

from support import (
    REF_OMEGA,
    equilibrium_spec,
    random_bloch_state,
    random_cycle_spec,
    reference_spec,
)

# equilibrium kernel entries at theta = pi with the reference baths,
# frozen from (1+n)/(1+2n) with n = 1/expm1(omega/T)
Q_PP_EQ_PI = 0.993307149075715
Q_PM_EQ_PI = 0.9241418199787564
P_PLUS_EQ_PI = 0.992809839240526


def equilibrium_q_plus(n: float, theta: float) -> float:
    """Long-contact closed form of q[+|.] for a bath with occupation n."""
    return ((1.0 + 2.0 * n) - math.cos(theta)) / (2.0 * (1.0 + 2.0 * n))


# -- transition kernel -------------------------------------------------------

def test_kernel_zero_contact_times_is_identity():
    k = transition_kernel(reference_spec(1.3, tau_c=0.0, tau_h=0.0))
    assert k.q_pp == 1.0 and k.q_mm == 1.0
    assert k.q_pm == 0.0 and k.q_mp == 0.0
    assert k.is_degenerate


def test_kernel_equilibrium_matches_closed_formulas():
    n_c = planck_occupation(0.1, REF_OMEGA)
    n_h = planck_occupation(0.2, REF_OMEGA)
    for theta in np.linspace(0.0, math.pi, 21):
        k = transition_kernel(equilibrium_spec(float(theta)))
        assert k.q_pp == pytest.approx(equilibrium_q_plus(n_c, theta), abs=1e-8)
        assert k.q_pm == pytest.approx(equilibrium_q_plus(n_h, theta), abs=1e-8)


def test_kernel_equilibrium_frozen_at_theta_pi():
    k = transition_kernel(equilibrium_spec(math.pi))
    assert k.q_pp == pytest.approx(Q_PP_EQ_PI, abs=1e-12)
    assert k.q_pm == pytest.approx(Q_PM_EQ_PI, abs=1e-12)


def test_kernel_columns_stochastic(rng):
    for _ in range(50):
        k = transition_kernel(random_cycle_spec(rng))
        assert abs(k.q_pp + k.q_mp - 1.0) <= 1e-12
        assert abs(k.q_pm + k.q_mm - 1.0) <= 1e-12
        for q in (k.q_pp, k.q_pm, k.q_mp, k.q_mm):
            assert 0.0 <= q <= 1.0


def test_kernel_validation():
    with pytest.raises(ValidationError):
        TransitionKernel(q_pp=0.9, q_pm=0.5, q_mp=0.2, q_mm=0.5)
    with pytest.raises(ValidationError):
        TransitionKernel(q_pp=1.5, q_pm=0.5, q_mp=-0.5, q_mm=0.5)


# -- stationary distribution --------------------------------------------------

def test_steady_rank_one_kernel():
    for c in (0.1, 0.5, 0.93):
        k = TransitionKernel(q_pp=c, q_pm=c, q_mp=1 - c, q_mm=1 - c)
        assert steady_p_plus(k) == pytest.approx(c, abs=1e-15)


def test_steady_frozen_equilibrium_value():
    k = TransitionKernel(
        q_pp=Q_PP_EQ_PI, q_pm=Q_PM_EQ_PI,
        q_mp=1.0 - Q_PP_EQ_PI, q_mm=1.0 - Q_PM_EQ_PI,
    )
    assert steady_p_plus(k) == pytest.approx(P_PLUS_EQ_PI, abs=1e-12)


def test_steady_degenerate_kernel_raises():
    identity = TransitionKernel(q_pp=1.0, q_pm=0.0, q_mp=0.0, q_mm=1.0)
    with pytest.raises(DegenerateKernelError):
        steady_p_plus(identity)


def test_steady_is_fixed_point_and_matches_power_iteration(rng):
    from qmc.chain import power_iterate

    checked = 0
    while checked < 100:
        q_pp = rng.uniform(0.0, 1.0)
        q_pm = rng.uniform(0.0, 1.0)
        if abs(q_pp - q_pm) > 0.99:  # power iteration needs 1e4 steps to bite
            continue
        k = TransitionKernel(q_pp=q_pp, q_pm=q_pm, q_mp=1 - q_pp, q_mm=1 - q_pm)
        p = steady_p_plus(k)
        assert abs(p - (k.q_pp * p + k.q_pm * (1.0 - p))) <= 1e-12
        assert abs(p - power_iterate(q_pp, q_pm, 1.0, 10_000)) <= 1e-10
        checked += 1


# -- cycle report --------------------------------------------------------------

def test_report_pure_information_point():
    rep = cycle_report(equilibrium_spec(math.pi))
    assert abs(rep.W) <= 1e-12 * REF_OMEGA
    assert rep.Qc > 0.0
    assert rep.Qc / rep.Qh == pytest.approx(-1.0, abs=1e-10)
    assert rep.regime == REGIME_PURE_INFORMATION
    assert rep.cop == math.inf and rep.cop_ratio == math.inf


def test_report_null_cycle():
    rep = cycle_report(reference_spec(1.0, tau_c=0.0, tau_h=0.0))
    assert rep.degenerate
    assert rep.W == 0.0 and rep.Qc == 0.0 and rep.Qh == 0.0
    assert rep.mutual_info == 0.0 and rep.sigma == 0.0
    assert rep.cop is None
    assert rep.regime == REGIME_NON_COOLER


def test_report_against_monte_carlo_oracle():
    # reference point of the tau_c sweep, at tau_c = 0.5
    spec = reference_spec(0.98 * math.pi, tau_c=0.5)
    rep = cycle_report(spec)
    mc = monte_carlo_oracle(spec, n_samples=1_000_000, seed=99)
    # agreement to ~3 significant figures, within 5 standard errors
    for name in ("p_plus", "W", "Qc", "Qh"):
        est = getattr(mc, name)
        exact = getattr(rep, name)
        se = getattr(mc, f"se_{name}")
        assert abs(est - exact) <= 5.0 * se, name


def test_report_first_and_second_laws_randomized(rng):
    for _ in range(200):
        rep = cycle_report(random_cycle_spec(rng))
        scale = max(1.0, abs(rep.W), abs(rep.Qc), abs(rep.Qh))
        assert abs(rep.W + rep.Qc + rep.Qh) <= 1e-12 * scale
        assert rep.sigma >= -1e-10
        assert rep.sigma == pytest.approx(rep.mutual_info + rep.S_baths, abs=1e-12)
        # per-branch entropy productions are individually non-negative
        assert rep.sigma_cold >= -1e-10
        assert rep.sigma_hot >= -1e-10
        assert rep.sigma_cold + rep.sigma_hot == pytest.approx(rep.sigma, abs=1e-12)
        # information identity for projective measurement
        assert rep.mutual_info == pytest.approx(-rep.dSm, abs=1e-12)


def test_report_sign_structure_at_poles():
    # theta = 0 prepares |e> before the cold contact: the cold bath is heated
    rep0 = cycle_report(reference_spec(0.0))
    assert rep0.Qc <= 0.0
    # theta = pi prepares |g> before the cold contact: heat is extracted
    rep_pi = cycle_report(reference_spec(math.pi))
    assert rep_pi.Qc >= 0.0


# -- COP bound ------------------------------------------------------------------

def test_cop_bound_reduces_to_carnot_without_information():
    rep = cycle_report(reference_spec(2.9, tau_c=2.0))
    assert rep.W > 0.0
    zero_info = replace(rep, mutual_info=0.0)
    bound = cop_bound_check(zero_info)
    assert bound.applicable
    assert bound.rhs == 1.0


def test_cop_bound_not_applicable_without_work_input():
    rep = cycle_report(reference_spec(1.0, tau_c=0.0, tau_h=0.0))
    assert not cop_bound_check(rep).applicable


def test_cop_bound_holds_on_theta_grid():
    for theta in np.linspace(0.01, math.pi - 0.01, 50):
        rep = cycle_report(reference_spec(float(theta)))
        bound = cop_bound_check(rep)
        if bound.applicable:
            assert bound.holds


# -- equilibrium heat ratio -------------------------------------------------------

def test_heat_ratio_is_one_at_theta_pi_equal_couplings():
    eq = equilibrium_heat_ratio(reference_spec(math.pi))
    assert eq.ratio == pytest.approx(1.0, abs=1e-12)
    assert eq.meets_clausius_bound  # 1 >= T_c/T_h


def test_heat_ratio_frozen_value():
    eq = equilibrium_heat_ratio(reference_spec(0.98 * math.pi))
    assert eq.ratio == pytest.approx(0.7444471728511474, rel=1e-12)
    assert eq.meets_clausius_bound


def test_heat_ratio_matches_long_contact_engine(rng):
    for _ in range(20):
        theta = rng.uniform(0.05, math.pi)
        spec = equilibrium_spec(theta)
        rep = cycle_report(spec)
        eq = equilibrium_heat_ratio(spec)
        if rep.Qh == 0.0 or eq.degenerate:
            continue
        assert -rep.Qc / rep.Qh == pytest.approx(eq.ratio, rel=1e-6)


def test_heat_ratio_signed_infinity_on_vanishing_denominator():
    @dataclass(frozen=True, eq=False)
    class PinnedBath(BathSpec):
        pinned_occupation: float = 0.1

        def occupation(self, omega):
            return self.pinned_occupation

    theta = math.pi / 3.0
    sin2 = math.sin(theta / 2.0) ** 2
    cos_t = math.cos(theta)
    # search the few floats around sin2/cos_t for an exactly vanishing term
    n_h = sin2 / cos_t
    for _ in range(8):
        if -sin2 + n_h * cos_t == 0.0:
            break
        n_h = math.nextafter(n_h, 2.0 if -sin2 + n_h * cos_t < 0.0 else 0.0)
    else:
        pytest.skip("no float hits the pole exactly on this platform")
    spec = CycleSpec(
        hamiltonian=Hamiltonian(0.5),
        basis=MeasurementBasis(theta, 0.0),
        cold=PinnedBath(0.1, 0.01, 1.0, pinned_occupation=0.01),
        hot=PinnedBath(0.2, 0.01, 1.0, pinned_occupation=n_h),
    )
    eq = equilibrium_heat_ratio(spec)
    assert eq.degenerate
    assert math.isinf(eq.ratio)


# -- limit cycle -------------------------------------------------------------------

def test_limit_cycle_identity_kernel_keeps_distribution():
    spec = reference_spec(1.2, tau_c=0.0, tau_h=0.0)
    rho0 = DensityMatrix(projectors(spec.basis)[0])
    steps = iterate_limit_cycle(spec, rho0, 10)
    for step in steps:
        assert step.distribution[0] == pytest.approx(1.0, abs=1e-12)


def test_limit_cycle_rank_one_kernel_converges_in_one_cycle():
    # q[+|+] = q[+|-] makes outcomes i.i.d.: the distribution is stationary
    # from the second cycle onward
    k = TransitionKernel(q_pp=0.3, q_pm=0.3, q_mp=0.7, q_mm=0.7)
    p = 0.9
    nxt = k.q_pp * p + k.q_pm * (1.0 - p)
    assert nxt == steady_p_plus(k)


def test_limit_cycle_geometric_convergence(rng):
    spec = reference_spec(0.98 * math.pi, tau_c=0.5)
    kernel = transition_kernel(spec)
    p_inf = steady_p_plus(kernel)
    r = kernel.contraction_ratio
    for _ in range(5):
        rho0 = random_bloch_state(rng)
        steps = iterate_limit_cycle(spec, rho0, 200)
        dev0 = abs(steps[0].distribution[0] - p_inf)
        for m, step in enumerate(steps):
            predicted = dev0 * r**m
            assert abs(abs(step.distribution[0] - p_inf) - predicted) <= 1e-10


def test_limit_cycle_states_are_valid_and_input_checked(rng):
    spec = reference_spec(2.0)
    steps = iterate_limit_cycle(spec, random_bloch_state(rng), 5)
    assert len(steps) == 5
    for step in steps:
        assert abs(np.trace(step.state.mat) - 1.0) <= 1e-12
    with pytest.raises(ValidationError):
        iterate_limit_cycle(spec, DensityMatrix.maximally_mixed(), 0)


# -- Monte-Carlo oracle ---------------------------------------------------------------

def test_monte_carlo_identity_kernel_zero_heats():
    spec = reference_spec(1.0, tau_c=0.0, tau_h=0.0)
    mc = monte_carlo_oracle(spec, n_samples=1000, seed=5)
    assert mc.W == 0.0 and mc.Qc == 0.0 and mc.Qh == 0.0
    assert mc.p_plus == 1.0  # chain starts in '+' and never leaves


def test_monte_carlo_matches_equilibrium_steady_probability():
    mc = monte_carlo_oracle(equilibrium_spec(math.pi), n_samples=1_000_000, seed=7)
    assert abs(mc.p_plus - P_PLUS_EQ_PI) <= 5.0 * mc.se_p_plus


def test_monte_carlo_seed_reproducibility_and_independence():
    spec = reference_spec(0.98 * math.pi, tau_c=0.5)
    a = monte_carlo_oracle(spec, n_samples=200_000, seed=11)
    b = monte_carlo_oracle(spec, n_samples=200_000, seed=11)
    assert (a.n_plus, a.p_plus, a.W, a.Qc, a.Qh) == (b.n_plus, b.p_plus, b.W, b.Qc, b.Qh)
    c = monte_carlo_oracle(spec, n_samples=200_000, seed=12)
    for name in ("p_plus", "W", "Qc", "Qh"):
        se = getattr(a, f"se_{name}") + getattr(c, f"se_{name}")
        assert abs(getattr(a, name) - getattr(c, name)) <= 5.0 * se


def test_monte_carlo_rejects_bad_sample_count():
    with pytest.raises(ValidationError):
        monte_carlo_oracle(reference_spec(1.0), n_samples=0, seed=1)


# -- spec plumbing -----------------------------------------------------------------------

def test_cycle_spec_rejects_non_refrigeration_temperatures():
    with pytest.raises(ValidationError):
        CycleSpec(
            hamiltonian=Hamiltonian(0.5),
            basis=MeasurementBasis(1.0, 0.0),
            cold=BathSpec(0.2, 0.01, 1.0),
            hot=BathSpec(0.2, 0.01, 1.0),
        )


def test_with_parameter_covers_every_axis():
    spec = reference_spec(1.0)
    assert with_parameter(spec, "theta", 2.0).basis.theta == 2.0
    assert with_parameter(spec, "phi", 1.0).basis.phi == 1.0
    assert with_parameter(spec, "omega", 0.7).hamiltonian.omega == 0.7
    assert with_parameter(spec, "tau_c", 3.0).cold.contact_time == 3.0
    assert with_parameter(spec, "tau_h", 3.0).hot.contact_time == 3.0
    assert with_parameter(spec, "gamma_c", 0.1).cold.coupling == 0.1
    assert with_parameter(spec, "gamma_h", 0.1).hot.coupling == 0.1
    assert with_parameter(spec, "T_c", 0.15).cold.temperature == 0.15
    assert with_parameter(spec, "T_h", 0.5).hot.temperature == 0.5
    with pytest.raises(ValidationError):
        with_parameter(spec, "tau_x", 1.0)
