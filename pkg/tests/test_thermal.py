import math

import numpy as np
import pytest

from qmc import (
    BathSpec,
    ChannelOptions,
    DensityMatrix,
    DomainError,
    Hamiltonian,
    IntegrationError,
    ValidationError,
    eigvals_2x2,
    evolve,
    evolve_ode_oracle,
    kraus_apply,
    kraus_operators,
    planck_occupation,
)

from support import random_bloch_state

H_REF = Hamiltonian(0.5)
COLD = BathSpec(temperature=0.1, coupling=0.01, contact_time=0.5)
HOT = BathSpec(temperature=0.2, coupling=0.01, contact_time=1.0)


def random_bath(rng) -> BathSpec:
    return BathSpec(
        temperature=rng.uniform(0.05, 0.6),
        coupling=10.0 ** rng.uniform(-2.7, -0.3),
        contact_time=rng.uniform(0.0, 5.0),
    )


# -- Planck occupation -----------------------------------------------------

def test_occupation_frozen_values():
    assert planck_occupation(0.1, 0.5) == pytest.approx(0.006783654906304231, rel=1e-14)
    assert planck_occupation(0.2, 0.5) == pytest.approx(0.08942548983385201, rel=1e-14)


def test_occupation_zero_temperature_limit():
    assert planck_occupation(0.001, 0.5) < 1e-200


def test_occupation_domain_errors():
    with pytest.raises(DomainError):
        planck_occupation(0.0, 0.5)
    with pytest.raises(DomainError):
        planck_occupation(-0.1, 0.5)
    with pytest.raises(DomainError):
        planck_occupation(0.1, 0.0)


def test_bath_derived_quantities():
    n = COLD.occupation(0.5)
    assert n > 0.0
    assert COLD.decay_rate(0.5) == pytest.approx(0.01 * (2.0 * n + 1.0), rel=1e-15)
    assert COLD.decay_rate(0.5) > COLD.coupling
    gibbs = COLD.gibbs(0.5)
    assert gibbs.excited_population == pytest.approx(n / (2.0 * n + 1.0), rel=1e-14)


def test_bath_validation():
    with pytest.raises(ValidationError):
        BathSpec(temperature=0.0, coupling=0.01, contact_time=1.0)
    with pytest.raises(ValidationError):
        BathSpec(temperature=0.1, coupling=0.0, contact_time=1.0)
    with pytest.raises(ValidationError):
        BathSpec(temperature=0.1, coupling=0.01, contact_time=-1.0)
    with pytest.raises(ValidationError):
        ChannelOptions(integrator_step=0.0)


# -- closed-form propagator -------------------------------------------------

def test_evolve_zero_time_is_identity():
    rho = DensityMatrix.from_bloch(0.2, 0.3, -0.4)
    out = evolve(rho, COLD, H_REF, 0.0)
    assert out is rho  # bit-for-bit


def test_evolve_rejects_negative_time():
    with pytest.raises(DomainError):
        evolve(DensityMatrix.ground(), COLD, H_REF, -0.1)


def test_evolve_long_time_reaches_gibbs():
    gibbs = COLD.gibbs(H_REF.omega)
    out = evolve(DensityMatrix.from_bloch(0.5, -0.1, 0.2), COLD, H_REF, 1e7)
    assert np.max(np.abs(out.mat - gibbs.mat)) <= 1e-12


def test_evolve_frozen_cold_bath_example():
    # ground state, cold bath, t = 0.5
    out = evolve(DensityMatrix.ground(), COLD, H_REF, 0.5)
    n = planck_occupation(0.1, 0.5)
    p_inf = n / (2.0 * n + 1.0)
    gamma_tot = COLD.decay_rate(0.5)
    expected = p_inf * -math.expm1(-gamma_tot * 0.5)
    assert p_inf == pytest.approx(0.0066928509242848554, rel=1e-14)
    assert out.excited_population == pytest.approx(expected, rel=1e-12)
    assert out.excited_population == pytest.approx(3.383247339907483e-05, rel=1e-10)


def test_evolve_trace_and_positivity(rng):
    for _ in range(100):
        out = evolve(random_bloch_state(rng), random_bath(rng), H_REF, rng.uniform(0.0, 10.0))
        assert abs(np.trace(out.mat) - 1.0) <= 1e-12
        assert eigvals_2x2(out.mat)[1] >= -1e-12


def test_evolve_semigroup(rng):
    for _ in range(50):
        rho = random_bloch_state(rng)
        bath = random_bath(rng)
        t1, t2 = rng.uniform(0.0, 3.0, size=2)
        unitary = bool(rng.integers(0, 2))
        opts = ChannelOptions(include_unitary=unitary)
        two_step = evolve(evolve(rho, bath, H_REF, t1, opts), bath, H_REF, t2, opts)
        one_step = evolve(rho, bath, H_REF, t1 + t2, opts)
        assert np.max(np.abs(two_step.mat - one_step.mat)) <= 1e-10


def test_evolve_contracts_to_gibbs_monotonically(rng):
    for _ in range(20):
        rho = random_bloch_state(rng)
        bath = random_bath(rng)
        gibbs = bath.gibbs(H_REF.omega)

        def trace_distance(state):
            lam = eigvals_2x2(state.mat - gibbs.mat)
            return abs(lam[0]) + abs(lam[1])

        dists = [trace_distance(evolve(rho, bath, H_REF, t)) for t in np.linspace(0.0, 20.0, 40)]
        assert all(b <= a + 1e-12 for a, b in zip(dists, dists[1:]))


# -- ODE oracle ---------------------------------------------------------------

def test_ode_oracle_zero_time_unchanged():
    rho = DensityMatrix.from_bloch(0.1, 0.2, 0.3)
    assert evolve_ode_oracle(rho, COLD, H_REF, 0.0) is rho


def test_ode_oracle_gibbs_is_fixed_point():
    gibbs = HOT.gibbs(H_REF.omega)
    out = evolve_ode_oracle(gibbs, HOT, H_REF, 2.0)
    assert np.max(np.abs(out.mat - gibbs.mat)) <= 1e-10


def test_ode_oracle_matches_closed_form_frozen_example():
    closed = evolve(DensityMatrix.ground(), COLD, H_REF, 0.5)
    integrated = evolve_ode_oracle(DensityMatrix.ground(), COLD, H_REF, 0.5)
    assert np.max(np.abs(closed.mat - integrated.mat)) <= 1e-8


def test_ode_oracle_matches_closed_form_randomized(rng):
    for _ in range(40):
        rho = random_bloch_state(rng)
        bath = random_bath(rng)
        t = rng.uniform(0.05, 3.0)
        unitary = bool(rng.integers(0, 2))
        step = min(0.005, 0.01 / bath.decay_rate(H_REF.omega))
        opts = ChannelOptions(include_unitary=unitary, integrator_step=step)
        closed = evolve(rho, bath, H_REF, t, opts)
        integrated = evolve_ode_oracle(rho, bath, H_REF, t, opts)
        assert np.max(np.abs(closed.mat - integrated.mat)) <= 1e-8


def test_ode_oracle_rejects_unstable_step():
    opts = ChannelOptions(include_unitary=True, integrator_step=10.0)
    with pytest.raises(IntegrationError):
        evolve_ode_oracle(DensityMatrix.ground(), COLD, H_REF, 1.0, opts)


# -- Kraus representation -----------------------------------------------------

def test_kraus_completeness(rng):
    for _ in range(30):
        bath = random_bath(rng)
        t = rng.uniform(0.0, 5.0)
        ops = kraus_operators(bath, H_REF, t)
        total = sum(k.conj().T @ k for k in ops)
        assert np.max(np.abs(total - np.eye(2))) <= 1e-14


def test_kraus_zero_time_is_identity_channel():
    rho = DensityMatrix.from_bloch(0.3, 0.1, -0.5)
    out = kraus_apply(rho, COLD, H_REF, 0.0)
    assert np.max(np.abs(out.mat - rho.mat)) <= 1e-15


def test_kraus_long_time_reaches_gibbs():
    out = kraus_apply(DensityMatrix.excited(), HOT, H_REF, 1e7)
    assert np.max(np.abs(out.mat - HOT.gibbs(H_REF.omega).mat)) <= 1e-12


def test_kraus_matches_closed_form(rng):
    # includes the cold-bath reference point at t = 0.5
    rho = random_bloch_state(rng)
    assert np.max(np.abs(kraus_apply(rho, COLD, H_REF, 0.5).mat
                         - evolve(rho, COLD, H_REF, 0.5).mat)) <= 1e-10
    for _ in range(50):
        rho = random_bloch_state(rng)
        bath = random_bath(rng)
        t = rng.uniform(0.0, 5.0)
        unitary = bool(rng.integers(0, 2))
        opts = ChannelOptions(include_unitary=unitary)
        a = kraus_apply(rho, bath, H_REF, t, opts)
        b = evolve(rho, bath, H_REF, t, opts)
        assert np.max(np.abs(a.mat - b.mat)) <= 1e-10
