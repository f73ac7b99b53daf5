import math

import numpy as np

from qmc import BathSpec, ChannelOptions, CycleSpec, DensityMatrix, Hamiltonian, MeasurementBasis

# Reference operating point shared by the sweep presets: omega = 0.5,
# T_h = 0.2, T_c = 0.1, gamma_h = gamma_c = 0.01, tau_h = 1, phi = pi/4.
REF_OMEGA = 0.5
REF_T_C = 0.1
REF_T_H = 0.2
REF_GAMMA = 0.01
REF_TAU_H = 1.0
REF_PHI = math.pi / 4.0


def reference_spec(theta, tau_c=0.5, phi=REF_PHI, tau_h=REF_TAU_H,
                   gamma_c=REF_GAMMA, gamma_h=REF_GAMMA, omega=REF_OMEGA,
                   include_unitary=True):
    return CycleSpec(
        hamiltonian=Hamiltonian(omega),
        basis=MeasurementBasis(theta, phi),
        cold=BathSpec(REF_T_C, gamma_c, tau_c),
        hot=BathSpec(REF_T_H, gamma_h, tau_h),
        options=ChannelOptions(include_unitary=include_unitary),
    )


def equilibrium_spec(theta, phi=REF_PHI, gamma_c=REF_GAMMA, gamma_h=REF_GAMMA,
                     rate_time_product=45.0):
    """Reference baths with contact times fixing Gamma_a tau_a >= 30.

    The product defaults to 45: the branch coherences decay as
    e^(-Gamma tau / 2), so 45 pushes their remnant below 2e-10 while
    staying in the stated long-contact regime.
    """
    omega = REF_OMEGA
    cold = BathSpec(REF_T_C, gamma_c, 1.0)
    hot = BathSpec(REF_T_H, gamma_h, 1.0)
    cold = BathSpec(REF_T_C, gamma_c, rate_time_product / cold.decay_rate(omega))
    hot = BathSpec(REF_T_H, gamma_h, rate_time_product / hot.decay_rate(omega))
    return CycleSpec(
        hamiltonian=Hamiltonian(omega),
        basis=MeasurementBasis(theta, phi),
        cold=cold,
        hot=hot,
    )


def random_bloch_state(rng) -> DensityMatrix:
    v = rng.normal(size=3)
    v /= np.linalg.norm(v)
    r = rng.uniform(0.0, 1.0) ** (1.0 / 3.0)
    return DensityMatrix.from_bloch(*(r * v))


def random_cycle_spec(rng, include_unitary=None) -> CycleSpec:
    theta = rng.uniform(0.0, math.pi)
    phi = rng.uniform(0.0, 2.0 * math.pi * (1.0 - 1e-12))
    omega = rng.uniform(0.1, 2.0)
    t_c = rng.uniform(0.05, 0.5)
    t_h = t_c * rng.uniform(1.2, 4.0)
    unitary = bool(rng.integers(0, 2)) if include_unitary is None else include_unitary
    return CycleSpec(
        hamiltonian=Hamiltonian(omega),
        basis=MeasurementBasis(theta, phi),
        cold=BathSpec(t_c, 10.0 ** rng.uniform(-3.0, -0.3), rng.uniform(0.05, 50.0)),
        hot=BathSpec(t_h, 10.0 ** rng.uniform(-3.0, -0.3), rng.uniform(0.05, 50.0)),
        options=ChannelOptions(include_unitary=unitary),
    )

