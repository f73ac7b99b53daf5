"""First stroke: projective measurement in an arbitrary Bloch-sphere basis.

The basis is parameterised by the colatitude theta (from the z axis, i.e.
from |e>) and the longitude phi:

    |psi_+> = cos(theta/2) |e> + e^{i phi} sin(theta/2) |g>
    |psi_-> = e^{-i phi} sin(theta/2) |e> - cos(theta/2) |g>

Downstream code works exclusively with the projectors, never with raw kets,
so global phase conventions cannot leak into any physical quantity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .qubit import DensityMatrix, Hamiltonian, energy_expectation

UNREACHABLE_PROBABILITY = 1e-15

LABEL_PLUS = "+"
LABEL_MINUS = "-"


@dataclass(frozen=True, eq=False)
class MeasurementBasis:
    """Measurement direction on the Bloch sphere.

    theta outside [0, pi] or phi outside [0, 2 pi) is rejected rather than
    wrapped: (theta, phi) already covers the sphere once, so out-of-range
    values are caller mistakes.
    """

    theta: float
    phi: float = 0.0

    def __post_init__(self):
        if not (0.0 <= self.theta <= math.pi):
            raise ValidationError(f"theta must lie in [0, pi], got {self.theta!r}")
        if not (0.0 <= self.phi < 2.0 * math.pi):
            raise ValidationError(f"phi must lie in [0, 2*pi), got {self.phi!r}")

    def ket_plus(self) -> np.ndarray:
        half = 0.5 * self.theta
        return np.array([math.cos(half), np.exp(1j * self.phi) * math.sin(half)])

    def ket_minus(self) -> np.ndarray:
        half = 0.5 * self.theta
        return np.array([np.exp(-1j * self.phi) * math.sin(half), -math.cos(half)])


@dataclass(frozen=True, eq=False)
class MeasurementOutcome:
    label: str                      # "+" or "-"
    probability: float
    post_state: DensityMatrix       # rank-1 projector onto the basis vector
    unreachable: bool = False       # probability at or below 1e-15


def projectors(basis: MeasurementBasis) -> tuple[np.ndarray, np.ndarray]:
    """The orthogonal projectors |psi_+><psi_+| and |psi_-><psi_-|."""
    kp = basis.ket_plus()
    km = basis.ket_minus()
    return np.outer(kp, kp.conj()), np.outer(km, km.conj())


def _born_probability(projector: np.ndarray, rho: DensityMatrix) -> float:
    p = float(np.real(np.trace(projector @ rho.mat)))
    return min(max(p, 0.0), 1.0)


def measure(rho0: DensityMatrix, basis: MeasurementBasis) -> tuple[MeasurementOutcome, MeasurementOutcome]:
    """Both outcomes of a selective projective measurement of rho0.

    The post-measurement state of outcome k is the projector itself (the
    measurement is rank-1), reported even for an unreachable outcome where
    it only ever enters averages with weight ~0.
    """
    proj_p, proj_m = projectors(basis)
    p_plus = _born_probability(proj_p, rho0)
    p_minus = _born_probability(proj_m, rho0)
    out_p = MeasurementOutcome(
        LABEL_PLUS, p_plus, DensityMatrix(proj_p), p_plus <= UNREACHABLE_PROBABILITY
    )
    out_m = MeasurementOutcome(
        LABEL_MINUS, p_minus, DensityMatrix(proj_m), p_minus <= UNREACHABLE_PROBABILITY
    )
    return out_p, out_m


def measurement_energy_jump(rho_pre: DensityMatrix, basis: MeasurementBasis, h: Hamiltonian) -> float:
    """Mean internal-energy change of one measurement act on rho_pre.

    sum_k p_k <psi_k|H|psi_k> - Tr(H rho_pre).  Vanishes when the basis is
    the energy eigenbasis (theta in {0, pi}) or when rho_pre is diagonal in
    the measurement basis.
    """
    outcomes = measure(rho_pre, basis)
    after = sum(o.probability * energy_expectation(o.post_state, h) for o in outcomes)
    return after - energy_expectation(rho_pre, h)
