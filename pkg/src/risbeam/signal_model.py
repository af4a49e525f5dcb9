"""Far-field reflection model and the quadratic objective it induces.

A surface with elements at positions p_i reflects M incident plane waves
toward a departure direction.  With per-element reflection coefficients
w_i (unit modulus), the received complex envelope is

    y = eta * sum_i a_i * w_i * (B @ x)_i

where a_i = exp(j*2*pi*p_i.u_dep/lambda) is the departure steering
phase, B[i, m] = exp(j*2*pi*p_i.u_arr_m/lambda) collects the incident
steering phases, x holds the source amplitudes, and eta is a real link
attenuation applied to the field.

|y|^2 is the quadratic form w^H R w with the Hermitian rank-one matrix
R = v v^H, v = eta * conj(a * (B @ x)).  That identity makes received
power maximization a unit-modulus quadratic maximization, with the
closed-form optimum w_i = v_i/|v_i| and value (sum_i |v_i|)^2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import ArrayGeometry, Carrier, Direction, direction_vector

DB_FLOOR = -300.0
"""Lower clamp for dB conversions, avoids -inf on empty-field probes."""


@dataclass(frozen=True)
class PlaneWaveSource:
    """A far-field incident signal: arrival direction plus complex envelope."""

    direction: Direction
    amplitude: complex = 1.0 + 0.0j

    def __post_init__(self):
        if not abs(self.amplitude) > 0:
            raise ValueError("source amplitude must be nonzero")


@dataclass(frozen=True)
class LinkBudget:
    """Dimensionless field attenuation of one reflected path."""

    attenuation: float = 1.0

    def __post_init__(self):
        if self.attenuation < 0:
            raise ValueError("attenuation must be >= 0")


def steering_vector(
    geom: ArrayGeometry, direction: Direction, carrier: Carrier
) -> np.ndarray:
    """Per-element phases exp(j*2*pi*p_i.u/lambda) for one direction."""
    u = direction_vector(direction)
    return np.exp(2j * np.pi * (geom.positions @ u) / carrier.wavelength_m)


def incidence_matrix(geom: ArrayGeometry, sources, carrier: Carrier) -> np.ndarray:
    """N x M matrix of incident steering phases, one column per source."""
    if len(sources) < 1:
        raise ValueError("at least one source is required")
    cols = [steering_vector(geom, s.direction, carrier) for s in sources]
    return np.column_stack(cols)


def source_amplitudes(sources) -> np.ndarray:
    """Complex amplitude vector x of a source list."""
    return np.array([s.amplitude for s in sources], dtype=complex)


def received_signal(
    w: np.ndarray,
    departure: np.ndarray,
    incidence: np.ndarray,
    amplitudes: np.ndarray,
    link: LinkBudget = LinkBudget(),
) -> complex:
    """Received envelope y = eta * departure^T diag(w) (incidence @ amplitudes)."""
    w = np.asarray(w, dtype=complex)
    departure = np.asarray(departure, dtype=complex)
    incidence = np.atleast_2d(np.asarray(incidence, dtype=complex))
    amplitudes = np.atleast_1d(np.asarray(amplitudes, dtype=complex))
    n = w.shape[0]
    if departure.shape != (n,) or incidence.shape[0] != n:
        raise ValueError("profile, departure vector and incidence rows must agree")
    if incidence.shape[1] != amplitudes.shape[0]:
        raise ValueError("incidence columns must match the number of amplitudes")
    return complex(link.attenuation * np.sum(departure * w * (incidence @ amplitudes)))


def rank_one_factor(
    departure: np.ndarray,
    incidence: np.ndarray,
    amplitudes: np.ndarray,
    link: LinkBudget = LinkBudget(),
) -> np.ndarray:
    """Vector v with R = v v^H, i.e. v = eta * conj(departure * (B @ x))."""
    incident_field = np.atleast_2d(np.asarray(incidence, dtype=complex)) @ np.atleast_1d(
        np.asarray(amplitudes, dtype=complex)
    )
    return link.attenuation * np.conj(np.asarray(departure, dtype=complex) * incident_field)


def build_quadratic_form(
    departure: np.ndarray,
    incidence: np.ndarray,
    amplitudes: np.ndarray,
    link: LinkBudget = LinkBudget(),
) -> np.ndarray:
    """Hermitian PSD rank-one matrix R with w^H R w = |y|^2 for unit-modulus w."""
    v = rank_one_factor(departure, incidence, amplitudes, link)
    return np.outer(v, np.conj(v))


def objective(w: np.ndarray, quadratic_form: np.ndarray) -> float:
    """Received power w^H R w (real part; the form is Hermitian)."""
    w = np.asarray(w, dtype=complex)
    return float(np.real(np.conj(w) @ quadratic_form @ w))


def optimal_profile(v: np.ndarray) -> np.ndarray:
    """Closed-form maximizer w_i = v_i/|v_i| of w^H (v v^H) w on the manifold.

    Entries where v_i = 0 contribute nothing to the objective and are
    set to 1.
    """
    v = np.asarray(v, dtype=complex)
    mag = np.abs(v)
    w = np.ones_like(v)
    nz = mag > 0
    w[nz] = v[nz] / mag[nz]
    return w


def analytic_max(v: np.ndarray) -> float:
    """(sum_i |v_i|)^2, the manifold maximum of w^H (v v^H) w."""
    return float(np.sum(np.abs(v)) ** 2)


def power_db(power_linear: float, reference: float = 1.0) -> float:
    """10*log10(power/reference), clamped at DB_FLOOR."""
    if reference <= 0:
        raise ValueError("dB reference must be positive")
    ratio = power_linear / reference
    if ratio <= 0:
        return DB_FLOOR
    return float(max(10.0 * np.log10(ratio), DB_FLOOR))
