"""Shared oracles and random-instance builders for the test suite.

Everything here is deliberately independent of the library's vectorized
code paths: received signals are summed term by term, gradients come
from central finite differences, and brute-force searches enumerate.
"""

import numpy as np

from risbeam import (
    Carrier,
    Direction,
    LinkBudget,
    PlaneWaveSource,
    build_quadratic_form,
    build_upa,
    incidence_matrix,
    rank_one_factor,
    source_amplitudes,
    steering_vector,
)

CARRIER = Carrier(5.8e9)


def random_direction(rng, theta_max=90.0):
    return Direction(float(rng.uniform(0.0, theta_max)), float(rng.uniform(-180.0, 180.0)))


def random_instance(rng, n_rows=(1, 11), n_cols=(1, 17), m_max=1, spacing=0.025):
    """A random geometry/sources/departure instance with its quadratic form."""
    rows = int(rng.integers(*n_rows))
    cols = int(rng.integers(*n_cols))
    if rows * cols < 2:
        cols = 2
    geom = build_upa(rows, cols, spacing)
    m = int(rng.integers(1, m_max + 1))
    sources = []
    for _ in range(m):
        amp = complex(rng.normal(), rng.normal())
        if abs(amp) < 1e-3:
            amp = 1.0 + 0.0j
        sources.append(PlaneWaveSource(random_direction(rng), amp))
    departure = random_direction(rng)
    link = LinkBudget(float(rng.uniform(0.2, 2.0)))
    a = steering_vector(geom, departure, CARRIER)
    b = incidence_matrix(geom, sources, CARRIER)
    x = source_amplitudes(sources)
    return {
        "geom": geom,
        "sources": sources,
        "departure": departure,
        "link": link,
        "a": a,
        "b": b,
        "x": x,
        "quadratic": build_quadratic_form(a, b, x, link),
        "factor": rank_one_factor(a, b, x, link),
    }


def random_manifold_point(rng, n):
    return np.exp(1j * rng.uniform(-np.pi, np.pi, size=n))


def received_signal_oracle(w, a, b, x, link=LinkBudget()):
    """Term-by-term summation of eta * sum_i a_i w_i sum_m B_im x_m."""
    total = 0.0 + 0.0j
    for i in range(len(w)):
        incident = 0.0 + 0.0j
        for m in range(len(x)):
            incident += b[i, m] * x[m]
        total += a[i] * w[i] * incident
    return link.attenuation * total


def quadratic_value_oracle(w, quadratic_form):
    """Loop-based w^H R w."""
    total = 0.0 + 0.0j
    n = len(w)
    for i in range(n):
        for j in range(n):
            total += np.conj(w[i]) * quadratic_form[i, j] * w[j]
    return total


def fd_gradient(quadratic_form, w, step=1e-6):
    """Central finite differences of f(w) = -w^H R w over R^2N coordinates."""

    def f(vec):
        return -float(np.real(np.conj(vec) @ quadratic_form @ vec))

    n = len(w)
    grad = np.zeros(n, dtype=complex)
    for i in range(n):
        delta = np.zeros(n, dtype=complex)
        delta[i] = step
        d_re = (f(w + delta) - f(w - delta)) / (2.0 * step)
        delta[i] = 1j * step
        d_im = (f(w + delta) - f(w - delta)) / (2.0 * step)
        grad[i] = d_re + 1j * d_im
    return grad


def brute_force_1bit(factor, states):
    """Exhaustive 2^N search of |v^H w|^2 over the two hardware states."""
    n = len(factor)
    patterns = (np.arange(2**n)[:, None] >> np.arange(n)[None, :]) & 1
    profiles = states.reflection(patterns)
    powers = np.abs(profiles @ np.conj(factor)) ** 2
    best = int(np.argmax(powers))
    return float(powers[best]), patterns[best]
