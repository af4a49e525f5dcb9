"""Phase compensation for feeds in the near field of the surface.

A feed antenna close to the board illuminates each element with a
spherical wave, so the incident field at element i carries a phase
delay of -k0*d_i, with d_i the feed-to-element distance.  The board
collimates a beam toward a departure direction by cancelling that delay
and adding a progressive phase:

    omega_i = k0*d_i - k0*(x_i*sin(t)cos(p) + y_i*sin(t)sin(p))

Under the spherical-wave model used here (unit element amplitudes by
default), this profile aligns every element contribution exactly, so
the array sum toward the commanded direction has magnitude N.

All returned phases are wrapped to [-pi, pi), lower-inclusive, so that
downstream 1-bit quantization is deterministic at interval boundaries.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import ArrayGeometry, Carrier, Direction, direction_vector


@dataclass(frozen=True)
class FeedAntenna:
    """Feed phase center, a 3-D point in meters."""

    position_m: np.ndarray

    def __post_init__(self):
        pos = np.array(self.position_m, dtype=float).reshape(3)
        pos.setflags(write=False)
        object.__setattr__(self, "position_m", pos)


def wrap_phase(phase: np.ndarray) -> np.ndarray:
    """Wrap radians to [-pi, pi), lower-inclusive (+pi maps to -pi)."""
    return (np.asarray(phase) + np.pi) % (2.0 * np.pi) - np.pi


def feed_distances(geom: ArrayGeometry, feed: FeedAntenna) -> np.ndarray:
    """Distances d_i from the feed phase center to every element."""
    d = np.linalg.norm(geom.positions - feed.position_m, axis=1)
    if np.any(d < 1e-12):
        raise ValueError("feed phase center coincides with an element position")
    return d


def spatial_delay_phase(
    geom: ArrayGeometry, feed: FeedAntenna, carrier: Carrier
) -> np.ndarray:
    """Per-element phase k0*d_i cancelling the feed's spherical delay, wrapped."""
    return wrap_phase(carrier.wavenumber * feed_distances(geom, feed))


def progressive_phase(
    geom: ArrayGeometry, departure: Direction, carrier: Carrier
) -> np.ndarray:
    """Beam-steering phase -k0*(x_i*u_x + y_i*u_y) toward a direction, wrapped.

    Uses the in-plane element coordinates; the geometry is expected in
    its own board frame (elements in the z = 0 plane).
    """
    u = direction_vector(departure)
    inplane = geom.positions[:, 0] * u[0] + geom.positions[:, 1] * u[1]
    return wrap_phase(-carrier.wavenumber * inplane)


def pcm_profile(
    geom: ArrayGeometry,
    feed: FeedAntenna,
    departure: Direction,
    carrier: Carrier,
) -> np.ndarray:
    """Unit-modulus profile compensating the feed delay and steering the beam."""
    omega = spatial_delay_phase(geom, feed, carrier) + progressive_phase(
        geom, departure, carrier
    )
    return np.exp(1j * wrap_phase(omega))


def focus_profile(
    geom: ArrayGeometry,
    feed: FeedAntenna,
    focal_point,
    carrier: Carrier,
) -> np.ndarray:
    """Profile focusing the reflected field onto a finite-distance point.

    Conjugate focusing: cancels the spherical delay of both the feed leg
    and the element-to-focal-point leg, so the focal point receives all
    element contributions in phase.
    """
    target = FeedAntenna(np.asarray(focal_point, dtype=float))
    omega = spatial_delay_phase(geom, feed, carrier) + spatial_delay_phase(
        geom, target, carrier
    )
    return np.exp(1j * wrap_phase(omega))


def nearfield_field(
    geom: ArrayGeometry,
    feed: FeedAntenna,
    w: np.ndarray,
    carrier: Carrier,
    *,
    direction: Direction | None = None,
    point=None,
    amplitude_taper: bool = False,
) -> complex:
    """Spherical-wave array sum under a profile, toward a direction or a point.

    Each element contributes exp(-j*k0*d_i) * w_i times the outgoing
    factor exp(+j*k0*p_i.u) for a far-field direction, or
    exp(-j*k0*r_i) for a finite probe point at distance r_i.  With
    ``amplitude_taper`` the contribution is divided by d_i (and by r_i
    for a probe point); by default all element amplitudes are 1.
    """
    if (direction is None) == (point is None):
        raise ValueError("specify exactly one of direction or point")
    k0 = carrier.wavenumber
    d = feed_distances(geom, feed)
    contrib = np.exp(-1j * k0 * d) * np.asarray(w, dtype=complex)
    if amplitude_taper:
        contrib = contrib / d
    if direction is not None:
        u = direction_vector(direction)
        contrib = contrib * np.exp(1j * k0 * (geom.positions @ u))
    else:
        probe = np.asarray(point, dtype=float).reshape(3)
        r = np.linalg.norm(geom.positions - probe, axis=1)
        if np.any(r < 1e-12):
            raise ValueError("probe point coincides with an element position")
        contrib = contrib * np.exp(-1j * k0 * r)
        if amplitude_taper:
            contrib = contrib / r
    return complex(np.sum(contrib))


def field_at_points(
    geom: ArrayGeometry,
    feed: FeedAntenna,
    w: np.ndarray,
    carrier: Carrier,
    points: np.ndarray,
    *,
    amplitude_taper: bool = False,
    chunk: int = 2048,
) -> np.ndarray:
    """Vectorized :func:`nearfield_field` over many probe points.

    ``points`` has shape (P, 3); the result has shape (P,).  Probes are
    evaluated in fixed order, independently of each other.
    """
    k0 = carrier.wavenumber
    d = feed_distances(geom, feed)
    element_term = np.exp(-1j * k0 * d) * np.asarray(w, dtype=complex)
    if amplitude_taper:
        element_term = element_term / d
    points = np.asarray(points, dtype=float).reshape(-1, 3)
    out = np.empty(points.shape[0], dtype=complex)
    for start in range(0, points.shape[0], chunk):
        block = points[start : start + chunk]
        r = np.linalg.norm(block[:, None, :] - geom.positions[None, :, :], axis=-1)
        if np.any(r < 1e-12):
            raise ValueError("probe point coincides with an element position")
        outgoing = np.exp(-1j * k0 * r)
        if amplitude_taper:
            outgoing = outgoing / r
        out[start : start + block.shape[0]] = outgoing @ element_term
    return out


def fraunhofer_distance(geom: ArrayGeometry, carrier: Carrier) -> float:
    """Conventional far-field boundary 2*D^2/lambda for aperture D."""
    return 2.0 * geom.aperture_m**2 / carrier.wavelength_m
