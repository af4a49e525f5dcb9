"""Board geometry: uniform planar arrays, board tiling, and direction math.

Conventions used throughout the package:

* theta is the elevation angle measured from the board normal (+z),
  phi the azimuth measured from +x in the board plane, both in degrees
  at every public interface.
* A single board lies in the z = 0 plane, centered at the origin, with
  columns running along +x and rows along +y.
* Elements are ordered row-major (row index varies slowest); this
  ordering is part of the codebook export contract.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

SPEED_OF_LIGHT = 299_792_458.0
"""Vacuum speed of light in m/s."""


def _wrap_degrees(angle: float) -> float:
    """Wrap an angle in degrees to [-180, 180), lower-inclusive."""
    return (angle + 180.0) % 360.0 - 180.0


@dataclass(frozen=True)
class Direction:
    """A propagation direction as (elevation, azimuth) in degrees.

    Angles are normalized on construction: theta is folded into [0, 180]
    (folding past the pole flips the azimuth by 180 degrees) and phi is
    wrapped to [-180, 180).
    """

    theta_deg: float
    phi_deg: float = 0.0

    def __post_init__(self):
        theta = float(self.theta_deg) % 360.0
        phi = float(self.phi_deg)
        if theta > 180.0:
            theta = 360.0 - theta
            phi += 180.0
        object.__setattr__(self, "theta_deg", theta)
        object.__setattr__(self, "phi_deg", _wrap_degrees(phi))


def direction_vector(direction: Direction) -> np.ndarray:
    """Unit vector [sin(t)cos(p), sin(t)sin(p), cos(t)] for a direction.

    Broadside (theta = 0) maps to +z regardless of phi.
    """
    theta = np.deg2rad(direction.theta_deg)
    phi = np.deg2rad(direction.phi_deg)
    return np.array(
        [
            np.sin(theta) * np.cos(phi),
            np.sin(theta) * np.sin(phi),
            np.cos(theta),
        ]
    )


def direction_from_vector(u) -> Direction:
    """Inverse of :func:`direction_vector` up to normalization of ``u``."""
    u = np.asarray(u, dtype=float)
    norm = np.linalg.norm(u)
    if norm == 0.0:
        raise ValueError("cannot derive a direction from the zero vector")
    u = u / norm
    theta = np.degrees(np.arccos(np.clip(u[2], -1.0, 1.0)))
    phi = np.degrees(np.arctan2(u[1], u[0]))
    return Direction(theta, phi)


@dataclass(frozen=True)
class Carrier:
    """Carrier frequency with derived wavelength and wavenumber."""

    frequency_hz: float

    def __post_init__(self):
        if not self.frequency_hz > 0:
            raise ValueError("carrier frequency must be positive")

    @property
    def wavelength_m(self) -> float:
        return SPEED_OF_LIGHT / self.frequency_hz

    @property
    def wavenumber(self) -> float:
        """k0 = 2*pi/lambda in rad/m."""
        return 2.0 * np.pi / self.wavelength_m


@dataclass(frozen=True)
class ArrayGeometry:
    """Element positions of one or more tiled boards, in meters.

    ``positions`` has shape (N, 3) with N = rows * cols * boards and is
    made read-only on construction.  ``rows``/``cols`` describe a single
    board; tiled copies are appended board after board, each board
    row-major internally.
    """

    positions: np.ndarray
    rows: int
    cols: int
    spacing_m: float
    boards: int = 1

    def __post_init__(self):
        pos = np.array(self.positions, dtype=float)
        if pos.ndim != 2 or pos.shape[1] != 3:
            raise ValueError("positions must have shape (N, 3)")
        expected = self.rows * self.cols * self.boards
        if pos.shape[0] != expected:
            raise ValueError(
                f"got {pos.shape[0]} positions, expected rows*cols*boards = {expected}"
            )
        if _min_pairwise_distance(pos) <= 0.0:
            raise ValueError("element positions must be pairwise distinct")
        pos.setflags(write=False)
        object.__setattr__(self, "positions", pos)

    @property
    def n_elements(self) -> int:
        return self.positions.shape[0]

    @property
    def aperture_m(self) -> float:
        """Largest distance between any two elements (aperture diameter)."""
        span = self.positions.max(axis=0) - self.positions.min(axis=0)
        return float(np.linalg.norm(span))


def _min_pairwise_distance(positions: np.ndarray) -> float:
    if positions.shape[0] < 2:
        return np.inf
    diff = positions[:, None, :] - positions[None, :, :]
    dist = np.linalg.norm(diff, axis=-1)
    np.fill_diagonal(dist, np.inf)
    return float(dist.min())


def build_upa(rows: int, cols: int, spacing_m: float) -> ArrayGeometry:
    """Uniform planar array in the z = 0 plane, centroid at the origin.

    Element i = r*cols + c sits at
    x = (c - (cols-1)/2)*spacing, y = (r - (rows-1)/2)*spacing, z = 0.
    """
    if rows < 1 or cols < 1:
        raise ValueError("rows and cols must be >= 1")
    if not spacing_m > 0:
        raise ValueError("spacing must be positive")
    r_idx, c_idx = np.meshgrid(np.arange(rows), np.arange(cols), indexing="ij")
    x = (c_idx.ravel() - (cols - 1) / 2.0) * spacing_m
    y = (r_idx.ravel() - (rows - 1) / 2.0) * spacing_m
    positions = np.column_stack([x, y, np.zeros(rows * cols)])
    return ArrayGeometry(positions, rows=rows, cols=cols, spacing_m=spacing_m)


def tile_boards(board: ArrayGeometry, offsets_m) -> ArrayGeometry:
    """Compose translated copies of one board into a single geometry.

    ``offsets_m`` lists the translation of every copy (a single zero
    offset reproduces the input board).  Copies are appended in offset
    order, each keeping the board's internal element ordering.  Raises
    if any two elements of the composition come closer than spacing/2.
    """
    offsets = np.atleast_2d(np.asarray(offsets_m, dtype=float))
    if offsets.shape[1] != 3:
        raise ValueError("each offset must be a 3-vector in meters")
    if offsets.shape[0] < 1:
        raise ValueError("at least one offset is required")
    tiles = [board.positions + off for off in offsets]
    positions = np.vstack(tiles)
    if _min_pairwise_distance(positions) < board.spacing_m / 2.0:
        raise ValueError("tiled boards overlap: elements closer than spacing/2")
    return ArrayGeometry(
        positions,
        rows=board.rows,
        cols=board.cols,
        spacing_m=board.spacing_m,
        boards=board.boards * offsets.shape[0],
    )
