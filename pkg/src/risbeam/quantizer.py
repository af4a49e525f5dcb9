"""1-bit quantization of phase profiles and codebook bit-matrix export.

The hardware realizes two reflection states.  With the default states
(-25 and 156 degrees), a continuous phase maps to state 0 on the
lower-inclusive interval [-115, 65) degrees and to state 1 on the
complement of [-180, 180); for custom state phases the state-0 interval
is [state0 - 90, state0 + 90) wrap-aware, which reduces to the same
boundaries at the defaults.

Bit matrices are row-major per board with bit 1 = state 1, and are
exported as a human-diffable text codebook or a JSON-ready dict.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import ArrayGeometry, Carrier


@dataclass(frozen=True)
class HardwareStates:
    """The two realizable element states: reflection phase and amplitude."""

    state0_phase_deg: float = -25.0
    state1_phase_deg: float = 156.0
    state0_amplitude: float = 1.0
    state1_amplitude: float = 1.0

    def __post_init__(self):
        for phase in (self.state0_phase_deg, self.state1_phase_deg):
            if not -180.0 <= phase < 180.0:
                raise ValueError("state phases must lie in [-180, 180) degrees")
        for amp in (self.state0_amplitude, self.state1_amplitude):
            if not 0.0 < amp <= 1.0:
                raise ValueError("state amplitudes must lie in (0, 1]")

    def reflection(self, bit) -> np.ndarray:
        """Complex reflection coefficient(s) for bit value(s) 0/1."""
        bit = np.asarray(bit)
        phase = np.where(bit == 1, self.state1_phase_deg, self.state0_phase_deg)
        amp = np.where(bit == 1, self.state1_amplitude, self.state0_amplitude)
        return amp * np.exp(1j * np.deg2rad(phase))


def wrap_degrees(angle):
    """Wrap degrees to [-180, 180), lower-inclusive."""
    return (np.asarray(angle, dtype=float) + 180.0) % 360.0 - 180.0


def _state_bits(omega_deg, states: HardwareStates) -> np.ndarray:
    omega = np.asarray(omega_deg, dtype=float)
    if np.any(omega < -180.0) or np.any(omega >= 180.0):
        raise ValueError("phases must be wrapped to [-180, 180) degrees")
    # Distance from state 0, folded to [-180, 180); state 0 wins on [-90, 90).
    offset = wrap_degrees(omega - states.state0_phase_deg)
    return ((offset < -90.0) | (offset >= 90.0)).astype(np.uint8)


def quantize_1bit(omega_deg, states: HardwareStates = HardwareStates()):
    """Map wrapped continuous phase(s) in degrees onto the two state phases.

    With the default states: -25 for -115 <= omega < 65, else 156.
    Boundaries are lower-inclusive.
    """
    bits = _state_bits(omega_deg, states)
    out = np.where(bits == 1, states.state1_phase_deg, states.state0_phase_deg)
    if np.isscalar(omega_deg):
        return float(out)
    return out


def quantize_profile(
    w: np.ndarray, states: HardwareStates = HardwareStates()
) -> np.ndarray:
    """Element-wise 1-bit quantization of a unit-modulus complex profile."""
    w = np.asarray(w, dtype=complex)
    omega = wrap_degrees(np.degrees(np.angle(w)))
    return states.reflection(_state_bits(omega, states))


def profile_bits(
    w: np.ndarray,
    states: HardwareStates = HardwareStates(),
    tol_deg: float = 1e-9,
) -> np.ndarray:
    """Bit vector of an already-quantized profile; rejects anything else."""
    w = np.asarray(w, dtype=complex)
    phase = wrap_degrees(np.degrees(np.angle(w)))
    d0 = np.abs(wrap_degrees(phase - states.state0_phase_deg))
    d1 = np.abs(wrap_degrees(phase - states.state1_phase_deg))
    bits = (d1 < d0).astype(np.uint8)
    err = np.where(bits == 1, d1, d0)
    if np.any(err > tol_deg):
        raise ValueError("profile is not quantized to the hardware state phases")
    amp = np.where(bits == 1, states.state1_amplitude, states.state0_amplitude)
    if np.any(np.abs(np.abs(w) - amp) > 1e-9):
        raise ValueError("profile amplitudes do not match the hardware states")
    return bits


def to_bit_matrix(
    w: np.ndarray,
    geom: ArrayGeometry,
    states: HardwareStates = HardwareStates(),
) -> np.ndarray:
    """(boards, rows, cols) bit array of a quantized profile, row-major."""
    w = np.asarray(w, dtype=complex)
    if w.shape[0] != geom.n_elements:
        raise ValueError("profile length does not match the geometry")
    bits = profile_bits(w, states)
    return bits.reshape(geom.boards, geom.rows, geom.cols)


def from_bit_matrix(
    bits: np.ndarray, states: HardwareStates = HardwareStates()
) -> np.ndarray:
    """Flatten a (boards, rows, cols) or (rows, cols) bit array to a profile."""
    bits = np.asarray(bits)
    if np.any((bits != 0) & (bits != 1)):
        raise ValueError("bit matrix entries must be 0 or 1")
    return states.reflection(bits.reshape(-1))


def _board_grids(bits) -> list:
    """Normalize a (rows, cols) / (boards, rows, cols) array or grid list."""
    if isinstance(bits, np.ndarray):
        if bits.ndim == 2:
            return [bits]
        if bits.ndim == 3:
            return list(bits)
        raise ValueError("bit array must be 2-D or 3-D")
    return [np.asarray(b) for b in bits]


def format_codebook(bits, carrier: Carrier) -> str:
    """Text codebook: per board a header line then rows of '0'/'1' characters.

    Format: ``board <id> <rows>x<cols> f=<Hz>`` followed by one line per
    row; boards are separated by a blank line.
    """
    blocks = []
    for board_id, board in enumerate(_board_grids(bits)):
        rows, cols = board.shape
        lines = [f"board {board_id} {rows}x{cols} f={carrier.frequency_hz:.10g}"]
        lines.extend("".join(str(int(b)) for b in row) for row in board)
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + "\n"


def parse_codebook(text: str) -> tuple[list, Carrier]:
    """Inverse of :func:`format_codebook`: list of per-board bit grids."""
    boards = []
    frequency = None
    for block in text.strip().split("\n\n"):
        lines = block.strip().splitlines()
        header = lines[0].split()
        if len(header) != 4 or header[0] != "board":
            raise ValueError(f"malformed codebook header: {lines[0]!r}")
        rows, cols = (int(v) for v in header[2].split("x"))
        frequency = float(header[3].removeprefix("f="))
        grid = np.array([[int(ch) for ch in line] for line in lines[1:]], dtype=np.uint8)
        if grid.shape != (rows, cols):
            raise ValueError("codebook block does not match its header dimensions")
        boards.append(grid)
    if frequency is None:
        raise ValueError("empty codebook")
    return boards, Carrier(frequency)


def codebook_dict(bits, carrier: Carrier) -> dict:
    """JSON-ready equivalent of the text codebook."""
    return {
        "frequency_hz": carrier.frequency_hz,
        "boards": [
            {
                "id": board_id,
                "rows": int(board.shape[0]),
                "cols": int(board.shape[1]),
                "bits": board.astype(int).tolist(),
            }
            for board_id, board in enumerate(_board_grids(bits))
        ],
    }
