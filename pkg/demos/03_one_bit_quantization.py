#!/usr/bin/env python3
"""1-bit quantization: continuous optimum vs the two hardware states.

Optimizes a far-field link, snaps the continuous phases onto the -25/156
degree states, compares the power loss against the 2/pi-squared rule of
thumb, and prints the exported codebook for the board.
"""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from risbeam import power_db, run_scenario, scenario_from_dict

OUT = Path(__file__).parent / "output"


def main():
    doc = {
        "carrier": {"frequency_hz": 5.8e9},
        "mode": "far_rgd",
        "boards": [{"rows": 10, "cols": 16, "spacing_m": 0.025}],
        "sources": [{"kind": "plane_wave", "theta_deg": 20.0, "phi_deg": 0.0}],
        "receiver": {"kind": "direction", "theta_deg": 45.0, "phi_deg": 30.0},
        "quantize": True,
    }
    report = run_scenario(scenario_from_dict(doc))

    p_before = report["power"]["before"]["linear"]
    p_cont = report["power"]["after_continuous"]["linear"]
    p_quant = report["power"]["after"]["linear"]
    print(f"uniform profile:   {power_db(p_before):8.2f} dB")
    print(f"continuous optimum:{power_db(p_cont):8.2f} dB")
    print(f"1-bit quantized:   {power_db(p_quant):8.2f} dB")
    print(f"quantization loss: {power_db(p_cont) - power_db(p_quant):8.2f} dB")
    print(f"(2/pi)^2 rule:     {-power_db((2 / np.pi) ** 2):8.2f} dB expected loss\n")

    print("codebook:")
    print(report["codebook"]["text"])

    OUT.mkdir(exist_ok=True)
    phases = np.asarray(report["profile"]["phases_deg"])
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.hist(phases, bins=np.arange(-180, 181, 5))
    ax.set_xlabel("element phase (deg)")
    ax.set_ylabel("count")
    ax.set_title("Quantized profile: every element on one of the two states")
    fig.tight_layout()
    fig.savefig(OUT / "quantized_phase_histogram.png", dpi=120)
    print(f"wrote {OUT / 'quantized_phase_histogram.png'}")


if __name__ == "__main__":
    main()
