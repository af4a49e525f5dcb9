#!/usr/bin/env python3
"""Power scaling when tiling boards: 10x16 -> 10x32 -> 20x32.

With continuous optimal phases the received power follows the coherent
aperture law: doubling the element count quadruples the power (+6.02 dB).
Field measurements quote gains over an environment-dependent baseline, so
their per-board numbers are a different quantity than this ideal ratio.
"""

from risbeam import power_db, run_scenario, scenario_from_dict


def scenario(offsets):
    return scenario_from_dict({
        "carrier": {"frequency_hz": 5.8e9},
        "mode": "far_rgd",
        "boards": [{"rows": 10, "cols": 16, "spacing_m": 0.025, "offsets_m": offsets}],
        "sources": [{"kind": "plane_wave", "theta_deg": 0.0, "phi_deg": 0.0}],
        "receiver": {"kind": "direction", "theta_deg": 60.0, "phi_deg": 0.0},
    })


def main():
    layouts = {
        "10x16 (single board)": [[0, 0, 0]],
        "10x32 (two boards)": [[0, 0, 0], [0.4, 0, 0]],
        "20x32 (four boards)": [[0, 0, 0], [0.4, 0, 0], [0, 0.25, 0], [0.4, 0.25, 0]],
    }
    base = None
    print(f"{'layout':<22} {'N':>5} {'power dB':>10} {'vs single':>10}")
    for label, offsets in layouts.items():
        report = run_scenario(scenario(offsets))
        power = report["power"]["after"]["linear"]
        if base is None:
            base = power
        print(
            f"{label:<22} {report['surface']['total_elements']:>5} "
            f"{power_db(power):>10.2f} {power_db(power / base):>+9.2f}dB"
        )
    print("\nideal law: 4x the elements -> +12.04 dB over the single board")


if __name__ == "__main__":
    main()
