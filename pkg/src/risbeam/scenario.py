"""Scenario configuration, link orchestration, sweeps, and heatmaps.

A scenario is a JSON-compatible document describing boards (with poses),
sources, a receiver, a mode and optimizer/quantizer settings.  The
orchestration layer dispatches it:

* ``far_rgd``   - build the quadratic form, run the manifold optimizer,
                  optionally quantize, evaluate received power.
* ``near_pcm``  - phase-compensate the feed (beam toward a direction or
                  focus onto a point), optionally quantize, evaluate the
                  spherical-wave sum.
* ``multihop``  - optimize a chain of far-field hops sequentially, each
                  hop's complex field factor feeding the next hop.

Units are meters, Hz and degrees everywhere in scenario files; reports
state powers both linear and in dB (floored at -300 dB).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .geometry import (
    ArrayGeometry,
    Carrier,
    Direction,
    build_upa,
    direction_from_vector,
    direction_vector,
    tile_boards,
)
from .manifold_opt import OptimizerConfig, random_profile, rgd_optimize
from .nearfield import (
    FeedAntenna,
    field_at_points,
    focus_profile,
    fraunhofer_distance,
    nearfield_field,
    pcm_profile,
)
from .quantizer import (
    HardwareStates,
    codebook_dict,
    format_codebook,
    quantize_profile,
    to_bit_matrix,
    wrap_degrees,
)
from .signal_model import (
    LinkBudget,
    PlaneWaveSource,
    analytic_max,
    build_quadratic_form,
    incidence_matrix,
    power_db,
    rank_one_factor,
    received_signal,
    source_amplitudes,
    steering_vector,
)

SCHEMA_VERSION = 1


class ScenarioError(ValueError):
    """Invalid scenario configuration or infeasible request."""


@dataclass(frozen=True)
class Pose:
    """Rigid placement of a board: origin plus right-handed orthonormal frame."""

    origin: np.ndarray = None
    rotation: np.ndarray = None

    def __post_init__(self):
        origin = np.zeros(3) if self.origin is None else np.array(self.origin, float)
        rotation = np.eye(3) if self.rotation is None else np.array(self.rotation, float)
        if origin.shape != (3,) or rotation.shape != (3, 3):
            raise ScenarioError("pose needs a 3-vector origin and a 3x3 rotation")
        if np.max(np.abs(rotation.T @ rotation - np.eye(3))) > 1e-9:
            raise ScenarioError("pose rotation must be orthonormal")
        if np.linalg.det(rotation) < 0:
            raise ScenarioError("pose rotation must be right-handed")
        origin.setflags(write=False)
        rotation.setflags(write=False)
        object.__setattr__(self, "origin", origin)
        object.__setattr__(self, "rotation", rotation)

    def to_world_points(self, points: np.ndarray) -> np.ndarray:
        return np.asarray(points) @ self.rotation.T + self.origin

    def to_board_point(self, point) -> np.ndarray:
        return self.rotation.T @ (np.asarray(point, float) - self.origin)

    def to_board_dir(self, u) -> np.ndarray:
        return self.rotation.T @ np.asarray(u, float)


@dataclass(frozen=True)
class BoardSpec:
    """One board type: grid dimensions, optional in-plane tiling, and a pose."""

    rows: int
    cols: int
    spacing_m: float
    offsets_m: tuple = ((0.0, 0.0, 0.0),)
    pose: Pose = Pose()

    def board_geometry(self) -> ArrayGeometry:
        """Tiled geometry in the board's own frame (z = 0 plane)."""
        return tile_boards(build_upa(self.rows, self.cols, self.spacing_m), self.offsets_m)

    def world_geometry(self) -> ArrayGeometry:
        """Tiled geometry with the pose applied."""
        local = self.board_geometry()
        return ArrayGeometry(
            self.pose.to_world_points(local.positions),
            rows=local.rows,
            cols=local.cols,
            spacing_m=local.spacing_m,
            boards=local.boards,
        )


@dataclass(frozen=True)
class HopSpec:
    """One relay hop: a board plus its incident/departure descriptors.

    Directions are expressed in the hop board's own frame, matching how
    per-node angles are measured in deployments.  ``optimize=False``
    leaves the hop at the uniform profile (a de-optimized node).
    """

    board: BoardSpec
    arrival: Direction
    departure: Direction
    attenuation: float = 1.0
    optimize: bool = True


@dataclass
class Scenario:
    """Full experiment description (see the README for the file schema)."""

    carrier: Carrier
    mode: str
    boards: list = field(default_factory=list)
    sources: list = field(default_factory=list)
    receiver: object = None
    link: LinkBudget = LinkBudget()
    optimizer: OptimizerConfig = OptimizerConfig()
    quantize: bool = False
    hardware: HardwareStates = HardwareStates()
    init: str = "ones"
    power_reference: float = 1.0
    outputs: dict = field(default_factory=dict)
    hops: list = field(default_factory=list)

    def __post_init__(self):
        if self.mode not in ("far_rgd", "near_pcm", "multihop"):
            raise ScenarioError(f"unknown mode {self.mode!r}")
        if self.init not in ("ones", "random"):
            raise ScenarioError(f"unknown initialization {self.init!r}")
        if self.mode == "multihop":
            if len(self.hops) < 1:
                raise ScenarioError("multihop mode needs at least one hop")
        else:
            if len(self.boards) < 1:
                raise ScenarioError("at least one board is required")
            if len(self.sources) < 1:
                raise ScenarioError("at least one source is required")
            if self.receiver is None:
                raise ScenarioError("a receiver is required")
        if self.power_reference <= 0:
            raise ScenarioError("power_reference must be positive")


# ---------------------------------------------------------------------------
# Scenario file parsing


def _parse_direction(d: dict, context: str) -> Direction:
    try:
        return Direction(float(d["theta_deg"]), float(d.get("phi_deg", 0.0)))
    except (KeyError, TypeError) as exc:
        raise ScenarioError(f"{context}: expected theta_deg/phi_deg, got {d!r}") from exc


def _parse_amplitude(value) -> complex:
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    raise ScenarioError(f"amplitude must be a number or [re, im] pair, got {value!r}")


def _parse_board(d: dict) -> BoardSpec:
    pose = Pose()
    if "pose" in d:
        pose = Pose(d["pose"].get("origin"), d["pose"].get("rotation"))
    offsets = d.get("offsets_m", [[0.0, 0.0, 0.0]])
    try:
        return BoardSpec(
            rows=int(d["rows"]),
            cols=int(d["cols"]),
            spacing_m=float(d["spacing_m"]),
            offsets_m=tuple(tuple(float(x) for x in off) for off in offsets),
            pose=pose,
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ScenarioError(f"invalid board spec {d!r}: {exc}") from exc


def _parse_source(d: dict):
    kind = d.get("kind", "plane_wave")
    if kind == "plane_wave":
        return PlaneWaveSource(
            _parse_direction(d, "plane-wave source"),
            _parse_amplitude(d.get("amplitude", 1.0)),
        )
    if kind == "feed":
        try:
            return FeedAntenna(np.asarray(d["position_m"], dtype=float))
        except (KeyError, TypeError, ValueError) as exc:
            raise ScenarioError(f"invalid feed source {d!r}") from exc
    raise ScenarioError(f"unknown source kind {kind!r}")


def _parse_receiver(d: dict):
    kind = d.get("kind", "direction")
    if kind == "direction":
        return _parse_direction(d, "receiver")
    if kind == "point":
        try:
            return np.asarray(d["position_m"], dtype=float).reshape(3)
        except (KeyError, TypeError, ValueError) as exc:
            raise ScenarioError(f"invalid receiver point {d!r}") from exc
    raise ScenarioError(f"unknown receiver kind {kind!r}")


def scenario_from_dict(data: dict) -> Scenario:
    """Build and validate a Scenario from a parsed JSON document."""
    if not isinstance(data, dict):
        raise ScenarioError("scenario document must be a JSON object")
    version = data.get("schema_version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise ScenarioError(f"unsupported schema_version {version!r}")
    try:
        carrier = Carrier(float(data["carrier"]["frequency_hz"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise ScenarioError("carrier.frequency_hz is required") from exc
    mode = data.get("mode", "far_rgd")

    opt_kwargs = data.get("optimizer", {})
    try:
        optimizer = OptimizerConfig(**opt_kwargs)
    except (TypeError, ValueError) as exc:
        raise ScenarioError(f"invalid optimizer config: {exc}") from exc
    try:
        hardware = HardwareStates(**data.get("hardware", {}))
    except (TypeError, ValueError) as exc:
        raise ScenarioError(f"invalid hardware states: {exc}") from exc
    try:
        link = LinkBudget(float(data.get("link", {}).get("attenuation", 1.0)))
    except (TypeError, ValueError) as exc:
        raise ScenarioError(f"invalid link budget: {exc}") from exc

    hops = []
    for h in data.get("hops", []):
        hops.append(
            HopSpec(
                board=_parse_board(h.get("board", {})),
                arrival=_parse_direction(h.get("arrival", {}), "hop arrival"),
                departure=_parse_direction(h.get("departure", {}), "hop departure"),
                attenuation=float(h.get("attenuation", 1.0)),
                optimize=bool(h.get("optimize", True)),
            )
        )

    receiver = _parse_receiver(data["receiver"]) if "receiver" in data else None

    try:
        return Scenario(
            carrier=carrier,
            mode=mode,
            boards=[_parse_board(b) for b in data.get("boards", [])],
            sources=[_parse_source(s) for s in data.get("sources", [])],
            receiver=receiver,
            link=link,
            optimizer=optimizer,
            quantize=bool(data.get("quantize", False)),
            hardware=hardware,
            init=data.get("init", "ones"),
            power_reference=float(data.get("power_reference", 1.0)),
            outputs=data.get("outputs", {}),
            hops=hops,
        )
    except ScenarioError:
        raise
    except (TypeError, ValueError) as exc:
        raise ScenarioError(str(exc)) from exc


def load_scenario(path) -> Scenario:
    """Read and validate a scenario JSON file."""
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ScenarioError(f"cannot read scenario file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"scenario file {path} is not valid JSON: {exc}") from exc
    return scenario_from_dict(data)


# ---------------------------------------------------------------------------
# Shared evaluation helpers


def _plane_sources(scenario: Scenario) -> list:
    sources = [s for s in scenario.sources if isinstance(s, PlaneWaveSource)]
    if len(sources) != len(scenario.sources):
        raise ScenarioError("far-field mode requires plane-wave sources only")
    return sources


def _feed_source(scenario: Scenario) -> FeedAntenna:
    feeds = [s for s in scenario.sources if isinstance(s, FeedAntenna)]
    if len(feeds) != 1 or len(scenario.sources) != 1:
        raise ScenarioError("near-field mode requires exactly one feed source")
    return feeds[0]


def _world_geometries(scenario: Scenario) -> list[ArrayGeometry]:
    return [spec.world_geometry() for spec in scenario.boards]


def _initial_profile(n: int, scenario: Scenario, seed) -> np.ndarray:
    if scenario.init == "random":
        return random_profile(n, np.random.default_rng(seed))
    return np.ones(n, dtype=complex)


def _profile_report(w: np.ndarray, quantized: bool) -> dict:
    return {
        "phases_deg": [float(p) for p in wrap_degrees(np.degrees(np.angle(w)))],
        "amplitudes": [float(a) for a in np.abs(w)],
        "quantized": quantized,
    }


def _surface_report(scenario: Scenario, geoms: list[ArrayGeometry]) -> dict:
    return {
        "boards": [
            {
                "rows": g.rows,
                "cols": g.cols,
                "spacing_m": g.spacing_m,
                "tiles": g.boards,
                "elements": g.n_elements,
                "fraunhofer_distance_m": fraunhofer_distance(g, scenario.carrier),
            }
            for g in geoms
        ],
        "total_elements": int(sum(g.n_elements for g in geoms)),
    }


def _codebook(scenario: Scenario, w_quantized: np.ndarray, geoms) -> dict:
    grids = []
    start = 0
    for geom in geoms:
        n = geom.n_elements
        bits = to_bit_matrix(w_quantized[start : start + n], geom, scenario.hardware)
        grids.extend(bits)
        start += n
    return {
        "text": format_codebook(grids, scenario.carrier),
        "json": codebook_dict(grids, scenario.carrier),
    }


def _power_entry(power_linear: float, reference: float) -> dict:
    return {
        "linear": float(power_linear),
        "db": power_db(power_linear, reference),
    }


# ---------------------------------------------------------------------------
# Far-field link (shared by run_scenario and run_multihop)


def _far_link(
    geoms: list[ArrayGeometry],
    sources: list,
    departure: Direction,
    link: LinkBudget,
    carrier: Carrier,
    optimizer: OptimizerConfig,
    w0: np.ndarray,
    optimize: bool = True,
) -> dict:
    """Optimize one far-field reflected link and evaluate it."""
    a = np.concatenate([steering_vector(g, departure, carrier) for g in geoms])
    b = np.vstack([incidence_matrix(g, sources, carrier) for g in geoms])
    x = source_amplitudes(sources)
    quadratic = build_quadratic_form(a, b, x, link)
    if optimize:
        w_opt, trace = rgd_optimize(quadratic, w0, optimizer)
    else:
        w_opt, trace = np.ones(a.shape[0], dtype=complex), None
    factor = rank_one_factor(a, b, x, link)
    return {
        "departure": a,
        "incidence": b,
        "amplitudes": x,
        "link": link,
        "profile": w_opt,
        "trace": trace,
        "y_uniform": received_signal(np.ones_like(w_opt), a, b, x, link),
        "y_optimized": received_signal(w_opt, a, b, x, link),
        "analytic_max": analytic_max(factor),
    }


def _scenario_profile(scenario: Scenario, seed=None) -> dict:
    """Compute the (continuous and, if requested, quantized) profile.

    Returns a dict with the world geometries, the evaluation closures'
    raw arrays and the selected final profile, shared by run/sweep/heatmap.
    """
    if scenario.mode == "far_rgd":
        geoms = _world_geometries(scenario)
        sources = _plane_sources(scenario)
        if not isinstance(scenario.receiver, Direction):
            raise ScenarioError("far_rgd mode requires a direction receiver")
        n = sum(g.n_elements for g in geoms)
        linkres = _far_link(
            geoms,
            sources,
            scenario.receiver,
            scenario.link,
            scenario.carrier,
            scenario.optimizer,
            _initial_profile(n, scenario, seed),
        )
        result = {
            "geoms": geoms,
            "w_continuous": linkres["profile"],
            "trace": linkres["trace"],
            "far": linkres,
        }
    elif scenario.mode == "near_pcm":
        geoms = _world_geometries(scenario)
        feed = _feed_source(scenario)
        profiles = []
        for spec in scenario.boards:
            local_geom = spec.board_geometry()
            local_feed = FeedAntenna(spec.pose.to_board_point(feed.position_m))
            if isinstance(scenario.receiver, Direction):
                u_world = direction_vector(scenario.receiver)
                local_dep = direction_from_vector(spec.pose.to_board_dir(u_world))
                profiles.append(pcm_profile(local_geom, local_feed, local_dep, scenario.carrier))
            else:
                local_point = spec.pose.to_board_point(scenario.receiver)
                profiles.append(
                    focus_profile(local_geom, local_feed, local_point, scenario.carrier)
                )
        result = {
            "geoms": geoms,
            "w_continuous": np.concatenate(profiles),
            "trace": None,
            "feed": feed,
        }
    else:
        raise ScenarioError("profiles are computed per hop in multihop mode")

    if scenario.quantize:
        result["w_quantized"] = quantize_profile(result["w_continuous"], scenario.hardware)
        result["w_final"] = result["w_quantized"]
    else:
        result["w_final"] = result["w_continuous"]
    return result


def _nearfield_power(
    scenario: Scenario, geoms, feed: FeedAntenna, w: np.ndarray
) -> float:
    """|field|^2 at the scenario receiver under a profile (world frame)."""
    total = 0.0 + 0.0j
    start = 0
    for geom in geoms:
        wk = w[start : start + geom.n_elements]
        start += geom.n_elements
        if isinstance(scenario.receiver, Direction):
            total += nearfield_field(geom, feed, wk, scenario.carrier, direction=scenario.receiver)
        else:
            total += nearfield_field(geom, feed, wk, scenario.carrier, point=scenario.receiver)
    total *= scenario.link.attenuation
    return float(abs(total) ** 2)


def run_scenario(scenario: Scenario, seed=None) -> dict:
    """Run one scenario end to end and return the JSON-ready report."""
    if scenario.mode == "multihop":
        return run_multihop(scenario, seed=seed)

    ref = scenario.power_reference
    state = _scenario_profile(scenario, seed=seed)
    geoms = state["geoms"]
    report = {
        "schema_version": SCHEMA_VERSION,
        "mode": scenario.mode,
        "carrier": {"frequency_hz": scenario.carrier.frequency_hz},
        "surface": _surface_report(scenario, geoms),
        "units": {"distance": "m", "frequency": "Hz", "angle": "deg", "power_db_reference": ref},
    }

    if scenario.mode == "far_rgd":
        far = state["far"]
        power_before = abs(far["y_uniform"]) ** 2
        power_cont = abs(far["y_optimized"]) ** 2
        power_after = power_cont
        if scenario.quantize:
            power_after = abs(
                received_signal(
                    state["w_final"], far["departure"], far["incidence"],
                    far["amplitudes"], far["link"],
                )
            ) ** 2
        report["optimizer"] = state["trace"].summary()
        report["optimizer"]["history"] = state["trace"].history()
        report["analytic_max"] = {
            "power_linear": far["analytic_max"],
            "optimality_ratio": power_cont / far["analytic_max"]
            if far["analytic_max"] > 0
            else None,
        }
    else:
        feed = state["feed"]
        n_total = sum(g.n_elements for g in geoms)
        power_before = _nearfield_power(scenario, geoms, feed, np.ones(n_total, complex))
        power_cont = _nearfield_power(scenario, geoms, feed, state["w_continuous"])
        power_after = (
            _nearfield_power(scenario, geoms, feed, state["w_final"])
            if scenario.quantize
            else power_cont
        )

    report["power"] = {
        "before": _power_entry(power_before, ref),
        "after": _power_entry(power_after, ref),
        "after_continuous": _power_entry(power_cont, ref),
        "gain_db": power_db(power_after, ref) - power_db(power_before, ref),
    }
    report["profile"] = _profile_report(state["w_final"], scenario.quantize)
    if scenario.quantize:
        report["codebook"] = _codebook(scenario, state["w_final"], geoms)
    return report


# ---------------------------------------------------------------------------
# Multi-hop relaying


def _run_hop(
    hop: HopSpec,
    amplitude_in: complex,
    scenario: Scenario,
    seed,
) -> dict:
    geom = hop.board.board_geometry()
    source = PlaneWaveSource(hop.arrival, amplitude_in)
    linkres = _far_link(
        [geom],
        [source],
        hop.departure,
        LinkBudget(hop.attenuation),
        scenario.carrier,
        scenario.optimizer,
        _initial_profile(geom.n_elements, scenario, seed),
        optimize=hop.optimize,
    )
    if scenario.quantize:
        # A de-optimized hop still maps onto hardware states (all state 0).
        w_final = quantize_profile(linkres["profile"], scenario.hardware)
    else:
        w_final = linkres["profile"]
    linkres["w_final"] = w_final
    linkres["y_final"] = received_signal(
        w_final,
        linkres["departure"],
        linkres["incidence"],
        linkres["amplitudes"],
        linkres["link"],
    )
    linkres["geom"] = geom
    return linkres


def run_multihop(scenario: Scenario, seed=None) -> dict:
    """Optimize each hop in sequence and compose the end-to-end link."""
    if scenario.mode != "multihop":
        raise ScenarioError("run_multihop requires a multihop scenario")
    ref = scenario.power_reference
    amp0 = 1.0 + 0.0j
    if scenario.sources:
        if not isinstance(scenario.sources[0], PlaneWaveSource):
            raise ScenarioError("multihop mode takes a plane-wave source (or none)")
        amp0 = complex(scenario.sources[0].amplitude)

    hops_report = []
    amp = amp0
    amp_uniform = amp0
    geoms = []
    w_all = []
    for idx, hop in enumerate(scenario.hops):
        try:
            res = _run_hop(hop, amp, scenario, seed)
        except (ValueError, RuntimeError) as exc:
            raise ScenarioError(f"hop {idx} failed: {exc}") from exc
        # The all-uniform baseline chain, composed hop by hop.
        amp_uniform = received_signal(
            np.ones(res["geom"].n_elements, dtype=complex),
            res["departure"],
            res["incidence"],
            np.array([amp_uniform]),
            res["link"],
        )
        hops_report.append(
            {
                "hop": idx,
                "elements": res["geom"].n_elements,
                "arrival": {"theta_deg": hop.arrival.theta_deg, "phi_deg": hop.arrival.phi_deg},
                "departure": {
                    "theta_deg": hop.departure.theta_deg,
                    "phi_deg": hop.departure.phi_deg,
                },
                "attenuation": hop.attenuation,
                "optimized": hop.optimize,
                "power_in": _power_entry(abs(amp) ** 2, ref),
                "power_out_uniform": _power_entry(abs(res["y_uniform"]) ** 2, ref),
                "power_out": _power_entry(abs(res["y_final"]) ** 2, ref),
                "analytic_max": res["analytic_max"],
                "optimizer": res["trace"].summary() if res["trace"] is not None else None,
            }
        )
        geoms.append(res["geom"])
        w_all.append(res["w_final"])
        amp = res["y_final"]

    power_after = abs(amp) ** 2
    power_before = abs(amp_uniform) ** 2
    report = {
        "schema_version": SCHEMA_VERSION,
        "mode": "multihop",
        "carrier": {"frequency_hz": scenario.carrier.frequency_hz},
        "hops": hops_report,
        "power": {
            "before": _power_entry(power_before, ref),
            "after": _power_entry(power_after, ref),
            "gain_db": power_db(power_after, ref) - power_db(power_before, ref),
        },
        "units": {"distance": "m", "frequency": "Hz", "angle": "deg", "power_db_reference": ref},
    }
    if scenario.quantize:
        w_chain = np.concatenate(w_all)
        report["codebook"] = _codebook(scenario, w_chain, geoms)
    report["profiles"] = [
        _profile_report(w, scenario.quantize) for w in w_all
    ]
    return report


# ---------------------------------------------------------------------------
# Sweeps and heatmaps


def sweep_pattern(
    scenario: Scenario,
    theta_start: float,
    theta_stop: float,
    step: float,
    phi_deg: float | None = None,
    seed=None,
) -> tuple[list, dict]:
    """Power versus departure elevation with the scenario's fixed profile.

    Angles are swept at a fixed azimuth (defaulting to the receiver's);
    negative elevations address the phi + 180 half-plane.  Returns the
    table rows (theta_deg, phi_deg, power_db) and a small report with
    the peak location.
    """
    if step <= 0:
        raise ScenarioError("sweep step must be positive")
    if phi_deg is None:
        if isinstance(scenario.receiver, Direction):
            phi_deg = scenario.receiver.phi_deg
        else:
            phi_deg = 0.0
    state = _scenario_profile(scenario, seed=seed)
    geoms = state["geoms"]
    w = state["w_final"]
    ref = scenario.power_reference

    thetas = np.arange(theta_start, theta_stop + step / 2.0, step)
    rows = []
    for theta in thetas:
        direction = Direction(float(theta), float(phi_deg))
        if scenario.mode == "far_rgd":
            far = state["far"]
            a = np.concatenate([steering_vector(g, direction, scenario.carrier) for g in geoms])
            y = received_signal(w, a, far["incidence"], far["amplitudes"], far["link"])
            power = abs(y) ** 2
        else:
            total = 0.0 + 0.0j
            start = 0
            for geom in geoms:
                wk = w[start : start + geom.n_elements]
                start += geom.n_elements
                total += nearfield_field(
                    geom, state["feed"], wk, scenario.carrier, direction=direction
                )
            power = abs(scenario.link.attenuation * total) ** 2
        rows.append((float(theta), float(phi_deg), power_db(power, ref)))

    peak = max(rows, key=lambda r: r[2])
    report = {
        "mode": scenario.mode,
        "phi_deg": float(phi_deg),
        "step_deg": float(step),
        "n_points": len(rows),
        "peak": {"theta_deg": peak[0], "power_db": peak[2]},
    }
    return rows, report


def coverage_heatmap(scenario: Scenario, grid: dict | None = None, seed=None) -> tuple[list, dict]:
    """Near-field power on a rectangular probe grid, as (x, y, power_db) rows.

    The grid is an axis-aligned rectangle at fixed z in world
    coordinates: {"x_min", "x_max", "y_min", "y_max", "step", "z"}.
    Probes coincident with the feed or an element are rejected.
    """
    if scenario.mode != "near_pcm":
        raise ScenarioError("coverage heatmaps require near_pcm mode")
    if grid is None:
        grid = scenario.outputs.get("heatmap")
    if not grid:
        raise ScenarioError("no heatmap grid given (scenario outputs.heatmap or argument)")
    try:
        step = float(grid["step"])
        xs = np.arange(float(grid["x_min"]), float(grid["x_max"]) + step / 2.0, step)
        ys = np.arange(float(grid["y_min"]), float(grid["y_max"]) + step / 2.0, step)
        z = float(grid.get("z", 0.0))
    except (KeyError, TypeError, ValueError) as exc:
        raise ScenarioError(f"invalid heatmap grid {grid!r}: {exc}") from exc
    if step <= 0:
        raise ScenarioError("heatmap step must be positive")

    state = _scenario_profile(scenario, seed=seed)
    geoms = state["geoms"]
    feed = state["feed"]
    w = state["w_final"]
    ref = scenario.power_reference

    gx, gy = np.meshgrid(xs, ys, indexing="ij")
    points = np.column_stack([gx.ravel(), gy.ravel(), np.full(gx.size, z)])
    if np.any(np.linalg.norm(points - feed.position_m, axis=1) < 1e-9):
        raise ScenarioError("heatmap grid contains the feed point")

    total = np.zeros(points.shape[0], dtype=complex)
    start = 0
    for geom in geoms:
        wk = w[start : start + geom.n_elements]
        start += geom.n_elements
        try:
            total += field_at_points(geom, feed, wk, scenario.carrier, points)
        except ValueError as exc:
            raise ScenarioError(str(exc)) from exc
    power = np.abs(scenario.link.attenuation * total) ** 2

    rows = [
        (float(p[0]), float(p[1]), power_db(float(pw), ref))
        for p, pw in zip(points, power)
    ]
    peak = max(rows, key=lambda r: r[2])
    report = {
        "mode": scenario.mode,
        "step_m": step,
        "z_m": z,
        "n_points": len(rows),
        "peak": {"x_m": peak[0], "y_m": peak[1], "power_db": peak[2]},
    }
    return rows, report


# ---------------------------------------------------------------------------
# Serialization


def _jsonable(value):
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, np.ndarray):
        return _jsonable(value.tolist())
    return value


def report_json(report: dict) -> str:
    """Deterministic JSON rendering of a report (sorted keys, trailing newline)."""
    return json.dumps(_jsonable(report), indent=2, sort_keys=True) + "\n"


def rows_to_csv(rows, header: str) -> str:
    """Render sweep/heatmap rows as CSV with a header line."""
    lines = [header]
    lines.extend(",".join(repr(float(v)) for v in row) for row in rows)
    return "\n".join(lines) + "\n"
