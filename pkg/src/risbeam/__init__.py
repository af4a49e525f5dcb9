"""risbeam: RIS-aided link simulation and phase-profile optimization.

The package is organized by what each layer does:

* :mod:`risbeam.geometry`      boards, tiling, directions, carrier
* :mod:`risbeam.signal_model`  far-field reflection model and quadratic form
* :mod:`risbeam.manifold_opt`  conjugate-gradient descent on the circle manifold
* :mod:`risbeam.nearfield`     spherical-wave phase compensation and focusing
* :mod:`risbeam.quantizer`     1-bit hardware states and codebook export
* :mod:`risbeam.scenario`      scenario files, orchestration, sweeps, heatmaps
* :mod:`risbeam.cli`           the ``risbeam`` command
"""

from .geometry import (
    SPEED_OF_LIGHT,
    ArrayGeometry,
    Carrier,
    Direction,
    build_upa,
    direction_from_vector,
    direction_vector,
    tile_boards,
)
from .manifold_opt import (
    DegenerateRetractionError,
    LineSearchError,
    OptimizerConfig,
    OptimizerTrace,
    armijo_step,
    euclidean_gradient,
    manifold_inner,
    polak_ribiere,
    random_profile,
    retract,
    rgd_optimize,
    riemannian_gradient,
    tangent_project,
)
from .nearfield import (
    FeedAntenna,
    field_at_points,
    focus_profile,
    fraunhofer_distance,
    nearfield_field,
    pcm_profile,
    progressive_phase,
    spatial_delay_phase,
    wrap_phase,
)
from .quantizer import (
    HardwareStates,
    codebook_dict,
    format_codebook,
    from_bit_matrix,
    parse_codebook,
    quantize_1bit,
    quantize_profile,
    to_bit_matrix,
    wrap_degrees,
)
from .scenario import (
    BoardSpec,
    HopSpec,
    Pose,
    Scenario,
    ScenarioError,
    coverage_heatmap,
    load_scenario,
    report_json,
    rows_to_csv,
    run_multihop,
    run_scenario,
    scenario_from_dict,
    sweep_pattern,
)
from .signal_model import (
    LinkBudget,
    PlaneWaveSource,
    analytic_max,
    build_quadratic_form,
    incidence_matrix,
    objective,
    optimal_profile,
    power_db,
    rank_one_factor,
    received_signal,
    source_amplitudes,
    steering_vector,
)

__version__ = "0.1.0"
