"""Desk-scale simulator of a Ku-band massive-MIMO LEO downlink: elliptical
footprint design, oversampled-DFT sub-array beam codebook, link budget,
coverage/SINR maps, Doppler fields and beam-switching timelines."""

__version__ = "0.1.0"

from .antennas import (
    ArrayGeometry,
    BeamWeights,
    LeakyWave,
    Metasurface,
    PointingStats,
    Upa,
    analog_vs_hybrid_gain_db,
    best_combiner,
    gain_with_pointing_error,
    leaky_wave_gain_db,
    leaky_wave_threshold_db,
    quantize_phases,
    steering_vector,
    upa_max_gain_db,
)
from .atmosphere import AtmosphereProfile, atmospheric_loss_db, specific_attenuation_db_per_km
from .channel import (
    BOLTZMANN_DBW_PER_K_HZ,
    KinematicMaxima,
    LinkBudget,
    RicianChannel,
    build_channel,
    doppler_and_angular_speed,
    free_space_loss_db,
    max_doppler_hz,
    noise_power_dbw,
    user_doppler,
)
from .codebook import (
    CellMap,
    DftBeam,
    DftDictionary,
    HybridArchitecture,
    SubarrayCodebook,
    beam_weights,
    build_dictionary,
    corner_ties,
    find_oversampling,
    prune_to_roi,
    rf_index_map,
    tile_cells,
    transmit_gains_linear,
)
from .config import ConfigError, RunConfig
from .metrics import (
    PointMetrics,
    expected_receive_gain,
    interference_dbw,
    rss,
    sinr,
    spectral_efficiency,
    throughput_bps,
)
from .orbit import (
    ConstellationGeometry,
    EarthModel,
    RoiEllipse,
    SatelliteState,
    StereoFrame,
    check_roi_coverage,
    circular_state,
    design_roi,
    orbital_period_s,
    orbital_speed_mps,
    propagate_circular,
    shadow_speed_mps,
    stereo_to_sphere,
)
from .sim import (
    CoverageGrid,
    SimContext,
    TimelineTrace,
    axis_ripple,
    build_context,
    corner_sinr_noisefree,
    run_axis_cuts,
    run_coverage,
    run_doppler_maps,
    run_timeline,
    run_ut_sweeps,
)
