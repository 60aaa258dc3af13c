"""Hybrid dynamics and ICPM control of a stick juggled in 3D by impulsive forces."""

from .errors import (
    DegenerateSection,
    FixedPointDrift,
    InfeasibleFlightTime,
    JugglingError,
    NoSectionCrossing,
    NonDescendingPostImpulse,
    NotStabilizable,
    OffsetOutOfRange,
    RiccatiDivergence,
)
from .flight import FlightConstants, flight_constants, precession_increment, propagate_flight, render_flight
from .icpm import GainMatrix, LinearizedMap, controllability_rank, feedback, linearize, lqr_gain
from .impulse import apply_impulse, application_point_inertial, impulse_direction_inertial
from .poincare import PoincareSection, StepRecord, map_inertial, map_juggler
from .rotations import angular_momentum, euler_rate_matrix, euler_to_rotation, rot_y, rot_z
from .simulation import NoiseSpec, SimConfig, SimLog, inject_noise, run_closed_loop, settle_to_section, sweep
from .states import (
    DEFAULT_PARAMS,
    ControlInput,
    FullState,
    JuggleSpec,
    SectionStateInertial,
    SectionStateJuggler,
    SectionVelocities,
    StickParams,
    to_inertial,
    to_juggler,
)
from .steady_state import FixedPoint, PrecessionState, min_flight_time, precession_limit, solve_fixed_point

__version__ = "0.1.0"
