"""Sliding modes, hidden dynamics and bifurcations near codimension-2
switching intersections: regularized fields for monotone switching
profiles, event-detecting integration, Hopf/criticality analysis and
invariant-region certificates."""

from .bifurcation import (CriticalityReport, FixedPoint, HopfPoint, HopfReport,
                          JacobianPQRS, LyapunovResult, PolySystem2D,
                          SlopeOrderingReport, StabilityChangeReport,
                          first_lyapunov_coefficient, fixed_points, hopf_detect,
                          hopf_report, jacobian_pqrs, nullcline_slope_report,
                          stability_change_analysis, supercritical_multilinear)
from .hidden import (HiddenSystem, MultilinearCoeffs, hidden_rhs,
                     multilinear_from_corners, wall_equilibrium)
from .integrate import (Bracket, Event, EventRecord, IntegratorConfig, Outcome,
                        ScanResult, Trajectory, classify_outcome,
                        detect_limit_cycle, integrate_adaptive, scan_parameter)
from .invariant_region import (InvariantRegionReport, SegmentChain, build_segments,
                               verify_invariant_region, verify_segment)
from .piecewise import (BlendResult, Codim1Sliding, CornerFields, LambdaSolution,
                        PiecewiseSystem, blend_codim2_solutions, corner_fields,
                        filippov_codim1, regularized_rhs)
from .presets import PRESET_NAMES, run_experiment
from .switching import (HiddenFactor, SwitchingProfile, check_switch_properties,
                        eval_switch, eval_switch_deriv, hill_factor)

__version__ = "0.1.0"
