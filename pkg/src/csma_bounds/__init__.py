"""Distance-dependent interference and SIR bounds for CSMA networks."""
from .bounds import (BoundCurve, Scenario, SirDistribution, bound_curve, bound_no_fading,
                     correction_factor, interference_no_fading, make_grid,
                     sample_interference, sample_sir, select_dmax)
from .channel import from_db, mean_power, sample_power, to_db
from .codes import (CodeConfig, interference_free_lower_bound, sample_sir_with_codes,
                    select_code_count)
from .geometry import (InterferenceSetCover, NodePosition, RadioEnvironment, build_config1,
                       build_config2, build_interflow_class1, build_interflow_class2,
                       build_intraflow, chord_length, max_interferer_count, validate_cover)
from .planner import (DeploymentPlan, FlowSpec, compare_bounds, plan_deployment,
                      robots_for_flow)
from .validation import (ValidationReport, dense_candidates, flow_candidates,
                         generate_random_cover, run_validation)

__version__ = "0.1.0"
