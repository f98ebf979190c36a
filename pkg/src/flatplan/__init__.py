"""Flatness-based rest-to-rest motion planning for serial manipulators.

The package plans joint trajectories under joint-angle, joint-velocity, and
torque limits by parameterizing the flat output q(t) = A b(t / t_f) with a
basis on the unit interval, finding a time-optimal state-feasible solution
with a linear program, dilating the final time until torques fit, and then
refining with a feasible-point-preserving NLP.
"""

from .ad import Dual, gradient, value_and_jacobian
from .basis import BasisSpec, LinearConstraintSet, clamped_knots, eval_basis
from .dynamics import (JointState, ScaledJointState, gravity_torque,
                       inertia_matrix, inverse_dynamics, time_scaled_torque)
from .lp import LinearProgram, LPSolution, build_time_optimal_lp, solve_lp
from .model import (ConfigError, LinkSpec, RobotModel, SpatialInertia,
                    load_robot, serialize_robot, spatial_inertia,
                    validate_model)
from .nlp import InfeasibleStartError, NlpProblem, NlpResult, solve_nlp
from .planner import (ConstraintReport, CostSpec, GravityPremiseError, Limits,
                      PlanResult, PlanningError, PlanningProblem,
                      SolverSettings, StateInfeasibleError,
                      check_gravity_premise, constraint_report, line_search_tf,
                      plan, problem_from_config)
from .se3 import RigidTransform, Twist, ad_small, adjoint, exp_twist, hat3
from .trajectory import (BoundaryConditions, TimeScaledTrajectory,
                         boundary_constraint_rows, eval_state, sample_states)

__version__ = "0.1.0"
