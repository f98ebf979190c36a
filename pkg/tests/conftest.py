import numpy as np
import pytest
from hypothesis import settings

from oracles import twolink_config
from flatplan.basis import BasisSpec
from flatplan.model import load_robot
from flatplan.planner import Limits, PlanningProblem, SolverSettings, plan
from flatplan.trajectory import BoundaryConditions

settings.register_profile("ci", deadline=None, derandomize=True)
settings.load_profile("ci")


@pytest.fixture(scope="session")
def twolink():
    return load_robot(twolink_config())


@pytest.fixture(scope="session")
def paper_problem(twolink):
    return PlanningProblem(
        model=twolink,
        spec=BasisSpec.polynomial(10),
        bc=BoundaryConditions(q0=[0.0, 0.0], qd0=[0.0, 0.0],
                              qf=[np.pi, -np.pi], qdf=[0.0, 0.0]),
        limits=Limits(q_lb=[-np.pi, -np.pi], q_ub=[np.pi, np.pi],
                      qd_lb=[-4.0, -1.5], qd_ub=[4.0, 1.5],
                      tau_lb=[-19.6, -6.0], tau_ub=[19.6, 6.0]),
        settings=SolverSettings(n_samples=24),
    )


@pytest.fixture(scope="session")
def paper_result(paper_problem):
    return plan(paper_problem)
