"""Adversarial risk analysis for sequential insider-threat games."""

__version__ = "0.1.0"

from .model import (AdditiveUtility, Attacker, CPT, Defender, Issue, MCConfig, RandomCPT,  # noqa: E402
                    RandomUtility, Scenario, ScenarioError, check, utility_eval, validate)
from .montecarlo import AttackDistribution  # noqa: E402
from .sampling import (Beta, Dirichlet, Normal, PointMass, RngStream, ShiftedNegExp,  # noqa: E402
                       sample, substream)
from .scenario_io import load, load_file, save, write_report  # noqa: E402
from .solver_core import elicit_attack_distribution, psi_da, solve_simultaneous  # noqa: E402
from .solver_culture import (optimal_second_defense_culture, predict_attack_culture,  # noqa: E402
                             psi_d1_b, psi_d1_b_a, solve_culture)
from .solver_dad import (Policy, optimal_second_defense, predict_attack_dad, psi_d1_a,  # noqa: E402
                         solve_dad)
from .uncertainty import model_average  # noqa: E402
from .report import SolveReport, solve  # noqa: E402
