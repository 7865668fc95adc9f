"""Network formation games under random cascade attacks.

Exact and Monte Carlo utilities, equilibrium checks, named topologies,
structural analyses of the game graph and branching-process tails.
"""
__version__ = "0.1.0"

from .game import (AttackOutcome, EnumerationCapError, GameParams, ProfileError, StrategyProfile,
                   UtilityVector, closed_form_star, dead_set_masses, exact_utilities, expected_benefits,
                   induced_graph, load_profile, profile_from_json, profile_to_json)
from .cascade import (MonteCarloUtilities, PercolationSample, ProportionEstimate, UtilityEstimate,
                      hoeffding_half_width, monte_carlo_utilities, proportion_interval,
                      sample_percolation, samples_for_accuracy, simulate_attack)
from .equilibrium import (BestResponse, DeviationClass, DeviationReport, RegionCell, Verdict,
                          best_response, best_response_dynamics, check_equilibrium, equilibrium_region,
                          is_equilibrium, join_benefit_bound)
from .generators import TopologySpec, generate
from .branching import OffspringDistribution, RateFunction, rate_function, verify_tail_bound
