"""zol: exact machinery for zero-one k-laws on G(n, n^-alpha).

Subpackage map:

- graphs:        the Graph carrier type, edge-list text format
- analysis:      densities, balancedness, automorphisms, subgraph copies
- extensions:    rooted pairs, f_alpha, alpha-safe pairs, exact extensions,
                 (K,T)-maximality, chain certificates, local sparsity
- logic:         FO formulas over graphs, parser/evaluator, NI/K/MK/D/A builders
- game:          exact Ehrenfeucht game solver and strategy replay
- constructions: m-chains, m-cycles, figure-eight graphs, strictly balanced search
- thresholds:    exact interval and refutation-point formulas
- mc:            deterministic G(n, p) Monte Carlo lab
"""

from ._version import __version__
from .graphs import (Graph, complete_graph, cycle_graph, empty_graph,
                     format_graph, parse_graph, path_graph)
from .analysis import (are_isomorphic, automorphism_count, automorphisms,
                       count_injective_embeddings, count_subgraph_copies,
                       density, has_subgraph_copy, is_balanced,
                       is_strictly_balanced, max_subgraph_density)
from .extensions import (ChainCertificate, EmbeddedPair, RootedPair,
                         check_property_s1, f_alpha, find_exact_extensions,
                         format_rooted_pair, has_exact_extension,
                         is_alpha_safe, is_kt_maximal, pair_stats,
                         parse_rooted_pair, step_inequality, verify_chain)
from .logic import (build_d, build_k, build_mk, build_ni, build_property_a,
                    check_m_chain_exists, evaluate, format_formula,
                    free_variables, parse_formula, property_a_chain_length,
                    quantifier_depth)
from .game import (DUPLICATOR, SPOILER, GameResult, partial_iso_check,
                   replay_strategy, solve_ehr)
from .constructions import (figure_eight_density,
                            find_strictly_balanced_with_density,
                            make_figure_eight, make_m_chain, make_m_cycle)
from .thresholds import (LawParams, interval_basic, interval_strong, q_basic,
                         q_i_basic, q_i_strong, q_strong, refutation_alpha,
                         refutation_k1, strong_improves)
from .mc import (ExperimentConfig, ExperimentRecord, estimate_event, mix64,
                 run_suite, sample_gnp, sample_gnp_alpha, wilson_interval)
from .rational import Rational, format_rational, parse_rational

__all__ = [name for name in dir() if not name.startswith("_")]
