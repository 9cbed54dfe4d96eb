"""Exact power and decisiveness measures for simple games and TU-games.

The collective measures come from a random query process (reveal players in
uniformly random order until the revealed set contains a winning coalition)
and its size-rescaled variants; the individual measures are the matching
weighted semivalues, with the classic Shapley and Banzhaf values as special
cases.  All formula paths use exact rational arithmetic; Monte Carlo engines
provide reproducible empirical cross-checks.
"""

from .errors import (AllZeroError, CapacityError, DimensionMismatch, FormatError,
                     GameError, NormalizationUndefined, QueryPowerError,
                     RescalingError)
from .games import (Classification, Coalition, SimpleGame, TUGame, TypeCounts,
                    coalition, coalition_size, enumerate_monotone_tables,
                    enumeration_limit, members, monotone_games)
from .manipulation import (OutcomeLottery, ScoringRule, build_manipulation_game,
                           can_manipulate, parse_profile, prefers, sincere_outcome)
from .measures import (Allocation, Contribution, MeasureReport, banzhaf,
                       coalition_formation, compute_report, decisiveness,
                       expected_query_count, potential_difference, semivalue,
                       shapley, size_weight_distribution, weighted_semivalue)
from .rescaling import (RecursionReport, RescalingFamily, RescalingRow,
                        SizeWeights, builtin_family, check_recursion, harmonic,
                        make_row, normalized_weights)
from .simulate import (AwardsEstimate, BargainingEstimate, BargainingValues,
                       QueryEstimate, QueryOutcome, SimConfig, bargaining,
                       estimate_awards, estimate_query_count, exact_query_cdf,
                       exact_stop_distribution, run_query)
from .tables import CATALOG, TableRow, four_player_table, game_from_label

__version__ = "0.1.0"

__all__ = [
    "AllZeroError", "Allocation", "AwardsEstimate", "BargainingEstimate",
    "BargainingValues", "CATALOG", "CapacityError", "Classification",
    "Coalition", "Contribution", "DimensionMismatch", "FormatError",
    "GameError", "MeasureReport", "NormalizationUndefined", "OutcomeLottery",
    "QueryEstimate", "QueryOutcome", "QueryPowerError", "RecursionReport",
    "RescalingError", "RescalingFamily", "RescalingRow", "ScoringRule",
    "SimConfig", "SimpleGame", "SizeWeights", "TUGame", "TableRow",
    "TypeCounts", "banzhaf", "bargaining", "build_manipulation_game",
    "builtin_family", "can_manipulate", "check_recursion", "coalition",
    "coalition_formation", "coalition_size", "compute_report", "decisiveness",
    "enumerate_monotone_tables", "enumeration_limit", "estimate_awards",
    "estimate_query_count", "exact_query_cdf", "exact_stop_distribution",
    "expected_query_count", "four_player_table", "game_from_label", "harmonic",
    "make_row", "members", "monotone_games", "normalized_weights",
    "parse_profile", "potential_difference", "prefers", "run_query",
    "semivalue", "shapley", "sincere_outcome", "size_weight_distribution",
    "weighted_semivalue",
]
