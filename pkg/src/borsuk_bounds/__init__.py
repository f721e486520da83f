"""Upper bounds on the number of parts of diameter below ``b`` needed to
partition a diameter-1 set, with constructive partitioners and the numerical
checks behind the best known bound."""
from .bounds import (BoundId, alpha_tilde, asymptotic_gap, best_bound, bound_base, crossover,
                     dominance_check, invert_base, lower_bound_info, parts_estimate,
                     theorem1_case, theorem1_lambda)
from .capcover import (build_hierarchy, circle_cover_count, greedy_cap_cover, rogers_reference,
                       verify_hierarchy)
from .exceptions import DomainError
from .geometry import Ball, MinimalEnclosingBall, diameter, jung_check, jung_radius, min_enclosing_ball
from .partition import BallCoverPartitioner, partition_set, verify_partition

__version__ = "0.1.0"
