"""Local search for stable marriage problems with ties and incomplete lists."""

from .instance import (SINGLE, TABLE1, Comparison, Instance, InstanceError, InstanceSyntaxError,
                       Person, Side, man, parse_instance, prefers, read_instance,
                       serialize_instance, table1, woman, write_instance)
from .matching import (BlockingPair, Evaluation, Matching, MatchingError, blocking_pairs,
                       evaluate, is_perfect, is_stable, parse_matching, remove_blocking_pair,
                       size, undominated_blocking_pairs)
from .localsearch import (SearchConfig, SearchResult, Variant, best_neighbor, make_rng,
                          neighborhood_pairs, random_matching, random_walk, search)

__version__ = "0.1.0"
