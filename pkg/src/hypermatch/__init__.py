"""Exact finite-size tools linking fractional Dirac-type matching thresholds in
uniform hypergraphs with tail bounds for sums of i.i.d. nonnegative variables."""

from .bridge import (BridgeCertificate, count_heavy_sequences, count_heavy_subsets,
                     cover_to_distribution, dist_to_hypergraph, equivalence_probe,
                     weight_distribution)
from .errors import (BoundViolationError, FormatError, HypermatchError, InvalidQueryError,
                     ResourceLimitError, SolverError, ValidationError)
from .feige import (DiscreteDistribution, conjectured_extremizer, damping_transform, iid_tail,
                    mean, theta_lower_search)
from .fraclp import (FractionalWeights, duality_certificate, exact_f_0_s,
                     max_fractional_matching, min_fractional_cover)
from .hypergraph import (Hypergraph, Matching, degree, enumerate_hypergraphs, exact_m_d_s,
                         has_perfect_matching, max_matching, min_d_degree)
from .thresholds import (BoundReport, conjectured_md_threshold, deviation_bound_report,
                         feige_conjecture_value, garnett_bound, han_g, kot_bound, markov_bound,
                         matching_bound_report)

__version__ = "0.1.0"
