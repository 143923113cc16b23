"""Best-match Jaccard similarity for clusterings with overlaps and outliers."""

from .errors import ClusteringError, UniverseMismatch
from .model import Clustering, MembershipIndex, build_index, outliers, validate
from .similarity import (
    MatchReport,
    PairScores,
    PerturbationStats,
    best_match,
    fstar_w,
    fstar_w_asym,
    fstar_wo,
    fstar_wo_asym,
    match_report,
    pair_scores,
    perturbation_stats,
)
from .baselines import omega_index, onmi, onmi_lfk, onmi_mgh
from .io import read_clusters, write_clusters, parse_clusters, serialize_clusters

__version__ = "0.1.0"
