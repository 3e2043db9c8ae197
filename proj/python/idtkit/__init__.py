"""Influence dispersion trees for citation networks."""

from ._core import (
    Corpus,
    DataError,
    UnknownPaperError,
    all_metrics,
    corpus_stats,
    enumerate_trees,
    idi_max,
    idi_min,
    ideal_idi,
    idt,
    ingest,
    ingest_files,
    kendall_tau_distance,
    mean_reciprocal_rank,
    metrics,
    optimal_shape,
    pearson,
    shape,
    synth_planted_tot,
    synth_random,
    tot_experiment,
    tree_stats,
    z_experiment,
)

__all__ = [name for name in dir() if not name.startswith("_")]
