import math

import numpy as np
import pytest

import idtkit

FIVE_CITERS = (
    [("p1", "P"), ("p2", "P"), ("p3", "P"), ("p4", "P"), ("p5", "P"),
     ("p3", "p1"), ("p4", "p1"), ("p4", "p2"), ("p5", "p2"), ("p5", "p3")],
    [("P", 2000, "V"), ("p1", 2001, "V"), ("p2", 2001, "V"),
     ("p3", 2002, "V"), ("p4", 2002, "V"), ("p5", 2003, "V")],
)


def test_ingest_and_metrics():
    corpus, report = idtkit.ingest(*FIVE_CITERS)
    assert corpus.paper_count == 6
    assert report["edges_kept"] == 10
    assert corpus.citations_of("P", cutoff=2001) == ["p1", "p2"]
    m = idtkit.metrics(corpus, "P", tie="max-id")
    assert (m["d"], m["b"], m["idi"], m["nid"]) == (3, 2, 5, 0.0)
    assert idtkit.metrics(corpus, "P")["idi"] == 6
    assert idtkit.metrics(corpus, "p5") is None
    tree = idtkit.idt(corpus, "P", tie="max-id")
    assert tree["parent"]["p4"] == "p2"


def test_unknown_paper():
    corpus, _ = idtkit.ingest(*FIVE_CITERS)
    with pytest.raises(KeyError):
        idtkit.metrics(corpus, "nope")


def test_bounds_and_shapes():
    assert [idtkit.idi_max(n) for n in range(1, 6)] == [1, 2, 4, 6, 9]
    assert idtkit.optimal_shape(10) == (4, 4)
    assert [len(idtkit.enumerate_trees(n)) for n in range(6)] == [1, 1, 2, 4, 9, 20]
    parents, edges, papers = idtkit.shape("broom", 5, k=2)
    assert idtkit.tree_stats(parents)["idi"] == 9
    corpus, _ = idtkit.ingest(edges, papers)
    assert idtkit.metrics(corpus, "P")["nid"] == 1.0


def test_kendall_and_mrr():
    assert idtkit.kendall_tau_distance(["a", "b", "c"], ["c", "b", "a"]) == 1.0
    assert idtkit.kendall_tau_distance(["a", "b", "c"], ["a", "c", "b"]) == pytest.approx(1 / 3)
    assert idtkit.mean_reciprocal_rank([1, 2, 4]) == pytest.approx(0.5833333333333334)


def test_pearson_matches_numpy():
    rng = np.random.default_rng(0)
    x = rng.normal(size=500)
    y = 0.4 * x + rng.normal(size=500)
    assert idtkit.pearson(list(x), list(y)) == pytest.approx(np.corrcoef(x, y)[0, 1], abs=1e-9)
    assert math.isnan(idtkit.pearson([1.0, 1.0], [1.0, 2.0]))


def test_experiments_on_synthetic_data():
    edges, papers, awardees = idtkit.synth_planted_tot(1)
    corpus, _ = idtkit.ingest(edges, papers)
    tot = idtkit.tot_experiment(corpus, awardees)
    assert tot["mrr_nid"] == 1.0
    assert tot["mrr_cite"] == 0.75

    edges, papers = idtkit.synth_random(n_papers=2000, seed=4)
    corpus, _ = idtkit.ingest(edges, papers)
    rows = idtkit.all_metrics(corpus, jobs=2)
    assert rows == idtkit.all_metrics(corpus, jobs=1)
    assert all(r["idi_min"] <= r["idi"] <= r["idi_max"] for r in rows)
    stats = idtkit.corpus_stats(corpus)
    assert sum(stats["depth_histogram"].values()) == len(rows)
