import itertools
import json
import math
from collections import Counter

import numpy as np
import pytest
from scipy import stats

from lrc import (
    Triplet,
    d_lr,
    expected_distance_experiment,
    minrti_reduction,
    random_tree,
    restrict,
)
from lrc.generate import ExperimentStats, caterpillar, default_labels
from lrc.oracle import brute_min_disagreement, enumerate_trees


class TestRandomTree:
    def test_single_leaf(self):
        assert random_tree(["a"], 0).newick() == "a;"

    def test_empty(self):
        assert random_tree([], 0).is_empty

    def test_deterministic(self):
        labels = default_labels(20)
        assert random_tree(labels, 42) == random_tree(labels, 42)
        assert random_tree(labels, 42) != random_tree(labels, 43)

    def test_generator_stream(self):
        rng = np.random.Generator(np.random.PCG64(9))
        first, second = random_tree("abcdef", rng), random_tree("abcdef", rng)
        rng = np.random.Generator(np.random.PCG64(9))
        assert random_tree("abcdef", rng) == first
        assert random_tree("abcdef", rng) == second

    def test_duplicate_labels(self):
        with pytest.raises(ValueError):
            random_tree("aab", 0)

    def test_uniform_on_three_labels(self):
        counts = Counter(random_tree("abc", seed).newick() for seed in range(30000))
        assert len(counts) == 3
        assert stats.chisquare(list(counts.values())).pvalue > 0.001

    def test_all_shapes_on_four_labels(self):
        seen = {random_tree("abcd", seed) for seed in range(2000)}
        assert seen == set(enumerate_trees("abcd"))


class TestExperiment:
    def test_same_seed_same_stats(self):
        assert expected_distance_experiment(10, 20, 3) == expected_distance_experiment(10, 20, 3)

    def test_workers_do_not_change_result(self):
        serial = expected_distance_experiment(12, 16, 5)
        assert expected_distance_experiment(12, 16, 5, workers=2) == serial

    def test_invariants_and_json(self):
        result = expected_distance_experiment(16, 30, 1)
        assert 0 <= result.min <= result.mean_distance <= result.max <= result.n - 1
        text = result.to_json()
        assert "\n" not in text
        assert json.loads(text) == {
            "n": 16,
            "trials": 30,
            "mean_distance": result.mean_distance,
            "min": result.min,
            "max": result.max,
            "seed": 1,
        }
        assert result.bound == pytest.approx(16 - 12)

    def test_matches_exact_expectation_at_four_labels(self):
        shapes = list(enumerate_trees(default_labels(4)))
        dists = [d_lr(a, b) for a, b in itertools.product(shapes, repeat=2)]
        exact = sum(dists) / len(dists)
        sd = math.sqrt(sum((x - exact) ** 2 for x in dists) / len(dists))
        trials = 3000
        result = expected_distance_experiment(4, trials, 2024)
        assert result.mean_distance > 0
        assert abs(result.mean_distance - exact) <= 3 * sd / math.sqrt(trials)

    @pytest.mark.parametrize("n, trials", [(3, 10), (4, 0)])
    def test_errors(self, n, trials):
        with pytest.raises(ValueError):
            expected_distance_experiment(n, trials, 0)


def test_stats_is_a_value():
    assert ExperimentStats(4, 1, 1.0, 1, 1, 0) == ExperimentStats(4, 1, 1.0, 1, 1, 0)


class TestReduction:
    def T(self, *texts):
        return [Triplet.parse(t) for t in texts]

    def test_single_triplet(self):
        (tree,) = minrti_reduction(self.T("ab|c"), 1)
        assert tree.newick() == "(((a,b),c),g1.1);"

    def test_shared_label_set_and_caterpillars(self):
        out = minrti_reduction(self.T("ab|c", "ab|d", "cd|e"), 3)
        labels = out[0].labels
        assert all(t.labels == labels for t in out)
        gadget = [f"g2.{j}" for j in (1, 2, 3)]
        assert set(gadget) <= labels
        assert all(restrict(t, gadget) == caterpillar(gadget) for t in out)

    @pytest.mark.parametrize(
        "triplets, minrti",
        [(("ab|c", "ab|d"), 0), (("ab|c", "ac|b"), 1)],
    )
    def test_oracle_value(self, triplets, minrti):
        r = self.T(*triplets)
        out = minrti_reduction(r, 1)
        base = {lab for t in r for lab in t}
        assert brute_min_disagreement(out) == len(r) * (len(base) - 3) + minrti

    def test_prefix_avoids_collisions(self):
        out = minrti_reduction(self.T("g1,a|b"), 1)
        assert out[0].labels == {"g1", "a", "b", "gg1.1"}

    @pytest.mark.parametrize("triplets, gadget", [((), 1), (("ab|c",), 0)])
    def test_errors(self, triplets, gadget):
        with pytest.raises(ValueError):
            minrti_reduction(self.T(*triplets), gadget)

    def test_bad_label(self):
        with pytest.raises(ValueError):
            minrti_reduction([Triplet("a b", "c", "d")], 1)


def test_caterpillar():
    assert caterpillar("abcd").newick() == "(((a,b),c),d);"
    assert caterpillar([]).is_empty
