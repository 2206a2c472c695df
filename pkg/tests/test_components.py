import math

import numpy as np
import pytest

from guidiff.assignment import solve_assignment
from guidiff.components import default_gamma_cutoff, gamma, match_components

from conftest import component


class TestGamma:
    def test_identical_bounds(self):
        a = component((10, 20, 100, 50))
        assert gamma(a, a) == 0.0

    def test_hand_evaluation(self):
        a = component((10, 20, 100, 50))
        b = component((15, 20, 100, 40))
        assert gamma(a, b) == 15.0  # 5 + 0 + 0 + 10

    def test_far_apart(self):
        assert gamma(component((0, 0, 10, 10)), component((100, 100, 10, 10))) == 200.0

    def test_symmetry(self, rng):
        for _ in range(100):
            a = component(tuple(int(v) for v in rng.integers(0, 100, size=4)))
            b = component(tuple(int(v) for v in rng.integers(0, 100, size=4)))
            assert gamma(a, b) == gamma(b, a)


class TestMatchComponents:
    def test_identical_sets_all_matched(self):
        leaves = [component((i * 20, 0, 10, 10), node_index=i) for i in range(4)]
        result = match_components(leaves, leaves, gamma_cutoff=100)
        assert len(result.matched) == 4
        assert all(g == 0.0 for _, _, g in result.matched)
        assert result.removed == () and result.added == ()

    def test_far_extra_leaf_is_removed(self):
        old = [component((0, 0, 10, 10), node_index=0), component((500, 500, 10, 10), node_index=1)]
        new = [component((0, 0, 10, 10), node_index=0)]
        result = match_components(old, new, gamma_cutoff=50)
        assert len(result.matched) == 1
        assert [c.node_index for c in result.removed] == [1]

    def test_tie_broken_by_node_index(self):
        # two old leaves equidistant from the single new leaf
        old = [component((0, 0, 10, 10), node_index=0), component((20, 0, 10, 10), node_index=1)]
        new = [component((10, 0, 10, 10), node_index=0)]
        result = match_components(old, new, gamma_cutoff=100)
        assert len(result.matched) == 1
        matched_old, matched_new, g = result.matched[0]
        assert matched_old.node_index == 0  # lower old index wins the tie
        assert g == 10.0
        assert [c.node_index for c in result.removed] == [1]

    def test_zero_area_leaves_skipped(self):
        old = [component((0, 0, 10, 10), node_index=0), component((5, 5, 0, 0), node_index=1)]
        new = [component((0, 0, 10, 10), node_index=0)]
        result = match_components(old, new, gamma_cutoff=100)
        assert len(result.matched) == 1
        assert result.removed == ()  # the zero-area leaf is not "removed", just excluded

    def test_partition_property(self, rng):
        def boxes(count):
            return [
                component(
                    (int(rng.integers(0, 80)), int(rng.integers(0, 80)),
                     int(rng.integers(1, 60)), int(rng.integers(1, 60))),
                    node_index=i,
                )
                for i in range(count)
            ]

        for _ in range(50):
            old = boxes(int(rng.integers(0, 7)))
            new = boxes(int(rng.integers(0, 7)))
            result = match_components(old, new, gamma_cutoff=60)
            assert len(result.matched) + len(result.removed) == len(old)
            assert len(result.matched) + len(result.added) == len(new)
            matched_old = [o.node_index for o, _, _ in result.matched]
            matched_new = [n.node_index for _, n, _ in result.matched]
            assert len(set(matched_old)) == len(matched_old)
            assert len(set(matched_new)) == len(matched_new)
            assert all(g <= 60 for _, _, g in result.matched)

    def test_common_translation_invariance(self, rng):
        for _ in range(30):
            boxes = [tuple(int(v) for v in rng.integers(10, 60, size=4)) for _ in range(5)]
            old = [component(b, node_index=i) for i, b in enumerate(boxes)]
            new = [
                component((b[0] + 3, b[1] + 2, b[2], b[3]), node_index=i)
                for i, b in enumerate(boxes)
            ]
            base = match_components(old, new, gamma_cutoff=500)
            dx, dy = int(rng.integers(1, 30)), int(rng.integers(1, 30))
            old_shifted = [
                component((b[0] + dx, b[1] + dy, b[2], b[3]), node_index=i)
                for i, b in enumerate(boxes)
            ]
            new_shifted = [
                component((b[0] + 3 + dx, b[1] + 2 + dy, b[2], b[3]), node_index=i)
                for i, b in enumerate(boxes)
            ]
            shifted = match_components(old_shifted, new_shifted, gamma_cutoff=500)
            assert [(o.node_index, n.node_index) for o, n, _ in base.matched] == [
                (o.node_index, n.node_index) for o, n, _ in shifted.matched
            ]

    def test_greedy_bounded_by_optimal_assignment(self, rng):
        def boxes(count):
            return [
                component(
                    (int(rng.integers(0, 90)), int(rng.integers(0, 90)),
                     int(rng.integers(1, 60)), int(rng.integers(1, 60))),
                    node_index=i,
                )
                for i in range(count)
            ]

        for _ in range(40):
            n = int(rng.integers(1, 7))
            old = boxes(n)
            new = boxes(n)
            result = match_components(old, new, gamma_cutoff=float("inf"))
            greedy_sum = math.fsum(g for _, _, g in result.matched)
            costs = np.array([[gamma(o, c) for c in new] for o in old])
            optimal_sum = math.fsum(costs[i, j] for i, j in solve_assignment(costs))
            assert greedy_sum >= optimal_sum - 1e-9

    def test_matches_optimal_set_without_ties(self):
        # well-separated components, slightly perturbed: greedy == optimal
        old = [
            component((0, 0, 30, 10), node_index=0),
            component((100, 0, 40, 12), node_index=1),
            component((0, 100, 50, 14), node_index=2),
        ]
        new = [
            component((1, 0, 30, 10), node_index=0),
            component((102, 0, 40, 12), node_index=1),
            component((0, 103, 50, 14), node_index=2),
        ]
        result = match_components(old, new, gamma_cutoff=float("inf"))
        costs = np.array([[gamma(o, c) for c in new] for o in old])
        optimal = set(solve_assignment(costs))
        got = {(o.node_index, n.node_index) for o, n, _ in result.matched}
        assert got == optimal == {(0, 0), (1, 1), (2, 2)}


def test_default_gamma_cutoff():
    assert default_gamma_cutoff(1080, 1920) == pytest.approx(750.0)
