"""Hand-computed metric values shared by the scoring and acceptance tests."""

from llmowlr.scoring import SampleScore


def lengths(*pairs):
    """SampleScores carrying (length_orig, length_simp) pairs."""
    return [
        SampleScore(f"s{i}", "standard", 0, 1, True, length_orig=o, length_simp=s)
        for i, (o, s) in enumerate(pairs)
    ]


T, F = True, False

JACCARD = [
    ({1, 2}, {1, 2, 3}, 2 / 3),
    (set(), {1}, 0.0),
    ({1}, {1}, 1.0),
    ({1, 2}, {3, 4}, 0.0),
    ({1, 2, 3, 4}, {2, 3}, 0.5),
    ({5}, {1, 2, 3, 4, 5}, 0.2),
    ({1, 2, 3}, {2, 3, 4}, 0.5),
    ({0}, {0, 1}, 0.5),
]

F1 = [
    ([(T, T), (T, T), (F, F), (F, F)], 1.0),
    ([(T, F), (F, T)], 0.0),
    ([(T, T), (T, F)], 2 / 3),
    ([(T, T), (F, T), (F, F)], 2 / 3),
    ([(F, F), (F, F)], 1.0),
    ([(T, T), (T, T), (T, F), (F, T)], 2 / 3),
]

LENGTH_DROP = [
    (lengths((11, 3)), 100 * 8 / 11),
    (lengths((32, 21)), 34.375),
    (lengths((10, 5), (30, 30)), 12.5),
    (lengths((26, 18)), 100 * 8 / 26),
    (lengths((7, 7)), 0.0),
    (lengths((4, 2), (6, 6)), 20.0),
]

assert len(JACCARD) + len(F1) + len(LENGTH_DROP) == 20
