from __future__ import annotations

from itertools import combinations, product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from callsum.evaluation import (
    MosResult,
    RatingRecord,
    RougeScore,
    aggregate,
    lcs_length,
    mos,
    render_mos_table,
    rouge_l_sentence,
    rouge_l_summary,
)


def brute_force_lcs(a, b):
    """Longest common subsequence by enumerating every subsequence of a."""
    best = 0
    for r in range(len(a), 0, -1):
        if r <= best:
            break
        for picks in combinations(range(len(a)), r):
            sub = [a[i] for i in picks]
            it = iter(b)
            if all(tok in it for tok in sub):
                best = max(best, r)
                break
    return best


def test_lcs_examples():
    assert lcs_length(["a", "b", "c"], ["a", "c"]) == 2
    assert lcs_length(["a", "b", "c", "d"], ["b", "a", "d", "c"]) == 2
    assert lcs_length([], ["a"]) == 0
    assert lcs_length(["a"], []) == 0


def test_lcs_matches_brute_force_on_short_pairs():
    alphabet = ["x", "y", "z"]
    seqs = [list(p) for n in range(0, 5) for p in product(alphabet, repeat=n)]
    for a in seqs:
        for b in seqs:
            assert lcs_length(a, b) == brute_force_lcs(a, b)


@given(
    st.lists(st.sampled_from("abc"), max_size=8),
    st.lists(st.sampled_from("abc"), max_size=8),
)
def test_lcs_is_symmetric(a, b):
    assert lcs_length(a, b) == lcs_length(b, a)


def test_rouge_sentence_identity():
    tokens = "the quick brown fox".split()
    assert rouge_l_sentence(tokens, tokens) == RougeScore(1.0, 1.0, 1.0)


def test_rouge_sentence_hand_case():
    reference = "the cat sat on the mat".split()
    candidate = "the cat on mat".split()
    score = rouge_l_sentence(candidate, reference)
    assert score.precision == pytest.approx(1.0)
    assert score.recall == pytest.approx(0.6667, abs=1e-4)
    assert score.f1 == pytest.approx(0.8, abs=1e-4)


def test_rouge_sentence_disjoint_is_zero():
    assert rouge_l_sentence(["a", "b"], ["c", "d"]) == RougeScore(0.0, 0.0, 0.0)


def test_rouge_sentence_swap_swaps_p_and_r():
    a = "one two three four".split()
    b = "one three".split()
    ab = rouge_l_sentence(a, b)
    ba = rouge_l_sentence(b, a)
    assert ab.precision == ba.recall and ab.recall == ba.precision


def test_rouge_sentence_rejects_empty():
    with pytest.raises(ValueError):
        rouge_l_sentence([], ["a"])
    with pytest.raises(ValueError):
        rouge_l_sentence(["a"], [])


def test_rouge_summary_identity_both_modes():
    sentences = ["The refund lands friday.", "The case closes after that."]
    for mode in ("summary_level", "flat"):
        score = rouge_l_summary(sentences, sentences, mode=mode)
        assert score == RougeScore(1.0, 1.0, 1.0)


def test_rouge_summary_single_sentence_collapses_to_sentence_level():
    candidate = ["the cat on mat"]
    reference = ["the cat sat on the mat"]
    expected = rouge_l_sentence("the cat on mat".split(), "the cat sat on the mat".split())
    for mode in ("summary_level", "flat"):
        assert rouge_l_summary(candidate, reference, mode=mode) == expected


def test_rouge_summary_union_covers_one_of_two_gold_sentences():
    gold = ["alpha beta gamma delta", "epsilon zeta eta theta"]
    candidate = ["alpha beta gamma delta"]
    score = rouge_l_summary(candidate, gold, mode="summary_level")
    assert score.precision == pytest.approx(1.0)
    assert score.recall == pytest.approx(0.5)


def test_rouge_summary_union_counts_each_position_once():
    # both candidate sentences match the same gold tokens; the union must not
    # double-count them
    gold = ["alpha beta gamma delta"]
    candidate = ["alpha beta", "alpha beta gamma"]
    score = rouge_l_summary(candidate, gold, mode="summary_level")
    assert score.recall == pytest.approx(3 / 4)
    assert score.precision == pytest.approx(3 / 5)


def test_rouge_summary_appending_gold_sentence_never_decreases_recall():
    gold = ["the refund lands within five days", "the case number arrives by text"]
    candidate = ["the parcel was lost"]
    base = rouge_l_summary(candidate, gold)
    extended = rouge_l_summary(candidate + [gold[1]], gold)
    assert extended.recall >= base.recall


@given(st.lists(st.sampled_from(["red", "blue", "green", "gold"]), min_size=1, max_size=10))
def test_rouge_identity_property(tokens):
    text = " ".join(tokens)
    assert rouge_l_summary([text], [text]) == RougeScore(1.0, 1.0, 1.0)
    assert rouge_l_sentence(tokens, tokens) == RougeScore(1.0, 1.0, 1.0)


def test_aggregate_single_call_is_identity():
    score = RougeScore(0.5, 0.4, 0.44)
    report = aggregate({("lead7", "c1"): score})
    assert report.macro["lead7"] == score


def test_aggregate_means_f1_per_call():
    report = aggregate(
        {
            ("lead7", "c1"): RougeScore(0.6, 0.6, 0.4),
            ("lead7", "c2"): RougeScore(0.6, 0.6, 0.5),
        }
    )
    assert report.macro["lead7"].f1 == pytest.approx(0.45)


def test_aggregate_does_not_recompute_f1_from_macro_p_r():
    a = rouge_l_sentence_like(1.0, 0.2)
    b = rouge_l_sentence_like(0.2, 1.0)
    report = aggregate({("m", "c1"): a, ("m", "c2"): b})
    macro = report.macro["m"]
    assert macro.precision == pytest.approx(0.6)
    assert macro.recall == pytest.approx(0.6)
    assert macro.f1 == pytest.approx(1 / 3, abs=1e-4)
    harmonic = 2 * macro.precision * macro.recall / (macro.precision + macro.recall)
    assert abs(macro.f1 - harmonic) > 0.2


def rouge_l_sentence_like(p, r):
    f1 = 0.0 if p + r == 0 else 2 * p * r / (p + r)
    return RougeScore(p, r, f1)


def test_aggregate_is_permutation_invariant():
    scores = {
        ("m", f"c{i}"): rouge_l_sentence_like(0.1 * i, 0.05 * i) for i in range(1, 6)
    }
    forward = aggregate(scores)
    backward = aggregate(dict(reversed(list(scores.items()))))
    assert forward.macro == backward.macro


def test_aggregate_rejects_model_without_calls():
    with pytest.raises(ValueError):
        aggregate({("m", "c1"): RougeScore(1, 1, 1)}, models=["m", "ghost"])


def test_mos_means_and_counts():
    ratings = [
        RatingRecord("a1", "c1", "A", "topicsum", 6),
        RatingRecord("a1", "c2", "B", "topicsum", 7),
        RatingRecord("a2", "c1", "C", "topicsum", 5),
    ]
    result = mos(ratings)
    assert result.scores["topicsum"] == pytest.approx(6.0)
    assert result.counts["topicsum"] == 3


def test_mos_single_rating():
    result = mos([RatingRecord("a1", "c1", "A", "lead7", 9)])
    assert result.scores["lead7"] == 9.0


def test_mos_rejects_empty():
    with pytest.raises(ValueError):
        mos([])


def test_mos_invariant_to_order_and_annotator_labels():
    ratings = [
        RatingRecord("a1", "c1", "A", "m", 4),
        RatingRecord("a2", "c1", "B", "m", 8),
    ]
    relabelled = [
        RatingRecord("z9", "c1", "B", "m", 8),
        RatingRecord("z3", "c1", "A", "m", 4),
    ]
    assert mos(ratings).scores == mos(relabelled).scores


def test_rating_record_validation():
    with pytest.raises(ValueError):
        RatingRecord("a", "c", "A", "m", 11)
    with pytest.raises(ValueError):
        RatingRecord("a", "c", "A", "m", 0)
    with pytest.raises(ValueError):
        RatingRecord("a", "c", "A", "m", 6.5)  # type: ignore[arg-type]


def test_mos_table_sorted_descending():
    result = MosResult(
        scores={"topicsum": 5.96, "lead7": 5.14, "rbmsum": 4.20, "bertsum": 3.66},
        counts={"topicsum": 48, "lead7": 48, "rbmsum": 48, "bertsum": 48},
    )
    table = render_mos_table(result, "tsv", {"topicsum": "TopicSum", "lead7": "Lead-7", "rbmsum": "RBMSum", "bertsum": "BERTSum"})
    lines = table.strip().splitlines()
    assert lines[0] == "Model\tMOS"
    assert lines[1] == "TopicSum\t5.96"
    assert lines[-1] == "BERTSum\t3.66"
