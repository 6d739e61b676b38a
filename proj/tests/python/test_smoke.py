import math

import pytest

import triage


def test_segment_transcript_matches_example():
    t = triage.segment_transcript(
        "Q. Did you see Ms. Smith at 9 p.m.? A. I did.\n\nShe was calm.", "t1", ["Ms. Smith"]
    )
    texts = [s["text"] for s in t["sentences"]]
    assert all(not any(ch.isdigit() for ch in x) for x in texts)
    assert all(len(x.split()) >= 3 for x in texts)
    assert "she was calm." in texts
    assert [s["index"] for s in t["sentences"]] == list(range(len(texts)))
    assert t["defendant_aliases"] == ["ms. smith"]


def test_malformed_utf8_raises():
    with pytest.raises(triage.IngestionError):
        triage._core.segment_transcript_json(b"the witness \xff spoke.", "t", ["x"])


def test_windows_and_aggregation():
    assert triage.window_starts(12) == [0, 1, 2]
    assert triage.window_starts(5) == [0]
    starts = triage.window_starts(30)
    scores = {s: (s % 7) / 7 for s in starts}
    agg = triage.aggregate_sentence_scores(scores, 30)
    for i in range(30):
        member = [scores[s] for s in starts if s <= i < s + 10]
        assert math.isclose(agg[i], sum(member) / len(member), abs_tol=1e-12)
    with pytest.raises(triage.IncompleteInputError):
        triage.aggregate_sentence_scores({0: 0.5}, 12)


def test_lexicon_score():
    entries = [("EMOT", "remorse", 1.0)]
    assert math.isclose(triage.lexicon_score(entries, "EMOT", "she showed no remorse"), 1 - math.exp(-1))
    assert triage.lexicon_score(entries, "SEX", "she showed no remorse") == 0.0


def test_reference_rules():
    v = triage.resolve_reference(["ms. smith took the stand.", "she cried."], 1, ["ms. smith", "smith"])
    assert v["mentions_defendant"] and v["rule"] == "pronoun_chain"
    v = triage.resolve_reference(["smith lied."], 0, ["smith"])
    assert v["rule"] == "direct_alias"
    v = triage.resolve_reference(
        ["ms. smith spoke.", "then karen arrived.", "she looked calm."], 2,
        ["ms. smith", "smith"], ["karen"],
    )
    assert v == {"mentions_defendant": False, "rule": "none", "evidence": []}


def test_passages_and_metrics():
    scores = [0.6, 0.95, 0.55, 0.2]
    flags = ["not_checked", "about_defendant", "not_checked", "not_checked"]
    ps = triage.extract_passages("t", "EMOT", scores, flags)
    assert len(ps) == 1
    assert (ps[0]["start"], ps[0]["end"], ps[0]["peak_score"]) == (0, 2, 0.95)
    assert triage.passage_precision(ps, "t", "EMOT", [2]) == 1.0
    assert triage.passage_precision([], "t", "EMOT", [2]) is None
    assert triage.top_k_precision(ps, "t", "EMOT", [3]) == 0.0
    assert triage.sentence_recall(scores, "EMOT", [0, 3]) == 0.5
    assert triage.sentence_recall(scores, "EMOT", []) is None


def test_agreement_counts():
    r = triage.agreement_from_counts("EMOT", (16, 5, 1), (6, 0, 0))
    assert math.isclose(r["model_lawyer_agreement"], 16 / 28, abs_tol=1e-4)
    r = triage.agreement_from_counts("EMOT", (0, 0, 0), (0, 0, 0))
    assert r["model_lawyer_agreement"] is None


def test_bad_theme_rejected():
    with pytest.raises(triage.InputError):
        triage.lexicon_score([], "XYZ", "text")
