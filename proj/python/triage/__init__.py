"""Python interface to the triage core.

Thin wrappers over the native ``_core`` module that decode its JSON results
into plain dicts and lists.
"""

import json

from . import _core
from ._core import (
    ConfigError,
    IncompleteInputError,
    IngestionError,
    InputError,
    NotFoundError,
    TriageError,
    aggregate_sentence_scores as _aggregate,
    lexicon_score,
    normalize_text,
)

__all__ = [
    "ConfigError",
    "IncompleteInputError",
    "IngestionError",
    "InputError",
    "NotFoundError",
    "TriageError",
    "aggregate_sentence_scores",
    "agreement_from_counts",
    "extract_passages",
    "lexicon_score",
    "normalize_text",
    "passage_precision",
    "resolve_reference",
    "segment_transcript",
    "sentence_recall",
    "top_k_precision",
    "window_starts",
]


def _cfg(config):
    return json.dumps(config) if config else ""


def segment_transcript(raw_text, transcript_id, aliases=()):
    return json.loads(_core.segment_transcript_json(raw_text, transcript_id, list(aliases)))


def window_starts(n, config=None):
    return _core.window_starts(n, _cfg(config))


def aggregate_sentence_scores(window_scores, n, config=None):
    return _aggregate(dict(window_scores), n, _cfg(config))


def resolve_reference(context, target_index, aliases, names=()):
    return json.loads(
        _core.resolve_reference_json(list(context), target_index, list(aliases), list(names))
    )


def extract_passages(transcript_id, theme, scores, gate_flags, config=None):
    return json.loads(
        _core.extract_passages_json(transcript_id, theme, list(scores), list(gate_flags), _cfg(config))
    )


def passage_precision(passages, transcript_id, theme, gold):
    return _core.passage_precision(json.dumps(passages), transcript_id, theme, list(gold))


def top_k_precision(passages, transcript_id, theme, gold, k=3):
    return _core.top_k_precision(json.dumps(passages), transcript_id, theme, list(gold), k)


def sentence_recall(scores, theme, gold, config=None):
    return _core.sentence_recall(list(scores), theme, list(gold), _cfg(config))


def agreement_from_counts(theme, fp, fn):
    return json.loads(_core.agreement_from_counts_json(theme, tuple(fp), tuple(fn)))
