#!/usr/bin/env python3
"""Writes demo/corpus.jsonl: hand-labelled turns over the demo grammar's vocabulary.

Each turn lists its words, the gold head-trace gaps (gap i = after word i) and
one S3 label per gap. Gap scores are derived from the labels: gold trace gaps
score high, other S3+ gaps medium, S3? low, S3- mostly below 0.01 with a few
deliberate false alarms so that gating has something to reject.
"""
import hashlib
import json
import pathlib

P, M, Q = "S3+", "S3-", "S3?"

TURNS = [
    ("1a", "gestern reparierte er den wagen", [5], [Q, M, M, M, P]),
    ("1a-svo", "er reparierte den wagen", [4], [M, M, M, P]),
    ("1a-v1", "reparierte er den wagen", [4], [M, M, M, P]),
    ("1b-clause", "daß er gestern den wagen reparierte", [], [M, M, M, M, M, P]),
    ("1b", "ich dachte daß er gestern den wagen reparierte", [8], [M, P, M, M, M, M, M, P]),
    ("3a", "ich glaube du sollst nicht töten", [6], [M, P, M, M, M, P]),
    ("3b", "ich glaube daß du nicht töten sollst", [7], [M, P, M, M, M, M, P]),
    ("5-free", "im april", [], [M, P]),
    ("5-urlaub", "anfang april bin ich in urlaub", [6], [M, Q, M, M, M, P]),
    ("5-zeit", "ende april habe ich noch zeit", [6], [M, Q, M, M, M, P]),
    ("heute-kaufte", "heute kaufte er das auto", [5], [Q, M, M, M, P]),
    ("sah-ihn", "er sah ihn", [3], [M, M, P]),
    ("sah-gestern", "ich sah gestern den wagen", [5], [M, M, Q, M, P]),
    ("sollst-reparieren", "du sollst den wagen reparieren", [5], [M, M, M, M, P]),
    ("willst-v1", "willst du das buch kaufen", [5], [M, M, M, M, P]),
    ("dann-kaufte", "dann kaufte er das buch", [5], [Q, M, M, M, P]),
    ("dass-kaufte", "daß er das auto kaufte", [], [M, M, M, M, P]),
    ("habe-zeit", "ich habe noch zeit", [4], [M, M, M, P]),
    ("bin-urlaub", "ich bin in urlaub", [4], [M, M, M, P]),
    ("heute-sah", "heute sah ich ihn", [4], [Q, M, M, P]),
    ("dachte-v2", "ich dachte er reparierte den wagen", [6], [M, P, M, M, M, P]),
    ("mai-zeit", "im mai habe ich zeit", [5], [M, Q, M, M, P]),
    ("willst-kaufen", "du willst das auto kaufen", [5], [M, M, M, M, P]),
    ("no-parse", "wir kaufen", [], [M, P]),
]


def jitter(key, lo, hi):
    h = int(hashlib.sha256(key.encode()).hexdigest()[:8], 16) / 0xFFFFFFFF
    return round(lo + (hi - lo) * h, 6)


def scores_for(tid, n, gold, labels):
    out = []
    for g in range(1, n + 1):
        key = f"{tid}:{g}"
        lab = labels[g - 1]
        if g in gold:
            s = jitter(key, 0.6, 0.98)
        elif lab == P and not gold and g == n:
            # verb-final turn: no trace expected, the final gap is kept below the gate
            s = jitter(key, 0.001, 0.008)
        elif lab == P:
            s = jitter(key, 0.2, 0.7)
        elif lab == Q:
            s = jitter(key, 0.01, 0.2)
        else:
            s = jitter(key, 0.0, 0.006)
            if jitter(key + "fa", 0, 1) < 0.15:
                s = jitter(key + "hi", 0.011, 0.08)
        out.append(s)
    return out


def main():
    lines = [json.dumps({"corpus": {"source": "hand-labelled demo turns", "generator": "demo/make_corpus.py"}})]
    for tid, text, gold, labels in TURNS:
        words = text.split()
        assert len(labels) == len(words), tid
        rec = {
            "id": tid,
            "words": words,
            "gap_scores": scores_for(tid, len(words), gold, labels),
            "gold_traces": gold,
            "s3_labels": labels,
        }
        lines.append(json.dumps(rec, ensure_ascii=False, sort_keys=True))
    out = pathlib.Path(__file__).resolve().parent / "corpus.jsonl"
    out.write_text("\n".join(lines) + "\n", encoding="utf-8")


if __name__ == "__main__":
    main()
