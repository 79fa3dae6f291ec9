#!/usr/bin/env python3
"""Brute-force reference for the corpus evaluation metrics.

Reads a JSON file of corpora, evaluates each one by direct transcription of
the metric definitions (no project code, no vectorization), and writes the
results as JSON. The acceptance suite runs this script against the library on
randomly generated corpora and requires agreement within 1e-9.

Input schema:
    {"corpora": [{"clips": [{"outcome": "CC", "truth": [7 floats],
                             "pred": [7 floats]}, ...]}, ...]}

Output schema (one entry per corpus):
    {"results": [{"n": int,
                  "overall": {"kld": f, "rmse": f, "f1": f},
                  "by_outcome": {"CC": {"kld": f, "rmse": f, "f1": f, "n": int}},
                  "confusion": [[int x7] x7]}]}

Conventions (these are the documented metric contract):
  - predictions are smoothed with eps=1e-6 before KLD; truth is used as-is
    with the 0*ln(0) = 0 convention; natural log.
  - labels are argmax with ties broken by lowest index.
  - per-corpus values are unweighted means over clips; per-outcome entries
    average only that outcome's clips.
  - weighted F1 counts only classes with true support.

Usage: metrics_oracle.py INPUT.json OUTPUT.json
"""
import json
import math
import sys

EPS = 1e-6


def smooth(d):
    return [(x + EPS) / (1.0 + 7.0 * EPS) for x in d]


def kld(truth, pred):
    total = 0.0
    for t, p in zip(truth, pred):
        if t > 0.0:
            total += t * math.log(t / p)
    return total


def rmse(a, b):
    return math.sqrt(sum((x - y) ** 2 for x, y in zip(a, b)) / 7.0)


def argmax(d):
    best = 0
    for i in range(1, 7):
        if d[i] > d[best]:
            best = i
    return best


def f1_weighted(truths, preds):
    total = len(truths)
    acc = 0.0
    for cls in range(7):
        support = sum(1 for t in truths if t == cls)
        if support == 0:
            continue
        tp = sum(1 for t, p in zip(truths, preds) if t == cls and p == cls)
        fp = sum(1 for t, p in zip(truths, preds) if t != cls and p == cls)
        fn = support - tp
        prec = tp / (tp + fp) if tp + fp else 0.0
        rec = tp / (tp + fn) if tp + fn else 0.0
        f1 = 2 * prec * rec / (prec + rec) if prec + rec else 0.0
        acc += f1 * support / total
    return acc


def evaluate(clips):
    klds, rmses, tlabels, plabels, outcomes = [], [], [], [], []
    confusion = [[0] * 7 for _ in range(7)]
    for clip in clips:
        truth, pred = clip["truth"], clip["pred"]
        klds.append(kld(truth, smooth(pred)))
        rmses.append(rmse(truth, pred))
        t, p = argmax(truth), argmax(pred)
        tlabels.append(t)
        plabels.append(p)
        confusion[t][p] += 1
        outcomes.append(clip["outcome"])

    n = len(clips)
    result = {
        "n": n,
        "overall": {
            "kld": sum(klds) / n,
            "rmse": sum(rmses) / n,
            "f1": f1_weighted(tlabels, plabels),
        },
        "by_outcome": {},
        "confusion": confusion,
    }
    for oc in ("CC", "DC", "CD", "DD"):
        idx = [i for i, o in enumerate(outcomes) if o == oc]
        if not idx:
            continue
        result["by_outcome"][oc] = {
            "kld": sum(klds[i] for i in idx) / len(idx),
            "rmse": sum(rmses[i] for i in idx) / len(idx),
            "f1": f1_weighted([tlabels[i] for i in idx], [plabels[i] for i in idx]),
            "n": len(idx),
        }
    return result


def main():
    if len(sys.argv) != 3:
        sys.exit(__doc__)
    with open(sys.argv[1]) as fh:
        payload = json.load(fh)
    results = [evaluate(corpus["clips"]) for corpus in payload["corpora"]]
    with open(sys.argv[2], "w") as fh:
        json.dump({"results": results}, fh)


if __name__ == "__main__":
    main()
