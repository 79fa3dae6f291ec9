#!/usr/bin/env python3
"""Independent computation of the expected values frozen into the test suites.

Every number asserted with a tight tolerance in tests/ was produced by this
script (direct formula transcription, no project code involved). Re-run to
regenerate:

    python3 scripts/derived_values.py
"""
import math

EMOTIONS = ["joy", "neutral", "surprise", "anger", "disgust", "fear", "sadness"]
UNIFORM = [1.0 / 7.0] * 7


def normalize(xs):
    s = sum(xs)
    return [x / s for x in xs]


def smooth(d, eps):
    return [(x + eps) / (1.0 + 7.0 * eps) for x in d]


def kld(truth, pred):
    total = 0.0
    for t, p in zip(truth, pred):
        if t > 0.0:
            total += t * math.log(t / p)
    return total


def rmse(a, b):
    return math.sqrt(sum((x - y) ** 2 for x, y in zip(a, b)) / 7.0)


def bci(face, context, prior=None, eps=1e-6):
    prior = prior or UNIFORM
    f = smooth(face, eps)
    c = smooth(context, eps)
    return normalize([fi * ci / pi for fi, ci, pi in zip(f, c, prior)])


def f1_weighted(truths, preds):
    classes = sorted(set(truths))
    total = len(truths)
    acc = 0.0
    for cls in classes:
        tp = sum(1 for t, p in zip(truths, preds) if t == cls and p == cls)
        fp = sum(1 for t, p in zip(truths, preds) if t != cls and p == cls)
        fn = sum(1 for t, p in zip(truths, preds) if t == cls and p != cls)
        prec = tp / (tp + fp) if tp + fp else 0.0
        rec = tp / (tp + fn) if tp + fn else 0.0
        f1 = 2 * prec * rec / (prec + rec) if prec + rec else 0.0
        support = sum(1 for t in truths if t == cls)
        acc += f1 * support / total
    return acc


def show(label, value):
    if isinstance(value, list):
        print(f"{label}: [{', '.join(f'{v:.12f}' for v in value)}]")
    else:
        print(f"{label}: {value:.12f}")


def main():
    show("normalize [0.3,0.3,0.3,0.05x4] (sum 1.10)",
         normalize([0.3, 0.3, 0.3, 0.05, 0.05, 0.05, 0.05]))

    one_hot_joy = [1.0, 0, 0, 0, 0, 0, 0]
    show("smooth(one-hot joy, 1e-6)", smooth(one_hot_joy, 1e-6))
    show("  peak  (1+1e-6)/(1+7e-6)", (1 + 1e-6) / (1 + 7e-6))
    show("  other    1e-6/(1+7e-6)", 1e-6 / (1 + 7e-6))

    face = [0.6, 0.2, 0.1, 0.05, 0.02, 0.02, 0.01]
    context = [0.1, 0.1, 0.5, 0.1, 0.1, 0.05, 0.05]
    show("bci worked example (eps=0)", bci(face, context, eps=0))
    show("bci worked example (eps=1e-6)", bci(face, context))

    skewed = [0.4, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1]
    show("kld(skewed || uniform)", kld(skewed, UNIFORM))
    show("rmse(skewed, uniform)", rmse(skewed, UNIFORM))
    show("kld(one-hot || uniform) = ln 7", kld(one_hot_joy, UNIFORM))
    show("ln 7", math.log(7.0))

    truths = ["joy", "joy", "sadness", "anger"]
    preds = ["joy", "sadness", "sadness", "joy"]
    show("f1_weighted worked example", f1_weighted(truths, preds))
    try:
        from sklearn.metrics import f1_score
        show("  sklearn cross-check",
             f1_score(truths, preds, average="weighted", zero_division=0))
    except ImportError:
        pass

    # kld of a distribution against its own eps-smoothed copy: the floor the
    # self-consistency checks must stay under.
    d = bci(face, context)
    show("kld(d || smooth(d,1e-6)) for worked bci output", kld(d, smooth(d, 1e-6)))


if __name__ == "__main__":
    main()
