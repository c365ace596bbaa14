"""Brute-force nearest-neighbour oracle, written independently of the
classifier module: plain O(m) scan, its own cosine, no shared helpers.
Vote sums use fsum so bitwise agreement with a correct implementation is
well-defined."""

import math


def oracle_cosine(a: dict, b: dict) -> float:
    if not a or not b:
        return 0.0
    if a == b:
        return 1.0
    dot = math.fsum(a[t] * b[t] for t in sorted(a) if t in b)
    if dot == 0.0:
        return 0.0
    na = math.sqrt(math.fsum(w * w for _, w in sorted(a.items())))
    nb = math.sqrt(math.fsum(w * w for _, w in sorted(b.items())))
    return min(1.0, dot / (na * nb))


def oracle_knn_rank(examples, query_weights, k, instance_weights):
    """examples: list of (weights_dict, topic). Returns the ranked
    (topic, confidence) list, or None when unclassifiable."""
    sims = [oracle_cosine(query_weights, w) for w, _ in examples]
    if all(s == 0.0 for s in sims):
        return None
    order = sorted(range(len(examples)), key=lambda i: (-sims[i], i))[:k]
    votes = {}
    for i in order:
        v = instance_weights[i] * sims[i]
        if v > 0.0:
            votes.setdefault(examples[i][1], []).append(v)
    totals = {t: math.fsum(votes[t]) for t in sorted(votes)}
    totals = {t: v for t, v in totals.items() if v > 0.0}
    grand = math.fsum(totals[t] for t in sorted(totals))
    if grand <= 0.0:
        return None
    ranked = sorted(((t, v / grand) for t, v in totals.items()), key=lambda tv: (-tv[1], tv[0]))
    return ranked
