# The topic classifier: instance-weighted nearest neighbour inside an
# AdaBoost.M1 committee, plus the cross-validation harness.
#
# Run:  python demos/02_boosted_classifier.py

from datetime import date

import numpy as np

from quickstep.classifier import (
    TrainingExample,
    TrainingSet,
    classify,
    cross_validate,
    train_boost,
)
from quickstep.textpipe import TermVector

rng = np.random.default_rng(0)
DAY = date(2025, 1, 1)

# a small two-topic training set with a noisy overlap region
def vec(doc_id, weights):
    total = sum(weights.values())
    return TermVector(doc_id, {t: w / total for t, w in weights.items()})

examples = []
for i in range(8):
    examples.append(TrainingExample(vec(f"db{i}", {"query": 5.5, "index": 3.5, f"w{i}": 1}), "databases", "bootstrap", DAY))
# two database papers drifting toward neural vocabulary
examples.append(TrainingExample(vec("db8", {"query": 5, "index": 3, "neural": 1, "w8": 1}), "databases", "bootstrap", DAY))
examples.append(TrainingExample(vec("db9", {"query": 5, "index": 3, "neural": 1.2, "w9": 0.8}), "databases", "bootstrap", DAY))
# a tight pair of neural-network papers phrased like database papers;
# the plain nearest-neighbour vote drowns them in the surrounding cluster
examples.append(TrainingExample(vec("nx0", {"query": 5, "index": 3, "neural": 2}), "neural-networks", "bootstrap", DAY))
examples.append(TrainingExample(vec("nx1", {"query": 5, "index": 3, "neural": 1.9, "w0": 0.1}), "neural-networks", "bootstrap", DAY))
for i in range(5):
    examples.append(TrainingExample(vec(f"nn{i}", {"neural": 5.5, "layer": 3.5, f"v{i}": 1}), "neural-networks", "bootstrap", DAY))

training = TrainingSet("flat", tuple(examples))

# boosting reweights the examples each round; watch the committee grow
committee = train_boost(training, rounds=10, rng_seed=0, k=5)
print("rounds completed:", committee.rounds_completed)
print("round errors:    ", [round(e, 3) for e in committee.round_errors])
print("vote weights:    ", [round(m.vote_weight, 2) for m in committee.members])

# ranked output: the runner-up topic is reported too, which is what lets
# the system fall back to the next closest match
query = vec("q", {"neural": 3, "network": 2, "query": 1})
for topic, confidence in classify(committee, query):
    print(f"  {topic:<18} confidence {confidence:.3f}")

# the measurement harness the nightly job uses
scores = cross_validate(training, folds=6, rounds=5, rng_seed=0, k=5)
print("cross-validation:", {k: round(v, 3) for k, v in scores.items()})
