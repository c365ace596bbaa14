# Interest profiles: event weighting, hyperbolic time decay, and the
# superclass propagation that separates the ontology group from the flat
# group.
#
# Run:  python demos/03_interest_profiles.py

from datetime import date, datetime, timedelta
from pathlib import Path

from quickstep.profiler import EventLog, FeedbackEvent, compute_profile, top_topics
from quickstep.taxonomy import flatten_taxonomy, load_taxonomy

TAXONOMY = Path(__file__).parents[1] / "src" / "quickstep" / "data" / "cs_taxonomy.tsv"
hier = load_taxonomy(TAXONOMY)
flat = flatten_taxonomy(hier)

today = date(2025, 3, 1)


def ev(kind, topic, days_ago, hour=9):
    at = datetime.combine(today - timedelta(days=days_ago), datetime.min.time()).replace(hour=hour)
    return FeedbackEvent("ada", at, kind, topic, None, "demo")


# one user's fortnight: heavy machine-learning activity, one dislike
log = EventLog(
    [
        ev("browsed", "machine-learning", 13),
        ev("browsed", "machine-learning", 9),
        ev("rated_interesting", "machine-learning", 7),
        ev("jump", "neural-networks", 4),
        ev("browsed", "neural-networks", 2),
        ev("rated_not_interesting", "databases", 1),
        ev("browsed", "machine-learning", 0),
    ]
)

print("== flat profile (no propagation) ==")
p_flat = compute_profile(log, flat, "ada", today)
for topic, value in sorted(p_flat.interest.items(), key=lambda tv: -tv[1]):
    print(f"  {topic:<28} {value:+.3f}")

print("== ontology profile (ancestors credited at 0.5 per level) ==")
p_hier = compute_profile(log, hier, "ada", today)
for topic, value in sorted(p_hier.interest.items(), key=lambda tv: -tv[1]):
    print(f"  {topic:<28} {value:+.3f}")

# the hierarchy surfaces artificial-intelligence, the parent of both
# browsed topics, giving the "rounder" profile the ontology group gets
print("flat top topics:    ", top_topics(p_flat, 3))
print("ontology top topics:", top_topics(p_hier, 3))

# time decay: the same profile recomputed a month later
later = compute_profile(log, hier, "ada", today + timedelta(days=30))
print("machine-learning interest now vs +30d:",
      round(p_hier.interest["machine-learning"], 3),
      "->",
      round(later.interest["machine-learning"], 3))
