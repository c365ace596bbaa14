from datetime import date, datetime, timedelta

from quickstep.evalkit import (
    all_series,
    correction_ratio,
    good_jump_ratio,
    good_topic_ratio,
    series_to_tsv,
)
from quickstep.profiler import (
    CORRECTION,
    JUMP,
    RATED_INTERESTING,
    RATED_NOT_INTERESTING,
    RECOMMENDED_SEEN,
    FeedbackEvent,
)

DAY0 = date(2025, 2, 1)


def ev(kind, topic, day=0, user="u1", group="flat", paper="d1", minute=0):
    at = datetime(DAY0.year, DAY0.month, DAY0.day, 9, minute) + timedelta(days=day)
    return FeedbackEvent(user=user, at=at, kind=kind, topic=topic, paper=paper, group=group)


class TestGoodTopicRatio:
    def test_hand_counted_three_quarters(self):
        # 4 distinct topics recommended, one rated not interesting
        events = [
            ev(RECOMMENDED_SEEN, "a", minute=0),
            ev(RECOMMENDED_SEEN, "b", minute=1),
            ev(RECOMMENDED_SEEN, "c", minute=2),
            ev(RECOMMENDED_SEEN, "d", minute=3),
            ev(RATED_NOT_INTERESTING, "d", minute=4),
        ]
        series = good_topic_ratio(events, "flat")
        assert series.points == ((DAY0, 0.75),)

    def test_all_interesting_is_one(self):
        events = [
            ev(RECOMMENDED_SEEN, "a", minute=0),
            ev(RATED_INTERESTING, "a", minute=1),
            ev(RECOMMENDED_SEEN, "b", minute=2),
            ev(RATED_INTERESTING, "b", minute=3),
        ]
        assert good_topic_ratio(events, "flat").final() == 1.0

    def test_no_recommendations_empty_series(self):
        events = [ev(RATED_INTERESTING, "a")]
        assert good_topic_ratio(events, "flat").points == ()

    def test_latest_rating_wins(self):
        events = [
            ev(RECOMMENDED_SEEN, "a", day=0),
            ev(RATED_NOT_INTERESTING, "a", day=1),
            ev(RATED_INTERESTING, "a", day=2),
        ]
        series = good_topic_ratio(events, "flat")
        assert [v for _, v in series.points] == [1.0, 0.0, 1.0]

    def test_good_plus_bad_is_one(self):
        events = [
            ev(RECOMMENDED_SEEN, t, minute=i) for i, t in enumerate("abcde")
        ] + [
            ev(RATED_NOT_INTERESTING, "a", day=1),
            ev(RATED_NOT_INTERESTING, "b", day=2),
        ]
        for _, value in good_topic_ratio(events, "flat").points:
            assert 0.0 <= value <= 1.0  # bad ratio is 1 - value by construction

    def test_groups_isolated(self):
        events = [
            ev(RECOMMENDED_SEEN, "a", group="flat"),
            ev(RECOMMENDED_SEEN, "b", group="ontology", minute=1),
            ev(RATED_NOT_INTERESTING, "b", group="ontology", minute=2),
        ]
        assert good_topic_ratio(events, "flat").final() == 1.0
        assert good_topic_ratio(events, "ontology").final() == 0.0

    def test_until_cuts_series(self):
        events = [
            ev(RECOMMENDED_SEEN, "a", day=0),
            ev(RATED_NOT_INTERESTING, "a", day=5),
        ]
        full = good_topic_ratio(events, "flat")
        cut = good_topic_ratio(events, "flat", until=DAY0 + timedelta(days=2))
        assert full.final() == 0.0
        assert cut.final() == 1.0
        assert len(cut.points) == 1


class TestGoodJumpRatio:
    def test_two_good_jumps_in_twenty(self):
        events = [
            ev(RECOMMENDED_SEEN, f"t{i % 5}", minute=i, paper=f"d{i}") for i in range(20)
        ] + [
            ev(JUMP, "t0", day=1, paper="d0"),
            ev(JUMP, "t1", day=1, paper="d1", minute=1),
        ]
        assert good_jump_ratio(events, "flat").final() == 0.10

    def test_jump_on_bad_topic_excluded(self):
        events = [
            ev(RECOMMENDED_SEEN, "a", minute=0),
            ev(RECOMMENDED_SEEN, "b", minute=1),
            ev(JUMP, "a", minute=2),
            ev(RATED_NOT_INTERESTING, "a", minute=3),
        ]
        assert good_jump_ratio(events, "flat").final() == 0.0

    def test_no_jumps_zero_series(self):
        events = [ev(RECOMMENDED_SEEN, "a")]
        series = good_jump_ratio(events, "flat")
        assert [v for _, v in series.points] == [0.0]


class TestCorrectionRatio:
    def test_five_of_fifty(self):
        events = [
            ev(RECOMMENDED_SEEN, f"t{i % 5}", minute=i % 60, day=i // 50, paper=f"d{i}")
            for i in range(50)
        ] + [
            ev(CORRECTION, "t0", day=2, paper=f"d{i}", minute=i) for i in range(5)
        ]
        assert correction_ratio(events, "flat").final() == 0.10

    def test_zero_corrections(self):
        events = [ev(RECOMMENDED_SEEN, "a")]
        assert correction_ratio(events, "flat").final() == 0.0


class TestSeriesShape:
    def test_dates_strictly_increasing(self):
        events = [ev(RECOMMENDED_SEEN, "a", day=d, minute=m) for d in range(5) for m in range(3)]
        series = good_topic_ratio(events, "flat")
        days = [d for d, _ in series.points]
        assert days == sorted(set(days))

    def test_tsv_roundtrip_bit_exact(self):
        events = [
            ev(RECOMMENDED_SEEN, "a", day=0),
            ev(RATED_NOT_INTERESTING, "a", day=1),
            ev(RECOMMENDED_SEEN, "b", day=1, minute=2),
            ev(JUMP, "b", day=2),
        ]
        tsv = series_to_tsv(all_series(events, ("flat", "ontology")))
        lines = tsv.strip().split("\n")
        assert lines[0] == "date\tgroup\tmetric\tvalue"
        # every value parses back to the exact float
        for line in lines[1:]:
            day, group, metric, value = line.split("\t")
            assert repr(float(value)) == value

    def test_replay_equals_online(self):
        events = [
            ev(RECOMMENDED_SEEN, "a", day=0),
            ev(JUMP, "a", day=1),
            ev(RATED_NOT_INTERESTING, "a", day=2),
            ev(RECOMMENDED_SEEN, "b", day=2, minute=5),
        ]
        a = all_series(events, ("flat",))
        b = all_series(list(events), ("flat",))
        assert a == b
