import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from curribatch.corpus import Side
from curribatch.curriculum import (
    CdfTable,
    CompetenceParams,
    Schedule,
    ScheduleStep,
    cdf_normalize,
    competence,
    eligible_set,
    generate_schedule,
    read_schedule,
    sample_batch,
    write_schedule,
)
from curribatch.metrics import DifficultyScore, MetricKind


def scores_of(values):
    return [DifficultyScore(i, float(v)) for i, v in enumerate(values)]


class TestCompetenceParams:
    @pytest.mark.parametrize("initial", [0.0, -0.1, 1.5])
    def test_initial_range_enforced(self, initial):
        with pytest.raises(ValueError, match="initial"):
            CompetenceParams(curriculum_steps=100, initial=initial)

    @pytest.mark.parametrize("steps", [0.0, -5.0, math.inf, math.nan])
    def test_ramp_length_must_be_finite_positive(self, steps):
        with pytest.raises(ValueError, match="curriculum_steps"):
            CompetenceParams(curriculum_steps=steps)

    def test_full_initial_competence_allowed(self):
        params = CompetenceParams(curriculum_steps=10, initial=1.0)
        assert competence(0, params) == 1.0


class TestCompetence:
    def test_starts_at_initial(self):
        params = CompetenceParams(curriculum_steps=1000, initial=0.1)
        assert competence(0, params) == pytest.approx(0.1, abs=1e-12)

    def test_saturates_exactly_at_ramp_end(self):
        params = CompetenceParams(curriculum_steps=100, initial=0.1)
        for t in (100, 101, 1000, 10**9):
            assert competence(t, params) == 1.0

    def test_known_intermediate_value(self):
        # sqrt(2 * 0.99 / 4 + 0.01)
        params = CompetenceParams(curriculum_steps=4, initial=0.1)
        assert competence(2, params) == pytest.approx(0.7106335201775948, abs=1e-12)

    def test_monotone_nondecreasing(self):
        params = CompetenceParams(curriculum_steps=357, initial=0.2)
        values = [competence(t, params) for t in range(400)]
        assert all(b >= a for a, b in zip(values, values[1:]))

    def test_never_exceeds_one(self):
        params = CompetenceParams(curriculum_steps=7, initial=0.9)
        assert max(competence(t, params) for t in range(10)) == 1.0

    def test_negative_step_rejected(self):
        with pytest.raises(ValueError, match="non-negative"):
            competence(-1, CompetenceParams(curriculum_steps=10))


class TestCdfNormalize:
    def test_distinct_values_get_ranks_over_m(self):
        table = cdf_normalize(scores_of([3, 1, 2]))
        assert [e.value for e in table.entries] == [1.0, pytest.approx(1 / 3), pytest.approx(2 / 3)]

    def test_ties_share_the_upper_rank(self):
        table = cdf_normalize(scores_of([2, 2, 4]))
        assert [e.value for e in table.entries] == [pytest.approx(2 / 3), pytest.approx(2 / 3), 1.0]

    def test_all_equal_scores_all_get_one(self):
        table = cdf_normalize(scores_of([5, 5, 5, 5]))
        assert [e.value for e in table.entries] == [1.0] * 4

    def test_range_is_left_open_right_closed(self):
        table = cdf_normalize(scores_of(range(100)))
        values = [e.value for e in table.entries]
        assert min(values) == pytest.approx(1 / 100)
        assert max(values) == 1.0

    def test_sample_ids_preserved(self):
        table = cdf_normalize([DifficultyScore(7, 1.0), DifficultyScore(3, 2.0)])
        assert [e.sample_id for e in table.entries] == [7, 3]

    def test_duplicate_ids_rejected(self):
        with pytest.raises(ValueError, match="duplicate"):
            cdf_normalize([DifficultyScore(0, 1.0), DifficultyScore(0, 2.0)])

    @pytest.mark.parametrize("bad", [math.nan, math.inf, -1.0])
    def test_non_finite_or_negative_rejected(self, bad):
        with pytest.raises(ValueError):
            cdf_normalize([DifficultyScore(0, 1.0), DifficultyScore(1, bad)])

    def test_empty_rejected(self):
        with pytest.raises(ValueError, match="empty"):
            cdf_normalize([])

    @given(st.lists(st.integers(min_value=0, max_value=30), min_size=1, max_size=60))
    def test_order_isomorphism(self, raw):
        table = cdf_normalize(scores_of(raw))
        normalized = [e.value for e in table.entries]
        for i in range(len(raw)):
            for j in range(len(raw)):
                if raw[i] < raw[j]:
                    assert normalized[i] < normalized[j]
                elif raw[i] == raw[j]:
                    assert normalized[i] == normalized[j]

    @given(st.lists(st.integers(min_value=0, max_value=30), min_size=1, max_size=60))
    def test_positive_scaling_leaves_values_unchanged(self, raw):
        plain = cdf_normalize(scores_of(raw))
        scaled = cdf_normalize(scores_of([4.0 * v for v in raw]))
        assert plain == scaled


class TestEligibleSet:
    def test_prefix_by_cutoff(self):
        table = cdf_normalize(scores_of([10, 30, 20, 40]))  # cdf .25 .75 .5 1
        assert eligible_set(table, 0.5) == [0, 2]
        assert eligible_set(table, 0.75) == [0, 1, 2]
        assert eligible_set(table, 1.0) == [0, 1, 2, 3]

    def test_cutoff_below_floor_falls_back_to_easiest_tie_group(self):
        table = cdf_normalize(scores_of([10, 10, 20, 30]))  # cdf .5 .5 .75 1
        assert eligible_set(table, 0.1) == [0, 1]

    def test_result_sorted_even_if_input_scrambled(self):
        table = cdf_normalize(
            [DifficultyScore(9, 1.0), DifficultyScore(2, 2.0), DifficultyScore(5, 1.0)]
        )
        assert eligible_set(table, 0.9) == [5, 9]


class TestSampleBatch:
    def test_without_replacement_when_pool_suffices(self):
        rng = random.Random(0)
        pool = list(range(50))
        batch = sample_batch(pool, 20, rng)
        assert len(batch) == 20
        assert len(set(batch)) == 20
        assert set(batch) <= set(pool)

    def test_exact_pool_size_returns_permutation(self):
        rng = random.Random(1)
        batch = sample_batch([3, 1, 4], 3, rng)
        assert sorted(batch) == [1, 3, 4]

    def test_with_replacement_when_pool_short(self):
        rng = random.Random(2)
        batch = sample_batch([7, 8], 9, rng)
        assert len(batch) == 9
        assert set(batch) <= {7, 8}

    def test_deterministic_under_seed(self):
        a = sample_batch(list(range(100)), 10, random.Random(42))
        b = sample_batch(list(range(100)), 10, random.Random(42))
        assert a == b

    def test_input_pool_not_mutated(self):
        pool = [5, 6, 7, 8]
        sample_batch(pool, 2, random.Random(0))
        assert pool == [5, 6, 7, 8]

    def test_empty_pool_rejected(self):
        with pytest.raises(ValueError, match="empty"):
            sample_batch([], 1, random.Random(0))

    def test_nonpositive_batch_rejected(self):
        with pytest.raises(ValueError, match="batch_size"):
            sample_batch([1], 0, random.Random(0))


class TestGenerateSchedule:
    def fixed_table(self, m=40):
        return cdf_normalize(scores_of(range(m)))

    def test_steps_numbered_from_one(self):
        schedule = generate_schedule(
            self.fixed_table(),
            CompetenceParams(curriculum_steps=10),
            num_steps=6,
            batch_size=4,
            seed=0,
            metric=MetricKind.LENGTH,
            side=Side.TEXT,
        )
        assert [s.t for s in schedule.steps] == [1, 2, 3, 4, 5, 6]

    def test_competence_recorded_per_step(self):
        params = CompetenceParams(curriculum_steps=10)
        schedule = generate_schedule(
            self.fixed_table(), params, num_steps=12, batch_size=2, seed=0,
            metric=MetricKind.PED, side=Side.JOINT,
        )
        for step in schedule.steps:
            assert step.competence == competence(step.t, params)

    def test_competence_saturates_midway(self):
        schedule = generate_schedule(
            self.fixed_table(), CompetenceParams(curriculum_steps=4), num_steps=10,
            batch_size=2, seed=0, metric=MetricKind.PED, side=Side.JOINT,
        )
        for step in schedule.steps:
            assert (step.competence == 1.0) == (step.t >= 4)

    def test_batches_respect_eligibility(self):
        table = self.fixed_table(40)
        cdf_by_id = {e.sample_id: e.value for e in table.entries}
        params = CompetenceParams(curriculum_steps=30)
        schedule = generate_schedule(
            table, params, num_steps=35, batch_size=5, seed=3,
            metric=MetricKind.SED, side=Side.JOINT,
        )
        floor = table.min_value
        for step in schedule.steps:
            limit = max(step.competence, floor)
            assert all(cdf_by_id[i] <= limit for i in step.ids)

    def test_early_steps_use_replacement_when_pool_tiny(self):
        # competence 0.01 is below the easiest rank (1/40), so the fallback
        # pool is the single easiest sample, repeated to fill the batch
        schedule = generate_schedule(
            self.fixed_table(40), CompetenceParams(curriculum_steps=10**6, initial=0.01),
            num_steps=1, batch_size=4, seed=0,
            metric=MetricKind.LENGTH, side=Side.JOINT,
        )
        assert schedule.steps[0].ids == (0, 0, 0, 0)

    def test_same_seed_same_schedule(self):
        kwargs = dict(num_steps=25, batch_size=6, seed=42, metric=MetricKind.DLD, side=Side.JOINT)
        params = CompetenceParams(curriculum_steps=15)
        a = generate_schedule(self.fixed_table(), params, **kwargs)
        b = generate_schedule(self.fixed_table(), params, **kwargs)
        assert a == b

    def test_different_seeds_differ(self):
        params = CompetenceParams(curriculum_steps=15)
        a = generate_schedule(self.fixed_table(), params, num_steps=25, batch_size=6,
                              seed=1, metric=MetricKind.DLD, side=Side.JOINT)
        b = generate_schedule(self.fixed_table(), params, num_steps=25, batch_size=6,
                              seed=2, metric=MetricKind.DLD, side=Side.JOINT)
        assert a.steps != b.steps

    def test_zero_steps_allowed(self):
        schedule = generate_schedule(
            self.fixed_table(), CompetenceParams(curriculum_steps=5), num_steps=0,
            batch_size=2, seed=0, metric=MetricKind.PED, side=Side.JOINT,
        )
        assert schedule.steps == ()

    def test_negative_steps_rejected(self):
        with pytest.raises(ValueError, match="num_steps"):
            generate_schedule(
                self.fixed_table(), CompetenceParams(curriculum_steps=5), num_steps=-1,
                batch_size=2, seed=0, metric=MetricKind.PED, side=Side.JOINT,
            )

    def test_header_fields_carried(self):
        params = CompetenceParams(curriculum_steps=55.0, initial=0.25)
        schedule = generate_schedule(
            self.fixed_table(), params, num_steps=3, batch_size=9, seed=17,
            metric=MetricKind.RARITY, side=Side.DATA,
        )
        assert (schedule.seed, schedule.batch_size) == (17, 9)
        assert (schedule.c0, schedule.curriculum_steps) == (0.25, 55.0)
        assert (schedule.metric, schedule.side) == (MetricKind.RARITY, Side.DATA)


class TestScheduleFile:
    def make_schedule(self):
        return generate_schedule(
            cdf_normalize(scores_of(range(30))),
            CompetenceParams(curriculum_steps=8.0, initial=0.1),
            num_steps=12, batch_size=3, seed=5,
            metric=MetricKind.SED, side=Side.JOINT,
        )

    def test_round_trip(self, tmp_path):
        schedule = self.make_schedule()
        path = tmp_path / "schedule.jsonl"
        write_schedule(schedule, path)
        assert read_schedule(path) == schedule

    def test_header_line_shape(self, tmp_path):
        import json

        path = tmp_path / "schedule.jsonl"
        write_schedule(self.make_schedule(), path)
        lines = path.read_text(encoding="utf-8").splitlines()
        header = json.loads(lines[0])
        assert header == {
            "seed": 5, "batch_size": 3, "c0": 0.1, "lambda": 8.0,
            "metric": "sed", "side": "joint",
        }
        step_one = json.loads(lines[1])
        assert set(step_one) == {"t", "competence", "ids"}
        assert len(lines) == 13

    def test_write_is_deterministic(self, tmp_path):
        a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
        write_schedule(self.make_schedule(), a)
        write_schedule(self.make_schedule(), b)
        assert a.read_bytes() == b.read_bytes()

    def test_empty_file_rejected(self, tmp_path):
        path = tmp_path / "empty.jsonl"
        path.write_text("", encoding="utf-8")
        with pytest.raises(ValueError, match="empty"):
            read_schedule(path)

    def test_bad_header_rejected(self, tmp_path):
        path = tmp_path / "bad.jsonl"
        path.write_text('{"seed": 1}\n', encoding="utf-8")
        with pytest.raises(ValueError, match="header"):
            read_schedule(path)

    def test_step_numbering_validated(self, tmp_path):
        path = tmp_path / "skip.jsonl"
        path.write_text(
            '{"seed": 1, "batch_size": 2, "c0": 0.1, "lambda": 4.0, "metric": "ped", "side": "joint"}\n'
            '{"t": 2, "competence": 0.5, "ids": [0, 1]}\n',
            encoding="utf-8",
        )
        with pytest.raises(ValueError, match="expected step 1"):
            read_schedule(path)

    def test_non_integer_ids_rejected(self, tmp_path):
        path = tmp_path / "ids.jsonl"
        path.write_text(
            '{"seed": 1, "batch_size": 2, "c0": 0.1, "lambda": 4.0, "metric": "ped", "side": "joint"}\n'
            '{"t": 1, "competence": 0.5, "ids": ["x"]}\n',
            encoding="utf-8",
        )
        with pytest.raises(ValueError, match="integers"):
            read_schedule(path)
