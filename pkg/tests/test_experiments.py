import dataclasses
import math

import pytest

from dfamin import SamplerConfig
from dfamin.experiments import (ROW_HEADER, SUMMARY_HEADER, ExperimentRow, SummaryRow, fit_growth,
                                predicted_run_probability, read_rows_csv, rows_to_csv, run_iteration_experiment,
                                run_longest_run_experiment, run_time_benchmark, run_unary_experiment, summarize,
                                summary_to_csv)


def _strip_time(rows):
    return [dataclasses.replace(r, elapsed_ns=0) for r in rows]


def test_single_state_rows_have_no_iterations():
    rows = run_iteration_experiment([1], 20, 2, SamplerConfig(seed=4))
    assert len(rows) == 20
    assert all(r.iterations == 0 and r.minimal_size == 1 for r in rows)


def test_rows_independent_of_parallelism():
    config = SamplerConfig(seed=9)
    serial = run_iteration_experiment([8, 40, 300], 6, 2, config, threads=1)
    parallel = run_iteration_experiment([8, 40, 300], 6, 2, config, threads=3)
    assert _strip_time(serial) == _strip_time(parallel)
    assert [r.sort_key() for r in serial] == sorted(r.sort_key() for r in serial)


def test_row_invariants():
    rows = run_iteration_experiment([16, 64], 30, 2, SamplerConfig(seed=2))
    for r in rows:
        assert r.iterations <= r.n - 1
        assert 1 <= r.minimal_size <= r.n
        assert r.algo == "moore"


def test_approx_rows_are_flagged():
    rows = run_iteration_experiment([250], 2, 2, SamplerConfig(seed=1, mode="approx"))
    assert {r.algo for r in rows} == {"moore+approx"}


def test_benchmark_shares_inputs():
    rows = run_time_benchmark(["moore", "hopcroft", "tablefill"], [30], 5, 2, SamplerConfig(seed=3))
    by_index = {}
    for r in rows:
        by_index.setdefault(r.sample_index, set()).add(r.minimal_size)
    assert all(len(sizes) == 1 for sizes in by_index.values())
    again = run_time_benchmark(["moore", "hopcroft", "tablefill"], [30], 5, 2, SamplerConfig(seed=3))
    assert _strip_time(rows) == _strip_time(again)


def test_benchmark_marks_brzozowski_budget():
    rows = run_time_benchmark(["brzozowski"], [60], 3, 2, SamplerConfig(seed=3), cap=16)
    assert all(r.iterations == -1 and r.minimal_size > 16 for r in rows)
    assert summarize(rows) == []


def test_benchmark_rejects_unknown_algorithm():
    with pytest.raises(ValueError):
        run_time_benchmark(["quick"], [5], 1, 2)


def test_unary_exhaustive_fraction():
    row = run_unary_experiment(8, 0, exhaustive=True)
    assert row.samples == 8 * 2 ** 8
    # frozen: 978 of the 2048 unary automata with 8 states are minimal
    assert row.fraction_minimal == pytest.approx(978 / 2048)


def test_unary_requires_two_states():
    with pytest.raises(ValueError):
        run_unary_experiment(1, 10)


def test_unary_iterations_grow():
    means = []
    for n in (2 ** 8, 2 ** 10, 2 ** 12):
        row = run_unary_experiment(n, 300, SamplerConfig(seed=5))
        means.append((row.mean_iterations, row.stddev / math.sqrt(row.samples)))
    for (m1, s1), (m2, s2) in zip(means, means[1:]):
        assert m2 >= m1 - 2 * math.hypot(s1, s2)


def test_longest_run_limits():
    table = run_longest_run_experiment(64, 200, [-10, 100], SamplerConfig(seed=1))
    (h0, e0, p0), (h1, e1, p1) = table
    assert e0 == 0.0 and p0 < 1e-100
    assert e1 == 1.0 and p1 == pytest.approx(1.0)


def test_predicted_run_probability_alpha():
    assert predicted_run_probability(1024, 0) == pytest.approx(math.exp(-0.5))
    assert predicted_run_probability(1536, 0) == pytest.approx(math.exp(-1.5 * 0.5))


def test_summarize():
    rows = [ExperimentRow(4, 2, 0, i, "moore", it, 4, 10) for i, it in enumerate([1, 3])]
    (s,) = summarize(rows)
    assert (s.samples, s.mean_iterations, s.stddev, s.mean_elapsed_ns) == (2, 2.0, 1.0, 10.0)


def _summary(values):
    return [SummaryRow(n, 2, "moore", 10, v, 0.0, 0.0) for n, v in values]


def test_fit_growth_constant():
    fit = fit_growth(_summary([(n, 3.0) for n in (8, 64, 512, 4096)]))
    assert fit.slope_log == pytest.approx(0, abs=1e-12)
    assert fit.slope_loglog == pytest.approx(0, abs=1e-12)


def test_fit_growth_exact_log():
    fit = fit_growth(_summary([(n, 0.7 * math.log2(n)) for n in (8, 64, 512, 4096)]))
    assert fit.slope_log == pytest.approx(0.7)
    assert fit.residual_log == pytest.approx(0, abs=1e-12)
    assert fit.better == "log"


def test_fit_growth_needs_three_sizes():
    with pytest.raises(ValueError):
        fit_growth(_summary([(8, 1.0), (16, 2.0)]))


def test_csv_round_trip():
    rows = run_iteration_experiment([5, 6], 3, 2, SamplerConfig(seed=8))
    text = rows_to_csv(rows)
    assert text.splitlines()[0] == ROW_HEADER
    assert read_rows_csv(text) == rows
    assert summary_to_csv(summarize(rows)).splitlines()[0] == SUMMARY_HEADER
