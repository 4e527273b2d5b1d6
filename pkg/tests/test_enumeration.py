"""Exhaustive enumeration: censuses, budgets, parallel determinism, sampling."""

import itertools

import pytest

from toepnull import (
    BUDGET_ENV_VAR,
    BudgetExceededError,
    DEFAULT_BUDGET,
    PrimeField,
    ToeplitzSpec,
    XorShift64,
    brute_force_table,
    brute_force_theta_eta,
    count_table,
    enumerate_all,
    extension_census,
    iter_valid_strings,
    realized_nullity_strings,
    resolve_budget,
    sample_census,
    spec_index,
    verify_structure_theorems,
    verify_transition_rules,
)
from toepnull.enumeration import _RuleStats

F2 = PrimeField(2)


# ---------------------------------------------------------------------------
# enumeration order and indexing


@pytest.mark.parametrize("n, q", [(0, 2), (2, 2), (1, 3), (1, 5)])
def test_enumerate_all_is_complete_and_ordered(n, q):
    specs = list(enumerate_all(n, q))
    assert len(specs) == q ** (2 * n + 1)
    assert len(set(specs)) == len(specs)
    assert all(s.order == n for s in specs)
    assert [spec_index(s) for s in specs] == list(range(len(specs)))


def test_spec_index_tracks_digit_order():
    first, second = itertools.islice(enumerate_all(2, 3), 2)
    assert first.a == (0, 0, 0) and first.b == (0, 0)
    assert second.a == (0, 0, 0) and second.b == (0, 1)


def test_enumerate_rejects_bad_parameters():
    with pytest.raises(ValueError):
        list(enumerate_all(-1, 2))
    with pytest.raises(ValueError):
        list(enumerate_all(2, 6))


# ---------------------------------------------------------------------------
# single-spec censuses


def census_of(a, b, q=2):
    spec = ToeplitzSpec(field=PrimeField(q), a=a, b=b)
    return extension_census(spec).counts


def test_extension_census_examples():
    assert census_of((1,), ()) == {0: 3, 1: 1}
    assert census_of((0,), ()) == {0: 1, 1: 2, 2: 1}
    assert census_of((0, 0), (0,)) == {3: 1, 2: 2, 1: 1}
    assert census_of((1, 0, 0), (0, 0), q=3) == {0: 7, 1: 2}


@pytest.mark.parametrize("q", (2, 3, 5))
def test_census_totals_and_step_bound(q):
    fld = PrimeField(q)
    from toepnull import rank_nullity

    for digits in itertools.product(range(q), repeat=3):
        spec = ToeplitzSpec(field=fld, a=digits[:2], b=digits[2:])
        census = extension_census(spec).counts
        nu = rank_nullity(spec)[1]
        assert sum(census.values()) == q * q
        assert all(abs(child - nu) <= 1 for child in census)


# ---------------------------------------------------------------------------
# budget plumbing


def test_resolve_budget_precedence(monkeypatch):
    monkeypatch.delenv(BUDGET_ENV_VAR, raising=False)
    assert resolve_budget(None) == DEFAULT_BUDGET
    monkeypatch.setenv(BUDGET_ENV_VAR, "1000")
    assert resolve_budget(None) == 1000
    assert resolve_budget(500) == 500  # explicit argument wins


def test_resolve_budget_rejects_garbage(monkeypatch):
    monkeypatch.setenv(BUDGET_ENV_VAR, "soon")
    with pytest.raises(ValueError):
        resolve_budget(None)
    monkeypatch.setenv(BUDGET_ENV_VAR, "0")
    with pytest.raises(ValueError):
        resolve_budget(None)
    monkeypatch.delenv(BUDGET_ENV_VAR)
    with pytest.raises(ValueError):
        resolve_budget(-5)


def test_budget_guard_reports_requirement():
    with pytest.raises(BudgetExceededError) as exc:
        brute_force_table(14, 2)
    assert exc.value.required == 2**29
    assert exc.value.budget == DEFAULT_BUDGET
    # a raised cap admits the scan; a tight one still covers small orders
    assert brute_force_table(2, 2, budget=32).row(2) == (16, 12, 3, 1)
    with pytest.raises(BudgetExceededError):
        brute_force_table(2, 2, budget=31)


def test_budget_env_var_guards_scans(monkeypatch):
    monkeypatch.setenv(BUDGET_ENV_VAR, "100")
    with pytest.raises(BudgetExceededError):
        list(enumerate_all(4, 2))
    with pytest.raises(BudgetExceededError):
        verify_transition_rules(4, 2)
    with pytest.raises(BudgetExceededError):
        verify_structure_theorems(4, 2)
    with pytest.raises(BudgetExceededError):
        realized_nullity_strings(4, 2)
    assert brute_force_table(1, 2, budget=8).row(1) == (4, 3, 1)


# ---------------------------------------------------------------------------
# brute force versus the weight model


@pytest.mark.parametrize("n, q", [(6, 2), (3, 3), (2, 5)])
def test_brute_force_matches_model(n, q):
    assert brute_force_table(n, q).counts == count_table(n, q).counts


def test_brute_force_matches_direct_enumeration():
    from toepnull import rank_nullity

    table = brute_force_table(2, 3)
    for n in range(3):
        tally = [0] * (n + 2)
        for spec in enumerate_all(n, 3):
            tally[rank_nullity(spec)[1]] += 1
        assert table.row(n) == tuple(tally)


def test_brute_force_theta_eta():
    assert brute_force_theta_eta(1) == (3, 1)
    assert brute_force_theta_eta(4) == (171, 85)


# ---------------------------------------------------------------------------
# parallel scans are deterministic and agree with serial ones


def rule_summary(report):
    return {
        name: (c.checked, c.failures, c.expected_offsets)
        for name, c in report.checks.items()
    }


def test_jobs_do_not_change_results():
    serial = brute_force_table(4, 2, jobs=1)
    assert brute_force_table(4, 2, jobs=2).counts == serial.counts
    assert brute_force_table(4, 2, jobs=7).counts == serial.counts

    rules1 = verify_transition_rules(3, 3, jobs=1)
    rules2 = verify_transition_rules(3, 3, jobs=2)
    assert rules1.passed and rules2.passed
    assert rule_summary(rules1) == rule_summary(rules2)

    s1 = verify_structure_theorems(3, 3, jobs=1)
    s2 = verify_structure_theorems(3, 3, jobs=2)
    assert s1.passed and s2.passed
    assert {k: (c.checked, c.cross_checked) for k, c in s1.checks.items()} == {
        k: (c.checked, c.cross_checked) for k, c in s2.checks.items()
    }


def test_rule_scan_covers_every_parent():
    report = verify_transition_rules(3, 3)
    assert report.passed and report.mode == "exhaustive"
    # every spec of order < 3 is censused once, plus one root-distribution check
    assert report.checks["start"].checked == 1
    total = sum(c.checked for name, c in report.checks.items() if name != "start")
    assert total == sum(3 ** (2 * m + 1) for m in range(3))


def test_structure_scan_counts_steps():
    report = verify_structure_theorems(3, 2)
    assert report.passed
    assert all(c.cross_checked <= c.checked for c in report.checks.values())
    assert report.checks["ascent_span"].checked > 0
    assert report.checks["plateau_shift"].checked > 0
    assert report.checks["descent_interior_zeros"].checked > 0
    assert report.checks["single_generator_ends"].checked > 0


# ---------------------------------------------------------------------------
# the failure path is live: fabricated measurements are caught


def test_rule_stats_flags_wrong_census():
    stats = _RuleStats(2)
    stats.record(0, 0, {0: 3, 1: 1}, (1,), (), 0)
    assert stats.tallies["zero_zero"][:2] == [1, 0]
    stats.record(0, 0, {0: 2, 1: 2}, (1, 0), (0,), 1)
    checked, failures, cex = stats.tallies["zero_zero"]
    assert (checked, failures) == (2, 1)
    assert cex is not None and cex.order == 1 and cex.a == (1, 0)
    # the recorded spec can be rebuilt and re-measured independently,
    # exposing the fabricated census
    rebuilt = ToeplitzSpec(field=F2, a=cex.a, b=cex.b)
    assert extension_census(rebuilt).counts == {0: 3, 1: 1}


def test_rule_stats_keeps_smallest_counterexample():
    stats = _RuleStats(2)
    stats.record(0, 0, {0: 9}, (1, 1), (1,), 1)
    stats.record(0, 0, {0: 9}, (0,), (), 0)
    assert stats.tallies["zero_zero"][2].sort_key == (0, 0)


# ---------------------------------------------------------------------------
# seeded sampling


def test_xorshift_reference_stream():
    gen = XorShift64(1)
    assert [gen.next_word() for _ in range(3)] == [
        1082269761,
        1152992998833853505,
        11177516664432764457,
    ]


def test_xorshift_zero_seed_falls_back():
    assert XorShift64(0).next_word() == XorShift64(2**64).next_word() != 0


def test_xorshift_below_stays_in_range():
    gen = XorShift64(42)
    draws = [gen.below(5) for _ in range(500)]
    assert set(draws) <= set(range(5))
    assert len(set(draws)) == 5
    with pytest.raises(ValueError):
        gen.below(0)


def test_sample_census_is_deterministic():
    first = sample_census(9, 5, trials=40, seed=7)
    second = sample_census(9, 5, trials=40, seed=7)
    assert first.passed and first.mode == "sampled"
    assert rule_summary(first) == rule_summary(second)
    assert sum(c.checked for c in first.checks.values()) == 40
    shifted = sample_census(9, 5, trials=40, seed=8)
    assert shifted.passed


def test_sample_census_beyond_exhaustive_budget():
    # 13^33 specs of order 16 exist; sampling still answers in milliseconds
    report = sample_census(16, 13, trials=4, seed=3)
    assert report.passed
    assert report.trials == 4 and report.seed == 3


def test_sample_census_validates_trials():
    with pytest.raises(ValueError):
        sample_census(3, 2, trials=-1, seed=0)
    assert sample_census(3, 2, trials=0, seed=0).passed


# ---------------------------------------------------------------------------
# realized nullity strings


@pytest.mark.parametrize("q", (2, 3))
def test_realized_strings_are_exactly_the_valid_ones(q):
    realized = realized_nullity_strings(4, q)
    assert realized == set(iter_valid_strings(5))


def test_realized_strings_lengths():
    realized = realized_nullity_strings(2, 2)
    assert {len(s) for s in realized} == {1, 2, 3}
    assert (0, 1, 2) in realized and (1, 1, 1) in realized
    assert (1, 1, 2) not in realized
