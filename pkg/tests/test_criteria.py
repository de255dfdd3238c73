import math

import numpy as np
import pytest

from pqslln import criteria as cr
from pqslln import tail_models as tm
from pqslln.errors import InversionFailure


def member_model_family(p, q):
    """The critical-line tail e^q t^-q (ln t)^(-2p/q): a member exactly at q = p."""
    return tm.log_power_tail(power=q, log_power=2.0 * p / q)


# ---------------------------------------------------------------------------
# integral condition
# ---------------------------------------------------------------------------


def test_integral_degenerate_value_exact():
    c = 1.3
    v = cr.integral_pq(tm.degenerate(c), 0.7, 0.5)
    assert v.kind == cr.CONVERGES
    assert v.estimate_on_window == pytest.approx(c**0.5, rel=1e-12)
    assert v.method == "bounded-support"
    assert v.remainder_bound == 0.0


def test_integral_pareto_closed_form():
    # symbolic antiderivative: 1 + int_1^inf t^-2 dt = 2
    v = cr.integral_pq(tm.pareto(2.0), 1.0, 0.5)
    assert v.kind == cr.CONVERGES
    assert v.estimate_on_window == pytest.approx(2.0, abs=1e-6)
    assert v.remainder_bound is not None and v.remainder_bound < 1e-6


@pytest.mark.parametrize("q_frac", [0.4, 0.8])
def test_integral_diverges_below_critical_q(q_frac):
    p = 0.5
    q = q_frac * p
    v = cr.integral_pq(member_model_family(p, q), p, q)
    assert v.kind == cr.DIVERGES
    # Diverges verdicts carry strictly increasing partials with positive slope
    partials = v.diagnostics["last_decade_partials"]
    assert all(b > a for a, b in zip(partials, partials[1:]))
    assert v.diagnostics["last_decade_slope"] > 0.0


def test_integral_requires_cap_beyond_knee():
    with pytest.raises(ValueError):
        cr.integral_pq(tm.log_loglog_power_tail(0.5), 0.5, 0.5, t_cap=1.0)


# ---------------------------------------------------------------------------
# moments
# ---------------------------------------------------------------------------


def test_p_moment_marginal_tails():
    # double-log damping keeps the critical moment finite
    assert cr.p_moment(tm.log_loglog_power_tail(0.5), 0.5).kind == cr.CONVERGES
    # the bare critical power tail does not
    assert cr.p_moment(tm.pareto(0.5), 0.5).kind == cr.DIVERGES
    v = cr.p_moment(tm.degenerate(1.0), 0.5)
    assert v.kind == cr.CONVERGES and v.estimate_on_window == pytest.approx(1.0)


def test_llogl_moment_examples():
    m = member_model_family(0.5, 0.5)
    assert cr.llogl_moment(m, 0.5, 0.5).kind == cr.CONVERGES
    assert cr.llogl_moment(m, 0.5, 1.0).kind == cr.DIVERGES
    v = cr.llogl_moment(tm.degenerate(1.0), 0.5, 0.7)
    assert v.kind == cr.CONVERGES
    assert v.estimate_on_window == pytest.approx(math.log(2.0) ** 0.7, rel=1e-9)
    # comparison oracle: E|X|^p' finite for p < p' < alpha dominates the log factor
    assert cr.p_moment(tm.pareto(2.0), 1.5).kind == cr.CONVERGES
    assert cr.llogl_moment(tm.pareto(2.0), 1.0, 1.0).kind == cr.CONVERGES


def test_inversion_failure_on_saturating_transform():
    with pytest.raises(InversionFailure):
        cr._invert_increasing(lambda x: np.arctan(x), np.array([2.0]))


# ---------------------------------------------------------------------------
# truncated series
# ---------------------------------------------------------------------------


def test_series_critical_tail_exact_zero():
    table, verdict = cr.truncated_series(tm.pareto(0.5), 0.5, 10_000)
    assert verdict.kind == cr.CONVERGES
    assert verdict.method == "zero-terms"
    assert max(table.terms_at_checkpoints) <= 1e-12
    assert table.partial_sums[-1] <= 1e-12


def test_series_degenerate_zero():
    table, verdict = cr.truncated_series(tm.degenerate(1.0), 0.5, 1000)
    assert verdict.kind == cr.CONVERGES
    assert table.partial_sums[-1] == 0.0


def test_series_marginal_divergent():
    table, verdict = cr.truncated_series(tm.log_loglog_power_tail(0.5), 0.5, 100_000)
    assert verdict.kind == cr.DIVERGES
    sums = table.partial_sums
    assert all(b > a for a, b in zip(sums, sums[1:]))
    assert verdict.diagnostics["last_decade_slope"] > 0.0
    # the boundary-term-free integral form tracks the expectation form
    assert all(i <= s for i, s in zip(table.integral_form_partials, sums))


def test_series_member_tail_converges():
    _, verdict = cr.truncated_series(member_model_family(0.5, 0.5), 0.5, 100_000)
    assert verdict.kind == cr.CONVERGES
    assert verdict.remainder_bound is not None and np.isfinite(verdict.remainder_bound)


def test_series_partial_sums_nondecreasing():
    for model in (tm.log_loglog_power_tail(0.3), member_model_family(0.7, 0.7),
                  tm.pareto(2.0)):
        table, _ = cr.truncated_series(model, min(0.7, 0.9), 5000)
        sums = np.asarray(table.partial_sums)
        assert np.all(np.diff(sums) >= 0.0)


def test_series_requires_enough_terms():
    with pytest.raises(ValueError):
        cr.truncated_series(tm.pareto(2.0), 0.5, 100)


# ---------------------------------------------------------------------------
# clause classification
# ---------------------------------------------------------------------------


def test_clause_table():
    assert cr.clause_of(0.5, 0.25) == cr.CLAUSE_Q_LT_P
    assert cr.clause_of(0.5, 0.5) == cr.CLAUSE_Q_EQ_P
    assert cr.clause_of(1.5, 0.5) == cr.CLAUSE_P_GE_1
    assert cr.clause_of(1.0, 0.5) == cr.CLAUSE_P_GE_1
    assert cr.clause_of(1.5, 1.0) == cr.CLAUSE_OUT
    assert cr.clause_of(0.5, 0.7) == cr.CLAUSE_OUT  # q > p < 1 handled elsewhere
    assert cr.clause_of(2.0, 0.5) == cr.CLAUSE_OUT


def test_classify_membership_split():
    p = 0.5
    assert cr.classify_slln(member_model_family(p, p), p, p,
                            series_n_max=20_000).membership == cr.MEMBER
    for q in (0.25, 0.4):
        report = cr.classify_slln(member_model_family(p, q), p, q)
        assert report.membership == cr.NON_MEMBER


def test_classify_marginal_nonmembers():
    r = cr.classify_slln(tm.log_loglog_power_tail(0.5), 0.5, 0.5, series_n_max=20_000)
    assert r.membership == cr.NON_MEMBER
    assert r.p_moment_verdict.kind == cr.CONVERGES
    assert r.truncated_series_verdict.kind == cr.DIVERGES
    r = cr.classify_slln(tm.pareto(0.5), 0.5, 0.5, series_n_max=20_000)
    assert r.membership == cr.NON_MEMBER
    assert r.p_moment_verdict.kind == cr.DIVERGES
    assert r.truncated_series_verdict.kind == cr.CONVERGES


def test_classify_bounded_and_mean_zero():
    assert cr.classify_slln(tm.rademacher(), 1.5, 0.5).membership == cr.MEMBER
    r = cr.classify_slln(tm.pareto(2.0, "nonnegative"), 1.5, 0.5)
    assert r.membership == cr.NON_MEMBER and r.mean_zero is False
    r = cr.classify_slln(tm.pareto(2.0, tm.SignLaw("custom", 0.3)), 1.5, 0.5)
    assert r.membership == cr.UNDECIDED and r.mean_zero is None


def test_classify_out_of_scope():
    r = cr.classify_slln(tm.rademacher(), 1.5, 1.5)
    assert r.clause == cr.CLAUSE_OUT and r.membership == cr.UNDECIDED


def test_expectation_criterion_contrast():
    p = 0.5
    r = cr.series_expectation_criterion(member_model_family(p, p), p, p,
                                        series_n_max=20_000)
    assert r.membership == cr.NON_MEMBER          # marginal log moment diverges
    assert r.contrast_membership == cr.MEMBER     # while the a.s. criterion holds
    assert r.llogl_verdict.kind == cr.DIVERGES
    r = cr.series_expectation_criterion(tm.pareto(2.0), 1.0, 0.5)
    assert r.membership == cr.MEMBER
    r = cr.series_expectation_criterion(tm.zero(), 0.5, 0.3)
    assert r.membership == cr.MEMBER


def test_clause_qlt_membership_equals_integral_verdict():
    # for q < p < 1 the membership is exactly the mapped integral verdict
    mapping = {cr.CONVERGES: cr.MEMBER, cr.DIVERGES: cr.NON_MEMBER,
               cr.INCONCLUSIVE: cr.UNDECIDED}
    cases = [(tm.pareto(2.0), 0.5, 0.3), (tm.pareto(0.5), 0.5, 0.25),
             (member_model_family(0.5, 0.25), 0.5, 0.25),
             (tm.rademacher(), 0.9, 0.4)]
    for model, p, q in cases:
        report = cr.classify_slln(model, p, q)
        assert report.clause == cr.CLAUSE_Q_LT_P
        assert report.membership == mapping[report.integral_verdict.kind]


def test_monotone_in_q_within_clause():
    # membership cannot be lost by raising q: Member at q implies not NonMember
    # at any tested q' in (q, p]
    cases = [
        (tm.pareto(2.0), 0.5, 0.1),
        # the q = p family instance is a member from q > p/2 upward
        (member_model_family(0.5, 0.5), 0.5, 0.3),
        (tm.rademacher(), 0.7, 0.2),
    ]
    for model, p, q0 in cases:
        assert cr.classify_slln(model, p, q0, series_n_max=10_000).membership == cr.MEMBER
        for qp in np.linspace(q0 * 1.2, p, 4):
            later = cr.classify_slln(model, p, float(qp), series_n_max=10_000)
            assert later.membership != cr.NON_MEMBER


def test_soundness_against_stored_facts():
    # no verdict may contradict a stored analytic fact (Inconclusive is fine)
    models = [
        tm.pareto(0.5), tm.pareto(2.0), tm.pareto(0.2),
        member_model_family(0.5, 0.5), member_model_family(0.5, 0.25),
        tm.log_loglog_power_tail(0.5), tm.log_loglog_power_tail(0.9),
        tm.degenerate(1.0), tm.rademacher(), tm.zero(),
    ]
    pq_grid = [(0.3, 0.15), (0.5, 0.25), (0.5, 0.5), (0.9, 0.9), (1.5, 0.5)]
    for model in models:
        facts_fn = model.analytic.clause_facts if model.analytic else None
        if facts_fn is None:
            continue
        for p, q in pq_grid:
            fact = facts_fn(p, q)
            if fact is None:
                continue
            report = cr.classify_slln(model, p, q, series_n_max=5000)
            checks = [
                (fact.integral_finite, report.integral_verdict),
                (fact.p_moment_finite, report.p_moment_verdict),
                (fact.series_finite, report.truncated_series_verdict),
            ]
            for truth, verdict in checks:
                if truth is None or verdict is None:
                    continue
                if verdict.kind == cr.CONVERGES:
                    assert truth, (model.name, p, q, verdict)
                elif verdict.kind == cr.DIVERGES:
                    assert not truth, (model.name, p, q, verdict)
            if fact.member is not None and report.membership != cr.UNDECIDED:
                expected = cr.MEMBER if fact.member else cr.NON_MEMBER
                assert report.membership == expected, (model.name, p, q)


def test_report_serializes():
    r = cr.classify_slln(tm.pareto(2.0), 0.5, 0.25)
    d = r.to_dict()
    assert d["membership"] == cr.MEMBER
    assert d["integral_verdict"]["kind"] == cr.CONVERGES
    assert isinstance(d["integral_verdict"]["evidence"]["beta"], float)
    import json

    json.dumps(d)  # must be JSON-clean
