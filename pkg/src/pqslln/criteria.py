"""Clause-by-clause convergence classification of the membership conditions.

Each analytic condition is an improper integral or series built from the
survival function:

    integral condition   int_0^inf P^{q/p}(||X||^q > t) dt
    p-th moment          int_0^inf P(||X||^p > t) dt
    log-moment           E[ ||X||^p ln^delta(1 + ||X||) ]
    truncated series     sum_n E[ ||X||^p 1(min{u_n^p, n} < ||X||^p <= n) ] / n

A Verdict records three things: the value accumulated on the evaluated
window, fitted exponent evidence at the window edge, and a three-valued
classification.  The classification itself is decided in tiers:

1. bounded support: the integral terminates; Converges with an exact value.
2. catalog tails: the integrand's exact log-polynomial exponents are pushed
   through the transform algebra and compared lexicographically.  This is
   what resolves the marginal examples: a (lnln t)^(-1) factor separates
   convergence from divergence but shifts a fitted log exponent by only
   ~1/lnln(t_cap) ~ 0.3 at t_cap = 1e12, far inside any honest fit band.
3. otherwise: the fitted cascade (power exponent beta on the last decade,
   then log exponent lambda when |beta - 1| <= 0.05), with Inconclusive when
   both sit in their bands.

Fitted evidence is recorded in every case; only the verdict source changes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import tail_models as tm
from .asymptotics import LogPolyTail, integral_converges, tail_remainder
from .errors import InversionFailure
from .quadrature import integrate
from .trend import fit_line, fit_log_exponent, fit_loglog_exponent

CONVERGES = "Converges"
DIVERGES = "Diverges"
INCONCLUSIVE = "Inconclusive"

MEMBER = "Member"
NON_MEMBER = "NonMember"
UNDECIDED = "Inconclusive"

BETA_BAND = 0.05
LAMBDA_BAND = 0.05
T_CAP_DEFAULT = 1e12
GRID_PER_DECADE = 25
SERIES_N_MAX_DEFAULT = 100_000
_EQ = 1e-12

CLAUSE_Q_LT_P = "q<p<1"
CLAUSE_Q_EQ_P = "q=p<1"
CLAUSE_P_GE_1 = "q<1<=p<2"
CLAUSE_OUT = "out-of-scope"


@dataclass(frozen=True)
class ExponentEvidence:
    beta: float
    lam: float | None
    window: tuple[float, float]

    def to_dict(self):
        return {"beta": self.beta, "lambda": self.lam, "window": list(self.window)}


@dataclass(frozen=True)
class Verdict:
    kind: str
    estimate_on_window: float
    evidence: ExponentEvidence
    remainder_bound: float | None = None
    method: str = "trend-fit"
    diagnostics: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "kind": self.kind,
            "estimate_on_window": self.estimate_on_window,
            "evidence": self.evidence.to_dict(),
            "remainder_bound": self.remainder_bound,
            "method": self.method,
            "diagnostics": {k: v for k, v in self.diagnostics.items()},
        }


def _fit_evidence(f, lo: float, hi: float) -> ExponentEvidence:
    """Fit the local power exponent on the last decade of [lo, hi]."""
    if hi <= max(lo, 0.0) or hi <= 0.0:
        return ExponentEvidence(0.0, None, (0.0, 0.0))
    start = max(lo, hi / 10.0)
    grid = np.geomspace(max(start, 1e-300), hi, GRID_PER_DECADE + 1)
    vals = np.asarray(f(grid), dtype=float)
    if not np.any(vals > 0.0):
        # integrand already vanished; look back for its last positive decade
        wide = np.geomspace(max(lo, 1e-300), hi, 200)
        wvals = np.asarray(f(wide), dtype=float)
        pos = np.nonzero(wvals > 0.0)[0]
        if pos.size == 0:
            return ExponentEvidence(0.0, None, (start, hi))
        hi = wide[pos[-1]]
        grid = np.geomspace(max(hi / 10.0, 1e-300), hi, GRID_PER_DECADE + 1)
        vals = np.asarray(f(grid), dtype=float)
    beta, _ = fit_loglog_exponent(grid, vals)
    lam = None
    if abs(beta - 1.0) < BETA_BAND:
        lam, _ = fit_log_exponent(grid, grid * vals)
    return ExponentEvidence(float(beta), lam, (float(grid[0]), float(grid[-1])))


def _divergence_diagnostics(f, hi: float) -> dict:
    """Running values of the integral across the last decade (Diverges invariant)."""
    grid = np.geomspace(hi / 10.0, hi, 11)
    mids = 0.5 * (grid[:-1] + grid[1:])
    widths = np.diff(grid)
    simpson = widths / 6.0 * (np.asarray(f(grid[:-1])) + 4.0 * np.asarray(f(mids))
                              + np.asarray(f(grid[1:])))
    partials = np.cumsum(simpson)
    slope, _, _ = fit_line(np.log(grid[1:]), partials)
    return {
        "last_decade_partials": partials.tolist(),
        "last_decade_slope": float(slope),
    }


def _trend_verdict(f, t_cap: float, evidence: ExponentEvidence):
    """Banded decision on fitted exponents (used when no exact tier applies)."""
    beta, lam = evidence.beta, evidence.lam
    f_cap = float(np.asarray(f(np.array([t_cap])))[0])
    if beta > 1.0 + BETA_BAND:
        return CONVERGES, f_cap * t_cap / (beta - 1.0)
    if beta < 1.0 - BETA_BAND:
        return DIVERGES, None
    if lam is None:
        return INCONCLUSIVE, None
    if lam > 1.0 + LAMBDA_BAND:
        return CONVERGES, f_cap * t_cap * math.log(t_cap) / (lam - 1.0)
    if lam < 1.0 - LAMBDA_BAND:
        return DIVERGES, None
    return INCONCLUSIVE, None


def _classify_tail_integral(f, *, t_cap: float, asym: LogPolyTail | None,
                            cutoff: float, breakpoints, rel_tol: float = 1e-9) -> Verdict:
    """Shared classifier for int_0^inf f(t) dt with f nonnegative, nonincreasing-ish."""
    upper = min(t_cap, cutoff)
    value = integrate(f, 0.0, upper, rel_tol=rel_tol, breakpoints=breakpoints).value
    evidence = _fit_evidence(f, 1e-3, upper)

    if cutoff <= t_cap:
        return Verdict(CONVERGES, value, evidence, remainder_bound=0.0,
                       method="bounded-support")

    if asym is not None:
        if integral_converges(asym):
            f_cap = float(np.asarray(f(np.array([t_cap])))[0])
            rem = tail_remainder(asym, t_cap, f_cap)
            return Verdict(CONVERGES, value, evidence, remainder_bound=rem,
                           method="tail-exponents",
                           diagnostics={"exponents": (asym.a, asym.b, asym.c)})
        return Verdict(DIVERGES, value, evidence, method="tail-exponents",
                       diagnostics={"exponents": (asym.a, asym.b, asym.c),
                                    **_divergence_diagnostics(f, t_cap)})

    kind, rem = _trend_verdict(f, t_cap, evidence)
    diag = _divergence_diagnostics(f, t_cap) if kind == DIVERGES else {}
    return Verdict(kind, value, evidence, remainder_bound=rem, method="trend-fit",
                   diagnostics=diag)


def integral_pq(model: tm.TailModel, p: float, q: float,
                t_cap: float = T_CAP_DEFAULT) -> Verdict:
    """Classify int_0^inf P^{q/p}(||X||^q > t) dt."""
    if not (0.0 < p < 2.0 and q > 0.0):
        raise ValueError("need 0 < p < 2 and q > 0")
    knee_t = model.knee**q
    if t_cap <= knee_t:
        raise ValueError("t_cap must exceed the knee of the transformed tail")
    inv_q = 1.0 / q
    ratio = q / p

    def f(t):
        t = np.asarray(t, dtype=float)
        return np.asarray(tm.survival(model, t**inv_q), dtype=float) ** ratio

    asym = tm.tail_asymptote(model)
    if asym is not None:
        asym = asym.power_arg(q).powered(ratio)
    cutoff = tm.support_upper(model) ** q
    return _classify_tail_integral(f, t_cap=t_cap, asym=asym, cutoff=cutoff,
                                   breakpoints=tm.transformed_edges(model, q))


def p_moment(model: tm.TailModel, p: float, t_cap: float = T_CAP_DEFAULT) -> Verdict:
    """Classify E(||X||^p) via its tail integral int_0^inf P(||X||^p > t) dt."""
    if not (0.0 < p < 2.0):
        raise ValueError("need 0 < p < 2")
    f = tm.power_survival(model, p)
    asym = tm.tail_asymptote(model)
    if asym is not None:
        asym = asym.power_arg(p)
    cutoff = tm.support_upper(model) ** p
    return _classify_tail_integral(f, t_cap=t_cap, asym=asym, cutoff=cutoff,
                                   breakpoints=tm.transformed_edges(model, p))


def _moment_map(p: float, delta: float):
    def h(x):
        x = np.asarray(x, dtype=float)
        return x**p * np.log1p(x) ** delta

    return h


def _invert_increasing(h, targets: np.ndarray) -> np.ndarray:
    """inf{x : h(x) >= t} for increasing h, vectorized bisection."""
    targets = np.asarray(targets, dtype=float)
    hi = np.ones_like(targets)
    lo = np.zeros_like(targets)
    for _ in range(1100):
        need = h(hi) < targets
        if not np.any(need):
            break
        lo = np.where(need, hi, lo)
        hi = np.where(need, 2.0 * hi, hi)
        if np.any(hi[need] > 8.9e307):
            raise InversionFailure("monotone transform could not be bracketed")
    else:
        raise InversionFailure("monotone transform could not be bracketed")
    for _ in range(120):
        mid = 0.5 * (lo + hi)
        low_side = h(mid) < targets
        lo = np.where(low_side, mid, lo)
        hi = np.where(low_side, hi, mid)
        if np.all(hi - lo <= 1e-13 * np.maximum(hi, 1.0)):
            break
    return hi


def llogl_moment(model: tm.TailModel, p: float, delta: float,
                 t_cap: float = T_CAP_DEFAULT) -> Verdict:
    """Classify E[ ||X||^p ln^delta(1 + ||X||) ] via the tail of the transform."""
    if delta <= 0.0:
        raise ValueError("delta must be positive")
    h = _moment_map(p, delta)

    def f(t):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        out = np.ones_like(t)
        pos = t > 0.0
        if np.any(pos):
            x = _invert_increasing(h, t[pos])
            out[pos] = tm.survival(model, x)
        return out

    asym = tm.tail_asymptote(model)
    if asym is not None:
        asym = asym.moment_transform(p, delta)
    upper_x = tm.support_upper(model)
    cutoff = float(h(np.array([upper_x]))[0]) if math.isfinite(upper_x) else math.inf
    edges = [float(h(np.array([e]))[0]) for e in model.piece_edges()]
    return _classify_tail_integral(f, t_cap=t_cap, asym=asym, cutoff=cutoff,
                                   breakpoints=edges)


# ---------------------------------------------------------------------------
# Truncated series (the q = p < 1 clause)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SeriesTable:
    """Partial sums of the criterion series at decade checkpoints.

    `integral_form_partials` carries the variant with the boundary terms
    dropped (the pure integral between the truncation levels), exposed as a
    diagnostic: the two differ by summable boundary terms whenever the
    p-th moment is finite.
    """

    n_max: int
    checkpoints: tuple[int, ...]
    partial_sums: tuple[float, ...]
    integral_form_partials: tuple[float, ...]
    terms_at_checkpoints: tuple[float, ...]
    clamped_terms: int

    def to_dict(self):
        return {
            "n_max": self.n_max,
            "checkpoints": list(self.checkpoints),
            "partial_sums": list(self.partial_sums),
            "integral_form_partials": list(self.integral_form_partials),
            "terms_at_checkpoints": list(self.terms_at_checkpoints),
            "clamped_terms": self.clamped_terms,
        }


def _series_tail_verdict(sy: LogPolyTail):
    """Exact verdict for sum_n E[Y 1(min{u_n', n} < Y <= n)]/n from the tail of Y.

    Writing S_Y ~ C t^(-ay) (ln t)^(-by) (lnln t)^(-cy):

    - ay > 1: the quantile level u_n' ~ n^(1/ay) << n and the window mass
      decays like a power; the series converges.
    - ay < 1: u_n' grows faster than n, the window is eventually empty.
    - ay = 1 with log corrections: the window contributes ~ S_Y(n) * n * lnln-
      factors; the series behaves like int t^(-1) (ln t)^(-by) (lnln t)^(-(cy-1)).
    - ay = 1 pure power: u_n' = C n exactly; empty window iff C >= 1, else the
      terms approach the constant C ln(1/C) and the series is harmonic.
    """
    tol = 1e-9
    ay, by, cy, c0 = sy.a, sy.b, sy.c, sy.const
    if ay > 1.0 + tol or ay < 1.0 - tol:
        return CONVERGES, None
    if by > tol:
        reduced = LogPolyTail(c0, 1.0, by, cy - 1.0)
        return (CONVERGES if integral_converges(reduced) else DIVERGES), reduced
    if cy > tol:
        return DIVERGES, LogPolyTail(c0, 1.0, 0.0, cy - 1.0)
    if c0 >= 1.0 - tol:
        return CONVERGES, None
    return DIVERGES, LogPolyTail(c0, 1.0, 0.0, 0.0)


def truncated_series(model: tm.TailModel, p: float,
                     n_max: int = SERIES_N_MAX_DEFAULT) -> tuple[SeriesTable, Verdict]:
    """Partial sums and growth verdict of the q = p truncation series.

    term_n = E[ Y 1(min{u_n^p, n} < Y <= n) ] / n  with Y = ||X||^p, evaluated
    through the cumulative tail table so each term costs O(1).
    """
    if n_max < 1000:
        raise ValueError("n_max must be at least 10^3")
    ns = np.arange(1, n_max + 1, dtype=float)
    u = tm.quantiles_un(model, ns)
    a = np.minimum(u**p, ns)
    b = ns
    nonempty = a < b * (1.0 - 1e-15)

    terms = np.zeros_like(ns)
    clamped = 0
    if np.any(nonempty):
        table = tm.CumulativeTailTable(model, p, float(n_max), points=512)
        s_y = tm.power_survival(model, p)
        aa, bb = a[nonempty], b[nonempty]
        raw = (aa * s_y(aa) - bb * s_y(bb) + table(bb) - table(aa)) / ns[nonempty]
        clamped = int(np.count_nonzero(raw < 0.0))
        terms[nonempty] = np.maximum(raw, 0.0)
        integral_terms = np.zeros_like(ns)
        integral_terms[nonempty] = np.maximum(table(bb) - table(aa), 0.0) / ns[nonempty]
    else:
        integral_terms = np.zeros_like(ns)

    partials = np.cumsum(terms)
    int_partials = np.cumsum(integral_terms)
    checkpoints = sorted({10**k for k in range(3, int(math.log10(n_max)) + 1)} | {n_max})
    idx = [c - 1 for c in checkpoints]

    # evidence fitted on the terms over the last decade of n
    lo = max(1, n_max // 10)
    win = slice(lo - 1, n_max)
    beta, _ = fit_loglog_exponent(ns[win], terms[win])
    lam = None
    if abs(beta - 1.0) < BETA_BAND:
        lam, _ = fit_log_exponent(ns[win], ns[win] * terms[win])
    evidence = ExponentEvidence(float(beta), lam, (float(lo), float(n_max)))

    table_out = SeriesTable(
        n_max=int(n_max),
        checkpoints=tuple(int(c) for c in checkpoints),
        partial_sums=tuple(float(partials[i]) for i in idx),
        integral_form_partials=tuple(float(int_partials[i]) for i in idx),
        terms_at_checkpoints=tuple(float(terms[i]) for i in idx),
        clamped_terms=clamped,
    )

    if float(np.max(terms)) <= 1e-12:
        verdict = Verdict(CONVERGES, float(partials[-1]), evidence,
                          remainder_bound=0.0, method="zero-terms")
        return table_out, verdict

    asym = tm.tail_asymptote(model)
    if asym is not None:
        sy = asym.power_arg(p)
        kind, reduced = _series_tail_verdict(sy)
        rem = None
        if kind == CONVERGES:
            if reduced is not None:
                rem = tail_remainder(reduced, float(n_max), float(terms[-1]) * n_max)
            else:
                # power-decay regime: remainder from the fitted exponent,
                # floored at one harmonic step
                rem = float(terms[-1]) * n_max / max(beta - 1.0, 0.5)
        diag = {"tail_exponents": (sy.a, sy.b, sy.c)}
        if kind == DIVERGES:
            last = partials[idx[-2]] if len(idx) > 1 else 0.0
            slope, _, _ = fit_line(np.log(ns[win]), partials[win])
            diag["last_decade_increase"] = float(partials[-1] - last)
            diag["last_decade_slope"] = float(slope)
        verdict = Verdict(kind, float(partials[-1]), evidence, remainder_bound=rem,
                          method="tail-exponents", diagnostics=diag)
        return table_out, verdict

    # no catalog form: fitted cascade on the terms
    f_cap = float(terms[-1])
    if beta > 1.0 + BETA_BAND:
        verdict = Verdict(CONVERGES, float(partials[-1]), evidence,
                          remainder_bound=f_cap * n_max / (beta - 1.0), method="trend-fit")
    elif beta < 1.0 - BETA_BAND:
        verdict = Verdict(DIVERGES, float(partials[-1]), evidence, method="trend-fit")
    elif lam is not None and lam > 1.0 + LAMBDA_BAND:
        verdict = Verdict(CONVERGES, float(partials[-1]), evidence,
                          remainder_bound=f_cap * n_max * math.log(n_max) / (lam - 1.0),
                          method="trend-fit")
    elif lam is not None and lam < 1.0 - LAMBDA_BAND:
        verdict = Verdict(DIVERGES, float(partials[-1]), evidence, method="trend-fit")
    else:
        verdict = Verdict(INCONCLUSIVE, float(partials[-1]), evidence, method="trend-fit")
    return table_out, verdict


# ---------------------------------------------------------------------------
# Clause classification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CriterionReport:
    model_name: str
    p: float
    q: float
    clause: str
    criterion: str  # "almost-sure" (clause table ii) or "expectation" (clause table iv)
    integral_verdict: Verdict
    p_moment_verdict: Verdict
    llogl_verdict: Verdict | None
    truncated_series_verdict: Verdict | None
    series_table: SeriesTable | None
    mean_zero_required: bool
    mean_zero: bool | None
    membership: str
    contrast_membership: str | None = None
    model_provenance: str = ""

    def to_dict(self):
        return {
            "model": self.model_name,
            "p": self.p,
            "q": self.q,
            "clause": self.clause,
            "criterion": self.criterion,
            "integral_verdict": self.integral_verdict.to_dict(),
            "p_moment_verdict": self.p_moment_verdict.to_dict(),
            "llogl_verdict": self.llogl_verdict.to_dict() if self.llogl_verdict else None,
            "truncated_series_verdict": (self.truncated_series_verdict.to_dict()
                                         if self.truncated_series_verdict else None),
            "series_table": self.series_table.to_dict() if self.series_table else None,
            "mean_zero_required": self.mean_zero_required,
            "mean_zero": self.mean_zero,
            "membership": self.membership,
            "contrast_membership": self.contrast_membership,
            "model_provenance": self.model_provenance,
        }


def _out_of_scope_verdict() -> Verdict:
    return Verdict(INCONCLUSIVE, 0.0, ExponentEvidence(0.0, None, (0.0, 0.0)),
                   method="out-of-scope")


def clause_of(p: float, q: float) -> str:
    if not (0.0 < p < 2.0 and q > 0.0):
        return CLAUSE_OUT
    if q < p - _EQ and p < 1.0 - _EQ:
        return CLAUSE_Q_LT_P
    if abs(q - p) <= _EQ and p < 1.0 - _EQ:
        return CLAUSE_Q_EQ_P
    if q < 1.0 - _EQ and p >= 1.0 - _EQ:
        return CLAUSE_P_GE_1
    return CLAUSE_OUT


def _membership(decisive: list[Verdict], mean_flag: bool | None,
                mean_required: bool) -> str:
    # Any Inconclusive input forces an Inconclusive membership.
    if any(v.kind == INCONCLUSIVE for v in decisive):
        return UNDECIDED
    if mean_required and mean_flag is None:
        return UNDECIDED
    if any(v.kind == DIVERGES for v in decisive):
        return NON_MEMBER
    if mean_required and mean_flag is False:
        return NON_MEMBER
    return MEMBER


def classify_slln(model: tm.TailModel, p: float, q: float, *,
                  t_cap: float = T_CAP_DEFAULT,
                  series_n_max: int = SERIES_N_MAX_DEFAULT) -> CriterionReport:
    """Almost-sure criterion: membership from the clause table

        q < p < 1       integral condition alone
        q = p < 1       p-th moment AND truncated series
        q < 1 <= p < 2  mean zero AND integral condition
    """
    clause = clause_of(p, q)
    if clause == CLAUSE_OUT:
        placeholder = _out_of_scope_verdict()
        return CriterionReport(
            model_name=model.name, p=p, q=q, clause=clause, criterion="almost-sure",
            integral_verdict=placeholder, p_moment_verdict=placeholder,
            llogl_verdict=None, truncated_series_verdict=None, series_table=None,
            mean_zero_required=False, mean_zero=tm.mean_zero(model),
            membership=UNDECIDED,
        )
    integral = integral_pq(model, p, q, t_cap)
    pmom = p_moment(model, p, t_cap)
    series_verdict = None
    series_table = None
    mean_required = clause == CLAUSE_P_GE_1
    mean_flag = tm.mean_zero(model)

    if clause == CLAUSE_Q_LT_P:
        membership = _membership([integral], mean_flag, False)
    elif clause == CLAUSE_Q_EQ_P:
        series_table, series_verdict = truncated_series(model, p, series_n_max)
        membership = _membership([pmom, series_verdict], mean_flag, False)
    elif clause == CLAUSE_P_GE_1:
        membership = _membership([integral], mean_flag, True)
    else:
        membership = UNDECIDED

    return CriterionReport(
        model_name=model.name, p=p, q=q, clause=clause, criterion="almost-sure",
        integral_verdict=integral, p_moment_verdict=pmom, llogl_verdict=None,
        truncated_series_verdict=series_verdict, series_table=series_table,
        mean_zero_required=mean_required, mean_zero=mean_flag,
        membership=membership,
        model_provenance=model.analytic.provenance if model.analytic else "",
    )


def series_expectation_criterion(model: tm.TailModel, p: float, q: float, *,
                                 t_cap: float = T_CAP_DEFAULT,
                                 series_n_max: int = SERIES_N_MAX_DEFAULT) -> CriterionReport:
    """Expectation-series criterion: same clause table with the q = p clause
    swapped to E[||X||^p ln(1 + ||X||)] < infinity.

    For the q = p clause the report also carries the almost-sure membership
    for contrast, since that is exactly where the two criteria can differ.
    """
    clause = clause_of(p, q)
    if clause == CLAUSE_OUT:
        placeholder = _out_of_scope_verdict()
        return CriterionReport(
            model_name=model.name, p=p, q=q, clause=clause, criterion="expectation",
            integral_verdict=placeholder, p_moment_verdict=placeholder,
            llogl_verdict=None, truncated_series_verdict=None, series_table=None,
            mean_zero_required=False, mean_zero=tm.mean_zero(model),
            membership=UNDECIDED,
        )
    integral = integral_pq(model, p, q, t_cap)
    pmom = p_moment(model, p, t_cap)
    llogl = None
    contrast = None
    mean_required = clause == CLAUSE_P_GE_1
    mean_flag = tm.mean_zero(model)

    if clause == CLAUSE_Q_LT_P:
        membership = _membership([integral], mean_flag, False)
    elif clause == CLAUSE_Q_EQ_P:
        llogl = llogl_moment(model, p, 1.0, t_cap)
        membership = _membership([llogl], mean_flag, False)
        contrast = classify_slln(model, p, q, t_cap=t_cap,
                                 series_n_max=series_n_max).membership
    elif clause == CLAUSE_P_GE_1:
        membership = _membership([integral], mean_flag, True)
    else:
        membership = UNDECIDED

    return CriterionReport(
        model_name=model.name, p=p, q=q, clause=clause, criterion="expectation",
        integral_verdict=integral, p_moment_verdict=pmom, llogl_verdict=llogl,
        truncated_series_verdict=None, series_table=None,
        mean_zero_required=mean_required, mean_zero=mean_flag,
        membership=membership, contrast_membership=contrast,
        model_provenance=model.analytic.provenance if model.analytic else "",
    )
