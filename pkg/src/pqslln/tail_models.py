"""Exact representations of nonnegative-tail distributions.

A model is a survival function t -> P(||X|| > t) given as ordered pieces from
a small formula catalog (constant, power, power-log, power-log-loglog,
indicator-below), plus a sign law and optional analytic metadata.  Everything
downstream -- quantiles u_n = inf{t : P(||X|| > t) < 1/n}, inverse-transform
sampling, truncated moments, and the asymptotic exponents used by the
convergence classifiers -- is derived from the pieces.

All probabilities are clamped to [0, 1] after formula evaluation: the
log-corrected formulas can exceed 1 by a few ulps near their knees.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Callable, Mapping

import numpy as np
from scipy.interpolate import CubicHermiteSpline

from .asymptotics import LogPolyTail
from .errors import NonMonotoneTail, QuadratureFailure
from .quadrature import integrate

E = math.e

FORMULA_IDS = ("constant", "power", "power-log", "power-log-loglog", "indicator-below")

SIGN_SYMMETRIC = "symmetric"
SIGN_NONNEGATIVE = "nonnegative"


@dataclass(frozen=True)
class SignLaw:
    """How a sign is attached to the magnitude ||X||.

    kind 'symmetric' puts probability 1/2 on each sign, 'nonnegative' none on
    the negative side, and 'custom' splits with the given negative-side mass.
    """

    kind: str = SIGN_SYMMETRIC
    negative_prob: float = 0.0

    def __post_init__(self):
        if self.kind not in (SIGN_SYMMETRIC, SIGN_NONNEGATIVE, "custom"):
            raise ValueError(f"unknown sign law {self.kind!r}")
        if self.kind == "custom" and not (0.0 <= self.negative_prob <= 1.0):
            raise ValueError("negative_prob must lie in [0, 1]")

    @property
    def threshold(self) -> float:
        if self.kind == SIGN_SYMMETRIC:
            return 0.5
        if self.kind == SIGN_NONNEGATIVE:
            return 0.0
        return self.negative_prob

    def to_json(self):
        if self.kind == "custom":
            return {"kind": "custom", "negative_prob": self.negative_prob}
        return self.kind

    @staticmethod
    def from_json(obj) -> "SignLaw":
        if isinstance(obj, str):
            return SignLaw(obj)
        return SignLaw("custom", float(obj["negative_prob"]))


@dataclass(frozen=True)
class TailPiece:
    """One survival-formula piece active on (t_lo, t_hi] (first piece: [0, t_hi])."""

    t_lo: float
    t_hi: float
    formula: str
    params: tuple  # sorted (name, value) pairs; see piece()

    def param(self, name: str) -> float:
        for key, val in self.params:
            if key == name:
                return val
        raise KeyError(name)

    def to_json(self):
        return {
            "t_lo": self.t_lo,
            "t_hi": None if math.isinf(self.t_hi) else self.t_hi,
            "formula_id": self.formula,
            "params": dict(self.params),
        }


def piece(t_lo: float, t_hi: float, formula: str, **params: float) -> TailPiece:
    if formula not in FORMULA_IDS:
        raise ValueError(f"unknown formula_id {formula!r}")
    return TailPiece(float(t_lo), float(t_hi), formula, tuple(sorted(params.items())))


@dataclass(frozen=True)
class ClauseFact:
    """Known truth values for one (p, q) pair, from closed-form tail calculus."""

    integral_finite: bool | None = None
    p_moment_finite: bool | None = None
    series_finite: bool | None = None
    member: bool | None = None
    note: str = ""


@dataclass(frozen=True)
class AnalyticFacts:
    provenance: str
    quantile: Callable[[float], float] | None = None
    clause_facts: Callable[[float, float], ClauseFact | None] | None = None


@dataclass(frozen=True)
class QuantileResult:
    n: int
    u_n: float
    bracket_width: float


@dataclass(frozen=True)
class TailModel:
    name: str
    pieces: tuple[TailPiece, ...] = ()
    survival_fn: Callable | None = None  # overrides pieces when set
    sign_law: SignLaw = SignLaw(SIGN_SYMMETRIC)
    support_bounds: tuple[float, float] | None = None
    analytic: AnalyticFacts | None = None
    origin: tuple = ()  # (builtin_name, sorted params) metadata for manifests

    @property
    def knee(self) -> float:
        """Last piece boundary; the tail is a single smooth formula beyond it."""
        if not self.pieces:
            return 1.0
        return max(p.t_lo for p in self.pieces)

    def piece_edges(self) -> tuple[float, ...]:
        edges = sorted({p.t_lo for p in self.pieces} | {pp.param("threshold") for pp in self.pieces if pp.formula == "indicator-below"})
        return tuple(t for t in edges if t > 0.0)

    def to_json(self):
        return {
            "name": self.name,
            "pieces": [p.to_json() for p in self.pieces],
            "sign_law": self.sign_law.to_json(),
        }


def _eval_formula(formula: str, params: TailPiece, t: np.ndarray) -> np.ndarray:
    if formula == "constant":
        return np.full_like(t, params.param("value"))
    if formula == "indicator-below":
        return np.where(t < params.param("threshold"), 1.0, 0.0)
    scale = params.param("scale")
    power = params.param("power")
    out = scale * t ** (-power)
    if formula in ("power-log", "power-log-loglog"):
        out = out * np.log(t) ** (-params.param("log_power"))
    if formula == "power-log-loglog":
        out = out * np.log(np.log(t)) ** (-params.param("loglog_power"))
    return out


def survival(model: TailModel, t) -> np.ndarray | float:
    """P(||X|| > t); exact up to floating-point evaluation of the formula."""
    scalar = np.isscalar(t)
    tt = np.asarray(t, dtype=float)
    if np.any(tt < 0.0):
        raise ValueError("survival is defined for t >= 0")
    if model.survival_fn is not None:
        out = np.asarray(model.survival_fn(tt), dtype=float)
    else:
        out = np.empty_like(tt)
        out.fill(np.nan)
        for i, pc in enumerate(model.pieces):
            if i == 0:
                mask = tt <= pc.t_hi
            else:
                mask = (tt > pc.t_lo) & (tt <= pc.t_hi)
            if np.any(mask):
                out[mask] = _eval_formula(pc.formula, pc, tt[mask])
    out = np.clip(out, 0.0, 1.0)
    return float(out) if scalar else out


def _bisect_decreasing(fn, targets, *, hi_seed: float, rel_tol: float = 1e-12,
                       max_iter: int = 160):
    """Vectorized inf{t : fn(t) < target} for nonincreasing fn and targets in (0, 1].

    Brackets each target by per-element doubling, then bisects.  Raises
    NonMonotoneTail if fn is detected increasing on the bracketing grid.
    """
    targets = np.atleast_1d(np.asarray(targets, dtype=float))

    seed = max(hi_seed, 1.0)
    hi = np.full(targets.shape, seed)
    lo = np.zeros_like(targets)
    for _ in range(1100):
        need = fn(hi) >= targets
        if not np.any(need):
            break
        lo = np.where(need, hi, lo)
        hi = np.where(need, 2.0 * hi, hi)
        if np.any(hi[need] > 8.9e307):
            raise NonMonotoneTail("could not bracket: survival does not fall below target")
    else:
        raise NonMonotoneTail("could not bracket: survival does not fall below target")

    probe = np.geomspace(seed * 1e-3, float(np.max(hi)), 200)
    vals = fn(probe)
    if np.any(np.diff(vals) > 1e-12):
        raise NonMonotoneTail("survival increased on the bracketing grid")

    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        above = fn(mid) >= targets
        lo = np.where(above, mid, lo)
        hi = np.where(above, hi, mid)
        gap = hi - lo
        if np.all(gap <= rel_tol * np.maximum(hi, 1.0)):
            break
    return hi, hi - lo


def _closed_form_inverse(model: TailModel):
    """Return callable u -> inf{t : S(t) < u} when the catalog allows it, else None.

    Pieces must be constants or pure powers (plus indicator-below); the
    log-corrected formulas require bisection.
    """
    if model.survival_fn is not None:
        return None
    for pc in model.pieces:
        if pc.formula in ("power-log", "power-log-loglog"):
            return None

    pieces = model.pieces
    s_at_zero = float(survival(model, 0.0))

    def inverse(u: np.ndarray) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        out = np.zeros_like(u)
        # Scan pieces left to right; the infimum sits in the first piece whose
        # values drop strictly below u.
        unset = u <= s_at_zero
        for i, pc in enumerate(pieces):
            if not np.any(unset):
                break
            left = 0.0 if i == 0 else pc.t_lo
            if pc.formula == "indicator-below":
                # survival is 0 at and beyond the threshold
                out = np.where(unset, pc.param("threshold"), out)
                unset = np.zeros_like(unset)
            elif pc.formula == "constant":
                qualifies = unset & (u > pc.param("value"))
                out = np.where(qualifies, left, out)
                unset &= ~qualifies
            else:  # power
                scale = pc.param("scale")
                a = pc.param("power")
                v_right = 0.0 if math.isinf(pc.t_hi) else scale * pc.t_hi ** (-a)
                qualifies = unset & (u > v_right)
                with np.errstate(divide="ignore", over="ignore"):
                    t_star = (scale / u) ** (1.0 / a)
                out = np.where(qualifies, np.maximum(t_star, left), out)
                unset &= ~qualifies
        return out

    return inverse


def inverse_survival(model: TailModel, u) -> np.ndarray | float:
    """Generalized inverse inf{t : survival(t) < u} for u in (0, 1]."""
    scalar = np.isscalar(u)
    uu = np.atleast_1d(np.asarray(u, dtype=float))
    if np.any((uu <= 0.0) | (uu > 1.0)):
        raise ValueError("uniforms must lie in (0, 1]")
    closed = _closed_form_inverse(model)
    if closed is not None:
        out = closed(uu)
    else:
        out, _ = _bisect_decreasing(lambda t: survival(model, t), uu,
                                    hi_seed=2.0 * max(model.knee, 1.0))
    return float(out[0]) if scalar else out


def quantile_un(model: TailModel, n: int) -> QuantileResult:
    """u_n = inf{t : P(||X|| > t) < 1/n}, closed form when available."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if model.analytic is not None and model.analytic.quantile is not None:
        return QuantileResult(n, float(model.analytic.quantile(n)), 0.0)
    closed = _closed_form_inverse(model)
    if closed is not None:
        return QuantileResult(n, float(closed(np.array([1.0 / n]))[0]), 0.0)
    root, width = _bisect_decreasing(lambda t: survival(model, t),
                                     np.array([1.0 / n]),
                                     hi_seed=2.0 * max(model.knee, 1.0))
    return QuantileResult(n, float(root[0]), float(width[0]))


def quantiles_un(model: TailModel, ns: np.ndarray) -> np.ndarray:
    """Vectorized u_n over an integer array (used by the truncated series)."""
    ns = np.asarray(ns, dtype=float)
    if model.analytic is not None and model.analytic.quantile is not None:
        return np.asarray([model.analytic.quantile(n) for n in ns], dtype=float)
    closed = _closed_form_inverse(model)
    if closed is not None:
        return closed(1.0 / ns)
    roots, _ = _bisect_decreasing(lambda t: survival(model, t), 1.0 / ns,
                                  hi_seed=2.0 * max(model.knee, 1.0))
    return roots


def sample(model: TailModel, uniform: float, sign_uniform: float) -> float:
    """Inverse-transform draw; |result| is the generalized inverse at `uniform`."""
    if not (0.0 < uniform < 1.0 and 0.0 < sign_uniform < 1.0):
        raise ValueError("uniforms must lie in (0, 1)")
    mag = inverse_survival(model, uniform)
    return -mag if sign_uniform < model.sign_law.threshold else mag


def transformed_edges(model: TailModel, p: float) -> tuple[float, ...]:
    """Piece edges of the tail of Y = ||X||^p, for quadrature splitting."""
    return tuple(e**p for e in model.piece_edges())


def power_survival(model: TailModel, p: float):
    """Callable t -> P(||X||^p > t), vectorized."""
    inv = 1.0 / p

    def s_y(t):
        t = np.asarray(t, dtype=float)
        return survival(model, t**inv)

    return s_y


def truncated_p_moment(model: TailModel, p: float, a: float, b: float,
                       *, rel_tol: float = 1e-9) -> float:
    """E[ Y * 1(a < Y <= b) ] for Y = ||X||^p.

    Computed as a*P(Y>a) - b*P(Y>b) + int_a^b P(Y>t) dt, which only needs the
    survival function.  Zero when the window is empty.
    """
    if not (0.0 <= a <= b):
        raise ValueError("need 0 <= a <= b")
    if a == b:
        return 0.0
    s_y = power_survival(model, p)
    head = a * float(s_y(np.array([a]))[0]) if a > 0 else 0.0
    tail = b * float(s_y(np.array([b]))[0])
    quad = integrate(s_y, a, b, rel_tol=rel_tol,
                     breakpoints=transformed_edges(model, p))
    return head - tail + quad.value


class CumulativeTailTable:
    """Precomputed G(t) = int_0^t P(||X||^p > s) ds on a geometric grid.

    Node values come from per-cell adaptive quadrature (the transformed piece
    edges are inserted as nodes, so G is exact there); queries interpolate
    with a monotone cubic in ln t.  After the O(points) quadratures each
    query costs O(1), which is what makes the N-term truncated series cheap.
    """

    def __init__(self, model: TailModel, p: float, t_max: float, points: int = 256,
                 *, rel_tol: float = 1e-9):
        if t_max <= 0.0:
            raise ValueError("t_max must be positive")
        if points < 16:
            raise ValueError("need at least 16 grid points")
        self.model = model
        self.p = float(p)
        self.t_max = float(t_max)
        s_y = power_survival(model, p)
        edges = [e for e in transformed_edges(model, p) if 0.0 < e < t_max]
        t_lo = min([t_max * 1e-6, 1e-3, *edges]) if edges else min(t_max * 1e-6, 1e-3)
        grid = np.geomspace(t_lo, t_max, points)
        grid = np.unique(np.concatenate([grid, np.asarray(edges), [t_max]]))
        self._head_value = float(s_y(np.array([t_lo * 0.5]))[0])  # S is flat below the first edge

        g_vals = [self._head_value * grid[0]]
        cell_errors = [0.0]
        for lo, hi in zip(grid[:-1], grid[1:]):
            res = integrate(s_y, lo, hi, rel_tol=rel_tol, breakpoints=edges)
            g_vals.append(g_vals[-1] + res.value)
            cell_errors.append(res.error)
        self.grid = grid
        self.values = np.asarray(g_vals)
        self.cell_errors = np.asarray(cell_errors)
        if np.any(np.diff(self.values) < -1e-12):
            raise QuadratureFailure("cumulative tail table is not monotone")
        # Hermite interpolation in s = ln t with the exact slope
        # dG/ds = t * S_Y(t); an order more accurate than fitting values alone.
        slopes = grid * np.asarray(s_y(grid), dtype=float)
        self._interp = CubicHermiteSpline(np.log(grid), self.values, slopes,
                                          extrapolate=False)

    def __call__(self, t) -> np.ndarray | float:
        scalar = np.isscalar(t)
        tt = np.atleast_1d(np.asarray(t, dtype=float))
        if np.any(tt < 0.0) or np.any(tt > self.t_max * (1 + 1e-12)):
            raise ValueError("query outside table range")
        tt = np.minimum(tt, self.t_max)
        out = np.where(tt <= self.grid[0], self._head_value * tt, 0.0)
        above = tt > self.grid[0]
        if np.any(above):
            out[above] = self._interp(np.log(tt[above]))
        return float(out[0]) if scalar else out


def tail_asymptote(model: TailModel) -> LogPolyTail | None:
    """Exact log-polynomial asymptote of the final piece; None if unavailable.

    Bounded-support models (final piece constant 0 or indicator-below) are
    reported via `support_upper` instead.
    """
    if model.survival_fn is not None or not model.pieces:
        return None
    last = model.pieces[-1]
    if last.formula == "power":
        return LogPolyTail(last.param("scale"), last.param("power"))
    if last.formula == "power-log":
        return LogPolyTail(last.param("scale"), last.param("power"), last.param("log_power"))
    if last.formula == "power-log-loglog":
        return LogPolyTail(last.param("scale"), last.param("power"),
                           last.param("log_power"), last.param("loglog_power"))
    return None


def support_upper(model: TailModel) -> float:
    """Essential upper bound of ||X|| (inf when the tail is unbounded)."""
    if model.support_bounds is not None:
        return model.support_bounds[1]
    if model.survival_fn is not None or not model.pieces:
        return math.inf
    last = model.pieces[-1]
    if last.formula == "indicator-below":
        return last.param("threshold")
    if last.formula == "constant" and last.param("value") == 0.0:
        return last.t_lo
    return math.inf


def mean_zero(model: TailModel) -> bool | None:
    """Whether E(X) = 0 can be read off the sign law; None when unknown.

    Asymmetric custom splits are left undetermined: the toolkit carries
    tails, not signed densities, so it does not assert a nonzero mean there.
    """
    if support_upper(model) == 0.0:
        return True
    if model.sign_law.kind == SIGN_SYMMETRIC:
        return True
    if model.sign_law.kind == SIGN_NONNEGATIVE:
        return False
    if model.sign_law.negative_prob == 0.5:
        return True
    return None


def validate_model(model: TailModel, *, grid_points: int = 1000) -> None:
    """Check the survival invariants on a geometric grid; raise on violation."""
    hi = max(model.knee, 1.0) * 1e12
    grid = np.concatenate([[0.0], np.geomspace(max(model.knee, 1.0) * 1e-9, hi, grid_points)])
    vals = np.asarray(survival(model, grid))
    if vals[0] > 1.0 + 1e-12:
        raise ValueError(f"{model.name}: survival(0) > 1")
    if np.any(np.diff(vals) > 1e-12):
        raise NonMonotoneTail(f"{model.name}: survival increases on the test grid")
    asym = tail_asymptote(model)
    if asym is not None:
        if asym.a < 0 or (asym.a == 0 and asym.b <= 0):
            raise ValueError(f"{model.name}: tail does not vanish at infinity")
    elif support_upper(model) == math.inf and vals[-1] > 0.999 * max(vals[1], 1e-300):
        raise ValueError(f"{model.name}: tail does not appear to vanish at infinity")


# ---------------------------------------------------------------------------
# Built-in models
# ---------------------------------------------------------------------------


def _pareto_facts(alpha: float):
    def facts(p: float, q: float) -> ClauseFact:
        # S(t) = t^(-alpha) beyond 1: every criterion reduces to comparing
        # p against alpha; the truncated series is finite for every p
        # (exactly zero when p >= alpha, summable power decay when p < alpha).
        finite = bool(p < alpha - 1e-12)
        member = finite
        return ClauseFact(
            integral_finite=finite,
            p_moment_finite=finite,
            series_finite=True,
            member=member,
            note=f"pure power tail, exponent {alpha:g}",
        )

    return facts


def pareto(alpha: float, sign_law: str | SignLaw = SIGN_SYMMETRIC) -> TailModel:
    """Survival t^(-alpha) beyond t = 1 (the critical instance alpha = p has
    u_n^p = n exactly, which empties every truncation window)."""
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    sl = sign_law if isinstance(sign_law, SignLaw) else SignLaw(sign_law)
    return TailModel(
        name=f"pareto(alpha={alpha:g})",
        pieces=(piece(0.0, 1.0, "constant", value=1.0),
                piece(1.0, math.inf, "power", scale=1.0, power=alpha)),
        sign_law=sl,
        analytic=AnalyticFacts(
            provenance="closed form: u_n = n^(1/alpha) inverts t^(-alpha) = 1/n",
            quantile=lambda n, a=alpha: n ** (1.0 / a),
            clause_facts=_pareto_facts(alpha),
        ),
        origin=("pareto", (("alpha", alpha), ("sign_law", sl.kind))),
    )


def _log_power_facts(a: float, b: float):
    def facts(p: float, q: float) -> ClauseFact | None:
        tol = 1e-12
        # Tail calculus for S(t) = e^a t^(-a) (ln t)^(-b):
        #   integral condition exponent triple: (a/p, b*q/p, 0)
        #   p-moment triple:                    (a/p, b, 0)
        #   series at q = p: finite iff a > p, or a = p with b > 1.
        if a > p + tol:
            integral = pm = series = True
        elif a < p - tol:
            integral = pm = False
            series = None  # window eventually empties only if the scale wins; not asserted
        else:
            integral = b * q / p > 1.0 + tol
            pm = b > 1.0 + tol
            series = b > 1.0 + tol if b > tol else None
        member = None
        if q < p - tol and p < 1.0:
            member = integral
        elif abs(q - p) <= tol and p < 1.0:
            member = pm and bool(series)
        return ClauseFact(integral, pm, series, member,
                          note=f"power-log tail, exponents ({a:g}, {b:g})")

    return facts


def log_power_tail(power: float, log_power: float,
                   sign_law: str | SignLaw = SIGN_SYMMETRIC) -> TailModel:
    """Survival e^power * t^(-power) * (ln t)^(-log_power) beyond t = e.

    With log_power = 2p/q this is the tail that separates membership at
    (p, p) from membership at (p, q) for q < p.
    """
    if power <= 0 or log_power <= 0:
        raise ValueError("power and log_power must be positive")
    sl = sign_law if isinstance(sign_law, SignLaw) else SignLaw(sign_law)
    return TailModel(
        name=f"log-power(power={power:g}, log_power={log_power:g})",
        pieces=(piece(0.0, E, "constant", value=1.0),
                piece(E, math.inf, "power-log",
                      scale=math.exp(power), power=power, log_power=log_power)),
        sign_law=sl,
        analytic=AnalyticFacts(
            provenance="closed-form tail calculus on t^(-a) (ln t)^(-b)",
            clause_facts=_log_power_facts(power, log_power),
        ),
        origin=("log-power", (("power", power), ("log_power", log_power), ("sign_law", sl.kind))),
    )


def _log_loglog_facts(a: float):
    def facts(p: float, q: float) -> ClauseFact | None:
        tol = 1e-12
        # S(t) = e^(e*a+1) t^(-a) (ln t)^(-1) (lnln t)^(-2):
        #   p-moment triple (a/p, 1, 2) is finite at a = p thanks to the
        #   squared lnln factor, while the series integrand (1, 1, 1) sits
        #   exactly on the divergent boundary.
        if a > p + tol:
            integral = pm = series = True
        elif a < p - tol:
            integral = pm = False
            series = None
        else:
            integral = q > p - tol  # (1, q/p, 2q/p): needs q/p > 1, or = 1 with 2q/p > 1
            pm = True
            series = False
        member = None
        if q < p - tol and p < 1.0:
            member = integral
        elif abs(q - p) <= tol and p < 1.0:
            member = pm and bool(series)
        return ClauseFact(integral, pm, series, member,
                          note=f"power-log-loglog tail, exponent {a:g}")

    return facts


def log_loglog_power_tail(power: float, sign_law: str | SignLaw = SIGN_SYMMETRIC) -> TailModel:
    """Survival e^(e*power+1) * t^(-power) * (ln t)^(-1) * (lnln t)^(-2) beyond e^e.

    The marginal tail whose p-moment is finite while the critically truncated
    series still diverges.
    """
    if power <= 0:
        raise ValueError("power must be positive")
    sl = sign_law if isinstance(sign_law, SignLaw) else SignLaw(sign_law)
    knee = math.exp(E)
    return TailModel(
        name=f"log-loglog-power(power={power:g})",
        pieces=(piece(0.0, knee, "constant", value=1.0),
                piece(knee, math.inf, "power-log-loglog",
                      scale=math.exp(E * power + 1.0), power=power,
                      log_power=1.0, loglog_power=2.0)),
        sign_law=sl,
        analytic=AnalyticFacts(
            provenance="closed-form tail calculus on t^(-a) (ln t)^(-1) (lnln t)^(-2)",
            clause_facts=_log_loglog_facts(power),
        ),
        origin=("log-loglog-power", (("power", power), ("sign_law", sl.kind))),
    )


def _degenerate_facts(value: float, sl: SignLaw):
    def facts(p: float, q: float) -> ClauseFact:
        tol = 1e-12
        member = True
        if q < 1.0 - tol <= p - tol and value > 0.0 and sl.kind == SIGN_NONNEGATIVE:
            member = False  # bounded but mean nonzero
        return ClauseFact(True, True, True, member, note="bounded support")

    return facts


def degenerate(value: float, sign_law: str | SignLaw = SIGN_NONNEGATIVE,
               name: str | None = None) -> TailModel:
    """||X|| identically equal to `value`."""
    if value < 0:
        raise ValueError("value must be nonnegative")
    sl = sign_law if isinstance(sign_law, SignLaw) else SignLaw(sign_law)
    return TailModel(
        name=name or f"degenerate(value={value:g})",
        pieces=(piece(0.0, math.inf, "indicator-below", threshold=value),),
        sign_law=sl,
        support_bounds=(value, value),
        analytic=AnalyticFacts(
            provenance="degenerate law: survival is the indicator of t < value",
            quantile=lambda n, c=value: c,
            clause_facts=_degenerate_facts(value, sl),
        ),
        origin=("degenerate", (("value", value), ("sign_law", sl.kind))),
    )


def rademacher() -> TailModel:
    """Symmetric +/-1 law (unit magnitude with a fair sign)."""
    m = degenerate(1.0, SIGN_SYMMETRIC, name="rademacher")
    return TailModel(name="rademacher", pieces=m.pieces, sign_law=m.sign_law,
                     support_bounds=m.support_bounds, analytic=m.analytic,
                     origin=("rademacher", ()))


def zero() -> TailModel:
    return degenerate(0.0, SIGN_NONNEGATIVE, name="zero")


BUILTINS: Mapping[str, Callable[..., TailModel]] = {
    "pareto": pareto,
    "log-power": log_power_tail,
    "log-loglog-power": log_loglog_power_tail,
    "degenerate": degenerate,
    "rademacher": rademacher,
    "zero": zero,
}


def make_builtin(name: str, **params) -> TailModel:
    if name not in BUILTINS:
        raise ValueError(f"unknown builtin model {name!r}; have {sorted(BUILTINS)}")
    return BUILTINS[name](**params)


def load_model(source) -> TailModel:
    """Build a custom model from a JSON document (path, JSON text, or dict).

    Schema: {"name": str, "sign_law": ..., "pieces": [{"t_lo", "t_hi",
    "formula_id", "params"}, ...]} with formula_id from the fixed catalog.
    """
    if isinstance(source, (str, bytes)):
        try:
            obj = json.loads(source)
        except json.JSONDecodeError:
            with open(source) as fh:
                obj = json.load(fh)
    else:
        obj = source
    if "sign_law" not in obj:
        raise ValueError("custom model document must declare a sign_law")
    pieces = []
    for raw in obj["pieces"]:
        t_hi = raw.get("t_hi")
        pieces.append(piece(raw["t_lo"], math.inf if t_hi is None else t_hi,
                            raw["formula_id"], **raw.get("params", {})))
    pieces.sort(key=lambda p: p.t_lo)
    model = TailModel(
        name=obj.get("name", "custom"),
        pieces=tuple(pieces),
        sign_law=SignLaw.from_json(obj["sign_law"]),
        origin=("custom", (("json", json.dumps(obj, sort_keys=True)),)),
    )
    validate_model(model)
    return model
