"""Exact enumeration checks for the finite-n inequalities.

Discrete laws carry their probabilities as exact rationals whenever the
inputs are rational (ints, Fractions, or "a/b" strings), so the inequality
checks cannot fail from rounding; real-valued functionals of the atoms
(fractional powers) are evaluated in floating point with compensated sums.
Convolutions are computed on value-indexed maps with exact Fraction values,
never on the raw product space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction


from .errors import PreconditionViolated, StateSpaceExceeded

_MASS_TOL = 1e-15
_CONV_CAP = 5_000_000  # value-map entries allowed during one convolution step


def _as_prob(p):
    if isinstance(p, Fraction):
        return p
    if isinstance(p, int):
        return Fraction(p)
    if isinstance(p, str):
        return Fraction(p)
    return float(p)


@dataclass(frozen=True)
class DiscreteLaw:
    atoms: tuple[tuple[Fraction, Fraction | float], ...]

    @staticmethod
    def from_pairs(pairs) -> "DiscreteLaw":
        # Fraction(float) is the exact binary value, so float atoms stay exact.
        atoms = tuple((v if isinstance(v, Fraction) else Fraction(v), _as_prob(p))
                      for v, p in pairs)
        law = DiscreteLaw(atoms)
        law.validate()
        return law

    @property
    def exact(self) -> bool:
        return all(isinstance(p, Fraction) for _, p in self.atoms)

    def validate(self) -> None:
        if any((p < 0) for _, p in self.atoms):
            raise ValueError("probabilities must be nonnegative")
        if self.exact:
            total = sum((p for _, p in self.atoms), Fraction(0))
            if total != 1:
                raise ValueError(f"probabilities sum to {total}, not 1")
        else:
            total = math.fsum(float(p) for _, p in self.atoms)
            if abs(total - 1.0) > _MASS_TOL:
                raise ValueError(f"probabilities sum to {total!r}, not 1")

    def values(self) -> list[Fraction]:
        return [v for v, _ in self.atoms]


def rademacher_law() -> DiscreteLaw:
    return DiscreteLaw.from_pairs([(-1, Fraction(1, 2)), (1, Fraction(1, 2))])


def two_point(zero_mass, value, value_mass) -> DiscreteLaw:
    return DiscreteLaw.from_pairs([(0, zero_mass), (value, value_mass)])


# ---------------------------------------------------------------------------
# Maximal inequality for sparsely supported nonnegative variables
# ---------------------------------------------------------------------------


def lemma_max_check(law: DiscreteLaw, n: int, K) -> tuple[float, float, bool]:
    """Check E(max of n iid copies) >= n/(2K) * E(Y) under P(Y > 0) <= K/n.

    E max is exact: P(max <= v) = F(v)^n over the sorted atom levels.
    Returns (lhs, rhs, holds); comparisons are exact rational arithmetic
    whenever the law is exact.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    kf = Fraction(K) if not isinstance(K, Fraction) else K
    if kf < 1:
        raise ValueError("K must be >= 1")
    if any(v < 0 for v, _ in law.atoms):
        raise ValueError("law must be nonnegative")

    exact = law.exact
    zero = Fraction(0) if exact else 0.0
    p_pos = sum((p for v, p in law.atoms if v > 0), zero)
    bound = kf / n if exact else float(kf) / n
    if p_pos > bound:
        raise PreconditionViolated(
            f"P(Y>0) = {float(p_pos):g} exceeds K/n = {float(bound):g}")

    merged: dict[Fraction, Fraction | float] = {}
    for v, p in law.atoms:
        merged[v] = merged.get(v, zero) + p
    levels = sorted(merged)
    cdf_prev = zero
    e_max = zero
    e_y = zero
    cum = zero
    for v in levels:
        cum = cum + merged[v]
        p_max_here = cum**n - cdf_prev**n
        e_max = e_max + v * p_max_here
        e_y = e_y + v * merged[v]
        cdf_prev = cum
    rhs = Fraction(n) / (2 * kf) * e_y if exact else n / (2.0 * float(kf)) * e_y
    holds = e_max >= rhs
    return float(e_max), float(rhs), bool(holds)


# ---------------------------------------------------------------------------
# Symmetrization inequality
# ---------------------------------------------------------------------------


def _convolve_difference(law: DiscreteLaw) -> DiscreteLaw:
    """Exact law of V - V' over atom pairs."""
    exact = law.exact
    zero = Fraction(0) if exact else 0.0
    out: dict[Fraction, Fraction | float] = {}
    for v1, p1 in law.atoms:
        for v2, p2 in law.atoms:
            key = v1 - v2
            out[key] = out.get(key, zero) + p1 * p2
    return DiscreteLaw(tuple(sorted(out.items())))


def symmetrization_check(law: DiscreteLaw, p_exponent: float, t: float
                         ) -> tuple[float, float, bool]:
    """Check P(g(V) <= t) E(g(V)) <= E(g(V_hat)) + beta t for g(x) = |x|^p,
    beta = max(1, 2^(p-1)), with V_hat = V - V' convolved exactly over pairs."""
    if p_exponent <= 0.0:
        raise ValueError("p_exponent must be positive")
    beta = max(1.0, 2.0 ** (p_exponent - 1.0))

    def g(v: Fraction) -> float:
        return abs(float(v)) ** p_exponent

    e_g = math.fsum(g(v) * float(p) for v, p in law.atoms)
    p_le_t = math.fsum(float(p) for v, p in law.atoms if g(v) <= t)
    hat = _convolve_difference(law)
    e_g_hat = math.fsum(g(v) * float(p) for v, p in hat.atoms)
    lhs = p_le_t * e_g
    rhs = e_g_hat + beta * t
    holds = lhs <= rhs + 1e-12 * max(1.0, abs(rhs))
    return lhs, rhs, holds


# ---------------------------------------------------------------------------
# Exact moments of normalized partial sums
# ---------------------------------------------------------------------------


def exact_series_small(law: DiscreteLaw, p: float, q: float, n_limit: int
                       ) -> list[float]:
    """Exact E(|S_n| / n^(1/p))^q for n = 1..n_limit by repeated convolution.

    The distribution of S_n lives on a value-indexed map with exact Fraction
    values; StateSpaceExceeded guards the support growth.
    """
    if n_limit < 1:
        raise ValueError("n_limit must be >= 1")
    if n_limit > 12:
        raise ValueError("exact enumeration is limited to n <= 12")
    exact = law.exact
    zero = Fraction(0) if exact else 0.0
    if len(law.atoms) ** n_limit > 10**8 and len(law.atoms) > 1:
        # fall through: the value-map convolution may still be feasible when
        # sums collide; the cap below is the real guard
        pass

    current: dict[Fraction, Fraction | float] = {Fraction(0): zero + 1}
    out: list[float] = []
    for n in range(1, n_limit + 1):
        if len(current) * len(law.atoms) > _CONV_CAP:
            raise StateSpaceExceeded(
                f"convolution support would exceed {_CONV_CAP} entries at n={n}")
        nxt: dict[Fraction, Fraction | float] = {}
        for s, ps in current.items():
            for v, pv in law.atoms:
                key = s + v
                nxt[key] = nxt.get(key, zero) + ps * pv
        current = nxt
        if exact:
            mass = sum(current.values(), Fraction(0))
            if mass != 1:
                raise AssertionError("convolution lost probability mass")
        else:
            mass = math.fsum(float(x) for x in current.values())
            if abs(mass - 1.0) > 1e-12:
                raise AssertionError("convolution lost probability mass")
        scale = n ** (1.0 / p)
        out.append(math.fsum((abs(float(s)) / scale) ** q * float(ps)
                             for s, ps in current.items()))
    return out


def distribution_of_sum(law: DiscreteLaw, n: int) -> DiscreteLaw:
    """Exact law of S_n (exposed for convolution-mass tests)."""
    exact = law.exact
    zero = Fraction(0) if exact else 0.0
    current: dict[Fraction, Fraction | float] = {Fraction(0): zero + 1}
    for _ in range(n):
        if len(current) * len(law.atoms) > _CONV_CAP:
            raise StateSpaceExceeded("convolution support too large")
        nxt: dict[Fraction, Fraction | float] = {}
        for s, ps in current.items():
            for v, pv in law.atoms:
                key = s + v
                nxt[key] = nxt.get(key, zero) + ps * pv
        current = nxt
    return DiscreteLaw(tuple(sorted(current.items())))
