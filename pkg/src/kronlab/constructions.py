"""Telescoping constructions with growing Birkhoff sums.

Both constructions start from F_nu(x) = K(pi m_nu.x) / zeta_nu for a nonnegative
kernel K and set f_nu(x) = F_nu(x + alpha) - F_nu(x), so the Birkhoff sum of f_nu
along the orbit collapses to F_nu(t alpha).  Since alpha.m_nu = delta_nu mod 1
with |delta_nu| = zeta_nu, the orbit value only needs t * delta_nu reduced mod 1.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import mpmath
import numpy as np

from .core import (
    DEFAULT_CONTEXT,
    Certified,
    ConstantTail,
    Kind,
    OrbitTail,
    PrecisionContext,
    RealVector,
    Report,
    Term,
    TrigSeriesFunction,
    at_context_precision,
    eval_series,
)
from .diophantine import BestApproximation, estimate_exponents
from .errors import (
    DepthExceeded,
    DomainError,
    EmptyConstruction,
    InsufficientData,
    InsufficientDepth,
    OutOfRange,
    RangeError,
)

mpf = mpmath.mpf


# ---------------------------------------------------------------------------
# sigma sequences


@dataclass(frozen=True)
class SigmaSequence:
    """A positive sequence decreasing to zero: power, log_inv or a custom table."""

    form: str
    p: float = 0.25
    table: tuple = ()

    def __post_init__(self):
        if self.form not in ("power", "log_inv", "custom"):
            raise DomainError(f"unknown sigma form {self.form!r}")
        if self.form == "power" and not self.p > 0:
            raise DomainError("power sigma needs p > 0")
        if self.form == "custom":
            tab = tuple(float(v) for v in self.table)
            if not tab:
                raise DomainError("custom sigma table is empty")
            object.__setattr__(self, "table", tab)

    def __call__(self, t: int) -> float:
        if t < 0:
            raise DomainError("sigma index must be >= 0")
        if self.form == "power":
            return (t + 2.0) ** (-self.p)
        if self.form == "log_inv":
            return 1.0 / math.log(t + math.e)
        if t >= len(self.table):
            raise OutOfRange(f"sigma table has {len(self.table)} entries, asked for t={t}")
        return self.table[t]

    @property
    def horizon(self) -> int:
        return len(self.table) if self.form == "custom" else 10**18

    def validate(self, t_max: int = 10**6) -> bool:
        """Positive and strictly decreasing on a log-spaced sample of [0, t_max]."""
        t_max = min(t_max, self.horizon - 1)
        if self.form == "custom":
            ts = range(0, t_max + 1)
        else:
            ts = sorted({0, 1, 2, *np.unique(np.geomspace(1, t_max, 200).astype(np.int64)).tolist()})
        vals = [self(int(t)) for t in ts]
        return all(v > 0 for v in vals) and all(a > b for a, b in zip(vals, vals[1:]))

    def first_below(self, level: float) -> int:
        """Smallest t with sigma_t <= level."""
        if self(0) <= level:
            return 0
        hi = 1
        while self(hi) > level:
            hi *= 2
            if hi > self.horizon:
                raise DepthExceeded(f"sigma never drops below {level} inside its table")
        lo = hi // 2
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if self(mid) <= level:
                hi = mid
            else:
                lo = mid
        return hi

    def describe(self) -> str:
        if self.form == "power":
            return f"power:{self.p}"
        if self.form == "log_inv":
            return "log_inv"
        return f"custom[{len(self.table)}]"

    @classmethod
    def parse(cls, text: str) -> "SigmaSequence":
        """``power:<p>``, ``log_inv`` or ``table:<v0>,<v1>,...``."""
        head, _, rest = text.partition(":")
        head = head.strip().lower()
        if head == "power":
            return cls("power", float(rest))
        if head == "log_inv":
            return cls("log_inv")
        if head == "table":
            return cls("custom", table=tuple(float(v) for v in rest.split(",")))
        raise DomainError(f"cannot parse sigma spec {text!r}")


# ---------------------------------------------------------------------------
# Kochergin-type construction


@dataclass(frozen=True)
class KocherginConstruction:
    alpha: RealVector
    ba: tuple
    sigma: SigmaSequence
    chosen: tuple  # (k, nu_k, r_k)
    k_max: int
    t0: int
    f: TrigSeriesFunction
    F: TrigSeriesFunction

    @property
    def records(self) -> list:
        return [self.ba[nu - 1] for _, nu, _ in self.chosen]

    @property
    def r_last(self) -> int:
        return self.chosen[-1][2]


def _abs_sin_pair(weight, rec: BestApproximation, bits: int) -> list:
    """weight * (|sin pi(m.x + delta)| - |sin pi m.x|) / zeta as two abs_sin terms."""
    with mpmath.workprec(bits):
        c = mpf(weight) / rec.zeta
        return [
            Term(c, rec.m, mpmath.pi * rec.delta, Kind.ABS_SIN),
            Term(-c, rec.m, 0, Kind.ABS_SIN),
        ]


def build_kochergin(
    alpha: RealVector,
    ba: Sequence[BestApproximation],
    sigma: SigmaSequence,
    k_max: int,
    ctx: PrecisionContext = DEFAULT_CONTEXT,
) -> KocherginConstruction:
    """Greedy choice of nu_k: the first index after nu_{k-1} whose
    r = floor(1/(2 zeta)) has sigma_r <= 2^-k and r > r_{k-1}."""
    if k_max < 1:
        raise EmptyConstruction("k_max must be >= 1")
    if not sigma.validate():
        raise DomainError("sigma is not positive and strictly decreasing")
    chosen = []
    nu_prev, r_prev = 0, -1
    for k in range(1, k_max + 1):
        level = 2.0**-k
        pick = None
        for idx in range(nu_prev, len(ba)):
            r = int(mpmath.floor(1 / (2 * ba[idx].zeta)))
            if r > r_prev and r < sigma.horizon and sigma(r) <= level:
                pick = (k, idx + 1, r)
                break
        if pick is None:
            need = max(sigma.first_below(level), r_prev + 1)
            raise DepthExceeded(
                f"step k={k} needs a record with zeta <= {1 / (2 * need):.3e} "
                f"(r >= {need}); the list ends at zeta = {mpmath.nstr(ba[-1].zeta, 5)}"
            )
        chosen.append(pick)
        nu_prev, r_prev = pick[1], pick[2]

    f_terms, F_terms = [], []
    for j, nu, _ in chosen:
        rec = ba[nu - 1]
        f_terms += _abs_sin_pair(mpmath.ldexp(1, -j), rec, ctx.bits)
        with mpmath.workprec(ctx.bits):
            F_terms.append(Term(mpmath.ldexp(1, -j) / rec.zeta, rec.m, 0, Kind.ABS_SIN))
    with mpmath.workprec(ctx.bits):
        tail_f = ConstantTail(mpmath.pi * mpmath.ldexp(1, -k_max))
        tail_F = OrbitTail(mpmath.pi * mpmath.ldexp(1, -k_max))
    n = alpha.n
    f = TrigSeriesFunction(n, f_terms, tail_f, "kochergin_f")
    F = TrigSeriesFunction(n, F_terms, tail_F, "kochergin_F")
    return KocherginConstruction(alpha, tuple(ba), sigma, tuple(chosen), k_max, chosen[0][2], f, F)


@at_context_precision
def kochergin_sum(c: KocherginConstruction, t: int, ctx: PrecisionContext = DEFAULT_CONTEXT) -> Certified:
    """S_f^t(alpha) = F(t alpha) = sum_j 2^-j |sin(pi t delta_j)| / zeta_j, plus the
    omitted-tail report pi t 2^-k_max."""
    if t < 0:
        raise DomainError("t must be >= 0")
    with mpmath.workprec(ctx.bits + int(t).bit_length() + 8):
        parts = []
        for j, nu, _ in c.chosen:
            rec = c.ba[nu - 1]
            y = t * rec.delta
            y -= mpmath.floor(y)
            parts.append(mpmath.ldexp(1, -j) * abs(mpmath.sin(mpmath.pi * y)) / rec.zeta)
        value = mpmath.fsum(parts)
    value = +value
    tail = mpmath.pi * t * mpmath.ldexp(1, -c.k_max)
    rounding = mpmath.ldexp(abs(value) + len(parts), -ctx.bits + 8)
    return Certified(value, tail, rounding)


def kochergin_f_eval(c: KocherginConstruction, x, ctx: PrecisionContext = DEFAULT_CONTEXT) -> Certified:
    """f(x) for the truncated construction, with tail bound pi 2^-k_max."""
    return eval_series(c.f, x, ctx, strict=False)


@at_context_precision
def certify_growth(
    c: KocherginConstruction, t_from: int, t_to: int, ctx: PrecisionContext = DEFAULT_CONTEXT
) -> Report:
    """Check S_f^t >= t sigma_t on [t_from, t_to] within the certified window [t0, r_{k_max}].

    Each row also carries the ratio S / (2 t sigma_t) from the proof's sharper bound.
    """
    if t_from < c.t0 or t_to > c.r_last or t_from > t_to:
        raise RangeError(f"range [{t_from}, {t_to}] outside the certified window [{c.t0}, {c.r_last}]")
    rep = Report("kochergin_growth", meta={"alpha": str(c.alpha), "sigma": c.sigma.describe(),
                                           "k_max": c.k_max, "t0": c.t0, "r_last": c.r_last,
                                           "chosen": [list(x) for x in c.chosen]})
    slack = mpf(ctx.tol)
    for t in range(t_from, t_to + 1):
        s = kochergin_sum(c, t, ctx)
        target = mpf(t) * mpf(c.sigma(t))
        rep.add({"t": t, "S": s.value, "bound": target, "tail": s.tail_bound,
                 "ratio_2tsigma": s.value / (2 * target)}, s.value >= target - slack)
    return rep


# ---------------------------------------------------------------------------
# smooth construction


@dataclass(frozen=True)
class SmoothConstruction:
    alpha: RealVector
    ba: tuple
    d: float
    N_terms: int
    series: TrigSeriesFunction
    margin: float | None

    @property
    def records(self) -> tuple:
        return self.ba[: self.N_terms]


@at_context_precision
def build_smooth(
    alpha: RealVector,
    ba: Sequence[BestApproximation],
    d: float,
    N_terms: int,
    ctx: PrecisionContext = DEFAULT_CONTEXT,
    *,
    exponents: tuple | None = None,
) -> SmoothConstruction:
    """N-term smooth telescoping series.

    Term nu is M^-d sin(pi delta)/zeta * sin(2 pi m.x + pi delta): the difference
    of sin^2(pi m.x)/zeta at x + alpha and x.  ``exponents`` = (omega, omega_hat)
    overrides the finite-sample estimates used for the margin 2 omega_hat - omega - d.
    """
    if d < 1:
        raise DomainError("d must be >= 1")
    if N_terms < 1:
        raise DomainError("N_terms must be >= 1")
    if len(ba) < N_terms:
        raise InsufficientDepth(f"need {N_terms} best approximations, have {len(ba)}")
    terms = []
    dd = mpf(d)
    for rec in ba[:N_terms]:
        coeff = mpf(rec.M) ** (-dd) * mpmath.sin(mpmath.pi * rec.delta) / rec.zeta
        terms.append(Term(coeff, rec.m, mpmath.pi * rec.delta, Kind.SIN))
    series = TrigSeriesFunction(alpha.n, terms, ConstantTail(0), "smooth_f")
    if exponents is not None:
        omega, omega_hat = exponents
        margin = 2 * omega_hat - omega - d
    else:
        try:
            est = estimate_exponents(ba)
            margin = 2 * est.omega_hat_est - est.omega_est - d
        except InsufficientData:
            margin = None
    return SmoothConstruction(alpha, tuple(ba), float(d), N_terms, series, margin)


def smooth_sup_bound(s: SmoothConstruction):
    return mpmath.pi * mpmath.fsum(mpf(r.M) ** (-mpf(s.d)) for r in s.records)


def _omitted_bound(s: SmoothConstruction):
    """Bound for sum_{nu > N} zeta_nu M_nu^-d using known records, then Minkowski
    zeta_nu <= M_{nu+1}^-n with M_nu >= M_L + (nu - L) past the last known record L."""
    n = s.alpha.n
    dd = mpf(s.d)
    known = mpmath.fsum(r.zeta * mpf(r.M) ** (-dd) for r in s.ba[s.N_terms :])
    ML = mpf(s.ba[-1].M)
    expo = n + dd - 1
    rest = ML ** (-expo) / expo if expo > 0 else mpmath.inf
    return known + rest


@at_context_precision
def smooth_orbit_sum(s: SmoothConstruction, t: int, ctx: PrecisionContext = DEFAULT_CONTEXT) -> Certified:
    """F(t alpha) = sum_nu M^-d sin^2(pi t delta_nu) / zeta_nu for the N-term series.

    ``tail_bound`` reports what the records past N could add for the infinite
    series: t^2 pi^2 sum_{nu > N} zeta_nu M_nu^-d.
    """
    if t < 0:
        raise DomainError("t must be >= 0")
    dd = mpf(s.d)
    with mpmath.workprec(ctx.bits + int(t).bit_length() + 8):
        parts = []
        for rec in s.records:
            y = t * rec.delta
            y -= mpmath.floor(y)
            parts.append(mpf(rec.M) ** (-dd) * mpmath.sin(mpmath.pi * y) ** 2 / rec.zeta)
        value = mpmath.fsum(parts)
    value = +value
    tail = mpf(t) ** 2 * mpmath.pi**2 * _omitted_bound(s)
    rounding = mpmath.ldexp(abs(value) + len(parts), -ctx.bits + 8)
    return Certified(value, tail, rounding)


@at_context_precision
def certify_smooth_growth(s: SmoothConstruction, t_max: int, ctx: PrecisionContext = DEFAULT_CONTEXT) -> Report:
    """Per window [1/(2 zeta_{nu-1}), 1/(2 zeta_nu)) within [1, t_max]: the minimum of the
    orbit sum against 4 t_left^2 zeta_nu / M_nu^d (passes at 99% of the prediction)."""
    if t_max < 1:
        raise DomainError("t_max must be >= 1")
    rep = Report("smooth_growth", meta={"alpha": str(s.alpha), "d": s.d, "N_terms": s.N_terms,
                                        "t_max": t_max, "margin": s.margin})
    dd = mpf(s.d)
    lo = 1
    recs = s.records
    for i, rec in enumerate(recs):
        hi_excl = mpmath.ceil(1 / (2 * rec.zeta))  # first integer t with t >= 1/(2 zeta)
        left = lo if i == 0 else max(lo, int(mpmath.ceil(1 / (2 * recs[i - 1].zeta))))
        right = min(int(hi_excl) - 1, t_max)
        if left <= right:
            vals = [(smooth_orbit_sum(s, t, ctx).value, t) for t in range(left, right + 1)]
            min_s, argmin = min(vals)
            pred = 4 * mpf(left) ** 2 * rec.zeta / mpf(rec.M) ** dd
            rep.add({"nu": i + 1, "M": rec.M, "t_left": left, "t_right": right, "min_S": min_s,
                     "argmin_t": argmin, "prediction": pred}, min_s >= pred * mpf("0.99"))
        if right >= t_max:
            break
    else:
        if recs and mpmath.ceil(1 / (2 * recs[-1].zeta)) <= t_max:
            raise InsufficientDepth(
                f"{s.N_terms} terms only cover t < {int(mpmath.ceil(1 / (2 * recs[-1].zeta)))}"
            )
    return rep


def direct_orbit_sum(f: TrigSeriesFunction, alpha: RealVector, t: int,
                     ctx: PrecisionContext = DEFAULT_CONTEXT) -> list:
    """Partial sums sum_{k<s} f(k alpha) for s = 0..t, by evaluating f at each orbit point."""
    from .core import orbit_point

    out = [mpf(0)]
    with mpmath.workprec(ctx.bits):
        acc = mpf(0)
        for k in range(t):
            x = orbit_point(alpha, k, bits=ctx.bits)
            acc += eval_series(f, x, ctx, strict=False).value
            out.append(+acc)
    return out
