"""Lacunary sine series with unbounded sums, Pell units and the averaged kernel.

The three sine series here all have the form ``sum_k c**k sin(lam**k t)`` with
``|c * lam| < 1``.  Once ``lam**k t`` is small the remaining terms are summed
through the Taylor expansion of sine, which turns the tail into a handful of
geometric series with closed forms.  That keeps evaluation cost logarithmic in
``t`` and the discarded remainder rigorously bounded.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import mpmath
import numpy as np

from .core import (
    DEFAULT_CONTEXT,
    Certified,
    GeometricTail,
    Kind,
    PrecisionContext,
    Report,
    Term,
    TrigSeriesFunction,
    at_context_precision,
    eval_series,
    is_squarefree,
)
from .errors import BudgetExceeded, DomainError, NotSquarefree, SeedInvalid, TailDiverges

mpf = mpmath.mpf

SQRT3_HALF = math.sqrt(3) / 2
PELL_SCAN_CAP = 10**6
PELL_POWER_CAP = 256


# ---------------------------------------------------------------------------
# geometric sine series


def geometric_sine_series(c, lam, t, start: int, ctx: PrecisionContext = DEFAULT_CONTEXT) -> Certified:
    """``sum_{k >= start} c**k * sin(lam**k * t)`` for 0 < lam < 1 and |c lam| < 1."""
    with mpmath.workprec(ctx.bits + 32):
        c, lam, t = mpf(c), mpf(lam), mpf(t)
        if not 0 < lam < 1:
            raise DomainError("lam must lie in (0, 1)")
        if abs(c * lam) >= 1:
            raise TailDiverges(f"|c*lam| = {mpmath.nstr(abs(c * lam), 6)} >= 1")
        if t == 0 or (c == 0 and start > 0):
            return Certified(mpf(0))
        # direct terms while the argument is large
        extra = max(int(mpmath.log(abs(t) + 2, 2)) * 2, 0)
    with mpmath.workprec(ctx.bits + 32 + extra):
        parts = []
        l1 = mpf(0)
        k = start
        ck = c**k
        s = lam**k * t
        while abs(s) > mpf(1) / 16:
            term = ck * mpmath.sin(s)
            parts.append(term)
            l1 += abs(ck)
            k += 1
            ck *= c
            s *= lam
        # Taylor tail: sum_j (-1)^j s^(2j+1)/(2j+1)! * c^k / (1 - c lam^(2j+1))
        target = mpmath.ldexp(ctx.tol, -20)
        ab = abs(ck)
        j = 0
        pw = s
        fact = mpf(1)
        while True:
            parts.append((-1) ** j * pw / fact * ck / (1 - c * lam ** (2 * j + 1)))
            l1 += ab * abs(pw) / fact
            j += 1
            pw *= s * s
            fact *= (2 * j) * (2 * j + 1)
            rem = ab * abs(pw) / fact / (1 - abs(c) * lam) / (1 - s * s)
            if rem < target or j > 400:
                break
        value = mpmath.fsum(parts)
    with mpmath.workprec(ctx.bits):
        value = +value
        rounding = mpmath.ldexp(abs(value) + 8 * l1 * (len(parts) + 1), -ctx.bits)
        return Certified(value, +rem, rounding)


def _check(cert: Certified, ctx: PrecisionContext) -> Certified:
    if cert.error > ctx.tol:
        raise TailDiverges(f"certified error {mpmath.nstr(cert.error, 5)} exceeds tol {ctx.tol}")
    return cert


# ---------------------------------------------------------------------------
# F1 / F2


@dataclass(frozen=True)
class PoincareParams:
    t0: float
    A: float
    B: float
    h: float
    valid: bool

    @property
    def A_range(self) -> tuple:
        return (1 + 1 / (2 * self.B + 1), 2.0)

    @property
    def base_bound(self) -> float:
        return self.B / (1 - self.A / 2) if self.A != 2 else math.inf


def poincare_params(t0: float, A: float) -> PoincareParams:
    if not 0 < t0 < SQRT3_HALF:
        raise DomainError(f"t0={t0} outside (0, sqrt(3)/2)")
    B = t0 - 4 * t0**3 / 3
    lo = 1 + 1 / (2 * B + 1)
    valid = lo < A < 2
    try:
        h = 2 * B / (2 - A) - 1 / (A - 1)
    except ZeroDivisionError:
        h = math.nan
    return PoincareParams(t0, A, B, h, bool(valid and h > 0))


def eval_poincare_series(kind: str, A, t, ctx: PrecisionContext = DEFAULT_CONTEXT) -> Certified:
    """F1(t) = sum A^k sin(t/2^k) or F2(t) = sum (-A)^k sin(t/2^k), k >= 0."""
    kind = kind.upper()
    if kind not in ("F1", "F2"):
        raise DomainError(f"unknown series {kind!r}")
    if abs(A) >= 2:
        raise TailDiverges(f"series diverges for |A| = {A} >= 2")
    c = A if kind == "F1" else -A
    return _check(geometric_sine_series(c, mpf(1) / 2, t, 0, ctx), ctx)


def _octave_points(t0, n_max: int, G: int, bits: int):
    """t = 2^n t0 (1 + i/G), i = 1..G, for octaves n = 0..n_max+1 (the last feeds F(2t))."""
    with mpmath.workprec(bits):
        base = mpf(t0)
        return {
            (n, i): mpmath.ldexp(base * (1 + mpf(i) / G), n)
            for n in range(n_max + 2)
            for i in range(1, G + 1)
        }


@at_context_precision
def certify_F1_inequalities(
    A: float, t0: float, n_max: int, grid_per_octave: int = 64, ctx: PrecisionContext = DEFAULT_CONTEXT
) -> Report:
    """Grid check of the doubling inequality, the octave growth bound and the base bound.

    The grid in octave n is t = 2^n t0 (1 + i/G), i = 1..G.  Checks run even
    for parameters outside the valid range; only valid ones are expected to pass.
    """
    if n_max < 0 or grid_per_octave < 1:
        raise DomainError("n_max >= 0 and grid_per_octave >= 1 required")
    p = poincare_params(t0, A)
    G = grid_per_octave
    pts = _octave_points(t0, n_max, G, ctx.bits)
    F = {key: eval_poincare_series("F1", A, t, ctx).value for key, t in pts.items()}
    slack = 2 * ctx.tol
    a = mpf(A)
    growth0 = 1 / (a - 1) if A != 1 else mpmath.inf
    rep = Report("poincare_f1", meta={"A": A, "t0": t0, "B": p.B, "h": p.h, "valid": p.valid,
                                      "n_max": n_max, "grid_per_octave": G})
    for n in range(n_max + 1):
        bound = growth0 + mpf(p.h) * a**n
        for i in range(1, G + 1):
            t, f, f2 = pts[(n, i)], F[(n, i)], F[(n + 1, i)]
            rep.add({"check": "doubling", "n": n, "t": t, "lhs": f2, "rhs": a * f - 1},
                    f2 > a * f - 1 - slack)
            # the growth bound is stated on the open octave; skip its right endpoint
            if i < G:
                rep.add({"check": "growth", "n": n, "t": t, "lhs": f, "rhs": bound}, f > bound - slack)
            if n == 0 and i < G:
                rep.add({"check": "base", "n": 0, "t": t, "lhs": f, "rhs": mpf(p.base_bound)},
                        f > mpf(p.base_bound) - slack)
    return rep


@at_context_precision
def find_f2_seed(A: float, ctx: PrecisionContext = DEFAULT_CONTEXT, step: float = 0.01,
                 t_max: float = 10.0, margin: float = 1e-6):
    """First t = step*i in (0, t_max) with F2(t) > 1/(A-1) + margin; returns (t, h_seed)."""
    if not 1 < A < 2:
        raise DomainError("A must lie in (1, 2)")
    target = 1 / (mpf(A) - 1)
    n = int(round(t_max / step))
    for i in range(1, n):
        with mpmath.workprec(ctx.bits):
            t = mpf(i) * mpf(step)
        v = eval_poincare_series("F2", A, t, ctx).value
        if v - target > margin:
            return float(t), v - target - margin
    raise SeedInvalid(f"no seed with F2(t) > 1/(A-1) in (0, {t_max}) for A={A}")


@at_context_precision
def certify_F2_oscillation(
    A: float,
    t_seed,
    h_seed,
    n_max: int,
    ctx: PrecisionContext = DEFAULT_CONTEXT,
    *,
    grid_step: float = 0.01,
    grid_points: int = 5000,
) -> Report:
    """Two-sided doubling inequality on t = grid_step*i, i = 1..grid_points,
    and the alternating growth bounds at 2^n t_seed for n <= n_max."""
    if not 1 < A < 2:
        raise DomainError("A must lie in (1, 2)")
    a = mpf(A)
    target = 1 / (a - 1)
    h = mpf(h_seed)
    seed_val = eval_poincare_series("F2", A, t_seed, ctx).value
    if not (h > 0 and seed_val > target + h):
        raise SeedInvalid(f"F2({t_seed}) = {mpmath.nstr(seed_val, 10)} does not exceed 1/(A-1) + h")
    slack = 2 * ctx.tol
    rep = Report("poincare_f2", meta={"A": A, "t_seed": float(t_seed), "h_seed": float(h),
                                      "n_max": n_max, "grid_step": grid_step,
                                      "grid_points": grid_points})
    rep.add({"check": "seed", "n": 0, "t": mpf(t_seed), "lhs": seed_val, "rhs": target + h})

    if n_max > 0 and grid_points > 0:
        cache = {}

        def F(i):
            if i not in cache:
                with mpmath.workprec(ctx.bits):
                    t = mpf(i) * mpf(grid_step)
                cache[i] = eval_poincare_series("F2", A, t, ctx).value
            return cache[i]

        for i in range(1, grid_points + 1):
            f, f2 = F(i), F(2 * i)
            lo, hi = -a * f - 1, -a * f + 1
            rep.add({"check": "two_sided", "n": None, "t": mpf(i) * mpf(grid_step), "lhs": f2,
                     "rhs": lo, "rhs_upper": hi}, lo - slack < f2 < hi + slack)

    for n in range(1, n_max + 1):
        with mpmath.workprec(ctx.bits):
            t = mpmath.ldexp(mpf(t_seed), n)
        v = eval_poincare_series("F2", A, t, ctx).value
        bound = target + h * a**n
        if n % 2 == 0:
            rep.add({"check": "even_growth", "n": n, "t": t, "lhs": v, "rhs": bound}, v > bound - slack)
        else:
            rep.add({"check": "odd_growth", "n": n, "t": t, "lhs": v, "rhs": -bound}, v < -bound + slack)
    return rep


# ---------------------------------------------------------------------------
# Pell units


@dataclass(frozen=True)
class PellSolution:
    D: int
    u: int
    v: int
    powers: tuple = field(default=())

    def lam(self, bits: int = 256):
        """lambda = u - v sqrt(D), computed without cancellation loss."""
        return self.lam_power(1, bits)

    def lam_power(self, n: int, bits: int = 256):
        """lambda**n computed as (u + v sqrt D)**-n."""
        with mpmath.workprec(bits + 16):
            r = (self.u + self.v * mpmath.sqrt(self.D)) ** (-n)
        with mpmath.workprec(bits):
            return +r

    def conjugate_difference(self, n: int, bits: int = 256):
        """u_n - v_n sqrt(D) evaluated directly, with enough guard bits to survive cancellation."""
        u_n, v_n = self.powers[n - 1]
        guard = 2 * u_n.bit_length() + 16
        with mpmath.workprec(bits + guard):
            r = u_n - v_n * mpmath.sqrt(self.D)
        with mpmath.workprec(bits):
            return +r

    def check(self) -> bool:
        return self.u * self.u - self.D * self.v * self.v == 1 and all(
            a * a - self.D * b * b == 1 for a, b in self.powers
        )


def pell_fundamental(D: int) -> PellSolution:
    """Smallest solution of u^2 - D v^2 = 1 by scanning v."""
    if D < 2 or not is_squarefree(D):
        raise NotSquarefree(f"D={D} is not a squarefree integer >= 2")
    for v in range(1, PELL_SCAN_CAP + 1):
        w = D * v * v + 1
        u = math.isqrt(w)
        if u * u == w:
            return PellSolution(D, u, v)
    raise BudgetExceeded(f"no Pell solution with v <= {PELL_SCAN_CAP} for D={D}")


def pell_powers(p: PellSolution, N: int) -> PellSolution:
    """Fill (u_n, v_n) for n = 1..N from the recurrence."""
    if N < 1:
        raise DomainError("N must be >= 1")
    if N > PELL_POWER_CAP:
        raise DomainError(f"N={N} exceeds the cap {PELL_POWER_CAP}")
    powers = list(p.powers[:N])
    if not powers:
        powers = [(p.u, p.v)]
    while len(powers) < N:
        un, vn = powers[-1]
        powers.append((p.u * un + p.D * p.v * vn, p.u * vn + p.v * un))
    return PellSolution(p.D, p.u, p.v, tuple(powers))


def _terms_needed(ratio, tol) -> int:
    """Smallest N with ratio^(N+1)/(1-ratio) <= tol."""
    if ratio == 0:
        return 0
    r = mpf(ratio)
    N = int(mpmath.ceil(mpmath.log(mpf(tol) * (1 - r)) / mpmath.log(r))) - 1
    return max(N, 1)


def _ratio(A, p: PellSolution, bits: int):
    with mpmath.workprec(bits):
        r = abs(mpf(A)) * p.lam(bits)
    if r >= 1:
        raise TailDiverges(f"|A*lambda| = {mpmath.nstr(r, 6)} >= 1")
    return r


def eval_F3(A, p: PellSolution, t, ctx: PrecisionContext = DEFAULT_CONTEXT) -> Certified:
    """F3(t) = sum_{n >= 1} A^n sin(lambda^n t)."""
    _ratio(A, p, ctx.bits)
    return _check(geometric_sine_series(A, p.lam(ctx.bits + 32), t, 1, ctx), ctx)


def pell_kernel_series(A, p: PellSolution, ctx: PrecisionContext = DEFAULT_CONTEXT) -> TrigSeriesFunction:
    """g(x1, x2) = sum (A lambda)^n cos(2 pi (u_n x1 - v_n x2)) truncated so the tail is <= tol/2."""
    r = _ratio(A, p, ctx.bits)
    N = _terms_needed(r, ctx.tol / 2)
    if N == 0:
        return TrigSeriesFunction(2, (), GeometricTail(1, 0, 1), "pell_kernel_g")
    p = pell_powers(p, N)
    with mpmath.workprec(ctx.bits + 16):
        terms = [
            Term(mpf(A) ** n * p.lam_power(n, ctx.bits + 16), (u_n, -v_n), 0, Kind.COS)
            for n, (u_n, v_n) in enumerate(p.powers, start=1)
        ]
    return TrigSeriesFunction(2, terms, GeometricTail(1, r, N + 1), "pell_kernel_g")


def eval_pell_kernel_g(A, p: PellSolution, x1, x2, ctx: PrecisionContext = DEFAULT_CONTEXT) -> Certified:
    return eval_series(pell_kernel_series(A, p, ctx), (x1, x2), ctx)


def pell_averaged_series(A, p: PellSolution, ctx: PrecisionContext = DEFAULT_CONTEXT) -> TrigSeriesFunction:
    """f(x) = int_0^1 g(s, s sqrt D + x) ds, term by term:
    (A^n / pi) sin(pi lambda^n) cos(pi lambda^n - 2 pi v_n x)."""
    r = _ratio(A, p, ctx.bits)
    N = _terms_needed(r, ctx.tol / 2)
    if N == 0:
        return TrigSeriesFunction(1, (), GeometricTail(1, 0, 1), "pell_averaged_f")
    p = pell_powers(p, N)
    terms = []
    with mpmath.workprec(ctx.bits + 16):
        for n, (_, v_n) in enumerate(p.powers, start=1):
            pl = mpmath.pi * p.lam_power(n, ctx.bits + 16)
            terms.append(Term(mpf(A) ** n * mpmath.sin(pl) / mpmath.pi, (-v_n,), pl, Kind.COS))
    return TrigSeriesFunction(1, terms, GeometricTail(1, r, N + 1), "pell_averaged_f")


def eval_pell_averaged_f(A, p: PellSolution, x, ctx: PrecisionContext = DEFAULT_CONTEXT) -> Certified:
    return eval_series(pell_averaged_series(A, p, ctx), (x,), ctx)


def averaged_f_by_quadrature(A, p: PellSolution, x, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """Gauss-Legendre quadrature of s -> g(s, s sqrt D + x) over [0, 1], straight from the kernel."""
    g = pell_kernel_series(A, p, ctx)
    if not g.terms:
        return mpf(0)
    guard = 2 * max(int(t.freq[0]).bit_length() for t in g.terms) + 32
    with mpmath.workprec(ctx.bits + guard):
        sD = mpmath.sqrt(p.D)
        xx = mpf(x)
        coeffs = [(mpf(t.coeff), t.freq[0], t.freq[1]) for t in g.terms]

        def integrand(s):
            y = s * sD + xx
            return mpmath.fsum(c * mpmath.cos(2 * mpmath.pi * (u * s + w * y)) for c, u, w in coeffs)

        val = mpmath.quad(integrand, [0, 1], method="gauss-legendre")
    with mpmath.workprec(ctx.bits):
        return +val


@at_context_precision
def certify_discrete_identity(A, p: PellSolution, t_max: int, ctx: PrecisionContext = DEFAULT_CONTEXT) -> Report:
    """Compare sum_{k<t} f(k sqrt D) with F3(2 pi t)/(2 pi) for t = 0..t_max."""
    if t_max < 0:
        raise DomainError("t_max must be >= 0")
    f = pell_averaged_series(A, p, ctx)
    rep = Report("discrete_identity", meta={"A": A, "D": p.D, "t_max": t_max, "tol": ctx.tol,
                                            "terms": len(f.terms)})
    with mpmath.workprec(ctx.bits + 8):
        sD = mpmath.sqrt(p.D)
    tol = mpf(ctx.tol)
    partial = mpf(0)
    for t in range(0, t_max + 1):
        if t > 0:
            with mpmath.workprec(ctx.bits + 8 + t.bit_length()):
                x = (t - 1) * sD
            partial += eval_series(f, (x,), ctx).value
        with mpmath.workprec(ctx.bits):
            rhs = eval_F3(A, p, 2 * mpmath.pi * t, ctx).value / (2 * mpmath.pi) if t else mpf(0)
            res = abs(partial - rhs)
            bound = (t + 1) * 10 * tol
        rep.add({"t": t, "lhs": partial, "rhs": rhs, "residual": res, "bound": bound}, res <= bound)
    rep.meta["max_residual"] = max((r["residual"] for r in rep.rows), default=mpf(0))
    return rep


def lambda_power_residuals(p: PellSolution, N: int, bits: int = 256) -> list:
    """Relative gap between lambda**n and u_n - v_n sqrt(D) for n = 1..N."""
    p = pell_powers(p, N)
    out = []
    for n in range(1, N + 1):
        a = p.lam_power(n, bits)
        b = p.conjugate_difference(n, bits)
        with mpmath.workprec(bits):
            out.append(abs(a - b) / a)
    return out

