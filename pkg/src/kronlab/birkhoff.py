"""Birkhoff sums along Kronecker orbits, discrepancy, and inequality probes.

Sums S_f^t(alpha, x) = sum_{k<t} f(k alpha + x) are evaluated either term by term
at full precision (:func:`birkhoff_sum`) or, for probes over many points, in
float64 using the Dirichlet-kernel closed form for each harmonic.  Orbit phases
t * (m . alpha) are always reduced with exact 64-bit fixed-point arithmetic, so
the float paths keep their accuracy for large t.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import mpmath
import numpy as np
from scipy.optimize import brentq

from .core import (
    DEFAULT_CONTEXT,
    Certified,
    Kind,
    PrecisionContext,
    RealVector,
    Term,
    TrigSeriesFunction,
    analytic_mean,
    at_context_precision,
    eval_series,
    fixed_point_dot,
    fixed_point_frac,
    orbit_point,
    torus_mean,
)
from .diophantine import (
    enumerate_best_approximations,
    estimate_exponents,
    simultaneous_best,
)
from .errors import BadWindow, DomainError, InsufficientData, PhiInadmissible, QuadratureUnstable

mpf = mpmath.mpf

DEFAULT_SEED = 0x5EED


@dataclass
class SumTrace:
    """Rows (t, S, bound, pass) plus a free-form metadata dict."""

    probe: str
    rows: list = field(default_factory=list)
    meta: dict = field(default_factory=dict)
    slack: float = 0.0

    def add(self, t: int, S: float, bound: float, **extra):
        ok = abs(S) <= bound + self.slack
        self.rows.append({"t": int(t), "S": float(S), "bound": float(bound), "pass": bool(ok), **extra})

    @property
    def passed(self) -> bool:
        return all(r["pass"] for r in self.rows)

    @property
    def failures(self) -> list:
        return [r for r in self.rows if not r["pass"]]

    def column(self, name: str) -> np.ndarray:
        return np.array([r[name] for r in self.rows])

    def __len__(self):
        return len(self.rows)


# ---------------------------------------------------------------------------
# sums


@at_context_precision
def birkhoff_partial_sums(
    f: TrigSeriesFunction, alpha: RealVector, x, t: int, ctx: PrecisionContext = DEFAULT_CONTEXT,
    *, strict: bool = True,
) -> list:
    """[S_0, S_1, ..., S_t] at full precision (S_0 = 0)."""
    if alpha.n != f.dim:
        raise DomainError("alpha and f have different dimensions")
    if t < 0:
        raise DomainError("t must be >= 0")
    xs = None if x is None else tuple(x.value(ctx.bits) if isinstance(x, RealVector) else x)
    out = [mpf(0)]
    if not f.terms:
        # still certify the tail once; the sum of an empty series is zero
        eval_series(f, (0,) * f.dim, ctx, strict=strict)
        return out * (t + 1)
    acc = mpf(0)
    for k in range(t):
        p = orbit_point(alpha, k, xs, ctx.bits)
        acc += eval_series(f, p, ctx, strict=strict).value
        out.append(+acc)
    return out


@at_context_precision
def birkhoff_sum(
    f: TrigSeriesFunction, alpha: RealVector, x, t: int, ctx: PrecisionContext = DEFAULT_CONTEXT,
    *, strict: bool = True,
) -> Certified:
    """S_f^t(alpha, x) = sum_{k<t} f(k alpha + x)."""
    if t < 0:
        raise DomainError("t must be >= 0")
    if not f.terms:
        eval_series(f, (0,) * f.dim, ctx, strict=strict)
        return Certified(mpf(0))
    xs = None if x is None else tuple(x.value(ctx.bits) if isinstance(x, RealVector) else x)
    parts, tail, rnd = [], mpf(0), mpf(0)
    for k in range(t):
        e = eval_series(f, orbit_point(alpha, k, xs, ctx.bits), ctx, strict=strict)
        parts.append(e.value)
        tail += e.tail_bound
        rnd += e.rounding
    return Certified(mpmath.fsum(parts), tail, rnd)


@at_context_precision
def dirichlet_sum(
    m: Sequence[int], alpha: RealVector, t: int, x=None, phase=0, kind: str = "cos",
    ctx: PrecisionContext = DEFAULT_CONTEXT,
):
    """Closed form of sum_{k<t} K(2 pi m.(k alpha + x) + phase) for K = cos or sin.

    Uses e^{i(b + (t-1)th/2)} sin(t th/2) / sin(th/2) with th = 2 pi m.alpha.
    """
    vals = alpha.value(ctx.bits + 32)
    with mpmath.workprec(ctx.bits + 32):
        y = mpmath.fsum(int(c) * v for c, v in zip(m, vals))
        th = 2 * mpmath.pi * (y - mpmath.floor(y))
        b = mpf(phase)
        if x is not None:
            b += 2 * mpmath.pi * mpmath.fsum(int(c) * mpf(v) for c, v in zip(m, x))
        s = mpmath.sin(th / 2)
        if s == 0:
            amp = mpf(t)
        else:
            amp = mpmath.sin(t * th / 2) / s
        ang = b + (t - 1) * th / 2
        val = amp * (mpmath.cos(ang) if kind == "cos" else mpmath.sin(ang))
    return +val


def _harmonic_terms(f: TrigSeriesFunction):
    if not f.harmonic:
        raise DomainError("this probe needs a sin/cos series")
    if not f.integer_frequencies:
        raise DomainError("this probe needs integer frequencies")
    out = []
    for t in f.terms:
        # c cos(a + phi) = Re(c e^{i phi} e^{i a}); c sin(a + phi) = Re(-i c e^{i phi} e^{i a})
        w = float(t.coeff) * np.exp(1j * float(t.phase))
        if t.kind is Kind.SIN:
            w = -1j * w
        out.append((tuple(int(v) for v in t.freq), w))
    return out


def orbit_coefficients(f: TrigSeriesFunction, alpha: RealVector, t: int) -> list:
    """(m, b_m) with S_f^t(alpha, x) = Re sum_m b_m e^{2 pi i m.x} (harmonic f)."""
    a = alpha.fixed_point()
    out = []
    for m, w in _harmonic_terms(f):
        mm = np.array(m, dtype=np.int64)
        th = fixed_point_frac(fixed_point_dot(mm, a))
        tth = fixed_point_frac(fixed_point_dot(mm * t, a)) if t else 0.0
        den = 1 - np.exp(2j * np.pi * th)
        if abs(den) < 1e-300:
            D = complex(t)
        else:
            D = (1 - np.exp(2j * np.pi * tth)) / den
        out.append((m, w * D))
    return out


def coefficients_over_t(f: TrigSeriesFunction, alpha: RealVector, ts: np.ndarray) -> tuple:
    """Vectorised orbit_coefficients: returns (freqs (T, n), B (len(ts), T))."""
    a = alpha.fixed_point()
    terms = _harmonic_terms(f)
    freqs = np.array([m for m, _ in terms], dtype=np.int64).reshape(len(terms), f.dim)
    ws = np.array([w for _, w in terms])
    ts = np.asarray(ts, dtype=np.int64)
    B = np.empty((ts.size, len(terms)), dtype=np.complex128)
    for j, (m, w) in enumerate(zip(freqs, ws)):
        th = fixed_point_frac(fixed_point_dot(m, a))
        with np.errstate(over="ignore"):
            v = ts.astype(np.uint64) * np.uint64(fixed_point_dot(m, a))
        tth = fixed_point_frac(v)
        den = 1 - np.exp(2j * np.pi * th)
        B[:, j] = w * (1 - np.exp(2j * np.pi * tth)) / den
    return freqs, B


def eval_coefficients(coeffs: list, X: np.ndarray) -> np.ndarray:
    """Re sum b_m e^{2 pi i m.x} at points X of shape (N, n)."""
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    out = np.zeros(X.shape[0])
    for m, b in coeffs:
        ph = X @ np.array(m, dtype=np.float64)
        ph = ph - np.floor(ph)
        out += (b * np.exp(2j * np.pi * ph)).real
    return out


def grid_sup(coeffs: list, n: int, K: int = 1024, refine: bool = True):
    """max_x |Re sum b_m e^{2 pi i m.x}| over a uniform grid of K points per axis,
    plus one refinement pass around the best cell.  Returns (sup, argmax)."""
    if not coeffs:
        return 0.0, np.zeros(n)
    if K**n > 2**22:
        raise DomainError(f"grid {K}^{n} too large")
    grid = np.zeros((K,) * n, dtype=np.complex128)
    for m, b in coeffs:
        idx = tuple(int(c) % K for c in m)
        grid[idx] += b
    vals = np.abs((np.fft.ifftn(grid) * K**n).real)
    flat = int(np.argmax(vals))
    best = float(vals.flat[flat])
    arg = np.array(np.unravel_index(flat, vals.shape), dtype=np.float64) / K
    if refine:
        side = 33 if n <= 2 else 9
        offs = np.linspace(-1.0 / K, 1.0 / K, side)
        local = np.array(np.meshgrid(*([offs] * n), indexing="ij")).reshape(n, -1).T + arg
        lv = np.abs(eval_coefficients(coeffs, local))
        k = int(np.argmax(lv))
        if lv[k] > best:
            best, arg = float(lv[k]), local[k] % 1.0
    return best, arg


def orbit_values(f: TrigSeriesFunction, alpha: RealVector, t: int, x=None, start: int = 0) -> np.ndarray:
    """Float values f(k alpha + x) for k = start..start+t-1 (exact phase reduction of k alpha)."""
    a = alpha.fixed_point()
    ks = np.arange(start, start + t, dtype=np.int64)
    with np.errstate(over="ignore"):
        fr = fixed_point_frac(ks.astype(np.uint64).reshape(-1, 1) * a.reshape(1, -1))
    if x is not None:
        fr = (fr + np.asarray(x, dtype=np.float64).reshape(1, -1)) % 1.0
    return f(fr)


# ---------------------------------------------------------------------------
# discrepancy and variation


def _orbit_fractions(alpha: RealVector, t: int) -> np.ndarray:
    if alpha.n != 1:
        raise DomainError("discrepancy_1d needs a scalar alpha")
    a = alpha.fixed_point()
    ks = np.arange(1, t + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        v = ks * a[0]
    return fixed_point_frac(v)


def _discrepancy_from_sorted(u: np.ndarray) -> float:
    """Unnormalised star discrepancy of points with sorted values u (duplicates allowed)."""
    t = u.size
    if t == 0:
        return 0.0
    v, counts = np.unique(u, return_counts=True)
    C = np.cumsum(counts).astype(np.float64)
    nxt = np.append(v[1:], 1.0)
    d = max(t * v[0], float(np.max(np.abs(C - t * v))), float(np.max(np.abs(C - t * nxt))))
    return float(d)


def discrepancy_1d(alpha: RealVector, t: int) -> float:
    """D_t = sup_gamma |#{1 <= k <= t : {k alpha} < gamma} - t gamma|."""
    if t < 1:
        raise DomainError("t must be >= 1")
    return _discrepancy_from_sorted(np.sort(_orbit_fractions(alpha, t)))


def discrepancy_trace(alpha: RealVector, t_max: int) -> np.ndarray:
    """[D_1, ..., D_{t_max}] by incremental sorted insertion."""
    pts = _orbit_fractions(alpha, t_max)
    out = np.empty(t_max)
    u = np.empty(0)
    for i in range(t_max):
        j = np.searchsorted(u, pts[i])
        dup = j < u.size and u[j] == pts[i]
        u = np.insert(u, j, pts[i])
        t = i + 1
        if dup or (j > 0 and u[j - 1] == pts[i]):
            out[i] = _discrepancy_from_sorted(u)
            continue
        C = np.arange(1, t + 1, dtype=np.float64)
        nxt = np.append(u[1:], 1.0)
        out[i] = max(t * u[0], np.max(np.abs(C - t * u)), np.max(np.abs(C - t * nxt)))
    return out


def total_variation(f: TrigSeriesFunction) -> float:
    """V[f] over one period, summing |f(z_{i+1}) - f(z_i)| between consecutive zeros of f'."""
    if f.dim != 1:
        raise DomainError("total_variation needs a 1-D series")
    if not f.terms:
        return 0.0
    K = max(f.max_frequency(), 1)
    N = max(64 * K, 1024)
    xs = np.linspace(0.0, 1.0, N + 1)
    d = f.derivative_np(xs)
    zeros = []
    for i in range(N):
        if d[i] == 0:
            zeros.append(xs[i])
        elif d[i] * d[i + 1] < 0:
            zeros.append(brentq(lambda z: float(f.derivative_np(np.array([z]))[0]), xs[i], xs[i + 1],
                                xtol=1e-15, rtol=4 * np.finfo(float).eps))
    if not zeros:
        return 0.0
    z = np.array(sorted(set(zeros)))
    z = np.append(z, z[0] + 1.0)
    vals = f(z)
    return float(np.sum(np.abs(np.diff(vals))))


def sup_norm(f: TrigSeriesFunction, points: int = 4096) -> float:
    """max |f| on a uniform grid with one local refinement (probe-grade estimate)."""
    if not f.terms:
        return 0.0
    n = f.dim
    K = points if n == 1 else int(round(points ** (1 / n))) * 4
    K = min(K, 4096 if n == 1 else (512 if n == 2 else 64))
    if f.harmonic and f.integer_frequencies:
        coeffs = [(m, w) for m, w in _harmonic_terms(f)]
        return grid_sup(coeffs, n, K)[0]
    g = np.array(np.meshgrid(*([np.arange(K) / K] * n), indexing="ij")).reshape(n, -1).T
    return float(np.max(np.abs(f(g))))


# ---------------------------------------------------------------------------
# probes


def _mean(f: TrigSeriesFunction) -> float:
    return float(analytic_mean(f)) if f.harmonic else float(torus_mean(f))


def koksma_probe(f: TrigSeriesFunction, alpha: RealVector, t_max: int,
                 ctx: PrecisionContext = DEFAULT_CONTEXT) -> SumTrace:
    """|sum_{k=1}^t f(k alpha)| against V[f] D_t for t = 1..t_max."""
    if alpha.n != 1 or f.dim != 1:
        raise DomainError("koksma_probe is one-dimensional")
    V = total_variation(f)
    D = discrepancy_trace(alpha, t_max)
    S = np.cumsum(orbit_values(f, alpha, t_max, start=1)) if f.terms else np.zeros(t_max)
    tr = SumTrace("koksma", meta={"alpha": str(alpha), "f": f.label, "variation": V,
                                  "convention": "k=1..t"}, slack=1e-9)
    for t in range(1, t_max + 1):
        tr.add(t, S[t - 1], V * D[t - 1], discrepancy=float(D[t - 1]))
    return tr


def weyl_probe(f: TrigSeriesFunction, alpha: RealVector, x, t_list: Sequence[int],
               ctx: PrecisionContext = DEFAULT_CONTEXT, threshold: float = 1e-2) -> SumTrace:
    """Residuals |S_t/t - mean f| at each t; only the largest t is held to ``threshold``."""
    ts = sorted(set(int(t) for t in t_list))
    if not ts or ts[0] < 1:
        raise DomainError("t_list must contain positive integers")
    mean = _mean(f)
    xv = None if x is None else np.asarray(x, dtype=np.float64).reshape(-1)
    vals = orbit_values(f, alpha, ts[-1], xv) if f.terms else np.zeros(ts[-1])
    S = np.cumsum(vals)
    tr = SumTrace("weyl", meta={"alpha": str(alpha), "f": f.label, "mean": mean,
                                "threshold": threshold})
    for t in ts:
        res = abs(S[t - 1] / t - mean)
        tr.add(t, res, threshold if t == ts[-1] else math.inf)
    return tr


def sidorov_probe(f: TrigSeriesFunction, alpha: RealVector, denominators: Sequence[int],
                  x_grid: int = 1024, ctx: PrecisionContext = DEFAULT_CONTEXT,
                  threshold: float = 0.05) -> SumTrace:
    """max_x |S_f^q(alpha, x)| at q = continued-fraction denominators.

    Each row must not exceed the previous one, and the last row must be below ``threshold``.
    """
    if alpha.n != 1:
        raise DomainError("sidorov_probe is one-dimensional")
    tr = SumTrace("sidorov", meta={"alpha": str(alpha), "f": f.label, "x_grid": x_grid,
                                   "threshold": threshold})
    prev = math.inf
    qs = list(denominators)
    for i, q in enumerate(qs):
        sup = grid_sup(orbit_coefficients(f, alpha, int(q)), 1, x_grid)[0] if f.terms else 0.0
        bound = prev if i < len(qs) - 1 else min(prev, threshold)
        tr.add(q, sup, bound)
        prev = sup
    return tr


def _gauss_panels(lo: float, hi: float, panels: int, order: int = 16):
    x, w = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(lo, hi, panels + 1)
    half = (edges[1:] - edges[:-1]) / 2
    mid = (edges[1:] + edges[:-1]) / 2
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def _integrate_S_over_box(f: TrigSeriesFunction, box, t: int, panels: int) -> float:
    """Tensor Gauss-Legendre value of int_box sum_{k=1}^t f(k x) dx."""
    n = f.dim
    rules = [_gauss_panels(lo, hi, panels) for lo, hi in box]
    grids = np.meshgrid(*[r[0] for r in rules], indexing="ij")
    W = np.ones_like(grids[0])
    for axis, r in enumerate(rules):
        shape = [1] * n
        shape[axis] = -1
        W = W * r[1].reshape(shape)
    X = np.stack([g.ravel() for g in grids], axis=1)
    W = W.ravel()
    total = 0.0
    for k in range(1, t + 1):
        total += float(np.dot(W, f((k * X) % 1.0)))
    return total


def integrate_S(f: TrigSeriesFunction, box, t: int, quad_points: int = 16, tol: float = 1e-4,
                max_rounds: int = 12) -> float:
    """int over an axis-aligned box of S^t(x) = sum_{k=1}^t f(k x), refining until two
    successive panel doublings agree to ``tol``."""
    width = max(hi - lo for lo, hi in box)
    K = max(f.max_frequency(), 1)
    panels = max(1, int(math.ceil(t * K * width)), quad_points // 16)
    prev = _integrate_S_over_box(f, box, t, panels)
    for _ in range(max_rounds):
        panels *= 2
        cur = _integrate_S_over_box(f, box, t, panels)
        if abs(cur - prev) <= tol:
            return cur
        prev = cur
    raise QuadratureUnstable(f"quadrature did not settle to {tol} after {max_rounds} doublings")


def integral_bound_probe(f: TrigSeriesFunction, box, t: int, quad_points: int = 16,
                         ctx: PrecisionContext = DEFAULT_CONTEXT) -> dict:
    """|int_J S^t| against M n (1 + log t), with S^t(x) = sum_{k=1}^t f(k x)."""
    box = [tuple(map(float, b)) for b in box]
    if len(box) != f.dim:
        raise DomainError("box dimension differs from f")
    for lo, hi in box:
        if not 0 <= lo < hi <= 1:
            raise DomainError(f"box side [{lo}, {hi}] not inside [0, 1]")
    if t < 1:
        raise DomainError("t must be >= 1")
    value = integrate_S(f, box, t, quad_points)
    M = sup_norm(f)
    bound = M * f.dim * (1 + math.log(t))
    return {"value": value, "M": M, "bound": bound, "pass": abs(value) <= bound + 1e-3, "t": t}


def rational_window_bound_probe(f: TrigSeriesFunction, a: int, q: int, t: int,
                                ctx: PrecisionContext = DEFAULT_CONTEXT) -> dict:
    """|int_{a/q}^{(a+1)/q} S^t| against the t-independent bound M (q - 1)."""
    if f.dim != 1:
        raise DomainError("rational_window_bound_probe is one-dimensional")
    if q < 1 or math.gcd(a, q) != 1 or math.gcd(a + 1, q) != 1:
        raise BadWindow(f"window ({a}/{q}, {a + 1}/{q}) needs gcd(a,q) = gcd(a+1,q) = 1")
    lo, hi = a / q, (a + 1) / q
    value = integrate_S(f, [(lo, hi)], t)
    M = sup_norm(f)
    bound = M * (q - 1)
    return {"value": value, "M": M, "bound": bound, "pass": abs(value) <= bound + 1e-3,
            "t": t, "a": a, "q": q}


# ---------------------------------------------------------------------------
# decay-class series, special-time bound, Colzani


@dataclass(frozen=True)
class DecaySpec:
    """Coefficients with |f_m| <= C (max_j |m_j|)^-gamma, realised on 0 < max|m_j| <= H."""

    C: float
    gamma: float
    H: int = 3
    seed: int = DEFAULT_SEED

    def __post_init__(self):
        if not self.C > 0 or not self.gamma > 0 or self.H < 1:
            raise DomainError("DecaySpec needs C > 0, gamma > 0, H >= 1")

    def realize(self, n: int) -> TrigSeriesFunction:
        """cos terms 2 C h(m)^-gamma cos(2 pi m.x + phi_m) with seeded phases, one per +-m pair."""
        rng = np.random.default_rng(self.seed)
        rngs = [range(-self.H, self.H + 1)] * n
        terms = []
        for m in np.array(np.meshgrid(*rngs, indexing="ij")).reshape(n, -1).T:
            first = next((c for c in m if c != 0), 0)
            if first <= 0:
                continue
            h = int(np.abs(m).max())
            terms.append(Term(2 * self.C * h ** (-self.gamma), tuple(int(c) for c in m),
                              float(rng.uniform(0, 2 * np.pi)), Kind.COS))
        return TrigSeriesFunction(n, terms, label=f"decay(C={self.C},gamma={self.gamma},H={self.H})")

    def satisfied_by(self, f: TrigSeriesFunction) -> bool:
        """Each real cos/sin term c K(2 pi m.x + phi) has complex coefficients of size |c|/2."""
        for t in f.terms:
            h = max(abs(int(c)) for c in t.freq)
            if h == 0 or abs(float(t.coeff)) / 2 > self.C * h ** (-self.gamma) * (1 + 1e-12):
                return False
        return True


def theorem5_probe(
    f: TrigSeriesFunction,
    alpha: RealVector,
    Q: int,
    x_grid: int = 1024,
    ctx: PrecisionContext = DEFAULT_CONTEXT,
    *,
    gamma: float,
    delta: float = 0.05,
    exponents: tuple | None = None,
    M_max: int | None = None,
    Q_est: int = 10**6,
    factor: float = 10.0,
) -> dict:
    """sup_x |S_f^t| at the best simultaneous time t <= Q, against
    min_nu Q^(-lambda_hat + delta) / zeta_nu + Q M_{nu+1}^(n - gamma).

    ``exponents`` = (omega_hat, lambda_hat) replaces the finite-sample estimates.
    """
    n = alpha.n
    sa_Q = simultaneous_best(alpha, Q, ctx)
    t = sa_Q[-1].q
    if M_max is None:
        M_max = {1: 10**6, 2: 10**4, 3: 300}.get(n, 30)
    ba = (enumerate_best_approximations(alpha, M_max, ctx))
    if exponents is None:
        try:
            est = estimate_exponents(ba, simultaneous_best(alpha, Q_est, ctx))
            omega_hat, lam_hat = est.omega_hat_est, est.lambda_hat_est
        except InsufficientData:
            omega_hat, lam_hat = float(n), 1.0 / n
    else:
        omega_hat, lam_hat = exponents
    threshold = n + omega_hat / lam_hat
    bounds = []
    for i in range(len(ba) - 1):
        b = Q ** (-lam_hat + delta) / float(ba[i].zeta) + Q * float(ba[i + 1].M) ** (n - gamma)
        bounds.append((b, i + 1))
    bound, nu = min(bounds)
    sup = grid_sup(orbit_coefficients(f, alpha, t), n, x_grid)[0] if f.terms else 0.0
    return {
        "Q": Q, "t": t, "r": float(sa_Q[-1].r), "observed": sup, "bound": bound, "nu": nu,
        "omega_hat": omega_hat, "lambda_hat": lam_hat, "gamma": gamma, "delta": delta,
        "gamma_threshold": threshold, "warning": gamma <= threshold,
        "pass": sup <= factor * bound,
    }


def theorem5_trend(f, alpha, Q_list, x_grid: int = 1024, ctx: PrecisionContext = DEFAULT_CONTEXT,
                   **kw) -> dict:
    """Run theorem5_probe over increasing Q and check the observed sup never increases."""
    rows = [theorem5_probe(f, alpha, Q, x_grid, ctx, **kw) for Q in sorted(Q_list)]
    obs = [r["observed"] for r in rows]
    monotone = all(b <= a for a, b in zip(obs, obs[1:]))
    return {"rows": rows, "monotone": monotone, "pass": monotone and all(r["pass"] for r in rows)}


@dataclass(frozen=True)
class LogPowerPhi:
    """Phi(t) = log(t + 1)^a * log(log t + 2)^b."""

    a: float = 1.0
    b: float = 1.1

    def __call__(self, t):
        t = np.asarray(t, dtype=np.float64)
        return np.log(t + 1) ** self.a * np.log(np.log(t) + 2) ** self.b

    def integral(self, upper: float = 1e8) -> float:
        """int_2^upper dt / (t Phi(t)), in the variable L = log t."""
        g = lambda L: 1.0 / (math.log(math.exp(L) + 1) ** self.a * math.log(L + 2) ** self.b)  # noqa: E731
        return float(mpmath.quad(g, [math.log(2), 1, 5, math.log(upper)]))

    def tail_exponent(self, v1: float = 1e3, v2: float = 1e4) -> float:
        """Local decay exponent p of h(v) = e^v / Phi(exp(exp v)), the integrand of
        int dt/(t Phi) after t = exp(exp v); the tail converges when p > 1."""
        with mpmath.workprec(128):
            def logh(v):
                v = mpf(v)
                L = mpmath.exp(v)
                return v - self.a * mpmath.log(L + mpmath.log1p(mpmath.exp(-L))) - self.b * mpmath.log(
                    mpmath.log(L + 2))
            return float(-(logh(v2) - logh(v1)) / (mpmath.log(v2) - mpmath.log(v1)))

    def admissible(self) -> bool:
        return self.tail_exponent() > 1 + 1e-6


def default_colzani_series(terms: int = 20) -> TrigSeriesFunction:
    return TrigSeriesFunction(
        1, [Term(1.0 / m**2, (m,), 0, Kind.COS) for m in range(1, terms + 1)], label=f"sum_m<= {terms} m^-2 cos"
    )


def colzani_alphas(count: int = 32, n: int = 1, seed: int = DEFAULT_SEED) -> list:
    rng = np.random.default_rng(seed)
    return [RealVector.of(*[float(v) for v in rng.uniform(0, 1, n)]) for _ in range(count)]


def _c_emp_profile(f: TrigSeriesFunction, alpha: RealVector, t_max: int, phi: LogPowerPhi,
                   x_grid: int, chunk: int = 2048) -> np.ndarray:
    """Running max over t of sup_x |S_t(x)| / Phi(t), for t = 1..t_max."""
    n = f.dim
    g = np.array(np.meshgrid(*([np.arange(x_grid) / x_grid] * n), indexing="ij")).reshape(n, -1).T
    out = np.empty(t_max)
    run = 0.0
    freqs = None
    for s in range(1, t_max + 1, chunk):
        ts = np.arange(s, min(s + chunk, t_max + 1))
        freqs, B = coefficients_over_t(f, alpha, ts)
        E = np.exp(2j * np.pi * (g @ freqs.T.astype(np.float64)))  # (G, T)
        S = np.abs((B @ E.T).real)  # (len(ts), G)
        c = S.max(axis=1) / phi(ts.astype(np.float64))
        c = np.maximum.accumulate(np.maximum(c, run))
        out[s - 1 : s - 1 + ts.size] = c
        run = float(c[-1])
    return out


def colzani_probe(
    f: TrigSeriesFunction,
    alpha_samples: Sequence[RealVector] | None = None,
    phi: LogPowerPhi = LogPowerPhi(),
    t_max: int = 10**4,
    ctx: PrecisionContext = DEFAULT_CONTEXT,
    *,
    x_grid: int = 256,
    ratio_limit: float = 1.25,
    declared_fraction: float = 1 / 8,
    seed: int = DEFAULT_SEED,
) -> dict:
    """Empirical constants c_emp = max_{t <= T} sup_x |S_t| / Phi(t) at T = t_max and 2 t_max."""
    if not phi.admissible():
        raise PhiInadmissible(f"Phi with a={phi.a}, b={phi.b} fails the integrability test")
    if alpha_samples is None:
        alpha_samples = colzani_alphas(32, f.dim, seed)
    rows = []
    for al in alpha_samples:
        prof = _c_emp_profile(f, al, 2 * t_max, phi, x_grid)
        c1, c2 = float(prof[t_max - 1]), float(prof[-1])
        rows.append({"alpha": str(al), "c_emp": c1, "c_emp_doubled": c2, "ratio": c2 / c1,
                     "stable": c2 / c1 <= ratio_limit})
    unstable = sum(not r["stable"] for r in rows)
    frac = unstable / len(rows) if rows else 0.0
    return {
        "rows": rows, "phi": {"a": phi.a, "b": phi.b}, "integral_to_1e8": phi.integral(),
        "tail_exponent": phi.tail_exponent(), "t_max": t_max, "unstable_fraction": frac,
        "declared_fraction": declared_fraction, "pass": frac <= declared_fraction,
    }
