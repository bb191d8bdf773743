"""Best approximations of a linear form, irrationality measure functions and exponents."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import mpmath
import numpy as np

from .core import (
    DEFAULT_CONTEXT,
    at_context_precision,
    PrecisionContext,
    RealVector,
    fixed_point_dot,
    fixed_point_norm,
)
from .errors import (
    BudgetExceeded,
    DomainError,
    InsufficientData,
    OutOfRange,
    PrecisionExhausted,
)

mpf = mpmath.mpf

DEFAULT_BUDGET = {1: 10**7, 2: 10**5, 3: 10**3, 4: 100}


@dataclass(frozen=True)
class BestApproximation:
    """One record: ``zeta = ||alpha . m||`` is smaller than for every vector of height <= M."""

    nu: int
    m: tuple
    M: int
    zeta: mpmath.mpf
    delta: mpmath.mpf  # signed: alpha.m - round(alpha.m)

    @property
    def n(self) -> int:
        return len(self.m)


@dataclass(frozen=True)
class SimultaneousApprox:
    q: int
    r: mpmath.mpf


class ApproxList(list):
    """A list of records that remembers the search limit it is complete up to."""

    def __init__(self, records=(), limit: int | None = None):
        super().__init__(records)
        self.limit = limit if limit is not None else (self[-1].M if self else 0)


@dataclass(frozen=True)
class ExponentEstimate:
    omega_est: float
    omega_hat_est: float
    lambda_hat_est: float
    depth: int

    def consistent(self, n: int, slack: float = 0.05) -> bool:
        """``n <= omega_hat <= omega`` up to a relative ``slack``."""
        return n <= self.omega_hat_est * (1 + slack) and self.omega_hat_est <= self.omega_est * (
            1 + slack
        )


def _linear_form(alpha: RealVector, m: Sequence[int], bits: int):
    """Signed residue alpha.m - round(alpha.m) at ``bits`` precision."""
    big = max(sum(abs(int(c)) for c in m), 1)
    extra = big.bit_length() + 8
    with mpmath.workprec(bits + extra):
        vals = alpha.value(bits + extra)
        s = mpmath.fsum(int(c) * v for c, v in zip(m, vals))
        d = s - mpmath.nint(s)
    with mpmath.workprec(bits):
        return +d


def _record(nu: int, m: Sequence[int], alpha: RealVector, bits: int) -> BestApproximation:
    d = _linear_form(alpha, m, bits)
    with mpmath.workprec(bits):
        z = abs(d)
    return BestApproximation(nu, tuple(int(c) for c in m), max(abs(int(c)) for c in m), z, d)


# ---------------------------------------------------------------------------
# continued fractions


def _exact_fraction(x: mpmath.mpf) -> Fraction:
    man, exp = mpmath.mpf(x).man_exp
    return Fraction(int(man)) * (Fraction(2) ** exp)


def _cf_denominators(lo: Fraction, hi: Fraction, q_limit: int):
    """Convergent denominators shared by every number in [lo, hi], up to q_limit.

    Raises PrecisionExhausted if the bracket splits before q_limit is reached.
    """
    q_prev, q = 0, 1
    yield q
    x, y = lo, hi
    while True:
        a = math.floor(x)
        if math.floor(y) != a:
            raise PrecisionExhausted(f"continued fraction digits unreliable beyond q={q}")
        fx, fy = x - a, y - a
        if fx == 0 or fy == 0:
            return
        x, y = 1 / fy, 1 / fx  # reciprocal swaps the order
        a_next = math.floor(x)
        q_next = a_next * q + q_prev
        if q_next > q_limit:
            return
        if math.floor(y) != a_next:
            raise PrecisionExhausted(f"continued fraction digits unreliable beyond q={q}")
        yield q_next
        q_prev, q = q, q_next


def convergent_denominators(alpha: RealVector, q_limit: int, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """Denominators q_k <= q_limit of the continued-fraction convergents of alpha."""
    if alpha.n != 1:
        raise DomainError("continued fractions need a scalar alpha")
    x = alpha.value(ctx.bits)[0]
    slack = mpmath.ldexp(abs(x) + 1, -ctx.bits + 4)
    with mpmath.workprec(ctx.bits + 8):
        lo, hi = _exact_fraction(x - slack), _exact_fraction(x + slack)
    qs = []
    for q in _cf_denominators(lo, hi, q_limit):
        if not qs or q != qs[-1]:
            qs.append(q)
    return qs


@at_context_precision
def cf_best_approximations(
    alpha: RealVector, M_max: int, ctx: PrecisionContext = DEFAULT_CONTEXT
) -> ApproxList:
    """Best approximations of a scalar alpha with q <= M_max, via continued fractions."""
    if alpha.n != 1:
        raise DomainError("cf_best_approximations needs n = 1")
    if M_max < 1:
        raise DomainError("M_max must be >= 1")
    out = ApproxList(limit=M_max)
    best = None
    for q in convergent_denominators(alpha, M_max, ctx):
        rec = _record(len(out) + 1, (q,), alpha, ctx.bits)
        if best is None or rec.zeta < best:
            out.append(rec)
            best = rec.zeta
    return out


# ---------------------------------------------------------------------------
# exhaustive enumeration


def _threshold(H: np.ndarray, n: int) -> np.ndarray:
    """Upper bound for the value of any record of height H: psi(H-1) <= (H-1)**-n."""
    H = np.asarray(H, dtype=np.float64)
    with np.errstate(divide="ignore"):
        t = np.where(H <= 1, 0.5, (H - 1) ** (-float(n)))
    return np.minimum(t * (1 + 1e-9) + 1e-15, 0.5)


def _row_vectors(M: int, n: int) -> np.ndarray:
    """Sign-normalised leading parts m' (first n-1 coords) with m' != 0."""
    if n == 2:
        return np.arange(1, M + 1, dtype=np.int64).reshape(-1, 1)
    rng = np.arange(-M, M + 1, dtype=np.int64)
    rest = np.array(np.meshgrid(*([rng] * (n - 2)), indexing="ij")).reshape(n - 2, -1).T
    rows = []
    for m1 in range(0, M + 1):
        block = np.hstack([np.full((rest.shape[0], 1), m1, dtype=np.int64), rest])
        if m1 == 0:
            keep = np.array([_first_nonzero_positive(r) for r in block], dtype=bool)
            block = block[keep]
        rows.append(block)
    return np.vstack(rows)


def _first_nonzero_positive(v) -> bool:
    for c in v:
        if c != 0:
            return c > 0
    return False


def _candidates(alpha: RealVector, M: int):
    """All vectors that could be best approximations with height <= M.

    Returns (m array of shape (K, n), fixed-point fractional part of alpha.m).
    Uses the bound psi(H-1) <= (H-1)**-n: a record of height H must beat it,
    and its leading part has height h' <= H so the cheaper test with h'
    keeps every record.
    """
    n = alpha.n
    a = alpha.fixed_point()
    ks = np.arange(1, M + 1, dtype=np.int64)
    if n == 1:
        m = ks.reshape(-1, 1)
        v = fixed_point_dot(m, a)
        keep = fixed_point_norm(v) <= _threshold(ks, 1)
        return m[keep], v[keep]

    # rows with m' = 0: m = (0, ..., 0, k), k > 0
    last = np.zeros((M, n), dtype=np.int64)
    last[:, -1] = ks
    ms = [last]
    vals = [fixed_point_dot(last, a)]

    kk = np.arange(-M, M + 1, dtype=np.int64)
    y = fixed_point_dot(kk.reshape(-1, 1), a[-1:])
    order = np.argsort(y, kind="stable")
    Y, Kfor = y[order], kk[order]

    rows = _row_vectors(M, n)
    h_row = np.abs(rows).max(axis=1)
    chunk = 1 << 16
    for s in range(0, rows.shape[0], chunk):
        R, h = rows[s : s + chunk], h_row[s : s + chunk]
        c = fixed_point_dot(R, a[:-1])
        with np.errstate(over="ignore"):
            u = np.uint64(0) - c
        w = (_threshold(h, n) * 2.0**64).astype(np.float64)
        take_all = w >= 2.0**62
        wi = np.where(take_all, 0, w).astype(np.uint64)
        with np.errstate(over="ignore"):
            lo, hi = u - wi, u + wi
        wrap = lo > hi
        i_lo = np.searchsorted(Y, lo, side="left")
        i_hi = np.searchsorted(Y, hi, side="right")
        starts, stops, owners = [], [], []
        plain = ~take_all & ~wrap
        starts.append(i_lo[plain]); stops.append(i_hi[plain]); owners.append(np.nonzero(plain)[0])
        wr = ~take_all & wrap
        starts.append(i_lo[wr]); stops.append(np.full(wr.sum(), Y.size)); owners.append(np.nonzero(wr)[0])
        starts.append(np.zeros(wr.sum(), dtype=np.int64)); stops.append(i_hi[wr]); owners.append(np.nonzero(wr)[0])
        starts.append(np.zeros(take_all.sum(), dtype=np.int64)); stops.append(np.full(take_all.sum(), Y.size)); owners.append(np.nonzero(take_all)[0])
        st = np.concatenate(starts).astype(np.int64)
        sp = np.concatenate(stops).astype(np.int64)
        ow = np.concatenate(owners).astype(np.int64)
        lens = np.maximum(sp - st, 0)
        if lens.sum() == 0:
            continue
        own = np.repeat(ow, lens)
        offs = np.arange(lens.sum()) - np.repeat(np.cumsum(lens) - lens, lens)
        idx = np.repeat(st, lens) + offs
        m = np.hstack([R[own], Kfor[idx].reshape(-1, 1)])
        v = fixed_point_dot(m, a)
        H = np.abs(m).max(axis=1)
        keep = fixed_point_norm(v) <= _threshold(H, n)
        ms.append(m[keep])
        vals.append(v[keep])
    return np.vstack(ms), np.concatenate(vals)


@at_context_precision
def enumerate_best_approximations(
    alpha: RealVector,
    M_max: int,
    ctx: PrecisionContext = DEFAULT_CONTEXT,
    *,
    budget: int | None = None,
) -> ApproxList:
    """Best approximation vectors of height <= M_max by exhaustive search.

    The search is exact modular arithmetic in 64-bit fixed point with a
    pre-filter that cannot drop a record; every record is then recomputed at
    ``ctx.bits`` and near-ties are resolved at full precision.
    """
    n = alpha.n
    if M_max < 1:
        raise DomainError("M_max must be >= 1")
    cap = budget if budget is not None else DEFAULT_BUDGET.get(n, 10)
    if M_max > cap:
        raise BudgetExceeded(f"M_max={M_max} exceeds the enumeration budget {cap} for n={n}")

    m, v = _candidates(alpha, M_max)
    d = fixed_point_norm(v)
    H = np.abs(m).max(axis=1)
    err = np.abs(m).sum(axis=1).astype(np.float64) * 2.0**-63 + d * 2.0**-50

    # order by height, then value, then lexicographically
    keys = [m[:, j] for j in range(n - 1, -1, -1)] + [d, H]
    order = np.lexsort(keys)
    m, d, H, err = m[order], d[order], H[order], err[order]

    out = ApproxList(limit=M_max)
    best_d, best_err, best_zeta = math.inf, 0.0, None
    i, N = 0, len(d)
    while i < N:
        j = i
        h = H[i]
        while j < N and H[j] == h:
            j += 1
        # candidates at this height whose value is indistinguishable from the minimum
        group = [k for k in range(i, j) if d[k] <= d[i] + err[i] + err[k]]
        if d[i] < best_d + best_err + err[i]:
            recs = [_record(0, m[k], alpha, ctx.bits) for k in group]
            z = min(r.zeta for r in recs)
            slack = mpmath.ldexp(1, -ctx.bits + 24)
            close = [r for r in recs if r.zeta - z <= slack]
            rec = min(close, key=lambda r: r.m)
            if best_zeta is None or rec.zeta < best_zeta - slack:
                out.append(BestApproximation(len(out) + 1, rec.m, rec.M, rec.zeta, rec.delta))
                best_zeta = rec.zeta
                best_d, best_err = d[i], err[i]
                if rec.zeta == 0:
                    break
            elif abs(rec.zeta - best_zeta) <= slack:
                raise PrecisionExhausted(
                    f"cannot separate candidate {rec.m} from the current record at {ctx.bits} bits"
                )
        i = j
    return out


# ---------------------------------------------------------------------------
# measure functions


def psi(ba: Sequence[BestApproximation], t: int):
    """Irrationality measure function: zeta_nu for M_nu <= t < M_{nu+1}."""
    if not ba:
        raise OutOfRange("empty best-approximation list")
    limit = getattr(ba, "limit", ba[-1].M)
    if t < ba[0].M or t > limit:
        raise OutOfRange(f"t={t} outside [{ba[0].M}, {limit}]")
    lo, hi = 0, len(ba) - 1
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if ba[mid].M <= t:
            lo = mid
        else:
            hi = mid - 1
    return ba[lo].zeta


@at_context_precision
def simultaneous_best(
    alpha: RealVector, Q_max: int, ctx: PrecisionContext = DEFAULT_CONTEXT
) -> list:
    """Records of ``max_j ||q alpha_j||`` over 1 <= q <= Q_max."""
    if Q_max < 1:
        raise DomainError("Q_max must be >= 1")
    a = alpha.fixed_point()
    out: list = []
    best_r = math.inf
    best_exact = None
    chunk = 1 << 20
    slack = mpmath.ldexp(1, -ctx.bits + 24)
    for s in range(1, Q_max + 1, chunk):
        q = np.arange(s, min(s + chunk, Q_max + 1), dtype=np.int64)
        with np.errstate(over="ignore"):
            v = q.astype(np.uint64).reshape(-1, 1) * a.reshape(1, -1)
        r = fixed_point_norm(v).max(axis=1)
        err = q.astype(np.float64) * 2.0**-62 + r * 2.0**-50
        prefix = np.minimum.accumulate(r)
        prev = np.concatenate([[best_r], np.minimum(prefix[:-1], best_r)])
        for k in np.nonzero(r <= prev + 2 * err)[0]:
            qq = int(q[k])
            with mpmath.workprec(ctx.bits):
                exact = max(
                    abs(_linear_form(RealVector((c,)), (qq,), ctx.bits)) for c in alpha.components
                )
            if best_exact is None or exact < best_exact - slack:
                out.append(SimultaneousApprox(qq, exact))
                best_exact = exact
            elif abs(exact - best_exact) <= slack:
                raise PrecisionExhausted(f"cannot separate q={qq} from the current record")
        best_r = min(best_r, float(prefix[-1]))
    return out


def psi_star(sa: Sequence[SimultaneousApprox], t: int):
    """r of the last simultaneous record with q <= t."""
    if not sa or t < sa[0].q:
        raise OutOfRange(f"t={t} precedes the first record")
    val = sa[0].r
    for rec in sa:
        if rec.q > t:
            break
        val = rec.r
    return val


# ---------------------------------------------------------------------------
# exponents


def _neglog(x) -> float:
    return -float(mpmath.log(x))


def estimate_exponents(
    ba: Sequence[BestApproximation],
    sa: Sequence[SimultaneousApprox] | None = None,
    nu0: int = 2,
) -> ExponentEstimate:
    """Finite-sample surrogates for omega, omega-hat and lambda-hat.

    * ``omega_est``: least-squares slope of -log zeta_nu against log M_nu
      over records nu >= nu0 with M_nu > 1.
    * ``omega_hat_est``: min over nu >= nu0 of -log zeta_nu / log M_{nu+1}.
    * ``lambda_hat_est``: min over k >= nu0 of -log r_k / log q_{k+1}
      (NaN when ``sa`` is not given).
    """
    if len(ba) < 5:
        raise InsufficientData(f"need at least 5 best approximations, got {len(ba)}")
    pts = [(math.log(b.M), _neglog(b.zeta)) for b in ba[nu0 - 1 :] if b.M > 1 and b.zeta > 0]
    if len(pts) < 2:
        raise InsufficientData("too few records with M > 1")
    x = np.array([p[0] for p in pts])
    y = np.array([p[1] for p in pts])
    xc = x - x.mean()
    omega = float((xc * (y - y.mean())).sum() / (xc * xc).sum())

    omega_hat = min(
        _neglog(ba[i].zeta) / math.log(ba[i + 1].M)
        for i in range(nu0 - 1, len(ba) - 1)
        if ba[i].zeta > 0
    )

    lam = math.nan
    if sa is not None:
        if len(sa) < 5:
            raise InsufficientData(f"need at least 5 simultaneous records, got {len(sa)}")
        lam = min(
            _neglog(sa[i].r) / math.log(sa[i + 1].q)
            for i in range(nu0 - 1, len(sa) - 1)
            if sa[i].r > 0
        )
    return ExponentEstimate(omega, omega_hat, lam, len(ba))


def marnat_root(n: int, omega_hat: float) -> float:
    """Unique positive root of x**(n-1) + ... + x + 1 - omega_hat."""
    if n < 2:
        raise DomainError("n must be >= 2")
    if omega_hat < n:
        raise DomainError(f"omega_hat={omega_hat} < n={n}")
    if omega_hat == n:
        return 1.0
    with mpmath.workprec(200):
        w = mpf(omega_hat)
        R = lambda x: mpmath.fsum(x**k for k in range(n)) - w  # noqa: E731
        lo, hi = mpf(1), w
        for _ in range(400):
            mid = (lo + hi) / 2
            if R(mid) > 0:
                hi = mid
            else:
                lo = mid
            if hi - lo < mpmath.ldexp(1, -180):
                break
        return float((lo + hi) / 2)


def marnat_polynomial(n: int, omega_hat: float, x: float) -> float:
    return math.fsum(x**k for k in range(n)) - omega_hat


def proposition_g(n: int, t):
    """g(t) = (t**n - 1)(2 - t)/(t - 1), with the quotient expanded as a geometric sum."""
    t = np.asarray(t, dtype=np.float64)
    geo = np.zeros_like(t)
    p = np.ones_like(t)
    for _ in range(n):
        geo = geo + p
        p = p * t
    return geo * (2 - t)


def g_n_star(n: int):
    """(g_star, max of g on a grid over (1, 2), argmax) for the extremal problem in dimension n."""
    if n < 2:
        raise DomainError("n must be >= 2")
    g_star = (2 / (n - 1)) * (2.0**n * (1 - 1 / (n + 1)) ** n - 1)
    grid = 1 + 1e-4 * np.arange(1, 10000)
    vals = proposition_g(n, grid)
    k = int(np.argmax(vals))
    return g_star, float(vals[k]), float(grid[k])


def jarnik_transfer(n: int, omega_hat: float) -> float:
    """Lower bound (1 - 1/omega_hat)/(n - 1) for lambda-hat; equality when n = 2."""
    if n < 2:
        raise DomainError("n must be >= 2")
    if omega_hat < n:
        raise DomainError(f"omega_hat={omega_hat} < n={n}")
    if math.isinf(omega_hat):
        return 1 / (n - 1)
    return (1 - 1 / omega_hat) / (n - 1)


def badly_approximable_margin(ba: Sequence[BestApproximation], n: int) -> float:
    """min over nu of zeta_nu * M_{nu+1}**n (Minkowski guarantees <= 1)."""
    if not ba:
        raise DomainError("empty best-approximation list")
    vals = [float(ba[i].zeta) * float(ba[i + 1].M) ** n for i in range(len(ba) - 1)]
    return min(vals) if vals else math.inf


def minkowski_ok(ba: Sequence[BestApproximation], n: int | None = None) -> list:
    """Per-record flags for zeta_nu <= M_{nu+1}**-n (the last record has no successor)."""
    if not ba:
        return []
    n = ba[0].n if n is None else n
    flags = [bool(ba[i].zeta * mpf(ba[i + 1].M) ** n <= 1) for i in range(len(ba) - 1)]
    return flags + [True]
