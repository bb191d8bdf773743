"""Precision handling, target vectors and truncated trigonometric series.

Every other module evaluates its functions through the objects defined here:

* :class:`PrecisionContext` fixes the working mantissa and the certified tolerance.
* :class:`RealVector` holds a target vector whose components can be re-rendered
  at any precision (quadratic surds exactly, decimal literals as given).
* :class:`TrigSeriesFunction` is a finite list of trigonometric terms together
  with a symbolic bound on whatever was discarded.  :func:`eval_series` returns
  the value together with that bound.
"""
from __future__ import annotations

import functools
import math
import os
import re
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Iterable, Sequence, Union

import mpmath
import numpy as np

from .errors import DomainError, NotSquarefree, PrecisionExhausted, TailDiverges

mpf = mpmath.mpf

BITS_ENV = "KRONLAB_BITS"
TWO64 = 2.0**64


def default_bits() -> int:
    return int(os.environ.get(BITS_ENV, "256"))


@dataclass(frozen=True)
class PrecisionContext:
    """Working precision (``bits``) and certified tolerance (``tol``)."""

    bits: int = field(default_factory=default_bits)
    tol: float = 1e-30

    def __post_init__(self):
        if int(self.bits) < 64:
            raise DomainError(f"bits must be >= 64, got {self.bits}")
        if not self.tol > 0:
            raise DomainError(f"tol must be positive, got {self.tol}")

    def workprec(self, extra: int = 0):
        return mpmath.workprec(self.bits + extra)

    @property
    def ulp(self):
        return mpmath.ldexp(1, -self.bits)

    def with_tol(self, tol: float) -> "PrecisionContext":
        return PrecisionContext(self.bits, tol)


DEFAULT_CONTEXT = PrecisionContext()


def at_context_precision(fn):
    """Run ``fn`` with the mpmath working precision set from its ``ctx`` argument."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        ctx = kwargs.get("ctx")
        if ctx is None:
            ctx = next((a for a in args if isinstance(a, PrecisionContext)), DEFAULT_CONTEXT)
        with mpmath.workprec(ctx.bits):
            return fn(*args, **kwargs)

    return wrapper


@dataclass(frozen=True)
class Certified:
    """A value together with a bound on the discarded tail and on rounding."""

    value: mpmath.mpf
    tail_bound: mpmath.mpf = mpf(0)
    rounding: mpmath.mpf = mpf(0)

    @property
    def error(self):
        return self.tail_bound + self.rounding

    def __float__(self):
        return float(self.value)


# ---------------------------------------------------------------------------
# scalars and vectors


def nearest_int_norm(x):
    """Distance from ``x`` to the nearest integer; works for int, float and mpf."""
    if isinstance(x, mpmath.mpf):
        frac = x - mpmath.floor(x)
    else:
        frac = x - math.floor(x)
    return min(frac, 1 - frac)


def signed_residue(x):
    """``x - round(x)``, in [-1/2, 1/2]."""
    return x - mpmath.nint(x)


def is_squarefree(D: int) -> bool:
    if D < 1:
        return False
    k = 2
    while k * k <= D:
        if D % (k * k) == 0:
            return False
        k += 1
    return True


@dataclass(frozen=True)
class QuadraticSurd:
    """The real number (a + b*sqrt(D)) / c."""

    a: int
    b: int
    c: int
    D: int

    def __post_init__(self):
        if self.c == 0:
            raise DomainError("denominator c must be nonzero")
        if self.b == 0:
            raise DomainError("b must be nonzero for a surd")
        if self.D < 2 or not is_squarefree(self.D):
            raise NotSquarefree(f"D={self.D} is not a squarefree integer >= 2")

    def value(self, bits: int):
        return _surd_value(self, bits)

    def __str__(self):
        sign = "+" if self.b >= 0 else "-"
        return f"({self.a}{sign}{abs(self.b)}*sqrt({self.D}))/{self.c}"


@dataclass(frozen=True)
class DecimalReal:
    """A real number given by an exact decimal literal (irrationality assumed)."""

    text: str

    def __post_init__(self):
        if not re.fullmatch(r"[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?", self.text.strip()):
            raise DomainError(f"not a decimal literal: {self.text!r}")

    def value(self, bits: int):
        return _decimal_value(self, bits)

    def __str__(self):
        return f"dec:{self.text}"


Component = Union[QuadraticSurd, DecimalReal]


@lru_cache(maxsize=4096)
def _surd_value(s: QuadraticSurd, bits: int):
    with mpmath.workprec(bits + 32):
        v = (s.a + s.b * mpmath.sqrt(s.D)) / s.c
    with mpmath.workprec(bits):
        return +v


@lru_cache(maxsize=4096)
def _decimal_value(d: DecimalReal, bits: int):
    with mpmath.workprec(bits):
        return mpf(d.text.strip())


_SURD_RE = re.compile(
    r"\(\s*([+-]?\d+)\s*([+-])\s*(\d+)\s*\*\s*sqrt\(\s*(\d+)\s*\)\s*\)\s*/\s*([+-]?\d+)"
)


def parse_component(text: str) -> Component:
    s = text.strip().lower()
    if s == "golden":
        return QuadraticSurd(1, 1, 2, 5)
    m = re.fullmatch(r"sqrt\(?(\d+)\)?", s)
    if m:
        return QuadraticSurd(0, 1, 1, int(m.group(1)))
    m = _SURD_RE.fullmatch(s)
    if m:
        a, sign, b, D, c = m.groups()
        bb = int(b) if sign == "+" else -int(b)
        return QuadraticSurd(int(a), bb, int(c), int(D))
    if s.startswith("dec:"):
        return DecimalReal(s[4:])
    try:
        return DecimalReal(s)
    except DomainError:
        raise DomainError(f"cannot parse alpha component {text!r}") from None


@dataclass(frozen=True)
class RealVector:
    """A target vector in R^n held symbolically and rendered on demand."""

    components: tuple

    def __post_init__(self):
        if len(self.components) < 1:
            raise DomainError("RealVector needs at least one component")
        object.__setattr__(self, "components", tuple(self.components))

    @property
    def n(self) -> int:
        return len(self.components)

    @property
    def irrationality_tag(self) -> str:
        if all(isinstance(c, QuadraticSurd) for c in self.components):
            return "quadratic_surd"
        return "assumed"

    def value(self, bits: int | None = None) -> tuple:
        bits = default_bits() if bits is None else bits
        return tuple(c.value(bits) for c in self.components)

    def floats(self) -> np.ndarray:
        return np.array([float(v) for v in self.value(128)])

    def fractions(self, bits: int = 128) -> tuple:
        with mpmath.workprec(bits):
            return tuple(v - mpmath.floor(v) for v in self.value(bits))

    def fixed_point(self) -> np.ndarray:
        """Fractional parts as unsigned 64-bit fixed-point numbers (scale 2**64)."""
        out = []
        with mpmath.workprec(160):
            for v in self.value(160):
                f = v - mpmath.floor(v)
                out.append(int(mpmath.floor(f * mpmath.mpf(2) ** 64)))
        return np.array(out, dtype=np.uint64)

    def __str__(self):
        return ",".join(str(c) for c in self.components)

    # constructors ---------------------------------------------------------

    @classmethod
    def parse(cls, spec: str) -> "RealVector":
        """Parse ``sqrt2``, ``golden``, ``(a+b*sqrt(D))/c``, ``dec:0.123`` or comma lists."""
        parts = [p for p in spec.split(",") if p.strip()]
        if not parts:
            raise DomainError("empty alpha spec")
        return cls(tuple(parse_component(p) for p in parts))

    @classmethod
    def sqrt(cls, *Ds: int) -> "RealVector":
        return cls(tuple(QuadraticSurd(0, 1, 1, D) for D in Ds))

    @classmethod
    def golden(cls) -> "RealVector":
        return cls((QuadraticSurd(1, 1, 2, 5),))

    @classmethod
    def of(cls, *values) -> "RealVector":
        comps = []
        for v in values:
            if isinstance(v, (QuadraticSurd, DecimalReal)):
                comps.append(v)
            else:
                comps.append(DecimalReal(repr(float(v)) if isinstance(v, float) else str(v)))
        return cls(tuple(comps))


def fixed_point_dot(m: np.ndarray, a: np.ndarray) -> np.ndarray:
    """Fractional part of ``m @ alpha`` in 64-bit fixed point (exact modular arithmetic).

    ``m`` has shape (..., n) with signed integer entries, ``a`` is the output of
    :meth:`RealVector.fixed_point`.  The only error is the truncation of alpha,
    at most ``sum|m_j| * 2**-64``.
    """
    mu = np.asarray(m, dtype=np.int64).astype(np.uint64)
    with np.errstate(over="ignore"):
        return (mu * a).sum(axis=-1, dtype=np.uint64)


def fixed_point_norm(v: np.ndarray) -> np.ndarray:
    """||.|| of fixed-point fractions, as float64."""
    with np.errstate(over="ignore"):
        neg = np.uint64(0) - v
    return np.minimum(v, neg).astype(np.float64) / TWO64


_BELOW_ONE = np.nextafter(1.0, 0.0)


def fixed_point_frac(v: np.ndarray) -> np.ndarray:
    # values within 2^-53 of 1 would otherwise round up to 1.0
    return np.minimum(v.astype(np.float64) / TWO64, _BELOW_ONE)


def as_point(x, dim: int, bits: int) -> tuple:
    """Normalise an evaluation point to a tuple of mpf."""
    if isinstance(x, RealVector):
        vals = x.value(bits)
    elif isinstance(x, (int, float, mpmath.mpf)):
        vals = (x,)
    else:
        vals = tuple(x)
    if len(vals) != dim:
        raise DomainError(f"point has dimension {len(vals)}, series has {dim}")
    with mpmath.workprec(bits):
        return tuple(mpf(v) for v in vals)


# ---------------------------------------------------------------------------
# tail descriptors


@dataclass(frozen=True)
class ConstantTail:
    """Point-independent bound on the discarded tail."""

    value: object = 0

    def bound(self, x=None, orbit_time=None):
        return mpf(self.value)


ZERO_TAIL = ConstantTail(0)


@dataclass(frozen=True)
class GeometricTail:
    """Bound ``sum_{k >= first} scale * ratio**k``."""

    scale: object
    ratio: object
    first: int

    def bound(self, x=None, orbit_time=None):
        r = mpf(self.ratio)
        if not 0 <= r < 1:
            return mpmath.inf
        return abs(mpf(self.scale)) * r**self.first / (1 - r)


@dataclass(frozen=True)
class LinearTail:
    """Bound ``slope * max_j |x_j|`` (tails that grow with the argument)."""

    slope: object

    def bound(self, x=None, orbit_time=None):
        if x is None:
            return mpmath.inf
        return mpf(self.slope) * max(abs(mpf(v)) for v in x)


@dataclass(frozen=True)
class OrbitTail:
    """Bound ``per_step * t`` valid only at orbit points t*alpha; unbounded elsewhere."""

    per_step: object

    def bound(self, x=None, orbit_time=None):
        if orbit_time is None:
            return mpmath.inf
        return mpf(self.per_step) * abs(int(orbit_time))


TailBound = Union[ConstantTail, GeometricTail, LinearTail, OrbitTail]


def _sum_tails(a: TailBound, b: TailBound) -> TailBound:
    if isinstance(a, ConstantTail) and a.value == 0:
        return b
    if isinstance(b, ConstantTail) and b.value == 0:
        return a
    if isinstance(a, ConstantTail) and isinstance(b, ConstantTail):
        return ConstantTail(mpf(a.value) + mpf(b.value))
    return SumTail((a, b))


@dataclass(frozen=True)
class SumTail:
    parts: tuple

    def bound(self, x=None, orbit_time=None):
        return mpmath.fsum(p.bound(x, orbit_time) for p in self.parts)


# ---------------------------------------------------------------------------
# trigonometric series


class Kind(str, Enum):
    """Term kernels.  sin/cos use angle 2*pi*y + phase, abs_sin/sin_sq use pi*y + phase."""

    SIN = "sin"
    COS = "cos"
    ABS_SIN = "abs_sin"
    SIN_SQ = "sin_sq"

    @property
    def scale(self) -> int:
        return 2 if self in (Kind.SIN, Kind.COS) else 1


@dataclass(frozen=True)
class Term:
    coeff: object
    freq: tuple
    phase: object = 0
    kind: Kind = Kind.COS

    def __post_init__(self):
        object.__setattr__(self, "freq", tuple(self.freq))
        object.__setattr__(self, "kind", Kind(self.kind))


def _kernel_mp(kind: Kind, angle):
    if kind is Kind.SIN:
        return mpmath.sin(angle)
    if kind is Kind.COS:
        return mpmath.cos(angle)
    if kind is Kind.ABS_SIN:
        return abs(mpmath.sin(angle))
    s = mpmath.sin(angle)
    return s * s


def _kernel_np(kind: Kind, angle):
    if kind is Kind.SIN:
        return np.sin(angle)
    if kind is Kind.COS:
        return np.cos(angle)
    if kind is Kind.ABS_SIN:
        return np.abs(np.sin(angle))
    return np.sin(angle) ** 2


@dataclass(frozen=True)
class TrigSeriesFunction:
    """Finite trigonometric series on R^dim plus a bound on the discarded tail.

    A term ``(c, m, phi, kind)`` contributes ``c * K(s*pi*(m.x) + phi)`` where
    ``s = 2`` for sin/cos and ``s = 1`` for abs_sin/sin_sq.
    """

    dim: int
    terms: tuple = ()
    tail: object = ZERO_TAIL
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        for t in self.terms:
            if len(t.freq) != self.dim:
                raise DomainError(f"term frequency {t.freq} does not have dimension {self.dim}")

    @property
    def harmonic(self) -> bool:
        return all(t.kind in (Kind.SIN, Kind.COS) for t in self.terms)

    @property
    def integer_frequencies(self) -> bool:
        return all(isinstance(f, (int, np.integer)) for t in self.terms for f in t.freq)

    def l1_norm(self):
        return mpmath.fsum(abs(mpf(t.coeff)) for t in self.terms)

    def max_frequency(self) -> int:
        if not self.terms:
            return 0
        return max(int(abs(f)) for t in self.terms for f in t.freq)

    def __add__(self, other: "TrigSeriesFunction") -> "TrigSeriesFunction":
        if other.dim != self.dim:
            raise DomainError("dimension mismatch")
        return TrigSeriesFunction(
            self.dim, self.terms + other.terms, _sum_tails(self.tail, other.tail), self.label
        )

    def scaled(self, c) -> "TrigSeriesFunction":
        terms = tuple(Term(mpf(c) * mpf(t.coeff), t.freq, t.phase, t.kind) for t in self.terms)
        tail = self.tail
        if not (isinstance(tail, ConstantTail) and tail.value == 0):
            tail = ScaledTail(abs(mpf(c)), tail)
        return TrigSeriesFunction(self.dim, terms, tail, self.label)

    def __call__(self, X) -> np.ndarray:
        """Fast float64 evaluation on an array of points (no certification).

        ``X`` has shape (N, dim), or (N,) when dim == 1.
        """
        X = np.asarray(X, dtype=np.float64)
        if self.dim == 1 and X.ndim <= 1:
            X = X.reshape(-1, 1)
        out = np.zeros(X.shape[0])
        for t in self.terms:
            y = X @ np.array([float(f) for f in t.freq])
            y = y - np.floor(y)
            angle = t.kind.scale * np.pi * y + float(t.phase)
            out += float(t.coeff) * _kernel_np(t.kind, angle)
        return out

    def derivative_np(self, x) -> np.ndarray:
        """f'(x) in float64 for dim == 1 harmonic series."""
        if self.dim != 1 or not self.harmonic:
            raise DomainError("derivative only available for 1-D harmonic series")
        x = np.asarray(x, dtype=np.float64)
        out = np.zeros_like(x)
        for t in self.terms:
            w = 2 * np.pi * float(t.freq[0])
            angle = w * x + float(t.phase)
            if t.kind is Kind.SIN:
                out += float(t.coeff) * w * np.cos(angle)
            else:
                out -= float(t.coeff) * w * np.sin(angle)
        return out


@dataclass(frozen=True)
class ScaledTail:
    factor: object
    inner: object

    def bound(self, x=None, orbit_time=None):
        return mpf(self.factor) * self.inner.bound(x, orbit_time)


def harmonic(kind: str = "cos", freq=1, coeff=1, phase=0) -> TrigSeriesFunction:
    """Single-term series, e.g. ``harmonic("cos", 1)`` is cos(2 pi x)."""
    freq = (freq,) if isinstance(freq, (int, np.integer)) else tuple(freq)
    return TrigSeriesFunction(len(freq), (Term(coeff, freq, phase, Kind(kind)),))


def zero_function(dim: int = 1) -> TrigSeriesFunction:
    return TrigSeriesFunction(dim, ())


def _phase_guard_bits(f: TrigSeriesFunction, point: tuple) -> int:
    big = 1
    for t in f.terms:
        for c in t.freq:
            big = max(big, int(abs(c)) + 1)
    xmax = max([abs(v) for v in point] + [mpf(1)])
    return big.bit_length() + int(mpmath.log(xmax + 1, 2)) + 16


def eval_series(
    f: TrigSeriesFunction,
    x,
    ctx: PrecisionContext = DEFAULT_CONTEXT,
    *,
    orbit_time: int | None = None,
    strict: bool = True,
) -> Certified:
    """Evaluate ``f`` at ``x`` and return the value with its certified tail bound.

    With ``strict`` (the default) a tail bound above ``ctx.tol`` raises
    :class:`TailDiverges`; otherwise the bound is returned as-is.
    """
    point = as_point(x, f.dim, ctx.bits)
    tail = f.tail.bound(point, orbit_time)
    if not mpmath.isfinite(tail) or (strict and tail > ctx.tol):
        raise TailDiverges(f"tail bound {mpmath.nstr(tail, 5)} exceeds tol {ctx.tol}")
    if not f.terms:
        return Certified(mpf(0), tail, mpf(0))
    guard = _phase_guard_bits(f, point)
    with mpmath.workprec(ctx.bits + guard):
        parts = []
        l1 = mpf(0)
        for t in f.terms:
            y = mpmath.fsum(mpf(c) * v for c, v in zip(t.freq, point))
            y = y - mpmath.floor(y)
            angle = t.kind.scale * mpmath.pi * y + mpf(t.phase)
            c = mpf(t.coeff)
            parts.append(c * _kernel_mp(t.kind, angle))
            l1 += abs(c)
        value = mpmath.fsum(parts)
    with mpmath.workprec(ctx.bits):
        value = +value
        rounding = mpmath.ldexp(abs(value) + 16 * l1 * len(f.terms), -ctx.bits)
    if strict and tail + rounding > ctx.tol:
        raise PrecisionExhausted(
            f"rounding slack {mpmath.nstr(rounding, 5)} exceeds tol {ctx.tol}; raise bits"
        )
    return Certified(value, tail, rounding)


def _next_prime(k: int) -> int:
    k = max(k, 2)
    while True:
        if all(k % p for p in range(2, int(k**0.5) + 1)):
            return k
        k += 1


def series_mean_check(
    f: TrigSeriesFunction, ctx: PrecisionContext = DEFAULT_CONTEXT, points: int | None = None
):
    """Uniform-grid quadrature of the torus mean of a harmonic series.

    The grid has ``points`` nodes per axis (by default a prime dividing no
    frequency vector), so every term with a nonzero frequency averages out up
    to rounding.  Returns the quadrature value, which is the residual for a
    zero-mean series.
    """
    if not f.harmonic:
        raise DomainError("series_mean_check requires sin/cos terms")
    if any(all(c == 0 for c in t.freq) for t in f.terms):
        raise DomainError("series_mean_check requires nonzero frequencies")
    if not f.integer_frequencies:
        raise DomainError("series_mean_check requires integer frequencies")
    if points is None:
        # any prime K that divides no frequency vector averages every term out exactly
        cap = 4093 if f.dim == 1 else (251 if f.dim == 2 else 31)
        K = _next_prime(min(2 * f.max_frequency() + 1, cap))
        while any(all(int(c) % K == 0 for c in t.freq) for t in f.terms):
            K = _next_prime(K + 1)
        points = K
    K = int(points)
    if K ** f.dim > 2**22:
        raise DomainError(f"grid of {K}^{f.dim} points is too large")
    with mpmath.workprec(ctx.bits + 16):
        two_pi = 2 * mpmath.pi
        cos_tab = [mpmath.cos(two_pi * j / K) for j in range(K)]
        sin_tab = [mpmath.sin(two_pi * j / K) for j in range(K)]
        grid = np.indices((K,) * f.dim).reshape(f.dim, -1).T
        total = mpf(0)
        for t in f.terms:
            m = np.array([int(c) % K for c in t.freq], dtype=np.int64)
            idx = (grid @ m) % K
            counts = np.bincount(idx, minlength=K)
            c = mpf(t.coeff)
            ph = mpf(t.phase)
            cp, sp = mpmath.cos(ph), mpmath.sin(ph)
            acc = mpf(0)
            for j in np.nonzero(counts)[0]:
                if t.kind is Kind.COS:
                    val = cos_tab[j] * cp - sin_tab[j] * sp
                else:
                    val = sin_tab[j] * cp + cos_tab[j] * sp
                acc += int(counts[j]) * val
            total += c * acc
        mean = total / K**f.dim
    with mpmath.workprec(ctx.bits):
        return +mean


def _kernel_mean_1d(kind: Kind, phase, ctx: PrecisionContext):
    """Mean over y in [0, 1) of K(s*pi*y + phase), by kink-aware Gauss-Legendre."""
    s = kind.scale
    with mpmath.workprec(ctx.bits + 16):
        ph = mpf(phase)
        g = lambda y: _kernel_mp(kind, s * mpmath.pi * y + ph)  # noqa: E731
        if kind is Kind.ABS_SIN:
            # |sin| has a kink where pi*y + phase is a multiple of pi
            k = -ph / mpmath.pi
            kink = k - mpmath.floor(k)
            pieces = [mpf(0), kink, mpf(1)] if 0 < kink < 1 else [mpf(0), mpf(1)]
        else:
            pieces = [mpf(0), mpf(1)]
        val = mpmath.quad(g, pieces, method="gauss-legendre")
    return val


def torus_mean(f: TrigSeriesFunction, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """Mean of ``f`` over the torus, term by term.

    For an integer frequency m != 0 the pushforward of Lebesgue measure under
    x -> m.x mod 1 is Lebesgue measure on [0, 1), so each term reduces to a 1-D
    kernel mean, computed by quadrature.  Works for every kernel kind.
    """
    if not f.integer_frequencies:
        raise DomainError("torus_mean requires integer frequencies")
    with mpmath.workprec(ctx.bits + 16):
        parts = []
        for t in f.terms:
            c = mpf(t.coeff)
            if all(v == 0 for v in t.freq):
                parts.append(c * _kernel_mp(t.kind, mpf(t.phase)))
            else:
                parts.append(c * _kernel_mean_1d(t.kind, t.phase, ctx))
        total = mpmath.fsum(parts)
    with mpmath.workprec(ctx.bits):
        return +total


def analytic_mean(f: TrigSeriesFunction):
    """Exact mean of a harmonic series: only zero-frequency terms contribute."""
    if not f.harmonic:
        raise DomainError("analytic_mean requires sin/cos terms")
    total = mpf(0)
    for t in f.terms:
        if all(v == 0 for v in t.freq):
            total += mpf(t.coeff) * _kernel_mp(t.kind, mpf(t.phase))
    return total


def orbit_point(alpha: RealVector, k: int, x: Sequence | None = None, bits: int = 256) -> tuple:
    """Fractional parts of k*alpha + x at ``bits`` precision."""
    extra = max(int(abs(k)).bit_length(), 1) + 8
    with mpmath.workprec(bits + extra):
        vals = alpha.value(bits + extra)
        xs = (mpf(0),) * alpha.n if x is None else tuple(mpf(v) for v in x)
        out = []
        for a, b in zip(vals, xs):
            y = k * a + b
            out.append(y - mpmath.floor(y))
    with mpmath.workprec(bits):
        return tuple(+v for v in out)


def iter_mp(values: Iterable) -> list:
    return [mpf(v) for v in values]


@dataclass
class Report:
    """Outcome of a certification run: one dict per checked point plus the failures."""

    name: str
    rows: list = field(default_factory=list)
    violations: list = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.violations

    def add(self, row: dict, ok: bool = True):
        row = dict(row)
        row["pass"] = bool(ok)
        self.rows.append(row)
        if not ok:
            self.violations.append(row)
