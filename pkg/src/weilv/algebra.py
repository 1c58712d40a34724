"""Exact polynomial and power-series algebra.

* :class:`MultiPoly` -- sparse multivariate polynomials over a finite field.
* :class:`IntPoly` -- univariate polynomials with arbitrary-precision integer
  coefficients.
* :class:`TruncatedSeries` -- power series over Q truncated at an explicit
  order, with exp/log.

Nothing here touches floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import ContextMismatch, OrderMismatch, SeriesPrecondition, WeilvError
from .ffield import Embedding, FieldCtx, FieldElement


# --- multivariate polynomials over F_q ------------------------------------

class MultiPoly:
    """Sparse polynomial: exponent tuple -> nonzero coefficient."""

    __slots__ = ("ctx", "nvars", "terms")

    def __init__(self, ctx: FieldCtx, nvars: int, terms: Mapping[tuple, FieldElement] | Iterable = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        out: dict[tuple, FieldElement] = {}
        for exps, c in items:
            exps = tuple(int(e) for e in exps)
            if len(exps) != nvars or any(e < 0 for e in exps):
                raise ValueError(f"exponent vector {exps} does not fit {nvars} variables")
            c = ctx(c)
            if exps in out:
                c = out[exps] + c
            out[exps] = c
        self.ctx = ctx
        self.nvars = nvars
        self.terms = {e: c for e, c in sorted(out.items()) if not c.is_zero()}

    @classmethod
    def constant(cls, ctx, nvars, c):
        return cls(ctx, nvars, {(0,) * nvars: c})

    @classmethod
    def var(cls, ctx, nvars, i):
        exps = [0] * nvars
        exps[i] = 1
        return cls(ctx, nvars, {tuple(exps): 1})

    def is_zero(self):
        return not self.terms

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, i: int) -> int:
        return max((e[i] for e in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def leading_form(self) -> "MultiPoly":
        d = self.total_degree()
        return MultiPoly(self.ctx, self.nvars, {e: c for e, c in self.terms.items() if sum(e) == d})

    def partial(self, i: int) -> "MultiPoly":
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                f = list(e)
                f[i] -= 1
                out[tuple(f)] = c * e[i]
        return MultiPoly(self.ctx, self.nvars, out)

    def _compat(self, other):
        if not isinstance(other, MultiPoly):
            other = MultiPoly.constant(self.ctx, self.nvars, other)
        if other.ctx != self.ctx or other.nvars != self.nvars:
            raise ContextMismatch("polynomials over different rings")
        return other

    def __add__(self, other):
        other = self._compat(other)
        return MultiPoly(self.ctx, self.nvars, list(self.terms.items()) + list(other.terms.items()))

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.ctx, self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._compat(other))

    def __rsub__(self, other):
        return self._compat(other) - self

    def __mul__(self, other):
        other = self._compat(other)
        out = []
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                out.append((tuple(a + b for a, b in zip(e1, e2)), c1 * c2))
        return MultiPoly(self.ctx, self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = MultiPoly.constant(self.ctx, self.nvars, 1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        return (isinstance(other, MultiPoly) and self.ctx == other.ctx
                and self.nvars == other.nvars and self.terms == other.terms)

    def __hash__(self):
        return hash((self.ctx, self.nvars, tuple(self.terms.items())))

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.terms.items():
            mono = "*".join(f"x{i}" + (f"^{k}" if k > 1 else "") for i, k in enumerate(e) if k)
            parts.append(f"({c!r})*{mono}" if mono else f"({c!r})")
        return " + ".join(parts)


def mp_eval(f: MultiPoly, point: Sequence[FieldElement], emb: Embedding | None = None) -> FieldElement:
    """Evaluate ``f`` at ``point``, mapping coefficients through ``emb``.

    Naive term sum; the vectorised evaluator in the counting engine is
    checked against this.
    """
    if len(point) != f.nvars:
        raise ContextMismatch(f"point has {len(point)} coordinates, polynomial has {f.nvars} variables")
    if emb is None:
        target = point[0].ctx if point else f.ctx
        if target != f.ctx:
            raise ContextMismatch("point lives outside the coefficient field and no embedding was given")
        lift = lambda c: c  # noqa: E731
    else:
        target = emb.target
        lift = emb
        if f.ctx != emb.source:
            raise ContextMismatch("embedding source differs from the coefficient field")
    if any(x.ctx != target for x in point):
        raise ContextMismatch("point coordinates live in different fields")
    acc = target.zero()
    for exps, c in f.terms.items():
        term = lift(c)
        for x, e in zip(point, exps):
            if e:
                term = term * x**e
        acc = acc + term
    return acc


# --- integer polynomials --------------------------------------------------

def _trim(seq):
    out = list(seq)
    while out and out[-1] == 0:
        out.pop()
    return out


@dataclass(frozen=True)
class IntPoly:
    """Little-endian integer polynomial; the zero polynomial has no coefficients."""

    coeffs: tuple[int, ...] = ()

    def __post_init__(self):
        c = _trim(self.coeffs)
        if any(int(x) != x for x in c):
            raise ValueError("IntPoly coefficients must be integers")
        object.__setattr__(self, "coeffs", tuple(int(x) for x in c))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, i):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __add__(self, other):
        other = as_intpoly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return IntPoly(tuple(self[i] + other[i] for i in range(n)))

    __radd__ = __add__

    def __neg__(self):
        return IntPoly(tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        return self + (-as_intpoly(other))

    def __rsub__(self, other):
        return as_intpoly(other) - self

    def __mul__(self, other):
        other = as_intpoly(other)
        if not self.coeffs or not other.coeffs:
            return IntPoly()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPoly(tuple(out))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = IntPoly((1,))
        for _ in range(n):
            out = out * self
        return out

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def exact_div(self, other: "IntPoly") -> "IntPoly":
        quo, rem = rp_divmod([Fraction(c) for c in self.coeffs], [Fraction(c) for c in other.coeffs])
        if rem or any(c.denominator != 1 for c in quo):
            raise WeilvError(f"{self} is not divisible by {other} over Z")
        return IntPoly(tuple(int(c) for c in quo))

    def reversed(self, degree: int | None = None) -> "IntPoly":
        """t^degree * P(1/t)."""
        d = self.degree if degree is None else degree
        return IntPoly(tuple(self[d - i] for i in range(d + 1)))

    def scaled_arg(self, c) -> "IntPoly":
        """P(c t) for integer c."""
        return IntPoly(tuple(a * c**i for i, a in enumerate(self.coeffs)))

    def __repr__(self):
        if not self.coeffs:
            return "IntPoly(0)"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c:
                parts.append(f"{c}" if i == 0 else f"{c}*t" + (f"^{i}" if i > 1 else ""))
        return "IntPoly(" + " + ".join(parts).replace("+ -", "- ") + ")"


def as_intpoly(x) -> IntPoly:
    if isinstance(x, IntPoly):
        return x
    if isinstance(x, int):
        return IntPoly((x,))
    return IntPoly(tuple(x))


# --- rational polynomial helpers (lists of Fraction, little-endian) -------

def rp_mul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def rp_divmod(a, b):
    a = _trim(a)
    b = _trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    quo = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    rem = [Fraction(x) for x in a]
    while len(rem) >= len(b) and rem:
        shift = len(rem) - len(b)
        c = rem[-1] / b[-1]
        quo[shift] = c
        for i, y in enumerate(b):
            rem[shift + i] -= c * y
        rem = _trim(rem)
    return _trim(quo), rem


def rp_gcd(a, b):
    """Monic gcd over Q."""
    a, b = _trim(a), _trim(b)
    while b:
        a, b = b, rp_divmod(a, b)[1]
    if not a:
        return []
    return [x / a[-1] for x in a]


# --- truncated power series over Q ----------------------------------------

class TruncatedSeries:
    """c_0 + c_1 t + ... + c_m t^m, exact rationals, order m carried explicitly."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable, order: int | None = None):
        cs = [Fraction(c) for c in coeffs]
        if order is None:
            order = len(cs) - 1
        if order < 0:
            raise ValueError("order must be >= 0")
        cs = (cs + [Fraction(0)] * (order + 1 - len(cs)))[:order + 1]
        self.coeffs = tuple(cs)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def zero(cls, order):
        return cls([], order)

    @classmethod
    def one(cls, order):
        return cls([1], order)

    def __getitem__(self, i):
        return self.coeffs[i]

    def _same_order(self, other):
        if not isinstance(other, TruncatedSeries):
            return TruncatedSeries([other], self.order)
        if other.order != self.order:
            raise OrderMismatch(f"orders {self.order} and {other.order}")
        return other

    def __add__(self, other):
        other = self._same_order(other)
        return TruncatedSeries([a + b for a, b in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries([-a for a in self.coeffs])

    def __sub__(self, other):
        return self + (-self._same_order(other))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._same_order(other)
        m = self.order
        out = [Fraction(0)] * (m + 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j in range(m + 1 - i):
                    b = other.coeffs[j]
                    if b:
                        out[i + j] += a * b
        return TruncatedSeries(out)

    __rmul__ = __mul__

    def scale(self, c) -> "TruncatedSeries":
        c = Fraction(c)
        return TruncatedSeries([c * a for a in self.coeffs])

    def inverse(self) -> "TruncatedSeries":
        if self.coeffs[0] == 0:
            raise SeriesPrecondition("series with zero constant term has no inverse")
        m = self.order
        c0 = self.coeffs[0]
        out = [1 / c0]
        for n in range(1, m + 1):
            s = sum((self.coeffs[k] * out[n - k] for k in range(1, n + 1)), Fraction(0))
            out.append(-s / c0)
        return TruncatedSeries(out)

    def exp(self) -> "TruncatedSeries":
        return series_exp(self)

    def log(self) -> "TruncatedSeries":
        return series_log(self)

    def __eq__(self, other):
        return isinstance(other, TruncatedSeries) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"TruncatedSeries({[str(c) for c in self.coeffs]})"


def series_add(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    return a + b


def series_mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    return a * b


def series_scale(a: TruncatedSeries, c) -> TruncatedSeries:
    return a.scale(c)


def series_exp(a: TruncatedSeries) -> TruncatedSeries:
    """exp(a) via n b_n = sum_{k=1}^n k a_k b_{n-k}; needs a_0 = 0."""
    if a.coeffs[0] != 0:
        raise SeriesPrecondition("exp needs constant term 0")
    m = a.order
    b = [Fraction(1)]
    for n in range(1, m + 1):
        s = sum((k * a.coeffs[k] * b[n - k] for k in range(1, n + 1)), Fraction(0))
        b.append(s / n)
    return TruncatedSeries(b)


def series_log(b: TruncatedSeries) -> TruncatedSeries:
    """Inverse of :func:`series_exp`; needs b_0 = 1."""
    if b.coeffs[0] != 1:
        raise SeriesPrecondition("log needs constant term 1")
    m = b.order
    a = [Fraction(0)] * (m + 1)
    for n in range(1, m + 1):
        s = sum((k * a[k] * b.coeffs[n - k] for k in range(1, n)), Fraction(0))
        a[n] = b.coeffs[n] - s / n
    return TruncatedSeries(a)


def series_from_intpoly(p: IntPoly, order: int) -> TruncatedSeries:
    return TruncatedSeries(p.coeffs, order)


# --- characteristic-polynomial identity ------------------------------------

def det_one_minus_tM(M: Sequence[Sequence[int]]) -> IntPoly:
    """det(I - tM) by fraction-free (Bareiss) elimination over Z[t].

    Every leading principal minor of I - tM has constant term 1, so the
    pivots never vanish and no row swaps are needed.
    """
    n = len(M)
    if any(len(row) != n for row in M):
        raise ValueError("matrix must be square")
    if n == 0:
        return IntPoly((1,))
    a = [[IntPoly(((1 if i == j else 0), -int(M[i][j]))) for j in range(n)] for i in range(n)]
    prev = IntPoly((1,))
    for k in range(n - 1):
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]).exact_div(prev)
        prev = a[k][k]
    return a[n - 1][n - 1]


def _matmul(A, B):
    n = len(A)
    return [[sum(A[i][k] * B[k][j] for k in range(n)) for j in range(n)] for i in range(n)]


def charpoly_series_oracle(M: Sequence[Sequence[int]], m: int):
    """Both sides of log(1/det(1 - tM)) = sum_n Tr(M^n) t^n / n, to order m."""
    det = det_one_minus_tM(M)
    lhs = series_log(series_from_intpoly(det, m).inverse())
    rhs = [Fraction(0)]
    n = len(M)
    power = [[int(i == j) for j in range(n)] for i in range(n)]
    for k in range(1, m + 1):
        power = _matmul(power, M) if n else power
        rhs.append(Fraction(sum(power[i][i] for i in range(n)), k))
    return lhs, TruncatedSeries(rhs, m)
