"""Zeta functions from point counts: series, Euler product, rational form."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import comb

from .algebra import IntPoly, TruncatedSeries, rp_divmod, rp_gcd, series_exp
from .counting import ClosedPointCensus, CountTable
from .errors import InsufficientDepth, IntegralityViolation, NoRationalFit


def zeta_series(T: CountTable, m: int | None = None) -> TruncatedSeries:
    """exp(sum_{n<=m} N_n t^n / n)."""
    m = T.m if m is None else m
    if T.m < m:
        raise InsufficientDepth(m, T.m, "zeta_series")
    return series_exp(TruncatedSeries([0] + [Fraction(T[n], n) for n in range(1, m + 1)], m))


def euler_product_series(C: ClosedPointCensus, m: int | None = None) -> TruncatedSeries:
    """prod_{d<=m} (1 - t^d)^(-a_d), expanded with binomial coefficients."""
    m = C.m if m is None else m
    if C.m < m:
        raise InsufficientDepth(m, C.m, "euler_product_series")
    acc = TruncatedSeries.one(m)
    for d in range(1, m + 1):
        a = C[d]
        if a:
            factor = [0] * (m + 1)
            for j in range(m // d + 1):
                factor[d * j] = comb(a + j - 1, j)
            acc = acc * TruncatedSeries(factor, m)
    return acc


# --- exact linear algebra ----------------------------------------------------

def _solve(A, b):
    """A solution of A x = b over Q (free variables 0), or None if inconsistent."""
    rows = [list(map(Fraction, r)) + [Fraction(v)] for r, v in zip(A, b)]
    ncols = len(A[0]) if A else 0
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    if any(all(x == 0 for x in row[:-1]) and row[-1] != 0 for row in rows):
        return None
    x = [Fraction(0)] * ncols
    for i, c in enumerate(pivots):
        x[c] = rows[i][-1]
    return x


def _det(M):
    n = len(M)
    A = [list(map(Fraction, r)) for r in M]
    det = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if A[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            det = -det
        det *= A[c][c]
        for i in range(c + 1, n):
            f = A[i][c] / A[c][c]
            if f:
                A[i] = [x - f * y for x, y in zip(A[i], A[c])]
    return det


def _coef(S: TruncatedSeries, i: int) -> Fraction:
    return S[i] if 0 <= i <= S.order else Fraction(0)


def _denominator_system(S, N, D):
    """Rows n = N+1..order of  a_n + sum_{j=1}^D q_j a_{n-j} = 0."""
    A, b = [], []
    for n in range(N + 1, S.order + 1):
        A.append([_coef(S, n - j) for j in range(1, D + 1)])
        b.append(-_coef(S, n))
    return A, b


def hankel_determinants(S: TruncatedSeries, N: int, D: int) -> list[Fraction]:
    """det(a_{s+i+j})_{0<=i,j<=D} for s = N+1-D .. order-2D (a_k = 0 for k < 0).

    All of these vanish when S is a rational function with numerator degree
    <= N and denominator degree <= D.
    """
    out = []
    for s in range(N + 1 - D, S.order - 2 * D + 1):
        out.append(_det([[_coef(S, s + i + j) for j in range(D + 1)] for i in range(D + 1)]))
    return out


@dataclass(frozen=True)
class HankelVerdict:
    rational: bool
    deg_num: int | None
    deg_den: int | None
    window: tuple[int, int]
    determinants: tuple = ()

    @property
    def label(self) -> str:
        if self.rational:
            return f"rational-within-window({self.deg_num},{self.deg_den})"
        return "no-rational-fit"


def _fits(S, N, D) -> bool:
    if D == 0:
        return all(_coef(S, n) == 0 for n in range(N + 1, S.order + 1))
    A, b = _denominator_system(S, N, D)
    return _solve(A, b) is not None


def hankel_rationality(S: TruncatedSeries, max_num: int, max_den: int) -> HankelVerdict:
    """Smallest (deg num, deg den) within the window that fits S exactly.

    Candidates are swept by total degree, then by denominator degree; every
    candidate has at least deg_den + 1 surplus equations.  ``no-rational-fit``
    only says that no fit exists inside the window.
    """
    need = max_num + 2 * max_den + 1
    if S.order < need:
        raise InsufficientDepth(need, S.order, "hankel window")
    for total in range(max_num + max_den + 1):
        for D in range(min(total, max_den) + 1):
            N = total - D
            if N > max_num:
                continue
            if _fits(S, N, D):
                return HankelVerdict(True, N, D, (max_num, max_den), tuple(hankel_determinants(S, N, D)))
    return HankelVerdict(False, None, None, (max_num, max_den),
                         tuple(hankel_determinants(S, max_num, max_den)))


def hankel_sweep(S: TruncatedSeries) -> HankelVerdict:
    """Search every (N, D) with N + 2D + 1 <= order."""
    for total in range(S.order):
        for D in range(total + 1):
            N = total - D
            if N + 2 * D + 1 > S.order:
                continue
            if _fits(S, N, D):
                return HankelVerdict(True, N, D, (N, D), tuple(hankel_determinants(S, N, D)))
    return HankelVerdict(False, None, None, (S.order - 1, 0))


# --- rational functions ------------------------------------------------------

@dataclass(frozen=True)
class RationalFn:
    """numerator / denominator, coprime, both with constant term 1."""

    numerator: IntPoly
    denominator: IntPoly
    notes: tuple = dc_field(default=(), compare=False)

    def __post_init__(self):
        if self.numerator[0] != 1 or self.denominator[0] != 1:
            raise ValueError("numerator and denominator must have constant term 1")
        g = rp_gcd([Fraction(c) for c in self.numerator.coeffs], [Fraction(c) for c in self.denominator.coeffs])
        if len(g) > 1:
            raise ValueError("numerator and denominator are not coprime")

    @property
    def degrees(self) -> tuple[int, int]:
        return self.numerator.degree, self.denominator.degree

    def series(self, order: int) -> TruncatedSeries:
        num = TruncatedSeries(self.numerator.coeffs, order)
        den = TruncatedSeries(self.denominator.coeffs, order)
        return num * den.inverse()

    def to_dict(self):
        return {"numerator": list(self.numerator.coeffs), "denominator": list(self.denominator.coeffs)}


def reconstruct_rational(S: TruncatedSeries, deg_num: int, deg_den: int) -> RationalFn:
    """Solve for a denominator of degree <= deg_den, then the numerator.

    Uses every available coefficient, so the result reproduces S to its
    full order.  Raises :class:`NoRationalFit` if the system is inconsistent
    and :class:`IntegralityViolation` if the reduced fraction normalised to
    constant terms 1 has a non-integer coefficient.
    """
    if S.order < deg_num + deg_den:
        raise InsufficientDepth(deg_num + deg_den, S.order, f"reconstruction with degrees ({deg_num},{deg_den})")
    if S[0] == 0:
        raise NoRationalFit("series has zero constant term")
    if deg_den:
        A, b = _denominator_system(S, deg_num, deg_den)
        sol = _solve(A, b)
        if sol is None:
            raise NoRationalFit(f"no rational fit with degrees ({deg_num},{deg_den}) to order {S.order}")
    else:
        if any(_coef(S, n) != 0 for n in range(deg_num + 1, S.order + 1)):
            raise NoRationalFit(f"series is not a polynomial of degree <= {deg_num}")
        sol = []
    den = [Fraction(1)] + list(sol)
    num = [sum((den[j] * _coef(S, i - j) for j in range(min(i, deg_den) + 1)), Fraction(0))
           for i in range(deg_num + 1)]
    g = rp_gcd(num, den)
    if len(g) > 1:
        num = rp_divmod(num, g)[0]
        den = rp_divmod(den, g)[0]
    c_num, c_den = num[0], den[0]
    num = [x / c_num for x in num]
    den = [x / c_den for x in den]
    while num and num[-1] == 0:
        num.pop()
    while den and den[-1] == 0:
        den.pop()
    # P/Q reproduces S by construction; keep the check explicit
    back = TruncatedSeries(num, S.order) * TruncatedSeries(den, S.order).inverse()
    if back != S:
        raise NoRationalFit("reconstructed fraction does not reproduce the series")  # pragma: no cover
    bad = [x for x in num + den if x.denominator != 1]
    if bad:
        raise IntegralityViolation(
            f"non-integer coefficient {bad[0]} in the reduced fraction with degrees ({deg_num},{deg_den})")
    return RationalFn(IntPoly(tuple(int(x) for x in num)), IntPoly(tuple(int(x) for x in den)))


def discover_rational(S: TruncatedSeries) -> tuple[HankelVerdict, RationalFn | None]:
    verdict = hankel_sweep(S)
    if not verdict.rational:
        return verdict, None
    return verdict, reconstruct_rational(S, verdict.deg_num, verdict.deg_den)
