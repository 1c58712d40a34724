"""Exact arithmetic in F_p and F_{p^k}.

Elements of F_{p^k} are residues of polynomials over F_p modulo a fixed
monic irreducible modulus of degree k.  Coefficient vectors are stored
little-endian (index i holds the coefficient of x^i).  Every element also
has an integer *code* ``sum(c_i * p**i)``; codes are what the vectorised
engine in :mod:`weilv.fieldtables` works with, and code order is the
enumeration order used throughout.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .errors import BudgetExceeded, ContextMismatch, FieldDomainError, WeilvError

ENUMERATION_BUDGET = 2**24


def is_prime(n: int) -> bool:
    """Trial division with a 6k +/- 1 wheel."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0 or n % 3 == 0:
        return False
    i = 5
    while i * i <= n:
        if n % i == 0 or n % (i + 2) == 0:
            return False
        i += 6
    return True


def factorize(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


# --- polynomials over F_p as little-endian tuples -------------------------

def _trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _trim(out)


def _psub(a, b, p):
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return _trim((x - y) % p for x, y in zip(a, b))


def _pdivmod(a, b, p):
    a = _trim(a)
    b = _trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    inv_lead = pow(b[-1], -1, p)
    q = [0] * max(len(a) - len(b) + 1, 0)
    r = list(a)
    while len(r) >= len(b) and r:
        shift = len(r) - len(b)
        c = r[-1] * inv_lead % p
        q[shift] = c
        for i, y in enumerate(b):
            r[shift + i] = (r[shift + i] - c * y) % p
        r = _trim(r)
    return _trim(q), r


def _pmod(a, m, p):
    return _pdivmod(a, m, p)[1]


def _pgcd(a, b, p):
    a, b = _trim(a), _trim(b)
    while b:
        a, b = b, _pmod(a, b, p)
    if a:
        inv = pow(a[-1], -1, p)
        a = [x * inv % p for x in a]
    return a


def _ppowmod(base, e, m, p):
    result = [1]
    base = _pmod(base, m, p)
    while e:
        if e & 1:
            result = _pmod(_pmul(result, base, p), m, p)
        base = _pmod(_pmul(base, base, p), m, p)
        e >>= 1
    return result


def is_irreducible(f, p: int) -> bool:
    """Rabin-style test: no factor of degree <= deg/2."""
    f = _trim(f)
    k = len(f) - 1
    if k < 1:
        return False
    if k == 1:
        return True
    if f[0] == 0:
        return False
    x = [0, 1]
    h = x
    for _ in range(k // 2):
        h = _ppowmod(h, p, f, p)
        if len(_pgcd(_psub(h, x, p), f, p)) > 1:
            return False
    return True


@lru_cache(maxsize=None)
def find_irreducible(p: int, k: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree ``k`` over F_p.

    Candidates are ordered by coefficient vector with the constant term most
    significant.  Returned little-endian, including the leading 1.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if k < 1:
        raise ValueError("degree must be >= 1")
    if k == 1:
        return (0, 1)
    for low in itertools.product(range(p), repeat=k):
        if low[0] == 0:
            continue
        f = list(low) + [1]
        if is_irreducible(f, p):
            return tuple(f)
    raise WeilvError(f"no irreducible polynomial of degree {k} over F_{p}")  # pragma: no cover


@dataclass(frozen=True)
class FieldCtx:
    """The field F_{p^k} realised as F_p[x] / (modulus)."""

    p: int
    k: int
    modulus: tuple[int, ...]

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        m = tuple(self.modulus)
        if len(m) != self.k + 1 or m[-1] != 1:
            raise ValueError("modulus must be monic of degree k")
        if any(not 0 <= c < self.p for c in m):
            raise ValueError("modulus coefficients must lie in [0, p)")
        if not is_irreducible(m, self.p):
            raise ValueError(f"modulus {m} is reducible over F_{self.p}")
        object.__setattr__(self, "modulus", m)

    @property
    def q(self) -> int:
        return self.p**self.k

    def __repr__(self):
        return f"FieldCtx(F_{self.p}^{self.k})" if self.k > 1 else f"FieldCtx(F_{self.p})"

    def __call__(self, value) -> "FieldElement":
        """Coerce an int (a prime-field residue) or coefficient sequence."""
        if isinstance(value, FieldElement):
            if value.ctx != self:
                raise ContextMismatch(f"{value!r} does not live in {self!r}")
            return value
        if isinstance(value, int):
            return FieldElement(self, (value % self.p,) + (0,) * (self.k - 1))
        coeffs = [int(c) % self.p for c in value]
        if len(coeffs) > self.k:
            coeffs = _pmod(coeffs, self.modulus, self.p)
        coeffs = list(coeffs) + [0] * (self.k - len(coeffs))
        return FieldElement(self, tuple(coeffs))

    def zero(self):
        return self(0)

    def one(self):
        return self(1)

    def gen(self):
        """Class of x (zero in the prime field, by the degree-1 convention)."""
        return self([0, 1]) if self.k > 1 else self(0)

    def from_code(self, code: int) -> "FieldElement":
        if not 0 <= code < self.q:
            raise ValueError("code out of range")
        coeffs = []
        for _ in range(self.k):
            code, r = divmod(code, self.p)
            coeffs.append(r)
        return FieldElement(self, tuple(coeffs))


@lru_cache(maxsize=None)
def field(p: int, k: int = 1) -> FieldCtx:
    """The canonical context for F_{p^k} (smallest irreducible modulus)."""
    return FieldCtx(p, k, find_irreducible(p, k))


@dataclass(frozen=True)
class FieldElement:
    ctx: FieldCtx
    coeffs: tuple[int, ...]

    def _check(self, other):
        if isinstance(other, int):
            return self.ctx(other)
        if not isinstance(other, FieldElement):
            return NotImplemented
        if other.ctx != self.ctx:
            raise ContextMismatch(f"{self.ctx!r} vs {other.ctx!r}")
        return other

    @property
    def code(self) -> int:
        p = self.ctx.p
        out = 0
        for c in reversed(self.coeffs):
            out = out * p + c
        return out

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self):
        return not self.is_zero()

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        p = self.ctx.p
        return FieldElement(self.ctx, tuple((a + b) % p for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        p = self.ctx.p
        return FieldElement(self.ctx, tuple(-a % p for a in self.coeffs))

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        ctx = self.ctx
        if ctx.k == 1:
            return FieldElement(ctx, (self.coeffs[0] * other.coeffs[0] % ctx.p,))
        prod = _pmod(_pmul(self.coeffs, other.coeffs, ctx.p), ctx.modulus, ctx.p)
        return FieldElement(ctx, tuple(prod) + (0,) * (ctx.k - len(prod)))

    __rmul__ = __mul__

    def inv(self):
        ctx = self.ctx
        if self.is_zero():
            raise FieldDomainError("inverse of zero")
        if ctx.k == 1:
            return FieldElement(ctx, (pow(self.coeffs[0], -1, ctx.p),))
        # extended Euclid on (a, modulus)
        p = ctx.p
        r0, r1 = list(ctx.modulus), _trim(self.coeffs)
        s0, s1 = [], [1]
        while r1:
            quo, rem = _pdivmod(r0, r1, p)
            r0, r1 = r1, rem
            s0, s1 = s1, _psub(s0, _pmul(quo, s1, p), p)
        inv_c = pow(r0[0], -1, p)  # r0 is a nonzero constant
        return ctx([c * inv_c for c in s0])

    def __truediv__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self * other.inv()

    def __rtruediv__(self, other):
        return self._check(other) / self

    def __pow__(self, e: int):
        if e < 0:
            return self.inv() ** (-e)
        result = self.ctx.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ctx(other)
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self.ctx == other.ctx and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.ctx, self.coeffs))

    def __repr__(self):
        if self.ctx.k == 1:
            return str(self.coeffs[0])
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                mono = "" if i == 0 else ("g" if i == 1 else f"g^{i}")
                terms.append(f"{c}{'*' if mono and c != 1 else ''}{mono}" if c != 1 or not mono else mono)
        return " + ".join(reversed(terms)) or "0"


def frobenius(x: FieldElement, power: int = 1) -> FieldElement:
    """x -> x^(p^power)."""
    if power < 1:
        raise ValueError("power must be >= 1")
    ctx = x.ctx
    return x ** (ctx.p ** (power % ctx.k)) if power % ctx.k else x


def trace_to_prime(x: FieldElement) -> int:
    """Absolute trace sum_{i<k} x^(p^i), returned as a residue mod p."""
    ctx = x.ctx
    acc = x
    y = x
    for _ in range(ctx.k - 1):
        y = y ** ctx.p
        acc = acc + y
    if any(acc.coeffs[1:]):
        raise WeilvError("trace left the prime field")  # pragma: no cover
    return acc.coeffs[0]


def elements(ctx: FieldCtx, budget: int = ENUMERATION_BUDGET):
    """Yield every element of ``ctx`` once, in code order."""
    if ctx.q > budget:
        raise BudgetExceeded(ctx.q, budget, f"enumerating {ctx!r}")
    for code in range(ctx.q):
        yield ctx.from_code(code)


def eval_fp_poly(coeffs, x: FieldElement) -> FieldElement:
    """Evaluate a polynomial with F_p coefficients (little-endian) at ``x``."""
    acc = x.ctx.zero()
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


@dataclass(frozen=True)
class Embedding:
    """The ring map F_{p^a} -> F_{p^(a n)} fixed by the image of the generator."""

    source: FieldCtx
    target: FieldCtx
    image: FieldElement

    def __call__(self, x: FieldElement) -> FieldElement:
        if x.ctx != self.source:
            raise ContextMismatch(f"{x!r} is not in {self.source!r}")
        if self.source.k == 1:
            return self.target(x.coeffs[0])
        acc = self.target.zero()
        for c in reversed(x.coeffs):
            acc = acc * self.image + c
        return acc

    def lift_code(self, code: int) -> int:
        return self(self.source.from_code(code)).code


def embed(source: FieldCtx, target: FieldCtx) -> Embedding:
    """Embed ``source`` into ``target`` via the smallest-code root of its modulus."""
    if source.p != target.p or target.k % source.k:
        raise ValueError(f"cannot embed {source!r} into {target!r}")
    if source == target:
        return Embedding(source, target, target.gen())
    if source.k == 1:
        return Embedding(source, target, target.zero())
    if target.q <= 4096:
        for x in elements(target):
            if eval_fp_poly(source.modulus, x).is_zero():
                return Embedding(source, target, x)
    else:
        from .fieldtables import tables

        code = tables(target).smallest_root(source.modulus)
        if code is not None:
            return Embedding(source, target, target.from_code(code))
    raise WeilvError(f"modulus of {source!r} has no root in {target!r}")
