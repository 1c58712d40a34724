"""Vectorised F_q arithmetic over numpy arrays, for the enumeration core.

Elements are held in *log form*: a nonzero element ``g**i`` (``g`` a fixed
primitive element) is stored as ``i`` in ``[0, q-2]`` and zero as the
sentinel ``q-1``.  Multiplication is addition of logs, addition goes through
a Zech table ``Z[i] = log(1 + g**i)``.  Every operation is one or two
gathers, which keeps brute-force point counts cheap enough for desk-scale
fields (a few million elements).
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .ffield import FieldCtx, FieldElement, factorize, trace_to_prime

_CHUNK = 1 << 18


def _primitive_element(ctx: FieldCtx) -> FieldElement:
    n1 = ctx.q - 1
    if n1 == 1:
        return ctx.one()
    primes = list(factorize(n1))
    for code in range(1, ctx.q):
        x = ctx.from_code(code)
        if all(x ** (n1 // r) != 1 for r in primes):
            return x
    raise AssertionError("no primitive element")  # pragma: no cover


class FieldTables:
    """Log/antilog/Zech/trace tables for one field context."""

    def __init__(self, ctx: FieldCtx):
        self.ctx = ctx
        p, k, q = ctx.p, ctx.k, ctx.q
        self.p, self.k, self.q = p, k, q
        self.n1 = n1 = q - 1
        self.ZERO = n1
        self.gen = _primitive_element(ctx)
        self._pw = p ** np.arange(k, dtype=np.int64)

        # multiplication-by-g as a k x k matrix acting on digit row vectors
        basis = [ctx.from_code(int(p**j)) for j in range(k)]
        mat = np.array([(b * self.gen).coeffs for b in basis], dtype=np.int64)

        exp_code = np.empty(n1, dtype=np.int64)
        exp_code[0] = 1
        filled = 1
        step = mat  # represents multiplication by g**filled
        while filled < n1:
            m = min(filled, n1 - filled)
            for s in range(0, m, _CHUNK):
                e = min(s + _CHUNK, m)
                exp_code[filled + s:filled + e] = self._mat_apply(exp_code[s:e], step)
            filled += m
            if filled < n1:
                step = (step @ step) % p
        self.exp_code = exp_code

        log = np.full(q, n1, dtype=np.int64)
        log[exp_code] = np.arange(n1, dtype=np.int64)
        if log[0] != n1 or np.count_nonzero(log == n1) != 1:
            raise AssertionError("antilog table is not a permutation")  # pragma: no cover
        self.log_of_code = log

        d0 = exp_code % p
        plus_one = exp_code - d0 + (d0 + 1) % p
        self.zech = log[plus_one]
        self.neg_one = int(log[p - 1]) if p > 2 else 0

        tr_basis = np.array([trace_to_prime(b) for b in basis], dtype=np.int64)
        trace_l = np.zeros(q, dtype=np.int64)
        for s in range(0, n1, _CHUNK):
            e = min(s + _CHUNK, n1)
            trace_l[s:e] = (self._digits(exp_code[s:e]) @ tr_basis) % p
        self.trace_l = trace_l

    def _digits(self, codes):
        return (codes[:, None] // self._pw) % self.p

    def _mat_apply(self, codes, mat):
        return ((self._digits(codes) @ mat) % self.p) @ self._pw

    # --- conversions -----------------------------------------------------
    def L(self, x: FieldElement) -> int:
        return int(self.log_of_code[x.code])

    def const(self, c: int) -> int:
        return int(self.log_of_code[c % self.p])

    def code_of(self, a):
        a = np.asarray(a)
        out = np.zeros(a.shape, dtype=np.int64)
        nz = a != self.ZERO
        out[nz] = self.exp_code[a[nz]]
        return out

    def element(self, a: int) -> FieldElement:
        return self.ctx.from_code(int(self.code_of(np.array([a]))[0]))

    # --- arithmetic on log-form arrays -----------------------------------
    def mul(self, a, b):
        Z = self.ZERO
        return np.where((a == Z) | (b == Z), Z, (a + b) % self.n1)

    def add(self, a, b):
        Z, n1 = self.ZERO, self.n1
        a = np.asarray(a)
        b = np.asarray(b)
        a_zero = a == Z
        b_zero = b == Z
        z = self.zech[(b - a) % n1]
        s = np.where(z == Z, Z, (a + z) % n1)
        return np.where(a_zero, b, np.where(b_zero, a, s))

    def neg(self, a):
        return np.where(a == self.ZERO, self.ZERO, (a + self.neg_one) % self.n1)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def power(self, a, e: int):
        if e == 0:
            return np.zeros_like(a)
        return np.where(a == self.ZERO, self.ZERO, (a * e) % self.n1)

    def inv(self, a):
        return (-a) % self.n1

    def trace(self, a):
        return self.trace_l[a]

    def is_square(self, a):
        """Nonzero squares, for odd q."""
        return (a != self.ZERO) & (a % 2 == 0)

    def eval_terms(self, terms, xs, shape=None):
        """Evaluate ``sum coef * prod x_i**e_i`` with log-form coefficients.

        ``terms`` is a sequence of ``(coef_log, exps)``; ``xs`` one log-form
        array per variable (all the same shape).
        """
        Z, n1 = self.ZERO, self.n1
        if shape is None:
            shape = xs[0].shape if xs else (1,)
        zero_masks = [x == Z for x in xs]
        acc = np.full(shape, Z, dtype=np.int64)
        for coef, exps in terms:
            lg = np.full(shape, coef, dtype=np.int64)
            dead = np.zeros(shape, dtype=bool)
            for i, e in enumerate(exps):
                if e:
                    lg += e * xs[i]
                    dead |= zero_masks[i]
            acc = self.add(acc, np.where(dead, Z, lg % n1))
        return acc

    def smallest_root(self, fp_coeffs):
        """Smallest code in this field that is a root of an F_p polynomial."""
        xs = self.log_of_code
        terms = [(self.const(c), (i,)) for i, c in enumerate(fp_coeffs) if c % self.p]
        vals = self.eval_terms(terms, [xs])
        hits = np.flatnonzero(vals == self.ZERO)
        return int(hits[0]) if hits.size else None


@lru_cache(maxsize=6)
def tables(ctx: FieldCtx) -> FieldTables:
    return FieldTables(ctx)
