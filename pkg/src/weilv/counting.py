"""Varieties over F_q, brute-force point counts over F_{q^n}, closed points.

A projective point is visited once through its normalised representative:
the first nonzero coordinate is 1 and every earlier coordinate is 0.  The
candidate space splits into *patterns* (one per position of the leading 1),
each pattern into index chunks, and chunks are evaluated independently;
the count is the integer sum over chunks, so any partition (and any thread
count) gives the same answer.

When a pattern has a single equation of degree <= 2 in some free variable,
that variable is not enumerated: for each assignment of the remaining
variables the number of solutions of ``c2 y^2 + c1 y + c0 = 0`` is read off
the discriminant's quadratic character (odd q) or an absolute trace (even
q).  Failing that, a variable occurring only through one power, as in
``A y^e + R = 0``, is skipped the same way: ``y^e = -R/A`` has
gcd(e, q^n - 1) roots when the index of -R/A is divisible by that gcd.
Every other coordinate is still enumerated exhaustively.  Pass
``strategy="exhaustive"`` to enumerate everything.
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .algebra import MultiPoly
from .errors import BudgetExceeded, ConsistencyError, ContextMismatch, InputFormatError
from .ffield import ENUMERATION_BUDGET, FieldCtx, embed, field
from .fieldtables import tables

DEFAULT_CHUNK = 1 << 20


@dataclass
class VarietySpec:
    """Common zero locus of ``equations`` in affine or projective space."""

    base: FieldCtx
    ambient: str
    dim: int
    equations: list = dc_field(default_factory=list)
    label: str = ""
    smooth: bool | None = None
    dimension: int | None = None

    def __post_init__(self):
        if self.ambient not in ("affine", "projective"):
            raise ValueError(f"ambient must be 'affine' or 'projective', got {self.ambient!r}")
        if self.dim < 0:
            raise ValueError("ambient dimension must be >= 0")
        nv = self.nvars
        for i, eq in enumerate(self.equations):
            if eq.ctx != self.base:
                raise ContextMismatch(f"equation {i} has coefficients outside {self.base!r}")
            if eq.nvars != nv:
                raise ContextMismatch(f"equation {i} has {eq.nvars} variables, expected {nv}")
            if self.ambient == "projective" and not eq.is_homogeneous():
                raise ValueError(f"equation {i} is not homogeneous")
        if self.dimension is None:
            self.dimension = max(self.dim - len(self.equations), 0)

    @property
    def nvars(self) -> int:
        return self.dim + 1 if self.ambient == "projective" else self.dim

    @property
    def q(self) -> int:
        return self.base.q

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(eq.total_degree() for eq in self.equations)


@dataclass(frozen=True)
class CountTable:
    q: int
    counts: tuple[int, ...]

    def __post_init__(self):
        if any(c < 0 for c in self.counts):
            raise ValueError("counts must be non-negative")

    @property
    def m(self) -> int:
        return len(self.counts)

    def __getitem__(self, n: int) -> int:
        """N_n, 1-based."""
        return self.counts[n - 1]


@dataclass(frozen=True)
class ClosedPointCensus:
    """a_d = number of closed points of degree d, for d = 1..m."""

    counts: tuple[int, ...]

    @property
    def m(self) -> int:
        return len(self.counts)

    def __getitem__(self, d: int) -> int:
        return self.counts[d - 1]


# --- enumeration plan ---------------------------------------------------

class CountPlan:
    """Everything needed to count ``V`` over F_{q^n}, without counting yet."""

    def __init__(self, V: VarietySpec, n: int, strategy: str = "auto"):
        if n < 1:
            raise ValueError("extension degree must be >= 1")
        if strategy not in ("auto", "exhaustive"):
            raise ValueError(f"unknown strategy {strategy!r}")
        self.V = V
        self.n = n
        base = V.base
        self.target = base if n == 1 else field(base.p, base.k * n)
        self.Q = self.target.q
        self.strategy = strategy
        self._tables = None
        self.emb = embed(base, self.target) if self.target != base else None
        lifted = [self._lift(eq) for eq in V.equations]
        self.patterns = []
        nv = V.nvars
        if V.ambient == "affine":
            layouts = [({}, list(range(nv)))]
        else:
            layouts = [({**{i: 0 for i in range(j)}, j: 1}, list(range(j + 1, nv))) for j in range(nv)]
        for fixed, free in layouts:
            self.patterns.append(self._plan(lifted, fixed, free))

    @property
    def tables(self):
        if self._tables is None:
            self._tables = tables(self.target)
        return self._tables

    def _lift(self, eq: MultiPoly) -> MultiPoly:
        if self.emb is None:
            return eq
        return MultiPoly(self.target, eq.nvars, {e: self.emb(c) for e, c in eq.terms.items()})

    def _plan(self, lifted, fixed, free):
        tgt = self.target
        restricted = []
        for eq in lifted:
            out = []
            for e, c in eq.terms.items():
                if any(e[i] and v == 0 for i, v in fixed.items()):
                    continue
                out.append((tuple(e[i] for i in free), c))
            restricted.append(MultiPoly(tgt, len(free), out))
        nfree = len(free)
        live = [r for r in restricted if not r.is_zero()]
        if not live:
            return dict(nfree=nfree, trivial=self.Q**nfree, cost=0)
        if any(r.total_degree() == 0 for r in live):
            return dict(nfree=nfree, trivial=0, cost=0)
        if self.strategy == "auto" and len(live) == 1:
            f = live[0]
            degs = [(f.degree_in(i), -i) for i in range(nfree)]
            best = min(d for d in degs if d[0] >= 1)
            if best[0] <= 2:
                v = -best[1]
                parts = [[], [], []]
                for e, c in f.terms.items():
                    rest = e[:v] + e[v + 1:]
                    parts[e[v]].append((rest, c))
                polys = [MultiPoly(tgt, nfree - 1, p) for p in parts]
                return dict(nfree=nfree, trivial=None, kind="fiber", polys=polys,
                            nenum=nfree - 1, cost=self.Q ** (nfree - 1))
            for v in range(nfree):
                powers = {e[v] for e in f.terms if e[v]}
                if len(powers) == 1:
                    parts = [[], []]
                    for e, c in f.terms.items():
                        parts[e[v] > 0].append((e[:v] + e[v + 1:], c))
                    polys = [MultiPoly(tgt, nfree - 1, p) for p in parts]
                    return dict(nfree=nfree, trivial=None, kind="power", polys=polys, exponent=powers.pop(),
                                nenum=nfree - 1, cost=self.Q ** (nfree - 1))
        return dict(nfree=nfree, trivial=None, kind="exhaustive", polys=live,
                    nenum=nfree, cost=self.Q**nfree)

    @property
    def cost(self) -> int:
        """Number of candidate tuples the plan will evaluate."""
        return sum(p["cost"] for p in self.patterns)

    def jobs(self, chunk: int = DEFAULT_CHUNK):
        """(pattern index, start, stop) ranges covering all candidates."""
        out = []
        for idx, pat in enumerate(self.patterns):
            if pat["trivial"] is None:
                for s in range(0, pat["cost"], chunk):
                    out.append((idx, s, min(s + chunk, pat["cost"])))
        return out

    def trivial_count(self) -> int:
        return sum(p["trivial"] for p in self.patterns if p["trivial"] is not None)

    def _log_terms(self, poly: MultiPoly):
        T = self.tables
        return [(T.L(c), e) for e, c in poly.terms.items()]

    def run_job(self, job) -> int:
        idx, start, stop = job
        pat = self.patterns[idx]
        T = self.tables
        Q = self.Q
        Z = T.ZERO
        size = stop - start
        index = np.arange(start, stop, dtype=np.int64)
        xs = []
        for _ in range(pat["nenum"]):
            index, digit = np.divmod(index, Q)
            xs.append(digit)
        shape = (size,)
        if pat["kind"] == "exhaustive":
            ok = np.ones(shape, dtype=bool)
            for poly in pat["polys"]:
                ok &= T.eval_terms(self._log_terms(poly), xs, shape) == Z
            return int(np.count_nonzero(ok))
        coeffs = [T.eval_terms(self._log_terms(p), xs, shape) for p in pat["polys"]]
        if pat["kind"] == "power":
            return int(_power_roots(T, Q, *coeffs, pat["exponent"]).sum())
        return int(_fiber_roots(T, Q, *coeffs).sum())

    def run(self, chunk: int = DEFAULT_CHUNK, threads: int = 1) -> int:
        jobs = self.jobs(chunk)
        if threads > 1 and len(jobs) > 1:
            self.tables  # build once before fanning out
            with ThreadPoolExecutor(max_workers=threads) as pool:
                partial = list(pool.map(self.run_job, jobs))
        else:
            partial = [self.run_job(j) for j in jobs]
        return self.trivial_count() + sum(partial)


def _fiber_roots(T, Q, c0, c1, c2):
    """Number of y in F_Q with c2 y^2 + c1 y + c0 = 0, elementwise."""
    Z = T.ZERO
    lin = np.where(c1 == Z, np.where(c0 == Z, Q, 0), 1)
    if T.p == 2:
        u = T.mul(T.mul(c0, c2), T.inv(T.power(c1, 2)))
        quad = np.where(c1 == Z, 1, np.where(T.trace(u) == 0, 2, 0))
    else:
        disc = T.sub(T.power(c1, 2), T.mul(T.const(4), T.mul(c2, c0)))
        quad = np.where(disc == Z, 1, np.where(T.is_square(disc), 2, 0))
    return np.where(c2 == Z, lin, quad).astype(np.int64)


def _power_roots(T, Q, r, a, e):
    """Number of y in F_Q with a y^e + r = 0, elementwise."""
    Z = T.ZERO
    g = math.gcd(e, Q - 1)
    u = T.mul(T.neg(r), T.inv(np.where(a == Z, 0, a)))
    unit = np.where(r == Z, 1, np.where(u % g == 0, g, 0))
    return np.where(a == Z, np.where(r == Z, Q, 0), unit).astype(np.int64)


def default_threads() -> int:
    env = os.environ.get("WEILV_THREADS")
    return int(env) if env else 1


def count_points(V: VarietySpec, n: int = 1, *, budget: int = ENUMERATION_BUDGET,
                 threads: int | None = None, strategy: str = "auto",
                 chunk: int = DEFAULT_CHUNK) -> int:
    """#V(F_{q^n}) by enumeration.

    Raises :class:`BudgetExceeded` before doing any work if the plan would
    evaluate more than ``budget`` candidates.
    """
    plan = CountPlan(V, n, strategy)
    if plan.cost > budget:
        raise BudgetExceeded(plan.cost, budget, f"counting {V.label or 'variety'} over F_{plan.Q}")
    return plan.run(chunk=chunk, threads=threads or default_threads())


def count_table(V: VarietySpec, m: int, **kwargs) -> CountTable:
    counts = []
    for n in range(1, m + 1):
        try:
            counts.append(count_points(V, n, **kwargs))
        except BudgetExceeded as exc:
            err = BudgetExceeded(exc.required, exc.budget, f"n={n}: {exc.what}")
            err.n = n
            raise err from exc
    table = CountTable(V.q, tuple(counts))
    if V.ambient == "projective":
        for n, c in enumerate(counts, 1):
            Qn = V.q**n
            if c > (Qn ** (V.dim + 1) - 1) // (Qn - 1):
                raise ConsistencyError(f"N_{n} = {c} exceeds #P^{V.dim}(F_{Qn})")
    return table


def feasible_depth(V: VarietySpec, m_max: int, budget: int = ENUMERATION_BUDGET,
                   strategy: str = "auto") -> int:
    """Largest m <= m_max such that every N_n, n <= m, fits the budget."""
    m = 0
    for n in range(1, m_max + 1):
        if CountPlan(V, n, strategy).cost > budget:
            break
        m = n
    return m


# --- closed points --------------------------------------------------------

def mobius(n: int) -> int:
    if n < 1:
        raise ValueError("mobius is defined for n >= 1")
    result = 1
    d = 2
    while d * d <= n:
        if n % d == 0:
            n //= d
            if n % d == 0:
                return 0
            result = -result
        d += 1
    return -result if n > 1 else result


def divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def closed_point_census(T: CountTable) -> ClosedPointCensus:
    """Invert N_n = sum_{d | n} d a_d by Mobius inversion."""
    out = []
    for d in range(1, T.m + 1):
        a = Fraction(sum(mobius(d // e) * T[e] for e in divisors(d)), d)
        if a.denominator != 1 or a < 0:
            raise ConsistencyError(f"a_{d} = {a} is not a non-negative integer; the counts are not those of a variety")
        out.append(int(a))
    return ClosedPointCensus(tuple(out))


# --- JSON input -------------------------------------------------------------

def _fail(where, msg):
    raise InputFormatError(f"{where}: {msg}")


def variety_from_dict(d: dict) -> VarietySpec:
    """Build a spec from ``{label, p, a, ambient: {kind, dim}, equations}``.

    ``equations`` is a list of equations, each a list of ``[exponents, coeff]``
    terms; ``coeff`` is an F_p coefficient vector of length ``a`` (a bare
    integer is accepted when a = 1).  Optional keys: ``smooth``,
    ``dimension``.
    """
    if not isinstance(d, dict):
        _fail("$", "expected an object")
    for key in ("p", "ambient", "equations"):
        if key not in d:
            _fail("$", f"missing field {key!r}")
    p, a = d["p"], d.get("a", 1)
    if not isinstance(p, int) or isinstance(p, bool):
        _fail("$.p", "must be an integer")
    if not isinstance(a, int) or a < 1:
        _fail("$.a", "must be a positive integer")
    try:
        base = field(p, a)
    except ValueError as exc:
        _fail("$.p", str(exc))
    amb = d["ambient"]
    if not isinstance(amb, dict) or amb.get("kind") not in ("affine", "projective"):
        _fail("$.ambient.kind", "must be 'affine' or 'projective'")
    dim = amb.get("dim")
    if not isinstance(dim, int) or dim < 0:
        _fail("$.ambient.dim", "must be a non-negative integer")
    nvars = dim + 1 if amb["kind"] == "projective" else dim
    eqs = d["equations"]
    if not isinstance(eqs, list):
        _fail("$.equations", "must be a list of equations")
    polys = []
    for i, eq in enumerate(eqs):
        if not isinstance(eq, list):
            _fail(f"$.equations[{i}]", "must be a list of [exponents, coeff] terms")
        terms = []
        for j, term in enumerate(eq):
            where = f"$.equations[{i}][{j}]"
            if not isinstance(term, list) or len(term) != 2:
                _fail(where, "term must be [exponents, coeff]")
            exps, coeff = term
            if not isinstance(exps, list) or len(exps) != nvars or not all(
                    isinstance(e, int) and e >= 0 for e in exps):
                _fail(where + "[0]", f"exponents must be {nvars} non-negative integers")
            if isinstance(coeff, int) and a == 1:
                coeff = [coeff]
            if not isinstance(coeff, list) or len(coeff) != a or not all(isinstance(c, int) for c in coeff):
                _fail(where + "[1]", f"coefficient must be a vector of {a} integers")
            terms.append((tuple(exps), base(coeff)))
        polys.append(MultiPoly(base, nvars, terms))
    try:
        return VarietySpec(base, amb["kind"], dim, polys, label=str(d.get("label", "")),
                           smooth=d.get("smooth"), dimension=d.get("dimension"))
    except ValueError as exc:
        _fail("$.equations", str(exc))


def load_variety(path) -> VarietySpec:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InputFormatError(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    return variety_from_dict(data)


def variety_to_dict(V: VarietySpec) -> dict:
    out = {
        "label": V.label,
        "p": V.base.p,
        "a": V.base.k,
        "ambient": {"kind": V.ambient, "dim": V.dim},
        "equations": [[[list(e), list(c.coeffs)] for e, c in eq.terms.items()] for eq in V.equations],
    }
    if V.smooth is not None:
        out["smooth"] = V.smooth
    out["dimension"] = V.dimension
    return out


def hypersurface(base: FieldCtx, ambient: str, dim: int, terms: Sequence, **kwargs) -> VarietySpec:
    """Convenience: one equation given as ``[(exponents, coeff), ...]``."""
    nvars = dim + 1 if ambient == "projective" else dim
    return VarietySpec(base, ambient, dim, [MultiPoly(base, nvars, terms)], **kwargs)
