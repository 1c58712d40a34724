"""Fixture varieties with independent point-count oracles."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

from .counting import VarietySpec, hypersurface
from .ffield import FieldCtx, field


@dataclass(frozen=True)
class Fixture:
    name: str
    variety: VarietySpec
    kind: str  # "projective_space", "elliptic", "diagonal", "grassmannian"
    oracle: Callable[[int], int] | None = None
    oracle_kind: str = ""  # how the oracle is computed
    genus: int | None = None
    weierstrass: tuple | None = None

    @property
    def is_curve(self) -> bool:
        return self.genus is not None


# --- projective spaces ------------------------------------------------------

def projective_space(base: FieldCtx, d: int) -> VarietySpec:
    return VarietySpec(base, "projective", d, [], label=f"P^{d}/F_{base.q}", smooth=True, dimension=d)


def projective_space_count(q: int, d: int, n: int) -> int:
    return sum(q ** (i * n) for i in range(d + 1))


# --- elliptic curves --------------------------------------------------------

def weierstrass_discriminant(base: FieldCtx, a1, a2, a3, a4, a6):
    """Discriminant of the long Weierstrass form, computed in the base field."""
    a1, a2, a3, a4, a6 = (base(c) for c in (a1, a2, a3, a4, a6))
    b2 = a1 * a1 + 4 * a2
    b4 = 2 * a4 + a1 * a3
    b6 = a3 * a3 + 4 * a6
    b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    return -(b2 * b2 * b8) - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6


def elliptic_curve(base: FieldCtx, a1=0, a2=0, a3=0, a4=0, a6=0, label=None) -> VarietySpec:
    """y^2 z + a1 x y z + a3 y z^2 = x^3 + a2 x^2 z + a4 x z^2 + a6 z^3 in P^2 (x, y, z)."""
    terms = [((0, 2, 1), 1), ((1, 1, 1), a1), ((0, 1, 2), a3),
             ((3, 0, 0), -1), ((2, 0, 1), -base(a2)), ((1, 0, 2), -base(a4)), ((0, 0, 3), -base(a6))]
    smooth = not weierstrass_discriminant(base, a1, a2, a3, a4, a6).is_zero()
    return hypersurface(base, "projective", 2, [(e, base(c)) for e, c in terms],
                        label=label or f"E[{a1},{a2},{a3},{a4},{a6}]/F_{base.q}", smooth=smooth, dimension=1)


def weierstrass_affine_count(base: FieldCtx, coeffs, n: int) -> int:
    """Independent oracle: affine solutions in pure Python plus the point at infinity."""
    from .ffield import elements, embed

    tgt = base if n == 1 else field(base.p, base.k * n)
    emb = embed(base, tgt)
    a1, a2, a3, a4, a6 = (emb(base(c)) for c in coeffs)
    els = list(elements(tgt, budget=1 << 12))
    rhs = {}
    for x in els:
        rhs[x] = x * x * x + a2 * x * x + a4 * x + a6
    count = 1
    for x in els:
        for y in els:
            if y * y + a1 * x * y + a3 * y == rhs[x]:
                count += 1
    return count


# --- diagonal hypersurfaces ---------------------------------------------------

def diagonal_hypersurface(base: FieldCtx, r: int, e: int) -> VarietySpec:
    """x_0^e + ... + x_r^e = 0 in P^r."""
    terms = []
    for i in range(r + 1):
        exps = [0] * (r + 1)
        exps[i] = e
        terms.append((tuple(exps), 1))
    smooth = e % base.p != 0
    return hypersurface(base, "projective", r, terms, label=f"diag(r={r},e={e})/F_{base.q}",
                        smooth=smooth, dimension=r - 1)


def conic_count(q: int, n: int) -> int:
    """A smooth conic with a rational point is a P^1."""
    return q**n + 1


# --- Grassmannian Gr(1,3) as the Plucker quadric ----------------------------

def plucker_quadric(base: FieldCtx) -> VarietySpec:
    """p01 p23 - p02 p13 + p03 p12 = 0 in P^5, coordinates (p01, p02, p03, p12, p13, p23)."""
    terms = [((1, 0, 0, 0, 0, 1), 1), ((0, 1, 0, 0, 1, 0), -1), ((0, 0, 1, 1, 0, 0), 1)]
    return hypersurface(base, "projective", 5, terms, label=f"Gr(1,3)/F_{base.q}", smooth=True, dimension=4)


def echelon_count(Q: int, rows: int = 2, cols: int = 4) -> int:
    """Rank-``rows`` reduced row-echelon ``rows x cols`` matrices over a field of size Q.

    Enumerates every echelon form explicitly (entries are field elements
    indexed 0..Q-1; only the shape matters for the count).
    """
    count = 0
    for pivots in itertools.combinations(range(cols), rows):
        free = [(r, c) for r, pc in enumerate(pivots) for c in range(pc + 1, cols) if c not in pivots]
        for _ in itertools.product(range(Q), repeat=len(free)):
            count += 1
    return count


def gaussian_binomial(n: int, k: int, Q: int) -> int:
    num = den = 1
    for i in range(k):
        num *= Q ** (n - i) - 1
        den *= Q ** (i + 1) - 1
    return num // den


def grassmannian_count(q: int, n: int) -> int:
    Q = q**n
    return echelon_count(Q) if Q**4 <= 1 << 16 else gaussian_binomial(4, 2, Q)


# --- the catalog -------------------------------------------------------------

ELLIPTIC_FIXTURES = [
    # (p, a1, a2, a3, a4, a6)
    (5, 0, 0, 0, 1, 1),
    (5, 1, 0, 0, 0, 1),
    (7, 0, 0, 0, 2, 3),
    (11, 0, 0, 1, -1, 0),
    (13, 1, -1, 1, 0, 0),
    (13, 0, 0, 0, 0, 7),
    (2, 0, 0, 1, 0, 0),
    (3, 0, 0, 0, -1, 1),
]


@lru_cache(maxsize=None)
def catalog() -> tuple[Fixture, ...]:
    out = []
    for d in (1, 2, 3):
        for p, a in ((2, 1), (3, 1), (2, 2), (5, 1)):
            base = field(p, a)
            q = base.q
            out.append(Fixture(f"P{d}_F{q}", projective_space(base, d), "projective_space",
                               oracle=lambda n, q=q, d=d: projective_space_count(q, d, n),
                               oracle_kind="closed form", genus=0 if d == 1 else None))
    for p, *coeffs in ELLIPTIC_FIXTURES:
        base = field(p)
        V = elliptic_curve(base, *coeffs)
        if not V.smooth:  # pragma: no cover - fixture authoring guard
            raise AssertionError(f"fixture {V.label} is singular")
        out.append(Fixture(f"E{p}_{'_'.join(str(c) for c in coeffs)}", V, "elliptic",
                           oracle=lambda n, b=base, c=tuple(coeffs): weierstrass_affine_count(b, c, n)
                           if b.q**n <= 64 else None,
                           oracle_kind="affine enumeration", genus=1, weierstrass=tuple(coeffs)))
    F4 = field(2, 2)
    g = F4.gen()
    V = elliptic_curve(F4, 0, 0, 1, g, 0, label="E[0,0,1,g,0]/F_4")
    out.append(Fixture("E4_g", V, "elliptic",
                       oracle=lambda n, b=F4, c=(0, 0, 1, g, 0): weierstrass_affine_count(b, c, n)
                       if b.q**n <= 64 else None,
                       oracle_kind="affine enumeration", genus=1, weierstrass=(0, 0, 1, g, 0)))
    for p in (5, 7):
        out.append(Fixture(f"fermat_cubic_F{p}", diagonal_hypersurface(field(p), 2, 3), "diagonal", genus=1))
    out.append(Fixture("conic_F3", diagonal_hypersurface(field(3), 2, 2), "diagonal",
                       oracle=lambda n: conic_count(3, n), oracle_kind="closed form", genus=0))
    out.append(Fixture("fermat_quartic_F5", diagonal_hypersurface(field(5), 2, 4), "diagonal", genus=3))
    out.append(Fixture("cubic_surface_F7", diagonal_hypersurface(field(7), 3, 3), "diagonal"))
    for p in (2, 3):
        out.append(Fixture(f"Gr13_F{p}", plucker_quadric(field(p)), "grassmannian",
                           oracle=lambda n, q=p: grassmannian_count(q, n), oracle_kind="echelon matrices"))
    return tuple(out)


def get_fixture(name: str) -> Fixture:
    for fx in catalog():
        if fx.name == name:
            return fx
    raise KeyError(name)
