"""Semistable CoHAs as quotients of the shuffle algebra.

The restriction H_G(R_d) -> H_G(R_d^sst) is onto and its kernel is the span
of the products H_{d1} * H_{d2} over decompositions d = d1 + d2 with
mu(d1) > mu(d2).  Each graded piece of that kernel is computed exactly in the
monomial symmetric basis and kept in reduced row-echelon form; quotient
coordinates are the non-pivot columns.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product

from .errors import ArmIndexError, DimensionMismatchError, UnsupportedQuiverError
from .quiver import (INF, Quiver, build_canonical_quiver, slope, standard_stability,
                     to_full, vadd, vsub, delta0, e_vec, f_vec)
from .ratpoly import (Echelon, RatPoly, SymPoly, basis_element, from_coordinates,
                      partitions, sym_basis_keys, sym_coordinates)
from .shuffle import product_shift, shuffle_product


@dataclass
class KernelBasis:
    d: tuple
    polydeg: int
    keys: tuple  # monomial symmetric basis of the ambient piece
    echelon: Echelon
    _rows: list = field(default=None, repr=False)

    @property
    def rank(self):
        return self.echelon.rank

    @property
    def pivots(self):
        return self.echelon.pivots

    @property
    def free_columns(self):
        piv = set(self.echelon.rows)
        return tuple(c for c in range(len(self.keys)) if c not in piv)

    @property
    def quotient_dim(self):
        return len(self.keys) - self.rank

    def row_polys(self, ambient):
        if self._rows is None:
            self._rows = []
            for p in self.echelon.pivots:
                row = self.echelon.rows[p]
                coords = [row.get(c, 0) for c in range(len(self.keys))]
                self._rows.append(from_coordinates(ambient, self.keys, coords))
        return self._rows


class QuotClass:
    """A homogeneous class in a semistable CoHA."""

    __slots__ = ("ctx", "d", "polydeg", "coords", "rep")

    def __init__(self, ctx, d, polydeg, coords, rep):
        self.ctx = ctx
        self.d = tuple(d)
        self.polydeg = polydeg
        self.coords = tuple(coords)
        self.rep = rep

    def is_zero(self):
        return not any(self.coords)

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if not isinstance(other, QuotClass):
            return NotImplemented
        if self.is_zero() and other.is_zero():
            return True
        return (self.ctx is other.ctx and self.d == other.d
                and self.polydeg == other.polydeg and self.coords == other.coords)

    def __hash__(self):
        return hash((self.d, self.polydeg, self.coords))

    def _same(self, other):
        if self.is_zero() or other.is_zero():
            return
        if self.ctx is not other.ctx or self.d != other.d or self.polydeg != other.polydeg:
            raise DimensionMismatchError("classes live in different bidegrees")

    def __add__(self, other):
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        self._same(other)
        coords = tuple(a + b for a, b in zip(self.coords, other.coords))
        return QuotClass(self.ctx, self.d, self.polydeg, coords, self.rep + other.rep)

    def scale(self, c):
        c = Fraction(c)
        return QuotClass(self.ctx, self.d, self.polydeg,
                         tuple(x * c for x in self.coords), self.rep.scale(c))

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        return quot_mul(self, other)

    @property
    def virtual_degree(self):
        return 2 * self.polydeg + self.ctx.euler(self.d, self.d)

    def to_json(self):
        return {"d": list(self.d), "polydeg": self.polydeg,
                "virtual_degree": self.virtual_degree,
                "coords": [str(Fraction(c)) for c in self.coords],
                "representative": self.rep.to_json()}

    def __repr__(self):
        return f"QuotClass(d={self.d}, polydeg={self.polydeg}, rep={self.rep.to_text()!r})"


class SemistableCoha:
    """Semistable CoHA of a relation-free quiver at the slope of each input."""

    def __init__(self, Q: Quiver, theta=None):
        if Q.has_relations:
            raise UnsupportedQuiverError(f"{Q.name or Q.vertices} has relations")
        self.Q = Q
        self.theta = tuple(theta) if theta is not None else standard_stability(Q)
        self._kernels = {}
        self._gens = {}
        self._lock = threading.RLock()

    def euler(self, d, e):
        from .quiver import euler_form_quiver
        return euler_form_quiver(self.Q, d, e)

    def ambient(self, d):
        return self.Q.ambient(d)

    def destabilizing(self, d):
        """Proper decompositions d = d1 + d2 with mu(d1) > mu(d2)."""
        out = []
        for d1 in product(*(range(x + 1) for x in d)):
            d2 = vsub(d, d1)
            if not any(d1) or not any(d2):
                continue
            if slope(self.theta, d1) > slope(self.theta, d2):
                out.append((d1, d2))
        return out

    # -- kernel pieces ----------------------------------------------------------
    def _module_generators(self, d):
        """Shuffle products m_lambda(x') * 1 with lambda in the d1 x d2 box.

        These generate every H_{d1} * H_{d2} as a module over the symmetric
        polynomials in all d variables.
        """
        with self._lock:
            if d in self._gens:
                return self._gens[d]
        by_deg = {}
        for d1, d2 in self.destabilizing(d):
            shift = product_shift(self.Q, d1, d2)
            amb1, amb2 = self.ambient(d1), self.ambient(d2)
            one2 = SymPoly.one(amb2)
            boxes = []
            for a, b in zip(d1, d2):
                boxes.append([lam for m in range(a * b + 1) for lam in partitions(m, a, b)])
            for key in product(*boxes):
                deg = sum(sum(lam) for lam in key) + shift
                if deg < 0:
                    continue
                prod_ = shuffle_product(self.Q, basis_element(amb1, key), one2, check=False)
                if prod_:
                    by_deg.setdefault(deg, []).append(prod_)
        with self._lock:
            self._gens[d] = by_deg
        return by_deg

    def kernel_basis(self, d, polydeg, method="module") -> KernelBasis:
        d = self.Q.check_dim(d)
        if method == "products":
            return self._kernel_from_products(d, polydeg)
        key = (d, polydeg)
        with self._lock:
            if key in self._kernels:
                return self._kernels[key]
        amb = self.ambient(d)
        keys = sym_basis_keys(amb, polydeg)
        ech = Echelon(len(keys))
        if polydeg >= 0 and keys:
            full = len(keys)
            # K_p = sum_{i,k} e_k(x_i) K_{p-k} + span(generators of degree p)
            for vi, count in enumerate(d):
                for k in range(1, min(count, polydeg) + 1):
                    if ech.rank == full:
                        break
                    lower = self.kernel_basis(d, polydeg - k)
                    if not lower.rank:
                        continue
                    ek = _elementary(amb, vi, k)
                    for row in lower.row_polys(amb):
                        ech.add(_coord_dict(ek * row, keys))
                        if ech.rank == full:
                            break
            for gen in self._module_generators(d).get(polydeg, []):
                if ech.rank == full:
                    break
                ech.add(_coord_dict(gen, keys))
        kb = KernelBasis(d, polydeg, keys, ech)
        with self._lock:
            self._kernels[key] = kb
        return kb

    def _kernel_from_products(self, d, polydeg):
        """All products b1 * b2 of monomial basis elements; slow reference path."""
        amb = self.ambient(d)
        keys = sym_basis_keys(amb, polydeg)
        ech = Echelon(len(keys))
        for d1, d2 in self.destabilizing(d):
            budget = polydeg - product_shift(self.Q, d1, d2)
            if budget < 0:
                continue
            amb1, amb2 = self.ambient(d1), self.ambient(d2)
            for p1 in range(budget + 1):
                for k1 in sym_basis_keys(amb1, p1):
                    b1 = basis_element(amb1, k1)
                    for k2 in sym_basis_keys(amb2, budget - p1):
                        prod_ = shuffle_product(self.Q, b1, basis_element(amb2, k2), check=False)
                        ech.add(_coord_dict(prod_, keys))
        return KernelBasis(d, polydeg, keys, ech)

    # -- classes ------------------------------------------------------------------
    def reduce(self, poly: RatPoly, polydeg=None) -> QuotClass:
        d = poly.dims
        degs = poly.degrees()
        if polydeg is None:
            if len(degs) > 1:
                raise ValueError("reduce needs a homogeneous polynomial")
            polydeg = degs.pop() if degs else 0
        elif degs and degs != {polydeg}:
            raise ValueError("polynomial is not of the stated degree")
        kb = self.kernel_basis(d, polydeg)
        vec = _coord_dict(poly, kb.keys)
        red = kb.echelon.reduce(vec)
        free = kb.free_columns
        coords = tuple(red.get(c, 0) for c in free)
        rep = from_coordinates(self.ambient(d), kb.keys, [red.get(c, 0) for c in range(len(kb.keys))])
        return QuotClass(self, d, polydeg, coords, rep)

    def cls(self, poly, polydeg=None):
        return self.reduce(poly, polydeg)

    def zero(self, d, polydeg=0):
        d = self.Q.check_dim(d)
        return self.reduce(RatPoly.zero(self.ambient(d)), polydeg)

    def unit(self):
        return self.reduce(RatPoly.one(self.ambient((0,) * len(self.Q.vertices))))

    def mul(self, a: QuotClass, b: QuotClass) -> QuotClass:
        d = vadd(a.d, b.d)
        deg = a.polydeg + b.polydeg + product_shift(self.Q, a.d, b.d)
        if a.is_zero() or b.is_zero() or deg < 0:
            return self.zero(d, max(deg, 0))
        return self.reduce(shuffle_product(self.Q, a.rep, b.rep, check=False), deg)

    def quot_dim(self, d, polydeg):
        if polydeg < 0:
            return 0
        return self.kernel_basis(d, polydeg).quotient_dim

    def basis_classes(self, d, polydeg):
        """Classes of the free monomial columns: a basis of the quotient piece."""
        kb = self.kernel_basis(d, polydeg)
        amb = self.ambient(d)
        return [self.reduce(basis_element(amb, kb.keys[c]), polydeg) for c in kb.free_columns]


def _elementary(ambient, vi, k):
    counts = [c for _, c in ambient]
    key = tuple((1,) * k if i == vi else () for i in range(len(counts)))
    return basis_element(ambient, key)


def _coord_dict(poly, keys):
    return {i: c for i, c in enumerate(sym_coordinates(poly, keys)) if c}


# -- the canonical family Q(2^n), n <= 2 -----------------------------------------

class CanonicalCoha(SemistableCoha):
    """Coha(P^1(2^n)) computed on the quiver Q(2^n) for n <= 2."""

    def __init__(self, n):
        if n > 2:
            raise UnsupportedQuiverError(
                f"Q(2^{n}) has relations; direct quotient computations need n <= 2")
        super().__init__(build_canonical_quiver(n))
        self.n = n
        self._gen_cache = {}

    def full(self, d):
        return to_full(self.n, d)

    def _arm(self, k):
        if not 1 <= k <= self.n:
            raise ArmIndexError(f"arm {k} does not exist for n={self.n}")

    def _gen(self, key, d, poly):
        if key not in self._gen_cache:
            self._gen_cache[key] = self.reduce(poly)
        return self._gen_cache[key]

    def g(self, i):
        """g_{2i} = x^i at delta0."""
        amb = self.ambient(delta0(self.n))
        return self._gen(("g", i), None, RatPoly.var(amb, "0", 1, i) if i else RatPoly.one(amb))

    def h(self, i):
        """h_{2i+2} = (z - x) x^i at delta0."""
        amb = self.ambient(delta0(self.n))
        x = RatPoly.var(amb, "0", 1)
        z = RatPoly.var(amb, INF, 1)
        return self._gen(("h", i), None, (z - x) * x ** i)

    def e(self, k, i):
        """e_{k,2i+1} = y_k^i at e_k."""
        self._arm(k)
        amb = self.ambient(e_vec(self.n, k))
        return self._gen(("e", k, i), None, RatPoly.var(amb, str(k), 1, i) if i else RatPoly.one(amb))

    def f(self, k, i):
        """f_{k,2i+1} = x^i at f_k."""
        self._arm(k)
        amb = self.ambient(f_vec(self.n, k))
        return self._gen(("f", k, i), None, RatPoly.var(amb, "0", 1, i) if i else RatPoly.one(amb))

    def generator(self, kind, arm, i):
        if kind == "g":
            return self.g(i)
        if kind == "h":
            return self.h(i)
        if kind == "e":
            return self.e(arm, i)
        if kind == "f":
            return self.f(arm, i)
        raise ValueError(f"unknown generator kind {kind!r}")


@lru_cache(maxsize=None)
def canonical(n) -> CanonicalCoha:
    return CanonicalCoha(n)


def _infer_ctx(poly):
    verts = tuple(v for v, _ in poly.ambient)
    n = len(verts) - 2
    if n < 0 or verts != build_canonical_quiver(n).vertices:
        raise ValueError("cannot infer a canonical quiver from these vertex labels")
    return canonical(n)


# -- module-level operations ------------------------------------------------------

def kernel_basis(Q: Quiver, theta, d, polydeg, method="module") -> KernelBasis:
    return _ctx_for(Q, theta).kernel_basis(d, polydeg, method=method)


_CTXS = {}


def _ctx_for(Q, theta):
    if Q.has_relations:
        raise UnsupportedQuiverError(f"{Q.name or Q.vertices} has relations")
    key = (Q, tuple(theta) if theta is not None else None)
    if key not in _CTXS:
        for n in (0, 1, 2):
            if Q == build_canonical_quiver(n) and (theta is None or tuple(theta) == standard_stability(Q)):
                _CTXS[key] = canonical(n)
                break
        else:
            _CTXS[key] = SemistableCoha(Q, theta)
    return _CTXS[key]


def reduce(elt: RatPoly, ctx: SemistableCoha = None) -> QuotClass:
    return (ctx or _infer_ctx(elt)).reduce(elt)


def quot_mul(a: QuotClass, b: QuotClass) -> QuotClass:
    if a.ctx is not b.ctx:
        raise DimensionMismatchError("classes from different algebras")
    return a.ctx.mul(a, b)


def quot_dim(n, d, cohdeg, virtual=False) -> int:
    """Dimension of H^cohdeg of the semistable stack at d (ordinary degree by default)."""
    ctx = canonical(n)
    d = ctx.full(d)
    if virtual:
        cohdeg -= ctx.euler(d, d)
    if cohdeg < 0 or cohdeg % 2:
        return 0
    return ctx.quot_dim(d, cohdeg // 2)


def generators(n, max_index):
    """The generator table: name -> class, for subscript indices below max_index."""
    ctx = canonical(n)
    table = {}
    for i in range(max_index + 1):
        table[f"g{2 * i}"] = ctx.g(i)
        table[f"h{2 * i + 2}"] = ctx.h(i)
        for k in range(1, n + 1):
            table[f"e{k},{2 * i + 1}"] = ctx.e(k, i)
            table[f"f{k},{2 * i + 1}"] = ctx.f(k, i)
    return table


def check_relation(n, rel, k=None, l=None, i=0, j=0, variant=None) -> bool:
    """Does the named defining relation of P_n hold among the CoHA generators?"""
    from .pn import pn_to_coha, relation_elements

    elements = relation_elements(n, rel, k=k, l=l, i=i, j=j, variant=variant)
    return all(pn_to_coha(n, x).is_zero() for _, x in elements)


def relation_suite(n, max_virtual=None, max_index=None):
    """Evaluate every relation instance within the bounds.

    Returns a list of ``(instance, holds)`` pairs.
    """
    from .pn import pn_to_coha, relation_instances

    out = []
    for inst in relation_instances(n, max_virtual, max_index):
        out.append((inst, pn_to_coha(n, inst.element).is_zero()))
    return out


def generation_check(n, d, cohdeg, virtual=False) -> bool:
    """Do ordered products of generators span the quotient piece?"""
    from .pn import pbw_words, pn_to_coha, PnElement

    ctx = canonical(n)
    d = ctx.full(d)
    v = cohdeg if virtual else cohdeg + ctx.euler(d, d)
    target = quot_dim(n, d, v, virtual=True)
    if target == 0:
        return True
    ech = Echelon(target)
    for w in pbw_words(n, d, v):
        c = pn_to_coha(n, PnElement.word(n, w))
        ech.add({t: x for t, x in enumerate(c.coords) if x})
        if ech.rank == target:
            return True
    return ech.rank == target


def quot_from_json(data, n):
    """Rebuild a class from its JSON form by reducing the representative."""
    rep = RatPoly.from_json(data["representative"])
    return canonical(n).reduce(rep, int(data["polydeg"]))


def lift_dim(d):
    """Dimension vector after adding one more arm with entry d_0."""
    d = tuple(d)
    return d[:-1] + (d[0],) + d[-1:]


def lift(a: QuotClass) -> QuotClass:
    """Image under Coha(P^1(2^n)) -> Coha(P^1(2^(n+1))): variable inclusion."""
    src = a.ctx
    if not isinstance(src, CanonicalCoha):
        raise ValueError("lift is defined for the canonical family")
    tgt = canonical(src.n + 1)
    dt = lift_dim(a.d)
    rep = a.rep.embed(tgt.ambient(dt))
    return tgt.reduce(rep, a.polydeg)
