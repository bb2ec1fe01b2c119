"""The free CoHA of a quiver as a shuffle algebra of symmetric polynomials.

For f at dimension d and g at e the product is

    f*g = sum over (d_i, e_i)-shuffles sigma of
          f(x') g(x'') prod_{i,j} prod_{r,s} (x''_{j,s} - x'_{i,r})^(a_ij - delta_ij)

where x' = first d_i slots and x'' = last e_i slots after applying sigma.
At a loop-free vertex the exponent is -1.  Those factors are cleared with the
Vandermonde identity

    prod_{r,s} (x''_s - x'_r) = sign(sigma) * V(all) / (V(x') V(x''))

so every shuffle term becomes a polynomial over the single denominator
V(all), and one exact division finishes the product.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product

from .errors import DimensionMismatchError, NotSymmetricError, ShuffleConsistencyError
from .quiver import Quiver, euler_form_quiver, vadd
from .ratpoly import RatPoly, SymPoly, div_linear


@dataclass(frozen=True)
class Bidegree:
    d: tuple
    p: int  # polynomial degree; ordinary cohomological degree is 2p

    def virtual(self, Q: Quiver) -> int:
        return 2 * self.p + euler_form_quiver(Q, self.d, self.d)

    def __add__(self, other):
        return Bidegree(vadd(self.d, other.d), self.p + other.p)


def product_shift(Q: Quiver, d, e) -> int:
    """Polynomial degree added by the kernel factors of a d * e product."""
    m = Q.matrix
    return sum((m[i][j] - (i == j)) * d[i] * e[j]
               for i in range(len(d)) for j in range(len(e)))


def _linear(ambient, n, plus, minus):
    e1 = [0] * n
    e1[plus] = 1
    e2 = [0] * n
    e2[minus] = 1
    return RatPoly._raw(ambient, {tuple(e1): 1, tuple(e2): -1})


def _vandermonde(ambient, n, positions):
    poly = RatPoly.one(ambient)
    for a, b in combinations(positions, 2):
        poly = poly * _linear(ambient, n, b, a)
    return poly


def _shuffles(k, m):
    """(k, m-k)-shuffles of range(m): (image of first block, sign)."""
    for first in combinations(range(m), k):
        inv = sum(first) - k * (k - 1) // 2
        rest = tuple(i for i in range(m) if i not in first)
        yield first + rest, (-1) ** inv


def shuffle_product(Q: Quiver, f: RatPoly, g: RatPoly, check=True) -> SymPoly:
    """CoHA product of symmetric f at d and g at e."""
    d, e = f.dims, g.dims
    if len(d) != len(Q.vertices) or len(e) != len(Q.vertices):
        raise DimensionMismatchError("operand dimension vectors do not match the quiver")
    if tuple(v for v, _ in f.ambient) != Q.vertices or tuple(v for v, _ in g.ambient) != Q.vertices:
        raise DimensionMismatchError("operand vertex labels do not match the quiver")
    if check:
        for h in (f, g):
            if not isinstance(h, SymPoly) and not h.is_symmetric():
                raise NotSymmetricError(f"shuffle operand is not symmetric: {h.to_text()}")
    de = vadd(d, e)
    ambient = tuple(zip(Q.vertices, de))
    N = sum(de)
    if not f.terms or not g.terms:
        return SymPoly._raw(ambient, {})

    offs = []
    pos = 0
    for c in de:
        offs.append(pos)
        pos += c
    # identity split: first d_i slots of vertex i hold f, the last e_i hold g
    first = [[offs[i] + r for r in range(d[i])] for i in range(len(de))]
    second = [[offs[i] + d[i] + s for s in range(e[i])] for i in range(len(de))]

    fmap = [p for blk in first for p in blk]
    gmap = [p for blk in second for p in blk]
    F = _place(f, ambient, N, fmap) * _place(g, ambient, N, gmap)

    m = Q.matrix
    loopfree = []
    for i in range(len(de)):
        for j in range(len(de)):
            expo = m[i][j] - (i == j)
            if not d[i] or not e[j] or expo == 0:
                continue
            if expo < 0:
                loopfree.append(i)
                continue
            for r in first[i]:
                for s in second[j]:
                    F = F * _linear(ambient, N, s, r) ** expo
    for i in loopfree:
        F = F * _vandermonde(ambient, N, first[i]) * _vandermonde(ambient, N, second[i])

    # sum over shuffles; signs only at the loop-free vertices
    per_vertex = []
    for i in range(len(de)):
        opts = []
        for order, sign in _shuffles(d[i], de[i]):
            opts.append(([offs[i] + t for t in order], sign if i in loopfree else 1))
        per_vertex.append(opts)
    total = {}
    for choice in product(*per_vertex):
        perm = [0] * N
        sign = 1
        for i, (order, sg) in enumerate(choice):
            sign *= sg
            # slot offs[i]+k of the split picture goes to order[k]
            for k, target in enumerate(order):
                perm[offs[i] + k] = target
        for ex, c in F.terms.items():
            ne = [0] * N
            for p_, a in enumerate(ex):
                if a:
                    ne[perm[p_]] = a
            ne = tuple(ne)
            s = total.get(ne, 0) + sign * c
            if s:
                total[ne] = s
            else:
                del total[ne]
    result = RatPoly._raw(ambient, total)

    for i in loopfree:
        slots = list(range(offs[i], offs[i] + de[i]))
        for a, b in combinations(slots, 2):
            result, rem = div_linear(result, b, a)
            if rem:
                raise ShuffleConsistencyError(
                    f"nonzero remainder dividing by x{b}-x{a} in product at {de}")
    return SymPoly._raw(ambient, result.terms)


def _place(f, ambient, N, mapping):
    out = {}
    for ex, c in f.terms.items():
        ne = [0] * N
        for p_, a in enumerate(ex):
            if a:
                ne[mapping[p_]] = a
        out[tuple(ne)] = c
    return RatPoly._raw(ambient, out)


def unit(Q: Quiver) -> SymPoly:
    return SymPoly.one(tuple((v, 0) for v in Q.vertices))


class FreeCohaElt:
    """Finite sum of bidegree-homogeneous symmetric polynomials."""

    def __init__(self, Q: Quiver, pieces=None):
        self.Q = Q
        clean = {}
        for poly in (pieces or []):
            for deg, part in _homogeneous_parts(poly).items():
                key = Bidegree(poly.dims, deg)
                clean[key] = clean[key] + part if key in clean else part
        self.pieces = {k: v for k, v in clean.items() if v}

    @classmethod
    def of(cls, Q, *polys):
        return cls(Q, polys)

    def __add__(self, other):
        return FreeCohaElt(self.Q, list(self.pieces.values()) + list(other.pieces.values()))

    def scale(self, c):
        return FreeCohaElt(self.Q, [p.scale(c) for p in self.pieces.values()])

    def __mul__(self, other):
        return free_mul(self.Q, self, other)

    def __eq__(self, other):
        return isinstance(other, FreeCohaElt) and self.pieces == other.pieces

    def __bool__(self):
        return bool(self.pieces)


def _homogeneous_parts(poly):
    parts = {}
    for ex, c in poly.terms.items():
        parts.setdefault(sum(ex), {})[ex] = c
    cls = SymPoly if isinstance(poly, SymPoly) else RatPoly
    return {deg: cls._raw(poly.ambient, t) for deg, t in parts.items()}


def free_mul(Q: Quiver, a: FreeCohaElt, b: FreeCohaElt) -> FreeCohaElt:
    out = []
    for pa in a.pieces.values():
        for pb in b.pieces.values():
            out.append(shuffle_product(Q, pa, pb))
    return FreeCohaElt(Q, out)
