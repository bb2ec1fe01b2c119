import itertools
import random
from fractions import Fraction

import pytest
import sympy

from pncoha.errors import DimensionMismatchError, NotSymmetricError
from pncoha.quiver import Quiver, build_canonical_quiver, euler_form_quiver, vadd
from pncoha.ratpoly import RatPoly, SymPoly, basis_element, slot_labels, sym_basis_keys, symmetrize
from pncoha.shuffle import Bidegree, FreeCohaElt, free_mul, product_shift, shuffle_product, unit

LOOP = Quiver(("v",), (("v", "v", 1),))
POINT = Quiver(("v",), ())


def amb(Q, d):
    return Q.ambient(d)


def test_one_loop():
    one = RatPoly.one(amb(LOOP, (1,)))
    assert shuffle_product(LOOP, one, one) == RatPoly.constant(amb(LOOP, (2,)), 2)


def test_loop_free_point():
    y = RatPoly.var(amb(POINT, (1,)), "v", 1)
    one = RatPoly.one(amb(POINT, (1,)))
    assert shuffle_product(POINT, y, one) == RatPoly.constant(amb(POINT, (2,)), -1)
    assert not shuffle_product(POINT, one, one)


def test_unit_law():
    Q = build_canonical_quiver(1)
    f = symmetrize(RatPoly.var(amb(Q, (2, 1, 1)), "0", 1, 2))
    u = unit(Q)
    assert shuffle_product(Q, f, u) == f
    assert shuffle_product(Q, u, f) == f


def test_rejects_bad_input():
    Q = build_canonical_quiver(0)
    a = RatPoly.var(amb(Q, (2, 0)), "0", 1)
    with pytest.raises(NotSymmetricError):
        shuffle_product(Q, a, RatPoly.one(amb(Q, (0, 1))))
    with pytest.raises(DimensionMismatchError):
        shuffle_product(Q, RatPoly.one(amb(POINT, (1,))), RatPoly.one(amb(Q, (0, 1))))


def test_canonical_generators_n1():
    Q = build_canonical_quiver(1)
    e = RatPoly.one(amb(Q, (0, 1, 0)))
    f = RatPoly.one(amb(Q, (1, 0, 1)))
    big = amb(Q, (1, 1, 1))
    x, y, z = (RatPoly.var(big, v, 1) for v in ("0", "1", "inf"))
    assert shuffle_product(Q, e, f) == z - y
    assert shuffle_product(Q, f, e) == y - x


def test_kronecker_squared_factor():
    Q = build_canonical_quiver(0)
    a = RatPoly.one(amb(Q, (1, 0)))
    b = RatPoly.one(amb(Q, (0, 1)))
    big = amb(Q, (1, 1))
    x, z = RatPoly.var(big, "0", 1), RatPoly.var(big, "inf", 1)
    assert shuffle_product(Q, a, b) == (z - x) ** 2
    assert shuffle_product(Q, b, a) == RatPoly.one(big)


# -- independent oracle: the shuffle sum as rational functions -------------------

def sympy_shuffle(Q, f, g):
    d, e = f.dims, g.dims
    de = vadd(d, e)
    labels = slot_labels(tuple(zip(Q.vertices, de)))
    syms = [sympy.Symbol(f"x_{v}_{j}") for v, j in labels]
    by_vertex = []
    pos = 0
    for c in de:
        by_vertex.append(list(range(pos, pos + c)))
        pos += c

    def as_expr(p, slots):
        out = 0
        for ex, c in p.terms.items():
            term = sympy.Rational(c.numerator, c.denominator) if isinstance(c, Fraction) else sympy.Integer(c)
            for k, a in enumerate(ex):
                term *= syms[slots[k]] ** a
            out += term
        return out

    total = 0
    for choice in itertools.product(*(list(itertools.combinations(vs, d[i])) for i, vs in enumerate(by_vertex))):
        first = [list(c) for c in choice]
        second = [[s for s in by_vertex[i] if s not in first[i]] for i in range(len(de))]
        term = as_expr(f, [s for blk in first for s in blk]) * as_expr(g, [s for blk in second for s in blk])
        for i in range(len(de)):
            for j in range(len(de)):
                expo = Q.matrix[i][j] - (i == j)
                for r in first[i]:
                    for s in second[j]:
                        term *= (syms[s] - syms[r]) ** expo
        total += term
    return sympy.expand(sympy.cancel(sympy.together(total))), syms


def to_expr(p, syms):
    out = 0
    for ex, c in p.terms.items():
        term = sympy.Rational(Fraction(c).numerator, Fraction(c).denominator)
        for k, a in enumerate(ex):
            term *= syms[k] ** a
        out += term
    return sympy.expand(out)


ORACLE_CASES = [
    (0, (1, 0), (1, 1), 1, 0),
    (0, (1, 1), (1, 1), 0, 1),
    (0, (2, 1), (0, 1), 1, 0),
    (1, (1, 1, 0), (0, 0, 1), 1, 0),
    (1, (1, 0, 1), (1, 1, 1), 1, 1),
    (1, (0, 2, 0), (1, 0, 1), 1, 0),
    (2, (1, 1, 0, 1), (0, 1, 1, 0), 1, 0),
    (2, (1, 0, 1, 1), (1, 1, 0, 1), 0, 1),
]


@pytest.mark.parametrize("n,d,e,pd,pe", ORACLE_CASES)
def test_against_rational_function_oracle(n, d, e, pd, pe):
    Q = build_canonical_quiver(n)
    rng = random.Random(hash((n, d, e)) & 0xFFFF)
    f = sum((basis_element(amb(Q, d), k).scale(rng.randint(-2, 2)) for k in sym_basis_keys(amb(Q, d), pd)),
            RatPoly.zero(amb(Q, d)))
    g = sum((basis_element(amb(Q, e), k).scale(rng.randint(1, 3)) for k in sym_basis_keys(amb(Q, e), pe)),
            RatPoly.zero(amb(Q, e)))
    ours = shuffle_product(Q, f, g)
    expected, syms = sympy_shuffle(Q, f, g)
    assert to_expr(ours, syms) == expected


def _random_homogeneous(rng, Q, d, p):
    keys = sym_basis_keys(amb(Q, d), p)
    out = RatPoly.zero(amb(Q, d))
    for k in keys:
        out = out + basis_element(amb(Q, d), k).scale(rng.randint(-2, 2))
    return SymPoly._raw(out.ambient, out.terms)


def _small_vectors(Q, top):
    return [d for d in itertools.product(range(top + 1), repeat=len(Q.vertices)) if 0 < sum(d) <= top]


@pytest.mark.parametrize("n", [0, 1, 2])
def test_associativity_degree_law(n):
    Q = build_canonical_quiver(n)
    rng = random.Random(n)
    vecs = _small_vectors(Q, 2)
    for _ in range(8):
        ds = [rng.choice(vecs) for _ in range(3)]
        ps = [rng.randint(0, 2) for _ in range(3)]
        a, b, c = (_random_homogeneous(rng, Q, d, p) for d, p in zip(ds, ps))
        ab = shuffle_product(Q, a, b)
        left = shuffle_product(Q, ab, c)
        right = shuffle_product(Q, a, shuffle_product(Q, b, c))
        assert left == right
        assert left.is_symmetric()
        if ab:
            assert ab.dims == vadd(ds[0], ds[1])
            assert ab.degrees() == {ps[0] + ps[1] + product_shift(Q, ds[0], ds[1])}


@pytest.mark.parametrize("n", [1, 2])
def test_virtual_degree_additive_on_regular(n):
    Q = build_canonical_quiver(n)
    regs = [d for d in _small_vectors(Q, 4) if d[0] == d[-1]]
    for d in regs:
        for e in regs:
            lhs = Bidegree(d, 1).virtual(Q) + Bidegree(e, 2).virtual(Q)
            p = 3 + product_shift(Q, d, e)
            assert Bidegree(vadd(d, e), p).virtual(Q) == lhs


def test_free_mul_bilinear():
    Q = build_canonical_quiver(1)
    p = SymPoly.one(amb(Q, (0, 1, 0)))
    q = SymPoly.of(RatPoly.var(amb(Q, (0, 1, 0)), "1", 1))
    r = SymPoly.one(amb(Q, (1, 0, 1)))
    P, Qe, R = (FreeCohaElt.of(Q, x) for x in (p, q, r))
    assert (P + Qe) * R == P * R + Qe * R
    assert not (FreeCohaElt(Q) * P)
    assert FreeCohaElt.of(Q, unit(Q)) * P == P
    assert free_mul(Q, P, R).pieces == {Bidegree((1, 1, 1), 1): shuffle_product(Q, p, r)}
