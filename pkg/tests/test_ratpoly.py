from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from pncoha.errors import DimensionMismatchError, NotSymmetricError
from pncoha.ratpoly import (RatPoly, SymPoly, div_linear, make_ambient, monomial_sym_basis,
                            parse_poly, partitions, poly_arith, row_reduce, symmetrize,
                            sym_basis_keys, sym_coordinates, from_coordinates)

K2 = (("0", 1), ("inf", 1))
TWO = (("0", 2),)


def P(text, amb=K2):
    return parse_poly(text, amb)


def test_cancellation():
    amb = (("0", 1), ("1", 1))
    s = poly_arith(P("x[0,1] + x[1,1]", amb), P("-x[0,1]", amb), "add")
    assert s == P("x[1,1]", amb)
    assert not any(c == 0 for c in s.terms.values())


def test_square_and_text():
    zx = P("x[inf,1] - x[0,1]")
    sq = poly_arith(zx, zx, "mul")
    assert sq == P("x[inf,1]^2 - 2 x[0,1] x[inf,1] + x[0,1]^2")
    assert sq.to_text() == "x[0,1]^2 - 2 * x[0,1] x[inf,1] + x[inf,1]^2"


def test_identity():
    p = P("3/2 x[0,1]^2 - x[inf,1]")
    assert RatPoly.one(K2) * p == p


def test_mismatch():
    with pytest.raises(DimensionMismatchError):
        RatPoly.one(K2) + RatPoly.one(TWO)
    with pytest.raises(ValueError):
        poly_arith(RatPoly.one(K2), RatPoly.one(K2), "div")


@pytest.mark.parametrize("text", ["0", "1", "-1/3", "x[0,1]", "2 * x[0,1]^3 x[inf,1] - 7/5 x[inf,1]^2 + 4"])
def test_text_roundtrip(text):
    p = P(text)
    assert P(p.to_text()) == p
    assert RatPoly.from_json(p.to_json()) == p


def test_json_shape():
    js = P("1/2 x[0,1]^2").to_json()
    assert js == {"dim": {"0": 1, "inf": 1}, "terms": [{"exp": {"0,1": 2}, "coeff": "1/2"}]}


def test_symmetrize_examples():
    amb = TWO
    x1 = RatPoly.var(amb, "0", 1)
    x2 = RatPoly.var(amb, "0", 2)
    assert symmetrize(x1) == (x1 + x2).scale(Fraction(1, 2))
    assert symmetrize(x1 - x2) == RatPoly.zero(amb)
    s = x1 * x1 + x2 * x2
    assert symmetrize(s) == s


def test_sympoly_guard():
    amb = TWO
    with pytest.raises(NotSymmetricError):
        SymPoly.of(RatPoly.var(amb, "0", 1))
    assert SymPoly.of(RatPoly.one(amb)).is_symmetric()


def test_monomial_basis_examples():
    assert monomial_sym_basis(K2, 1) == [RatPoly.var(K2, "0", 1), RatPoly.var(K2, "inf", 1)]
    x1, x2 = RatPoly.var(TWO, "0", 1), RatPoly.var(TWO, "0", 2)
    assert monomial_sym_basis(TWO, 2) == [x1 * x1 + x2 * x2, x1 * x2]
    assert monomial_sym_basis((), 0) == [RatPoly.one(())]


def _brute_count(amb, deg):
    """Count symmetrized monomials of a degree directly."""
    n = sum(c for _, c in amb)
    seen = set()

    def rec(i, left, acc):
        if i == n:
            if left == 0:
                seen.add(symmetrize(RatPoly._raw(amb, {tuple(acc): 1})))
            return
        for a in range(left + 1):
            rec(i + 1, left - a, acc + [a])

    rec(0, deg, [])
    return len(seen)


@pytest.mark.parametrize("amb", [K2, TWO, (("0", 2), ("1", 1)), (("0", 2), ("inf", 2)), (("0", 1), ("1", 1), ("inf", 1))])
@pytest.mark.parametrize("deg", range(0, 5))
def test_basis_size_matches_brute_force(amb, deg):
    assert len(monomial_sym_basis(amb, deg)) == _brute_count(amb, deg)


def test_partitions_order():
    assert list(partitions(4, 2)) == [(4,), (3, 1), (2, 2)]
    assert list(partitions(0, 0)) == [()]


def test_coordinates_roundtrip():
    amb = (("0", 2), ("inf", 1))
    keys = sym_basis_keys(amb, 3)
    coords = [Fraction(i - 2, 3) for i in range(len(keys))]
    p = from_coordinates(amb, keys, coords)
    assert p.is_symmetric()
    assert sym_coordinates(p, keys) == coords


def test_div_linear():
    amb = (("0", 3),)
    x = [RatPoly.var(amb, "0", j) for j in (1, 2, 3)]
    p = (x[1] - x[0]) * (x[2] * x[2] + x[0])
    q, rem = div_linear(p, 1, 0)
    assert not rem and q == x[2] * x[2] + x[0]
    _, rem = div_linear(x[1] + x[0], 1, 0)
    assert rem


@pytest.mark.parametrize("rows,rank", [([[1, 1], [2, 2]], 1), ([], 0), ([[0, 1], [1, 0]], 2)])
def test_row_reduce_examples(rows, rank):
    basis, piv, r = row_reduce(rows)
    assert r == rank
    if rows == [[0, 1], [1, 0]]:
        assert basis == [[1, 0], [0, 1]] and piv == (0, 1)


small = st.integers(-3, 3)


def _rand_poly(data, amb):
    n = sum(c for _, c in amb)
    terms = {}
    for _ in range(data.draw(st.integers(0, 4))):
        e = tuple(data.draw(st.integers(0, 2)) for _ in range(n))
        terms[e] = data.draw(small)
    return RatPoly(amb, terms)


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_ring_axioms(data):
    amb = (("0", 2), ("inf", 1))
    a, b, c = (_rand_poly(data, amb) for _ in range(3))
    assert a + b == b + a and a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c


@settings(max_examples=30, deadline=None)
@given(st.data())
def test_symmetrize_properties(data):
    amb = (("0", 2), ("1", 2))
    p = _rand_poly(data, amb)
    s = symmetrize(p)
    assert s.is_symmetric()
    assert symmetrize(s) == s
    q = symmetrize(_rand_poly(data, amb))
    assert symmetrize(p * q) == s * q


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(st.integers(-4, 4), min_size=4, max_size=4), max_size=5))
def test_rank_independent_of_order(rows):
    _, _, r1 = row_reduce(rows)
    _, _, r2 = row_reduce(list(reversed(rows)))
    # transpose rank as a second elimination order
    cols = [list(c) for c in zip(*rows)] if rows else []
    _, _, r3 = row_reduce(cols)
    assert r1 == r2 == r3
