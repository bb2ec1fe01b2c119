import itertools
from fractions import Fraction

import pytest

from pncoha.quiver import (Quiver, build_canonical_quiver, delta0, e_vec, euler_form_canonical,
                           euler_form_quiver, f_vec, is_regular, regular_vectors, slope,
                           standard_stability, to_full, to_short)


def test_shapes():
    k2 = build_canonical_quiver(0)
    assert k2.vertices == ("0", "inf") and k2.a("0", "inf") == 2
    q1 = build_canonical_quiver(1)
    assert {(s, t) for s, t, _ in q1.arrows} == {("0", "1"), ("1", "inf"), ("0", "inf")}
    q2 = build_canonical_quiver(2)
    assert q2.a("0", "inf") == 0 and q2.a("0", "2") == 1 and q2.a("2", "inf") == 1
    q3 = build_canonical_quiver(3)
    assert q3.has_relations and q3.a("0", "inf") == 2
    assert not q2.has_relations


def test_euler_examples():
    q1 = build_canonical_quiver(1)
    assert euler_form_quiver(q1, delta0(1), delta0(1)) == 0
    k2 = build_canonical_quiver(0)
    assert euler_form_quiver(k2, (1, 1), (1, 1)) == 0
    assert euler_form_quiver(q1, (2, 1, 3), (0, 0, 0)) == 0
    assert euler_form_canonical(1, delta0(1), delta0(1)) == 0


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_canonical_on_named(n):
    for k in range(1, n + 1):
        assert euler_form_canonical(n, e_vec(n, k), e_vec(n, k)) == 1
        assert euler_form_canonical(n, e_vec(n, k), f_vec(n, k)) == -1
        assert euler_form_canonical(n, f_vec(n, k), f_vec(n, k)) == 1
    assert euler_form_canonical(n, delta0(n), delta0(n)) == 0


@pytest.mark.parametrize("n", [0, 1, 2])
def test_quiver_form_restricts_to_canonical(n):
    Q = build_canonical_quiver(n)
    vecs = [d + (d[0],) for d in itertools.product(range(4), repeat=n + 1)]
    for d in vecs:
        for e in vecs[::3]:
            assert euler_form_quiver(Q, d, e) == euler_form_canonical(n, d, e)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_canonical_symmetric_bilinear(n):
    vecs = list(itertools.product(range(3), repeat=n + 1))[:40]
    for d, e in itertools.product(vecs, repeat=2):
        assert euler_form_canonical(n, d, e) == euler_form_canonical(n, e, d)
    d, e, c = vecs[1], vecs[-2], vecs[len(vecs) // 2]
    s = tuple(x + y for x, y in zip(e, c))
    assert euler_form_canonical(n, d, s) == euler_form_canonical(n, d, e) + euler_form_canonical(n, d, c)


def test_slopes():
    th = standard_stability(build_canonical_quiver(0))
    assert th == (1, -1)
    assert slope(th, (1, 1)) == 0
    assert slope(th, (1, 0)) == 1
    assert slope(th, (0, 1)) == -1
    assert slope(standard_stability(build_canonical_quiver(1)), (1, 1, 0)) == Fraction(1, 2)
    with pytest.raises(ValueError):
        slope(th, (0, 0))


def test_vector_forms():
    assert to_full(2, (1, 0, 1)) == (1, 0, 1, 1)
    assert to_full(2, (1, 0, 1, 1)) == (1, 0, 1, 1)
    assert to_short(1, (2, 1, 2)) == (2, 1)
    assert is_regular(1, (1, 0, 1)) and not is_regular(1, (1, 0, 0))
    assert tuple(a + b for a, b in zip(e_vec(3, 2), f_vec(3, 2))) == delta0(3)
    with pytest.raises(ValueError):
        to_full(1, (1, 1, 1, 1))


def test_regular_vectors_bound():
    vs = regular_vectors(1, 4)
    assert all(sum(v) <= 4 and v[0] == v[-1] for v in vs)
    assert (1, 2, 1) in vs and (2, 0, 2) in vs and (0, 4, 0) in vs


def test_json_roundtrip():
    Q = build_canonical_quiver(2)
    assert Quiver.from_json(Q.to_json()) == Q
