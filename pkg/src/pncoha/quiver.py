"""Quivers, dimension vectors, slopes and Euler forms.

Dimension vectors are plain tuples aligned with ``Quiver.vertices``.  For the
canonical quivers Q(2^n) the vertex order is ``0, 1, ..., n, inf`` and a
regular vector ``(d0, d1, ..., dn, d0)`` can also be written in the short
form ``(d0, d1, ..., dn)``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

INF = "inf"


@dataclass(frozen=True)
class Quiver:
    vertices: tuple
    arrows: tuple  # ((source, target, multiplicity), ...)
    has_relations: bool = False
    name: str = ""
    _index: dict = field(init=False, repr=False, compare=False, hash=False)
    _matrix: tuple = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        verts = tuple(str(v) for v in self.vertices)
        if len(set(verts)) != len(verts):
            raise ValueError("duplicate vertex labels")
        object.__setattr__(self, "vertices", verts)
        index = {v: i for i, v in enumerate(verts)}
        mat = [[0] * len(verts) for _ in verts]
        arrows = []
        for s, t, m in self.arrows:
            s, t, m = str(s), str(t), int(m)
            if m < 0:
                raise ValueError("negative arrow multiplicity")
            if s not in index or t not in index:
                raise ValueError(f"arrow {s}->{t} uses an unknown vertex")
            mat[index[s]][index[t]] += m
            arrows.append((s, t, m))
        object.__setattr__(self, "arrows", tuple(arrows))
        object.__setattr__(self, "_index", index)
        object.__setattr__(self, "_matrix", tuple(tuple(r) for r in mat))

    def a(self, i, j) -> int:
        """Number of arrows from vertex ``i`` to vertex ``j`` (labels or positions)."""
        if not isinstance(i, int):
            i = self._index[str(i)]
        if not isinstance(j, int):
            j = self._index[str(j)]
        return self._matrix[i][j]

    @property
    def matrix(self):
        return self._matrix

    def index(self, v) -> int:
        return self._index[str(v)]

    def check_dim(self, d) -> tuple:
        d = tuple(int(x) for x in d)
        if len(d) != len(self.vertices) or any(x < 0 for x in d):
            raise ValueError(f"{d} is not a dimension vector of {self.name or self.vertices}")
        return d

    def ambient(self, d):
        return tuple(zip(self.vertices, self.check_dim(d)))

    def to_json(self):
        return {"vertices": list(self.vertices),
                "arrows": [[s, t, m] for s, t, m in self.arrows],
                "has_relations": self.has_relations, "name": self.name}

    @classmethod
    def from_json(cls, data):
        if isinstance(data, str):
            data = json.loads(data)
        return cls(tuple(data["vertices"]), tuple(tuple(a) for a in data["arrows"]),
                   bool(data.get("has_relations", False)), data.get("name", ""))


def build_canonical_quiver(n: int) -> Quiver:
    """The quiver of the canonical algebra with n arms of weight 2.

    For n <= 2 the relations eliminate the spine arrows and the algebra is a
    path algebra; for n >= 3 the quiver is returned flagged ``has_relations``.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    verts = ("0",) + tuple(str(k) for k in range(1, n + 1)) + (INF,)
    arms = []
    for k in range(1, n + 1):
        arms += [("0", str(k), 1), (str(k), INF, 1)]
    if n == 0:
        return Quiver(verts, (("0", INF, 2),), name="K2")
    if n == 1:
        return Quiver(verts, tuple(arms) + (("0", INF, 1),), name="A2~")
    if n == 2:
        return Quiver(verts, tuple(arms), name="A3~")
    return Quiver(verts, tuple(arms) + (("0", INF, 2),), has_relations=True, name=f"Q(2^{n})")


def standard_stability(Q: Quiver) -> tuple:
    """theta(d) = d_0 - d_inf."""
    return tuple(1 if v == "0" else -1 if v == INF else 0 for v in Q.vertices)


# -- named dimension vectors (full form, length n + 2) -------------------------

def delta0(n):
    return (1,) * (n + 2)


def e_vec(n, k):
    if not 1 <= k <= n:
        raise ValueError(f"arm {k} out of range for n={n}")
    return tuple(1 if i == k else 0 for i in range(n + 2))


def f_vec(n, k):
    return tuple(a - b for a, b in zip(delta0(n), e_vec(n, k)))


def to_full(n, d) -> tuple:
    """Accept a short regular form (length n+1) or a full vector (length n+2)."""
    d = tuple(int(x) for x in d)
    if len(d) == n + 1:
        return d + (d[0],)
    if len(d) == n + 2:
        return d
    raise ValueError(f"dimension vector {d} has wrong length for n={n}")


def to_short(n, d) -> tuple:
    d = to_full(n, d)
    if d[0] != d[-1]:
        raise ValueError(f"{d} is not regular")
    return d[:-1]


def is_regular(n, d) -> bool:
    d = to_full(n, d)
    return d[0] == d[-1]


def vadd(a, b):
    return tuple(x + y for x, y in zip(a, b))


def vsub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def vscale(k, a):
    return tuple(k * x for x in a)


# -- Euler forms and slope ------------------------------------------------------

def euler_form_quiver(Q: Quiver, d, e) -> int:
    """sum_i d_i e_i - sum_{i->j} d_i e_j."""
    d, e = Q.check_dim(d), Q.check_dim(e)
    val = sum(x * y for x, y in zip(d, e))
    m = Q.matrix
    for i, di in enumerate(d):
        if di:
            val -= di * sum(m[i][j] * ej for j, ej in enumerate(e))
    return val


def euler_form_canonical(n, d, e) -> int:
    """Symmetric Euler form of the regular category for weights (2, ..., 2)."""
    d, e = to_full(n, d), to_full(n, e)
    d0, e0 = d[0], e[0]
    return n * d0 * e0 + sum(d[i] * e[i] - d0 * e[i] - d[i] * e0 for i in range(1, n + 1))


def slope(theta, d) -> Fraction:
    total = sum(d)
    if total == 0:
        raise ValueError("slope of the zero dimension vector is undefined")
    return Fraction(sum(t * x for t, x in zip(theta, d)), total)


def virtual_shift(n, d) -> int:
    """<d,d> for the canonical family; equals sum_k (d_k - d_0)^2 on regular d."""
    return euler_form_canonical(n, d, d)


def norm(d) -> int:
    return sum(d)


def regular_vectors(n, max_norm):
    """All regular full vectors of Q(2^n) with total entry sum <= max_norm."""
    out = []
    for d0 in range(max_norm // 2 + 1):
        budget = max_norm - 2 * d0

        def arms(k, left):
            if k == 0:
                yield ()
                return
            for a in range(left + 1):
                for rest in arms(k - 1, left - a):
                    yield (a,) + rest

        for rest in arms(n, budget):
            out.append((d0,) + rest + (d0,))
    out.sort(key=lambda v: (sum(v), v))
    return out
