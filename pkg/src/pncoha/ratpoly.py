"""Exact polynomials over Q in vertex-slot variables x[i,j].

A polynomial lives over an *ambient*: an ordered tuple of ``(vertex, count)``
pairs.  Vertex ``i`` contributes the slot variables ``x[i,1] .. x[i,count]``
and exponents are stored as flat tuples in that order.  Coefficients are
``int`` when integral and ``Fraction`` otherwise.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from functools import lru_cache
from itertools import permutations, product

from .errors import DimensionMismatchError, NotSymmetricError

Ambient = tuple  # tuple[tuple[str, int], ...]


def make_ambient(vertices, dims) -> Ambient:
    return tuple((str(v), int(c)) for v, c in zip(vertices, dims))


def _norm(c):
    if type(c) is int:
        return c
    c = Fraction(c)
    return c.numerator if c.denominator == 1 else c


def parse_rational(text) -> Fraction:
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    return Fraction(str(text).strip())


def format_rational(c) -> str:
    c = Fraction(c)
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


@lru_cache(maxsize=None)
def _offsets(ambient):
    out, pos = [], 0
    for _, c in ambient:
        out.append(pos)
        pos += c
    return tuple(out), pos


@lru_cache(maxsize=None)
def slot_labels(ambient):
    """Flat list of ``(vertex, slot)`` labels, slots counted from 1."""
    return tuple((v, j + 1) for v, c in ambient for j in range(c))


class RatPoly:
    """Sparse exact polynomial; treat instances as immutable."""

    __slots__ = ("ambient", "terms")

    def __init__(self, ambient, terms=None):
        ambient = tuple((str(v), int(c)) for v, c in ambient)
        nvars = _offsets(ambient)[1]
        clean = {}
        for exp, c in (terms or {}).items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != nvars or any(e < 0 for e in exp):
                raise ValueError(f"exponent {exp} does not fit ambient {ambient}")
            c = _norm(c)
            if c:
                s = clean.get(exp, 0) + c
                if s:
                    clean[exp] = s
                else:
                    clean.pop(exp, None)
        self.ambient = ambient
        self.terms = clean

    @classmethod
    def _raw(cls, ambient, terms):
        # trusted constructor: terms already clean
        obj = object.__new__(cls)
        obj.ambient = ambient
        obj.terms = terms
        return obj

    # -- constructors -------------------------------------------------------
    @classmethod
    def zero(cls, ambient):
        return cls(ambient)

    @classmethod
    def constant(cls, ambient, c):
        ambient = tuple((str(v), int(n)) for v, n in ambient)
        return cls(ambient, {(0,) * _offsets(ambient)[1]: c})

    @classmethod
    def one(cls, ambient):
        return cls.constant(ambient, 1)

    @classmethod
    def var(cls, ambient, vertex, slot=1, power=1):
        ambient = tuple((str(v), int(n)) for v, n in ambient)
        exp = [0] * _offsets(ambient)[1]
        exp[var_index(ambient, vertex, slot)] = power
        return cls(ambient, {tuple(exp): 1})

    # -- basic queries ------------------------------------------------------
    @property
    def nvars(self):
        return _offsets(self.ambient)[1]

    @property
    def dims(self):
        return tuple(c for _, c in self.ambient)

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    def degrees(self):
        return {sum(e) for e in self.terms}

    def total_degree(self):
        return max(self.degrees(), default=-1)

    def is_homogeneous(self):
        return len(self.degrees()) <= 1

    def coefficient(self, exp):
        return self.terms.get(tuple(exp), 0)

    def __eq__(self, other):
        if isinstance(other, RatPoly):
            return self.ambient == other.ambient and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return not self.terms
            return self.terms == {(0,) * self.nvars: other}
        return NotImplemented

    def __hash__(self):
        return hash((self.ambient, frozenset(self.terms.items())))

    def __repr__(self):
        return f"RatPoly({self.to_text()!r}, dim={dict(self.ambient)})"

    # -- arithmetic ---------------------------------------------------------
    def _check(self, other):
        if self.ambient != other.ambient:
            raise DimensionMismatchError(
                f"ambient {self.ambient} differs from {other.ambient}")

    def _result_cls(self, other):
        if isinstance(self, SymPoly) and isinstance(other, SymPoly):
            return SymPoly
        return RatPoly

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = RatPoly.constant(self.ambient, other)
        if not isinstance(other, RatPoly):
            return NotImplemented
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = _norm(s)
            else:
                del out[e]
        return self._result_cls(other)._raw(self.ambient, out)

    __radd__ = __add__

    def __neg__(self):
        return type(self)._raw(self.ambient, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        c = _norm(c)
        if not c:
            return type(self)._raw(self.ambient, {})
        return type(self)._raw(self.ambient, {e: _norm(v * c) for e, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, RatPoly):
            return NotImplemented
        self._check(other)
        out = {}
        get = out.get
        items = list(other.terms.items())
        for e1, c1 in self.terms.items():
            for e2, c2 in items:
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = get(e, 0) + c1 * c2
        out = {e: _norm(c) for e, c in out.items() if c}
        return self._result_cls(other)._raw(self.ambient, out)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k):
        if k < 0:
            raise ValueError("negative power")
        result = type(self).one(self.ambient)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- structure ----------------------------------------------------------
    def permute(self, perm):
        """Move the variable at flat position ``p`` to position ``perm[p]``."""
        out = {}
        n = self.nvars
        for e, c in self.terms.items():
            ne = [0] * n
            for p, a in enumerate(e):
                ne[perm[p]] = a
            out[tuple(ne)] = c
        return RatPoly._raw(self.ambient, out)

    def is_symmetric(self):
        """Invariant under every adjacent slot transposition at each vertex."""
        offs, _ = _offsets(self.ambient)
        for (_, c), off in zip(self.ambient, offs):
            for j in range(c - 1):
                a, b = off + j, off + j + 1
                for e, v in self.terms.items():
                    if e[a] == e[b]:
                        continue
                    s = list(e)
                    s[a], s[b] = s[b], s[a]
                    if self.terms.get(tuple(s)) != v:
                        return False
        return True

    def embed(self, ambient):
        """Re-home into a larger ambient: same variables, missing ones unused.

        Every vertex of ``self`` must appear in ``ambient`` with at least as
        many slots.
        """
        ambient = tuple((str(v), int(c)) for v, c in ambient)
        target = dict(ambient)
        toffs, tn = _offsets(ambient)
        tpos = {v: off for (v, _), off in zip(ambient, toffs)}
        mapping = []
        for v, c in self.ambient:
            if c and target.get(v, 0) < c:
                raise DimensionMismatchError(f"vertex {v!r} has too few slots in {ambient}")
            for j in range(c):
                mapping.append(tpos[v] + j)
        out = {}
        for e, cf in self.terms.items():
            ne = [0] * tn
            for p, a in enumerate(e):
                if a:
                    ne[mapping[p]] = a
            out[tuple(ne)] = cf
        return type(self)._raw(ambient, out)

    def sorted_terms(self):
        """Terms in graded lexicographic order, largest first."""
        return sorted(self.terms.items(), key=lambda t: (sum(t[0]), t[0]), reverse=True)

    # -- serialization ------------------------------------------------------
    def to_text(self):
        if not self.terms:
            return "0"
        labels = slot_labels(self.ambient)
        parts = []
        for e, c in self.sorted_terms():
            mono = " ".join(
                f"x[{labels[p][0]},{labels[p][1]}]" + (f"^{a}" if a > 1 else "")
                for p, a in enumerate(e) if a)
            sign = "-" if c < 0 else "+"
            mag = abs(Fraction(c))
            if not mono:
                body = format_rational(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{format_rational(mag)} * {mono}"
            parts.append((sign, body))
        first_sign, first = parts[0]
        text = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def to_json(self):
        labels = slot_labels(self.ambient)
        return {
            "dim": {v: c for v, c in self.ambient},
            "terms": [
                {"exp": {f"{labels[p][0]},{labels[p][1]}": a for p, a in enumerate(e) if a},
                 "coeff": format_rational(c)}
                for e, c in self.sorted_terms()
            ],
        }

    @classmethod
    def from_json(cls, data):
        if isinstance(data, str):
            data = json.loads(data)
        ambient = tuple((str(v), int(c)) for v, c in data["dim"].items())
        terms = {}
        n = _offsets(ambient)[1]
        for term in data["terms"]:
            exp = [0] * n
            for key, a in term.get("exp", {}).items():
                v, j = key.rsplit(",", 1)
                exp[var_index(ambient, v.strip(), int(j))] += int(a)
            e = tuple(exp)
            terms[e] = terms.get(e, 0) + parse_rational(term["coeff"])
        return cls(ambient, terms)


class SymPoly(RatPoly):
    """A RatPoly invariant under slot permutations at every vertex."""

    __slots__ = ()

    @classmethod
    def of(cls, p: RatPoly) -> "SymPoly":
        if not p.is_symmetric():
            raise NotSymmetricError(f"not slot-symmetric: {p.to_text()}")
        return cls._raw(p.ambient, dict(p.terms))


def var_index(ambient, vertex, slot):
    offs, _ = _offsets(ambient)
    for (v, c), off in zip(ambient, offs):
        if v == str(vertex):
            if not 1 <= slot <= c:
                raise DimensionMismatchError(f"slot {slot} out of range at vertex {v!r}")
            return off + slot - 1
    raise DimensionMismatchError(f"unknown vertex {vertex!r}")


def poly_arith(a: RatPoly, b: RatPoly, op: str) -> RatPoly:
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


# -- text parsing -------------------------------------------------------------

_VAR = re.compile(r"x\[\s*([^,\]\s]+)\s*,\s*(\d+)\s*\](?:\^(\d+))?")
_NUM = re.compile(r"\d+(?:/\d+)?")


def parse_poly(text: str, ambient) -> RatPoly:
    """Parse the canonical text form (e.g. ``"2 * x[0,1]^2 x[inf,1] - 1/3"``)."""
    ambient = tuple((str(v), int(c)) for v, c in ambient)
    n = _offsets(ambient)[1]
    s = text.replace(" ", "")
    if s in ("", "0"):
        return RatPoly(ambient)
    terms = {}
    pos = 0
    while pos < len(s):
        sign = 1
        while pos < len(s) and s[pos] in "+-":
            if s[pos] == "-":
                sign = -sign
            pos += 1
        end = pos
        while end < len(s) and s[end] not in "+-":
            end += 1
        body = s[pos:end]
        pos = end
        if not body:
            raise ValueError(f"empty term in {text!r}")
        coeff = Fraction(sign)
        exp = [0] * n
        rest = body
        while rest:
            if rest[0] == "*":
                rest = rest[1:]
                continue
            m = _VAR.match(rest)
            if m:
                exp[var_index(ambient, m.group(1), int(m.group(2)))] += int(m.group(3) or 1)
                rest = rest[m.end():]
                continue
            m = _NUM.match(rest)
            if m:
                coeff *= Fraction(m.group(0))
                rest = rest[m.end():]
                continue
            raise ValueError(f"cannot parse term {body!r}")
        e = tuple(exp)
        terms[e] = terms.get(e, 0) + coeff
    return RatPoly(ambient, terms)


# -- exact division by linear factors -----------------------------------------

def div_linear(p: RatPoly, b: int, a: int) -> tuple:
    """Divide by ``x_b - x_a``; returns ``(quotient, remainder_terms)``.

    Synthetic division in the variable ``x_b``.  The remainder is returned as
    a dict so callers can insist it vanishes.
    """
    groups = {}
    top = 0
    for e, c in p.terms.items():
        k = e[b]
        if k:
            e = e[:b] + (0,) + e[b + 1:]
        groups.setdefault(k, {})[e] = c
        top = max(top, k)
    quot = {}
    carry = {}
    for k in range(top, 0, -1):
        cur = dict(groups.get(k, {}))
        for e, c in carry.items():
            ne = e[:a] + (e[a] + 1,) + e[a + 1:]
            s = cur.get(ne, 0) + c
            if s:
                cur[ne] = s
            else:
                cur.pop(ne, None)
        for e, c in cur.items():
            quot[e[:b] + (k - 1,) + e[b + 1:]] = c
        carry = cur
    rem = dict(groups.get(0, {}))
    for e, c in carry.items():
        ne = e[:a] + (e[a] + 1,) + e[a + 1:]
        s = rem.get(ne, 0) + c
        if s:
            rem[ne] = s
        else:
            rem.pop(ne, None)
    return RatPoly._raw(p.ambient, quot), rem


# -- symmetrization and symmetric bases ---------------------------------------

def _distinct_perms(block):
    if len(block) <= 1:
        return [tuple(block)]
    return sorted(set(permutations(block)))


def _orbit(exp, ambient):
    offs, _ = _offsets(ambient)
    blocks = [exp[off:off + c] for (_, c), off in zip(ambient, offs)]
    choices = [_distinct_perms(b) for b in blocks]
    return [sum(parts, ()) for parts in product(*choices)]


def symmetrize(p: RatPoly) -> SymPoly:
    """Average over the product of symmetric groups acting on the slots.

    For a monomial with orbit O the group average is (1/|O|) * sum(O).
    """
    out = {}
    for e, c in p.terms.items():
        orb = _orbit(e, p.ambient)
        w = Fraction(c) / len(orb)
        for o in orb:
            out[o] = out.get(o, 0) + w
    return SymPoly(p.ambient, out) if out else SymPoly._raw(p.ambient, {})


def partitions(m, max_parts, max_part=None):
    """Partitions of ``m`` with at most ``max_parts`` parts, reverse lex order."""
    if max_part is None:
        max_part = m
    if m == 0:
        yield ()
        return
    if max_parts == 0:
        return
    for first in range(min(m, max_part), 0, -1):
        for rest in partitions(m - first, max_parts - 1, first):
            yield (first,) + rest


def _compositions(total, k):
    if k == 0:
        if total == 0:
            yield ()
        return
    for a in range(total + 1):
        for rest in _compositions(total - a, k - 1):
            yield (a,) + rest


@lru_cache(maxsize=None)
def sym_basis_keys(ambient, polydeg):
    """Partition tuples indexing the monomial symmetric basis in one degree.

    Sorted in decreasing lexicographic order of the partition tuples.
    """
    ambient = tuple(ambient)
    counts = [c for _, c in ambient]
    if polydeg < 0:
        return ()
    keys = []
    for comp in _compositions(polydeg, len(counts)):
        if any(a and not c for a, c in zip(comp, counts)):
            continue
        for parts in product(*(list(partitions(a, c)) for a, c in zip(comp, counts))):
            keys.append(parts)
    keys.sort(reverse=True)
    return tuple(keys)


def key_exponent(key, ambient):
    """Dominant exponent tuple of the basis element indexed by ``key``."""
    exp = []
    for lam, (_, c) in zip(key, ambient):
        exp.extend(lam + (0,) * (c - len(lam)))
    return tuple(exp)


@lru_cache(maxsize=None)
def _basis_poly(ambient, key):
    e = key_exponent(key, ambient)
    return SymPoly._raw(ambient, {o: 1 for o in _orbit(e, ambient)})


def monomial_sym_basis(ambient, polydeg):
    """Products over vertices of monomial symmetric polynomials m_lambda."""
    ambient = tuple((str(v), int(c)) for v, c in ambient)
    return [_basis_poly(ambient, k) for k in sym_basis_keys(ambient, polydeg)]


def basis_element(ambient, key):
    return _basis_poly(tuple(ambient), tuple(tuple(k) for k in key))


def sym_coordinates(p: RatPoly, keys) -> list:
    """Coordinates of a symmetric polynomial in the m_lambda basis given by keys.

    Reads off the dominant monomial coefficients; ``p`` is assumed symmetric
    and homogeneous of the matching degree.
    """
    get = p.terms.get
    return [get(e, 0) for e in _key_exponents(tuple(keys), p.ambient)]


@lru_cache(maxsize=4096)
def _key_exponents(keys, ambient):
    return tuple(key_exponent(k, ambient) for k in keys)


def from_coordinates(ambient, keys, coords) -> SymPoly:
    out = {}
    for k, c in zip(keys, coords):
        if c:
            for o in _orbit(key_exponent(k, ambient), ambient):
                out[o] = c
    return SymPoly._raw(tuple(ambient), out)


# -- exact row reduction -------------------------------------------------------

class Echelon:
    """Incrementally maintained reduced row-echelon basis over Q.

    Rows are sparse dicts ``column -> value``; each stored row has a leading 1
    at its pivot and zeros in every other pivot column.
    """

    def __init__(self, ncols):
        self.ncols = ncols
        self.rows = {}

    @property
    def rank(self):
        return len(self.rows)

    @property
    def pivots(self):
        return tuple(sorted(self.rows))

    def reduce(self, vec):
        v = {c: x for c, x in vec.items() if x}
        for p in [c for c in v if c in self.rows]:
            f = v.get(p)
            if not f:
                continue
            for c, x in self.rows[p].items():
                s = v.get(c, 0) - f * x
                if s:
                    v[c] = s
                else:
                    v.pop(c, None)
        return v

    def add(self, vec):
        """Insert a row; returns True when it increased the rank."""
        v = self.reduce(vec)
        if not v:
            return False
        p = min(v)
        lead = Fraction(v[p])
        v = {c: _norm(x / lead) for c, x in v.items()}
        for q, row in self.rows.items():
            f = row.get(p)
            if f:
                for c, x in v.items():
                    s = row.get(c, 0) - f * x
                    if s:
                        row[c] = _norm(s)
                    else:
                        row.pop(c, None)
        self.rows[p] = v
        return True

    def dense_rows(self):
        return [[self.rows[p].get(c, 0) for c in range(self.ncols)] for p in self.pivots]


def row_reduce(rows):
    """Reduced row-echelon form of a list of equal-length rows over Q.

    Returns ``(basis_rows, pivot_columns, rank)``.
    """
    rows = [list(r) for r in rows]
    if not rows:
        return [], (), 0
    n = len(rows[0])
    if any(len(r) != n for r in rows):
        raise DimensionMismatchError("rows of unequal length")
    ech = Echelon(n)
    for r in rows:
        ech.add({c: Fraction(x) for c, x in enumerate(r) if x})
    return ech.dense_rows(), ech.pivots, ech.rank
