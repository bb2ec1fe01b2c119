"""The algebra P_n: generators, relations, PBW normal forms and dimensions.

Generators are ``Gen(kind, arm, i)`` with kind in g, h, e, f.  The index ``i``
is the position in the family, so ``Gen('g', 0, i)`` is g_{2i},
``Gen('h', 0, i)`` is h_{2i+2} and ``Gen('e', k, i)`` is e_{k,2i+1}.
Text syntax uses the subscript: ``g.0``, ``h.4``, ``e1.3``, ``f2.1``.
"""

from __future__ import annotations

import random
import re
from collections import namedtuple
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .errors import ArmIndexError, TerminationError
from .quiver import delta0, e_vec, f_vec, to_full, vadd


KIND_ORDER = {"g": 0, "h": 1, "e": 2, "f": 3}
ODD = ("e", "f")


class Gen(namedtuple("Gen", "kind arm i")):
    __slots__ = ()

    @property
    def degree(self):
        """Virtual cohomological degree."""
        if self.kind == "g":
            return 2 * self.i
        if self.kind == "h":
            return 2 * self.i + 2
        return 2 * self.i + 1

    @property
    def odd(self):
        return self.kind in ODD

    def dim(self, n):
        if self.kind in "gh":
            return delta0(n)
        return e_vec(n, self.arm) if self.kind == "e" else f_vec(n, self.arm)

    def sort_key(self):
        return (KIND_ORDER[self.kind], self.arm, -self.i)

    def __str__(self):
        if self.kind in "gh":
            return f"{self.kind}.{self.degree}"
        return f"{self.kind}{self.arm}.{self.degree}"


def g(i):
    return Gen("g", 0, i)


def h(i):
    return Gen("h", 0, i)


def e(k, i):
    return Gen("e", k, i)


def f(k, i):
    return Gen("f", k, i)


_TOKEN = re.compile(r"^([ghef])(\d*)\.?(\d+)$")


def parse_gen(token: str, n=None) -> Gen:
    """Parse ``e1.3`` / ``f2.1`` / ``g.2`` / ``g2`` / ``h.4``."""
    m = _TOKEN.match(token.strip())
    if not m:
        raise ValueError(f"bad generator token {token!r}")
    kind, arm, sub = m.group(1), m.group(2), int(m.group(3))
    if kind in "gh":
        if "." in token and arm:
            raise ValueError(f"{kind} takes no arm index: {token!r}")
        if "." not in token:
            sub = int(arm + m.group(3))
        if kind == "g":
            if sub % 2:
                raise ValueError(f"g has even subscripts: {token!r}")
            gen = g(sub // 2)
        else:
            if sub % 2 or sub < 2:
                raise ValueError(f"h has even subscripts >= 2: {token!r}")
            gen = h(sub // 2 - 1)
    else:
        if not arm or "." not in token:
            raise ValueError(f"{kind} needs an arm and an odd subscript: {token!r}")
        if sub % 2 == 0:
            raise ValueError(f"{kind} has odd subscripts: {token!r}")
        gen = Gen(kind, int(arm), (sub - 1) // 2)
    if n is not None:
        check_gen(n, gen)
    return gen


def check_gen(n, gen):
    if gen.kind in ODD and not 1 <= gen.arm <= n:
        raise ArmIndexError(f"{gen} refers to arm {gen.arm} but n={n}")
    if gen.i < 0:
        raise ValueError(f"negative index in {gen}")


def parse_word(text: str, n=None) -> tuple:
    text = text.strip()
    if not text or text == "1":
        return ()
    return tuple(parse_gen(t, n) for t in re.split(r"[\s*]+", text) if t)


def word_str(w) -> str:
    return " ".join(str(x) for x in w) if w else "1"


def word_dim(n, w):
    d = (0,) * (n + 2)
    for x in w:
        d = vadd(d, x.dim(n))
    return d


def word_degree(w):
    return sum(x.degree for x in w)


class PnElement:
    """A finite linear combination of words in the generators of P_n."""

    __slots__ = ("n", "terms")

    def __init__(self, n, terms=None):
        self.n = n
        clean = {}
        for w, c in (terms or {}).items():
            w = tuple(w)
            for x in w:
                check_gen(n, x)
            c = Fraction(c)
            if c:
                clean[w] = clean.get(w, 0) + c
        self.terms = {w: c for w, c in clean.items() if c}

    @classmethod
    def word(cls, n, w, c=1):
        return cls(n, {tuple(w): c})

    @classmethod
    def gen(cls, n, x):
        return cls(n, {(x,): 1})

    @classmethod
    def parse(cls, n, text):
        """Parse a sum like ``2 g.0 g.2 - 1/2 e1.1 f1.1``; bare words get coefficient 1."""
        terms = {}
        for sign, body in re.findall(r"([+-]?)\s*([^+-]+)", text.replace(" - ", " -").replace(" + ", " +")):
            body = body.strip()
            coef = Fraction(1)
            m = re.match(r"^(\d+(?:/\d+)?)\s*\*?\s*(.*)$", body)
            if m and not re.match(r"^[ghef]", body):
                coef = Fraction(m.group(1))
                body = m.group(2)
            if sign == "-":
                coef = -coef
            w = parse_word(body, n)
            terms[w] = terms.get(w, 0) + coef
        return cls(n, terms)

    def __add__(self, other):
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, 0) + c
        return PnElement(self.n, out)

    def scale(self, c):
        return PnElement(self.n, {w: x * c for w, x in self.terms.items()})

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, PnElement):
            return self.scale(other)
        out = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                out[w1 + w2] = out.get(w1 + w2, 0) + c1 * c2
        return PnElement(self.n, out)

    __rmul__ = scale

    def __eq__(self, other):
        return isinstance(other, PnElement) and self.n == other.n and self.terms == other.terms

    def __bool__(self):
        return bool(self.terms)

    def bidegrees(self):
        return {(word_dim(self.n, w), word_degree(w)) for w in self.terms}

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: (len(t[0]), [x.sort_key() for x in t[0]]))

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for w, c in self.sorted_terms():
            sign = "-" if c < 0 else "+"
            a = abs(c)
            body = word_str(w)
            parts.append((sign, body if a == 1 else f"{a} {body}"))
        s = parts[0][1] if parts[0][0] == "+" else "-" + parts[0][1]
        return s + "".join(f" {sg} {b}" for sg, b in parts[1:])

    __repr__ = __str__


# -- relations written as commutator formulas ------------------------------------
# Each helper returns [(coefficient, word), ...].

def comm_g_e(i, k, j):
    """[g_{2i}, e_{k,2j+1}]"""
    return [(1, (h(i + j - r - 1), e(k, r))) for r in range(j)]


def comm_g_f(i, k, j):
    """[g_{2i}, f_{k,2j+1}]"""
    if i > j:
        return [(-c, w) for c, w in comm_g_f(j, k, i)]
    return [(1, (f(k, j - 1 - r), h(r + i))) for r in range(j - i)]


def comm_g_h(i, j):
    """[g_{2i}, h_{2j+2}]"""
    if i > j:
        return [(-c, w) for c, w in comm_g_h(j, i)]
    return [(1, (h(j - 1 - r), h(r + i))) for r in range(j - i)]


def comm_g_g(i, j):
    """[g_{2i}, g_{2j}]"""
    if i > j:
        return [(-c, w) for c, w in comm_g_g(j, i)]
    return [(2, (g(j - 1 - r), h(r + i))) for r in range(j - i)]


def in_order(a: Gen, b: Gen) -> bool:
    ka, kb = a.sort_key(), b.sort_key()
    if ka == kb:
        return not a.odd
    return ka < kb


def rewrite_pair(a: Gen, b: Gen):
    """Replacement for the adjacent pair ``a b``; None when already ordered."""
    if in_order(a, b):
        return None
    if a == b:  # odd square
        return []
    swap = [(1, (b, a))]
    if b.kind == "g":
        if a.kind == "g":
            return swap + comm_g_g(a.i, b.i)
        if a.kind == "h":
            return swap + [(-c, w) for c, w in comm_g_h(b.i, a.i)]
        if a.kind == "e":
            return swap + [(-c, w) for c, w in comm_g_e(b.i, a.arm, a.i)]
        return swap + [(-c, w) for c, w in comm_g_f(b.i, a.arm, a.i)]
    if b.kind == "h":
        return swap
    # both odd from here on
    if a.arm != b.arm:
        return swap
    if a.kind == b.kind:
        return [(-1, (b, a))]
    # f_k e_k = -e_k f_k + h
    return [(-1, (b, a)), (1, (h(a.i + b.i),))]


def inversions(w) -> int:
    keys = [x.sort_key() for x in w]
    return sum(1 for p in range(len(w)) for q in range(p + 1, len(w)) if keys[p] > keys[q])


def measure(w):
    """Strictly decreases along every rewrite step (lexicographic)."""
    ng = sum(1 for x in w if x.kind == "g")
    nodd = sum(1 for x in w if x.odd)
    return (ng, nodd, inversions(w))


def _find_pair(w, strategy):
    idx = range(len(w) - 1) if strategy == "left" else range(len(w) - 2, -1, -1)
    for p in idx:
        rule = rewrite_pair(w[p], w[p + 1])
        if rule is not None:
            return p, rule
    return None


@lru_cache(maxsize=200000)
def _normal_word(w, strategy):
    found = _find_pair(w, strategy)
    if found is None:
        return ((w, Fraction(1)),)
    p, rule = found
    mw = measure(w)
    out = {}
    for c, rep in rule:
        nw = w[:p] + rep + w[p + 2:]
        if not measure(nw) < mw:
            raise TerminationError(f"rewrite did not decrease the measure: {word_str(w)} -> {word_str(nw)}")
        for v, x in _normal_word(nw, strategy):
            out[v] = out.get(v, 0) + c * x
    return tuple((v, x) for v, x in out.items() if x)


def rewrite_to_pbw(x: PnElement, strategy="left") -> PnElement:
    """Normal form in the ordered PBW basis."""
    if strategy not in ("left", "right"):
        raise ValueError("strategy is 'left' or 'right'")
    out = {}
    for w, c in x.terms.items():
        for v, y in _normal_word(w, strategy):
            out[v] = out.get(v, 0) + c * y
    return PnElement(x.n, out)


def is_pbw(w) -> bool:
    return all(in_order(w[p], w[p + 1]) for p in range(len(w) - 1))


# -- ordered words and dimensions -------------------------------------------------

def _multisets(count, budget, weight, distinct, top=None):
    """Descending index tuples of given length with sum of weights <= budget."""
    if count == 0:
        yield (), 0
        return
    if top is None:
        top = budget
    for i in range(top, -1, -1):
        wgt = weight(i)
        if wgt > budget:
            continue
        nxt = i - 1 if distinct else i
        if nxt < 0 and count > 1:
            continue
        for rest, used in _multisets(count - 1, budget - wgt, weight, distinct, nxt):
            yield (i,) + rest, used + wgt


def pbw_words(n, d, v):
    """All ordered PBW words of dimension d and virtual degree v."""
    d = to_full(n, d)
    if v < 0 or any(x < 0 for x in d):
        return []
    d0 = d[0]
    if d[-1] != d0:
        return []
    out = []
    for fs in _compositions_bounded(n, d0):
        nf = sum(fs)
        s = d0 - nf
        cs = []
        for k in range(1, n + 1):
            c = d[k] - s - (nf - fs[k - 1])
            if c < 0:
                break
            cs.append(c)
        else:
            odd = [("e", k, cs[k - 1], _odd_weight, True) for k in range(1, n + 1)]
            odd += [("f", k, fs[k - 1], _odd_weight, True) for k in range(1, n + 1)]
            for t in range(s + 1):
                layout = [("g", 0, t, lambda i: 2 * i, False),
                          ("h", 0, s - t, lambda i: 2 * i + 2, False)] + odd
                out.extend(_fill(layout, v))
    return out


def _odd_weight(i):
    return 2 * i + 1


def _compositions_bounded(n, total):
    def rec(k, left):
        if k == 0:
            yield ()
            return
        for a in range(left + 1):
            for rest in rec(k - 1, left - a):
                yield (a,) + rest
    return list(rec(n, total))


def _fill(layout, v):
    if not layout:
        if v == 0:
            yield ()
        return
    (kind, arm, count, weight, distinct), rest = layout[0], layout[1:]
    for idx, used in _multisets(count, v, weight, distinct):
        for tail in _fill(rest, v - used):
            yield tuple(Gen(kind, arm, i) for i in idx) + tail


def pn_graded_dim(n, d, v) -> int:
    """Number of ordered PBW words at (d, v)."""
    return len(pbw_words(n, d, v))


def sym_vspace_dim(n, d, v) -> int:
    """Graded dimension of Sym(V (x) Q[z]) at (d, v), by a generating product.

    Even generators at delta0 sit in degrees 0, 2, 4, ... (g) and 2, 4, ...
    (h); odd generators at e_k and f_k sit in degrees 1, 3, 5, ....
    """
    d = to_full(n, d)
    top = tuple(d)
    series = {((0,) * len(d), 0): 1}

    def fits(dim, deg):
        return deg <= v and all(a <= b for a, b in zip(dim, top))

    def times_factor(series, dim, deg, odd):
        out = dict(series)
        if odd:  # (1 + q^deg t^dim)
            for (dd, qq), c in series.items():
                nd, nq = vadd(dd, dim), qq + deg
                if fits(nd, nq):
                    out[(nd, nq)] = out.get((nd, nq), 0) + c
            return out
        # 1 / (1 - q^deg t^dim) = sum of powers
        layer = series
        while layer:
            nxt = {}
            for (dd, qq), c in layer.items():
                nd, nq = vadd(dd, dim), qq + deg
                if fits(nd, nq):
                    nxt[(nd, nq)] = c
                    out[(nd, nq)] = out.get((nd, nq), 0) + c
            layer = nxt
        return out

    dz = delta0(n)
    for m in range(v // 2 + 1):
        series = times_factor(series, dz, 2 * m, False)
        if 2 * m + 2 <= v:
            series = times_factor(series, dz, 2 * m + 2, False)
    for k in range(1, n + 1):
        for m in range((v + 1) // 2):
            series = times_factor(series, e_vec(n, k), 2 * m + 1, True)
            series = times_factor(series, f_vec(n, k), 2 * m + 1, True)
    return series.get((top, v), 0)


# -- evaluation in the CoHA ----------------------------------------------------------

def pn_to_coha(n, x: PnElement, ctx=None):
    """Evaluate an element of P_n inside the semistable CoHA (n <= 2)."""
    from .sstquot import canonical

    ctx = ctx or canonical(n)
    bideg = x.bidegrees()
    if len(bideg) > 1:
        raise ValueError("pn_to_coha evaluates bidegree-homogeneous elements")
    if not bideg:
        return ctx.zero((0,) * (n + 2))
    total = None
    for w, c in x.terms.items():
        term = _eval_word(ctx, w).scale(c)
        total = term if total is None else total + term
    return total


def _eval_word(ctx, w):
    cache = ctx.__dict__.setdefault("_word_cache", {})
    if w in cache:
        return cache[w]
    if not w:
        val = ctx.unit()
    elif len(w) == 1:
        x = w[0]
        val = ctx.generator(x.kind, x.arm, x.i)
    else:
        val = ctx.mul(_eval_word(ctx, w[:-1]), _eval_word(ctx, w[-1:]))
    cache[w] = val
    return val


# -- relation instances --------------------------------------------------------------

def _el(n, pairs):
    return PnElement(n, {w: c for c, w in _merge(pairs)})


def _merge(pairs):
    acc = {}
    for c, w in pairs:
        acc[w] = acc.get(w, 0) + c
    return [(c, w) for w, c in acc.items()]


def commutator(n, a, b, anti=False):
    s = 1 if anti else -1
    return _el(n, [(1, (a, b)), (s, (b, a))])


def relation_elements(n, rel, k=None, l=None, i=0, j=0, variant=None):
    """Instances of a defining relation as ``[(variant, LHS - RHS), ...]``."""
    rel = rel.upper()
    k = 1 if k is None else k
    l = (2 if k == 1 else 1) if l is None else l
    out = []

    def want(name):
        return variant is None or variant == name

    if rel == "R1":
        out.append(("ee", commutator(n, e(k, i), e(k, j), anti=True)))
    elif rel == "R2":
        out.append(("ff", commutator(n, f(k, i), f(k, j), anti=True)))
    elif rel == "R3":
        out.append(("ef", commutator(n, e(k, i), f(k, j), anti=True) - PnElement.gen(n, h(i + j))))
    elif rel == "R4":
        if k == l:
            raise ValueError("R4 needs two different arms")
        if want("ee"):
            out.append(("ee", commutator(n, e(k, i), e(l, j))))
        if want("ff"):
            out.append(("ff", commutator(n, f(k, i), f(l, j))))
        if want("ef"):
            out.append(("ef", commutator(n, e(k, i), f(l, j))))
    elif rel == "R5":
        if n and want("he"):
            out.append(("he", commutator(n, h(i), e(k, j))))
        if n and want("hf"):
            out.append(("hf", commutator(n, h(i), f(k, j))))
        if want("hh"):
            out.append(("hh", commutator(n, h(i), h(j))))
    elif rel == "R6":
        out.append(("ge", commutator(n, g(i), e(k, j)) - _el(n, comm_g_e(i, k, j))))
    elif rel == "R7":
        if want("anti"):
            out.append(("anti", commutator(n, g(i), f(k, j)) + commutator(n, g(j), f(k, i))))
        if want("sum") and i <= j:
            out.append(("sum", commutator(n, g(i), f(k, j)) - _el(n, comm_g_f(i, k, j))))
    elif rel == "R8":
        if want("anti"):
            out.append(("anti", commutator(n, g(i), h(j)) + commutator(n, g(j), h(i))))
        if want("sum") and i <= j:
            out.append(("sum", commutator(n, g(i), h(j)) - _el(n, comm_g_h(i, j))))
    elif rel == "R9":
        if i <= j:
            out.append(("gg", commutator(n, g(i), g(j)) - _el(n, comm_g_g(i, j))))
    else:
        raise ValueError(f"unknown relation {rel!r}")
    return out


@dataclass(frozen=True)
class RelationInstance:
    rel: str
    variant: str
    k: int
    l: int
    i: int
    j: int
    degree: int
    element: PnElement = field(compare=False, hash=False)

    def label(self):
        arms = f" k={self.k}" if self.k else ""
        arms += f" l={self.l}" if self.l else ""
        return f"{self.rel}/{self.variant}{arms} i={self.i} j={self.j} deg={self.degree}"


def relation_instances(n, max_virtual=None, max_index=None):
    """Relation instances bounded by virtual degree and/or by the indices i, j."""
    if max_virtual is None and max_index is None:
        raise ValueError("give max_virtual or max_index")
    out = []
    top = max_virtual // 2 + 1 if max_virtual is not None else max_index + 1
    if max_index is not None:
        top = min(top, max_index + 1)
    if max_virtual is None:
        max_virtual = 10 ** 9

    def add(rel, k, l, i, j, skip=()):
        for variant, el in relation_elements(n, rel, k=k or None, l=l or None, i=i, j=j):
            if variant in skip or not el.terms:
                continue
            deg = word_degree(next(iter(el.terms)))
            if deg <= max_virtual:
                out.append(RelationInstance(rel, variant, k, l, i, j, deg, el))

    for i in range(top):
        for j in range(top):
            for k in range(1, n + 1):
                if i <= j:
                    add("R1", k, 0, i, j)
                    add("R2", k, 0, i, j)
                add("R3", k, 0, i, j)
                add("R6", k, 0, i, j)
                add("R7", k, 0, i, j)
                add("R5", k, 0, i, j, skip=("hh",))
                for l in range(1, n + 1):
                    if l != k:
                        add("R4", k, l, i, j, skip=("ee", "ff") if k > l else ())
            if i < j:
                add("R5", 0, 0, i, j, skip=("he", "hf"))
            add("R8", 0, 0, i, j)
            add("R9", 0, 0, i, j)
    return out


# -- confluence probe -----------------------------------------------------------------

@dataclass
class ConfluenceReport:
    samples: int
    mismatches: list

    @property
    def ok(self):
        return not self.mismatches


def random_word(rng, n, length, max_index):
    kinds = ["g", "h"] + (["e", "f"] if n else [])
    out = []
    for _ in range(length):
        kind = rng.choice(kinds)
        arm = rng.randint(1, n) if kind in ODD else 0
        out.append(Gen(kind, arm, rng.randint(0, max_index)))
    return tuple(out)


def confluence_probe(n, samples=200, seed=0, max_len=5, max_index=3) -> ConfluenceReport:
    """Normalize random words with leftmost and rightmost strategies and compare."""
    rng = random.Random(seed)
    bad = []
    for _ in range(samples):
        w = random_word(rng, n, rng.randint(1, max_len), max_index)
        x = PnElement.word(n, w)
        a = rewrite_to_pbw(x, "left")
        b = rewrite_to_pbw(x, "right")
        if a != b:
            bad.append((w, a, b))
    return ConfluenceReport(samples, bad)
