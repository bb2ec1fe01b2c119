"""Truncated q,t-series with plethystic exponential and logarithm.

A series is a finite map ``(d, k2) -> coefficient`` where ``d`` is a dimension
vector and ``k2`` is twice the exponent of q.  Everything beyond the
truncation (total size of d, top q exponent) is dropped on construction, so
products and plethystic operations are exact within the window.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb

from sympy import mobius

from .errors import SeriesError
from .quiver import delta0, e_vec, f_vec, to_full, vadd


class QtSeries:
    __slots__ = ("max_d", "max_q2", "coeffs", "length")

    def __init__(self, coeffs=None, max_d=6, max_q=12, length=None):
        self.max_d = max_d
        self.max_q2 = int(round(2 * Fraction(max_q)))
        clean = {}
        for (d, k2), c in (coeffs or {}).items():
            d = tuple(d)
            if sum(d) > max_d or k2 > self.max_q2 or not c:
                continue
            clean[(d, k2)] = clean.get((d, k2), 0) + Fraction(c)
        self.coeffs = {k: c for k, c in clean.items() if c}
        lengths = {len(d) for d, _ in self.coeffs}
        if len(lengths) > 1 or (length is not None and lengths and lengths != {length}):
            raise SeriesError("dimension vectors of different lengths")
        if length is None and lengths:
            length = lengths.pop()
        self.length = length

    @property
    def max_q(self):
        return Fraction(self.max_q2, 2)

    def _like(self, coeffs, other=None):
        md, mq, ln = self.max_d, self.max_q2, self.length
        if other is not None:
            md, mq = min(md, other.max_d), min(mq, other.max_q2)
            ln = ln if ln is not None else other.length
        return QtSeries(coeffs, md, Fraction(mq, 2), ln)

    @classmethod
    def one(cls, length, max_d=6, max_q=12):
        return cls({((0,) * length, 0): 1}, max_d, max_q, length)

    @classmethod
    def monomial(cls, d, q_exp, coeff=1, max_d=6, max_q=12):
        return cls({(tuple(d), int(2 * Fraction(q_exp))): coeff}, max_d, max_q)

    def coefficient(self, d, q_exp):
        return self.coeffs.get((tuple(d), int(2 * Fraction(q_exp))), 0)

    def __add__(self, other):
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out.get(k, 0) + c
        return self._like(out, other)

    def __neg__(self):
        return self._like({k: -c for k, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return self._like({k: c * x for k, x in self.coeffs.items()})

    def __mul__(self, other):
        if not isinstance(other, QtSeries):
            return self.scale(other)
        md, mq = min(self.max_d, other.max_d), min(self.max_q2, other.max_q2)
        out = {}
        for (d1, a), c1 in self.coeffs.items():
            for (d2, b), c2 in other.coeffs.items():
                if sum(d1) + sum(d2) > md or a + b > mq:
                    continue
                key = (vadd(d1, d2), a + b)
                out[key] = out.get(key, 0) + c1 * c2
        return self._like(out, other)

    def __eq__(self, other):
        return isinstance(other, QtSeries) and self.coeffs == other.coeffs

    def truncate(self, max_d=None, max_q=None):
        return QtSeries(self.coeffs, self.max_d if max_d is None else max_d,
                        self.max_q if max_q is None else max_q, self.length)

    def support(self):
        return sorted({d for d, _ in self.coeffs})

    def dim_zero_part(self):
        return {k: c for k, c in self.coeffs.items() if not any(k[0])}

    def items(self):
        return sorted(self.coeffs.items(), key=lambda t: (sum(t[0][0]), t[0][0], t[0][1]))

    def to_json(self):
        return {"max_d": self.max_d, "max_q": str(self.max_q), "length": self.length,
                "terms": [{"d": list(d), "q2": k2, "coeff": str(c)} for (d, k2), c in self.items()]}

    @classmethod
    def from_json(cls, data):
        coeffs = {(tuple(t["d"]), int(t["q2"])): Fraction(t["coeff"]) for t in data["terms"]}
        return cls(coeffs, int(data["max_d"]), Fraction(data["max_q"]), data.get("length"))

    def __repr__(self):
        return f"QtSeries({len(self.coeffs)} terms, |d|<={self.max_d}, q<={self.max_q})"


def _power_binomial(X: QtSeries, a: int, unit: QtSeries) -> QtSeries:
    """(1 - X)^(-a) for a monomial X, summed up to the truncation."""
    (d, k2), c = next(iter(X.coeffs.items()))
    if c != 1:
        raise SeriesError("expected a monic monomial")
    out = {}
    m = 0
    while m * sum(d) <= X.max_d and m * k2 <= X.max_q2:
        coef = comb(a + m - 1, m) if a > 0 else (-1) ** m * comb(-a, m)
        if coef:
            out[(tuple(m * x for x in d), m * k2)] = coef
        if a < 0 and m >= -a:
            break
        m += 1
        if k2 < 0 and m > 10 ** 4:
            raise SeriesError("negative q exponents do not truncate")
    return unit._like(out, X)


def plethystic_exp(F: QtSeries) -> QtSeries:
    """Sym(F) = prod over (d, k) of (1 - q^k t^d)^(-a_{d,k})."""
    if F.dim_zero_part():
        raise SeriesError("plethystic_exp needs a series without d = 0 terms")
    length = F.length if F.length is not None else 1
    result = QtSeries.one(length, F.max_d, F.max_q)
    for (d, k2), a in F.items():
        if a.denominator != 1:
            raise SeriesError(f"non-integer coefficient {a} at {d}, q^{Fraction(k2, 2)}")
        X = QtSeries({(d, k2): 1}, F.max_d, F.max_q)
        result = result * _power_binomial(X, int(a), result)
    return result


def psi(F: QtSeries, r: int) -> QtSeries:
    """Adams operation: q^k t^d -> q^(rk) t^(rd)."""
    return F._like({(tuple(r * x for x in d), r * k2): c for (d, k2), c in F.coeffs.items()})


def plethystic_log(S: QtSeries) -> QtSeries:
    """Inverse of plethystic_exp: sum_r mu(r)/r psi_r(log S)."""
    zero = S.dim_zero_part()
    length = S.length if S.length is not None else 1
    if zero != {((0,) * length, 0): 1}:
        raise SeriesError("plethystic_log needs constant term exactly 1")
    X = S - QtSeries.one(length, S.max_d, S.max_q)
    log = S._like({})
    power = QtSeries.one(length, S.max_d, S.max_q)
    for m in range(1, S.max_d + 1):
        power = power * X
        if not power.coeffs:
            break
        log = log + power.scale(Fraction((-1) ** (m + 1), m))
    out = S._like({})
    for r in range(1, S.max_d + 1):
        mu = int(mobius(r))
        if mu:
            out = out + psi(log, r).scale(Fraction(mu, r))
    return out


def dt_data(n, max_d=6, max_q=12) -> QtSeries:
    """(-q)/(1-q^2) at each e_k and f_k, (1+q^2)/(1-q^2) at delta0."""
    coeffs = {}
    top = int(max_q)
    for k in range(1, n + 1):
        for dim in (e_vec(n, k), f_vec(n, k)):
            for m in range(1, top + 1, 2):
                coeffs[(dim, 2 * m)] = -1
    dz = delta0(n)
    coeffs[(dz, 0)] = 1
    for m in range(2, top + 1, 2):
        coeffs[(dz, 2 * m)] = 2
    return QtSeries(coeffs, max_d, max_q, n + 2)


def coha_poincare_series(n, max_d=6, max_q=12) -> QtSeries:
    """Poincare series of the semistable CoHA of P^1(2^n): Sym of the DT data."""
    S = plethystic_exp(dt_data(n, max_d, max_q))
    if not series_integral(S):
        raise SeriesError("half-integer q exponent in a family with symmetric Euler form")
    return S


def signed_dim(S: QtSeries, n, d, v) -> int:
    """Graded dimension in virtual degree v read off the series: (-1)^v * coefficient."""
    c = S.coefficient(to_full(n, d), v)
    val = (-1) ** v * c
    if val.denominator != 1 or val < 0:
        raise SeriesError(f"coefficient {c} at {d}, q^{v} is not a signed dimension")
    return int(val)


def series_integral(S: QtSeries) -> bool:
    """All q exponents are integers (doubled exponents even)."""
    return all(k2 % 2 == 0 for _, k2 in S.coeffs)
