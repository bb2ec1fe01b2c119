"""Command-line interface: ``pncoha <group> <command> [flags]``.

Exit codes: 0 success, 1 a mathematical check failed, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction

from . import pn, series, sstquot
from .errors import ShuffleConsistencyError, ArmIndexError, UnsupportedQuiverError, SeriesError, DimensionMismatchError
from .quiver import (build_canonical_quiver, delta0, e_vec, euler_form_canonical,
                     euler_form_quiver, f_vec, regular_vectors, to_full, vadd, vscale)
from .ratpoly import RatPoly, format_rational
from .shuffle import shuffle_product


class UsageError(Exception):
    pass


class CheckFailed(Exception):
    def __init__(self, report):
        super().__init__(report)
        self.report = report


# -- argument parsing helpers ------------------------------------------------------

_NAMED = re.compile(r"^(\d*)\s*(delta0|d0|e|f)(\d*)$")


def parse_dim(n, text) -> tuple:
    """``1,1,1`` (short or full) or sums of names such as ``delta0+e1`` or ``2delta0``."""
    text = text.strip()
    if re.fullmatch(r"[\d,\s]+", text):
        return to_full(n, [int(x) for x in text.split(",") if x.strip()])
    total = (0,) * (n + 2)
    for part in text.split("+"):
        m = _NAMED.match(part.strip())
        if not m:
            raise UsageError(f"cannot read dimension vector {text!r}")
        mult = int(m.group(1) or 1)
        name, arm = m.group(2), m.group(3)
        if name in ("delta0", "d0"):
            vec = delta0(n)
        else:
            if not arm:
                raise UsageError(f"{name} needs an arm number in {text!r}")
            k = int(arm)
            if not 1 <= k <= n:
                raise ArmIndexError(f"arm {k} does not exist for n={n}")
            vec = e_vec(n, k) if name == "e" else f_vec(n, k)
        total = vadd(total, vscale(mult, vec))
    return total


def parse_bidegree(n, text):
    """``v,<dimension>`` e.g. ``2,delta0`` or ``4,1,1,1``."""
    head, _, rest = text.partition(",")
    if not rest:
        raise UsageError("bidegree is 'degree,dimension'")
    return int(head), parse_dim(n, rest)


def parse_quiver_flag(text):
    m = re.fullmatch(r"n=(\d+)", text.strip())
    if m:
        return int(m.group(1)), build_canonical_quiver(int(m.group(1)))
    raise UsageError("--quiver expects n=<int>")


def load_json_arg(text):
    if text.startswith("@"):
        with open(text[1:]) as fh:
            return json.load(fh)
    return json.loads(text)


def dim_str(d):
    return ",".join(str(x) for x in d)


# -- output ---------------------------------------------------------------------------

def emit(args, rows, header, extra=None):
    out = sys.stdout
    if args.format == "json":
        payload = {"columns": header, "rows": rows}
        if extra:
            payload.update(extra)
        out.write(json.dumps(payload, indent=2, sort_keys=True, default=_json_default) + "\n")
    else:
        out.write("\t".join(header) + "\n")
        for r in rows:
            out.write("\t".join(_cell(x) for x in r) + "\n")
        if extra:
            for k in sorted(extra):
                out.write(f"# {k}: {_cell(extra[k])}\n")


def _json_default(x):
    if isinstance(x, Fraction):
        return format_rational(x)
    raise TypeError(f"cannot serialize {type(x).__name__}")


def _cell(x):
    if isinstance(x, (list, tuple)):
        return dim_str(x)
    if isinstance(x, Fraction):
        return format_rational(x)
    if isinstance(x, dict):
        return json.dumps(x, sort_keys=True)
    return str(x)


# -- commands --------------------------------------------------------------------------

def cmd_quiver_euler(args):
    Q = build_canonical_quiver(args.n)
    d, e = parse_dim(args.n, args.d), parse_dim(args.n, args.e)
    rows = [["canonical", euler_form_canonical(args.n, d, e)]]
    if not Q.has_relations:
        rows.insert(0, ["quiver", euler_form_quiver(Q, d, e)])
    emit(args, rows, ["form", "value"], {"d": list(d), "e": list(e), "n": args.n})


def cmd_coha_mul(args):
    n, Q = parse_quiver_flag(args.quiver)
    lhs = RatPoly.from_json(load_json_arg(args.lhs))
    rhs = RatPoly.from_json(load_json_arg(args.rhs))
    prod = shuffle_product(Q, lhs, rhs)
    extra = {}
    if args.reduce:
        if Q.has_relations:
            raise UnsupportedQuiverError("quotient needs n <= 2")
        cls = sstquot.canonical(n).reduce(prod) if prod else None
        extra["class"] = cls.to_json() if cls is not None else None
    if args.format == "json":
        payload = {"product": prod.to_json(), "text": prod.to_text()}
        payload.update(extra)
        sys.stdout.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    else:
        sys.stdout.write(prod.to_text() + "\n")
        sys.stdout.write(json.dumps(prod.to_json(), sort_keys=True) + "\n")
        if args.reduce:
            rep = extra["class"]["representative"] if extra["class"] else None
            text = RatPoly.from_json(rep).to_text() if rep else "0"
            sys.stdout.write(f"class\t{text}\n")


def cmd_coha_dims(args):
    d = parse_dim(args.n, args.d)
    shift = euler_form_quiver(sstquot.canonical(args.n).Q, d, d)
    rows = []
    for c in range(args.max_cohdeg + 1):
        rows.append([c, c + shift, sstquot.quot_dim(args.n, d, c)])
    emit(args, rows, ["cohdeg", "virtual", "dim"], {"d": list(d), "n": args.n})


def cmd_coha_generators(args):
    table = sstquot.generators(args.n, args.max_index)
    rows = []
    for name, cls in table.items():
        rows.append([name, list(cls.d), cls.virtual_degree, cls.rep.to_text()])
    rows.sort(key=lambda r: (r[0][0], r[2], r[0]))
    emit(args, rows, ["generator", "d", "virtual", "representative"], {"n": args.n})


def _relation_rows(n, max_index, max_virtual):
    rows, failures = [], []
    for inst, ok in sstquot.relation_suite(n, max_virtual=max_virtual, max_index=max_index):
        rows.append([inst.rel, inst.variant, inst.k, inst.l, inst.i, inst.j, inst.degree,
                     "ok" if ok else "FAIL"])
        if not ok:
            failures.append(f"{inst.label()}: {inst.element} != 0")
    return rows, failures


def cmd_coha_check_relations(args):
    rows, failures = _relation_rows(args.n, args.max_index, args.max_virtual)
    emit(args, rows, ["rel", "variant", "k", "l", "i", "j", "virtual", "status"],
         {"instances": len(rows), "failures": len(failures)})
    if failures:
        raise CheckFailed("\n".join(failures))


def cmd_pn_normal_form(args):
    x = pn.PnElement.parse(args.n, args.word)
    nf = pn.rewrite_to_pbw(x, args.strategy)
    if args.format == "json":
        payload = {"input": str(x), "normal_form": str(nf),
                   "terms": [{"word": pn.word_str(w), "coeff": format_rational(c)}
                             for w, c in nf.sorted_terms()]}
        sys.stdout.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    else:
        sys.stdout.write(str(nf) + "\n")


def cmd_pn_dims(args):
    if args.bidegree:
        v, d = parse_bidegree(args.n, args.bidegree)
        emit(args, [[list(d), v, pn.pn_graded_dim(args.n, d, v)]], ["d", "virtual", "dim"])
        return
    vecs = [parse_dim(args.n, args.d)] if args.d else [
        d for d in regular_vectors(args.n, args.max_d) if any(d)]
    rows = []
    for d in vecs:
        for v in range(args.max_cohdeg + 1):
            k = pn.pn_graded_dim(args.n, d, v)
            if k or args.d:
                rows.append([list(d), v, k])
    emit(args, rows, ["d", "virtual", "dim"], {"n": args.n})


def cmd_series_poincare(args):
    S = series.coha_poincare_series(args.n, args.max_d, args.max_q)
    rows = []
    for (d, k2), c in S.items():
        v = k2 // 2
        rows.append([list(d), v, series.signed_dim(S, args.n, d, v)])
    emit(args, rows, ["d", "virtual", "dim"], {"n": args.n})


def cmd_series_dt(args):
    S = series.coha_poincare_series(args.n, args.max_d, args.max_q)
    L = series.plethystic_log(S)
    expected = series.dt_data(args.n, args.max_d, args.max_q)
    rows = [[list(d), Fraction(k2, 2), c] for (d, k2), c in L.items()]
    emit(args, rows, ["d", "q", "coeff"], {"n": args.n, "matches_dt_data": L == expected})
    if L != expected:
        raise CheckFailed("plethystic log of the Poincare series differs from the DT data")


def cmd_verify(args):
    n = args.n
    failures = []
    lines = []
    if n <= 2:
        rows, bad = _relation_rows(n, args.max_index, args.max_virtual)
        failures += bad
        lines.append(f"relations: {len(rows) - len(bad)}/{len(rows)} instances hold")
    S = series.coha_poincare_series(n, args.max_d, args.max_cohdeg)
    checked = 0
    for d in regular_vectors(n, args.max_d):
        for v in range(args.max_cohdeg + 1):
            a = pn.pn_graded_dim(n, d, v)
            b = series.signed_dim(S, n, d, v)
            c = sstquot.quot_dim(n, d, v, virtual=True) if n <= 2 else a
            checked += 1
            if not a == b == c:
                failures.append(f"dimension mismatch at d={dim_str(d)} v={v}: "
                                f"quot={c} pbw={a} series={b}")
    lines.append(f"dimensions: {checked} bidegrees compared")
    rep = pn.confluence_probe(n, args.samples, args.seed)
    for w, a, b in rep.mismatches:
        failures.append(f"confluence: {pn.word_str(w)} -> {a} vs {b}")
    lines.append(f"confluence: {rep.samples} words, {len(rep.mismatches)} mismatches")
    if args.format == "json":
        sys.stdout.write(json.dumps({"n": n, "summary": lines, "failures": failures,
                                     "ok": not failures}, indent=2) + "\n")
    else:
        for line in lines:
            sys.stdout.write(line + "\n")
    if failures:
        raise CheckFailed("\n".join(failures))
    if args.format != "json":
        sys.stdout.write("all relations hold\n" if n <= 2 else "all checks pass\n")


# -- parser ------------------------------------------------------------------------------

def build_parser():
    top = argparse.ArgumentParser(add_help=False)
    top.add_argument("--format", choices=["tsv", "json"], default="tsv")
    top.add_argument("--seed", type=int, default=0)
    # same flags after the subcommand, without clobbering values given before it
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["tsv", "json"], default=argparse.SUPPRESS)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)

    p = argparse.ArgumentParser(prog="pncoha", parents=[top],
                                description="CoHA of P^1(2^n): shuffle algebra, quotients, P_n, series")
    groups = p.add_subparsers(dest="group", required=True)

    def sub(parent, name, func, help_):
        sp = parent.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(func=func)
        return sp

    q = groups.add_parser("quiver").add_subparsers(dest="cmd", required=True)
    sp = sub(q, "euler", cmd_quiver_euler, "Euler forms of two dimension vectors")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--d", required=True)
    sp.add_argument("--e", required=True)

    c = groups.add_parser("coha").add_subparsers(dest="cmd", required=True)
    sp = sub(c, "mul", cmd_coha_mul, "shuffle product of two JSON polynomials")
    sp.add_argument("--quiver", required=True, help="n=<int>")
    sp.add_argument("--lhs", required=True, help="JSON text or @file")
    sp.add_argument("--rhs", required=True, help="JSON text or @file")
    sp.add_argument("--reduce", action="store_true", help="also reduce into the semistable quotient")
    sp = sub(c, "dims", cmd_coha_dims, "graded dimensions of the semistable quotient")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--d", required=True)
    sp.add_argument("--max-cohdeg", type=int, default=10)
    sp = sub(c, "check-relations", cmd_coha_check_relations, "evaluate P_n relations in the CoHA")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--max-index", type=int, default=2)
    sp.add_argument("--max-virtual", type=int, default=None)
    sp = sub(c, "generators", cmd_coha_generators, "list the generator classes")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--max-index", type=int, default=2)

    pp = groups.add_parser("pn").add_subparsers(dest="cmd", required=True)
    sp = sub(pp, "normal-form", cmd_pn_normal_form, "PBW normal form of a word or sum")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--word", required=True)
    sp.add_argument("--strategy", choices=["left", "right"], default="left")
    sp = sub(pp, "dims", cmd_pn_dims, "PBW graded dimensions")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--bidegree")
    sp.add_argument("--d")
    sp.add_argument("--max-cohdeg", type=int, default=10, help="top virtual degree")
    sp.add_argument("--max-d", type=int, default=4)

    s = groups.add_parser("series").add_subparsers(dest="cmd", required=True)
    sp = sub(s, "poincare", cmd_series_poincare, "Poincare series coefficients")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--max-q", type=int, default=12)
    sp.add_argument("--max-d", type=int, default=6)
    sp = sub(s, "dt", cmd_series_dt, "plethystic log of the Poincare series")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--max-q", type=int, default=12)
    sp.add_argument("--max-d", type=int, default=6)

    sp = groups.add_parser("verify", parents=[common], help="relations, dimension match, confluence")
    sp.set_defaults(func=cmd_verify)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--max-index", type=int, default=3)
    sp.add_argument("--max-virtual", type=int, default=None)
    sp.add_argument("--max-d", type=int, default=6)
    sp.add_argument("--max-cohdeg", type=int, default=10)
    sp.add_argument("--samples", type=int, default=200)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        args.func(args)
    except CheckFailed as exc:
        sys.stderr.write("FAILED\n" + exc.report + "\n")
        return 1
    except ShuffleConsistencyError as exc:
        sys.stderr.write(f"FAILED\ninternal consistency: {exc}\n")
        return 1
    except (UsageError, ArmIndexError, UnsupportedQuiverError, DimensionMismatchError,
            SeriesError, ValueError, KeyError, json.JSONDecodeError, OSError) as exc:
        sys.stderr.write(f"pncoha: error: {exc}\n")
        return 2
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
