"""Invariant suites for every module at desk scale.

``macdonald.a_coeff`` is looked up through the module on each call so a
corrupted formula is caught by the expansion oracle.
"""

import random
from fractions import Fraction

from .. import __version__, macdonald
from ..ctprod import hall_pairing, kernel_identity_sides
from ..grassloc import BundleData, chi0_ct, chi_loc, gap_cm, weight_space, z_context
from ..kernels import BACKEND, Context, PolyFrac, Series
from ..kernels import _pykernel
from ..partitions import Partition, dominance_leq, partitions_of, partitions_upto, zee
from ..plethysm import character, dualize, eps_ut, eval_hom, eval_hom_e, lambda_eval, omega_component
from ..symfun import SymFn
from .parse import parse_poly

SEED = 20240229


def _suite_kernels(zdeg, rng):
    ctx = Context(("z", "q"), lo=(-3, 0), hi=(zdeg, zdeg))
    out = []
    for _ in range(10):
        a = Series(ctx, {(rng.randint(-3, 3), rng.randint(0, 3)): rng.randint(-3, 3) for _ in range(5)})
        b = Series(ctx, {(rng.randint(-3, 3), rng.randint(0, 3)): rng.randint(-3, 3) for _ in range(5)})
        ref = _pykernel.mul_terms(a.terms, b.terms, ctx.lo, ctx.hi, ctx.weights, ctx.prec)
        out.append(("backend agrees with reference", (a * b).terms == ref))
        out.append(("multiplication commutes", a * b == b * a))
        unit = Series(ctx, {(0, 0): 1, (1, 0): rng.randint(-2, 2), (0, 1): rng.randint(-2, 2)})
        out.append(("unit inverse", unit * unit.invert() == Series.const(ctx, 1)))
    x = PolyFrac.var("q")
    out.append(("fraction arithmetic", (1 - x ** 2) / (1 - x) == 1 + x))
    return out


def _suite_partitions(zdeg, rng):
    out = []
    for k in range(1, 8):
        ps = partitions_of(k)
        out.append(("conjugation is an involution", all(p.conjugate().conjugate() == p for p in ps)))
        out.append(("conjugation reverses dominance",
                    all(dominance_leq(a, b) == dominance_leq(b.conjugate(), a.conjugate()) for a in ps for b in ps)))
        out.append(("sum of 1/z_lam is 1", sum(Fraction(1, zee(p)) for p in ps) == 1))
        out.append(("n(mu) via legs", all(p.n() == sum(p.leg(s) for s in p.cells()) for p in ps)))
    return out


def _suite_symfun(zdeg, rng):
    out = []
    for k in range(1, 6):
        for lam in partitions_of(k):
            for basis in ("m", "e", "h"):
                f = SymFn.basis_element(basis, lam)
                ok = all(f.to(b).to(basis) == f for b in ("m", "e", "h", "p"))
                out.append((f"{basis}{lam} round trip", ok))
    out.append(("e1^2 = m2 + 2 m11", SymFn.e(1) * SymFn.e(1) == SymFn.m(2) + SymFn.m(1, 1).scale(2)))
    return out


def _rand_char(rng, ctx, lo=-2, hi=3, size=3, nonneg_zero=True):
    terms = {}
    for _ in range(size):
        terms[(rng.randint(lo, hi),)] = rng.randint(-2, 2)
    if nonneg_zero and terms.get((0,), 0) < 0:
        terms[(0,)] = 0
    return character(ctx, {e: c for e, c in terms.items() if c})


def _suite_plethysm(zdeg, rng):
    ctx = Context(("z",), lo=(-16,), hi=(zdeg,))
    out = []
    for _ in range(12):
        A = _rand_char(rng, ctx, lo=1)
        B = _rand_char(rng, ctx, lo=1)
        la, lb = lambda_eval(A), lambda_eval(B)
        out.append(("lambda(A+B) = lambda(A) lambda(B)", lambda_eval(A + B) == la * lb))
        out.append(("lambda(A) lambda(-A) = 1", (la * lambda_eval(-A)).to_series(ctx) == Series.const(ctx, 1)))
        f = SymFn.e(2) + SymFn.h(1, 1).scale(3)
        g = SymFn.p(2) - SymFn.m(1)
        out.append(("eval_hom is multiplicative", eval_hom(f * g, A) == eval_hom(f, A) * eval_hom(g, A)))
        out.append(("eval_hom agrees with the lambda route", eval_hom(f, A) == eval_hom_e(f, A)))
        out.append(("dualize is an involution", dualize(dualize(A)) == A))
    A = character(ctx, {0: 1, 1: 1})
    B = character(ctx, {0: 1, 2: 1})
    for k in range(4):
        h = SymFn.h(k) if k else SymFn.one("h")
        out.append(("omega component pairs to h_k(AB)", eval_hom(omega_component(A, k), B) == eval_hom(h, A * B)))
    out.append(("eps(p1) = (1-u)/(1-t)", eps_ut(SymFn.p(1)) == (1 - PolyFrac.var("u")) / (1 - PolyFrac.var("t"))))
    return out


def _suite_ctprod(zdeg, rng):
    out = []
    cap = max(2, min(zdeg, 8))
    for text in ("1-z", "1+z", "1+z-z^2"):
        M = parse_poly(text).embed(Context(("z",), lo=(-64,), hi=(cap,)))
        for n in (2, 3):
            lhs, rhs = kernel_identity_sides(M, n)
            out.append((f"kernel identity M={text} n={n}", lhs == rhs))
    for k in range(1, 5):
        ps = partitions_of(k)
        for a in ps:
            for b in ps:
                v = hall_pairing(SymFn.p(*a), SymFn.p(*b))
                out.append(("Hall pairing of power sums", v == (zee(a) if a == b else 0)))
    return out


def _suite_macdonald(zdeg, rng):
    out = []
    for mu in partitions_upto(4):
        if not mu.size:
            continue
        out.append((f"Gram norm {mu}", macdonald.gram_norm(mu) == macdonald.norm_inf(mu)))
        out.append((f"eps formula {mu}", eps_ut(macdonald.macdonald_P(mu)) == macdonald.eps_formula(mu)))
    for k in range(1, 5):
        expansion = macdonald.omega_in_P(k)
        for mu in partitions_of(k):
            got = expansion.coeffs.get(mu, PolyFrac(0))
            out.append((f"a_coeff expansion oracle {mu}", macdonald.a_coeff(mu) == got))
    for mu, n in (((1,), 2), ((1, 1), 2), ((1,), 3)):
        out.append((f"Pieri shift {mu} n={n}", macdonald.pieri_en_check(Partition(mu), n, 1)))
    return out


def _suite_grassloc(zdeg, rng):
    out = []
    ctx = z_context(max(zdeg, 1))
    Z = weight_space(1)
    for m in range(0, min(zdeg, 4) + 1):
        d = BundleData(m=m)
        expect = Series(ctx, {(a,): 1 for a in range(m + 1)})
        out.append((f"chi(P^1, O({m}))", chi_loc(d, Z, 1, ctx) == expect == chi0_ct(d, Z, 1, ctx)))
    g, _ = gap_cm(BundleData(m=-2), Z, 1, ctx)
    out.append(("negative twist gap", g == Series(ctx, {(-1,): -1})))
    for m in range(3):
        d = BundleData(m=m, f=SymFn.e(1))
        out.append((f"chi = chi0 on Gr(2,4) m={m}", chi_loc(d, weight_space(3), 2, ctx) == chi0_ct(d, weight_space(3), 2, ctx)))
    return out


def _suite_limitlab(zdeg, rng):
    from .experiments import ExperimentConfig, run

    out = []
    for text in ("1 - z", "(1-t)*(1+q+q^2)", "z^-2 - 3*q*t"):
        s = parse_poly(text)
        out.append((f"parse round trip {text!r}", parse_poly(str(s), s.ctx.names) == s))
    cfg = ExperimentConfig("theorem1", n=1, kernel="poly: 1-z", zdeg=max(zdeg, 1), m_from=0, m_to=2)
    a, b = run(cfg), run(cfg)
    out.append(("reports are deterministic", a == b))
    out.append(("n=1 telescoping case", all(r["saturated"] for r in a["rows"])))
    return out


SUITES = {
    "kernels": _suite_kernels,
    "partitions": _suite_partitions,
    "symfun": _suite_symfun,
    "plethysm": _suite_plethysm,
    "ctprod": _suite_ctprod,
    "macdonald": _suite_macdonald,
    "grassloc": _suite_grassloc,
    "limitlab": _suite_limitlab,
}


def run_selftest(zdeg=8, suites=None):
    report = {"experiment": "selftest", "version": __version__, "backend": BACKEND,
              "caps": {"zdeg": zdeg}, "seed": SEED, "suites": {}}
    warnings = []
    if zdeg < 4:
        warnings.append(f"z cap {zdeg} < 4: series checks only see a few coefficients")
    ok_all = True
    for name in suites or SUITES:
        rng = random.Random(f"{SEED}:{name}")
        try:
            results = SUITES[name](zdeg, rng)
        except Exception as exc:  # a crash is a failure of that suite
            results = [(f"raised {type(exc).__name__}: {exc}", False)]
        failures = sorted({label for label, ok in results if not ok})
        report["suites"][name] = {"pass": not failures, "checks": len(results), "failures": failures}
        ok_all = ok_all and not failures
    report["warnings"] = warnings
    report["verdict"] = "pass" if ok_all else "fail"
    return report
