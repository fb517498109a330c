"""Experiment runners.  Each returns a plain-dict report with a ``verdict``.

Convergence is read off truncations: a limit is "reached" on a window when
the first degree of disagreement with the limit value moves to the cap.
"""

import hashlib
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from functools import lru_cache, partial

from .. import __version__
from ..grassloc import (
    BundleData,
    Geometric,
    PreconditionError,
    chi0_ct,
    chi_loc,
    gap_cm,
    lemma_conditions,
    theorem1_E,
    theorem1_lhs,
    theorem1_rhs,
    wz_context,
    z_context,
)
from ..kernels import Context
from ..macdonald import agreement_degree, finite_norm_lhs, finite_norm_rhs, nsa_context, nsa_rhs
from ..partitions import Partition
from .parse import parse_E, parse_kernel, parse_symfn, parse_Z, poly_dict

CONVERGENCE_NOTE = (
    "limits are read on a truncation window: convergence means the first "
    "disagreement degree with the limit value moves up to the window cap"
)

KINDS = ("theorem1", "norm-ns", "norm-nsa", "chi-gap", "chi", "selftest")


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    kind: str
    n: int = 2
    mu: str = ""
    kernel: str = "poly: 1-z"
    f: str = "1"
    m_from: int = 0
    m_to: int = 4
    m_step: int = 1
    zdeg: int = 16
    qtdeg: int = 8
    wdeg: int = 4
    Z: str = "k=3"
    E: str = ""
    m: int = 0
    mode: str = "gap"
    timing: bool = False
    jobs: int = 1
    extra: dict = field(default_factory=dict)

    def validate(self):
        if self.kind not in KINDS:
            raise ConfigError(f"unknown experiment {self.kind!r}")
        if self.n < 1:
            raise ConfigError("n must be positive")
        for name in ("zdeg", "qtdeg", "wdeg"):
            if getattr(self, name) < 0:
                raise ConfigError(f"{name} must be nonnegative")
        if self.m_to < self.m_from or self.m_step < 1:
            raise ConfigError(f"empty m-range {self.m_from}..{self.m_to} step {self.m_step}")
        if self.jobs < 1:
            raise ConfigError("jobs must be positive")
        if self.kind in ("norm-ns", "norm-nsa"):
            mu = self.partition()
            if len(mu) > self.n:
                raise ConfigError(f"mu = {mu} has more than n = {self.n} parts")
        return self

    def partition(self):
        try:
            parts = [int(x) for x in self.mu.strip().strip("[]()").split(",") if x.strip()]
            return Partition(parts)
        except ValueError as exc:
            raise ConfigError(f"bad partition {self.mu!r}: {exc}") from None

    def m_range(self):
        return list(range(self.m_from, self.m_to + 1, self.m_step))

    def to_json(self):
        d = asdict(self)
        for key in ("timing", "jobs", "extra"):
            d.pop(key)
        return d


def digest(series):
    blob = json.dumps(series.to_json(), separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def _series_json(s):
    return {"digest": digest(s), "nterms": len(s.terms), "terms": s.to_json()}


def _base(cfg, caps):
    return {
        "experiment": cfg.kind,
        "version": __version__,
        "config": cfg.to_json(),
        "caps": caps,
        "note": CONVERGENCE_NOTE,
    }


def _timed(cell, cfg, m):
    t0 = time.perf_counter()
    row = cell(cfg, m)
    if cfg.timing:
        row["seconds"] = round(time.perf_counter() - t0, 4)
    return row


def _cells(cfg, cell):
    """Per-m rows, ordered by m; the cells run in worker processes when ``jobs > 1``."""
    ms = cfg.m_range()
    if cfg.jobs == 1 or len(ms) == 1:
        return [_timed(cell, cfg, m) for m in ms]
    with ProcessPoolExecutor(max_workers=min(cfg.jobs, len(ms))) as pool:
        return list(pool.map(partial(_timed, cell), [cfg] * len(ms), ms))


def first_disagreement(a, b, name="z"):
    """Least exponent of ``name`` where ``a`` and ``b`` differ, or ``None``."""
    d = a - b
    return d.valuation(name)


def _degree_row(deg, cap):
    if deg is None:
        return {"first_disagreement": cap, "saturated": True, "display": f">={cap}"}
    return {"first_disagreement": deg, "saturated": False, "display": str(deg)}


def _increasing_until_cap(rows):
    """Strict increase while below the cap; once saturated, stays saturated."""
    for a, b in zip(rows, rows[1:]):
        if a["saturated"]:
            if not b["saturated"]:
                return False
        elif not (b["saturated"] or b["first_disagreement"] > a["first_disagreement"]):
            return False
    return True


def _nondecreasing(rows):
    key = lambda r: (r["first_disagreement"], r["saturated"])  # noqa: E731
    return all(key(a) <= key(b) for a, b in zip(rows, rows[1:]))


# large-twist limit -----------------------------------------------------------------------

def _z_kernel(cfg):
    kind, M = parse_kernel(cfg.kernel)
    if kind == "hall":
        return {0: 1}
    if kind != "poly" or M.ctx.names not in ((), ("z",)):
        raise ConfigError("theorem1 needs a polynomial kernel in z ('hall' or 'poly: ...')")
    return {(e[0] if e else 0): int(c) for e, c in M.terms.items()}


@lru_cache(maxsize=8)
def _theorem1_setup(kernel, f, n, D):
    cfg = ExperimentConfig("theorem1", kernel=kernel)
    M = _z_kernel(cfg)
    ctx = z_context(D)
    try:
        rhs = theorem1_rhs(parse_symfn(f), M, n, ctx)
    except PreconditionError as exc:
        raise ConfigError(str(exc)) from None
    return M, ctx, rhs


def _theorem1_cell(cfg, m):
    M, ctx, rhs = _theorem1_setup(cfg.kernel, cfg.f, cfg.n, cfg.zdeg)
    lhs = theorem1_lhs(parse_symfn(cfg.f), M, cfg.n, m, ctx)
    row = {"m": m, "lhs_digest": digest(lhs)}
    row.update(_degree_row(first_disagreement(lhs, rhs), cfg.zdeg))
    return row



def run_theorem1(cfg):
    cfg.validate()
    n, D = cfg.n, cfg.zdeg
    M, ctx, rhs = _theorem1_setup(cfg.kernel, cfg.f, n, D)
    report = _base(cfg, {"zdeg": D, "z_floor": ctx.lo[0]})
    report["E"] = {str(a): c for a, c in sorted(theorem1_E(M, n).items())}
    report["rhs"] = _series_json(rhs)
    rows = _cells(cfg, _theorem1_cell)
    report["rows"] = rows
    report["nondecreasing"] = _nondecreasing(rows)
    report["increasing_until_cap"] = _increasing_until_cap(rows)
    report["reaches_cap"] = bool(rows) and rows[-1]["saturated"]
    report["verdict"] = "pass" if report["nondecreasing"] else "fail"
    return report


# norms ---------------------------------------------------------------------------------

def run_norm_ns(cfg):
    cfg.validate()
    mu, n, D = cfg.partition(), cfg.n, cfg.qtdeg
    ctx = Context(("q", "t"), weights=(1, 1), prec=D)
    t0 = time.perf_counter()
    lhs = finite_norm_lhs(mu, n, ctx, bound=max(mu.size, 6))
    rhs = finite_norm_rhs(mu, n, ctx)
    report = _base(cfg, {"qt_total_degree": D})
    report["mu"] = list(mu.as_tuple(n))
    report["lhs"] = _series_json(lhs)
    report["rhs"] = _series_json(rhs)
    report["equal"] = lhs == rhs
    report["agreement_degree"] = agreement_degree(lhs, rhs, D)
    if D < 4:
        report["warnings"] = [f"q,t cap {D} < 4: the comparison is weak"]
    if cfg.timing:
        report["seconds"] = round(time.perf_counter() - t0, 4)
    report["verdict"] = "pass" if report["equal"] else "fail"
    return report


def _nsa_cell(cfg, m):
    mu, n, D = cfg.partition(), cfg.n, cfg.qtdeg
    ctx = nsa_context(n, D)
    r = nsa_rhs(mu, n, m, ctx)
    ref = finite_norm_rhs(mu, n, ctx)
    return {"m": m, "digest": digest(r), "agreement_degree": agreement_degree(r, ref, D), "_series": r}



def run_norm_nsa(cfg):
    cfg.validate()
    mu, n, D = cfg.partition(), cfg.n, cfg.qtdeg
    ctx = nsa_context(n, D)
    ref = finite_norm_rhs(mu, n, ctx)
    report = _base(cfg, {"qt_total_degree": D, "weights": {"q": n, "t": 1}, "weighted_cap": ctx.prec})
    report["mu"] = list(mu.as_tuple(n))
    report["reference"] = digest(ref)
    rows = _cells(cfg, _nsa_cell)
    # agreement between consecutive m in the range
    for prev, row in zip(rows, rows[1:]):
        row["stabilization_degree"] = agreement_degree(row["_series"], prev["_series"], D)
    for row in rows:
        del row["_series"]
    report["rows"] = rows
    degs = [r["agreement_degree"] for r in rows]
    report["nondecreasing"] = all(a <= b for a, b in zip(degs, degs[1:]))
    report["increasing_until_cap"] = all(b > a or a == D for a, b in zip(degs, degs[1:]))
    report["verdict"] = "pass" if report["nondecreasing"] and report["increasing_until_cap"] else "fail"
    return report


# chi ------------------------------------------------------------------------------------

def _bundle(cfg, m):
    parts = parse_E(cfg.E)
    B = parts["B"]
    if isinstance(B, tuple):
        B = Geometric(B[1])
    return BundleData(parts["A"], B, parts["C"], m, parse_symfn(cfg.f))


def _Z(cfg):
    try:
        return parse_Z(cfg.Z)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _k(Z):
    return max(Z)


def _chi_ctx(cfg, data):
    if data.is_zero():
        return z_context(cfg.zdeg)
    return wz_context(cfg.wdeg, cfg.zdeg)


def run_chi(cfg):
    """Single evaluation of chi (``loc``), chi0 (``ct``) or their difference (``gap``)."""
    cfg.validate()
    Z = _Z(cfg)
    data = _bundle(cfg, cfg.m)
    ctx = _chi_ctx(cfg, data)
    report = _base(cfg, {"zdeg": cfg.zdeg, "wdeg": cfg.wdeg if "w" in ctx else None})
    if cfg.mode == "loc":
        report["chi"] = _series_json(chi_loc(data, Z, cfg.n, ctx))
    elif cfg.mode == "ct":
        report["chi0"] = _series_json(chi0_ct(data, Z, cfg.n, ctx))
    elif cfg.mode == "gap":
        g, lead = gap_cm(data, Z, cfg.n, ctx)
        report["gap"] = _series_json(g)
        report["leading"] = {str(i): v for i, v in lead.items()}
    else:
        raise ConfigError(f"unknown mode {cfg.mode!r}")
    report["verdict"] = "pass"
    return report


def _fit(points):
    """Exact least-squares line through ``[(m, e)]``; ``None`` with fewer than 2 points."""
    if len(points) < 2:
        return None
    k = len(points)
    sx = sum(m for m, _ in points)
    sy = sum(e for _, e in points)
    sxx = sum(m * m for m, _ in points)
    sxy = sum(m * e for m, e in points)
    den = k * sxx - sx * sx
    slope = Fraction(k * sxy - sx * sy, den)
    icpt = Fraction(sy, k) - slope * Fraction(sx, k)
    return {"slope": str(slope), "intercept": str(icpt)}


def growth_check(leads, k, step=1):
    """Check ``lead(m+step) - lead(m) >= k*step`` per w-power over consecutive ``m``.

    ``None`` (zero on the window) counts as larger than anything finite: a
    finite value after ``None`` is a failure, ``None`` after finite is fine.
    """
    out = {}
    ok_all = True
    ms = sorted(leads)
    powers = sorted({i for m in ms for i in leads[m]})
    for i in powers:
        seq = [(m, leads[m].get(i)) for m in ms]
        inc, ok = [], True
        for (m0, a), (m1, b) in zip(seq, seq[1:]):
            if m1 != m0 + step:
                continue
            if a is None and b is None:
                inc.append(None)
            elif a is None:
                inc.append("reappeared")
                ok = False
            elif b is None:
                inc.append("vanished")
            else:
                inc.append(b - a)
                ok = ok and (b - a >= k * step)
        fit = _fit([(m, e) for m, e in seq if e is not None])
        out[str(i)] = {"leading": [e for _, e in seq], "increments": inc, "ok": ok, "fit": fit}
        ok_all = ok_all and ok
    return ok_all, out


def _gap_cell(cfg, m):
    data = _bundle(cfg, m)
    g, lead = gap_cm(data, _Z(cfg), cfg.n, _chi_ctx(cfg, data))
    return {"m": m, "gap_digest": digest(g), "gap_is_zero": g.is_zero(),
            "leading": {str(i): v for i, v in lead.items()}}



def run_chi_gap(cfg):
    cfg.validate()
    Z = _Z(cfg)
    k = _k(Z)
    base = _bundle(cfg, 0)
    conds = lemma_conditions(base, Z)
    report = _base(cfg, {"zdeg": cfg.zdeg, "wdeg": cfg.wdeg})
    report["conditions"] = conds
    report["k"] = k
    if not conds["all"]:
        report["verdict"] = "precondition"
        return report
    rows = _cells(cfg, _gap_cell)
    leads = {r["m"]: {int(i): v for i, v in r["leading"].items()} for r in rows}
    ok, per_power = growth_check(leads, k, cfg.m_step)
    report["rows"] = rows
    report["growth"] = per_power
    report["verdict"] = "pass" if ok else "fail"
    return report


RUNNERS = {
    "theorem1": run_theorem1,
    "norm-ns": run_norm_ns,
    "norm-nsa": run_norm_nsa,
    "chi-gap": run_chi_gap,
    "chi": run_chi,
}


def run(cfg):
    if cfg.kind == "selftest":
        from .selftest import run_selftest

        return run_selftest(zdeg=cfg.zdeg)
    return RUNNERS[cfg.kind](cfg)


__all__ = [
    "ConfigError",
    "ExperimentConfig",
    "run",
    "run_theorem1",
    "run_norm_ns",
    "run_norm_nsa",
    "run_chi_gap",
    "run_chi",
    "growth_check",
    "first_disagreement",
    "digest",
    "poly_dict",
]
