"""Run configurations and report assembly for the command line.

Each run_* function takes a RunConfig and returns a Report whose rows carry
an anchor (a key of ANCHORS naming the identity checked), a grade and a
status.  Grades:

  theorem      a proved identity; a failure is a bug and fails the run
  sanity       an independent oracle comparison; a failure fails the run
  conjecture   a consequence of a conjecture; a failure is a finding
  exploratory  recorded only

Reports contain no timings or paths, so equal configurations give
byte-identical output.
"""

from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np
import sympy

from . import __version__

ANCHORS = {
    "presentation-ranks": "relative rank = 2g + #cusps - 1 and cuspidal rank = 2g",
    "hecke-sanity": "T_l preserves cuspidal homology and commutes with diamonds",
    "eisenstein-biconditional": "Eisenstein locus nonzero iff p divides B_{1,theta}",
    "eisenstein-quotient": "order of the Eisenstein quotient of the plus sector",
    "congruence-module": "congruence module cyclic, generated by the (0,1)-cusp class",
    "xi-table": "images of xi(u:v)^+ in the Eisenstein quotient",
    "distribution-relation": "U_t [tu:v] = sum_k [u + kQ : v] in relative homology",
    "diamond-identity": "xi(j:1) = -alpha^{-1} omega^2 kappa^{2-k}(j) xi(-j^{-1}:1) in the P quotient",
    "functional-equation": "L_p(alpha,k,chi,s) = -chi(-1) L_p(alpha,k,alpha chi^{-1} omega^{-2},k-s)",
    "star-comparison": "U_D of the specialized theta element against the Euler-factored star element",
    "star-comparison-quotient": "the same comparison in the P quotient",
    "level-comparison": "L_p against U_M L_{p,M} with the Euler factors of N/M",
    "qp-functional-equation": "L_p^{Qp} = -chi(-1) (phi(Q)/phi(N)) U_M L_{p,M}",
    "star-vanishing-odd": "star L-values vanish for odd alpha",
    "units-euler-factor": "alpha = eta_M raised to prod (1 - chi(l)) over l dividing Np but not M",
    "units-change-of-modulus": "phi(N) alpha = phi(Q) prod (1 - chi(l)) alpha^Q",
    "units-alpha-vanishing": "alpha^{Q,psi} = 0 when f_psi does not divide Q",
    "units-dual-pushforward": "dual images push forward compatibly between levels",
    "varpi-well-defined": "varpi kills every Manin relation",
    "varpi-equivariance": "varpi <j> = sigma_j^{-1} varpi",
    "varpi-eisenstein": "varpi(T_l x) = (1 + l sigma_l^{-1}) varpi(x) on plus cuspidal homology",
    "shadow-antisymmetry": "xi(u:v) + xi(v:u) = 0 in the Eisenstein quotient",
    "shadow-diagonal": "xi(u:u) = 0 in the Eisenstein quotient",
    "shadow-sign": "xi(u:v) = xi(u:-v) = xi(-u:-v) in the Eisenstein quotient",
    "pairing-perfect": "the twisted pairing on the ordinary cuspidal part is perfect",
    "pairing-self-adjoint": "Hecke operators are self-adjoint for the twisted pairing",
    "pairing-level-compatibility": "the twisted pairings at consecutive levels agree after pushforward",
}

FAILING_GRADES = ("theorem", "sanity")

# the pairing at the next level up is only built while that level stays small
LEVEL_COMPATIBILITY_BOUND = 50


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    p: int = 5
    N: int = 1
    r: int = 1
    m: int | None = None
    theta: str = "all"
    grid_size: int = 10
    seed: int = 0
    jobs: int = 1
    fmt: str = "json"

    def validate(self) -> "RunConfig":
        if self.p < 3 or not sympy.isprime(self.p):
            raise ConfigError("p must be an odd prime")
        if self.N < 1 or self.N % self.p == 0:
            raise ConfigError("N must be a positive integer prime to p")
        if self.r < 1:
            raise ConfigError("r must be at least 1")
        if self.N * self.p**self.r < 5:
            raise ConfigError("the level N p^r must be at least 5")
        if self.m is not None and self.m < 1:
            raise ConfigError("precision must be positive")
        if self.fmt not in ("json", "csv"):
            raise ConfigError("format must be json or csv")
        if self.grid_size < 0 or self.jobs < 1:
            raise ConfigError("grid size must be nonnegative and jobs positive")
        return self

    def precision(self, default: int) -> int:
        return self.m if self.m is not None else default

    def public(self) -> dict:
        d = asdict(self)
        d.pop("jobs")
        d.pop("fmt")
        return d


@dataclass
class Report:
    subcommand: str
    config: dict
    rows: list = field(default_factory=list)

    def add(self, check: str, anchor: str, grade: str, status: str, **details):
        if anchor not in ANCHORS:
            raise KeyError(f"unknown anchor {anchor}")
        row = {"check": check, "anchor": anchor, "grade": grade, "status": status}
        row.update({k: _plain(v) for k, v in details.items()})
        self.rows.append(row)

    def add_check(self, res, anchor: str, grade: str = "theorem", nonzero: int | None = None, **details):
        """From a CheckResult-like object (name, cases, failures, skipped).
        If nonzero is given and is 0, a passing check is reported as vacuous."""
        status = "fail" if res.failures else ("pass" if res.cases else "vacuous")
        extra = {"cases": res.cases, "failures": [str(f) for f in res.failures[:20]],
                 "failure_count": len(res.failures)}
        if nonzero is not None:
            extra["nonzero"] = nonzero
            if nonzero == 0 and status == "pass":
                status = "vacuous"
        if getattr(res, "skipped", None):
            extra["skipped"] = len(res.skipped)
        extra.update(details)
        self.add(res.name, anchor, grade, status, **extra)

    @property
    def failed(self) -> bool:
        return any(r["status"] == "fail" and r["grade"] in FAILING_GRADES for r in self.rows)

    @property
    def findings(self) -> list:
        return [r for r in self.rows if r["status"] == "fail" and r["grade"] == "conjecture"]

    def to_dict(self) -> dict:
        return {"subcommand": self.subcommand, "version": __version__, "config": self.config,
                "status": "fail" if self.failed else "pass", "rows": self.rows}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    def to_csv(self) -> str:
        keys = ["subcommand", "check", "anchor", "grade", "status", "details"]
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
        w.writeheader()
        for r in self.rows:
            base = {k: r[k] for k in ("check", "anchor", "grade", "status")}
            rest = {k: v for k, v in r.items() if k not in base}
            w.writerow({"subcommand": self.subcommand, **base,
                        "details": json.dumps(rest, sort_keys=True)})
        return buf.getvalue()

    def render(self, fmt: str) -> str:
        return self.to_json() if fmt == "json" else self.to_csv()

    def summary_lines(self) -> list[str]:
        return [f"{r['status'].upper():8s} {r['grade']:11s} {r['check']}" for r in self.rows]


def _plain(v):
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, np.ndarray):
        return v.tolist()
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _plain(x) for k, x in v.items()}
    return v


def _map(fn, items, jobs: int):
    items = list(items)
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(fn, items))


def _thetas(cfg: RunConfig):
    from .hecke import odd_primitive_characters, parse_theta
    if cfg.theta == "all":
        return odd_primitive_characters(cfg.N, cfg.p)
    return [parse_theta(cfg.theta, cfg.N, cfg.p)]


# ---------------------------------------------------------------------------
# subcommands


def run_space(cfg: RunConfig, cache=None) -> Report:
    from . import linalg as la
    from .cache import CacheKey
    from .manin import build_symbol_space, count_cusps, genus_x1
    K = cfg.precision(3)
    rep = Report("space", cfg.public())
    sp = build_symbol_space(cfg.N, cfg.p, cfg.r, K, validate=False)
    info = sp.describe()
    g, c = genus_x1(sp.M), count_cusps(sp.M)
    ok = info["rank"] == 2 * g + c - 1 and info["cuspidal_rank"] == 2 * g
    rep.add("ranks", "presentation-ranks", "sanity", "pass" if ok else "fail",
            level=sp.M, rank=info["rank"], cuspidal_rank=info["cuspidal_rank"], genus=g, cusps=c)
    q = sp.q
    bad = []
    for l in [l for l in sympy.primerange(2, 12) if sp.M % l][:2]:
        if cache is not None:
            T = cache.get_or_compute(CacheKey(cfg.p, cfg.N, cfg.r, K, f"T{l}"), lambda l=l: sp.T(l))
        else:
            T = sp.T(l)
        C = sp.cuspidal
        if np.any(la.matmul(sp.delta, la.matmul(T, C, q), q)):
            bad.append(f"T{l} cuspidal")
        D = sp.diamond(2 if sp.M % 2 else 3)
        if np.any((la.matmul(T, D, q) - la.matmul(D, T, q)) % q):
            bad.append(f"T{l} diamond")
    rep.add("hecke_operators", "hecke-sanity", "sanity", "fail" if bad else "pass", failures=bad)
    return rep


def _eis_cell(args):
    N, p, r, K, label = args
    from .hecke import check_eisenstein_nontriviality, congruence_module, eisenstein_quotient, parse_theta
    from .manin import build_symbol_space
    theta = parse_theta(label, N, p)
    w = check_eisenstein_nontriviality(N, p, theta, K, r)
    out = {"theta": w.theta, "bernoulli_valuation": w.bernoulli_valuation,
           "locus_rank": w.locus_rank, "agree": w.agree}
    if w.locus_nonzero:
        sp = build_symbol_space(N, p, r, K)
        Q = eisenstein_quotient(sp, theta)
        cm = congruence_module(sp, theta)
        out.update({"quotient_order": f"{p}^{Q.length}", "congruence_length": cm.length,
                    "congruence_invariants": cm.invariants, "cyclic": cm.cyclic,
                    "generated_by_zero_one": cm.generated_by_zero_one})
    return out


def run_eisenstein(cfg: RunConfig) -> Report:
    from .hecke import theta_label
    K = cfg.precision(3)
    rep = Report("eisenstein", cfg.public())
    cells = [(cfg.N, cfg.p, cfg.r, K, theta_label(t, cfg.p)) for t in _thetas(cfg)]
    for out in _map(_eis_cell, cells, cfg.jobs):
        rep.add(f"biconditional[{out['theta']}]", "eisenstein-biconditional", "theorem",
                "pass" if out["agree"] else "fail", bernoulli_valuation=out["bernoulli_valuation"],
                locus_rank=out["locus_rank"])
        if "quotient_order" in out:
            rep.add(f"quotient[{out['theta']}]", "eisenstein-quotient", "exploratory", "pass",
                    order=out["quotient_order"])
            ok = out["cyclic"] and out["generated_by_zero_one"]
            rep.add(f"congruence_module[{out['theta']}]", "congruence-module", "theorem",
                    "pass" if ok else "fail", length=out["congruence_length"],
                    invariants=out["congruence_invariants"])
    return rep


def run_xi_table(cfg: RunConfig) -> Report:
    from math import gcd
    from .hecke import eisenstein_quotient, theta_label
    from .manin import build_symbol_space
    K = cfg.precision(3)
    rep = Report("xi-table", cfg.public())
    sp = build_symbol_space(cfg.N, cfg.p, cfg.r, K)
    L, Np = sp.M, cfg.N * cfg.p
    for theta in _thetas(cfg):
        Q = eisenstein_quotient(sp, theta)
        label = theta_label(theta, cfg.p)
        table = {}
        if Q.length:
            for u in range(1, L):
                for v in range(1, L):
                    if gcd(gcd(u, v), Np) == 1:
                        table[f"{u}:{v}"] = Q.xi_bar(u, v).tolist()
        rep.add(f"xi_table[{label}]", "xi-table", "exploratory", "pass" if Q.length else "vacuous",
                order=f"{cfg.p}^{Q.length}", invariants=Q.quotient.invariants, table=table)
    return rep


def run_mazur_tate(cfg: RunConfig) -> Report:
    from .mazur_tate import (nontrivial_grid, star_vanishes_for_odd_alpha, theta_context,
                             verify_compare_identities, verify_diamond_identity, verify_distribution,
                             verify_functional_equation)
    from .padic import all_characters, ring_for
    p, N, r = cfg.p, cfg.N, cfg.r
    K = cfg.precision(6 if p <= 7 else 4)
    rep = Report("mazur-tate", cfg.public())
    rep.add_check(verify_distribution(N, p, r, K=2), "distribution-relation")
    ctx = theta_context(N, p, r, K)
    R = ring_for(p, K, ctx.level)
    evens = [a for a in all_characters(ctx.level) if a.is_even()]
    if r == 1:
        for a in evens[: max(1, cfg.grid_size // 5)]:
            res = verify_diamond_identity(ctx, a, 2, R, relative=True)
            rep.add_check(res, "diamond-identity", nonzero=res.nonzero, alpha=list(a.exps))
    ks = (2, 2 + p, 2 + 2 * p)
    ss = (1, 1 + p, 1 + 2 * p)
    rep.config["W_dim"] = ctx.W.dim
    if ctx.W.dim:
        grid = nontrivial_grid(ctx, 2 * cfg.grid_size, seed=cfg.seed, ks=ks, ss=ss + (2, 3))
        res = verify_functional_equation(ctx, grid)
        rep.add_check(res, "functional-equation", nonzero=res.nonzero)
        grid = nontrivial_grid(ctx, cfg.grid_size, seed=cfg.seed + 1, ks=ks, ss=ss)
        anchors = ["star-comparison", "star-comparison-quotient", "level-comparison", "qp-functional-equation"]
        for res, anchor in zip(verify_compare_identities(ctx, grid), anchors):
            rep.add_check(res, anchor, nonzero=res.nonzero)
        odd = [a for a in all_characters(ctx.level) if not a.is_even()][:2]
        bad = [list(a.exps) for a in odd if not star_vanishes_for_odd_alpha(ctx, a, 2, a, 1)]
        rep.add("star_vanishing", "star-vanishing-odd", "theorem", "fail" if bad else "pass",
                cases=len(odd), failures=bad)
    else:
        for anchor in ("functional-equation", "star-comparison", "star-comparison-quotient",
                       "level-comparison", "qp-functional-equation"):
            rep.add(anchor.replace("-", "_"), anchor, "theorem", "vacuous", cases=0,
                    reason="the ordinary cuspidal part is zero")
    return rep


def run_units(cfg: RunConfig) -> Report:
    from .padic import all_characters
    from .units import alpha_vanishes, pushforward_compatibility, verify_unit_identities
    p, N, r = cfg.p, cfg.N, cfg.r
    m = cfg.precision(3)
    rep = Report("units", cfg.public())
    for res, anchor in zip(verify_unit_identities(N, p, r, m), ["units-euler-factor", "units-change-of-modulus"]):
        rep.add_check(res, anchor)
    cases, bad = 0, []
    for Q in sympy.divisors(N):
        for psi in all_characters(N):
            if not psi.is_even() or Q % psi.conductor() == 0:
                continue
            cases += 1
            if not alpha_vanishes(N, p, r, m, Q, psi, 2):
                bad.append([Q, list(psi.exps)])
    rep.add("alpha_vanishing", "units-alpha-vanishing", "theorem",
            "fail" if bad else ("pass" if cases else "vacuous"), cases=cases, failures=bad)
    ok = all(pushforward_compatibility(N, p, r, r + 1, m, seed) for seed in range(3))
    rep.add("dual_pushforward", "units-dual-pushforward", "theorem", "pass" if ok else "fail",
            levels=[N * p**r, N * p**(r + 1)], cases=3)
    return rep


def run_varpi(cfg: RunConfig) -> Report:
    from .manin import build_symbol_space
    from .padic import unit_group
    from .relations import equivariance_defect, pairing_module, verify_eisenstein_property, verify_varpi_well_defined
    p, N, r = cfg.p, cfg.N, cfg.r
    m = cfg.precision(2)
    rep = Report("varpi", cfg.public())
    sp = build_symbol_space(N, p, r, m, validate=False)
    mod = pairing_module(N, p, r, m)
    rep.config["module_invariants"] = mod.invariants
    for res in verify_varpi_well_defined(sp, mod):
        rep.add_check(res, "varpi-well-defined")
    gens = [int(g) for g in unit_group(sp.M)[0]]
    ok = all(equivariance_defect(sp, mod, j) for j in gens)
    rep.add("equivariance", "varpi-equivariance", "theorem", "pass" if ok else "fail", generators=gens)
    Np = N * p
    for l in (2, 3):
        if Np % l:
            res = verify_eisenstein_property(sp, mod, l)
            rep.add_check(res, "varpi-eisenstein", "theorem", nonzero=res.info["nonzero_images"])
    extra = next(l for l in sympy.primerange(5, 100) if Np % l)
    res = verify_eisenstein_property(sp, mod, extra)
    rep.add_check(res, "varpi-eisenstein", "exploratory", nonzero=res.info["nonzero_images"])
    return rep


def run_shadow(cfg: RunConfig) -> Report:
    from .hecke import eisenstein_quotient
    from .manin import build_symbol_space
    from .relations import conjecture_shadow_check
    K = cfg.precision(3)
    rep = Report("shadow", cfg.public())
    sp = build_symbol_space(cfg.N, cfg.p, cfg.r, K)
    for theta in _thetas(cfg):
        rows = conjecture_shadow_check(eisenstein_quotient(sp, theta))
        summary = [x for x in rows if "cases" in x]
        witnesses = [x for x in rows if "cases" not in x]
        for s in summary:
            wit = [w["uv"] for w in witnesses if w["relation"] == s["relation"]][:20]
            rep.add(f"{s['relation']}[{s['sector']}]", f"shadow-{s['relation']}", "conjecture", s["status"],
                    cases=s["cases"], failure_count=s["failures"], level=s["level"], witnesses=wit)
    return rep


def run_pairing(cfg: RunConfig) -> Report:
    from .hecke import ordinary_space
    from .manin import build_symbol_space
    from .pairing import adjointness_defect, level_compatibility, ordinary_gram
    p, N, r = cfg.p, cfg.N, cfg.r
    K = cfg.precision(3)
    rep = Report("pairing", cfg.public())
    sp = build_symbol_space(N, p, r, K, validate=False)
    W = ordinary_space(sp, cuspidal=True)
    G = ordinary_gram(sp)
    if W.dim == 0:
        rep.add("perfect", "pairing-perfect", "theorem", "vacuous", rank=0)
    else:
        rep.add("perfect", "pairing-perfect", "theorem", "pass" if G.perfect else "fail",
                rank=W.dim, det_valuation=G.det_valuation)
        ops = [("U", p)] + [("T", l) for l in sympy.primerange(2, 8) if sp.M % l][:2]
        bad = [f"{k}{l}" for k, l in ops if np.any(adjointness_defect(sp, sp.operator((k, l)), W))]
        rep.add("self_adjoint", "pairing-self-adjoint", "theorem", "fail" if bad else "pass",
                operators=[f"{k}{l}" for k, l in ops], failures=bad)
    if N * p**(r + 1) <= LEVEL_COMPATIBILITY_BOUND:
        lhs, rhs = level_compatibility(N, p, r, K, validate=False)
        ok = lhs.shape == rhs.shape and not np.any((lhs - rhs) % p**K)
        status = ("pass" if ok else "fail") if lhs.size else "vacuous"
        rep.add("level_compatibility", "pairing-level-compatibility", "theorem", status,
                levels=[N * p**r, N * p**(r + 1)], rank=int(lhs.shape[0]))
    return rep


SUBCOMMANDS = {
    "space": run_space,
    "eisenstein": run_eisenstein,
    "xi-table": run_xi_table,
    "mazur-tate": run_mazur_tate,
    "units": run_units,
    "varpi": run_varpi,
    "shadow": run_shadow,
    "pairing": run_pairing,
}


def run(subcommand: str, cfg: RunConfig, cache=None) -> Report:
    cfg.validate()
    fn = SUBCOMMANDS[subcommand]
    if subcommand == "space":
        return fn(cfg, cache)
    return fn(cfg)
