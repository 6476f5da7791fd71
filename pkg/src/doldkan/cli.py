"""Command line driver: ``doldkan {table,verify,omega,amitsur}``.

Exit codes: 0 success, 1 a verified identity failed, 2 bad input or
arguments, 3 the truncation bounds cannot answer the request.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import asdict, dataclass, field

from . import exact_linear as el
from . import nc_geometry as nc
from . import suites
from .dold_kan_core import KObject, TruncationError, cohomotopy
from .exact_linear import BoundedComplex, CoeffRing, ZZ

EXIT_FAIL, EXIT_PARSE, EXIT_TRUNC = 1, 2, 3

BUILTINS = "sphere:N, disk:N, times:K, algebra:dual-numbers, algebra:upper2"


class InputError(ValueError):
    pass


@dataclass
class RunConfig:
    ring: str | None = None
    levels: int = 4
    rmax: int = 5
    wmax: int = 3
    seed: int = 0
    suite: list = field(default_factory=list)
    format: str = "json"
    input: str | None = None

    def validate(self):
        for name in ("levels", "rmax", "wmax"):
            if getattr(self, name) < 1:
                raise InputError(f"--{name} must be at least 1")
        if self.format not in ("json", "csv"):
            raise InputError(f"unknown format {self.format!r}")

    def coeff(self, default: CoeffRing = ZZ) -> CoeffRing:
        if self.ring is None:
            return default
        try:
            return CoeffRing.parse(self.ring)
        except ValueError as exc:
            raise InputError(str(exc)) from None


# ---------------------------------------------------------------------------
# inputs


def load_input(cfg: RunConfig):
    """A BoundedComplex or a StructAlgebra, from a builtin name or a JSON file."""
    source = cfg.input
    if not source:
        raise InputError("--input is required")
    kind, _, arg = source.partition(":")
    if kind in ("sphere", "disk", "times"):
        try:
            k = int(arg)
        except ValueError:
            raise InputError(f"bad builtin {source!r}") from None
        R = cfg.coeff()
        if kind == "sphere":
            return el.sphere(k, R)
        if kind == "disk":
            return el.disk(k, R)
        return BoundedComplex(R, [1, 1], [el.as_matrix([[k]])])
    if kind == "algebra":
        R = cfg.coeff(CoeffRing(2))
        makers = {"dual-numbers": nc.dual_numbers, "upper2": nc.upper_triangular}
        if arg not in makers:
            raise InputError(f"unknown algebra {arg!r}")
        return makers[arg](R)
    try:
        with open(source, encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {source}: {exc}") from None
    try:
        if "structure" in doc:
            return nc.StructAlgebra.from_json(doc, name=source)
        return BoundedComplex.from_json(doc)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed input {source}: {exc}") from None


# ---------------------------------------------------------------------------
# commands


def cmd_table(cfg: RunConfig) -> tuple[list[dict], int]:
    obj = load_input(cfg)
    if isinstance(obj, nc.StructAlgebra):
        top = min(cfg.levels, cfg.wmax - 1)
        if top < 0 or cfg.wmax < 2:
            raise TruncationError("Hochschild table needs --wmax >= 2")
        H = nc.CoproductNormalized(obj, cfg.wmax).homology(top)
        return H.rows(f"H(N∐ {obj.name})"), 0
    if obj.top_degree > cfg.rmax:
        raise TruncationError(f"complex reaches degree {obj.top_degree} > --rmax {cfg.rmax}")
    top = min(obj.top_degree, cfg.levels)
    H = cohomotopy(KObject(obj), top)
    return H.rows(f"π(K {cfg.input})"), 0


def cmd_verify(cfg: RunConfig) -> tuple[list[dict], int]:
    names = cfg.suite or sorted(suites.SUITES)
    unknown = [n for n in names if n not in suites.SUITES]
    if unknown:
        raise InputError(f"unknown suite(s) {', '.join(unknown)}; known: {', '.join(sorted(suites.SUITES))}")
    P = suites.Params(seed=cfg.seed, ring=cfg.coeff(), levels=cfg.levels, rmax=cfg.rmax, wmax=cfg.wmax)
    checks = suites.run(names, P)
    rows = [{"suite": c.suite, "item": c.item, "verdict": "pass" if c.ok else "fail", "detail": c.detail}
            for c in checks]
    return rows, 0 if all(c.ok for c in checks) else EXIT_FAIL


def _algebra(cfg: RunConfig) -> nc.StructAlgebra:
    obj = load_input(cfg)
    if not isinstance(obj, nc.StructAlgebra):
        raise InputError("this command needs an algebra input")
    return obj


def cmd_omega(cfg: RunConfig) -> tuple[list[dict], int]:
    S = _algebra(cfg)
    A = nc.omega(S, cfg.rmax)
    H = el.cohomology(A)
    rows = []
    for r in H.rows(f"Ω({S.name})"):
        r["rank"] = A.rank(r["degree"])
        rows.append(r)
    bad = nc.omega_report(A, full=cfg.rmax <= 3)
    rows.append({"object": f"Ω({S.name})", "check": "leibniz+assoc", "verdict": "fail" if bad else "pass",
                 "detail": "; ".join(bad[:3])})
    return rows, EXIT_FAIL if bad else 0


def cmd_amitsur(cfg: RunConfig) -> tuple[list[dict], int]:
    S = _algebra(cfg)
    if cfg.levels > cfg.rmax:
        raise TruncationError(f"level {cfg.levels} needs forms of degree {cfg.levels} > --rmax {cfg.rmax}")
    rows, code = [], 0
    reps = [("braided", nc.amitsur_report(S, cfg.levels, assoc_nmax=min(cfg.levels, 2))),
            ("alpha-beta", nc.FormsComparison(S, cfg.levels).report())]
    for name, rep in reps:
        for key in sorted(rep["counts"]):
            n = rep["counts"][key]
            rows.append({"object": f"⊗({S.name})", "check": f"{name}:{key}", "verdict": "fail" if n else "pass",
                         "detail": "; ".join(str(f) for f in rep["failures"][key][:3])})
            if n:
                code = EXIT_FAIL
    return rows, code


COMMANDS = {"table": cmd_table, "verify": cmd_verify, "omega": cmd_omega, "amitsur": cmd_amitsur}


# ---------------------------------------------------------------------------
# output


def render(rows: list[dict], fmt: str) -> str:
    if fmt == "json":
        return json.dumps(rows, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
    cols = sorted({k for r in rows for k in r})
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: (" ".join(map(str, v)) if isinstance(v, list) else v) for k, v in r.items()})
    return buf.getvalue()


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="doldkan", description="Exact Dold-Kan computations for rings.",
                                formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    common = argparse.ArgumentParser(add_help=False, formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    common.add_argument("--ring", default=None,
                        help="coefficients z or zmod:<m> (default: z for complexes, zmod:2 for builtin algebras)")
    common.add_argument("--levels", type=int, default=4, help="top cosimplicial level")
    common.add_argument("--rmax", type=int, default=5, help="top form / tensor degree")
    common.add_argument("--wmax", type=int, default=3, help="longest word in coproduct rings")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized suites")
    common.add_argument("--suite", action="append", default=None,
                        help="suite name(s), comma separated or repeated; default all: "
                             + ", ".join(sorted(suites.SUITES)))
    common.add_argument("--format", choices=["json", "csv"], default="json")
    common.add_argument("--input", default=None, help=f"JSON file or builtin ({BUILTINS})")
    common.add_argument("--config", default=None, help="JSON file whose keys override the flags")
    sub = p.add_subparsers(dest="command", required=True)
    helps = {"table": "cohomotopy of K(A) for a complex, H(N∐_RS, μ) for an algebra",
             "verify": "run verification suites", "omega": "noncommutative forms Ω_RS",
             "amitsur": "braided product identities and the comparison K Ω ≅ ⊗"}
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], help=helps[name],
                       formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    return p


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(ring=ns.ring, levels=ns.levels, rmax=ns.rmax, wmax=ns.wmax, seed=ns.seed,
                    suite=[s for item in (ns.suite or []) for s in item.split(",") if s],
                    format=ns.format, input=ns.input)
    if ns.config:
        try:
            with open(ns.config, encoding="utf-8") as fh:
                over = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise InputError(f"cannot read config {ns.config}: {exc}") from None
        known = set(asdict(cfg))
        for k, v in over.items():
            if k not in known:
                raise InputError(f"unknown config key {k!r}")
            if k == "suite" and isinstance(v, str):
                v = [s for s in v.split(",") if s]
            setattr(cfg, k, v)
    cfg.validate()
    return cfg


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(ns)
        rows, code = COMMANDS[ns.command](cfg)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except nc.AlgebraError as exc:
        print(f"error: invalid algebra: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except TruncationError as exc:
        print(f"error: truncation conflict: {exc}", file=sys.stderr)
        return EXIT_TRUNC
    sys.stdout.write(render(rows, cfg.format))
    return code


if __name__ == "__main__":
    sys.exit(main())
