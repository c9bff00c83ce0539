"""Command-line front end.

    zerosum compute --group 2,4 --invariant eta --format json
    zerosum verify  --group 3,3 --suite all --threads 4
    zerosum hunt    --group 2,4 --ell 2
    zerosum report  --cache DIR

Exit codes: 0 success / all pass, 1 a fail entry, 2 usage error, 3 capped only.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ZeroSumError
from .formulas import d_star, oracle_table
from .groups import AbelianGroup, parse_group
from .search import INVARIANT_NAMES, InvariantResult, named_invariant, s_L, spec_for
from .sequences import parse_spec
from .verify import Budget, Report, hunt_conjecture, verify_catalog, verify_group
from .catalog import default_catalog

CACHE_ENV = "ZEROSUM_CACHE_DIR"
EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CAPPED = 0, 1, 2, 3


@dataclass
class RunConfig:
    command: str
    group: AbelianGroup | None = None
    groups: list[AbelianGroup] = field(default_factory=list)
    invariant: str | None = None
    i: int | None = None
    ell: int | None = None
    spec: str | None = None
    suite: str = "all"
    threads: int = 1
    budget: float = 300.0
    cap: int | None = None
    cache: Path | None = None
    no_cache: bool = False
    no_symmetry: bool = False
    up_to_aut: bool = True
    scan_extra: int = 0
    fmt: str = "table"
    verbose: bool = False


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _group_arg(text: str) -> AbelianGroup:
    try:
        return parse_group(text)
    except ZeroSumError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="zerosum", description="Exact zero-sum invariants of finite abelian groups.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("--threads", type=int, default=1)
        sp.add_argument("--budget", type=float, default=300.0, help="seconds per search")
        sp.add_argument("--cache", type=Path, default=None)
        sp.add_argument("--no-cache", action="store_true")
        sp.add_argument("--no-symmetry", action="store_true")
        sp.add_argument("--format", dest="fmt", choices=("table", "json", "csv"), default="table")
        sp.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")

    c = sub.add_parser("compute", help="compute one invariant by exhaustive search")
    c.add_argument("--group", type=_group_arg, required=True)
    what = c.add_mutually_exclusive_group(required=True)
    what.add_argument("--invariant", choices=INVARIANT_NAMES)
    what.add_argument("--spec")
    c.add_argument("--i", type=int)
    c.add_argument("--cap", type=int)
    common(c)

    v = sub.add_parser("verify", help="run the verification suite on a group or the catalog")
    v.add_argument("--group", type=_group_arg, action="append")
    v.add_argument("--catalog", action="store_true", help="verify the default catalog")
    v.add_argument("--suite", choices=("all", "oracles", "structure", "hunt"), default="all")
    common(v)

    h = sub.add_parser("hunt", help="search for counterexamples to the two-disjunct conjecture")
    h.add_argument("--group", type=_group_arg, required=True)
    h.add_argument("--ell", type=int)
    h.add_argument("--scan-extra", type=int, default=0)
    h.add_argument("--all-lengths", dest="up_to_aut", action="store_false", help="disable orbit pruning")
    common(h)

    r = sub.add_parser("report", help="summarize cached verification reports")
    common(r)
    return p


def parse_args(argv) -> RunConfig:
    ns = build_parser().parse_args(argv)
    cfg = RunConfig(command=ns.command)
    cfg.threads = ns.threads
    cfg.budget = ns.budget
    cfg.cache = ns.cache
    cfg.no_cache = ns.no_cache
    cfg.no_symmetry = ns.no_symmetry
    cfg.fmt = ns.fmt
    cfg.verbose = ns.verbose
    if cfg.threads < 1:
        raise UsageError("--threads must be >= 1")
    if cfg.budget <= 0:
        raise UsageError("--budget must be positive")
    if ns.command == "compute":
        cfg.group = ns.group
        cfg.invariant = ns.invariant
        cfg.spec = ns.spec
        cfg.i = ns.i
        cfg.cap = ns.cap
        if cfg.spec is not None:
            try:
                parse_spec(cfg.spec).check(cfg.group.exponent)
            except ZeroSumError as exc:
                raise UsageError(str(exc)) from exc
        elif cfg.invariant in ("zeta", "eta_i"):
            try:
                spec_for(cfg.group, cfg.invariant, cfg.i)
            except ZeroSumError as exc:
                raise UsageError(str(exc)) from exc
    elif ns.command == "verify":
        cfg.groups = list(ns.group or [])
        if ns.catalog:
            cfg.groups.extend(default_catalog())
        if not cfg.groups:
            raise UsageError("verify needs --group or --catalog")
        cfg.group = cfg.groups[0]
        cfg.suite = ns.suite
    elif ns.command == "hunt":
        cfg.group = ns.group
        cfg.ell = ns.ell
        cfg.scan_extra = ns.scan_extra
        cfg.up_to_aut = ns.up_to_aut
    return cfg


# -- cache ------------------------------------------------------------------------


def cache_dir(cfg: RunConfig) -> Path | None:
    if cfg.cache is not None:
        return cfg.cache
    env = os.environ.get(CACHE_ENV)
    return Path(env) if env else None


def _slug(text: str) -> str:
    return text.replace(":", "_").replace(",", "-") or "trivial"


class ResultCache:
    """JSON records keyed by (group string, spec string)."""

    def __init__(self, root: Path):
        self.root = Path(root)

    def _path(self, group: AbelianGroup, spec: str) -> Path:
        return self.root / "results" / f"{_slug(str(group))}__{_slug(spec)}.json"

    def get(self, group: AbelianGroup, spec: str) -> InvariantResult | None:
        path = self._path(group, spec)
        if not path.exists():
            return None
        return InvariantResult.from_record(json.loads(path.read_text()))

    def put(self, result: InvariantResult) -> None:
        path = self._path(result.group, str(result.spec))
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(result.to_record(), indent=1) + "\n")

    def report_path(self, group: AbelianGroup) -> Path:
        return self.root / "reports" / f"{_slug(str(group))}.json"

    def put_report(self, report: Report) -> None:
        path = self.report_path(report.group)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(report.to_record(), indent=1) + "\n")

    def reports(self) -> list[Report]:
        d = self.root / "reports"
        if not d.exists():
            return []
        reports = [Report.from_record(json.loads(p.read_text())) for p in d.glob("*.json")]
        return sorted(reports, key=lambda r: (r.group.order, r.group.invariant_factors))


# -- output -----------------------------------------------------------------------


def _emit_rows(rows: list[dict], fmt: str, out) -> None:
    if fmt == "json":
        out.write(json.dumps(rows if len(rows) != 1 else rows[0], indent=1) + "\n")
        return
    if not rows:
        return
    cols = list(rows[0])
    if fmt == "csv":
        w = csv.DictWriter(out, fieldnames=cols, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: _cell(v) for k, v in r.items()})
        return
    cells = [[_cell(r.get(c)) for c in cols] for r in rows]
    widths = [max(len(c), *(len(row[j]) for row in cells)) for j, c in enumerate(cols)]
    out.write("  ".join(c.ljust(w) for c, w in zip(cols, widths)).rstrip() + "\n")
    for row in cells:
        out.write("  ".join(v.ljust(w) for v, w in zip(row, widths)).rstrip() + "\n")


def _cell(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, (list, dict)):
        return json.dumps(v)
    return str(v)


def _oracle_note(G: AbelianGroup, invariant: str | None, i: int | None) -> str | None:
    if invariant is None:
        return None
    key = {"davenport": "D", "eta": "eta", "egz": "egz"}.get(invariant) or f"{'zeta' if invariant == 'zeta' else 'eta'}_{i}"
    notes = []
    labels = {
        "olson.D": "Olson: D = D*",
        "rank2.D": "rank <= 2: D = D*",
        "rank2.eta": "rank-2 formula: 2n1+n2-2",
        "rank2.egz": "rank-2 formula: 2n1+2n2-3",
        "main.eta": "Thm main: 2D−n",
        "snN": "s_nN = D+n-1",
    }
    for fv in oracle_table(G).get(key, []):
        if fv.applicable:
            label = labels.get(fv.name, fv.name.split("[")[0].replace("_", " "))
            notes.append(f"{label} = {fv.value}")
    return "; ".join(notes) or None


# -- commands ---------------------------------------------------------------------


def _compute(cfg: RunConfig, out) -> int:
    G = cfg.group
    if cfg.spec is not None:
        L = parse_spec(cfg.spec)
    else:
        L = spec_for(G, cfg.invariant, cfg.i)
    root = cache_dir(cfg)
    cache = ResultCache(root) if root else None
    res = None
    if cache and not cfg.no_cache:
        res = cache.get(G, str(L))
        if res is not None and cfg.cap is not None and res.capped:
            res = None
    if res is None:
        kw = dict(workers=cfg.threads, time_budget=cfg.budget, symmetry=not cfg.no_symmetry, length_cap=cfg.cap)
        if cfg.invariant is not None:
            res = named_invariant(G, cfg.invariant, cfg.i, **kw)
        else:
            res = s_L(G, L, **kw)
        if cache:
            cache.put(res)
    row = {
        "group": str(G),
        "invariant": res.invariant or "s_L",
        "i": res.index,
        "spec": str(res.spec),
        "value": res.value,
        "exhaustive": res.exhaustive,
        "oracle": _oracle_note(G, res.invariant, res.index),
        "certificate": res.certificate.to_records(),
    }
    if cfg.fmt == "json":
        rec = res.to_record()
        rec["oracle"] = row["oracle"]
        out.write(json.dumps(rec, indent=1) + "\n")
    else:
        _emit_rows([row], cfg.fmt, out)
    return EXIT_OK if res.exhaustive else EXIT_CAPPED


def _report_exit(reports: list[Report]) -> int:
    statuses = {r.status for r in reports}
    if "fail" in statuses:
        return EXIT_FAIL
    if "capped" in statuses:
        return EXIT_CAPPED
    return EXIT_OK


def _entries_out(reports: list[Report], fmt: str, out) -> None:
    if fmt == "json":
        payload = [r.to_record() for r in reports]
        out.write(json.dumps(payload if len(payload) > 1 else payload[0], indent=1) + "\n")
        return
    rows = []
    for r in reports:
        for e in r.entries:
            rows.append({"group": str(r.group), "check": e.check, "status": e.status, "details": e.details})
    _emit_rows(rows, fmt, out)
    if fmt == "table":
        for r in reports:
            c = r.counts()
            out.write(f"{r.group.pretty()}: {r.status} "
                      f"(pass {c['pass']}, fail {c['fail']}, capped {c['capped']}, inapplicable {c['inapplicable']})\n")


def _budget(cfg: RunConfig, workers: int) -> Budget:
    return Budget(search_seconds=cfg.budget, workers=workers)


def _verify(cfg: RunConfig, out) -> int:
    if len(cfg.groups) > 1:
        reports = verify_catalog(cfg.groups, _budget(cfg, 1), cfg.suite, workers=cfg.threads)
    else:
        reports = [verify_group(cfg.groups[0], _budget(cfg, cfg.threads), cfg.suite)]
    root = cache_dir(cfg)
    if root and not cfg.no_cache:
        cache = ResultCache(root)
        for r in reports:
            cache.put_report(r)
    _entries_out(reports, cfg.fmt, out)
    return _report_exit(reports)


def _hunt(cfg: RunConfig, out) -> int:
    G = cfg.group
    budget = _budget(cfg, cfg.threads)
    if cfg.ell is not None:
        ells = [cfg.ell]
    else:
        ells = list(range(1, d_star(G) + 1 - G.exponent + 1)) or [1]
    report = Report(G)
    for ell in ells:
        report.extend(hunt_conjecture(G, ell, cfg.scan_extra, budget, up_to_aut=cfg.up_to_aut))
    _entries_out([report], cfg.fmt, out)
    return _report_exit([report])


def _report(cfg: RunConfig, out) -> int:
    root = cache_dir(cfg)
    if root is None:
        raise UsageError(f"report needs --cache or ${CACHE_ENV}")
    reports = ResultCache(root).reports()
    rows = []
    for r in reports:
        c = r.counts()
        v = r.values
        rows.append({
            "group": str(r.group),
            "D": v.get("D"),
            "eta": v.get("eta"),
            "s": v.get("egz"),
            "source": "search",
            "status": r.status,
            "pass": c["pass"],
            "fail": c["fail"],
            "capped": c["capped"],
            "inapplicable": c["inapplicable"],
        })
    _emit_rows(rows, cfg.fmt, out)
    return _report_exit(reports) if reports else EXIT_OK


def run(cfg: RunConfig, out=None) -> int:
    out = out or sys.stdout
    if cfg.verbose:
        logging.basicConfig(level=logging.INFO, format="%(asctime)s %(message)s", stream=sys.stderr)
    handler = {"compute": _compute, "verify": _verify, "hunt": _hunt, "report": _report}[cfg.command]
    return handler(cfg, out)


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        cfg = parse_args(argv)
        return run(cfg)
    except UsageError as exc:
        sys.stderr.write(f"zerosum: error: {exc}\n")
        return EXIT_USAGE
    except ZeroSumError as exc:
        sys.stderr.write(f"zerosum: error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
