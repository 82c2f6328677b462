"""Command-line front end.

    hsconvex verify --theorem hh_classic --f square --a 0 --b 1
    hsconvex class-check --class convex --f "ln(x)" --a 2 --b 4
    hsconvex means --a 2 --b 4 --chain

Exit status: 0 when every requested check holds, 1 when any fails, 2 on
usage or domain errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import asdict, dataclass

import numpy as np

from . import __version__
from .classes import KINDS, S_KINDS, ClassSpec, SearchConfig, check_membership, find_valid_s_range
from .expr import DomainError, ExprSyntaxError
from .funcat import CatalogError, Interval, resolve_function
from .hadamard import PRODUCT_THEOREMS, THEOREMS, TheoremInputError, evaluate_theorem
from .means import MEAN_KINDS, chain_check, mean, proposition_check
from .serialize import chain_dict, dumps, fmt_float, inequality_dict, proposition_dict, verdict_dict

COMMANDS = ("class-check", "s-range", "verify", "sweep", "means", "props")

_DEFAULTS = {
    "h": "identity",
    "tol": 1e-10,
    "grid": 41,
    "format": "json",
    "seed": 42,
    "check_hypothesis": False,
    "chain": False,
    "s_values": "0.25,0.5,0.75,1",
    "random_intervals": 0,
    "class_kind": None,
}


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    f: str | None = None
    g: str | None = None
    h: str = "identity"
    s: float | None = None
    a: float | None = None
    b: float | None = None
    theorem: str | None = None
    class_kind: str | None = None
    tol: float = 1e-10
    grid: int = 41
    format: str = "json"
    out: str | None = None
    seed: int = 42
    check_hypothesis: bool = False
    s_values: str = "0.25,0.5,0.75,1"
    intervals: str | None = None
    random_intervals: int = 0
    prop: int | None = None
    p: float | None = None
    chain: bool = False

    def public(self) -> dict:
        d = asdict(self)
        d.pop("out")
        d.pop("format")
        return {k: v for k, v in d.items() if v is not None}


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat JSON file of option values; flags win")
    common.add_argument("--format", choices=("json", "csv", "text"))
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--seed", type=int)
    common.add_argument("--tol", type=float, help="quadrature tolerance (absolute)")
    common.add_argument("--grid", type=int, help="grid points per axis for class checks")
    common.add_argument("--a", type=float)
    common.add_argument("--b", type=float)

    fn = argparse.ArgumentParser(add_help=False)
    fn.add_argument("--f", help="catalog name or expression")
    fn.add_argument("--h", help="weight function: catalog name or expression in t")
    fn.add_argument("--s", type=float)

    parser = argparse.ArgumentParser(prog="hsconvex", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("class-check", parents=[common, fn], help="membership of f in a class")
    p.add_argument("--class", dest="class_kind", choices=KINDS)

    p = sub.add_parser("s-range", parents=[common, fn], help="s values where membership holds")
    p.add_argument("--class", dest="class_kind", choices=S_KINDS)

    for name, helptext in (("verify", "evaluate one inequality"),
                           ("sweep", "evaluate an inequality over s and intervals")):
        p = sub.add_parser(name, parents=[common, fn], help=helptext)
        p.add_argument("--theorem", choices=THEOREMS)
        p.add_argument("--g", help="second function for product theorems")
        p.add_argument("--check-hypothesis", dest="check_hypothesis", action="store_true",
                       default=None)
        if name == "sweep":
            p.add_argument("--s-values", dest="s_values", help="comma-separated s grid")
            p.add_argument("--intervals", help='explicit intervals, e.g. "0:1,2:4"')
            p.add_argument("--random-intervals", dest="random_intervals", type=int,
                           help="draw N random subintervals of [a, b] from the seed")

    p = sub.add_parser("means", parents=[common], help="special means of (a, b)")
    p.add_argument("--chain", action="store_true", default=None, help="check H<=G<=L<=I<=A<=K")
    p.add_argument("--p", type=float, help="also report the p-logarithmic mean")

    p = sub.add_parser("props", parents=[common], help="audit the ln-based propositions")
    p.add_argument("--prop", type=int, choices=(1, 2, 3, 4), help="default: all four")
    p.add_argument("--s", type=float)
    return parser


def _resolve_config(ns: argparse.Namespace) -> RunConfig:
    values = {k: v for k, v in vars(ns).items() if v is not None and k != "config"}
    if ns.config:
        try:
            with open(ns.config) as fh:
                from_file = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {ns.config!r}: {exc}") from None
        if not isinstance(from_file, dict):
            raise UsageError(f"config {ns.config!r} must be a JSON object")
        for key, val in from_file.items():
            key = key.replace("-", "_")
            if key == "class":
                key = "class_kind"
            values.setdefault(key, val)
    merged = dict(_DEFAULTS)
    merged.update(values)
    known = set(RunConfig.__dataclass_fields__)
    unknown = sorted(set(merged) - known)
    if unknown:
        raise UsageError(f"unknown option(s): {', '.join(unknown)}")
    return RunConfig(**merged)


def _interval(cfg: RunConfig) -> Interval:
    if cfg.a is None or cfg.b is None:
        raise UsageError("--a and --b are required")
    try:
        return Interval(cfg.a, cfg.b)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _function(spec: str | None, interval: Interval, flag: str, kind: str = "f"):
    if spec is None:
        raise UsageError(f"{flag} is required")
    try:
        return resolve_function(str(spec), None if kind == "h" else interval, kind=kind)
    except (ExprSyntaxError, CatalogError, DomainError) as exc:
        raise UsageError(f"{flag} {spec!r}: {exc}") from None


def _search(cfg: RunConfig) -> SearchConfig:
    return SearchConfig(grid=int(cfg.grid))


def _class_spec(kind: str, cfg: RunConfig, interval: Interval) -> ClassSpec:
    h = _function(cfg.h, interval, "--h", kind="h") if kind in ("h_convex", "hs_first", "hs_second") else None
    s = cfg.s if kind in S_KINDS else None
    if kind in S_KINDS and s is None:
        raise UsageError(f"--s is required for class {kind}")
    return ClassSpec(kind, h=h, s=s)


def _cmd_class_check(cfg: RunConfig):
    if cfg.class_kind is None:
        raise UsageError("--class is required")
    interval = _interval(cfg)
    f = _function(cfg.f, interval, "--f")
    v = check_membership(_class_spec(cfg.class_kind, cfg, interval), f, interval, _search(cfg))
    return [verdict_dict(v)], v.member


def _cmd_s_range(cfg: RunConfig):
    kind = cfg.class_kind or "hs_second"
    if kind not in S_KINDS:
        raise UsageError(f"s-range needs --class in {', '.join(S_KINDS)}")
    interval = _interval(cfg)
    f = _function(cfg.f, interval, "--f")
    h = _function(cfg.h, interval, "--h", kind="h") if kind != "s_convex_2" else None
    ranges = find_valid_s_range(kind, h, f, interval, _search(cfg))
    report = {
        "kind": "s_range",
        "class": kind,
        "f": f.name,
        "h": h.name if h is not None else None,
        "a": interval.a,
        "b": interval.b,
        "resolution": 1e-3,
        "ranges": [[lo, hi] for lo, hi in ranges],
    }
    return [report], bool(ranges)


def _verify_one(cfg: RunConfig, interval: Interval, s):
    if cfg.theorem is None:
        raise UsageError("--theorem is required")
    f = _function(cfg.f, interval, "--f")
    g = _function(cfg.g, interval, "--g") if cfg.g is not None else None
    h = _function(cfg.h, interval, "--h", kind="h")
    if cfg.theorem not in PRODUCT_THEOREMS and g is not None:
        raise UsageError(f"--g is only used by {', '.join(PRODUCT_THEOREMS)}")
    return evaluate_theorem(
        cfg.theorem, f, interval, g=g, h=h, s=s, quad_tol=float(cfg.tol),
        check_hypothesis=bool(cfg.check_hypothesis), search=_search(cfg),
    )


def _theorem_uses_s(theorem: str) -> bool:
    return theorem == "s_convex_hadamard" or theorem.startswith("hs_")


def _cmd_verify(cfg: RunConfig):
    interval = _interval(cfg)
    s = cfg.s
    if cfg.theorem and _theorem_uses_s(cfg.theorem) and s is None:
        raise UsageError(f"--s is required for {cfg.theorem}")
    r = _verify_one(cfg, interval, s if cfg.theorem and _theorem_uses_s(cfg.theorem) else None)
    return [inequality_dict(r)], r.holds


def _parse_floats(text: str, flag: str) -> list[float]:
    try:
        return [float(x) for x in str(text).split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"{flag}: expected comma-separated numbers, got {text!r}") from None


def _sweep_intervals(cfg: RunConfig) -> list[Interval]:
    if cfg.intervals:
        out = []
        for part in str(cfg.intervals).split(","):
            try:
                lo, hi = (float(v) for v in part.split(":"))
                out.append(Interval(lo, hi))
            except ValueError:
                raise UsageError(f"--intervals: bad interval {part!r}") from None
        return out
    base = _interval(cfg)
    n = int(cfg.random_intervals)
    if n <= 0:
        return [base]
    rng = np.random.default_rng(int(cfg.seed))
    out = []
    while len(out) < n:
        lo, hi = np.sort(rng.uniform(base.a, base.b, size=2))
        if hi - lo > 1e-3 * base.width:
            out.append(Interval(float(lo), float(hi)))
    return out


def _cmd_sweep(cfg: RunConfig):
    if cfg.theorem is None:
        raise UsageError("--theorem is required")
    s_grid = _parse_floats(cfg.s_values, "--s-values") if _theorem_uses_s(cfg.theorem) else [None]
    reports = []
    for interval in _sweep_intervals(cfg):
        for s in s_grid:
            reports.append(_verify_one(cfg, interval, s))
    return [inequality_dict(r) for r in reports], all(r.holds for r in reports)


def _cmd_means(cfg: RunConfig):
    if cfg.a is None or cfg.b is None:
        raise UsageError("--a and --b are required")
    a, b = cfg.a, cfg.b
    values = {}
    for kind in MEAN_KINDS:
        if kind == "p_logarithmic":
            continue
        try:
            values[kind] = mean(kind, a, b)
        except ValueError:
            values[kind] = None
    if cfg.p is not None:
        values["p_logarithmic"] = mean("p_logarithmic", a, b, p=cfg.p)
    reports = [{"kind": "means", "a": float(a), "b": float(b), "p": cfg.p, "values": values}]
    ok = True
    if cfg.chain:
        c = chain_check(a, b)
        reports.append(chain_dict(c))
        ok = c.holds
    return reports, ok


def _cmd_props(cfg: RunConfig):
    if cfg.a is None or cfg.b is None or cfg.s is None:
        raise UsageError("--a, --b and --s are required")
    ids = [cfg.prop] if cfg.prop else [1, 2, 3, 4]
    reps = [proposition_check(i, cfg.a, cfg.b, cfg.s, search=_search(cfg), quad_tol=float(cfg.tol))
            for i in ids]
    return [proposition_dict(r) for r in reps], all(r.holds_as_printed for r in reps)


_DISPATCH = {
    "class-check": _cmd_class_check,
    "s-range": _cmd_s_range,
    "verify": _cmd_verify,
    "sweep": _cmd_sweep,
    "means": _cmd_means,
    "props": _cmd_props,
}


def _csv_rows(reports: list[dict]):
    yield ["report", "kind", "label", "lhs", "lhs_value", "rhs", "rhs_value", "margin", "holds"]
    for i, r in enumerate(reports):
        kind = r["kind"]
        if kind == "inequality":
            terms = {t["label"]: t["value"] for t in r["terms"]}
            p = r["parameters"]
            label = f"{r['theorem']} s={p.get('s', '')} [{p['a']}, {p['b']}]"
            for c in r["comparisons"]:
                yield [i, kind, label, c["lhs"], fmt_float(terms[c["lhs"]]), c["rhs"],
                       fmt_float(terms[c["rhs"]]), fmt_float(c["margin"]), c["holds"]]
        elif kind == "mean_chain":
            for c in r["comparisons"]:
                yield [i, kind, f"[{r['a']}, {r['b']}]", c["lhs"], fmt_float(r["values"][c["lhs"]]),
                       c["rhs"], fmt_float(r["values"][c["rhs"]]), fmt_float(c["margin"]), c["holds"]]
        elif kind == "proposition":
            yield [i, kind, f"proposition {r['proposition']} printed", "ln_identric",
                   fmt_float(r["ln_identric"]), "right_printed", fmt_float(r["right_printed"]),
                   fmt_float(r["right_printed"] - r["ln_identric"]), r["holds_as_printed"]]
            yield [i, kind, f"proposition {r['proposition']} derived", "ln_identric",
                   fmt_float(r["ln_identric"]), "right_derived", fmt_float(r["right_derived"]),
                   fmt_float(r["right_derived"] - r["ln_identric"]), r["holds_as_derived"]]
        elif kind == "membership":
            w = r["witness"] or {}
            yield [i, kind, r["class"], "defect", fmt_float(r["max_defect"]), "tolerance",
                   fmt_float(r["tolerance"]), fmt_float(r["tolerance"] - r["max_defect"]),
                   r["status"] == "member_on_grid"]
        elif kind == "s_range":
            for lo, hi in r["ranges"]:
                yield [i, kind, r["class"], "s_lo", fmt_float(lo), "s_hi", fmt_float(hi), "", True]
        elif kind == "means":
            for name, v in r["values"].items():
                yield [i, kind, name, "", "" if v is None else fmt_float(v), "", "", "", ""]


def _text(reports: list[dict]) -> str:
    lines = []
    for r in reports:
        kind = r["kind"]
        if kind == "inequality":
            lines.append(f"{r['theorem']} {r['parameters']}")
            for t in r["terms"]:
                lines.append(f"  {t['label']:<18} {t['value']:.17g}  (+/- {t['error']:.3g})")
            for c in r["comparisons"]:
                mark = "holds" if c["holds"] else "FAILS"
                lines.append(f"  {c['lhs']} <= {c['rhs']}: margin {c['margin']:.6g} {mark}")
            if r["hypothesis_established"] is not None:
                lines.append(f"  hypothesis established: {r['hypothesis_established']}")
        elif kind == "membership":
            lines.append(f"{r['class']}: {r['status']} (max defect {r['max_defect']:.6g}, "
                         f"tolerance {r['tolerance']:.3g})")
            if r["witness"]:
                w = r["witness"]
                lines.append(f"  witness x={w['x']:.17g} y={w['y']:.17g} t={w['t']:.17g} "
                             f"defect={w['defect']:.17g}")
        elif kind == "s_range":
            spans = ", ".join(f"[{lo:.4g}, {hi:.4g}]" for lo, hi in r["ranges"]) or "none"
            lines.append(f"{r['class']} h={r['h']} f={r['f']} on [{r['a']}, {r['b']}]: s in {spans}")
        elif kind == "means":
            for name, v in r["values"].items():
                lines.append(f"{name:<14} {'undefined' if v is None else format(v, '.17g')}")
        elif kind == "mean_chain":
            for c in r["comparisons"]:
                mark = "holds" if c["holds"] else "FAILS"
                lines.append(f"  {c['lhs']} <= {c['rhs']}: margin {c['margin']:.6g} {mark}")
        elif kind == "proposition":
            lines.append(
                f"proposition {r['proposition']} (a={r['a']}, b={r['b']}, s={r['s']}): "
                f"ln I = {r['ln_identric']:.12g}, printed bound {r['right_printed']:.12g} "
                f"({'holds' if r['holds_as_printed'] else 'FAILS'}), derived bound "
                f"{r['right_derived']:.12g} ({'holds' if r['holds_as_derived'] else 'FAILS'}), "
                f"hypothesis established: {r['hypothesis_established']}"
            )
    return "\n".join(lines) + "\n"


def render(cfg: RunConfig, reports: list[dict], ok: bool) -> str:
    if cfg.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        for row in _csv_rows(reports):
            writer.writerow(row)
        return buf.getvalue()
    if cfg.format == "text":
        return _text(reports)
    doc = {
        "version": __version__,
        "command": cfg.command,
        "config": cfg.public(),
        "seed": int(cfg.seed),
        "status": "pass" if ok else "fail",
        "reports": reports,
    }
    return dumps(doc)


def run(argv: list[str] | None = None, stdout=None, stderr=None) -> int:
    """Parse ``argv``, run the subcommand, write the report; return exit code."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = _build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        cfg = _resolve_config(ns)
        if cfg.format not in ("json", "csv", "text"):
            raise UsageError(f"unknown format {cfg.format!r}")
        reports, ok = _DISPATCH[cfg.command](cfg)
    except (UsageError, ExprSyntaxError, CatalogError, DomainError, TheoremInputError,
            ValueError) as exc:
        print(f"hsconvex {ns.command}: error: {exc}", file=stderr)
        return 2
    text = render(cfg, reports, ok)
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return 0 if ok else 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
