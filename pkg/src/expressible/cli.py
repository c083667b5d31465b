"""Command-line entry point.

Every run resolves a configuration from defaults, an optional JSON config
file and command-line flags (flags win), echoes it in the output header and
writes a JSON document or a CSV table.  Exit codes: 0 success, 1 other
library error, 2 invalid configuration, 3 budget or depth exceeded,
4 only indeterminate results.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import sys
from typing import Any

from gmpy2 import mpq

from .cantor import DEFAULT_ENUMERATION_BUDGET, build_level, classify_adjacent, point_from_digits
from .dimension import (
    boxcount_estimate,
    boxcount_levels,
    closed_form_limit,
    family_bound_sequence,
)
from .enclosure import Enclosure
from .errors import (
    BudgetExceededError,
    DepthExceededError,
    ExpressibleError,
    ValidationError,
)
from .gaps import Verdict, find_n0, gap_report_for_level
from .probe import (
    PRECISION_EXHAUSTED,
    UNIQUE,
    decode_digits,
    exponent_probe,
    growth_limit_sequence,
    telescoping_check,
)
from .sequences import (
    FILL_LARGEST,
    Family,
    as_rational,
    rational_str,
    thm1_family,
    thm2_family,
    thm3_family,
    validate_family,
)
from .serialization import family_from_dict, family_to_dict, growth_from_dict

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_VALIDATION = 2
EXIT_BUDGET = 3
EXIT_INDETERMINATE = 4

COMMANDS = (
    "construct", "gaps", "find-n0", "dimension", "boxcount",
    "decode", "identity", "growth", "probe", "sweep",
)

DEFAULTS: dict[str, Any] = {
    "command": None,
    "family": None,
    "spec": None,
    "b": None,
    "K": None,
    "N": None,
    "s": None,
    "r": None,
    "eta": None,
    "f": None,
    "g": None,
    "h": None,
    "fill": FILL_LARGEST,
    "epsilon": "1",
    "n": None,
    "fit": None,
    "a1": None,
    "x": None,
    "word": None,
    "q_max": 10**6,
    "exhaustive": False,
    "check_gaps": True,
    "grid": None,
    "n_ref": 10,
    "boxcount": False,
    "output": "-",
    "format": "json",
    "precision": 50,
    "budget": DEFAULT_ENUMERATION_BUDGET,
    "depth": None,
    "tail_depth": None,
}

RATIONAL_KEYS = ("b", "s", "r", "eta", "epsilon", "x")
INT_KEYS = ("K", "N", "a1", "q_max", "n_ref", "precision", "budget", "depth", "tail_depth")


class ConfigError(ValidationError):
    pass


# ---------------------------------------------------------------------------
# configuration


def parse_range(text) -> range:
    """``"a..b"`` (inclusive) or a single integer ``"n"``."""
    if isinstance(text, int) and not isinstance(text, bool):
        return range(text, text + 1)
    if not isinstance(text, str):
        raise ConfigError(f"bad level range {text!r}")
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            return range(int(lo), int(hi) + 1)
        n = int(text)
    except ValueError:
        raise ConfigError(f"bad level range {text!r}") from None
    return range(n, n + 1)


def _upper_range(text, start: int) -> range:
    """A single integer means ``start..n``; ``"a..b"`` is taken literally."""
    if isinstance(text, str) and ".." in text:
        return parse_range(text)
    r = parse_range(text)
    return range(start, r.start + 1)


def _normalize(cfg: dict) -> dict:
    for key in RATIONAL_KEYS:
        if cfg.get(key) is not None:
            cfg[key] = rational_str(as_rational(cfg[key]))
    for key in INT_KEYS:
        v = cfg.get(key)
        if v is not None:
            if isinstance(v, (bool, float)) or not str(v).lstrip("-").isdigit():
                raise ConfigError(f"{key} must be an integer, got {v!r}")
            cfg[key] = int(v)
    if isinstance(cfg.get("word"), str):
        cfg["word"] = [int(t) for t in cfg["word"].replace(" ", "").split(",") if t]
    if isinstance(cfg.get("grid"), str):
        try:
            cfg["grid"] = json.loads(cfg["grid"])
        except json.JSONDecodeError as exc:
            raise ConfigError(f"grid is not valid JSON: {exc}") from None
    if cfg["format"] not in ("json", "csv"):
        raise ConfigError("format must be json or csv")
    if cfg["command"] not in COMMANDS:
        raise ConfigError(f"unknown command {cfg['command']!r}")
    return cfg


def resolve_config(file_cfg: dict | None, overrides: dict) -> dict:
    """Defaults, then the config file, then explicit command-line values."""
    cfg = dict(DEFAULTS)
    if file_cfg:
        if not isinstance(file_cfg, dict):
            raise ConfigError("config file must hold a JSON object")
        unknown = set(file_cfg) - set(DEFAULTS)
        if unknown:
            raise ConfigError(f"unknown config field(s): {', '.join(sorted(unknown))}")
        cfg.update(file_cfg)
    cfg.update({k: v for k, v in overrides.items() if v is not None})
    return _normalize(cfg)


def family_from_config(cfg: dict) -> Family:
    if cfg.get("spec") is not None:
        return family_from_dict(cfg["spec"])
    fam = cfg.get("family")

    def need(*keys):
        missing = [k for k in keys if cfg.get(k) is None]
        if missing:
            raise ConfigError(f"family {fam} needs {', '.join(missing)}")

    growth = {k: growth_from_dict(cfg.get(k)) for k in ("f", "g", "h")}
    if fam == "thm1":
        need("b", "K")
        return thm1_family(cfg["b"], cfg["K"])
    if fam == "thm2":
        need("N", "s", "r")
        return thm2_family(cfg["N"], cfg["s"], cfg["r"], fill=cfg["fill"], **growth)
    if fam == "thm3":
        need("N", "s", "r", "eta")
        return thm3_family(cfg["N"], cfg["s"], cfg["r"], cfg["eta"], fill=cfg["fill"], **growth)
    raise ConfigError("give --family thm1|thm2|thm3 or a 'spec' object in the config file")


def _checked_family(cfg: dict) -> Family:
    family = family_from_config(cfg)
    if family.theorem != "none":
        report = validate_family(family)
        if not report.ok:
            raise ConfigError("theorem hypotheses fail: " + "; ".join(report.failures))
    return family


# ---------------------------------------------------------------------------
# results


class Result:
    """Rows plus an optional summary; ``indeterminate`` marks exit code 4."""

    def __init__(self, columns, rows, summary=None, indeterminate=False):
        self.columns = list(columns)
        self.rows = [list(r) for r in rows]
        self.summary = summary or {}
        self.indeterminate = indeterminate


def _pair(enc: Enclosure | None, digits: int):
    if enc is None:
        return ["", ""]
    return list(enc.decimal_pair(digits))


def cmd_construct(cfg):
    family = family_from_config(cfg)
    levels = parse_range(cfg["n"] or cfg["depth"] or 1)
    rows = []
    for n in levels:
        ivs = build_level(family.sequence, family.digits, n, cfg["tail_depth"], budget=cfg["budget"])
        rels = classify_adjacent(ivs) + [""]
        for iv, rel in zip(ivs, rels):
            rows.append(
                [
                    n,
                    ".".join(str(d) for d in iv.prefix),
                    rational_str(iv.left.lo),
                    rational_str(iv.left.hi),
                    rational_str(iv.right.lo),
                    rational_str(iv.right.hi),
                    rel,
                ]
            )
    cols = ["level", "prefix", "left_lo", "left_hi", "right_lo", "right_hi", "relation_to_next"]
    return Result(cols, rows)


def cmd_gaps(cfg):
    family = _checked_family(cfg)
    rows, verdicts = [], []
    for n in parse_range(cfg["n"] or "1..6"):
        rep = gap_report_for_level(
            family, n, cfg["epsilon"], cfg["tail_depth"], cfg["exhaustive"], cfg["budget"]
        ).to_dict()
        gap = rep["measured_min_gap"] or {"lo": "", "hi": ""}
        rows.append(
            [
                n,
                rep["epsilon_n"] or "",
                gap["lo"],
                gap["hi"],
                rep["minbound2_holds"] or "",
                rep["gap_bound"] or "",
                "" if rep["implication_ok"] is None else str(rep["implication_ok"]).lower(),
                "" if rep["parents_scanned"] is None else rep["parents_scanned"],
                "; ".join(rep["notes"]),
            ]
        )
        verdicts.append(rep["gap_bound"])
    decided = [v for v in verdicts if v is not None]
    cols = [
        "level", "epsilon_n", "min_gap_lo", "min_gap_hi", "minbound2",
        "gap_bound", "implication_ok", "parents_scanned", "notes",
    ]
    return Result(cols, rows, indeterminate=bool(decided) and all(v == str(Verdict.INDETERMINATE) for v in decided))


def cmd_find_n0(cfg):
    family = _checked_family(cfg)
    res = find_n0(family, cfg["epsilon"], cfg["depth"] or 40).to_dict()
    rows = [[n, e] for n, e in res.pop("exponents")]
    return Result(["n", "threshold_exponent"], rows, summary=res)


def cmd_dimension(cfg):
    family = _checked_family(cfg)
    report = family_bound_sequence(
        family,
        parse_range(cfg["n"] or "1..10"),
        cfg["epsilon"],
        cfg["precision"],
        cfg["check_gaps"],
        cfg["tail_depth"],
    )
    d = report.to_dict(cfg["precision"])
    rows = []
    for fr in report.finite_ratios:
        rows.append([fr.n, *_pair(fr.ratio, cfg["precision"]), *_pair(fr.simplified, cfg["precision"]), fr.note])
    summary = {k: v for k, v in d.items() if k not in ("finite_ratios", "gap_levels_checked")}
    checked = report.gap_levels_checked
    summary["gap_levels"] = {
        "range": [checked[0][0], checked[-1][0]] if checked else [],
        "verdicts": {v: sum(1 for _, w in checked if w == v) for v in sorted({w for _, w in checked})},
    }
    cols = ["n", "ratio", "ratio_error", "simplified_ratio", "simplified_error", "note"]
    return Result(cols, rows, summary=summary)


def cmd_boxcount(cfg):
    family = family_from_config(cfg)
    levels = list(parse_range(cfg["n"] or "1..10"))
    data = boxcount_levels(family.sequence, family.digits, levels, cfg["tail_depth"], cfg["budget"])
    rows = [[n, rational_str(delta), count] for n, (delta, count) in zip(levels, data)]
    fit_levels = parse_range(cfg["fit"]) if cfg["fit"] else range(levels[0], levels[-1] + 1)
    picked = [pt for n, pt in zip(levels, data) if n in fit_levels]
    fit = boxcount_estimate(picked)
    summary = {
        "fit_levels": [fit_levels.start, fit_levels.stop - 1],
        **fit.to_dict(),
        "closed_form_limit": None,
    }
    if family.theorem != "none":
        summary["closed_form_limit"] = dict(zip(("value", "error"), closed_form_limit(family).decimal_pair(cfg["precision"])))
    return Result(["n", "delta", "count"], rows, summary=summary)


def _point(cfg, family: Family | None) -> Enclosure:
    if cfg["x"] is not None:
        return Enclosure.exact(cfg["x"])
    if cfg["word"] is None or family is None:
        raise ConfigError("give x as a rational, or a family with a digit word")
    return point_from_digits(family.sequence, family.digits, cfg["word"], T=cfg["tail_depth"])


def cmd_decode(cfg):
    family = family_from_config(cfg)
    x = _point(cfg, family)
    depth = cfg["depth"] or (len(cfg["word"]) if cfg["word"] else 10)
    res = decode_digits(x, family.sequence, family.digits, depth, cfg["tail_depth"])
    rows = [[k + 1, int(d)] for k, d in enumerate(res.digits)]
    summary = {"status": res.status, "level": res.level, "x_lo": rational_str(x.lo), "x_hi": rational_str(x.hi)}
    return Result(["level", "digit"], rows, summary=summary, indeterminate=res.status != UNIQUE and res.status != "outside")


def cmd_identity(cfg):
    if cfg["a1"] is None:
        raise ConfigError("identity needs --a1")
    rows = []
    for n in _upper_range(cfg["n"] if cfg["n"] is not None else 8, 0):
        res = telescoping_check(cfg["a1"], n)
        rows.append([n, rational_str(res.partial_sum), rational_str(res.tail), rational_str(res.residual)])
    return Result(["n", "partial_sum", "tail", "residual"], rows)


def cmd_growth(cfg):
    if cfg["a1"] is None:
        raise ConfigError("growth needs --a1")
    ns = _upper_range(cfg["n"] if cfg["n"] is not None else 8, 1)
    seq = growth_limit_sequence(cfg["a1"], ns.stop - 1, cfg["precision"])
    rows = [[n, *enc.decimal_pair(cfg["precision"])] for n, enc in seq if n in ns]
    return Result(["n", "value", "error"], rows)


def cmd_probe(cfg):
    family = None
    if cfg["x"] is None:
        family = family_from_config(cfg)
    res = exponent_probe(_point(cfg, family), cfg["q_max"], cfg["precision"])
    rows = []
    for row in res.rows:
        w = _pair(row.exponent, cfg["precision"]) if row.exponent is not None else ["", ""]
        rows.append([f"{row.p}/{row.q}", *w, str(row.unbounded).lower()])
    summary = {"status": res.status, "label": res.label}
    return Result(
        ["convergent", "exponent", "exponent_error", "unbounded"],
        rows,
        summary=summary,
        indeterminate=not rows and res.status == PRECISION_EXHAUSTED,
    )


# ---------------------------------------------------------------------------
# sweep


def grid_cells(grid) -> list[dict]:
    """Cells of a grid, in lexicographic order of their coordinates.

    ``{"axes": {"K": [2, 3], "b": [9, 10]}}`` is a cartesian product over
    axes sorted by name; ``{"cells": [{...}, ...]}`` lists cells directly.
    """
    if grid is None:
        return []
    if not isinstance(grid, dict) or set(grid) - {"axes", "cells"}:
        raise ConfigError("grid must be an object with 'axes' or 'cells'")
    cells = []
    if "axes" in grid:
        axes = grid["axes"]
        names = sorted(axes)
        values = [sorted(axes[k], key=as_rational) for k in names]
        cells += [dict(zip(names, combo)) for combo in itertools.product(*values)]
    if "cells" in grid:
        cells += [dict(c) for c in grid["cells"]]
    for c in cells:
        bad = set(c) - set(DEFAULTS)
        if bad:
            raise ConfigError(f"unknown grid field(s): {', '.join(sorted(bad))}")

    def key(c):
        return tuple((k, as_rational(v)) for k, v in sorted(c.items()))

    return sorted(cells, key=key)


def _sweep_cell(cfg, cell):
    c = _normalize({**cfg, **cell, "command": "dimension"})
    family = _checked_family(c)
    lim = closed_form_limit(family, c["precision"])
    report = family_bound_sequence(family, [c["n_ref"]], c["epsilon"], c["precision"], c["check_gaps"], c["tail_depth"])
    ratio = report.finite_ratios[0].ratio
    slope = ""
    if c["boxcount"]:
        fit_levels = list(parse_range(c["fit"] or "4..10"))
        data = boxcount_levels(family.sequence, family.digits, fit_levels, c["tail_depth"], c["budget"])
        slope = repr(boxcount_estimate(data).slope)
    exact = rational_str(lim.lo) if lim.is_exact else ""
    return [exact, *lim.decimal_pair(c["precision"]), *_pair(ratio, c["precision"]), slope]


def cmd_sweep(cfg):
    cells = grid_cells(cfg["grid"])
    names = sorted({k for c in cells for k in c})
    rows = []
    for cell in cells:
        params = [rational_str(as_rational(cell[k])) if k in cell else "" for k in names]
        try:
            rows.append([*params, *_sweep_cell(cfg, cell), ""])
        except ExpressibleError as exc:
            rows.append([*params, "", "", "", "", "", "", f"{type(exc).__name__}: {exc}"])
    cols = [
        *names, "limit_exact", "limit", "limit_error",
        f"ratio_n{cfg['n_ref']}", f"ratio_n{cfg['n_ref']}_error", "boxcount_slope", "error",
    ]
    return Result(cols, rows)


HANDLERS = {
    "construct": cmd_construct,
    "gaps": cmd_gaps,
    "find-n0": cmd_find_n0,
    "dimension": cmd_dimension,
    "boxcount": cmd_boxcount,
    "decode": cmd_decode,
    "identity": cmd_identity,
    "growth": cmd_growth,
    "probe": cmd_probe,
    "sweep": cmd_sweep,
}


# ---------------------------------------------------------------------------
# rendering


def _json_default(obj):
    if isinstance(obj, type(mpq(0))):
        return rational_str(obj)
    return str(obj)


def _echo(cfg: dict) -> dict:
    out = dict(cfg)
    if cfg.get("command") not in (None, "sweep"):
        try:
            out["resolved_spec"] = family_to_dict(family_from_config(cfg))
        except ValidationError:
            pass
    return out


def render(cfg: dict, result: Result) -> str:
    if cfg["format"] == "json":
        doc = {
            "config": _echo(cfg),
            "summary": result.summary,
            "columns": result.columns,
            "rows": result.rows,
        }
        return json.dumps(doc, indent=2, sort_keys=True, default=_json_default) + "\n"
    buf = io.StringIO()
    for key, value in sorted(_echo(cfg).items()):
        buf.write(f"# {key}: {json.dumps(value, sort_keys=True, default=_json_default)}\n")
    for key, value in sorted(result.summary.items()):
        buf.write(f"# result.{key}: {json.dumps(value, sort_keys=True, default=_json_default)}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(result.columns)
    writer.writerows(result.rows)
    return buf.getvalue()


def run(cfg: dict) -> tuple[int, str]:
    """Execute a resolved configuration; returns ``(exit_code, text)``."""
    result = HANDLERS[cfg["command"]](cfg)
    code = EXIT_INDETERMINATE if result.indeterminate else EXIT_OK
    return code, render(cfg, result)


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="expressible",
        description="Cantor-set constructions, gap checks and dimension bounds for expressible sets.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file; flags override its fields")
    common.add_argument("--family", choices=("thm1", "thm2", "thm3"))
    common.add_argument("--b")
    common.add_argument("--K")
    common.add_argument("--N")
    common.add_argument("--s")
    common.add_argument("--r")
    common.add_argument("--eta")
    common.add_argument("--fill", choices=("largest", "even"))
    common.add_argument("--epsilon")
    common.add_argument("--n", help="level range a..b or a single level")
    common.add_argument("--fit", help="levels used by the box-count regression, a..b")
    common.add_argument("--a1")
    common.add_argument("--x", help="a rational point p/q")
    common.add_argument("--word", help="digit word, comma separated")
    common.add_argument("--q-max", dest="q_max")
    common.add_argument("--exhaustive", action="store_const", const=True)
    common.add_argument("--no-check-gaps", dest="check_gaps", action="store_const", const=False)
    common.add_argument("--grid", help="sweep grid as JSON")
    common.add_argument("--n-ref", dest="n_ref")
    common.add_argument("--boxcount", action="store_const", const=True)
    common.add_argument("--output", help="output path, '-' for standard output")
    common.add_argument("--format", choices=("json", "csv"))
    common.add_argument("--precision", help="decimal digits in rendered values (default 50)")
    common.add_argument("--budget", help="maximum number of intervals to enumerate")
    common.add_argument("--depth")
    common.add_argument("--tail-depth", dest="tail_depth")
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def _error(exc: Exception, code: int) -> None:
    print(f"error: {exc}", file=sys.stderr)
    doc = {"error": {"type": type(exc).__name__, "message": str(exc), "exit_code": code}}
    print(json.dumps(doc, sort_keys=True), file=sys.stderr)


def main(argv=None) -> int:
    args = vars(build_parser().parse_args(argv))
    config_path = args.pop("config")
    try:
        file_cfg = None
        if config_path:
            try:
                with open(config_path, encoding="utf-8") as fh:
                    file_cfg = json.load(fh)
            except (OSError, json.JSONDecodeError) as exc:
                raise ConfigError(f"cannot read config {config_path}: {exc}") from None
        cfg = resolve_config(file_cfg, args)
        code, text = run(cfg)
    except ValidationError as exc:
        _error(exc, EXIT_VALIDATION)
        return EXIT_VALIDATION
    except (BudgetExceededError, DepthExceededError) as exc:
        _error(exc, EXIT_BUDGET)
        return EXIT_BUDGET
    except ExpressibleError as exc:
        _error(exc, EXIT_ERROR)
        return EXIT_ERROR

    if cfg["output"] == "-":
        sys.stdout.write(text)
    else:
        with open(cfg["output"], "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
