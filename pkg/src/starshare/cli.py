"""Command-line front end.

Subcommands: ``bound``, ``simulate``, ``sweep``, ``visibility``, ``window``,
``m3check`` and ``verify``. Exit status is 0 on success, 1 on invalid input
and 2 when ``verify`` finds a failing check.

Scenario parameters come from flags, optionally layered over a config file
of flat ``key = value`` lines with ``[branch N]`` sections for per-branch
pointer parameters; flags win.
"""
from __future__ import annotations

import argparse
import configparser
import csv
import io
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from . import analysis, checks
from .inequality import UnsupportedCase, analytic_bound, analytic_bound_noise, simulate_s
from .model import (
    ConfigError,
    NetworkConfig,
    NoiseParams,
    ObserverSelection,
    all_selections,
    config_from_tables,
    optimal_f,
)

EXIT_OK, EXIT_INPUT, EXIT_VERIFY = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def fmt_text(x: float) -> str:
    return f"{x:.6f}"


def fmt_csv(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, str):
        return x
    return f"{x:.9g}"


def write_csv(rows: Sequence[Sequence], header: Sequence[str], path: str | None, stream=None) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt_csv(x) for x in row])
    if path:
        Path(path).write_text(buf.getvalue(), encoding="utf-8", newline="")
    else:
        (stream or sys.stdout).write(buf.getvalue())


def parse_floats(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise ConfigError(f"cannot parse number list {text!r}") from None


def parse_table(text: str) -> list[list[float]]:
    """``"0.8"`` or ``"0.6,0.8"`` (one row) or ``"0.6,0.8;0.7,0.8"`` (per branch)."""
    return [parse_floats(row) for row in text.split(";")]


def parse_selections(text: str, n: int, m: int) -> list[ObserverSelection]:
    """Decode ``--j``: ``all``, one selection (``1,2``), or several (``11,12``)."""
    text = text.strip()
    if text == "all":
        return all_selections(n, m)
    if ";" in text:
        sels = [ObserverSelection.parse(t) for t in text.split(";")]
    else:
        tokens = [t.strip() for t in text.split(",")]
        if n > 1 and len(tokens) == n and all(len(t) == 1 for t in tokens):
            sels = [ObserverSelection.parse(text)]
        else:
            sels = [ObserverSelection.parse(t) for t in tokens]
    return [s.validate(n, m) for s in sels]


@dataclass
class RunConfig:
    n: int
    m: int
    k: int
    network: NetworkConfig
    selections: list[ObserverSelection]
    noise: NoiseParams | None = None
    selection_text: str = "all"
    extra: dict = field(default_factory=dict)

    def describe(self) -> list[str]:
        lines = [f"# scenario: n={self.n} m={self.m} k={self.k}"]
        for i in range(self.n):
            g = ",".join(fmt_csv(x) for x in self.network.branch_g(i)) or "-"
            f = ",".join(fmt_csv(x) for x in self.network.branch_f(i)) or "-"
            lines.append(f"# branch {i + 1}: G={g} F={f}")
        lines.append(f"# selections: {' '.join(s.label for s in self.selections)}")
        if self.noise is None:
            lines.append("# noise: none")
        else:
            pairs = " ".join(f"({fmt_csv(v)},{fmt_csv(r)})" for v, r in zip(self.noise.v, self.noise.r))
            lines.append(f"# noise (v,r) per source: {pairs}")
        for key, value in self.extra.items():
            lines.append(f"# {key}: {value}")
        return lines


def read_config_file(path: str) -> tuple[dict[str, str], dict[int, dict[str, str]]]:
    """Flat ``key = value`` lines plus optional ``[branch N]`` sections."""
    text = Path(path).read_text(encoding="utf-8")
    parser = configparser.ConfigParser(inline_comment_prefixes=("#",))
    try:
        parser.read_string("[scenario]\n" + text)
    except configparser.Error as exc:
        raise ConfigError(f"bad config file {path}: {exc}") from None
    flat = dict(parser["scenario"])
    branches = {}
    for name in parser.sections():
        if name.startswith("branch"):
            try:
                idx = int(name.split()[1])
            except (IndexError, ValueError):
                raise ConfigError(f"bad section name [{name}]") from None
            branches[idx] = dict(parser[name])
    return flat, branches


def read_noise_file(path: str) -> NoiseParams:
    """One ``v,r`` row per source; a ``v,r`` header line is optional."""
    vs, rs = [], []
    for row in csv.reader(Path(path).read_text(encoding="utf-8").splitlines()):
        if not row or row[0].strip().startswith("#") or row[0].strip() == "v":
            continue
        try:
            vs.append(float(row[0]))
            rs.append(float(row[1]))
        except (IndexError, ValueError):
            raise ConfigError(f"bad noise row {row!r} in {path}") from None
    return NoiseParams(tuple(vs), tuple(rs))


def resolve(args) -> RunConfig:
    flat, branches = read_config_file(args.config) if getattr(args, "config", None) else ({}, {})

    def pick(name, default=None):
        value = getattr(args, name, None)
        if value is not None:
            return value
        return flat.get(name, default)

    try:
        n, m, k = int(pick("n", 1)), int(pick("m", 1)), int(pick("k", 2))
    except ValueError:
        raise ConfigError("n, m, k must be integers") from None

    g_text, f_text = pick("g"), pick("f")
    if branches and getattr(args, "g", None) is None:
        g_rows = [parse_floats(branches[i].get("g", "")) for i in sorted(branches)]
        f_rows = [parse_floats(branches[i]["f"]) if "f" in branches[i] else None for i in sorted(branches)]
    else:
        g_rows = parse_table(g_text) if g_text else [[]]
        f_rows = parse_table(f_text) if f_text else [None]
    if len(g_rows) == 1:
        g_rows = g_rows * n
    if len(f_rows) == 1:
        f_rows = f_rows * n
    if len(g_rows) != n or len(f_rows) != n:
        raise ConfigError(f"weak parameters given for {len(g_rows)} branches, expected n={n}")
    if m > 1 and any(len(r) != m - 1 for r in g_rows):
        raise ConfigError(f"--g needs {m - 1} value(s) per branch for m={m}")
    # branches without explicit F sit on the optimal trade-off
    f_rows = [[optimal_f(g) for g in grow] if frow is None else frow for grow, frow in zip(g_rows, f_rows)]
    network = config_from_tables(n, m, k, g_rows, f_rows)

    sel_text = str(pick("j", "all"))
    selections = parse_selections(sel_text, n, m)

    noise = None
    noise_file = pick("noise_file")
    noise_text = pick("noise")
    if noise_file:
        noise = read_noise_file(noise_file).validate(n)
    elif noise_text:
        vals = parse_floats(noise_text)
        if len(vals) != 2:
            raise ConfigError("--noise expects 'v,r'")
        noise = NoiseParams.shared(n, vals[0], vals[1])
    return RunConfig(n, m, k, network, selections, noise, sel_text)


def _add_scenario(p: argparse.ArgumentParser, need_weak: bool = True) -> None:
    p.add_argument("--config", help="config file with key = value lines and [branch N] sections")
    p.add_argument("--n", type=int, help="number of branches")
    p.add_argument("--m", type=int, help="Alices per branch")
    p.add_argument("--k", type=int, help="settings per observer")
    if need_weak:
        p.add_argument("--g", help="precision factors, one per weak stage; ';' separates branches")
        p.add_argument("--f", help="quality factors (default: sqrt(1 - G^2))")
    p.add_argument("--j", help="selections: all | 1,2 | 11,12,21,22")
    p.add_argument("--out", help="write CSV to this path")


def cmd_bound(args, out) -> int:
    rc = resolve(args)
    for line in rc.describe():
        print(line, file=out)
    rows = []
    for j in rc.selections:
        if rc.noise is None:
            s = analytic_bound(rc.network, j)
        else:
            s = analytic_bound_noise(rc.network, j, rc.noise)
        violated = s > rc.k - 1
        rows.append((j.label, s, float(rc.k - 1), violated))
        print(
            f"S_{j.label} = {fmt_text(s)}  classical_bound = {rc.k - 1}  violated = {fmt_csv(violated)}",
            file=out,
        )
    if args.out:
        write_csv(rows, ["selection", "s_value", "classical_bound", "violated"], args.out)
    return EXIT_OK


def cmd_simulate(args, out) -> int:
    rc = resolve(args)
    for line in rc.describe():
        print(line, file=out)
    rows = []
    for j in rc.selections:
        res = simulate_s(rc.network, j, rc.noise)
        terms = "  ".join(f"I_{l + 1} = {fmt_text(t)}" for l, t in enumerate(res.i_terms))
        print(
            f"S_{j.label} = {fmt_text(res.s_value)}  classical_bound = {rc.k - 1}  "
            f"violated = {fmt_csv(res.violated)}  {terms}",
            file=out,
        )
        rows.append((j.label, res.s_value, res.classical_bound, res.violated, *res.i_terms))
    if args.out:
        header = ["selection", "s_value", "classical_bound", "violated"] + [f"I_{l}" for l in range(1, rc.k + 1)]
        write_csv(rows, header, args.out)
    return EXIT_OK


def _grid(args) -> np.ndarray:
    if args.steps < 1:
        raise ConfigError("--steps must be >= 1")
    if not (0.0 <= args.grid_from <= 1.0 and 0.0 <= args.grid_to <= 1.0):
        raise ConfigError("grid endpoints must lie in [0, 1]")
    return np.linspace(args.grid_from, args.grid_to, args.steps)


def gain_sweep_rows(n: int, k: int, selections, grid):
    rows = analysis.sweep(n, k, grid, selections)
    header = ["g"] + [f"S_{j.label}" for j in selections] + ["classical_bound", "min_s", "all_violated"]
    body = [
        [row.g, *(row.s_values[j.label] for j in selections), row.classical_bound, row.min_s, row.all_violated]
        for row in rows
    ]
    return header, body


def noise_sweep_rows(n: int, k: int, g: float, r_values, grid):
    header = ["v"] + [f"r={fmt_csv(r)}" for r in r_values] + ["classical_bound"]
    body = [[float(v), *(analysis.noisy_s(n, k, g, float(v), r) for r in r_values), float(k - 1)] for v in grid]
    return header, body


def cmd_sweep(args, out) -> int:
    n = args.n if args.n is not None else 2
    k = args.k if args.k is not None else 2
    grid = _grid(args)
    print(f"# scenario: n={n} m=2 k={k}", file=out)
    if args.mode == "gain":
        selections = parse_selections(args.j or "all", n, 2)
        print(f"# mode: gain  selections: {' '.join(s.label for s in selections)}", file=out)
        print(f"# grid: from={args.grid_from} to={args.grid_to} steps={args.steps}", file=out)
        header, body = gain_sweep_rows(n, k, selections, grid)
    else:
        g = parse_floats(args.g)[0] if args.g else 0.8
        r_values = parse_floats(args.r) if args.r else [0.0, 1.0, 1 / 3]
        print(f"# mode: visibility  G={fmt_csv(g)}  r={','.join(fmt_csv(r) for r in r_values)}", file=out)
        print(f"# grid: from={args.grid_from} to={args.grid_to} steps={args.steps}", file=out)
        header, body = noise_sweep_rows(n, k, g, r_values, grid)
    write_csv(body, header, args.out, stream=out)
    return EXIT_OK


def cmd_visibility(args, out) -> int:
    n = args.n if args.n is not None else 1
    print(f"# scenario: n={n} m=2 k={args.k} r={fmt_csv(args.r)} tol={args.tol:g}", file=out)
    v = analysis.critical_visibility(n, args.k, args.r, args.tol)
    print(f"critical_visibility = {'none' if v is None else fmt_text(v)}", file=out)
    return EXIT_OK


def cmd_window(args, out) -> int:
    n = args.n if args.n is not None else 2
    selections = parse_selections(args.j or "all", n, 2)
    print(f"# scenario: n={n} m=2 k={args.k}", file=out)
    print(f"# selections: {' '.join(s.label for s in selections)}", file=out)
    w = analysis.violation_window(n, args.k, selections)
    if w.empty:
        print(f"window = empty  gstar = {fmt_text(w.g_star)}  vstar = {fmt_text(w.v_star)}", file=out)
    else:
        print(
            f"lo = {fmt_text(w.lo)}  hi = {fmt_text(w.hi)}  "
            f"gstar = {fmt_text(w.g_star)}  vstar = {fmt_text(w.v_star)}",
            file=out,
        )
    return EXIT_OK


def cmd_m3check(args, out) -> int:
    n = args.n if args.n is not None else 2
    print(f"# scenario: n={n} m=3 k={args.k}", file=out)
    g1, g2, value = analysis.m3_no_sharing_check(n, args.k)
    print(
        f"G1 = {fmt_text(g1)}  G2 = {fmt_text(g2)}  value = {fmt_text(value)}  "
        f"classical_bound = {args.k - 1}  sharing = {fmt_csv(value > args.k - 1)}",
        file=out,
    )
    return EXIT_OK


def regression_csvs() -> dict[str, str]:
    """Fig. 2 and Fig. 3 sweep data rendered to CSV text."""
    grid = np.linspace(0.0, 1.0, 201)
    rendered = {}
    for n in (2, 3):
        for k in (2, 3, 4):
            header, body = gain_sweep_rows(n, k, all_selections(n, 2), grid)
            buf = io.StringIO()
            write_csv(body, header, None, stream=buf)
            rendered[f"gain_n{n}_k{k}.csv"] = buf.getvalue()
    for k in (2, 3):
        header, body = noise_sweep_rows(2, k, 0.8, [0.0, 1.0, 1 / 3], grid)
        buf = io.StringIO()
        write_csv(body, header, None, stream=buf)
        rendered[f"visibility_k{k}.csv"] = buf.getvalue()
    return rendered


def cmd_verify(args, out) -> int:
    failed = 0
    for number, (title, runner) in checks.CRITERIA.items():
        results = runner()
        ok = all(r.passed for r in results)
        failed += not ok
        print(f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title}", file=out)
        for r in results:
            print(f"    {r.line()}", file=out)
    first, second = regression_csvs(), regression_csvs()
    same = first == second
    failed += not same
    print(f"[{'PASS' if same else 'FAIL'}] regression CSVs reproducible ({len(first)} files)", file=out)
    if args.out:
        outdir = Path(args.out)
        outdir.mkdir(parents=True, exist_ok=True)
        for name, text in first.items():
            (outdir / name).write_text(text, encoding="utf-8", newline="")
    print(f"{'all checks passed' if not failed else f'{failed} group(s) failed'}", file=out)
    return EXIT_OK if not failed else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="starshare", description="Network nonlocality sharing in (n, m, k) star networks.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("bound", help="closed-form S_j")
    _add_scenario(p)
    p.add_argument("--noise", help="shared noise 'v,r' (m=2, uniform selections only)")
    p.add_argument("--noise-file", dest="noise_file", help="per-source noise CSV: v,r per line")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("simulate", help="S_j by exact enumeration")
    _add_scenario(p)
    p.add_argument("--noise", help="shared noise 'v,r'")
    p.add_argument("--noise-file", dest="noise_file", help="per-source noise CSV: v,r per line")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep", help="CSV sweep over G (gain mode) or over visibility")
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--j", help="selections for gain mode (default all)")
    p.add_argument("--mode", choices=("gain", "visibility"), default="gain")
    p.add_argument("--g", help="fixed precision factor for visibility mode (default 0.8)")
    p.add_argument("--r", help="colored fractions for visibility mode (default 0,1,1/3)")
    p.add_argument("--from", dest="grid_from", type=float, default=0.0)
    p.add_argument("--to", dest="grid_to", type=float, default=1.0)
    p.add_argument("--steps", type=int, default=101)
    p.add_argument("--out", help="CSV path (default: stdout)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("visibility", help="critical visibility for m=2 sharing")
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--r", type=float, default=0.0)
    p.add_argument("--tol", type=float, default=1e-6)
    p.set_defaults(func=cmd_visibility)

    p = sub.add_parser("window", help="simultaneous-violation window over G")
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--j", help="selection set (default all)")
    p.set_defaults(func=cmd_window)

    p = sub.add_parser("m3check", help="maximin over (G1, G2) for m=3")
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int, default=2)
    p.set_defaults(func=cmd_m3check)

    p = sub.add_parser("verify", help="run every cross-check and pinned number")
    p.add_argument("--out", help="directory for the regression CSVs")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, out)
    except (ConfigError, UnsupportedCase, ValueError, OSError) as exc:
        print(f"starshare: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
