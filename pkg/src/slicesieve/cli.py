"""Command-line front end.

Exit codes: 0 for a clean run (any verdict), 1 for bad arguments, 2 when two
independent computations disagree or a verification fails.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .gf2 import is_prime
from .homology import (
    HomologyMismatch,
    PretzelSpec,
    SpecError,
    alexander_closed_form,
    alexander_polynomial,
    branched_cover_h1_mod2,
    hypothesis_check,
)
from .laurent import canonicalize, render
from .obstruct import (
    CrossCheckError,
    DecompositionError,
    extract_h,
    f_poly,
    g_poly,
    load_golden,
    table_rows,
    twisted_reduced_polynomial,
    valid_table_ns,
    verify_rows,
    norm_obstruction_verdict,
)
from .polymat import DetStrategy, mat_det

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INCONSISTENT = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


@dataclass
class CliConfig:
    command: str
    n: list[int] | None = None
    m: int | None = None
    p: int | None = None
    sign: str = "+"
    format: str = "text"
    det_strategy: str | None = None
    output: str | None = None
    mode: str = "both"
    verify: bool = False
    n_max: int | None = None
    golden: str | None = None
    quick: bool = False

    def strategy(self) -> DetStrategy | None:
        return DetStrategy(self.det_strategy) if self.det_strategy else None

    def specs(self) -> list[PretzelSpec]:
        if not self.n or self.m is None:
            raise UsageError("--n and --m are required")
        try:
            return [PretzelSpec.make(n, self.m, self.p, self.sign) for n in self.n]
        except SpecError as exc:
            raise UsageError(str(exc)) from exc


def _poly_text(label: str, coeffs, rendered) -> str:
    if coeffs is None:
        return f"{label:<10} -"
    return f"{label:<10} {rendered}   {coeffs}"


def _counts_label(spec: PretzelSpec) -> str:
    return f"P({2 * spec.n}, {spec.m}, {-spec.third}, {-spec.m})"


def _emit(cfg: CliConfig, text: str) -> None:
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        print(text)


# ---------------------------------------------------------------------------
# analyze


def _analyze_one(args: tuple[PretzelSpec, str, str | None]) -> dict:
    spec, mode, det_mode = args
    strategy = DetStrategy(det_mode) if det_mode else None
    _, report = norm_obstruction_verdict(spec, mode, strategy)
    return report.to_json()


def _pool_size() -> int:
    raw = os.environ.get("SLICE_SIEVE_THREADS", "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def format_report_text(report: dict) -> str:
    s = report["spec"]
    spec = PretzelSpec(s["n"], s["m"], s["p"], s["sign"])
    r = report["rendered"]
    lines = [
        f"{_counts_label(spec)}   n={spec.n} m={spec.m} p={spec.p} sign={spec.sign_word}",
        "hypotheses " + "  ".join(f"{k}:{'ok' if v else 'FAIL'}" for k, v in report["hypotheses"].items()),
        f"2n = {report['b']}({spec.p})+{report['a']}   a={report['a']} b={report['b']}",
        _poly_text("f", report["f"], r.get("f")),
        _poly_text("g", report["g"], r.get("g")),
        _poly_text("h", report["h"], r.get("h")),
        _poly_text("numerator", report["numerator"], r.get("numerator")),
        "chain      " + "  ".join(f"{k}={v}" for k, v in report["chain"].items()),
        f"verdict    {report['verdict']}" + (f"   ({report['stage']})" if report["stage"] else ""),
    ]
    return "\n".join(lines)


def cmd_analyze(cfg: CliConfig) -> int:
    specs = cfg.specs()
    jobs = [(spec, cfg.mode, cfg.det_strategy) for spec in specs]
    workers = min(_pool_size(), len(jobs))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            reports = list(pool.map(_analyze_one, jobs))
    else:
        reports = [_analyze_one(j) for j in jobs]
    if cfg.format == "json":
        payload = reports[0] if len(reports) == 1 else reports
        _emit(cfg, json.dumps(payload, ensure_ascii=False, indent=2))
    else:
        _emit(cfg, "\n\n".join(format_report_text(r) for r in reports))
    return EXIT_OK


# ---------------------------------------------------------------------------
# tables


def cmd_tables(cfg: CliConfig) -> int:
    if cfg.p is None:
        raise UsageError("--p is required")
    if cfg.p < 3 or not is_prime(cfg.p):
        raise UsageError("p must be an odd prime")
    p = cfg.p
    golden = load_golden(cfg.golden)
    entry = golden.get(str(p))
    if cfg.n_max is not None:
        n_max = cfg.n_max
    elif entry is not None:
        n_max = max(int(r["n"]) for r in entry["rows"])
    else:
        n_max = (p + 1) // 2 + p
    rows = table_rows(p, valid_table_ns(p, n_max))
    problems: list[str] = []
    if cfg.verify:
        if entry is None:
            raise UsageError(f"no golden data for p = {p}; tables are available for p in {sorted(golden, key=int)}")
        problems = verify_rows(p, golden)
    if cfg.format == "json":
        payload = {
            "p": p,
            "golden": entry is not None,
            "rows": [
                {"n": r.n, "a": r.a, "b": r.b, "f": _coeff_list(r.f), "g": _coeff_list(r.g),
                 "f_text": render(r.f), "g_text": render(r.g)}
                for r in rows
            ],
        }
        if cfg.verify:
            payload["verified"] = not problems
            payload["mismatches"] = problems
        _emit(cfg, json.dumps(payload, ensure_ascii=False, indent=2))
    else:
        out = []
        if entry is None:
            out.append(f"no golden data for p = {p}; rows below are generated only")
        out.append(f"{'n':>3}  {'2n = bp+a':<14} {'f_b(t)':<34} g_n(t)")
        for r in rows:
            out.append(f"{r.n:>3}  {r.decomposition(p):<14} {render(r.f):<34} {render(r.g)}")
        if cfg.verify:
            if problems:
                out.append(f"verify: {len(problems)} mismatch(es)")
                out.extend(f"  {msg}" for msg in problems)
            else:
                out.append(f"verify: {len(entry['rows'])} rows match")
        _emit(cfg, "\n".join(out))
    return EXIT_INCONSISTENT if problems else EXIT_OK


def _coeff_list(f) -> list[int]:
    coeffs, _ = canonicalize(f).to_list()
    return [int(c) for c in coeffs]


# ---------------------------------------------------------------------------
# alexander, homology


def cmd_alexander(cfg: CliConfig) -> int:
    from .repcover import trivial_fox_matrix

    results = []
    status = EXIT_OK
    for spec in cfg.specs():
        seifert = alexander_polynomial(spec)
        fox = canonicalize(mat_det(trivial_fox_matrix(spec.n, spec.m, spec.sign), cfg.strategy() or DetStrategy()))
        closed = alexander_closed_form(spec.m)
        agree = seifert == fox == closed
        if not agree:
            status = EXIT_INCONSISTENT
        results.append(
            {
                "spec": spec.to_json(),
                "seifert": _coeff_list(seifert),
                "fox": _coeff_list(fox),
                "closed_form": _coeff_list(closed),
                "rendered": render(seifert),
                "agree": agree,
            }
        )
    if cfg.format == "json":
        _emit(cfg, json.dumps(results[0] if len(results) == 1 else results, ensure_ascii=False, indent=2))
    else:
        lines = []
        for r in results:
            s = r["spec"]
            spec = PretzelSpec(s["n"], s["m"], s["p"], s["sign"])
            lines.append(f"{_counts_label(spec)}   Δ(t) = {r['rendered']}   {r['seifert']}")
            lines.append(f"  Seifert, Fox and closed form agree: {r['agree']}")
        _emit(cfg, "\n".join(lines))
    return status


def cmd_homology(cfg: CliConfig) -> int:
    results = []
    for spec in cfg.specs():
        hyp = hypothesis_check(spec)
        if not hyp.flags["p-divides-m"]:
            raise UsageError(f"p = {spec.p} does not divide m = {spec.m}")
        structure = branched_cover_h1_mod2(spec)
        results.append({"spec": spec.to_json(), "hypotheses": hyp.to_json(), "structure": structure.to_json()})
    if cfg.format == "json":
        _emit(cfg, json.dumps(results[0] if len(results) == 1 else results, ensure_ascii=False, indent=2))
    else:
        lines = []
        for r in results:
            s, st = r["spec"], r["structure"]
            spec = PretzelSpec(s["n"], s["m"], s["p"], s["sign"])
            lines.append(f"{_counts_label(spec)}   H_1(Σ_{spec.p}; Z/2)")
            lines.append(f"  invariant factors  {', '.join(st['invariant_factors']) or '(none)'}")
            lines.append(f"  F_2-dimension      {st['f2_dimension']}")
            lines.append(f"  cyclic             {st['cyclic']}")
            lines.append(f"  isomorphic to V_p  {st['iso_to_vp']}")
        _emit(cfg, "\n".join(lines))
    return EXIT_OK


# ---------------------------------------------------------------------------
# selftest


def _suite_identities(quick: bool) -> list[tuple[str, bool, str]]:
    from .repcover import matrix_identity_suite

    out = []
    for p in (3, 5, 7) if quick else (3, 5, 7, 11):
        res = matrix_identity_suite(p)
        bad = [k for k, v in res.items() if not v]
        out.append((f"matrix identities p={p}", not bad, "; ".join(bad)))
    return out


def _suite_fox() -> list[tuple[str, bool, str]]:
    from .knotpres import fundamental_identity_holds, reduced_presentation, wirtinger_presentation

    out = []
    for n, m in ((2, 3), (3, 5)):
        for sign in "+-":
            for pres in (wirtinger_presentation(n, m, sign), reduced_presentation(n, m, sign)):
                ok = all(fundamental_identity_holds(r, pres.num_generators) for r in pres.relators)
                out.append((f"fox identity {pres.label or ''} n={n} m={m} {sign}".replace("  ", " "), ok, ""))
    return out


def _suite_pipeline(quick: bool) -> list[tuple[str, bool, str]]:
    from .repcover import build_phi_fox_matrix, wirtinger_phi_matrix

    cases = [(2, 3, 3), (5, 3, 3), (4, 5, 5)]
    if not quick:
        cases.append((6, 11, 11))
    out = []
    for n, m, p in cases:
        spec = PretzelSpec(n, m, p, "+")
        tap = twisted_reduced_polynomial(spec)
        detail = ""
        try:
            h = extract_h(tap, f_poly(spec.b), g_poly(n, p))
            ok = True
            detail = f"h = {render(h)}"
        except Exception as exc:  # report every failure mode of the factorisation
            ok, detail = False, str(exc)
        out.append((f"det Φ(Z) ≐ f g h² for ({n},{m},{p},+)", ok, detail))
    full = canonicalize(mat_det(wirtinger_phi_matrix(2, 3, 3)))
    reduced = canonicalize(mat_det(build_phi_fox_matrix(2, 3, 3)))
    out.append(("full and reduced presentations agree (2,3,3,+)", full == reduced, ""))
    return out


def _suite_tables(golden_path: str | None) -> list[tuple[str, bool, str]]:
    try:
        golden = load_golden(golden_path)
    except (OSError, ValueError) as exc:
        return [(f"golden tables ({golden_path or 'packaged'})", False, str(exc))]
    out = []
    for p in (11, 5):
        try:
            problems = verify_rows(p, golden)
        except (KeyError, TypeError, ValueError) as exc:
            problems = [f"malformed fixture: {exc}"]
        out.append((f"golden table p={p} ({golden_path or 'packaged'})", not problems, "; ".join(problems)))
    return out


def cmd_selftest(cfg: CliConfig) -> int:
    suites = [
        ("identities", lambda: _suite_identities(cfg.quick)),
        ("fox", _suite_fox),
        ("pipeline", lambda: _suite_pipeline(cfg.quick)),
        ("tables", lambda: _suite_tables(cfg.golden)),
    ]
    failed = 0
    lines = []
    for name, run in suites:
        start = time.perf_counter()
        results = run()
        elapsed = time.perf_counter() - start
        for label, ok, detail in results:
            failed += not ok
            line = f"{'PASS' if ok else 'FAIL'}  [{name}] {label}"
            if detail and not ok:
                line += f"  -- {detail}"
            lines.append(line)
        lines.append(f"      [{name}] {elapsed:.2f}s")
    lines.append(f"{'all suites pass' if not failed else f'{failed} check(s) failed'}")
    _emit(cfg, "\n".join(lines))
    return EXIT_OK if not failed else EXIT_INCONSISTENT


# ---------------------------------------------------------------------------
# argument parsing


def _sign(value: str) -> str:
    table = {"plus": "+", "minus": "-", "+": "+", "-": "-"}
    if value not in table:
        raise argparse.ArgumentTypeError("sign must be plus or minus")
    return table[value]


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="slicesieve", description="Twisted Alexander sliceness obstructions for pretzel knots.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    def knot_args(sp, multi_n=False):
        sp.add_argument("--n", type=int, nargs="+" if multi_n else None, required=True)
        sp.add_argument("--m", type=int, required=True)
        sp.add_argument("--p", type=int, default=None, help="cover order (default: smallest suitable prime divisor of m)")
        sp.add_argument("--sign", type=_sign, default="+", help="plus or minus")

    def common(sp):
        sp.add_argument("--format", choices=("text", "json"), default="text")
        sp.add_argument("--output", default=None, help="write the report to this path instead of stdout")

    a = sub.add_parser("analyze", help="verdict for one or more specs")
    knot_args(a, multi_n=True)
    common(a)
    a.add_argument("--mode", choices=("closed-form", "pipeline", "both"), default="both")
    a.add_argument("--det-strategy", choices=("cofactor", "bareiss", "eval-interp"), default=None)

    t = sub.add_parser("tables", help="closed-form f_b and g_n tables")
    t.add_argument("--p", type=int, required=True)
    t.add_argument("--verify", action="store_true")
    t.add_argument("--n-max", type=int, default=None)
    t.add_argument("--golden", default=None, help="alternate golden-table JSON file")
    common(t)

    al = sub.add_parser("alexander", help="classical Alexander polynomial by two routes")
    knot_args(al, multi_n=True)
    common(al)
    al.add_argument("--det-strategy", choices=("cofactor", "bareiss", "eval-interp"), default=None)

    h = sub.add_parser("homology", help="H_1 of the branched cover with Z/2 coefficients")
    knot_args(h, multi_n=True)
    common(h)

    s = sub.add_parser("selftest", help="identity, pipeline and table checks")
    s.add_argument("--quick", action="store_true", help="skip the p=11 cases")
    s.add_argument("--golden", default=None)
    s.add_argument("--output", default=None)
    return parser


def parse_config(argv: list[str] | None = None) -> CliConfig:
    ns = build_parser().parse_args(argv)
    if ns.command is None:
        build_parser().error("a command is required")
    fields = {k.replace("-", "_"): v for k, v in vars(ns).items()}
    n = fields.pop("n", None)
    if isinstance(n, int):
        n = [n]
    return CliConfig(n=n, **{k: v for k, v in fields.items() if k in CliConfig.__dataclass_fields__})


COMMANDS = {
    "analyze": cmd_analyze,
    "tables": cmd_tables,
    "alexander": cmd_alexander,
    "homology": cmd_homology,
    "selftest": cmd_selftest,
}


def main(argv: list[str] | None = None) -> int:
    try:
        cfg = parse_config(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[cfg.command](cfg)
    except (UsageError, DecompositionError) as exc:
        print(f"slicesieve: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (CrossCheckError, HomologyMismatch) as exc:
        print(f"slicesieve: internal inconsistency: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT


if __name__ == "__main__":
    sys.exit(main())
