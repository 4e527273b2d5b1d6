"""Command-line front end.

Subcommands:

* ``table``         counts by nullity for every order up to n, from the
                    weight model; ``--check-brute-force`` re-derives the
                    same table by exhaustive enumeration and compares.
* ``spectrum``      order-n counts by rank; at q=2 the row is also
                    cross-checked against the closed forms.
* ``verify``        exhaustive cross-validation of the transition rules
                    and the kernel-structure predicates; with ``--seed``
                    it instead spot-checks random specs, which works far
                    beyond the exhaustive budget.
* ``count-string``  weighted count of extension chains realizing one
                    nullity string from a given (previous, current) pair.
* ``closed-forms``  GF(2) closed-form battery cross-checked against the
                    weight model.

Exit codes: 0 success, 2 a verification check failed, 3 the exhaustive
budget was exceeded, 4 invalid input, 5 unsupported option combination.

JSON output always has the shape ``{tool_version, command, params,
results, checks}``; matrix counts are decimal strings so arbitrarily
large exact values survive serialization.  CSV is long format (one row
per cell); text is for humans.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from . import __version__
from .counting import (
    PairState,
    closed_eta,
    closed_theta,
    count_string,
    count_table,
    invertible_formula,
    nullity1_structured_count,
    nullity_count_closed,
    positive_excursion_count,
    rank_spectrum,
    theta_eta,
)
from .enumeration import (
    BudgetExceededError,
    RuleReport,
    StructureReport,
    brute_force_table,
    sample_census,
    verify_structure_theorems,
    verify_transition_rules,
)

EXIT_OK = 0
EXIT_MISMATCH = 2
EXIT_BUDGET = 3
EXIT_INVALID = 4
EXIT_UNSUPPORTED = 5

DEFAULT_TRIALS = 256


class UsageError(Exception):
    """Bad command line; maps to exit code 4."""


class UnsupportedCombinationError(RuntimeError):
    """Coherent input the tool deliberately does not serve; exit code 5."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(message)


@dataclass(frozen=True)
class RunConfig:
    """One fully parsed invocation."""

    command: str
    n: Optional[int] = None
    q: Optional[int] = None
    nullity: Optional[int] = None
    format: str = "text"
    jobs: int = 1
    budget: Optional[int] = None
    seed: Optional[int] = None
    trials: int = DEFAULT_TRIALS
    out: Optional[str] = None
    check_brute_force: bool = False
    start: Optional[str] = None
    string: Optional[str] = None

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        known = {f for f in cls.__dataclass_fields__}
        return cls(**{k: v for k, v in vars(args).items() if k in known})


def build_parser() -> _Parser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--format", choices=("json", "csv", "text"), default="text",
                        help="output format (default: text)")
    shared.add_argument("--out", metavar="PATH",
                        help="write the report to PATH instead of stdout")

    parser = _Parser(prog="toepnull", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="command", required=True)

    p = sub.add_parser("table", parents=[shared],
                       help="counts by nullity for orders 0..n")
    p.add_argument("--n", type=int, required=True, help="largest order")
    p.add_argument("--q", type=int, required=True, help="field modulus (prime)")
    p.add_argument("--nullity", type=int, help="restrict output to one nullity")
    p.add_argument("--check-brute-force", action="store_true",
                   dest="check_brute_force",
                   help="re-derive the table by enumeration and compare")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    p.add_argument("--budget", type=int, help="enumeration cap override")

    p = sub.add_parser("spectrum", parents=[shared],
                       help="order-n counts by rank")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--check-brute-force", action="store_true",
                   dest="check_brute_force",
                   help="re-derive the spectrum by enumeration and compare")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--budget", type=int)

    p = sub.add_parser("verify", parents=[shared],
                       help="cross-validate rules and kernel structure")
    p.add_argument("--n", type=int, required=True, help="largest order to scan")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--budget", type=int)
    p.add_argument("--seed", type=int,
                   help="sample random specs instead of scanning exhaustively")
    p.add_argument("--trials", type=int, default=DEFAULT_TRIALS,
                   help=f"samples when --seed is given (default: {DEFAULT_TRIALS})")

    p = sub.add_parser("count-string", parents=[shared],
                       help="weighted count of chains realizing a nullity string")
    p.add_argument("--start", required=True,
                   help="previous,current nullity pair, e.g. 0,1")
    p.add_argument("--string", required=True,
                   help="comma-separated nullity string, e.g. 1,2,1,0")
    p.add_argument("--q", type=int, required=True)

    p = sub.add_parser("closed-forms", parents=[shared],
                       help="GF(2) closed forms vs the weight model")
    p.add_argument("--n", type=int, required=True, help="check orders 1..n")
    p.add_argument("--q", type=int, default=2,
                   help="must be 2; other moduli have no closed forms here")
    return parser


# ---------------------------------------------------------------------------
# payload helpers


def _cex_payload(cex) -> Optional[Dict]:
    if cex is None:
        return None
    return {"order": cex.order, "a": list(cex.a), "b": list(cex.b),
            "index": cex.index, "detail": cex.detail}


def _cex_line(cex) -> str:
    return (f"counterexample: order={cex.order} index={cex.index} "
            f"a={list(cex.a)} b={list(cex.b)}: {cex.detail}")


def _rule_checks_payload(report: RuleReport) -> List[Dict]:
    out = []
    for name in sorted(report.checks):
        chk = report.checks[name]
        out.append({
            "name": f"rule:{name}",
            "passed": chk.failures == 0,
            "checked": chk.checked,
            "expected_offsets": {str(k): v for k, v in sorted(chk.expected_offsets.items())},
            "counterexample": _cex_payload(chk.counterexample),
        })
    return out


def _structure_checks_payload(report: StructureReport) -> List[Dict]:
    out = []
    for name in sorted(report.checks):
        chk = report.checks[name]
        out.append({
            "name": f"structure:{name}",
            "passed": chk.failures == 0,
            "checked": chk.checked,
            "cross_checked": chk.cross_checked,
            "counterexample": _cex_payload(chk.counterexample),
        })
    return out


def _check_lines(checks: List[Dict]) -> List[str]:
    lines = []
    for c in checks:
        mark = "ok" if c["passed"] else "FAIL"
        extra = f" checked={c['checked']}" if "checked" in c else ""
        lines.append(f"[{mark:>4}] {c['name']}{extra}")
    return lines


def _parse_int_list(text: str, label: str) -> Tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError:
        raise ValueError(f"{label} must be comma-separated integers, got {text!r}") from None


def _row_payload(counts: Sequence[int]) -> Dict[str, str]:
    return {str(nu): str(c) for nu, c in enumerate(counts)}


# ---------------------------------------------------------------------------
# subcommands


def _cmd_table(cfg: RunConfig):
    table = count_table(cfg.n, cfg.q)
    params = {"n": cfg.n, "q": cfg.q, "nullity": cfg.nullity, "jobs": cfg.jobs,
              "budget": cfg.budget, "check_brute_force": cfg.check_brute_force}
    checks: List[Dict] = []
    code = EXIT_OK
    if cfg.check_brute_force:
        brute = brute_force_table(cfg.n, cfg.q, budget=cfg.budget, jobs=cfg.jobs)
        passed = brute.counts == table.counts
        check = {"name": "model_vs_enumeration", "passed": passed}
        if not passed:
            for m in range(cfg.n + 1):
                if brute.counts[m] != table.counts[m]:
                    check["detail"] = (f"order {m}: enumeration {list(brute.counts[m])}"
                                       f" != model {list(table.counts[m])}")
                    break
            code = EXIT_MISMATCH
        checks.append(check)

    if cfg.nullity is not None:
        if cfg.nullity < 0:
            raise ValueError("--nullity must be nonnegative")
        cells = [(m, table.count(m, cfg.nullity) if cfg.nullity <= m + 1 else 0)
                 for m in range(cfg.n + 1)]
        results = {"q": cfg.q, "n": cfg.n, "nullity": cfg.nullity,
                   "rows": [{"m": m, "count": str(c)} for m, c in cells]}
        csv_rows = [["m", "nullity", "count"]]
        csv_rows += [[m, cfg.nullity, str(c)] for m, c in cells]
        text = [f"counts at nullity {cfg.nullity} over GF({cfg.q})"]
        text += [f"m={m}: {c}" for m, c in cells]
    else:
        rows = [{"m": m, "counts": _row_payload(table.row(m))}
                for m in range(cfg.n + 1)]
        results = {"q": cfg.q, "n": cfg.n, "rows": rows}
        csv_rows = [["m", "nullity", "count"]]
        for m in range(cfg.n + 1):
            csv_rows += [[m, nu, str(c)] for nu, c in enumerate(table.row(m))]
        text = [f"counts by nullity over GF({cfg.q}), orders 0..{cfg.n}"]
        text += [f"m={m}: " + " ".join(str(c) for c in table.row(m))
                 for m in range(cfg.n + 1)]
    if checks:
        text.append("enumeration check: " + ("ok" if checks[0]["passed"] else "MISMATCH"))
    return params, results, checks, csv_rows, text, code


def _cmd_spectrum(cfg: RunConfig):
    spectrum = rank_spectrum(cfg.n, cfg.q)
    params = {"n": cfg.n, "q": cfg.q, "jobs": cfg.jobs, "budget": cfg.budget,
              "check_brute_force": cfg.check_brute_force}
    checks: List[Dict] = []
    code = EXIT_OK
    if cfg.q == 2:
        bad = [r for r, c in spectrum.items()
               if c != nullity_count_closed(cfg.n, cfg.n + 1 - r)]
        check = {"name": "closed_form_cross_check", "passed": not bad,
                 "checked": len(spectrum)}
        if bad:
            check["detail"] = f"ranks disagreeing with the closed forms: {bad}"
            code = EXIT_MISMATCH
        checks.append(check)
    if cfg.check_brute_force:
        brute = brute_force_table(cfg.n, cfg.q, budget=cfg.budget, jobs=cfg.jobs)
        expected = {cfg.n + 1 - nu: c for nu, c in enumerate(brute.row(cfg.n))}
        passed = expected == dict(spectrum)
        check = {"name": "model_vs_enumeration", "passed": passed}
        if not passed:
            check["detail"] = f"enumeration spectrum {expected} != model {dict(spectrum)}"
            code = EXIT_MISMATCH
        checks.append(check)
    entries = [{"rank": r, "count": str(c)} for r, c in spectrum.items()]
    results = {"q": cfg.q, "n": cfg.n, "spectrum": entries}
    csv_rows = [["rank", "count"]] + [[e["rank"], e["count"]] for e in entries]
    text = [f"order-{cfg.n} counts by rank over GF({cfg.q})"]
    text += [f"rank {e['rank']}: {e['count']}" for e in entries]
    text += _check_lines(checks)
    return params, results, checks, csv_rows, text, code


def _cmd_verify(cfg: RunConfig):
    params = {"n": cfg.n, "q": cfg.q, "jobs": cfg.jobs, "budget": cfg.budget,
              "seed": cfg.seed, "trials": cfg.trials if cfg.seed is not None else None}
    if cfg.seed is not None:
        report = sample_census(cfg.n, cfg.q, cfg.trials, cfg.seed)
        checks = _rule_checks_payload(report)
        results = {"mode": "sampled", "q": cfg.q, "n": cfg.n,
                   "trials": cfg.trials, "seed": cfg.seed, "passed": report.passed,
                   "counterexample": _cex_payload(report.counterexample)}
        text = [f"sampled census check: n={cfg.n} q={cfg.q} "
                f"trials={cfg.trials} seed={cfg.seed}"]
        text += _check_lines(checks)
        if report.counterexample is not None:
            text.append(_cex_line(report.counterexample))
        text.append("result: " + ("PASS" if report.passed else "FAIL"))
        return (params, results, checks, None, text,
                EXIT_OK if report.passed else EXIT_MISMATCH)

    rules = verify_transition_rules(cfg.n, cfg.q, budget=cfg.budget, jobs=cfg.jobs)
    structure = verify_structure_theorems(cfg.n, cfg.q, budget=cfg.budget,
                                          jobs=cfg.jobs)
    checks = _rule_checks_payload(rules) + _structure_checks_payload(structure)
    passed = rules.passed and structure.passed
    worst = rules.counterexample
    if worst is None:
        bad = [c.counterexample for c in structure.checks.values() if c.counterexample]
        worst = min(bad, key=lambda c: c.sort_key) if bad else None
    results = {"mode": "exhaustive", "q": cfg.q, "n": cfg.n,
               "rules_passed": rules.passed, "structure_passed": structure.passed,
               "passed": passed, "counterexample": _cex_payload(worst)}
    text = [f"exhaustive verification: n={cfg.n} q={cfg.q}"]
    text += _check_lines(checks)
    if worst is not None:
        text.append(_cex_line(worst))
    text.append("result: " + ("PASS" if passed else "FAIL"))
    return params, results, checks, None, text, EXIT_OK if passed else EXIT_MISMATCH


def _cmd_count_string(cfg: RunConfig):
    start_vals = _parse_int_list(cfg.start, "start")
    if len(start_vals) != 2:
        raise ValueError(f"start must be 'previous,current', got {cfg.start!r}")
    values = _parse_int_list(cfg.string, "string")
    state = PairState(*start_vals)
    total = count_string(state, values, cfg.q)
    params = {"q": cfg.q, "start": list(start_vals), "string": list(values)}
    results = {"count": str(total)}
    return params, results, [], None, [str(total)], EXIT_OK


def _nullity1_closed(n: int) -> int:
    # (n + 3) * 2^(n-2), which is the integer 2 at n = 1
    return (n + 3) * 2 ** (n - 2) if n >= 2 else 2


def _cmd_closed_forms(cfg: RunConfig):
    if cfg.q != 2:
        raise UnsupportedCombinationError(
            f"closed forms are specific to GF(2), got q={cfg.q}")
    if cfg.n < 1:
        raise ValueError("--n must be at least 1")
    table = count_table(cfg.n, 2)
    tallies = {"theta": [0, 0], "eta": [0, 0], "invertible": [0, 0],
               "nullity_counts": [0, 0], "nullity1_structured": [0, 0],
               "positive_excursions": [0, 0]}
    rows = []
    for m in range(1, cfg.n + 1):
        duo = theta_eta(m)
        th, et = closed_theta(m), closed_eta(m)
        tallies["theta"][0] += 1
        tallies["theta"][1] += th != duo.theta
        tallies["eta"][0] += 1
        tallies["eta"][1] += et != duo.eta
        inv = th + et
        if m >= 2:
            inv = invertible_formula(m)
            tallies["invertible"][0] += 1
            tallies["invertible"][1] += inv != table.count(m, 0)
        for k in range(m + 2):
            tallies["nullity_counts"][0] += 1
            tallies["nullity_counts"][1] += nullity_count_closed(m, k) != table.count(m, k)
        one = nullity1_structured_count(m)
        tallies["nullity1_structured"][0] += 1
        tallies["nullity1_structured"][1] += one != _nullity1_closed(m)
        exc = positive_excursion_count(m, 2)
        tallies["positive_excursions"][0] += 1
        tallies["positive_excursions"][1] += exc != m * 2 ** (m - 1)
        rows.append({"n": m, "theta": str(th), "eta": str(et), "invertible": str(inv),
                     "nullity1_structured": str(one), "positive_excursions": str(exc)})
    checks = [{"name": f"closed:{name}", "passed": t[1] == 0, "checked": t[0]}
              for name, t in tallies.items()]
    code = EXIT_OK if all(c["passed"] for c in checks) else EXIT_MISMATCH
    params = {"n": cfg.n, "q": cfg.q}
    results = {"q": 2, "n": cfg.n, "rows": rows}
    header = ["n", "theta", "eta", "invertible", "nullity1_structured",
              "positive_excursions"]
    csv_rows = [header] + [[r[h] for h in header] for r in rows]
    text = [f"closed-form battery through order {cfg.n} over GF(2)"]
    text += [f"n={r['n']}: theta={r['theta']} eta={r['eta']} "
             f"invertible={r['invertible']} nullity1={r['nullity1_structured']} "
             f"excursions={r['positive_excursions']}" for r in rows]
    text += _check_lines(checks)
    return params, results, checks, csv_rows, text, code


_HANDLERS = {
    "table": _cmd_table,
    "spectrum": _cmd_spectrum,
    "verify": _cmd_verify,
    "count-string": _cmd_count_string,
    "closed-forms": _cmd_closed_forms,
}


# ---------------------------------------------------------------------------
# driver


def _render(cfg: RunConfig, payload: Dict, csv_rows: Optional[List[List]],
            text_lines: List[str]) -> str:
    if cfg.format == "json":
        return json.dumps(payload, indent=2) + "\n"
    if cfg.format == "csv":
        if csv_rows is None:
            raise UnsupportedCombinationError(
                f"--format csv is not available for {cfg.command}")
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows(csv_rows)
        return buf.getvalue()
    return "\n".join(text_lines) + "\n"


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"toepnull: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    cfg = RunConfig.from_args(args)
    try:
        params, results, checks, csv_rows, text_lines, code = _HANDLERS[cfg.command](cfg)
        payload = {
            "tool_version": __version__,
            "command": cfg.command,
            "params": params,
            "results": results,
            "checks": checks,
        }
        rendered = _render(cfg, payload, csv_rows, text_lines)
    except UnsupportedCombinationError as exc:
        print(f"toepnull: unsupported: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except BudgetExceededError as exc:
        print(f"toepnull: budget: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except ValueError as exc:
        print(f"toepnull: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as handle:
            handle.write(rendered)
    else:
        sys.stdout.write(rendered)
    return code


def entry() -> None:
    sys.exit(main())
