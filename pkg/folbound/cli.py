"""
Command line entry point.

    folbound <command> [case.json] [--report text|json] [--dot PATH]
             [--batch DIR] [--workers N] [--log-level LEVEL]

Exit codes: 0 when every verdict passes, 1 when a verdict fails, 2 on input,
precision or hypothesis errors.
"""

import argparse
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from .blowup import BlowupEngine, resolve_curve
from .branch import intersection_multiplicity, ramified_lift, reduced_equation, truncation_audit
from .casefile import COMMANDS, CaseFile, load_case
from .errors import CaseFileError, FolboundError, NonGenericInfinity, TruncationInsufficient
from .foliation import VectorField, germ_is_invariant
from .indices import (
    component_index_sums,
    generalized_curve_check,
    hertling_check,
    multiplicity_foliation,
    tangency_order,
    vanishing_order,
    z_recursion_check,
)
from .jets import build_jet_tree, package_subcurve
from .poincare import degree_bound_verdict, global_quantities, poincare_hopf_check
from .report import dual_graph, jet_tree_dot, render, resolution_dot, to_dot, tree_summary
from .theorems import (
    check_theorem1,
    check_theorem2,
    check_theorem3,
    proof_diagnostics,
    virtual_bound_check,
    weak_isolation,
    weak_isolation_blowup_property,
)
from .utils.env_loader import load_env_file
from .utils.logger import get_logger, log_exception, setup_logging

logger = get_logger(__name__)

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_ERROR = 2


@dataclass
class CaseResult:
    """Sections of a report and the verdicts they produced."""

    case: str
    sections: Dict[str, Any] = dc_field(default_factory=dict)
    verdicts: Dict[str, bool] = dc_field(default_factory=dict)
    dot: List[str] = dc_field(default_factory=list)

    @property
    def exit_code(self) -> int:
        return EXIT_PASS if all(self.verdicts.values()) else EXIT_FAIL

    def as_dict(self) -> Dict[str, Any]:
        return {
            "case": self.case,
            "verdict": "pass" if self.exit_code == EXIT_PASS else "fail",
            "verdicts": {k: "pass" if v else "fail" for k, v in self.verdicts.items()},
            **self.sections,
        }


def _audit(case: CaseFile):
    lifted = ramified_lift(case.branches, case.field)
    worst = truncation_audit(lifted, case.audit_order)
    logger.debug(f"Truncation audit for {case.name}: separation below order {worst + 1}")
    return lifted


# ----------------------------------------------------------------------------
# Commands
# ----------------------------------------------------------------------------

def cmd_invariants(case: CaseFile, result: CaseResult):
    out: Dict[str, Any] = {
        "branches": {b.name: b.invariants().as_dict() for b in case.branches},
        "nu_Gamma": sum(b.multiplicity for b in case.branches),
    }
    pairs = {}
    for i, a in enumerate(case.branches):
        for b in case.branches[i + 1:]:
            if a.is_exact and b.is_exact:
                pairs[f"{a.name}.{b.name}"] = resolve_pair(a, b)
    if pairs:
        out["intersections"] = pairs
    singular = len(case.branches) > 1 or any(not b.is_smooth for b in case.branches)
    if case.branches and singular and not any(b.vertical for b in case.branches):
        lifted = _audit(case)
        jets = build_jet_tree(lifted)
        out.update(
            {
                "ramification": lifted.ramification,
                "jet_nodes": len(jets),
                "mu_T": jets.mu_T,
                "mu_D": jets.mu_D,
                "packages": package_subcurve(jets).as_dict(),
            }
        )
        result.dot.append(jet_tree_dot(jets, f"{case.name}_jets"))
    result.sections["invariants"] = out


def resolve_pair(a, b) -> Dict[str, Any]:
    """(a.b) from the implicit equation and from Noether's formula on the common resolution."""
    tree = resolve_curve([a, b])
    value = intersection_multiplicity(a, b)
    return {"intersection": value, "noether": tree.noether_intersection(a.name, b.name)}


def cmd_resolve(case: CaseFile, result: CaseResult):
    if not case.branches:
        raise CaseFileError(f"case {case.name} has no branches to resolve")
    germs = [b.germ() for b in case.branches]
    tree = BlowupEngine(germs, field=case.foliation).resolve()
    result.sections["resolve"] = tree_summary(tree)
    result.dot.append(resolution_dot(tree, f"{case.name}_resolution"))
    result.dot.append(to_dot(dual_graph(tree), f"{case.name}_dual"))


def cmd_indices(case: CaseFile, result: CaseResult):
    field = case.require_foliation()
    per_branch = {}
    for b in case.branches:
        entry: Dict[str, Any] = {"invariant": germ_is_invariant(field, b.germ())}
        if entry["invariant"]:
            entry["Z"] = vanishing_order(field, b)
        else:
            try:
                entry["tang"] = tangency_order(field, b)
            except TruncationInsufficient as e:
                logger.warning(f"tang along {b.name} unavailable: {e}")
                entry["tang"] = None
        per_branch[b.name] = entry
    tree = BlowupEngine([b.germ() for b in case.branches], field=field).resolve()
    report = component_index_sums(tree)
    result.sections["indices"] = {
        "nu_F": multiplicity_foliation(field),
        "branches": per_branch,
        **report.as_dict(),
    }
    result.verdicts["indices"] = report.first_blowup_balance


def cmd_hertling(case: CaseFile, result: CaseResult):
    field = case.require_foliation()
    germs = [b.germ() for b in case.branches]
    tree = BlowupEngine(germs, field=field).resolve()
    hertling = hertling_check(field, tree)
    out: Dict[str, Any] = {"identity": hertling.as_dict()}
    ok = hertling.equal
    recursions = {}
    for b in case.branches:
        if germ_is_invariant(field, b.germ()):
            rec = z_recursion_check(field, b, tree)
            recursions[b.name] = rec.as_dict()
            ok = ok and rec.equal
    if recursions:
        out["z_recursion"] = recursions
    if case.branches and all(b.is_exact for b in case.branches):
        f = reduced_equation(case.branches, case.field)
        if field == VectorField.hamiltonian(f):
            steps = generalized_curve_check(f, case.branches, tree)
            out["generalized_curve"] = [
                {"center": s.center, "nu_H": s.nu_field, "nu_Gamma": s.nu_curve, "m": s.divisor_components, "holds": s.holds}
                for s in steps
            ]
            ok = ok and all(s.holds for s in steps)
    result.sections["hertling"] = out
    result.verdicts["hertling"] = ok


def cmd_theorem1(case: CaseFile, result: CaseResult):
    _audit(case)
    report = check_theorem1(case.require_foliation(), case.branches)
    result.sections["theorem1"] = report.as_dict()
    result.verdicts["theorem1"] = report.passed


def cmd_theorem2(case: CaseFile, result: CaseResult):
    report = check_theorem2(case.require_foliation(), case.branches)
    result.sections["theorem2"] = report.as_dict()
    result.verdicts["theorem2"] = report.passed


def cmd_theorem3(case: CaseFile, result: CaseResult):
    report = check_theorem3(case.require_foliation(), case.branches, gamma=case.selected_branch)
    result.sections["theorem3"] = report.as_dict()
    result.verdicts["theorem3"] = report.passed


def cmd_theorem4(case: CaseFile, result: CaseResult):
    report = degree_bound_verdict(case.require_global())
    result.sections["theorem4"] = report.as_dict()
    result.verdicts["theorem4"] = report.passed


def _singular(case: CaseFile) -> bool:
    return len(case.branches) > 1 or any(not b.is_smooth for b in case.branches)


def cmd_diagnostics(case: CaseFile, result: CaseResult):
    out: Dict[str, Any] = {}
    ok = True
    if case.foliation is not None and _singular(case):
        field = case.foliation
        diag = proof_diagnostics(field, case.branches, case.selected_branch)
        out["proof"] = diag.as_dict()
        out["virtual"] = {}
        for b in case.branches:
            if germ_is_invariant(field, b.germ()):
                virtual = virtual_bound_check(field, b)
                out["virtual"][b.name] = virtual.as_dict()
                ok = ok and virtual.passed
        if diag.weak_isolation.verdict:
            blowup = weak_isolation_blowup_property(field, case.branches)
            out["blowup"] = blowup.as_dict()
            ok = ok and blowup.verdict
    if case.global_instance is not None and case.foliation is not None and case.projective:
        inst = case.require_global()
        out["global"] = global_quantities(inst)
        try:
            ph = poincare_hopf_check(inst)
        except NonGenericInfinity as e:
            logger.warning(f"Poincaré–Hopf skipped for {case.name}: {e}")
            out["poincare_hopf"] = {"skipped": str(e)}
        else:
            out["poincare_hopf"] = ph.as_dict()
            ok = ok and ph.verdict
    result.sections["diagnostics"] = out
    result.verdicts["diagnostics"] = ok


HANDLERS: Dict[str, Callable[[CaseFile, CaseResult], None]] = {
    "invariants": cmd_invariants,
    "resolve": cmd_resolve,
    "indices": cmd_indices,
    "hertling": cmd_hertling,
    "theorem1": cmd_theorem1,
    "theorem2": cmd_theorem2,
    "theorem3": cmd_theorem3,
    "theorem4": cmd_theorem4,
    "diagnostics": cmd_diagnostics,
}


def applicable_commands(case: CaseFile) -> List[str]:
    """
    Commands that `all` expands to: the case's own list, else everything its data supports.

    Theorems 2 and 3 are left out when the curve is not weakly isolated.
    """
    if case.checks and "all" not in case.checks:
        return list(case.checks)
    commands = []
    if case.branches:
        commands += ["invariants", "resolve"]
        if case.foliation is not None:
            commands += ["indices", "hertling"]
            if _singular(case):
                if not any(b.vertical for b in case.branches):
                    commands.append("theorem1")
                if weak_isolation(case.foliation, case.branches).verdict:
                    commands += ["theorem2", "theorem3"]
                else:
                    logger.info(f"{case.name} is not weakly isolated; theorems 2 and 3 skipped")
    if case.global_instance is not None and case.foliation is not None and case.projective:
        commands.append("theorem4")
    commands.append("diagnostics")
    return commands


def run(case: CaseFile, command: str) -> CaseResult:
    """
    Run one command (or `all`) on a parsed case.

    Raises:
        FolboundError: Propagated from the computations
        ValueError: For an unknown command
    """
    if command not in COMMANDS:
        raise ValueError(f"unknown command {command!r}")
    result = CaseResult(case=case.name)
    commands = applicable_commands(case) if command == "all" else [command]
    for name in commands:
        logger.info(f"Running {name} on {case.name}")
        HANDLERS[name](case, result)
    return result


# ----------------------------------------------------------------------------
# Batch mode
# ----------------------------------------------------------------------------

def run_file(path: Path, command: str, fmt: Optional[str]) -> Tuple[int, str]:
    """Load, run and render one case; errors become exit code 2 and an error report."""
    try:
        case = load_case(path)
        result = run(case, command)
    except (FolboundError, ValueError) as e:
        log_exception(logger, e, f"Case {path.name} failed")
        error = {"case": path.stem, "verdict": "error", "error": type(e).__name__, "message": str(e)}
        return EXIT_ERROR, render(error, fmt or "text")
    return result.exit_code, render(result.as_dict(), fmt or case.report_format)


def _run_file_star(job: Tuple[Path, str, Optional[str]]) -> Tuple[int, str]:
    return run_file(*job)


def run_batch(directory: Path, command: str, fmt: Optional[str], workers: int) -> int:
    """Run every *.json case of a directory, writing <case>.report.<ext> beside it."""
    paths = sorted(directory.glob("*.json"))
    if not paths:
        logger.warning(f"No case files in {directory}")
        return EXIT_PASS
    jobs = [(p, command, fmt) for p in paths]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(_run_file_star, jobs))
    else:
        outcomes = [_run_file_star(job) for job in jobs]
    worst = EXIT_PASS
    for path, (code, text) in zip(paths, outcomes):
        ext = "json" if (fmt or "text") == "json" else "txt"
        target = path.with_name(f"{path.stem}.report.{ext}")
        target.write_text(text + "\n", encoding="utf-8")
        logger.info(f"{path.name}: exit {code}, report {target.name}")
        worst = max(worst, code)
    return worst


# ----------------------------------------------------------------------------
# Entry point
# ----------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="folbound",
        description="Certify multiplicity and degree bounds for invariant curves of plane foliations.",
    )
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("case", nargs="?", type=Path, help="case file (omit with --batch)")
    parser.add_argument("--report", choices=("text", "json"), help="report format (default: the case's option, else text)")
    parser.add_argument("--dot", type=Path, help="write the resolution or jet tree as Graphviz DOT")
    parser.add_argument("--batch", type=Path, help="run every case file of a directory")
    parser.add_argument("--workers", type=int, help="processes for batch mode (default FOLBOUND_WORKERS)")
    parser.add_argument("--log-level", help="logging level (default LOG_LEVEL or INFO)")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging(args.log_level)
    try:
        settings = load_env_file()
    except ValueError as e:
        log_exception(logger, e, "Invalid configuration")
        return EXIT_ERROR
    if args.log_level is None and os.getenv("LOG_LEVEL"):
        setup_logging()

    if args.batch is not None:
        if not args.batch.is_dir():
            logger.error(f"{args.batch} is not a directory")
            return EXIT_ERROR
        workers = args.workers or settings["FOLBOUND_WORKERS"]
        return run_batch(args.batch, args.command, args.report, workers)

    if args.case is None:
        parser.error("a case file is required unless --batch is given")
    try:
        case = load_case(args.case)
        result = run(case, args.command)
    except (FolboundError, ValueError) as e:
        log_exception(logger, e, f"{args.command} failed on {args.case}")
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_ERROR

    print(render(result.as_dict(), args.report or case.report_format))
    if args.dot is not None:
        if result.dot:
            args.dot.write_text("\n".join(result.dot), encoding="utf-8")
            logger.info(f"Wrote {len(result.dot)} graph(s) to {args.dot}")
        else:
            logger.warning(f"{args.command} produced no graph; {args.dot} not written")
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
