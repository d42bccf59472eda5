"""Command line front end.

Exit codes: 0 ok, 1 usage or parse error, 2 validation failure,
3 infeasible menu.
"""

import argparse
import re
import sys
from pathlib import Path
from typing import Optional, Sequence

import logfire

from app.core.config import settings
from app.core.exceptions import (
    ConfigError,
    InfeasibleMenuError,
    PrivacyContractsError,
    SpecValidationError,
)
from app.core.logging import setup_logging
from app.models.domain import ModelSpec, NoRisk
from app.models.schemas.analysis import ComparisonReport, Thresholds
from app.models.schemas.contract import (
    ConstraintResiduals,
    Contract,
    ContractMenu,
    Regime,
    SolveReport,
)
from app.models.schemas.run_config import GridSpec, RunConfig, SolverTolerances
from app.models.schemas.validation import ValidationReport
from app.services import export_service
from app.services.config_service import config_service
from app.services.model_service import ModelService
from app.services.risk_analysis_service import RiskAnalysisService
from app.services.screening_service import ScreeningService

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INVALID = 2
EXIT_INFEASIBLE = 3


class CliParser(argparse.ArgumentParser):
    """argparse exits with 2 on usage errors; this contract reserves 2."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> CliParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", required=True, help="TOML run config")
    common.add_argument(
        "--verbose", action="store_true", help="log solver progress to stderr"
    )

    parser = CliParser(
        prog="privacy-contracts",
        description="Optimal privacy contracts for two consumer types",
    )
    parser.add_argument("--version", action="version", version=settings.VERSION)
    commands = parser.add_subparsers(
        dest="command", required=True, parser_class=CliParser
    )

    commands.add_parser(
        "solve", parents=[common], help="first- and second-best menus"
    )

    sweep = commands.add_parser(
        "sweep", parents=[common], help="solve over a grid of priors, write CSV"
    )
    sweep.add_argument("--out", help="CSV path (stdout when omitted)")
    sweep.add_argument("--grid", help="p_min,p_max,n (overrides [run] grid)")
    sweep.add_argument("--jobs", type=int, help="worker processes")

    verify = commands.add_parser(
        "verify", parents=[common], help="check a menu against all four constraints"
    )
    verify.add_argument("--menu", required=True, help="file with x_L t_L x_H t_H")

    compare = commands.add_parser(
        "compare", parents=[common], help="orderings with and without breach risk"
    )
    compare.add_argument("--out", help="write the ordering checks as CSV")
    compare.add_argument(
        "--oracle", action="store_true", help="certify against the brute-force solver"
    )
    compare.add_argument(
        "--oracle-steps", type=int, help="oracle grid points per axis"
    )

    commands.add_parser(
        "thresholds", parents=[common], help="critical priors p_bar, p_hat*, p*"
    )
    return parser


# Formatting


def _fmt(value: Optional[float]) -> str:
    return "absent" if value is None else f"{value:.6f}"


def format_report(title: str, report: SolveReport) -> str:
    menu = report.menu
    reduction = report.reduction.value if report.reduction else "-"
    low, high = report.boundary_low.value, report.boundary_high.value
    return "\n".join(
        [
            f"== {title} ==",
            f"  x_L = {_fmt(menu.low.x)}   t_L = {_fmt(menu.low.t)}   ({low})",
            f"  x_H = {_fmt(menu.high.x)}   t_H = {_fmt(menu.high.t)}   ({high})",
            f"  rent = {_fmt(report.information_rent)}"
            f"   profit = {_fmt(report.profit)}"
            f"   welfare = {_fmt(report.welfare)}",
            f"  binding: {', '.join(report.binding) or 'none'}   feasible: "
            f"{'yes' if report.feasible else 'no'}   reduction: {reduction}",
        ]
    )


def format_residuals(residuals: ConstraintResiduals, feasible: bool) -> str:
    lines = [
        f"  {name:<8} {getattr(residuals, name):+.6e}"
        for name in ("ic_high", "ic_low", "ir_low", "ir_high")
    ]
    lines.append("feasible" if feasible else "infeasible")
    return "\n".join(lines)


def format_thresholds(thresholds: Thresholds) -> str:
    return "\n".join(
        [
            f"p_bar        = {_fmt(thresholds.p_bar)}",
            f"p_star_norisk = {_fmt(thresholds.p_star_norisk)}",
            f"p_star_risk   = {_fmt(thresholds.p_star_risk)}",
            "(p_star_* locate where the reduced low allocation reaches x_min; "
            "a participation-guarded menu may keep x_L above it)",
        ]
    )


def format_comparison(report: ComparisonReport) -> str:
    lines = [
        format_report("second_best (risk off)", report.no_risk),
        format_report("second_best (risk on)", report.with_risk),
        "== thresholds ==",
        format_thresholds(report.thresholds),
        "== orderings ==",
    ]
    for check in report.orderings:
        line = (
            f"  Prop {check.proposition}: {check.inequality}   "
            f"lhs={check.lhs:.6f} rhs={check.rhs:.6f} slack={check.slack:+.3e}   "
            f"{check.verdict.value.upper()}"
        )
        if check.reason:
            line += f" ({check.reason})"
        lines.append(line)
    if report.certification:
        lines.append("== oracle certification ==")
        for cert in report.certification:
            lines.append(
                f"  risk {'on' if cert.risk_active else 'off'}: "
                f"gap={cert.gap:.3e} bound={cert.certified_gap_bound:.3e} "
                f"{'within bound' if cert.within_bound else 'OUTSIDE BOUND'}"
                f"   oracle binding: {', '.join(cert.oracle_binding)}"
            )
    return "\n".join(lines)


def format_validation(report: ValidationReport) -> str:
    lines = ["invalid model spec:"]
    for v in report.violations:
        where = f" (x={v.witness_x:g})" if v.witness_x is not None else ""
        lines.append(f"  [{v.assumption}] {v.message}{where}")
    return "\n".join(lines)


# Commands


class Runner:
    """One CLI invocation: the loaded config and services tuned by it."""

    def __init__(self, config: RunConfig, config_path: str):
        self.config = config
        self.config_path = config_path
        self.spec: ModelSpec = config.to_model_spec()
        self.tolerances: SolverTolerances = config.tolerances()
        self.models = ModelService(self.tolerances)
        self.screening = ScreeningService(self.tolerances)
        self.analysis = RiskAnalysisService(self.tolerances)

    def check_valid(self) -> None:
        self.models.ensure_valid(self.spec)

    def solve(self, args: argparse.Namespace) -> int:
        self.check_valid()
        p = self.spec.prior_high
        modes = [("risk off", self.spec.without_risk())]
        if not isinstance(self.spec.risk, NoRisk):
            modes.append(("risk on", self.spec))
        sections = []
        for label, spec in modes:
            first = self.screening.solve_first_best(spec)
            sections.append(format_report(f"first_best ({label})", first))
            if 0.0 < p < 1.0:
                second = self.screening.solve_second_best(spec)
                sections.append(format_report(f"second_best ({label})", second))
            else:
                sections.append(
                    f"== second_best ({label}) ==\n"
                    f"  skipped: prior_high={p:g} is not in (0, 1)"
                )
        print("\n".join(sections))
        return EXIT_OK

    def sweep(self, args: argparse.Namespace) -> int:
        text = args.grid or self.config.run.grid
        if text is None:
            raise ConfigError("sweep needs --grid or a [run] grid entry")
        grid = GridSpec.parse(text)
        jobs = args.jobs or self.tolerances.jobs
        table = self.analysis.sweep_p(self.spec, grid.points(), jobs=jobs)
        if args.out is None:
            sys.stdout.write(export_service.render_csv(table))
            return EXIT_OK
        path = export_service.write_csv(table, args.out)
        export_service.write_meta(
            path,
            grid=text,
            jobs=jobs,
            rows=len(table.entries),
            config_path=self.config_path,
        )
        print(f"wrote {len(table.entries)} rows to {path}")
        return EXIT_OK

    def verify(self, args: argparse.Namespace) -> int:
        menu = read_menu(Path(args.menu), self.spec.risk_active)
        residuals = self.screening.verify_menu(self.spec, menu)
        feasible = residuals.feasible(self.tolerances.feas_tol)
        print(format_residuals(residuals, feasible))
        return EXIT_OK if feasible else EXIT_INFEASIBLE

    def compare(self, args: argparse.Namespace) -> int:
        if isinstance(self.spec.risk, NoRisk):
            print("compare needs a breach-risk [risk] section", file=sys.stderr)
            return EXIT_INVALID
        report = self.analysis.compare(
            self.spec, certify=args.oracle, oracle_steps=args.oracle_steps
        )
        print(format_comparison(report))
        if args.out:
            csv_text = export_service.render_orderings_csv(report)
            Path(args.out).write_text(csv_text, encoding="utf-8")
        return EXIT_OK

    def thresholds(self, args: argparse.Namespace) -> int:
        print(format_thresholds(self.analysis.thresholds(self.spec)))
        return EXIT_OK


def read_menu(path: Path, risk_active: bool) -> ContractMenu:
    """Four numbers x_L t_L x_H t_H separated by whitespace or commas."""
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read menu {path}: {exc.strerror}") from exc
    tokens = [tok for tok in re.split(r"[\s,]+", text.strip()) if tok]
    if len(tokens) != 4:
        raise ConfigError(
            f"{path}: expected 4 numbers x_L t_L x_H t_H, got {len(tokens)}"
        )
    try:
        x_low, t_low, x_high, t_high = (float(tok) for tok in tokens)
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    return ContractMenu(
        low=Contract(x=x_low, t=t_low),
        high=Contract(x=x_high, t=t_high),
        regime=Regime.SECOND_BEST,
        risk_active=risk_active,
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    setup_logging(verbose=args.verbose)
    try:
        config = config_service.load(args.config)
        runner = Runner(config, args.config)
        return getattr(runner, args.command)(args)
    except SpecValidationError as exc:
        print(format_validation(exc.report), file=sys.stderr)
        return EXIT_INVALID
    except InfeasibleMenuError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except PrivacyContractsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception:
        logfire.exception("Unhandled error", command=args.command)
        raise


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
