"""
Main entry point for the theta-regulator verification runner.
Runs scenario files and suites and writes JSON reports.
"""
import argparse
import json
import logging
import sys

from src.config import get_settings
from src.exceptions import ScenarioParseError
from src.runner import Report, list_kinds, run_scenario, run_suite
from src.utils import logger

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


def _emit(text: str, out_path: str = None):
    """Write a report to --out or to standard output."""
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
        logger.info(f"📝 Report written to {out_path}")
    else:
        print(text)


def cmd_run(args) -> int:
    report = run_scenario(args.file, precision=args.precision, nu=args.nu)
    _emit(report.model_dump_json(indent=2), args.out)
    return EXIT_PASS if report.passed else EXIT_FAIL


def cmd_suite(args) -> int:
    suite = run_suite(args.directory, jobs=args.jobs)
    _emit(suite.model_dump_json(indent=2), args.out)
    return EXIT_PASS if suite.passed else EXIT_FAIL


def cmd_list_kinds(args) -> int:
    for kind, description in list_kinds():
        print(f"{kind:<20} {description}")
    return EXIT_PASS


def cmd_schema(args) -> int:
    _emit(json.dumps(Report.model_json_schema(), indent=2), args.out)
    return EXIT_PASS


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="theta-regulator",
                                     description="Verify regulator identities on Tate curves and nodal curves.")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one scenario file")
    run.add_argument("file")
    run.add_argument("--out", help="write the report here instead of standard output")
    run.add_argument("--precision", type=int, help="override the field precision")
    run.add_argument("--nu", type=int, help="override nu for p^nu-th power comparisons")
    run.set_defaults(handler=cmd_run)

    suite = sub.add_parser("suite", help="run every scenario in a directory")
    suite.add_argument("directory")
    suite.add_argument("--jobs", type=int, help="worker processes")
    suite.add_argument("--out", help="write the aggregate report here")
    suite.set_defaults(handler=cmd_suite)

    kinds = sub.add_parser("list-kinds", help="list the supported scenario kinds")
    kinds.set_defaults(handler=cmd_list_kinds)

    schema = sub.add_parser("schema", help="print the JSON schema of reports")
    schema.add_argument("--out")
    schema.set_defaults(handler=cmd_schema)
    return parser


def main(argv=None) -> int:
    """Main execution function."""
    logging.getLogger().setLevel(get_settings().log_level)
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_PASS

    logger.info("=" * 60)
    logger.info(f"🧮 theta-regulator: {args.command}")
    logger.info("=" * 60)
    try:
        return args.handler(args)
    except ScenarioParseError as e:
        logger.error(f"❌ Parse error: {e}")
        return EXIT_USAGE
    except (OSError, ValueError) as e:
        logger.error(f"❌ Error: {e}")
        return EXIT_USAGE


if __name__ == "__main__":
    try:
        sys.exit(main())
    except KeyboardInterrupt:
        logger.info("\n👋 Interrupted by user")
        sys.exit(130)
    except Exception as e:
        logger.error(f"❌ Error: {e}", exc_info=True)
        sys.exit(EXIT_USAGE)
