import argparse
import logging
import sys

from . import experiment


def configure_logging(args):
    level = logging.INFO
    if getattr(args, "verbose", False):
        level = logging.DEBUG
    elif getattr(args, "quiet", False):
        level = logging.WARNING
    logging.basicConfig(
        level=level,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )


def run(argv=None):
    parser = argparse.ArgumentParser(description="closedloop CLI")
    subparsers = parser.add_subparsers(dest="command", help="closedloop subcommand")

    experiment.commands.init_parsers(subparsers)

    args = parser.parse_args(argv)
    configure_logging(args)
    if hasattr(args, "func") and callable(args.func):
        return args.func(args)
    parser.print_help()
    return 0


if __name__ == "__main__":
    sys.exit(run())
