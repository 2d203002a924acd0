"""Run a spraycheck command: ``python -m spraycheck {check,validate,eval} ...``."""
import sys
import typing as t

from spraycheck.report import check, evaluate, validate

COMMANDS = {"check": check.main, "validate": validate.main, "eval": evaluate.main}


def main(argv: t.Optional[t.Sequence[str]] = None) -> None:
    argv = list(sys.argv[1:] if argv is None else argv)
    if not argv or argv[0] not in COMMANDS:
        print(
            f"usage: python -m spraycheck {{{','.join(COMMANDS)}}} [options]",
            file=sys.stderr,
        )
        sys.exit(2)
    COMMANDS[argv[0]](argv[1:])


if __name__ == "__main__":
    main()
