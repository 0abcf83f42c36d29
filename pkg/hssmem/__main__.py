import sys

from hssmem.errors import EXIT_INVALID_SPEC, EXIT_IO, EXIT_OK, HssmemError, ValidationFailure
from hssmem.input import get_sweep_config, parse_cli_args
from hssmem.pipeline import run_curve, run_delta, run_measure, run_validate
from hssmem.printing import color_text, print_flsh, print_heading

# subcommand runners
RUNNERS = {'curve': run_curve, 'measure': run_measure, 'delta': run_delta, 'validate': run_validate}


def hssmem(cli_args):

    # merge defaults, JSON configuration and command line flags into a validated sweep configuration
    cfg = get_sweep_config(cli_args)

    # run the requested sweep (or the validation suite) and stream its CSV rows
    RUNNERS[cfg['cmd']](cfg)


def main(argv=None):
    print_heading()
    try:
        cli_args = parse_cli_args(argv)
    except SystemExit as exc:
        # argparse exits with 2 on usage errors, reserved here for validation failures
        return EXIT_OK if exc.code in (0, None) else EXIT_INVALID_SPEC
    try:
        hssmem(cli_args)
    except ValidationFailure as exc:
        print_flsh(color_text(255, 69, 0, f"\nValidation failed: {exc}"))
        return exc.exit_code
    except HssmemError as exc:
        print_flsh(color_text(255, 69, 0, f"\nInvalid sweep: {exc}"))
        return EXIT_INVALID_SPEC
    except OSError as exc:
        print_flsh(color_text(255, 69, 0, f"\nI/O error: {exc}"))
        return EXIT_IO

    return EXIT_OK


if __name__ == '__main__':
    sys.exit(main())
