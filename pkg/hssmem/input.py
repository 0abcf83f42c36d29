import argparse
import json

import numpy as np

from hssmem.bases import BASIS_IDS, TWO_QUBIT_BASES
from hssmem.channels import MAX_QUBITS
from hssmem.errors import HssmemError, InvalidSpecError
from hssmem.printing import print_warning
from hssmem.reservoirs import MODELS, make_model
from hssmem.utils import get_available_cores, make_phi_grid, make_tau_grid, parse_csv_list

# default qubit range of the δ scans
DEFAULT_DELTA_QUBITS = '2-8'

# model parameter flags
MODEL_PARAMS = {'dephasing': ('nu',),
                'squeezed': ('alpha', 's', 'r', 'theta_sq'),
                'depolarizing': ('theta_dep',),
                'ad': ('a',)}

# default τ grids (max, step) and fixed times τ* of the δ scans
DEFAULT_TAU = {'dephasing': (30.0, 0.01), 'squeezed': (3.0, 0.001), 'depolarizing': (30.0, 0.01), 'ad': (30.0, 0.01)}
DEFAULT_TAU_STAR = {'dephasing': 1.62, 'squeezed': 0.2, 'depolarizing': 1.6, 'ad': 1.6}

# default probe phase of the δ scans
DEFAULT_DELTA_PHI = {'dephasing': np.pi, 'squeezed': np.pi, 'depolarizing': 0.5 * np.pi, 'ad': np.pi}

# sweep defaults, overridden by the JSON configuration and then by explicit flags
DEFAULTS = {'model': 'dephasing', 'n': '2', 'mu': '0,0.5,1', 'tau_max': None, 'tau_step': None, 'tau_star': None,
            'basis': None, 'phi': None, 'n_phi': 24, 'n_random': 32, 'seed': 0, 'out': None, 'threads': None,
            'verbose': 10, 'nu': None, 'alpha': None, 's': None, 'r': None, 'theta_sq': None, 'theta_dep': None,
            'a': None}


class CustomFormatter(argparse.ArgumentDefaultsHelpFormatter, argparse.RawTextHelpFormatter):
    pass


def _sweep_arguments():
    """Parent parser holding the flags shared by every sweep subcommand."""
    parent = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    parent.add_argument('-c', '--config', type=str, help='JSON sweep configuration (explicit flags take precedence)')
    parent.add_argument('-m', '--model', choices=sorted(MODELS), help='reservoir model')
    parent.add_argument('--nu', type=float, help='colored dephasing memory parameter ν')
    parent.add_argument('--alpha', type=float, help='squeezed vacuum coupling α')
    parent.add_argument('--s', type=float, help='squeezed vacuum Ohmic parameter s (> 1)')
    parent.add_argument('--r', type=float, help='squeezing magnitude r')
    parent.add_argument('--theta-sq', type=float, help='squeezing angle θ [rad]')
    parent.add_argument('--theta-dep', type=float, help='colored depolarizing parameter θ')
    parent.add_argument('--a', type=float, help='amplitude damping coupling ratio γ0/λ')
    parent.add_argument('-n', '--n', type=str, help='number of qubits: integer, comma list or range "2-8"')
    parent.add_argument('--mu', type=str, help='comma list of correlation factors μ ∈ [0, 1]')
    parent.add_argument('--tau-max', type=float, help='last time of the τ grid')
    parent.add_argument('--tau-step', type=float, help='τ grid step')
    parent.add_argument('--tau-star', type=float, help='single evaluation time τ* (replaces the τ grid)')
    parent.add_argument('-b', '--basis', type=str,
                        help='comma list of bases: ' + ','.join(BASIS_IDS) +
                             '\n(bell and hadamard are two-qubit bases; random expands to --n-random Haar bases)')
    parent.add_argument('--phi', type=str,
                        help='comma list of phases φ [rad]'
                             '\n(default: π, π/2 for depolarizing δ scans,'
                             '\nor a grid of --n-phi phases for the measure)')
    parent.add_argument('--n-phi', type=int, help='size of the default phase grid on [0, 2π)')
    parent.add_argument('--n-random', type=int, help='number of Haar-random catalog bases')
    parent.add_argument('--seed', type=int, help='seed of the random catalog bases')
    parent.add_argument('-o', '--out', type=str, help='output CSV file')
    parent.add_argument('-j', '--threads', type=int, help='number of parallel threads: one per logical core if None')
    parent.add_argument('-v', '--verbose', type=int, help='print progress every "verbose" completed cells')

    return parent


def get_cli_parser():
    """
    Build the command line parser.

    Returns
    -------
    cli_parser: argparse.ArgumentParser
        parser with the curve, measure, delta and validate subcommands
    """
    cli_parser = argparse.ArgumentParser(
        prog='hssmem',
        description='hssmem: Hilbert-Schmidt speed of correlated multiqubit noisy channels\n'
                    'HSS trajectories, non-Markovianity measure and memory-scaling statistics '
                    'for colored dephasing, squeezed vacuum, colored depolarizing '
                    'and amplitude damping reservoirs.\n',
        formatter_class=CustomFormatter)
    sub = cli_parser.add_subparsers(dest='cmd', required=True)
    parent = _sweep_arguments()
    sub.add_parser('curve', parents=[parent], formatter_class=CustomFormatter,
                   help='HSS over the (n, μ, basis, φ, τ) grid')
    sub.add_parser('measure', parents=[parent], formatter_class=CustomFormatter,
                   help='non-Markovianity measure versus μ, maximized over the basis catalog and φ grid')
    sub.add_parser('delta', parents=[parent], formatter_class=CustomFormatter,
                   help='range of variation δ = HSS(μ=1) - HSS(μ=0) at τ* versus n')
    sub.add_parser('validate', parents=[parent], formatter_class=CustomFormatter,
                   help='oracle and invariant suite with closed-form audit')

    return cli_parser


def parse_cli_args(argv=None):
    """
    Parse command line arguments.

    Parameters
    ----------
    argv: list of str
        arguments (sys.argv[1:] if None)

    Returns
    -------
    cli_args: dict
        explicitly given arguments only (plus the subcommand)
    """
    return vars(get_cli_parser().parse_args(argv))


def load_config_file(cfg_path):
    """
    Load a JSON sweep configuration.

    Parameters
    ----------
    cfg_path: str
        path to the JSON document

    Returns
    -------
    file_cfg: dict
        configuration with keys normalized to flag names (dashes as underscores)
    """
    with open(cfg_path, 'r', encoding='utf-8') as f:
        doc = json.load(f)
    if not isinstance(doc, dict):
        raise InvalidSpecError(f"Configuration file {cfg_path} must hold a JSON object!")

    file_cfg = {}
    for key, val in doc.items():
        key = key.replace('-', '_')
        if key.startswith('_') or key in ('comment', 'cmd'):
            continue
        if key == 'params':
            file_cfg.update({k.replace('-', '_'): v for k, v in val.items()})
        elif isinstance(val, list):
            file_cfg[key] = ','.join(str(v) for v in val)
        else:
            file_cfg[key] = val
    unknown = set(file_cfg) - set(DEFAULTS)
    if unknown:
        raise InvalidSpecError(f"Unknown configuration field(s): {sorted(unknown)}")

    return file_cfg


def parse_qubit_range(text):
    """
    Parse a qubit number specification.

    Parameters
    ----------
    text: str or int
        integer, comma list or inclusive range "a-b"

    Returns
    -------
    n_lst: list of int
        ascending qubit numbers
    """
    text = str(text)
    if '-' in text:
        lo, hi = (int(v) for v in text.split('-', 1))
        return list(range(lo, hi + 1))

    return sorted(set(parse_csv_list(text, int)))


def get_sweep_config(cli_args):
    """
    Merge defaults, JSON configuration and CLI flags into a validated sweep configuration.

    Parameters
    ----------
    cli_args: dict
        explicitly given command line arguments (see parse_cli_args)

    Returns
    -------
    cfg: dict
        sweep configuration

            cmd: str
                subcommand (curve, measure, delta, validate)

            model: reservoir model
                validated reservoir model

            n_lst: list of int
                numbers of qubits

            mu_lst: numpy.ndarray (dtype=float)
                correlation factors

            tau_grid: numpy.ndarray (dtype=float)
                dimensionless times (a single τ* for fixed-time sweeps)

            tau_star: float
                fixed time (None for grid sweeps)

            basis_lst: list of str
                basis identifiers

            phi_lst: numpy.ndarray (dtype=float)
                phases [rad]

            n_random: int
                number of random catalog bases

            seed: int
                catalog seed

            out: str
                output CSV path

            jobs: int
                number of parallel threads

            verbose: int
                progress verbosity
    """
    cli_args = dict(cli_args)
    cmd = cli_args.pop('cmd', 'curve')
    cfg_path = cli_args.pop('config', None)
    merged = dict(DEFAULTS)
    if cmd == 'delta':
        merged['n'] = DEFAULT_DELTA_QUBITS
    try:
        if cfg_path is not None:
            merged.update(load_config_file(cfg_path))
        merged.update(cli_args)

        model_tag = merged['model']
        if model_tag not in MODELS:
            raise InvalidSpecError(f"Unknown reservoir model '{model_tag}'!")
        model = make_model(model_tag, **{k: merged[k] for k in MODEL_PARAMS[model_tag]})
        foreign = sorted(k for tag, keys in MODEL_PARAMS.items() if tag != model_tag for k in keys
                         if merged[k] is not None and k not in MODEL_PARAMS[model_tag])
        if foreign:
            print_warning(f"parameter(s) {foreign} do not apply to the '{model_tag}' model and are ignored")

        n_lst = parse_qubit_range(merged['n'])
        mu_lst = np.array(parse_csv_list(merged['mu']), dtype=float)
        if merged['basis'] is not None:
            basis_lst = parse_csv_list(merged['basis'], str)
        else:
            basis_lst = list(BASIS_IDS) if cmd == 'measure' else ['standard']
        if merged['phi'] is not None:
            phi_lst = np.array(parse_csv_list(merged['phi']), dtype=float)
        elif cmd == 'measure':
            phi_lst = make_phi_grid(int(merged['n_phi']))
        elif cmd == 'delta':
            phi_lst = np.array([DEFAULT_DELTA_PHI[model_tag]])
        else:
            phi_lst = np.array([np.pi])

        tau_star = merged['tau_star']
        if cmd == 'delta' and tau_star is None:
            tau_star = DEFAULT_TAU_STAR[model_tag]
        if tau_star is not None:
            tau_grid = np.array([float(tau_star)])
        else:
            tau_max, tau_step = DEFAULT_TAU[model_tag]
            tau_max = tau_max if merged['tau_max'] is None else float(merged['tau_max'])
            tau_step = tau_step if merged['tau_step'] is None else float(merged['tau_step'])
            if not (tau_step > 0 and tau_max > 0):
                raise InvalidSpecError("τ grid requires positive tau-max and tau-step!")
            tau_grid = make_tau_grid(tau_max, tau_step)

        jobs = merged['threads']
        jobs = get_available_cores() if jobs is None else int(jobs)

    except HssmemError as exc:
        raise InvalidSpecError(str(exc)) from exc
    except (TypeError, ValueError) as exc:
        raise InvalidSpecError(f"Malformed sweep configuration: {exc}") from exc

    cfg = {'cmd': cmd, 'model': model, 'n_lst': n_lst, 'mu_lst': mu_lst, 'tau_grid': tau_grid,
           'tau_star': None if tau_star is None else float(tau_star), 'basis_lst': basis_lst, 'phi_lst': phi_lst,
           'n_random': int(merged['n_random']), 'seed': int(merged['seed']), 'out': merged['out'],
           'jobs': jobs, 'verbose': max(1, int(merged['verbose']))}
    validate_sweep_config(cfg)

    return cfg


def validate_sweep_config(cfg):
    """
    Check a sweep configuration against the library preconditions.

    Parameters
    ----------
    cfg: dict
        sweep configuration

    Returns
    -------
    None
    """
    cmd = cfg['cmd']
    n_lst = cfg['n_lst']
    if not n_lst or min(n_lst) < 2 or max(n_lst) > MAX_QUBITS:
        raise InvalidSpecError(f"Qubit numbers must lie in [2, {MAX_QUBITS}], got {n_lst}!")
    if cfg['model'].tag == 'ad' and n_lst != [2]:
        raise InvalidSpecError("The correlated amplitude-damping channel is defined for two qubits only!")
    if cmd == 'delta' and not cfg['model'].unital:
        raise InvalidSpecError("δ scans require a unital (Pauli-type) reservoir model!")

    mu_lst = cfg['mu_lst']
    if cmd != 'delta' and (mu_lst.size == 0 or np.any(mu_lst < 0) or np.any(mu_lst > 1)):
        raise InvalidSpecError(f"Correlation factors must lie in [0, 1], got {mu_lst.tolist()}!")
    if np.any(np.diff(np.sort(mu_lst)) == 0):
        raise InvalidSpecError("Duplicated correlation factors!")

    tau_grid = cfg['tau_grid']
    if tau_grid[0] < 0 or not np.all(np.isfinite(tau_grid)):
        raise InvalidSpecError("Times must be finite and non-negative!")
    if cmd == 'measure' and tau_grid.size < 2:
        raise InvalidSpecError("The non-Markovianity measure requires a τ grid, not a single τ*!")

    unknown = set(cfg['basis_lst']) - set(BASIS_IDS)
    if not cfg['basis_lst'] or unknown:
        raise InvalidSpecError(f"Unknown basis identifier(s): {sorted(unknown)}")
    if cmd == 'curve' and any(b in TWO_QUBIT_BASES for b in cfg['basis_lst']) and n_lst != [2]:
        raise InvalidSpecError("Bell and Hadamard bases require n = 2!")
    if cfg['phi_lst'].size == 0 or not np.all(np.isfinite(cfg['phi_lst'])):
        raise InvalidSpecError("Phase list must hold finite values!")
    if cfg['n_random'] < 0 or cfg['jobs'] < 1:
        raise InvalidSpecError("Random basis count must be non-negative and thread count positive!")
    if cfg['seed'] < 0:
        raise InvalidSpecError(f"Random basis seed must be non-negative, got {cfg['seed']}!")
    if cmd != 'validate' and cfg['out'] is None:
        raise InvalidSpecError("An output CSV path (--out) is required!")
