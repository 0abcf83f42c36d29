import numpy as np

from hssmem.utils import elapsed_time


# grid cell progress counter
cell_cnt = 0


def color_text(r, g, b, text):
    """
    Get colored text string.

    Parameters
    ----------
    r: int
        red channel value

    g: int
        green channel value

    b: int
        blue channel value

    text: str
        text string

    Returns
    -------
    clr_text: str
        colored text
    """
    clr_text = f"\033[38;2;{r};{g};{b}m{text} \033[38;2;255;255;255m"

    return clr_text


def print_flsh(string_to_print="", end='\n'):
    """
    Print string and flush output data buffer.

    Parameters
    ----------
    string_to_print: str
        string to be printed

    end: str
        string appended after the last value, default a newline

    Returns
    -------
    None
    """
    print(string_to_print, flush=True, end=end)


def print_heading():
    """
    Print hssmem tool heading.

    Returns
    -------
    None
    """
    print_flsh(color_text(0, 250, 154, "\nHilbert-Schmidt Speed of Correlated Quantum Channels"))


def print_warning(text):
    """
    Print a warning line.

    Parameters
    ----------
    text: str
        warning message

    Returns
    -------
    None
    """
    print_flsh(color_text(255, 191, 0, f"WARNING: {text}"))


def print_sweep_info(cfg):
    """
    Print the configuration of a parameter sweep.

    Parameters
    ----------
    cfg: dict
        sweep configuration (see hssmem.input.get_sweep_config)

    Returns
    -------
    None
    """
    model = cfg['model']
    prm_str = ', '.join(f"{k}={v:g}" for k, v in model.params.items())
    regime = 'oscillatory (memory revivals)' if model.oscillatory else 'monotone'

    tau_grid = cfg['tau_grid']
    if tau_grid.size == 1:
        tau_str = f"τ*: {tau_grid[0]:g}"
    else:
        tau_str = f"τ grid: [{tau_grid[0]:g}, {tau_grid[-1]:g}], {tau_grid.size} points"

    print_flsh(color_text(0, 191, 255, f"\n{cfg['cmd'].capitalize()} sweep\n") +
               f"\nReservoir model: {model.tag} ({prm_str})\nDecoherence regime: {regime}\n" +
               f"Qubits: {cfg['n_lst']}\nCorrelation factors μ: {np.round(cfg['mu_lst'], 6).tolist()}\n{tau_str}\n" +
               f"Bases: {cfg['basis_lst']}\nPhases φ [rad]: {np.round(cfg['phi_lst'], 6).tolist()}\n")
    print_flsh(f"[Parallel(n_jobs={cfg['jobs']})]: Using backend ThreadingBackend "
               f"with {cfg['jobs']} concurrent workers.")


def print_progress(start_time, jobs, tot, verbose=10):
    """
    Print sweep progress.

    Parameters
    ----------
    start_time: float
        start time [s]

    jobs: int
        number of parallel jobs

    tot: int
        total number of grid cells

    verbose: int
        verbosity level (print info only every "verbose" cells)

    Returns
    -------
    None
    """
    global cell_cnt
    cell_cnt += 1

    if cell_cnt % verbose == 0 or cell_cnt == tot:
        prog = 100 * cell_cnt / tot
        _, hrs, mins, secs = elapsed_time(start_time)
        print_flsh(
            f"[Parallel(n_jobs={jobs})]:\t{cell_cnt}/{tot} done\t|\telapsed: {hrs} hr {mins} min {secs} s\t{prog:.1f}%")


def reset_progress():
    """Reset the grid cell progress counter."""
    global cell_cnt
    cell_cnt = 0


def print_audit_report(audit):
    """
    Print the validation audit table.

    Parameters
    ----------
    audit: pandas.DataFrame
        audit table (formula_id, basis, max_abs_dev, grid_points, binding, pass)

    Returns
    -------
    None
    """
    print_flsh(color_text(0, 191, 255, "\nValidation audit\n"))
    for row in audit.itertuples(index=False):
        if row.passed:
            status = color_text(0, 250, 154, "pass")
        elif row.binding:
            status = color_text(255, 69, 0, "FAIL")
        else:
            status = color_text(255, 191, 0, "deviates")
        kind = 'binding' if row.binding else 'report '
        print_flsh(f"{row.formula_id:<32s} {row.basis:<9s} {kind}  max dev: {row.max_abs_dev:.3e}  "
                   f"({row.grid_points} pts)  {status}")


def print_elapsed(start_time, what='Sweep'):
    """
    Print total elapsed time.

    Parameters
    ----------
    start_time: float
        start time [s]

    what: str
        completed task

    Returns
    -------
    None
    """
    _, hrs, mins, secs = elapsed_time(start_time)
    print_flsh(f"\n{what} completed in: {hrs} hr {mins} min {secs} s")


def print_saved(out_path):
    """Print the path of a written file."""
    print_flsh(f"Results saved to: {out_path}\n")
