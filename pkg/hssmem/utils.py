from multiprocessing import cpu_count
from os import environ
from time import perf_counter

import numpy as np
import psutil


def elapsed_time(start_time):
    """
    Compute elapsed time from input start reference.

    Parameters
    ----------
    start_time: float
        start time reference

    Returns
    -------
    tot: float
        total time [s]

    hrs: int
        hours

    mins: int
        minutes

    secs: int
        seconds
    """
    tot = perf_counter() - start_time

    secs = tot % 86400
    hrs = int(secs // 3600)
    secs %= 3600
    mins = int(secs // 60)
    secs = int(secs % 60)

    return tot, hrs, mins, secs


def get_available_cores():
    """
    Return the number of available logical cores.

    Returns
    -------
    num_cpu: int
        number of available cores
    """
    num_cpu = environ.get('OMP_NUM_THREADS', None)
    num_cpu = cpu_count() if num_cpu is None else int(num_cpu)

    return num_cpu


def get_available_ram(frac=0.5):
    """
    Return a fraction of the currently available RAM.

    Parameters
    ----------
    frac: float
        fraction of the available memory granted to a single allocation

    Returns
    -------
    ram: float
        usable memory [B]
    """
    return frac * psutil.virtual_memory()[1]


def make_tau_grid(tau_max, tau_step, tau_min=0.0):
    """
    Build an ascending grid of dimensionless times.

    Parameters
    ----------
    tau_max: float
        last grid point

    tau_step: float
        grid spacing

    tau_min: float
        first grid point

    Returns
    -------
    tau_grid: numpy.ndarray (dtype=float)
        grid of dimensionless times (endpoints included)
    """
    # the point count is rounded so that tau_max is hit up to rounding
    num = int(np.round((tau_max - tau_min) / tau_step)) + 1
    tau_grid = tau_min + tau_step * np.arange(num, dtype=float)

    return tau_grid


def make_phi_grid(num):
    """
    Uniform grid of phases on [0, 2π).

    Parameters
    ----------
    num: int
        number of phases

    Returns
    -------
    phi_grid: numpy.ndarray (dtype=float)
        phase grid [rad]
    """
    return 2 * np.pi * np.arange(num) / num


def parse_csv_list(text, dtype=float):
    """
    Split a comma-separated command line value.

    Parameters
    ----------
    text: str or list
        comma-separated values (a list is returned converted)

    dtype: type
        item type

    Returns
    -------
    values: list
        converted items
    """
    if isinstance(text, (list, tuple)):
        return [dtype(v) for v in text]

    return [dtype(v) for v in str(text).split(',') if v.strip() != '']
