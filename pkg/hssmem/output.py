from os import makedirs, path

import numpy as np
import pandas as pd

from hssmem.printing import print_saved

# sweep CSV columns
CSV_COLUMNS = ['model', 'n', 'mu', 'tau', 'basis', 'phi', 'kind', 'value']

# audit CSV columns
AUDIT_COLUMNS = ['formula_id', 'basis', 'max_abs_dev', 'grid_points', 'binding', 'pass']

# decimal format of every floating point field (12 significant digits)
FLOAT_FMT = '%.12g'


def create_save_dir(out_path):
    """
    Create the parent directory of an output file.

    Parameters
    ----------
    out_path: str
        output file path

    Returns
    -------
    None
    """
    out_dir = path.dirname(path.abspath(out_path))
    if not path.isdir(out_dir):
        makedirs(out_dir)


class CsvWriter:
    """
    Single-writer CSV sink streaming sweep rows block by block.

    The file is truncated when the writer is created; the header is
    written together with the first block.
    """

    def __init__(self, out_path):
        create_save_dir(out_path)
        self.out_path = out_path
        self.row_cnt = 0
        pd.DataFrame(columns=CSV_COLUMNS).to_csv(out_path, index=False)

    def write(self, rows):
        """
        Append a block of rows.

        Parameters
        ----------
        rows: list of dict
            sweep rows keyed by CSV column (None or NaN for not applicable fields)

        Returns
        -------
        None
        """
        if len(rows) == 0:
            return

        df = pd.DataFrame(rows, columns=CSV_COLUMNS)
        df.to_csv(self.out_path, mode='a', header=False, index=False, float_format=FLOAT_FMT, na_rep='',
                  lineterminator='\n')
        self.row_cnt += len(rows)

    def close(self):
        print_saved(self.out_path)


def sweep_row(model, n, mu, tau, basis, phi, kind, value):
    """
    Build one sweep row.

    Parameters
    ----------
    model: str
        reservoir model tag

    n: int
        number of qubits

    mu: float
        correlation factor (None if not applicable)

    tau: float
        dimensionless time

    basis: str
        basis identifier

    phi: float
        phase [rad]

    kind: str
        quantity kind (hss, nm_hss, delta)

    value: float
        quantity value

    Returns
    -------
    row: dict
        sweep row
    """
    return {'model': model, 'n': int(n), 'mu': np.nan if mu is None else float(mu), 'tau': float(tau),
            'basis': basis, 'phi': float(phi), 'kind': kind, 'value': float(value)}


def save_audit(audit, out_path):
    """
    Save the validation audit table.

    Parameters
    ----------
    audit: pandas.DataFrame
        audit table (formula_id, basis, max_abs_dev, grid_points, binding, passed)

    out_path: str
        output CSV path

    Returns
    -------
    None
    """
    create_save_dir(out_path)
    audit.rename(columns={'passed': 'pass'})[AUDIT_COLUMNS].to_csv(out_path, index=False, float_format=FLOAT_FMT,
                                                                  lineterminator='\n')
    print_saved(out_path)
