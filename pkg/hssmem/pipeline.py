from time import perf_counter

import numpy as np
import pandas as pd
from joblib import Parallel, delayed

from hssmem.bases import basis_catalog, basis_rotation, expand_basis_ids
from hssmem.channels import (CorrelatedChannelSpec, apply_channel, apply_corr_ad_batch, choi_matrix,
                             pauli_prob_table, unitality_gap)
from hssmem.errors import ValidationFailure
from hssmem.hss import (CurveEvaluator, PhaseFamily, chi_segments, delta_range, hss_value, nm_measure,
                        phase_derivative)
from hssmem.input import DEFAULT_DELTA_PHI, DEFAULT_TAU_STAR
from hssmem.oracles import (ClosedFormId, dense_reference_apply, finite_difference_hss,
                            formula_audit, hss_closed_form)
from hssmem.output import CsvWriter, save_audit, sweep_row
from hssmem.printing import (print_audit_report, print_elapsed, print_flsh, print_progress, print_sweep_info,
                             print_warning, reset_progress)
from hssmem.reservoirs import MODELS, ColoredDephasing, make_model
from hssmem.utils import make_phi_grid, make_tau_grid

# default audit table of the validation suite
DEFAULT_AUDIT_PATH = 'hssmem_audit.csv'

# smallest unitality gap ‖Φ(I) - I‖ required of amplitude damping at G = 0.5
NON_UNITAL_GAP = 1e-3


def _sorted_rows(rows):
    return sorted(rows, key=lambda r: (r['basis'], r['phi'], r['tau']))


def shared_probs(cfg):
    """Single-use Pauli probabilities on the sweep τ grid, computed once and reused by every (n, μ) cell."""
    model = cfg['model']

    return pauli_prob_table(model, cfg['tau_grid']) if model.unital else None


def curve_cell(cfg, n, mu, probs=None):
    """
    HSS rows of one (n, μ) grid cell over every basis, phase and time.

    Parameters
    ----------
    cfg: dict
        sweep configuration (see hssmem.input.get_sweep_config)

    n: int
        number of qubits

    mu: float
        correlation factor

    probs: numpy.ndarray
        single-use Pauli probabilities on the τ grid (None for amplitude damping)

    Returns
    -------
    rows: list of dict
        sweep rows sorted by (basis, phi, tau)
    """
    model = cfg['model']
    tau_grid = cfg['tau_grid']
    evaluator = CurveEvaluator(CorrelatedChannelSpec(model=model, n=n, mu=float(mu)), tau_grid, probs=probs)

    rows = []
    for basis_id, rot in basis_catalog(n, cfg['basis_lst'], n_random=cfg['n_random'], seed=cfg['seed']):
        for phi in cfg['phi_lst']:
            fam = PhaseFamily(n=n, basis_rotation=rot, phi=float(phi), basis_id=basis_id)
            hss = evaluator.values(phase_derivative(fam))
            rows.extend(sweep_row(model.tag, n, mu, t, basis_id, phi, 'hss', v) for t, v in zip(tau_grid, hss))

    return _sorted_rows(rows)


def run_curve(cfg):
    """
    HSS trajectories (or fixed-time HSS values) over the (n, μ, basis, φ, τ) grid.

    Parameters
    ----------
    cfg: dict
        sweep configuration

    Returns
    -------
    row_cnt: int
        number of written rows
    """
    start_time = perf_counter()
    print_sweep_info(cfg)
    reset_progress()

    probs = shared_probs(cfg)

    # (n, μ) cells are evaluated by concurrent threads and written in submission order
    cells = [(n, mu) for n in cfg['n_lst'] for mu in np.sort(cfg['mu_lst'])]
    writer = CsvWriter(cfg['out'])
    with Parallel(n_jobs=cfg['jobs'], prefer='threads', return_as='generator') as parallel:
        for rows in parallel(delayed(curve_cell)(cfg, n, mu, probs) for n, mu in cells):
            writer.write(rows)
            print_progress(start_time, cfg['jobs'], len(cells), verbose=cfg['verbose'])

    print_elapsed(start_time, 'HSS sweep')
    writer.close()

    return writer.row_cnt


def run_measure(cfg):
    """
    Non-Markovianity measure versus μ, maximized over the basis catalog and phase grid.

    Parameters
    ----------
    cfg: dict
        sweep configuration

    Returns
    -------
    row_cnt: int
        number of written rows
    """
    start_time = perf_counter()
    print_sweep_info(cfg)
    reset_progress()

    model = cfg['model']
    tau_grid = cfg['tau_grid']
    cells = [(n, mu) for n in cfg['n_lst'] for mu in np.sort(cfg['mu_lst'])]
    probs = shared_probs(cfg)
    writer = CsvWriter(cfg['out'])
    for n in cfg['n_lst']:
        catalog = basis_catalog(n, cfg['basis_lst'], n_random=cfg['n_random'], seed=cfg['seed'])
        for mu in np.sort(cfg['mu_lst']):
            spec = CorrelatedChannelSpec(model=model, n=n, mu=float(mu))

            # catalog families are distributed over the worker threads
            nm = nm_measure(spec, catalog, cfg['phi_lst'], tau_grid, jobs=cfg['jobs'], probs=probs)
            writer.write([sweep_row(model.tag, n, mu, tau_grid[-1], nm.basis_id, nm.phi, 'nm_hss', nm.value)])
            print_progress(start_time, cfg['jobs'], len(cells), verbose=1)

    print_elapsed(start_time, 'Measure sweep')
    writer.close()

    return writer.row_cnt


def delta_cell(cfg, n):
    """
    Range of variation rows of one qubit number over every basis and phase.

    Parameters
    ----------
    cfg: dict
        sweep configuration

    n: int
        number of qubits

    Returns
    -------
    rows: list of dict
        sweep rows sorted by (basis, phi)
    """
    model = cfg['model']
    rows = []
    for basis_id, rot in basis_catalog(n, cfg['basis_lst'], n_random=cfg['n_random'], seed=cfg['seed']):
        for phi in cfg['phi_lst']:
            fam = PhaseFamily(n=n, basis_rotation=rot, phi=float(phi), basis_id=basis_id)
            delta = delta_range(model, n, cfg['tau_star'], fam)
            rows.append(sweep_row(model.tag, n, None, cfg['tau_star'], basis_id, phi, 'delta', delta))

    return _sorted_rows(rows)


def run_delta(cfg):
    """
    Range of variation δ = HSS(μ=1) - HSS(μ=0) at τ* versus the number of qubits.

    Parameters
    ----------
    cfg: dict
        sweep configuration

    Returns
    -------
    row_cnt: int
        number of written rows
    """
    start_time = perf_counter()
    print_sweep_info(cfg)
    reset_progress()

    writer = CsvWriter(cfg['out'])
    with Parallel(n_jobs=cfg['jobs'], prefer='threads', return_as='generator') as parallel:
        for rows in parallel(delayed(delta_cell)(cfg, n) for n in cfg['n_lst']):
            writer.write(rows)
            print_progress(start_time, cfg['jobs'], len(cfg['n_lst']), verbose=1)

    print_elapsed(start_time, 'δ scan')
    writer.close()

    return writer.row_cnt


def _check_row(check_id, basis, devs, tol, binding=True):
    max_dev = float(np.max(devs)) if len(devs) else 0.0

    return {'formula_id': check_id, 'basis': basis, 'max_abs_dev': max_dev, 'grid_points': len(devs),
            'binding': binding, 'passed': bool(max_dev <= tol)}


def _random_hermitian(rng, dim):
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))

    return 0.5 * (a + a.conj().T)


def check_closed_forms(models, mu_grid, num_tau=50):
    """Standard-basis closed forms against the analytic-derivative HSS."""
    rows = []
    for model in models:
        tau_max = 3.0 if model.tag == 'squeezed' else 5.0
        cid = ClosedFormId(model.tag, 'standard')
        fam = PhaseFamily(n=2, basis_rotation=np.eye(4), phi=np.pi)
        devs = [abs(hss_closed_form(cid, model, mu, tau) -
                    hss_value(CorrelatedChannelSpec(model=model, n=2, mu=mu), fam, tau))
                for mu in mu_grid for tau in np.linspace(0, tau_max, num_tau)]
        rows.append(_check_row(f'{cid.name}_exact', 'standard', devs, tol=1e-10))

    return rows


def check_fast_vs_dense(models, mu_grid, seed, num_ops=10, num_tau=10):
    """Fast channel paths against the literal Kraus sums on random Hermitian inputs."""
    rng = np.random.default_rng(seed)
    rows = []
    for model in models:
        n_lst = (2,) if model.tag == 'ad' else (2, 3, 4)
        devs = []
        for n in n_lst:
            for mu in mu_grid:
                spec = CorrelatedChannelSpec(model=model, n=n, mu=mu)
                for tau in np.linspace(0.1, 5.0, num_tau):
                    for _ in range(num_ops):
                        x = _random_hermitian(rng, 2 ** n)
                        devs.append(np.max(np.abs(apply_channel(spec, tau, x) - dense_reference_apply(spec, tau, x))))
        rows.append(_check_row(f'{model.tag}_fast_vs_dense', 'none', devs, tol=1e-12))

    return rows


def check_finite_difference(models, mu_grid, seed, num_tau=5):
    """Analytic-derivative HSS against the finite-difference HSS (n ≤ 3)."""
    rows = []
    for model in models:
        n_lst = (2,) if model.tag == 'ad' else (2, 3)
        devs = []
        for n in n_lst:
            for basis_id in ('standard', 'local', 'random-0'):
                rot = basis_rotation(basis_id, n, seed=seed)
                for mu in mu_grid:
                    spec = CorrelatedChannelSpec(model=model, n=n, mu=mu)
                    for phi in (0.0, np.pi / 3, np.pi):
                        fam = PhaseFamily(n=n, basis_rotation=rot, phi=phi, basis_id=basis_id)
                        for tau in np.linspace(0.2, 3.0, num_tau):
                            devs.append(abs(hss_value(spec, fam, tau) - finite_difference_hss(spec, fam, tau)))
        rows.append(_check_row(f'{model.tag}_finite_difference', 'catalog', devs, tol=1e-6))

    return rows


def check_initial_value(models, mu_grid, seed):
    """HSS(τ = 0) = √(2^n - 1)/2^n for every sampled model, μ and basis."""
    rows = []
    for model in models:
        n_lst = (2,) if model.tag == 'ad' else (2, 3, 4)
        devs = []
        for n in n_lst:
            ref = np.sqrt(2 ** n - 1) / 2 ** n
            for basis_id in expand_basis_ids(('standard', 'bell', 'hadamard', 'local', 'random'), n, 2):
                fam = PhaseFamily(n=n, basis_rotation=basis_rotation(basis_id, n, seed=seed), phi=0.7,
                                  basis_id=basis_id)
                devs.extend(abs(hss_value(CorrelatedChannelSpec(model=model, n=n, mu=mu), fam, 0.0) - ref)
                            for mu in mu_grid)
        rows.append(_check_row(f'{model.tag}_initial_value', 'catalog', devs, tol=1e-10))

    return rows


def check_multiqubit_dephasing(model, max_qubits=8, num_tau=5):
    """Memoryless dephasing HSS against √((1 + η²)^n - 1)/2^n."""
    devs = []
    for n in range(2, max_qubits + 1):
        spec = CorrelatedChannelSpec(model=model, n=n, mu=0.0)
        fam = PhaseFamily(n=n, basis_rotation=np.eye(2 ** n), phi=np.pi)
        for tau in np.linspace(0.0, 4.0, num_tau):
            eta_t = float(model.decoherence(tau))
            devs.append(abs(hss_value(spec, fam, tau) - np.sqrt((1 + eta_t ** 2) ** n - 1) / 2 ** n))

    return [_check_row('dephasing_multiqubit_memoryless', 'standard', devs, tol=1e-10)]


def check_cp_tp(models, mu_grid, num_tau=20):
    """Choi positivity, trace preservation and unitality of the two-qubit channels."""
    rows = []
    for model in models:
        eig_devs, tp_devs, unit_devs = [], [], []
        for mu in mu_grid:
            spec = CorrelatedChannelSpec(model=model, n=2, mu=mu)
            for tau in np.linspace(0.0, 5.0, num_tau):
                choi = choi_matrix(spec, tau)
                eig_devs.append(max(0.0, -float(np.min(np.linalg.eigvalsh(0.5 * (choi + choi.conj().T))))))

                # partial trace over the output factor of the Choi matrix is the identity for TP maps
                ptr = np.einsum('jaka->jk', choi.reshape(4, 4, 4, 4))
                tp_devs.append(float(np.max(np.abs(ptr - np.eye(4)))))
                if model.unital:
                    unit_devs.append(unitality_gap(spec, tau))
        rows.append(_check_row(f'{model.tag}_choi_positive', 'none', eig_devs, tol=1e-9))
        rows.append(_check_row(f'{model.tag}_trace_preserving', 'none', tp_devs, tol=1e-12))
        if model.unital:
            rows.append(_check_row(f'{model.tag}_unital', 'none', unit_devs, tol=1e-12))
        else:
            # shortfall of ‖Φ(I) - I‖ below 1e-3 at G = 0.5
            gaps = [float(np.max(np.abs(apply_corr_ad_batch(np.array([0.5]), mu, np.eye(4))[0] - np.eye(4))))
                    for mu in mu_grid]
            shortfall = [max(0.0, NON_UNITAL_GAP - g) for g in gaps]
            rows.append(_check_row(f'{model.tag}_non_unital', 'none', shortfall, tol=0.0))

    return rows


def check_chi_invariance(models, mu_grid=(0.0, 0.4, 0.8, 1.0)):
    """μ-invariance of the χ > 0 intervals in the standard basis at φ = π."""
    rows = []
    for model in models:
        tau_step = 0.001 if model.tag == 'squeezed' else 0.01
        tau_grid = make_tau_grid(3.0 if model.tag == 'squeezed' else 10.0, tau_step)
        fam = PhaseFamily(n=2, basis_rotation=np.eye(4), phi=np.pi)
        seg_lst = [chi_segments(CurveEvaluator(CorrelatedChannelSpec(model=model, n=2, mu=mu), tau_grid).curve(fam))
                   for mu in mu_grid]

        # boundary deviations in units of grid steps (segment count mismatch fails outright)
        devs = []
        for segs in seg_lst[1:]:
            if len(segs) != len(seg_lst[0]):
                devs.append(np.inf)
                continue
            devs.extend(max(abs(a[0] - b[0]), abs(a[1] - b[1])) / tau_step for a, b in zip(segs, seg_lst[0]))
        rows.append(_check_row(f'{model.tag}_chi_invariance', 'standard', devs, tol=1.0 + 1e-9))

        if isinstance(model, ColoredDephasing) and model.nu == 1.0 and seg_lst[0]:
            rows.append(_check_row('dephasing_first_chi_boundary', 'standard',
                                   [abs(seg_lst[0][0][0] - 0.4708)], tol=0.01))

    return rows


def check_markovian_null(seed, mu_grid):
    """Monotone dephasing (ν = 0.2) gives a null measure."""
    model = ColoredDephasing(nu=0.2)
    catalog = basis_catalog(2, ('standard', 'bell', 'hadamard', 'local', 'random'), n_random=2, seed=seed)
    tau_grid = make_tau_grid(10.0, 0.01)
    vals = [nm_measure(CorrelatedChannelSpec(model=model, n=2, mu=mu), catalog, make_phi_grid(4), tau_grid).value
            for mu in mu_grid]

    return [_check_row('dephasing_markovian_null', 'catalog', vals, tol=0.0)]


def figure_trends(models, seed, jobs=1):
    """
    Qualitative figure trends, reported without failing the suite.

    Returns
    -------
    rows: list of dict
        report-only audit rows (max_abs_dev holds the largest trend violation)
    """
    rows = []
    mu_grid = np.linspace(0, 1, 11)
    phi_grid = make_phi_grid(8)
    catalog = basis_catalog(2, ('standard', 'bell', 'hadamard', 'local', 'random'), n_random=4, seed=seed)
    for model in models:
        tau_grid = make_tau_grid(3.0, 0.005) if model.tag == 'squeezed' else make_tau_grid(10.0, 0.02)
        nm = np.array([nm_measure(CorrelatedChannelSpec(model=model, n=2, mu=mu), catalog, phi_grid, tau_grid,
                                  jobs=jobs).value for mu in mu_grid])
        if model.tag in ('dephasing', 'squeezed'):
            rows.append(_check_row(f'{model.tag}_measure_flat', 'catalog', [np.ptp(nm)], tol=1e-4, binding=False))
        elif model.tag == 'depolarizing':
            drops = np.maximum(-np.diff(nm), 0)
            rows.append(_check_row('depolarizing_measure_non_decreasing', 'catalog', drops, tol=1e-12,
                                   binding=False))
        else:
            k = int(np.argmin(nm))
            rows.append(_check_row('ad_measure_interior_minimum', 'catalog', [float(k in (0, mu_grid.size - 1))],
                                   tol=0.0, binding=False))

        if model.unital:
            std_fam = [PhaseFamily(n=n, basis_rotation=np.eye(2 ** n), phi=DEFAULT_DELTA_PHI[model.tag])
                       for n in range(2, 9)]
            delta = [delta_range(model, fam.n, DEFAULT_TAU_STAR[model.tag], fam) for fam in std_fam]
            rises = np.maximum(np.diff(delta), 0)
            rows.append(_check_row(f'{model.tag}_delta_decreasing', 'standard', rises, tol=0.0, binding=False))

    return rows


def run_validate(cfg):
    """
    Oracle and invariant suite with the closed-form audit.

    Parameters
    ----------
    cfg: dict
        sweep configuration (model parameters override the defaults of that model)

    Returns
    -------
    audit: pandas.DataFrame
        audit table (formula_id, basis, max_abs_dev, grid_points, binding, passed)
    """
    start_time = perf_counter()
    models = [cfg['model'] if tag == cfg['model'].tag else make_model(tag) for tag in MODELS]
    unital = [m for m in models if m.unital]
    mu_grid = (0.0, 0.25, 0.5, 0.75, 1.0)
    seed = cfg['seed']

    print_flsh("\nRunning the validation suite...")
    rows = formula_audit(models, mu_grid=mu_grid).to_dict('records')
    rows += check_closed_forms(models, mu_grid)
    rows += check_fast_vs_dense(models, mu_grid, seed)
    rows += check_finite_difference(models, mu_grid, seed)
    rows += check_initial_value(models, mu_grid, seed)
    rows += check_multiqubit_dephasing(next(m for m in models if m.tag == 'dephasing'))
    rows += check_cp_tp(models, mu_grid)
    rows += check_chi_invariance(unital)
    rows += check_markovian_null(seed, mu_grid)
    rows += figure_trends(models, seed, jobs=cfg['jobs'])

    audit = pd.DataFrame(rows, columns=['formula_id', 'basis', 'max_abs_dev', 'grid_points', 'binding', 'passed'])
    print_audit_report(audit)
    save_audit(audit, cfg['out'] or DEFAULT_AUDIT_PATH)
    print_elapsed(start_time, 'Validation')

    failed = audit[audit['binding'] & ~audit['passed']]
    if len(failed) > 0:
        raise ValidationFailure(f"{len(failed)} binding check(s) failed: {', '.join(failed['formula_id'])}")
    deviating = audit[~audit['binding'] & ~audit['passed']]
    if len(deviating) > 0:
        print_warning(f"{len(deviating)} report-only check(s) deviate: {', '.join(deviating['formula_id'])}")

    return audit
