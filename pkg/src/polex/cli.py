"""Experiment runner: reproduce each headline result as a named command.

Usage:
    polex run   --experiment fig3_breaktime [--config FILE] [--set KEY=VAL ...]
    polex sweep --experiment fig2_mft_angles --axis one_minus_cos_theta \
                --values 1e-1,1e-3,1e-5,1e-7
    polex check [--tol-scale X]

Experiments: fig2_mft_angles, fig3_breaktime, fig4_zeta, fig5_entropy,
fig6_zeta_rot, fig7_plateau, fig8_pulse, rate_calc, oracle_check.

Configuration is a plain text file of "key = value" lines (comments start
with '#'); command-line --set overrides file values, and unknown keys are
rejected.  List-valued keys take comma-separated entries.  Every run writes
its CSV outputs plus a machine-readable manifest.json echoing the config,
the code version, timing, the output list, and the pass/fail status of the
inline invariant checks.  Output root: --outdir, else $POLEX_OUTPUT_ROOT,
else ./polex_out.

Exit codes: 0 success, 1 config error, 2 numerical failure,
3 acceptance-check failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor

import numpy as np
import scipy.sparse as sp

from . import __version__
from . import coupling, meanfield, pulse, quantum, spinspace

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NUMERICAL = 2
EXIT_CHECK = 3


class ConfigError(ValueError):
    pass


def _parse_value(raw: str, kind):
    raw = raw.strip()
    if kind is float:
        return float(raw)
    if kind is int:
        return int(raw)
    if kind is str:
        return raw
    if kind == "float_list":
        return [float(x) for x in raw.split(",") if x.strip()]
    if kind == "int_list":
        return [int(x) for x in raw.split(",") if x.strip()]
    raise ConfigError(f"unhandled config kind {kind!r}")


# experiment name -> {key: (kind, default)}
SCHEMAS = {
    "fig2_mft_angles": {
        "one_minus_cos_theta": ("float_list", [1e-1, 1e-3, 1e-5, 1e-7]),
        "t_end": (float, 40.0),
        "tol": (float, 1e-10),
        "dt_sample": (float, 0.01),
    },
    "fig3_breaktime": {
        "N_list": ("int_list", [100, 200, 400, 800, 1600]),
        "t_end": (float, 8.0),
        "dt_sample": (float, 0.002),
        "tol": (float, 1e-9),
        "hold_band": (float, quantum.HOLD_BAND),
    },
    "fig4_zeta": {
        "N_list": ("int_list", [100, 200, 400, 800, 1600]),
        "t_end": (float, 8.0),
        "dt_sample": (float, 0.002),
        "tol": (float, 1e-9),
    },
    "fig5_entropy": {
        "N_list": ("int_list", [100, 200, 400, 800, 1600]),
        "t_end": (float, 8.0),
        "dt_sample": (float, 0.002),
        "tol": (float, 1e-9),
    },
    "fig6_zeta_rot": {
        "N_list": ("int_list", [15, 30, 60]),
        "cos_theta": (float, 0.96),
        "t_end": (float, 4.0),
        "dt_sample": (float, 0.01),
        "tol": (float, 1e-9),
    },
    "fig7_plateau": {
        "N_list": ("int_list", [15, 30, 60]),
        "cos_theta": (float, 1.0),
        "dt_sample": (float, 0.02),
        "tol": (float, 1e-9),
    },
    "fig8_pulse": {
        "one_minus_cos_theta": (float, 0.01),
        "L": (float, 0.5),
        "nz": (int, 512),
        "t_max": (float, 1.0),
        "ramp_time": (float, 0.05),
        "t_start": (float, 0.6),
        "n_snapshots": (int, 9),
    },
    "rate_calc": {
        "omega1": (float, 1.0),
        "omega2": (float, 1.0),
        "rho": (float, 1.0),
        "I1": (float, 1.0),
        "I2": (float, 1.0),
    },
    "oracle_check": {
        "N": (int, 2),
        "theta": (float, 0.2),
        "t_end": (float, 5.0),
        "n_samples": (int, 11),
    },
}


def parse_config_file(path):
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            if "=" not in stripped:
                raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
            key, _, value = stripped.partition("=")
            out[key.strip()] = value.strip()
    return out


def build_params(experiment, raw_pairs):
    """Validate raw key/value strings against the experiment schema."""
    if experiment not in SCHEMAS:
        raise ConfigError(
            f"unknown experiment {experiment!r}; choose from {sorted(SCHEMAS)}"
        )
    schema = SCHEMAS[experiment]
    params = {key: default for key, (_, default) in schema.items()}
    for key, raw in raw_pairs.items():
        if key not in schema:
            raise ConfigError(f"unknown config key {key!r} for {experiment}")
        kind, _ = schema[key]
        try:
            params[key] = _parse_value(raw, kind)
        except ValueError as exc:
            raise ConfigError(f"bad value for {key!r}: {exc}") from exc
    return params


# ---------------------------------------------------------------------------
# experiment runners: each returns (files, checks, summary)
# ---------------------------------------------------------------------------


def _run_fig2(params, outdir):
    files, checks = [], []
    points = []
    per_angle = {}
    for omc in params["one_minus_cos_theta"]:
        if not 0.0 < omc <= 2.0:
            raise ConfigError(f"1 - cos(theta) must lie in (0, 2], got {omc}")
        theta = float(np.arccos(1.0 - omc))
        series = meanfield.mf_evolve(
            meanfield.opposite_helicity_state(),
            meanfield.MfParams(theta=theta),
            t_end=params["t_end"],
            tol=params["tol"],
            dt_sample=params["dt_sample"],
        )
        path = os.path.join(outdir, f"mft_omc{omc:g}.csv")
        meanfield.write_csv(series, path)
        files.append(path)
        rep = meanfield.crossing_report(series)
        na, nb = series.bloch_norm_series()
        energy = series.energy_series()
        checks.append(
            (
                f"bloch_norm_conservation_omc{omc:g}",
                bool(max(abs(na - na[0]).max(), abs(nb - nb[0]).max()) < 1e-8),
                f"max drift {max(abs(na - na[0]).max(), abs(nb - nb[0]).max()):.3e}",
            )
        )
        checks.append(
            (
                f"energy_conservation_omc{omc:g}",
                bool(abs(energy - energy[0]).max() < 1e-8),
                f"max drift {abs(energy - energy[0]).max():.3e}",
            )
        )
        points.append((omc, rep.first_crossing_time))
        per_angle[f"{omc:g}"] = {
            "first_crossing": rep.first_crossing_time,
            "period": rep.period,
            "min_sigma3": float(series.sigma3.min()),
        }
    slope = intercept = residual = float("nan")
    if len(points) >= 3:
        slope, intercept, residual = meanfield.log_scaling_fit(points)
    summary = {
        "per_angle": per_angle,
        "fit_slope": slope,
        "fit_intercept": intercept,
        "fit_residual": residual,
    }
    return files, checks, summary


def _breaktime_common(params, outdir, with_band=True):
    report = quantum.break_time_analysis(
        params["N_list"],
        t_end=params["t_end"],
        dt_sample=params["dt_sample"],
        tol=params["tol"],
        hold_band=params.get("hold_band", quantum.HOLD_BAND),
    )
    files = []
    for n, series in zip(report.n_list, report.series):
        path = os.path.join(outdir, f"breaktime_N{n}.csv")
        quantum.write_csv(series, path)
        files.append(path)
    checks = []
    for n, series in zip(report.n_list, report.series):
        checks.append(
            (
                f"unitarity_N{n}",
                bool(np.max(np.abs(series.norm - 1.0)) < 1e-10),
                f"max norm drift {np.max(np.abs(series.norm - 1.0)):.3e}",
            )
        )
        echarge = series.sigma3 + series.tau3
        checks.append(
            (
                f"charge_conservation_N{n}",
                bool(np.max(np.abs(echarge - echarge[0])) < 1e-10),
                f"max total helicity drift {np.max(np.abs(echarge - echarge[0])):.3e}",
            )
        )
    return report, files, checks


def _run_fig3(params, outdir):
    report, files, checks = _breaktime_common(params, outdir)
    summary = {
        "N_list": report.n_list,
        "first_crossings": report.first_crossings.tolist(),
        "slope_vs_logN": report.slope_vs_logn,
        "hold_times": report.hold_times.tolist(),
        "transition_times": report.transition_times.tolist(),
        "hold_band": report.hold_band,
    }
    return files, checks, summary


def _run_fig4(params, outdir):
    params = dict(params, hold_band=quantum.HOLD_BAND)
    report, files, checks = _breaktime_common(params, outdir)
    peaks = {}
    for n, series in zip(report.n_list, report.series):
        t_pk, h_pk = quantum.peak_locations(series.t, np.abs(series.zeta), min_height=0.05)
        peaks[str(n)] = {
            "peak_times": t_pk[:4].tolist(),
            "peak_heights": h_pk[:4].tolist(),
        }
    summary = {"zeta_peaks": peaks, "first_crossings": report.first_crossings.tolist()}
    return files, checks, summary


def _run_fig5(params, outdir):
    params = dict(params, hold_band=quantum.HOLD_BAND)
    report, files, checks = _breaktime_common(params, outdir)
    entropy = {}
    for n, series in zip(report.n_list, report.series):
        t_pk, h_pk = quantum.peak_locations(series.t, series.s_ent, min_height=0.3)
        entropy[str(n)] = {
            "peak_times": t_pk[:3].tolist(),
            "peak_over_logN": (h_pk[:3] / np.log(n)).tolist(),
        }
    summary = {"entropy_peaks": entropy}
    return files, checks, summary


def _run_fig6(params, outdir):
    files, checks = [], []
    rise_info = {}
    theta = float(np.arccos(params["cos_theta"]))
    t_grid = np.arange(0.0, params["t_end"] + 0.5 * params["dt_sample"], params["dt_sample"])
    for n in params["N_list"]:
        ham = coupling.build_hamiltonian("plane", theta, n, n, 1.0 / n)
        plan = quantum.EvolutionPlan(ham, t_grid, params["tol"])
        series = quantum.observable_series(quantum.opposed_helicity_initial(n), plan)
        path = os.path.join(outdir, f"zeta_rot_N{n}.csv")
        quantum.write_csv(series, path)
        files.append(path)
        azr = np.abs(series.zeta_rot)
        reach = np.where(azr >= 0.3)[0]
        rise_info[str(n)] = {
            "max_abs_zeta_rot": float(azr.max()),
            "t_reach_0p3": float(series.t[reach[0]]) if reach.size else None,
        }
        checks.append(
            (
                f"unitarity_N{n}",
                bool(np.max(np.abs(series.norm - 1.0)) < 1e-10),
                f"max norm drift {np.max(np.abs(series.norm - 1.0)):.3e}",
            )
        )
    return files, checks, {"rise": rise_info, "cos_theta": params["cos_theta"]}


def _run_fig7(params, outdir):
    report = quantum.plateau_analysis(
        params["N_list"],
        cos_theta=params["cos_theta"],
        dt_sample=params["dt_sample"],
        tol=params["tol"],
    )
    files = []
    checks = []
    for n, series in zip(report.n_list, report.series):
        path = os.path.join(outdir, f"plateau_N{n}.csv")
        quantum.write_csv(series, path)
        files.append(path)
        checks.append(
            (
                f"unitarity_N{n}",
                bool(np.max(np.abs(series.norm - 1.0)) < 1e-10),
                f"max norm drift {np.max(np.abs(series.norm - 1.0)):.3e}",
            )
        )
    summary = {
        "N_list": report.n_list,
        "plateau_heights": report.plateau_heights.tolist(),
        "rise_times": report.rise_times.tolist(),
        "hang_times": report.hang_times.tolist(),
        "max_sigma3_rot": report.max_sigma3_rot.tolist(),
    }
    return files, checks, summary


def _run_fig8(params, outdir):
    theta = float(np.arccos(1.0 - params["one_minus_cos_theta"]))
    grid = pulse.PulseGrid(
        L=params["L"],
        nz=params["nz"],
        boundary=pulse.BoundaryProfile(ramp_time=params["ramp_time"]),
    )
    mf_params = meanfield.MfParams(theta=theta)
    snap_times = np.linspace(0.1, params["t_max"], params["n_snapshots"])
    result = pulse.run_to_steady(grid, mf_params, params["t_max"], snapshot_times=snap_times)
    files = []
    for k, t in enumerate(result.snapshot_times):
        path = os.path.join(outdir, f"pulse_snapshot_{k:02d}.csv")
        pulse.write_snapshot_csv(result.z, result.snapshots[k], path)
        files.append(path)
    manifest_path = os.path.join(outdir, "pulse_snapshots_manifest.csv")
    pulse.write_manifest(result, [os.path.basename(p) for p in files], manifest_path)
    files.append(manifest_path)
    residual = pulse.standing_residual(result, params["t_start"])
    # causality: beyond the light front z > t everything is still zero
    worst_front = 0.0
    for t, snap in zip(result.snapshot_times, result.snapshots):
        ahead = result.z > t + grid.boundary.ramp_time
        if ahead.any():
            worst_front = max(worst_front, float(np.max(np.abs(snap[:, ahead]))))
    antisym = max(
        float(np.max(np.abs(snap[5] + snap[2]))) for snap in result.snapshots
    )
    checks = [
        ("standing_residual", bool(residual < 0.01), f"residual {residual:.3e}"),
        ("causality_front", bool(worst_front < 1e-8), f"max field ahead of front {worst_front:.3e}"),
        ("tau_equals_minus_sigma", bool(antisym < 1e-8), f"max asymmetry {antisym:.3e}"),
    ]
    summary = {
        "standing_residual": residual,
        "causality_max": worst_front,
        "antisymmetry_max": antisym,
        "converged": result.converged,
    }
    return files, checks, summary


def _run_rate_calc(params, outdir):
    inputs = coupling.PhysicalInputs(
        omega1=params["omega1"],
        omega2=params["omega2"],
        rho=params["rho"],
        I1=params["I1"],
        I2=params["I2"],
    )
    linv = coupling.exchange_length(inputs)
    fp = coupling.first_principles_rate(inputs)
    consts = coupling.coupling_constants(inputs)
    path = os.path.join(outdir, "rate_calc.csv")
    with open(path, "w", encoding="ascii") as fh:
        fh.write("quantity,value,unit\n")
        fh.write(f"inverse_exchange_length,{linv:.17g},cm^-1\n")
        fh.write(f"first_principles_rate,{fp:.17g},cm^-1\n")
        fh.write(f"R,{consts.R:.17g},eV cm^3\n")
        fh.write(f"n1,{consts.n1:.17g},cm^-3\n")
        fh.write(f"n2,{consts.n2:.17g},cm^-3\n")
    print(f"L^-1 = {linv:.6g} cm^-1   (exchange length {1.0 / linv:.6g} cm)")
    summary = {
        "inverse_length_cm": linv,
        "first_principles_cm": fp,
        "prefactor_ratio": linv / fp,
        "R_eV_cm3": consts.R,
    }
    return [path], [("rate_positive", bool(linv > 0), f"{linv:.3e}")], summary


def _run_oracle_check(params, outdir):
    from scipy.linalg import expm

    n = params["N"]
    worst = 0.0
    for basis in ("plane", "circular"):
        ham = coupling.build_hamiltonian(basis, params["theta"], n, n, 1.0 / n)
        brute = spinspace.brute_force_embed(n, n, params["theta"], basis, 1.0 / n)
        psi_d = quantum.opposed_helicity_initial(n).amplitudes
        psi_b = spinspace.brute_force_product_state(n, n, [0, 1], [1, 0])
        a3 = spinspace.brute_force_operator(n, n, "a", "S3")
        b3 = spinspace.brute_force_operator(n, n, "b", "S3")
        for t in np.linspace(0.0, params["t_end"], params["n_samples"]):
            ud = expm(-1j * t * ham.matrix.toarray()) @ psi_d
            ub = expm(-1j * t * brute) @ psi_b
            state = spinspace.QuantumState(n, n, ud)
            s3, t3, _ = quantum.expectations(state)
            s3_b = np.vdot(ub, a3 @ ub).real / n
            t3_b = np.vdot(ub, b3 @ ub).real / n
            worst = max(worst, abs(s3 - s3_b), abs(t3 - t3_b))
    path = os.path.join(outdir, "oracle_check.csv")
    with open(path, "w", encoding="ascii") as fh:
        fh.write("quantity,value\n")
        fh.write(f"max_observable_deviation,{worst:.17g}\n")
    ok = worst < 1e-8
    return [path], [("oracle_equivalence", bool(ok), f"max deviation {worst:.3e}")], {
        "max_deviation": worst
    }


RUNNERS = {
    "fig2_mft_angles": _run_fig2,
    "fig3_breaktime": _run_fig3,
    "fig4_zeta": _run_fig4,
    "fig5_entropy": _run_fig5,
    "fig6_zeta_rot": _run_fig6,
    "fig7_plateau": _run_fig7,
    "fig8_pulse": _run_fig8,
    "rate_calc": _run_rate_calc,
    "oracle_check": _run_oracle_check,
}


def output_root(cli_outdir=None):
    if cli_outdir:
        return cli_outdir
    return os.environ.get("POLEX_OUTPUT_ROOT", "polex_out")


def run_experiment(experiment, params, outdir):
    """Execute one experiment; returns the manifest dictionary."""
    os.makedirs(outdir, exist_ok=True)
    started = time.time()
    files, checks, summary = RUNNERS[experiment](params, outdir)
    manifest = {
        "experiment": experiment,
        "config": params,
        "code_version": __version__,
        "elapsed_seconds": time.time() - started,
        "outputs": [os.path.basename(f) for f in files],
        "checks": [{"name": n, "passed": ok, "detail": d} for n, ok, d in checks],
        "summary": summary,
        "all_checks_passed": all(ok for _, ok, _ in checks),
    }
    with open(os.path.join(outdir, "manifest.json"), "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True, default=str)
    return manifest


def _sweep_child(args):
    experiment, params, outdir = args
    try:
        manifest = run_experiment(experiment, params, outdir)
        return {"ok": True, "outdir": outdir, "summary": manifest["summary"]}
    except Exception as exc:  # recorded, sweep continues
        return {"ok": False, "outdir": outdir, "error": f"{type(exc).__name__}: {exc}"}


def _flatten(prefix, obj, out):
    if isinstance(obj, dict):
        for k, v in obj.items():
            _flatten(f"{prefix}.{k}" if prefix else str(k), v, out)
    elif isinstance(obj, (list, tuple)):
        for i, v in enumerate(obj):
            _flatten(f"{prefix}[{i}]", v, out)
    else:
        out[prefix] = obj


def run_sweep(experiment, base_params, axis, values, outdir, workers=1):
    """One sub-run per axis value; aggregate scalar summaries into a CSV."""
    if axis not in SCHEMAS[experiment]:
        raise ConfigError(f"axis {axis!r} is not a parameter of {experiment}")
    if not values:
        raise ConfigError("empty sweep values")
    kind, _ = SCHEMAS[experiment][axis]
    jobs = []
    for v in values:
        params = dict(base_params)
        params[axis] = _parse_value(v, kind)
        jobs.append((experiment, params, os.path.join(outdir, f"{axis}_{v}")))
    os.makedirs(outdir, exist_ok=True)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_sweep_child, jobs))
    else:
        results = [_sweep_child(j) for j in jobs]
    agg_path = os.path.join(outdir, "sweep_summary.csv")
    rows = []
    keys = ["axis_value", "ok"]
    for v, res in zip(values, results):
        row = {"axis_value": v, "ok": res["ok"]}
        if res["ok"]:
            flat = {}
            _flatten("", res["summary"], flat)
            for k, val in flat.items():
                if isinstance(val, (int, float)) and k not in keys:
                    keys.append(k)
                row[k] = val
        else:
            row["error"] = res["error"]
            if "error" not in keys:
                keys.append("error")
        rows.append(row)
    with open(agg_path, "w", encoding="ascii") as fh:
        fh.write(",".join(keys) + "\n")
        for row in rows:
            fh.write(",".join(str(row.get(k, "")) for k in keys) + "\n")
    return results, agg_path


# ---------------------------------------------------------------------------
# structural invariants suite (cli check)
# ---------------------------------------------------------------------------


def structural_checks(tol_scale=1.0):
    """Fast invariant suite: algebra, Hermiticity, conservation, drift."""
    results = []

    def record(name, value, bound):
        results.append((name, bool(value <= bound), value, bound))

    # operator algebra for every N <= 16
    worst_comm = worst_casimir = worst_adjoint = 0.0
    for n in range(1, 17):
        s1 = spinspace.collective_op(n, "S1").matrix
        s2 = spinspace.collective_op(n, "S2").matrix
        s3 = spinspace.collective_op(n, "S3").matrix
        comm = (s1 @ s2 - s2 @ s1 - 2j * s3)
        worst_comm = max(worst_comm, np.max(np.abs(comm.toarray())))
        cas = (s1 @ s1 + s2 @ s2 + s3 @ s3 - n * (n + 2) * sp.identity(n + 1)).toarray()
        worst_casimir = max(worst_casimir, np.max(np.abs(cas)))
        adj = (
            spinspace.collective_op(n, "Splus").matrix
            - spinspace.collective_op(n, "Sminus").matrix.conjugate().transpose()
        )
        worst_adjoint = max(worst_adjoint, np.max(np.abs(adj.toarray())) if adj.nnz else 0.0)
    record("commutator_identity", worst_comm, 1e-12 * tol_scale)
    record("casimir_identity", worst_casimir, 1e-11 * tol_scale)
    record("ladder_adjointness", worst_adjoint, 0.0)

    # Hamiltonian hermiticity (exact) for a grid of cases
    worst_herm = 0.0
    for basis in ("plane", "circular"):
        for theta in (0.0, 0.3, np.pi / 2):
            ham = coupling.build_hamiltonian(basis, theta, 5, 4, 0.37)
            diff = ham.matrix - ham.matrix.conjugate().transpose()
            if diff.nnz:
                worst_herm = max(worst_herm, np.max(np.abs(diff.data)))
    record("hamiltonian_hermiticity", worst_herm, 0.0)

    # charge conservation, unitarity, energy drift on a production-style run
    n = 64
    ham = coupling.build_hamiltonian("circular", 0.0, n, n, 1.0 / n)
    comm_charge = ham.matrix @ coupling.total_m_operator(n, n) - coupling.total_m_operator(
        n, n
    ) @ ham.matrix
    record(
        "charge_commutator",
        float(np.max(np.abs(comm_charge.toarray()))) if comm_charge.nnz else 0.0,
        1e-10 * tol_scale,
    )
    block = coupling.block_restrict(ham, 0.0)
    t_grid = np.arange(0.0, 4.0, 0.01)
    plan = quantum.EvolutionPlan(block, t_grid, 1e-9)
    series = quantum.observable_series(quantum.opposed_helicity_initial(n), plan)
    record("unitarity", float(np.max(np.abs(series.norm - 1.0))), 1e-10 * tol_scale)
    scale = float(np.max(np.abs(block.matrix).sum(axis=1)))
    record(
        "energy_drift_relative",
        float(np.max(np.abs(series.energy - series.energy[0]))) / scale,
        1e-8 * tol_scale,
    )
    charge = series.sigma3 + series.tau3
    record("charge_conservation", float(np.max(np.abs(charge - charge[0]))), 1e-10 * tol_scale)

    # mean-field conservation on a random-angle run
    rng = np.random.default_rng(2024)
    theta = float(rng.uniform(0.05, np.pi - 0.05))
    mfs = meanfield.mf_evolve(
        meanfield.opposite_helicity_state(), meanfield.MfParams(theta=theta), 50.0, tol=1e-11
    )
    na, nb = mfs.bloch_norm_series()
    energy = mfs.energy_series()
    record(
        "mf_bloch_conservation",
        float(max(np.abs(na - na[0]).max(), np.abs(nb - nb[0]).max())),
        1e-8 * tol_scale,
    )
    record("mf_energy_conservation", float(np.abs(energy - energy[0]).max()), 1e-8 * tol_scale)
    return results


def run_check(tol_scale=1.0):
    results = structural_checks(tol_scale)
    width = max(len(name) for name, _, _, _ in results)
    all_ok = True
    for name, ok, value, bound in results:
        status = "PASS" if ok else "FAIL"
        print(f"[{status}] {name:<{width}}  value {value:.3e}  bound {bound:.3e}")
        all_ok &= ok
    print("check:", "all invariants satisfied" if all_ok else "INVARIANT FAILURES")
    return all_ok


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def _add_common(p):
    p.add_argument("--experiment", required=True, choices=sorted(SCHEMAS))
    p.add_argument("--config", help="key = value configuration file")
    p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                   help="override a config value (repeatable)")
    p.add_argument("--outdir", help="output directory (default $POLEX_OUTPUT_ROOT/<experiment>)")


def _collect_raw(args):
    raw = {}
    if args.config:
        raw.update(parse_config_file(args.config))
    for item in args.set:
        if "=" not in item:
            raise ConfigError(f"--set expects KEY=VALUE, got {item!r}")
        key, _, value = item.partition("=")
        raw[key.strip()] = value.strip()
    return raw


def main(argv=None):
    parser = argparse.ArgumentParser(prog="polex", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=f"polex {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one experiment")
    _add_common(p_run)

    p_sweep = sub.add_parser("sweep", help="run one experiment per axis value")
    _add_common(p_sweep)
    p_sweep.add_argument("--axis", required=True, help="parameter to sweep")
    p_sweep.add_argument("--values", required=True, help="comma-separated axis values")
    p_sweep.add_argument("--workers", type=int, default=1)

    p_check = sub.add_parser("check", help="run the structural invariants suite")
    p_check.add_argument("--tol-scale", type=float, default=1.0,
                         help="scale every tolerance (diagnostics only)")

    args = parser.parse_args(argv)
    try:
        if args.command == "check":
            return EXIT_OK if run_check(args.tol_scale) else EXIT_CHECK
        raw = _collect_raw(args)
        params = build_params(args.experiment, raw)
        outdir = args.outdir or os.path.join(output_root(), args.experiment)
        if args.command == "run":
            manifest = run_experiment(args.experiment, params, outdir)
            print(json.dumps(manifest["summary"], indent=2, sort_keys=True, default=str))
            for check in manifest["checks"]:
                status = "PASS" if check["passed"] else "FAIL"
                print(f"[{status}] {check['name']}: {check['detail']}")
            return EXIT_OK if manifest["all_checks_passed"] else EXIT_CHECK
        # sweep
        values = [v.strip() for v in args.values.split(",") if v.strip()]
        results, agg = run_sweep(
            args.experiment, params, args.axis, values, outdir
            if args.outdir
            else os.path.join(output_root(), f"{args.experiment}_sweep"),
            workers=args.workers,
        )
        failures = [r for r in results if not r["ok"]]
        print(f"sweep complete: {len(results) - len(failures)}/{len(results)} runs ok; "
              f"aggregate in {agg}")
        for r in failures:
            print(f"  failed: {r['outdir']}: {r['error']}")
        return EXIT_OK if not failures else EXIT_NUMERICAL
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (RuntimeError, FloatingPointError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
