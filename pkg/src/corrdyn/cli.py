"""Batch front end: parse a JSON run configuration, execute tasks, emit CSV.

Exit codes: 0 success, 2 config/parse failure, 3 numeric failure (pole
proximity, step too large, divergent series), 4 dense size cap exceeded.
Every error path prints a single line starting with "error:".  Outputs are
deterministic: floats carry 17 significant digits and no wall-clock or RNG
state enters any file.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field as dc_field
from pathlib import Path


def _cap_threads() -> None:
    # honored only if set before numpy loads its BLAS; main() runs this first
    n = os.environ.get("CORRDYN_THREADS")
    if n:
        for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
            os.environ.setdefault(var, n)


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


@dataclass(frozen=True)
class TimeGrid:
    t_max: float
    dt: float
    stride: int = 1


@dataclass(frozen=True)
class RunConfig:
    sites: int
    fields: list
    couplings: list
    initial_state: dict
    time: TimeGrid | None
    observables: list[str]
    tasks: list[str]
    method: str = "rk4"
    spectrum_options: dict = dc_field(default_factory=dict)
    resolvent_options: dict = dc_field(default_factory=dict)


_TASKS = ("evolve", "spectrum", "resolvent", "decompose", "validate")


def load_config(path: str | Path) -> RunConfig:
    from .errors import ConfigError

    try:
        raw = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")

    def need(key, typ, default=None, required=True):
        if key not in raw:
            if required:
                raise ConfigError(f"missing config key {key!r}")
            return default
        val = raw[key]
        if typ is not None and not isinstance(val, typ):
            raise ConfigError(f"config key {key!r} has the wrong type")
        return val

    sites = need("sites", int)
    if sites < 1:
        raise ConfigError("sites must be >= 1")
    fields = need("fields", list)
    if len(fields) != sites or any(
        not isinstance(f, list) or len(f) != 3 for f in fields
    ):
        raise ConfigError("fields must be a list of one 3-vector per site")
    couplings = need("couplings", list, default=[], required=False)
    for c in couplings:
        if not isinstance(c, dict) or not {"i", "j", "tensor"} <= set(c):
            raise ConfigError("each coupling needs keys i, j, tensor")
        if not (
            isinstance(c["i"], int)
            and isinstance(c["j"], int)
            and 0 <= c["i"] < c["j"] < sites
        ):
            raise ConfigError("coupling sites must satisfy 0 <= i < j < sites")
        t = c["tensor"]
        if not isinstance(t, list) or len(t) != 3 or any(len(r) != 3 for r in t):
            raise ConfigError("coupling tensor must be 3x3")
    state = need("initial_state", dict)
    if len(set(state) & {"product", "named", "correlators"}) != 1:
        raise ConfigError(
            "initial_state must have exactly one of: product, named, correlators"
        )
    tasks = need("tasks", list)
    if not tasks or any(t not in _TASKS for t in tasks):
        raise ConfigError(f"tasks must be a nonempty subset of {_TASKS}")
    time_raw = need("time", dict, required="evolve" in tasks or "validate" in tasks)
    grid = None
    if time_raw is not None:
        try:
            grid = TimeGrid(
                float(time_raw["t_max"]),
                float(time_raw["dt"]),
                int(time_raw.get("stride", 1)),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"bad time block: {exc}") from exc
        if grid.dt <= 0:
            raise ConfigError("time.dt must be positive")
        if grid.stride < 1:
            raise ConfigError("time.stride must be >= 1")
    observables = need("observables", list, default=[], required=False)
    method = need("method", str, default="rk4", required=False)
    if method not in ("rk4", "expm"):
        raise ConfigError("method must be 'rk4' or 'expm'")
    return RunConfig(
        sites=sites,
        fields=fields,
        couplings=couplings,
        initial_state=state,
        time=grid,
        observables=[str(o) for o in observables],
        tasks=[str(t) for t in tasks],
        method=method,
        spectrum_options=need("spectrum", dict, default={}, required=False),
        resolvent_options=need("resolvent", dict, default={}, required=False),
    )


def parse_observable(label: str, n_sites: int):
    """Observable for a label under the Pauli-string grammar (ladder allowed)."""
    from .errors import ConfigError
    from .pauli import parse_label

    if not label.split():
        raise ConfigError("observable labels must be nonempty")
    try:
        return parse_label(label, n_sites)
    except ValueError as exc:
        raise ConfigError(f"bad observable {label!r}: {exc}") from exc


def _build_hamiltonian(cfg: RunConfig):
    import numpy as np

    from .hamiltonian import SpinHamiltonian

    couplings = {
        (c["i"], c["j"]): np.array(c["tensor"], dtype=float) for c in cfg.couplings
    }
    return SpinHamiltonian(cfg.sites, np.array(cfg.fields, dtype=float), couplings)


def _initial_correlators(cfg: RunConfig):
    import numpy as np

    from . import states
    from .density import CorrelatorVector, extract_correlators
    from .errors import ConfigError

    desc = cfg.initial_state
    if "product" in desc:
        vecs = desc["product"]
        if len(vecs) != cfg.sites:
            raise ConfigError("product state needs one Bloch vector per site")
        try:
            rho = states.bloch_product(vecs)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        return extract_correlators(rho)
    if "named" in desc:
        named = desc["named"]
        name = named.get("name")
        phase = float(named.get("phase", 0.0))
        builders = {
            "cat": lambda: states.cat_state(cfg.sites, phase),
            "ghz": lambda: states.ghz_state(cfg.sites),
            "w": lambda: states.w_state(cfg.sites),
        }
        if name not in builders:
            raise ConfigError(f"unknown named state {name!r}")
        return extract_correlators(builders[name]())
    table = desc["correlators"]
    if not isinstance(table, dict):
        raise ConfigError("correlators state must map labels to values")
    values = np.zeros(4**cfg.sites)
    values[0] = 1.0
    for label, val in table.items():
        obs = parse_observable(label, cfg.sites)
        if not obs.is_single_string:
            raise ConfigError(
                f"initial correlators must use Cartesian labels, got {label!r}"
            )
        values[obs.code] = float(val)
    try:
        return CorrelatorVector(cfg.sites, values)
    except ValueError as exc:
        raise ConfigError(f"bad initial correlators: {exc}") from exc


def _write_csv(path: Path, header: list[str], rows) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(row))
    path.write_text("\n".join(lines) + "\n")


def _task_evolve(cfg, gen, x0, out_dir: Path) -> None:
    from .dynamics import evolve

    traj = evolve(
        gen, x0, cfg.time.t_max, cfg.time.dt, stride=cfg.time.stride, method=cfg.method
    )
    labels = cfg.observables or ["z0"]
    observables = [parse_observable(lb, cfg.sites) for lb in labels]
    header = ["t"]
    columns = []
    for lb, obs in zip(labels, observables):
        series = traj.expectation(obs)
        if all(w.imag == 0 for w, _ in obs.terms):
            header.append(lb)
            columns.append([_fmt(v) for v in series.real])
        else:
            header += [f"{lb}.re", f"{lb}.im"]
            columns.append([_fmt(v) for v in series.real])
            columns.append([_fmt(v) for v in series.imag])
    rows = (
        [_fmt(t)] + [col[k] for col in columns] for k, t in enumerate(traj.times)
    )
    _write_csv(out_dir / "trajectory.csv", header, rows)


def _task_spectrum(cfg, gen, out_dir: Path) -> None:
    from .dynamics import spectrum

    eps = cfg.spectrum_options.get("broadening")
    rep = spectrum(gen, broadening=None if eps is None else float(eps))
    rows = (
        [_fmt(w), str(int(m))] for w, m in zip(rep.frequencies, rep.multiplicities)
    )
    _write_csv(out_dir / "spectrum.csv", ["omega", "multiplicity"], rows)
    if eps is not None:
        # broadened pole density is only emitted when a width was requested
        rows = ([_fmt(w), _fmt(d)] for w, d in zip(rep.omega, rep.density))
        _write_csv(out_dir / "density.csv", ["omega", "density"], rows)


def _task_resolvent(cfg, gen, out_dir: Path) -> None:
    from .dynamics import resolvent
    from .errors import ConfigError

    zs = cfg.resolvent_options.get("z")
    if not zs:
        raise ConfigError("resolvent task needs resolvent.z = [[re, im], ...]")
    labels = cfg.observables
    if not labels:
        raise ConfigError("resolvent task needs observables to select entries")
    observables = [parse_observable(lb, cfg.sites) for lb in labels]
    if any(not o.is_single_string for o in observables):
        raise ConfigError("resolvent entries need Cartesian observable labels")
    codes = [o.code for o in observables]
    rows = []
    for pair in zs:
        z = complex(float(pair[0]), float(pair[1]))
        g = resolvent(gen, z)
        for lr, cr in zip(labels, codes):
            for lc, cc in zip(labels, codes):
                rows.append(
                    [_fmt(z.real), _fmt(z.imag), lr, lc,
                     _fmt(g[cr, cc].real), _fmt(g[cr, cc].imag)]
                )
    _write_csv(
        out_dir / "resolvent.csv",
        ["re_z", "im_z", "row", "col", "re_g", "im_g"],
        iter(rows),
    )


def _task_decompose(cfg, x0, out_dir: Path) -> None:
    import numpy as np

    from .combinatorics import bit_indices
    from .decomposition import (
        correlated_parts,
        cumulant_parts,
        cumulant_reconstruct,
        reconstruct,
        trace_defect,
    )
    from .density import from_correlators, partial_trace_array

    rho = from_correlators(x0)
    parts = correlated_parts(rho)
    cparts = cumulant_parts(rho)
    singles = {
        i: partial_trace_array(rho.data, cfg.sites, 1 << i) for i in range(cfg.sites)
    }
    lines = []
    for mask in sorted(cparts):
        sites = ",".join(str(s) for s in bit_indices(mask))
        cnorm = (
            _fmt(np.linalg.norm(parts[mask].matrix)) if mask in parts else _fmt(0.0)
        )
        lines.append(
            f"subset={sites} norm_correlated={cnorm} "
            f"norm_cumulant={_fmt(np.linalg.norm(cparts[mask].matrix))}"
        )
    defect = max((trace_defect(p) for p in parts.values()), default=0.0)
    recon = np.max(np.abs(reconstruct(cfg.sites, singles, parts).data - rho.data))
    crecon = np.max(np.abs(cumulant_reconstruct(cfg.sites, cparts).data - rho.data))
    lines.append(f"max_single_cell_trace={_fmt(defect)}")
    lines.append(f"reconstruction_error={_fmt(recon)}")
    lines.append(f"cumulant_reconstruction_error={_fmt(crecon)}")
    (out_dir / "decomposition.txt").write_text("\n".join(lines) + "\n")


def _task_validate(cfg, ham, gen, x0, out_dir: Path) -> None:
    import numpy as np

    from . import oracle
    from .density import from_correlators
    from .dynamics import evolve, spectrum
    from .hierarchy import antisymmetry_defect

    traj = evolve(
        gen, x0, cfg.time.t_max, cfg.time.dt, stride=cfg.time.stride, method="expm"
    )
    ref = oracle.correlator_trajectory(ham, from_correlators(x0), traj.times)
    deviation = float(np.max(np.abs(traj.values - ref.values)))
    norms = traj.sector_norms()
    rep = spectrum(gen)
    diffs = oracle.energy_differences(oracle.eigensystem(ham))
    expanded = np.repeat(rep.frequencies, rep.multiplicities)
    freq_err = (
        float(np.max(np.abs(expanded - diffs)))
        if expanded.size == diffs.size
        else float("inf")
    )
    lines = [
        f"sites={cfg.sites}",
        f"antisymmetry_defect={_fmt(antisymmetry_defect(gen))}",
        f"max_abs_deviation={_fmt(deviation)}",
        f"norm_drift={_fmt(float(np.max(np.abs(norms - norms[0]))))}",
        f"frequency_count={len(expanded)}",
        f"frequency_match_max_error={_fmt(freq_err)}",
        f"kernel_dim={rep.kernel_dim}",
        f"status={'ok' if deviation < 1e-6 else 'fail'}",
    ]
    (out_dir / "validate.txt").write_text("\n".join(lines) + "\n")


def run(config_path: str | Path, out_dir: str | Path = ".", tasks=None) -> int:
    """Execute a config; returns the exit status without raising."""
    from .errors import ConfigError, NumericError, SizeCapError

    try:
        cfg = load_config(config_path)
        if tasks is not None:
            cfg = RunConfig(**{**cfg.__dict__, "tasks": list(tasks)})
        if cfg.time is None and set(cfg.tasks) & {"evolve", "validate"}:
            raise ConfigError("missing config key 'time'")
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)

        for lb in cfg.observables:
            parse_observable(lb, cfg.sites)
        ham = _build_hamiltonian(cfg)
        x0 = _initial_correlators(cfg)

        gen = None
        if set(cfg.tasks) & {"evolve", "spectrum", "resolvent", "validate"}:
            from .hierarchy import build_generator

            gen = build_generator(ham)
        # deterministic task order regardless of config order
        for task in _TASKS:
            if task not in cfg.tasks:
                continue
            if task == "evolve":
                _task_evolve(cfg, gen, x0, out)
            elif task == "spectrum":
                _task_spectrum(cfg, gen, out)
            elif task == "resolvent":
                _task_resolvent(cfg, gen, out)
            elif task == "decompose":
                _task_decompose(cfg, x0, out)
            elif task == "validate":
                _task_validate(cfg, ham, gen, x0, out)
        return 0
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SizeCapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except NumericError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main(argv=None) -> int:
    _cap_threads()
    parser = argparse.ArgumentParser(
        prog="corrdyn",
        description="Correlator-hierarchy dynamics of coupled spin-1/2 systems",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("run", "execute every task listed in the config"),
        ("validate", "run only the oracle-vs-hierarchy validation task"),
        ("spectrum", "run only the spectrum task"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("config")
        p.add_argument("--out-dir", default=".")
    args = parser.parse_args(argv)
    forced = {"run": None, "validate": ["validate"], "spectrum": ["spectrum"]}
    return run(args.config, args.out_dir, tasks=forced[args.command])


if __name__ == "__main__":
    sys.exit(main())
