"""Command-line front end: levy-invert <task> --config <file> [--out <file>].

Parses a JSON run configuration, builds the requested transform grid, runs
the inversion task, and writes a CSV artifact plus a JSON diagnostics
sidecar. Tasks: density, mass, atoms, rhohat. Any config field can be
overridden on the command line with dotted flags, e.g. --numerics.zmax 40.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import invert
from .charfn import CharFn, charfn_from_spec
from .distlog import unwrap_log
from .errors import (CharFnError, ConfigError, InvariantViolation,
                     LevyInvertError, QuadratureError, ToleranceError,
                     UnwrapError)
from .rho import neg_psi2_grid, rho_hat, rho_hat_grid

__all__ = ["RunConfig", "load_config", "run", "main"]

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_UNWRAP = 3
EXIT_INVARIANT = 4
EXIT_TOLERANCE = 5

_TASKS = ("density", "mass", "atoms", "rhohat")
_SMALL_X = 0.1
# The unwrap refuses |phi| < 1e-12; stay a decade above it when auto-sizing.
_CLAMP_FLOOR = 1e-11


@dataclass(frozen=True)
class Numerics:
    zmax: float = 80.0
    zstep: float = 0.02
    lambda_nodes: int = 64
    z_list: tuple = (40.0, 60.0, 80.0)
    damping: Optional[invert.Damping] = None  # None means task default
    fd_step: float = 1e-3
    tol: Optional[float] = None
    unwrap_step: float = 1e-3

    def __post_init__(self):
        if not 0 < self.zmax <= 1e4:
            raise ConfigError("numerics.zmax must lie in (0, 1e4]")
        if not self.zstep >= 1e-5:
            raise ConfigError("numerics.zstep must be at least 1e-5")
        if self.lambda_nodes < 16:
            raise ConfigError("numerics.lambdaNodes must be at least 16")


@dataclass(frozen=True)
class RunConfig:
    distribution: dict
    task: str
    numerics: Numerics = field(default_factory=Numerics)
    xgrid: Optional[tuple] = None
    interval: Optional[tuple] = None
    kmax: Optional[int] = None
    route: str = "auto"
    output: Optional[str] = None
    allow_small_x: bool = False


def _parse_damping(doc) -> invert.Damping:
    if isinstance(doc, str):
        if doc == "gaussian":
            return invert.Damping.gaussian()
        return invert.Damping(doc)
    if isinstance(doc, dict):
        kind = doc.get("kind")
        if kind == "gaussian":
            return invert.Damping.gaussian(float(doc.get("width", 0.5)))
        if kind in ("none", "fejer"):
            return invert.Damping(kind)
    raise ConfigError(f"bad damping spec {doc!r}")


def _parse_xgrid(doc) -> tuple:
    if isinstance(doc, (list, tuple)):
        xs = tuple(float(x) for x in doc)
    elif isinstance(doc, dict):
        try:
            start, stop = float(doc["start"]), float(doc["stop"])
            step = float(doc["step"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"bad xgrid spec: {exc}")
        if step <= 0 or stop < start:
            raise ConfigError("xgrid needs step > 0 and stop >= start")
        n = int(math.floor((stop - start) / step + 1e-9)) + 1
        xs = tuple(start + i * step for i in range(n))
    else:
        raise ConfigError("xgrid must be a list or a {start, stop, step} object")
    if not xs:
        raise ConfigError("xgrid is empty")
    return xs


def load_config(doc: dict) -> RunConfig:
    """Validate a JSON run configuration document."""
    if not isinstance(doc, dict):
        raise ConfigError("config must be a JSON object")
    try:
        task = doc["task"]
        dist = doc["distribution"]
    except KeyError as exc:
        raise ConfigError(f"config missing required field {exc}")
    if task not in _TASKS:
        raise ConfigError(f"unknown task {task!r}; expected one of {_TASKS}")
    if not isinstance(dist, dict):
        raise ConfigError("distribution must be an object")

    ndoc = doc.get("numerics", {})
    if not isinstance(ndoc, dict):
        raise ConfigError("numerics must be an object")
    known = {"zmax", "zstep", "lambdaNodes", "Zlist", "damping", "fdStep", "tol"}
    unknown = set(ndoc) - known
    if unknown:
        raise ConfigError(f"unknown numerics fields: {sorted(unknown)}")
    kwargs = {}
    if "zmax" in ndoc:
        kwargs["zmax"] = float(ndoc["zmax"])
    if "zstep" in ndoc:
        kwargs["zstep"] = float(ndoc["zstep"])
    if "lambdaNodes" in ndoc:
        kwargs["lambda_nodes"] = int(ndoc["lambdaNodes"])
    if "Zlist" in ndoc:
        zl = tuple(float(z) for z in ndoc["Zlist"])
        if not zl or any(b <= a for a, b in zip(zl, zl[1:])):
            raise ConfigError("Zlist must be strictly increasing and nonempty")
        kwargs["z_list"] = zl
    if "damping" in ndoc:
        kwargs["damping"] = _parse_damping(ndoc["damping"])
    if "fdStep" in ndoc:
        kwargs["fd_step"] = float(ndoc["fdStep"])
    if "tol" in ndoc and ndoc["tol"] is not None:
        kwargs["tol"] = float(ndoc["tol"])
    numerics = Numerics(**kwargs)

    route = doc.get("route", "auto")
    if route not in ("auto", "eq1", "eq2", "eq3", "eq4"):
        raise ConfigError(f"unknown route {route!r}")

    xgrid = _parse_xgrid(doc["xgrid"]) if "xgrid" in doc else None
    interval = None
    if "interval" in doc:
        iv = doc["interval"]
        if not (isinstance(iv, (list, tuple)) and len(iv) == 2):
            raise ConfigError("interval must be a [a, b] pair")
        interval = (float(iv[0]), float(iv[1]))
    kmax = int(doc["kmax"]) if "kmax" in doc else None

    if task == "density" and xgrid is None:
        raise ConfigError("density task needs an xgrid")
    if task == "mass" and interval is None:
        raise ConfigError("mass task needs an interval")
    if task == "atoms" and kmax is None:
        raise ConfigError("atoms task needs kmax")

    return RunConfig(distribution=dist, task=task, numerics=numerics,
                     xgrid=xgrid, interval=interval, kmax=kmax, route=route,
                     output=doc.get("output"),
                     allow_small_x=bool(doc.get("allow_small_x", False)))


def _resolve_route(config: RunConfig, phi: CharFn) -> str:
    if config.task == "rhohat":
        return "rhohat"
    route = config.route
    if config.task == "atoms":
        if route not in ("auto", "eq1"):
            raise ConfigError("atoms task supports only the eq1 route")
        return "eq1"
    if config.task == "mass":
        if route in ("eq3", "eq4"):
            raise ConfigError("mass task needs an eq1/eq2 route")
        return "eq1" if route == "auto" else route
    # density
    if route in ("eq1", "eq2"):
        raise ConfigError("density task needs an eq3/eq4 route")
    if route == "auto":
        if phi.psi2 is not None and phi.x2_integrable:
            return "eq4"
        return "eq3"
    return route


def _clamp_zmax(phi: CharFn, requested: float) -> float:
    """Largest usable grid extent given the decay of |phi|.

    The unwrap hard-fails where |phi| < 1e-12; scan the requested range and
    back off so the unwrap (which reaches zmax + 1) stays a decade above
    that floor.
    """
    need = requested + 1.0
    zs = np.linspace(0.0, need, 4097)
    mags = np.abs(np.asarray(phi.evaluate(zs), dtype=complex))
    bad = np.nonzero(mags < _CLAMP_FLOOR)[0]
    if not bad.size:
        return requested
    usable = zs[bad[0] - 1] if bad[0] > 0 else 0.0
    return max(usable - 1.0, 0.0)


def _effective_levels(z_list, zmax_grid: float) -> tuple:
    kept = tuple(z for z in z_list if z <= zmax_grid + 1e-9)
    if len(kept) >= 2:
        return kept
    # Requested levels exceed what |phi| decay allows; rescale inside range.
    return (0.5 * zmax_grid, 0.75 * zmax_grid, zmax_grid)


def _reg_for(config: RunConfig, z_list, default_damping: invert.Damping):
    damping = config.numerics.damping or default_damping
    return invert.RegSpec(z_list=z_list, damping=damping, tol=None)


def _write_atomic(path: str, text: str) -> None:
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def run(config: RunConfig) -> int:
    """Execute one task; writes the CSV and a .diag.json sidecar.

    Returns EXIT_OK, or EXIT_TOLERANCE when a requested tolerance was
    missed; in the latter case the outputs are still written with err
    columns reflecting reality.
    """
    num = config.numerics
    phi = charfn_from_spec(config.distribution)
    route = _resolve_route(config, phi)

    zmax_grid = _clamp_zmax(phi, num.zmax)
    if zmax_grid < max(1.0, 2 * num.zstep):
        raise UnwrapError(
            "characteristic function decays too fast for any usable grid")
    zmax_grid = math.floor(zmax_grid / num.zstep) * num.zstep
    u = unwrap_log(phi, zmax_grid + 1.0, step=num.unwrap_step)

    out_path = config.output or f"{config.task}.csv"
    z_list = _effective_levels(num.z_list, zmax_grid)

    if route in ("eq2", "eq4"):
        grid = neg_psi2_grid(u, phi.sigma2, zmax_grid, num.zstep,
                             fd_step=num.fd_step)
    else:
        grid = rho_hat_grid(u, phi.sigma2, zmax_grid, num.zstep,
                            nodes=num.lambda_nodes)
    rho_zero = rho_hat(u, phi.sigma2, 0.0, nodes=num.lambda_nodes).real

    err_estimates = []
    if config.task == "rhohat":
        csv_text = grid.to_csv_text()
        err_estimates = [float(e) for e in grid.err_est]
    elif config.task == "density":
        xs = config.xgrid
        if route == "eq3" and not config.allow_small_x:
            kept = tuple(x for x in xs if abs(x) >= _SMALL_X)
            if not kept:
                raise ConfigError(
                    "all xgrid points fall inside |x| < 0.1, which the eq3 "
                    "route excludes by default; set allow_small_x to override")
            xs = kept
        reg = _reg_for(config, z_list, invert.Damping.none())
        est = invert.density_grid(grid, xs, route, reg)
        csv_text = est.to_csv_text()
        err_estimates = [float(e) for e in est.err_est]
    elif config.task == "mass":
        reg = _reg_for(config, z_list, invert.Damping.gaussian(0.5))
        iv = invert.Interval(*config.interval)
        res = (invert.invert_mass_eq1(grid, iv, reg) if route == "eq1"
               else invert.invert_mass_eq2(grid, iv, reg))
        csv_text = invert.masses_to_csv_text([res])
        err_estimates = [float(res.err_est)]
    else:  # atoms
        reg = _reg_for(config, z_list, invert.Damping.gaussian(0.5))
        atoms = invert.lattice_atoms(grid, config.kmax, reg)
        lines = ["a,b,mass,err,route"]
        for a in atoms:
            lines.append(f"{float(a.k - 0.5)!r},{float(a.k + 0.5)!r},"
                         f"{float(a.mass)!r},{float(a.err_est)!r},eq1")
        csv_text = "\n".join(lines) + "\n"
        err_estimates = [float(a.err_est) for a in atoms]

    diag = {
        "rho_hat_zero": float(rho_zero),
        "pd_violations": grid.pd_violations(),
        "err_estimates": err_estimates,
        "route": route,
    }
    _write_atomic(out_path, csv_text)
    _write_atomic(out_path + ".diag.json",
                  json.dumps(diag, sort_keys=True, indent=2) + "\n")

    if num.tol is not None and any(e > num.tol for e in err_estimates):
        return EXIT_TOLERANCE
    return EXIT_OK


def _apply_override(doc: dict, dotted: str, raw: str) -> None:
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    keys = dotted.split(".")
    node = doc
    for k in keys[:-1]:
        node = node.setdefault(k, {})
        if not isinstance(node, dict):
            raise ConfigError(f"cannot override through non-object field {k!r}")
    node[keys[-1]] = value


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="levy-invert",
        description="Recover the Levy measure of an infinitely divisible "
                    "distribution from its characteristic function.")
    parser.add_argument("task", choices=_TASKS)
    parser.add_argument("--config", required=True,
                        help="path to the JSON run configuration")
    parser.add_argument("--out", help="output CSV path (overrides config)")
    args, extra = parser.parse_known_args(argv)

    try:
        with open(args.config, encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        if not isinstance(doc, dict):
            raise ConfigError("config must be a JSON object")
        doc["task"] = args.task
        if args.out:
            doc["output"] = args.out
        i = 0
        while i < len(extra):
            flag = extra[i]
            if not flag.startswith("--") or i + 1 >= len(extra):
                raise ConfigError(f"bad override {flag!r}; expected --path value")
            _apply_override(doc, flag[2:], extra[i + 1])
            i += 2
        config = load_config(doc)
    except (ConfigError, CharFnError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        status = run(config)
    except (ConfigError, CharFnError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except UnwrapError as exc:
        print(f"error: unwrap failed: {exc}", file=sys.stderr)
        return EXIT_UNWRAP
    except InvariantViolation as exc:
        print(f"error: invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except (ToleranceError, QuadratureError) as exc:
        print(f"error: tolerance not achieved: {exc}", file=sys.stderr)
        return EXIT_TOLERANCE
    except LevyInvertError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    out_path = config.output or f"{config.task}.csv"
    if status == EXIT_TOLERANCE:
        print(f"wrote {out_path} (requested tolerance NOT achieved; see err "
              "columns)", file=sys.stderr)
    else:
        print(f"wrote {out_path} and {out_path}.diag.json")
    return status


if __name__ == "__main__":
    sys.exit(main())
