"""``pudq`` command line: spectrum | verify | grid | transform.

Configuration is a JSON file (schema below); ``--params``, ``--output`` and
``--format`` override it.  Exit codes: 0 success, 1 failed check or
computation error, 2 usage/config error.  Output goes to ``--output`` via an
atomic write, or to stdout; diagnostics go to stderr.

Config schema (every key optional)::

    {
      "params": "4,1,1" | {"omega1": "4", "omega2": "1", "hbar": "1"},
      "format": "csv" | "json",
      "output": "path" | null,
      "spectrum": {"n_max": 3, "m_max": 3, "equal_frequency": false,
                   "k_values": ["0", "1/2", "1"]},
      "verify": {"checks": null | ["star_genvalue", ...], "n_max": 2,
                 "grid_points": 11, "wrong_energy": false},
      "grid": {"object": "pu-wigner" | "osc-wigner" | "pu-psi" | "osc-psi",
               "state": [0, 0],
               "axes": {"q": [-1, 1, 3], "p_q": 0, ...}},
      "transform": {"kind": "diagonalize" | "equal-frequency" | "identity",
                    "variant": "corrected" | "printed" | "complex" | "real-plus"}
    }
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict, dataclass, field

import numpy as np

from . import __version__, canon
from .errors import ConfigError, PUDQError
from .gridio import Table, atomic_write, render
from .pumodel import PUParams, hamiltonian
from .scalars import rational

__all__ = ["RunConfig", "load_config", "main"]

VERBS = ("spectrum", "verify", "grid", "transform")
OBJECTS = {
    "pu-wigner": ("q", "p_q", "x", "p_x"),
    "osc-wigner": ("X1", "P1", "X2", "P2"),
    "pu-psi": ("q", "x"),
    "osc-psi": ("X1", "X2"),
}
TRANSFORMS = {
    "diagonalize": ("corrected", "printed"),
    "equal-frequency": ("complex", "real-plus", "printed"),
    "identity": ("identity",),
}


@dataclass
class RunConfig:
    params: PUParams = field(default_factory=lambda: PUParams(4, 1, 1))
    format: str = "json"
    output: str | None = None
    spectrum: dict = field(default_factory=lambda: {"n_max": 3, "m_max": 3, "equal_frequency": False, "k_values": ["0", "1/2", "1"]})
    verify: dict = field(default_factory=lambda: {"checks": None, "n_max": 2, "grid_points": 11, "wrong_energy": False})
    grid: dict = field(default_factory=lambda: {"object": "pu-wigner", "state": [0, 0], "axes": {}})
    transform: dict = field(default_factory=lambda: {"kind": "diagonalize", "variant": None})

    def to_json(self) -> dict:
        d = asdict(self)
        p = self.params
        d["params"] = {"omega1": str(p.omega1), "omega2": str(p.omega2), "hbar": str(p.hbar)}
        return d


# ---------------------------------------------------------------------------
# validation


def _params(v, field_name="params") -> PUParams:
    try:
        if isinstance(v, str):
            return PUParams.parse(v)
        if isinstance(v, dict):
            extra = set(v) - {"omega1", "omega2", "hbar"}
            if extra:
                raise ConfigError(field_name, f"unknown keys {sorted(extra)}")
            return PUParams(str(v["omega1"]), str(v["omega2"]), str(v.get("hbar", 1)))
    except ConfigError:
        raise
    except (KeyError, ValueError, TypeError, ZeroDivisionError) as exc:
        raise ConfigError(field_name, str(exc)) from exc
    raise ConfigError(field_name, "expected 'omega1,omega2[,hbar]' or an object")


def _int(section: dict, key: str, name: str, lo: int = 0) -> int:
    v = section.get(key)
    if isinstance(v, bool) or not isinstance(v, int) or v < lo:
        raise ConfigError(f"{name}.{key}", f"expected an integer >= {lo}, got {v!r}")
    return v


def _bool(section: dict, key: str, name: str) -> bool:
    v = section.get(key)
    if not isinstance(v, bool):
        raise ConfigError(f"{name}.{key}", f"expected true/false, got {v!r}")
    return v


def _merge(default: dict, given, name: str) -> dict:
    if given is None:
        return dict(default)
    if not isinstance(given, dict):
        raise ConfigError(name, "expected an object")
    extra = set(given) - set(default)
    if extra:
        raise ConfigError(f"{name}.{sorted(extra)[0]}", "unknown key")
    out = dict(default)
    out.update(given)
    return out


def _axis(spec, name: str):
    if isinstance(spec, (int, float)) and not isinstance(spec, bool):
        return np.array([float(spec)])
    if isinstance(spec, list) and len(spec) == 3 and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in spec):
        lo, hi, n = spec
        if n != int(n) or n < 1:
            raise ConfigError(name, f"point count must be a positive integer, got {n!r}")
        if n > 1 and not hi > lo:
            raise ConfigError(name, "need lo < hi")
        return np.linspace(float(lo), float(hi), int(n))
    raise ConfigError(name, f"expected a number or [lo, hi, count], got {spec!r}")


def validate(raw: dict) -> RunConfig:
    """Parse a raw JSON object into a :class:`RunConfig` (raises :class:`ConfigError`)."""
    if not isinstance(raw, dict):
        raise ConfigError("<root>", "config must be a JSON object")
    known = {"params", "format", "output", "spectrum", "verify", "grid", "transform"}
    extra = set(raw) - known
    if extra:
        raise ConfigError(sorted(extra)[0], "unknown top-level key")
    cfg = RunConfig()
    if "params" in raw:
        cfg.params = _params(raw["params"])
    fmt = raw.get("format", cfg.format)
    if fmt not in ("csv", "json"):
        raise ConfigError("format", f"expected csv or json, got {fmt!r}")
    cfg.format = fmt
    out = raw.get("output")
    if out is not None and not isinstance(out, str):
        raise ConfigError("output", "expected a path string or null")
    cfg.output = out

    s = _merge(cfg.spectrum, raw.get("spectrum"), "spectrum")
    _int(s, "n_max", "spectrum")
    _int(s, "m_max", "spectrum")
    _bool(s, "equal_frequency", "spectrum")
    if not isinstance(s["k_values"], list):
        raise ConfigError("spectrum.k_values", "expected a list")
    for i, k in enumerate(s["k_values"]):
        try:
            rational(k if isinstance(k, (int, str)) else str(k))
        except (ValueError, TypeError) as exc:
            raise ConfigError(f"spectrum.k_values[{i}]", str(exc)) from exc
    cfg.spectrum = s

    v = _merge(cfg.verify, raw.get("verify"), "verify")
    _int(v, "n_max", "verify")
    _int(v, "grid_points", "verify", lo=3)
    _bool(v, "wrong_energy", "verify")
    if v["checks"] is not None:
        from .verify import CHECKS

        if not isinstance(v["checks"], list) or any(c not in CHECKS for c in v["checks"]):
            raise ConfigError("verify.checks", f"expected null or a list drawn from {sorted(CHECKS)}")
    cfg.verify = v

    g = _merge(cfg.grid, raw.get("grid"), "grid")
    if g["object"] not in OBJECTS:
        raise ConfigError("grid.object", f"expected one of {sorted(OBJECTS)}, got {g['object']!r}")
    st = g["state"]
    if not (isinstance(st, list) and len(st) == 2 and all(isinstance(i, int) and not isinstance(i, bool) and i >= 0 for i in st)):
        raise ConfigError("grid.state", f"expected [n, m] with non-negative integers, got {st!r}")
    if not isinstance(g["axes"], dict):
        raise ConfigError("grid.axes", "expected an object")
    names = OBJECTS[g["object"]]
    for k, spec in g["axes"].items():
        if k not in names:
            raise ConfigError(f"grid.axes.{k}", f"not a variable of {g['object']} {names}")
        _axis(spec, f"grid.axes.{k}")
    cfg.grid = g

    t = _merge(cfg.transform, raw.get("transform"), "transform")
    if t["kind"] not in TRANSFORMS:
        raise ConfigError("transform.kind", f"expected one of {sorted(TRANSFORMS)}, got {t['kind']!r}")
    if t["variant"] is not None and t["variant"] not in TRANSFORMS[t["kind"]]:
        raise ConfigError("transform.variant", f"expected one of {TRANSFORMS[t['kind']]}, got {t['variant']!r}")
    cfg.transform = t
    return cfg


def _read_json(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigError("--config", f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError("--config", f"invalid JSON at line {exc.lineno}: {exc.msg}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("<root>", "config must be a JSON object")
    return raw


def load_config(path: str | None) -> RunConfig:
    return validate(_read_json(path) if path else {})


# ---------------------------------------------------------------------------
# commands


def cmd_spectrum(cfg: RunConfig):
    """Exact energy table E_nm (or E_mk at equal frequency)."""
    from .wigner import spectrum

    s, p = cfg.spectrum, cfg.params
    if s["equal_frequency"]:
        if not p.equal:
            raise ConfigError("spectrum.equal_frequency", "needs omega1 == omega2")
        rows = []
        for m in range(s["m_max"] + 1):
            for k in s["k_values"]:
                k = rational(str(k))
                e = p.omega1 * p.hbar * (m - p.omega1 * p.hbar * k * k / 4)
                rows.append([m, k, e, float(e)])
        return Table(["m", "k", "E", "E_float"], rows, {"mode": "equal-frequency", **cfg.to_json()["params"]}), 0
    table = spectrum(p, s["n_max"], s["m_max"])
    rows = [[e.n, e.m, e.energy, float(e.energy)] for e in table]
    return Table(["n", "m", "E", "E_float"], rows, {"mode": "discrete", **cfg.to_json()["params"]}), 0


def cmd_verify(cfg: RunConfig):
    """Run the verification suite and emit a JSON report."""
    from .verify import VerifyOptions, run_checks

    v = cfg.verify
    opts = VerifyOptions(n_max=v["n_max"], grid_points=v["grid_points"], wrong_energy=v["wrong_energy"])
    checks, report = run_checks(cfg.params, v["checks"], opts)
    for c in checks:
        status = "skip" if c.skipped else ("pass" if c.passed else "FAIL")
        print(f"[verify] {c.name:<24} {status:<4} residual={c.residual:.3e} ({c.seconds:.2f}s)", file=sys.stderr)
    if report["failed"]:
        print(f"[verify] failing checks: {', '.join(report['failed'])}", file=sys.stderr)
    if cfg.format == "csv":
        rows = [[c["name"], c["status"], c["exact"], c["residual"]] for c in report["checks"]]
        return Table(["check", "status", "exact", "residual"], rows, {}), 0 if report["passed"] else 1
    return report, 0 if report["passed"] else 1


def _grid_values(cfg: RunConfig):
    from .wavefn import osc_wavefunction, pu_wavefunction_closed
    from .wigner import WignerState, osc_wigner, pu_wigner

    g, p = cfg.grid, cfg.params
    obj, (n, m) = g["object"], g["state"]
    names = OBJECTS[obj]
    axes = [_axis(g["axes"].get(v, 0), f"grid.axes.{v}") for v in names]
    mesh = [a.ravel() for a in np.meshgrid(*axes, indexing="ij")]
    if obj == "pu-wigner":
        f = pu_wigner(WignerState(n, m, p)).numeric(names)
    elif obj == "osc-wigner":
        f = osc_wigner(WignerState(n, m, p, "oscillator")).numeric(names)
    elif obj == "pu-psi":
        f = pu_wavefunction_closed(n, m, p)
    else:
        f = osc_wavefunction(n, m, p)
    return names, mesh, np.asarray(f(*mesh))


def cmd_grid(cfg: RunConfig):
    """Sample a wavefunction or Wigner function on a grid."""
    names, mesh, vals = _grid_values(cfg)
    meta = {"object": cfg.grid["object"], "state": cfg.grid["state"], **cfg.to_json()["params"]}
    return Table.from_grid(names, mesh, vals, meta), 0


def cmd_transform(cfg: RunConfig):
    """Canonical map, its generator and the Hamiltonian pullback."""
    t, p = cfg.transform, cfg.params
    kind = t["kind"]
    if kind == "diagonalize":
        variant = t["variant"] or "corrected"
        gf = canon.generating_function(p, variant)
        m = gf.to_map(p)
        source, target = hamiltonian(p), canon.oscillator_hamiltonian(p)
    elif kind == "equal-frequency":
        if not p.equal:
            raise ConfigError("transform.kind", "equal-frequency needs omega1 == omega2")
        variant = t["variant"] or "complex"
        gf, m = canon.equal_freq_map(p.omega1, p.hbar, variant)
        source = hamiltonian(p)
        target = canon.equal_freq_hamiltonian(p.omega1, +1 if variant == "real-plus" else -1)
    else:
        variant, gf = "identity", None
        from .exactlin import identity

        m = canon.LinearCanonicalMap(identity(4), canon.PU_ORDER, canon.PU_ORDER, p)
        source = target = hamiltonian(p)
    pb = canon.pullback(source, m)
    doc = {
        "kind": kind,
        "variant": variant,
        "params": cfg.to_json()["params"],
        "map": m.to_json(),
        "generator": gf.to_json() if gf is not None else None,
        "hamiltonian": str(source),
        "pullback": str(pb),
        "target": str(target),
        "pullback_matches_target": (pb - target).is_zero(),
        "symplectic": m.is_symplectic(),
    }
    return doc, 0


COMMANDS = {"spectrum": cmd_spectrum, "verify": cmd_verify, "grid": cmd_grid, "transform": cmd_transform}


# ---------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pudq", description="Phase-space quantization of the Pais-Uhlenbeck oscillator.")
    ap.add_argument("--version", action="version", version=f"pudq {__version__}")
    sub = ap.add_subparsers(dest="verb", required=True)
    for verb in VERBS:
        sp = sub.add_parser(verb, help=(COMMANDS[verb].__doc__ or verb).strip().splitlines()[0] if COMMANDS[verb].__doc__ else None)
        sp.add_argument("--config", help="JSON config file")
        sp.add_argument("--output", "-o", help="output path (default stdout)")
        sp.add_argument("--format", "-f", choices=("csv", "json"), help="output format")
        sp.add_argument("--params", help="omega1,omega2[,hbar] as exact rationals, e.g. 5/2,3/2,1")
        if verb == "spectrum":
            sp.add_argument("--n-max", type=int)
            sp.add_argument("--m-max", type=int)
            sp.add_argument("--equal-frequency", action="store_true")
        if verb == "grid":
            sp.add_argument("--object", choices=sorted(OBJECTS))
            sp.add_argument("--state", help="n,m")
        if verb == "transform":
            sp.add_argument("--kind", choices=sorted(TRANSFORMS))
            sp.add_argument("--variant")
        if verb == "verify":
            sp.add_argument("--checks", help="comma-separated subset")
            sp.add_argument("--wrong-energy", action="store_true", help="negative control: shift E by +1")
    return ap


def _overrides(args) -> dict:
    """Fold command-line flags into a raw config overlay."""
    o: dict = {}
    if args.params is not None:
        o["params"] = args.params
    if args.format is not None:
        o["format"] = args.format
    if args.output is not None:
        o["output"] = args.output
    sec: dict = {}
    if args.verb == "spectrum":
        for k in ("n_max", "m_max"):
            if getattr(args, k) is not None:
                sec[k] = getattr(args, k)
        if args.equal_frequency:
            sec["equal_frequency"] = True
    elif args.verb == "grid":
        if args.object:
            sec["object"] = args.object
        if args.state:
            try:
                sec["state"] = [int(v) for v in args.state.split(",")]
            except ValueError as exc:
                raise ConfigError("--state", "expected n,m") from exc
    elif args.verb == "transform":
        if args.kind:
            sec["kind"] = args.kind
        if args.variant:
            sec["variant"] = args.variant
    elif args.verb == "verify":
        if args.checks:
            sec["checks"] = [c for c in args.checks.split(",") if c]
        if args.wrong_energy:
            sec["wrong_energy"] = True
    if sec:
        o[args.verb] = sec
    return o


def _load(args) -> RunConfig:
    raw = _read_json(args.config) if args.config else {}
    for k, v in _overrides(args).items():
        if isinstance(v, dict) and isinstance(raw.get(k), dict):
            raw[k] = {**raw[k], **v}
        else:
            raw[k] = v
    return validate(raw)


def _describe(exc: PUDQError) -> str:
    extra = {k: getattr(exc, k) for k in ("quantity", "growth", "estimate") if getattr(exc, k, None)}
    tail = f" {json.dumps(extra, default=str)}" if extra else ""
    return f"error: {type(exc).__name__}: {exc}{tail}"


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:  # argparse usage errors exit with 2 already
        return int(exc.code or 0)
    try:
        cfg = _load(args)
    except ConfigError as exc:
        print(f"config error: {exc.field}: {exc.message}", file=sys.stderr)
        return 2
    try:
        result, code = COMMANDS[args.verb](cfg)
        text = render(result, cfg.format)
    except ConfigError as exc:
        print(f"config error: {exc.field}: {exc.message}", file=sys.stderr)
        return 2
    except PUDQError as exc:
        print(_describe(exc), file=sys.stderr)
        return 1
    if cfg.output:
        atomic_write(cfg.output, text)
    else:
        try:
            sys.stdout.write(text)
            sys.stdout.flush()
        except BrokenPipeError:
            # reader went away (e.g. piped into head); silence the flush at exit
            os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
