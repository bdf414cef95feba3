"""Command-line batch driver.

Every subcommand builds a run configuration, validates it against a JSON
schema, computes, and writes its artifacts (``.psf`` fields, JSON reports,
CSV profiles, PPM heatmaps) into ``--out``.  Each JSON report carries a
metadata block with the package version, a hash of the configuration and the
grid.

Exit codes: 0 success, 1 failed self-check, 2 bad usage or configuration,
3 numerical guard, 4 I/O error.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import sys
from pathlib import Path

import jsonschema
import numpy as np

from . import __version__
from .errors import NumericalGuardError, PhaseSpaceError
from .grid import Axis, PhaseSpaceField, SampledSignal, TensorField
from .psf import PsfFormatError, read_psf, write_psf
from .signals import FAMILIES, make_signal

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_GUARD, EXIT_IO = 0, 1, 2, 3, 4

SIGNAL_SCHEMA = {
    "type": "object",
    "properties": {
        "family": {"enum": sorted(FAMILIES)},
        "params": {"type": "object"},
        "input": {"type": ["string", "null"]},
    },
    "required": ["family", "params"],
    "additionalProperties": False,
}

CONFIG_SCHEMA = {
    "type": "object",
    "properties": {
        "command": {"type": "string"},
        "grid": {
            "type": "object",
            "properties": {
                "n": {"type": "integer", "minimum": 8},
                "extent": {"type": ["number", "null"], "exclusiveMinimum": 0},
            },
            "required": ["n"],
            "additionalProperties": False,
        },
        "signal": SIGNAL_SCHEMA,
        "window": SIGNAL_SCHEMA,
        "params": {"type": "object"},
        "seed": {"type": "integer", "minimum": 0},
        "out": {"type": "string"},
        "ppm": {"type": "boolean"},
    },
    "required": ["command", "grid", "signal", "window", "params", "seed", "out"],
    "additionalProperties": False,
}

PARAM_SCHEMAS = {
    "wigner": {"tau": {"type": "number", "minimum": 0, "maximum": 1}},
    "awigner": {"matrix": {"type": "array", "items": {"type": "array", "items": {"type": "number"}}}},
    "cohen": {"tau": {"type": ["number", "null"], "minimum": 0, "maximum": 1},
              "B": {"type": ["array", "null"]}},
    "quantize": {"tau": {"type": "number", "minimum": 0, "maximum": 1}},
    "transport": {"tau1": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
                  "tau2": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1}},
    "kernel": {"N": {"type": "integer", "minimum": 0}},
    "modnorm": {"p": {"type": "number", "minimum": 1}, "q": {"type": "number", "minimum": 1},
                "s": {"type": "number"}, "tau": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1}},
    "wavefront": {"rep": {"enum": ["wigner", "gabor"]}, "tau": {"type": "number", "minimum": 0, "maximum": 1}},
    "free-particle": {"t": {"type": "number"}, "tau": {"type": "number", "exclusiveMinimum": 0,
                                                         "exclusiveMaximum": 1}},
}


class UsageError(Exception):
    pass


def _parse_value(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def _params(items) -> dict:
    out = {}
    for item in items or []:
        if "=" not in item:
            raise UsageError(f"expected key=value, got {item!r}")
        k, v = item.split("=", 1)
        out[k] = _parse_value(v)
    return out


def _load_json_arg(text: str):
    """Inline JSON or a path to a JSON file."""
    p = Path(text)
    if p.exists():
        try:
            return json.loads(p.read_text())
        except json.JSONDecodeError as exc:
            raise UsageError(f"{text}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"not valid JSON: {text!r}") from exc


def build_config(args) -> dict:
    params = {}
    for key in ("tau", "tau1", "tau2", "N", "p", "q", "s", "rep", "t"):
        if getattr(args, key, None) is not None:
            params[key] = getattr(args, key)
    if getattr(args, "matrix", None) is not None:
        params["matrix"] = _load_json_arg(args.matrix)
    if getattr(args, "B", None) is not None:
        params["B"] = _load_json_arg(args.B)
    if getattr(args, "weyl", False):
        params["tau"] = 0.5
    command = args.command if args.command != "demo" else args.demo
    cfg = {
        "command": command,
        "grid": {"n": args.n, "extent": args.extent},
        "signal": {"family": args.signal, "params": _params(args.param), "input": args.input},
        "window": {"family": args.window, "params": _params(args.window_param), "input": None},
        "params": params,
        "seed": args.seed,
        "out": str(args.out),
        "ppm": bool(args.ppm),
    }
    if args.config:
        cfg = _merge(cfg, _load_json_arg(args.config))
    return cfg


def _merge(base: dict, extra: dict) -> dict:
    out = dict(base)
    for k, v in extra.items():
        if isinstance(v, dict) and isinstance(out.get(k), dict):
            out[k] = _merge(out[k], v)
        else:
            out[k] = v
    return out


def validate_config(cfg: dict) -> None:
    jsonschema.validate(cfg, CONFIG_SCHEMA)
    schema = PARAM_SCHEMAS.get(cfg["command"])
    if schema:
        jsonschema.validate(cfg["params"], {"type": "object", "properties": schema})


def config_hash(cfg: dict) -> str:
    return hashlib.sha256(json.dumps(cfg, sort_keys=True).encode()).hexdigest()[:16]


# ---------------------------------------------------------------------------
# output helpers


class Run:
    def __init__(self, cfg: dict):
        self.cfg = cfg
        self.out = Path(cfg["out"])
        self.hash = config_hash(cfg)
        self.rng = np.random.default_rng(cfg["seed"])
        self.written = []
        try:
            self.out.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise OSError(f"cannot create output directory {self.out}: {exc}") from exc

    @property
    def axis(self) -> Axis:
        g = self.cfg["grid"]
        ext = g["extent"] if g["extent"] is not None else 0.5 * np.sqrt(g["n"])
        return Axis(g["n"], ext)

    def signal(self, key: str = "signal") -> SampledSignal:
        spec = self.cfg[key]
        if spec.get("input"):
            obj, _ = read_psf(spec["input"])
            if not isinstance(obj, SampledSignal):
                raise PsfFormatError(f"{spec['input']} does not hold a signal")
            return obj
        return make_signal(self.axis, spec["family"], **spec["params"])

    def meta(self, axes) -> dict:
        return {"version": __version__, "config_hash": self.hash, "config": self.cfg,
                "grid": [a.to_dict() for a in axes]}

    def _path(self, name: str) -> Path:
        p = self.out / name
        self.written.append(str(p))
        return p

    def field(self, name: str, F, heatmap: bool = True):
        axes = [F.axis] if isinstance(F, SampledSignal) else list(F.axes)
        write_psf(self._path(name + ".psf"), F, self.meta(axes))
        if heatmap and self.cfg["ppm"] and isinstance(F, PhaseSpaceField):
            write_ppm(self._path(name + "_abs.ppm"), np.abs(F.values), "linear")
            write_ppm(self._path(name + "_log.ppm"), np.abs(F.values), "log")
            write_ppm(self._path(name + "_arg.ppm"), np.angle(F.values), "phase")

    def report(self, name: str, data: dict, axes):
        body = {"meta": self.meta(axes), **data}
        self._path(name + ".json").write_text(json.dumps(body, indent=2, sort_keys=True, default=_jsonify))

    def text(self, name: str, text: str):
        self._path(name).write_text(text)


def _jsonify(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _colormap(u: np.ndarray, mode: str) -> np.ndarray:
    """Map values in [0, 1] to RGB bytes (dark blue to yellow; hue wheel for phase)."""
    if mode == "phase":
        h = u * 6.0
        rgb = np.stack([np.clip(np.abs(h - 3) - 1, 0, 1),
                        np.clip(2 - np.abs(h - 2), 0, 1),
                        np.clip(2 - np.abs(h - 4), 0, 1)], axis=-1)
    else:
        rgb = np.stack([np.clip(1.5 * u - 0.2, 0, 1), np.clip(u ** 0.8, 0, 1),
                        np.clip(0.6 - 0.6 * u + 0.3 * np.sin(np.pi * u), 0, 1)], axis=-1)
    return np.round(255 * rgb).astype(np.uint8)


def ppm_bytes(values: np.ndarray, mode: str = "linear") -> bytes:
    """Binary P6 image; rows are frequency (high at the top), columns position."""
    v = np.asarray(values, dtype=float).T[::-1]
    if mode == "phase":
        u = (v + np.pi) / (2 * np.pi)
    elif mode == "log":
        peak = v.max() if v.size else 0.0
        u = np.zeros_like(v) if peak <= 0 else np.clip(1 + np.log10(np.maximum(v / peak, 1e-12)) / 12, 0, 1)
    else:
        peak = v.max() if v.size else 0.0
        u = np.zeros_like(v) if peak <= 0 else v / peak
    rgb = _colormap(u, mode)
    h, w = v.shape
    return f"P6\n{w} {h}\n255\n".encode() + rgb.tobytes()


def write_ppm(path, values, mode="linear"):
    Path(path).write_bytes(ppm_bytes(values, mode))


# ---------------------------------------------------------------------------
# subcommands


def cmd_stft(run: Run) -> int:
    from .tfr import stft
    F = stft(run.signal(), run.signal("window"))
    run.field("stft", F)
    run.report("stft", {"peak": float(np.abs(F.values).max())}, F.axes)
    return EXIT_OK


def cmd_wigner(run: Run) -> int:
    from .tfr import tau_wigner
    tau = run.cfg["params"].get("tau", 0.5)
    F = tau_wigner(run.signal(), None, tau)
    run.field("wigner", F)
    n0, n1 = (a.n // 2 for a in F.axes)
    c = complex(F.values[n0, n1])
    run.report("wigner", {"tau": tau, "center_value": [c.real, c.imag]}, F.axes)
    return EXIT_OK


def cmd_awigner(run: Run) -> int:
    from .symplectic import SymplecticMatrix, a_wigner, is_covariant, plan_for_matrix
    A = SymplecticMatrix(np.asarray(run.cfg["params"]["matrix"], dtype=float))
    plan = plan_for_matrix(A.entries)
    F = a_wigner(A.entries, run.signal(), plan=plan)
    run.field("awigner", F)
    rep = is_covariant(A.entries)
    run.report("awigner", {"plan": plan.to_dict(), "covariant": bool(rep.covariant)}, F.axes)
    return EXIT_OK


def cmd_cohen(run: Run) -> int:
    from .symplectic import cohen_kernel
    p = run.cfg["params"]
    if (p.get("tau") is None) == (p.get("B") is None):
        raise UsageError("cohen needs exactly one of --tau or --B")
    K = cohen_kernel(tau=p.get("tau"), B=p.get("B"), n=run.cfg["grid"]["n"])
    data = {"B": K.multiplier.B, "dirac": K.dirac, "signature": K.multiplier.signature,
            "nullity": K.multiplier.nullity, "det": K.multiplier.det}
    axes = [run.axis, run.axis.dual()]
    if K.chirp is not None:
        run.field("cohen_kernel", K.chirp)
        axes = K.chirp_axes
    run.report("cohen", data, axes)
    return EXIT_OK


def cmd_quantize(run: Run) -> int:
    from .quantization import real_trig_symbol, tau_apply
    tau = run.cfg["params"].get("tau", 0.5)
    f = run.signal()
    ax = f.axis
    a = real_trig_symbol(run.rng, (ax, ax.dual()), max_index=1)
    g = tau_apply(a, f, tau)
    run.field("quantized", g)
    run.report("quantize", {"tau": tau, "symbol_modes": [[m[0].real, m[0].imag, m[1], m[2]] for m in a.modes]},
               [ax])
    return EXIT_OK


def cmd_transport(run: Run) -> int:
    from .quantization import real_trig_symbol, symbol4_axes, transport_general
    p = run.cfg["params"]
    tau1, tau2 = p.get("tau1", 0.5), p.get("tau2", 0.5)
    ax = run.axis
    a = real_trig_symbol(run.rng, (ax, ax.dual()), max_index=1)
    b = transport_general(a, tau1, tau2, x_axis=ax)
    run.field("transport", b)
    run.report("transport", {"tau1": tau1, "tau2": tau2}, symbol4_axes(ax))
    return EXIT_OK


def cmd_kernel(run: Run) -> int:
    from .quantization import (WignerKernel, japanese_bracket, kernel_matrix_2d, real_trig_symbol,
                               transport_modes)
    N = run.cfg["params"].get("N", 0)
    ax = run.axis
    axes = (ax, ax.dual())
    a = real_trig_symbol(run.rng, axes, max_index=1, multiple=2)
    c = transport_modes(a, 0.5, "c")
    K = WignerKernel(kernel_matrix_2d(c, axes), axes, c)
    KN = kernel_matrix_2d(c.weighted(N), axes)
    weighted = japanese_bracket(axes) ** N * K.matrix
    gap = float(np.max(np.abs(weighted - KN)) / np.max(np.abs(KN)))
    run.field("kernel_diag", PhaseSpaceField(axes, np.diag(K.values()).reshape(ax.n, ax.n)))
    run.report("kernel", {"N": N, "off_diagonal_max": K.off_diagonal_max(), "weighted_gap": gap}, axes)
    return EXIT_OK


def cmd_modnorm(run: Run) -> int:
    from .analysis import modnorm_stft, modnorm_tau
    p = run.cfg["params"]
    pe, qe, s, tau = p.get("p", 2.0), p.get("q", 2.0), p.get("s", 0.0), p.get("tau", 0.5)
    f, g = run.signal(), run.signal("window")
    a = modnorm_stft(f, g, pe, qe, s)
    b = modnorm_tau(f, g, tau, pe, qe, s)
    run.report("modnorm", {"p": pe, "q": qe, "s": s, "tau": tau, "stft_norm": a, "wigner_norm": b,
                           "relative_gap": abs(a - b) / a if a else 0.0}, [f.axis, f.axis.dual()])
    return EXIT_OK


def _write_wavefront(run: Run, name: str, report):
    run.report(name, report.to_dict(), [])
    run.text(name + ".csv", report.to_csv())


def cmd_wavefront(run: Run) -> int:
    from .analysis import signal_wavefront
    p = run.cfg["params"]
    rep, tau = p.get("rep", "wigner"), p.get("tau", 0.5)
    r = signal_wavefront(run.signal(), rep, tau, window=run.signal("window"))
    _write_wavefront(run, f"wavefront_{rep}", r)
    return EXIT_OK


def cmd_ghost(run: Run) -> int:
    from .analysis import ghost_demo
    res = ghost_demo()
    run.field("ghost_signal", res.signal)
    _write_wavefront(run, "ghost_gabor", res.gabor)
    _write_wavefront(run, "ghost_wigner", res.wigner)
    g, w = res.gabor.flagged_indices(), res.wigner.flagged_indices()
    run.report("ghost", {"gabor_flags": sorted(g), "wigner_flags": sorted(w), "strict_subset": g < w},
               [res.signal.axis])
    return EXIT_OK


def cmd_free_particle(run: Run) -> int:
    from .symplectic import apply_metaplectic, free_particle_plan, free_propagate, shear_field
    from .tfr import tau_wigner
    p = run.cfg["params"]
    t, tau = p.get("t", 0.02), p.get("tau", 0.5)
    u0 = run.signal()
    W0 = apply_metaplectic(free_particle_plan(tau, t), TensorField(u0, u0.conj()))
    lhs = tau_wigner(free_propagate(u0, t), None, tau)
    rhs = shear_field(W0, 4 * np.pi * t)
    ax = u0.axis
    inner = np.abs(ax.points) <= 0.5 * ax.extent
    sl = np.ix_(inner, np.abs(ax.dual().points) <= 0.5 * ax.dual().extent)
    err = float(np.linalg.norm(lhs.values[sl] - rhs.values[sl]) / np.linalg.norm(lhs.values[sl]))
    run.field("free_particle", lhs)
    run.report("free_particle", {"t": t, "tau": tau, "relative_error": err}, lhs.axes)
    return EXIT_OK


def cmd_selfcheck(run: Run) -> int:
    from .selfcheck import run_checks
    results = run_checks()
    lines = []
    ok = True
    for name, passed, detail in results:
        ok &= passed
        lines.append(f"{'PASS' if passed else 'FAIL'} {name}: {detail}")
    print("\n".join(lines))
    run.report("selfcheck", {"results": [{"name": n, "passed": p, "detail": d} for n, p, d in results]}, [])
    return EXIT_OK if ok else EXIT_FAIL


COMMANDS = {
    "stft": cmd_stft, "wigner": cmd_wigner, "awigner": cmd_awigner, "cohen": cmd_cohen,
    "quantize": cmd_quantize, "transport": cmd_transport, "kernel": cmd_kernel, "modnorm": cmd_modnorm,
    "wavefront": cmd_wavefront, "ghost": cmd_ghost, "free-particle": cmd_free_particle,
    "selfcheck": cmd_selfcheck,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def make_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, default=256, help="samples per axis (power of two)")
    common.add_argument("--extent", type=float, default=None, help="half-width R (default sqrt(n)/2)")
    common.add_argument("--signal", default="gaussian", help="built-in signal family")
    common.add_argument("--param", action="append", metavar="KEY=VALUE", help="signal parameter")
    common.add_argument("--input", default=None, help="read the signal from a .psf file")
    common.add_argument("--window", default="gaussian", help="window family")
    common.add_argument("--window-param", action="append", metavar="KEY=VALUE")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", default="phasespace_out", help="output directory")
    common.add_argument("--ppm", action="store_true", help="also write PPM heatmaps")
    common.add_argument("--config", default=None, help="JSON file or string merged over the flags")

    p = _Parser(prog="phasespace", description="Discrete phase-space analysis driver.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True
    sub.add_parser("stft", parents=[common])
    s = sub.add_parser("wigner", parents=[common])
    s.add_argument("--tau", type=float, default=0.5)
    s = sub.add_parser("awigner", parents=[common])
    s.add_argument("--matrix", required=True, help="4x4 matrix as JSON (inline or file)")
    s = sub.add_parser("cohen", parents=[common])
    s.add_argument("--tau", type=float)
    s.add_argument("--B", help="symmetric 2x2 matrix as JSON")
    s = sub.add_parser("quantize", parents=[common])
    grp = s.add_mutually_exclusive_group()
    grp.add_argument("--weyl", action="store_true")
    grp.add_argument("--tau", type=float)
    s = sub.add_parser("transport", parents=[common])
    s.add_argument("--tau1", type=float, default=0.5)
    s.add_argument("--tau2", type=float, default=0.5)
    s = sub.add_parser("kernel", parents=[common])
    s.add_argument("--N", type=int, default=1)
    s = sub.add_parser("modnorm", parents=[common])
    s.add_argument("--p", type=float, default=2.0)
    s.add_argument("--q", type=float, default=2.0)
    s.add_argument("--s", type=float, default=0.0)
    s.add_argument("--tau", type=float, default=0.5)
    s = sub.add_parser("wavefront", parents=[common])
    s.add_argument("--rep", choices=["wigner", "gabor"], default="wigner")
    s.add_argument("--tau", type=float, default=0.5)
    s = sub.add_parser("demo", parents=[common])
    dsub = s.add_subparsers(dest="demo", parser_class=_Parser)
    dsub.required = True
    dsub.add_parser("ghost", parents=[common])
    fp = dsub.add_parser("free-particle", parents=[common])
    fp.add_argument("--t", type=float, default=0.02)
    fp.add_argument("--tau", type=float, default=0.5)
    sub.add_parser("selfcheck", parents=[common])
    return p


def main(argv=None) -> int:
    try:
        args = make_parser().parse_args(argv)
        cfg = build_config(args)
        validate_config(cfg)
        run = Run(cfg)
        code = COMMANDS[cfg["command"]](run)
        for path in run.written:
            print(path)
        return code
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    except UsageError as exc:
        print(f"phasespace: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except jsonschema.ValidationError as exc:
        print(f"phasespace: invalid configuration: {exc.message}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalGuardError as exc:
        print(f"phasespace: numerical guard: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except (OSError, PsfFormatError) as exc:
        print(f"phasespace: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (PhaseSpaceError, TypeError) as exc:
        print(f"phasespace: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
