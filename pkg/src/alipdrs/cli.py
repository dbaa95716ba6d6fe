"""Command-line front end: scenario files, canned cases, CSV emission.

Scenario files are flat INI-style text with one section per concern and
``key = value`` lines; parsing is strict (unknown sections or keys are
rejected) and round-trip safe.  Exit codes: 0 success, 1 usage or parse
failure, 2 divergence, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import configparser
import io
import json
import math
import sys
from dataclasses import dataclass, replace
from pathlib import Path

from .errors import ConfigError, PeriodRatioError
from .footstep import MomentumTarget, SupportFoot
from .model import AlipParams, DrsMotion, Plane, SampledProfile, SinusoidTerm
from .sim import (LoadBias, Push, Scenario, SimTrace, frontal_target_sequence,
                  metrics, run, uncertainty_sweep)
from .stability import certify, periodic_orbit

__all__ = [
    "RunConfig",
    "PRESETS",
    "parse_config",
    "load_config",
    "preset_config",
    "serialize_config",
    "cmd_simulate",
    "cmd_stability",
    "cmd_sweep",
    "main",
]

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DIVERGED = 2
EXIT_NUMERICAL = 3

TRACE_COLUMNS = ("t", "x_SC", "L_yS", "y_SC", "L_xS", "s",
                 "support", "event", "u_x", "u_y")
SWEEP_COLUMNS = ("delta_A", "delta_t", "avg_velocity", "bounded",
                 "steps_to_converge", "status")

_SCHEMA = {
    "params": {"m", "H", "g", "T_step", "W"},
    "drs": {"x", "y", "x_samples", "y_samples"},
    "drs_believed": {"x", "y", "x_samples", "y_samples"},
    "targets": {"sagittal", "frontal", "mode", "path_x0", "path_y0",
                "path_vx", "path_vy", "gain_x", "gain_y"},
    "orbit": {"n1_sagittal", "n2_sagittal", "n1_frontal", "n2_frontal"},
    "sim": {"duration", "control_tick", "support", "seed",
            "initial_sagittal", "initial_frontal", "initial_radius"},
    "disturbances": {"push", "load"},
    "swing": {"order", "height_profile"},
}


@dataclass(frozen=True)
class RunConfig:
    """Validated scenario description; maps one-to-one onto sim.Scenario."""

    params: AlipParams = AlipParams(m=46.1, H=0.9, g=9.81, T_step=0.4, W=0.2)
    drs: DrsMotion = DrsMotion()
    drs_believed: DrsMotion | None = None
    target_sagittal: float = 0.0
    target_frontal: float | None = None      # None means step-width targets
    mode: str = "momentum"                   # "momentum" or "path"
    path_x0: float = 0.0
    path_y0: float = 0.0
    path_vx: float = 0.0
    path_vy: float = 0.0
    gain_x: float = 0.0
    gain_y: float = 0.0
    n1_sagittal: int = 1
    n2_sagittal: int = 1
    n1_frontal: int = 2
    n2_frontal: int = 1
    duration: float = 4.0
    control_tick: float = 0.001
    support: SupportFoot = SupportFoot.LEFT
    seed: int = 0
    initial_sagittal: tuple = (0.0, 0.0)
    initial_frontal: tuple = (0.0, 0.0)
    initial_radius: float | None = None
    pushes: tuple = ()
    loads: tuple = ()
    swing_order: int = 6
    swing_height_profile: tuple = (0.0, 0.02, 0.07, 0.15, 0.07, 0.02, 0.0)

    def to_scenario(self) -> Scenario:
        if self.mode == "path":
            targets = MomentumTarget(0.0, 0.0, "path-tracking")
        elif self.target_frontal is None:
            targets = MomentumTarget(self.target_sagittal, 0.0, "step-width")
        else:
            targets = MomentumTarget(self.target_sagittal, self.target_frontal,
                                     "constant-velocity")
        return Scenario(
            params=self.params,
            drs_true=self.drs,
            drs_believed=self.drs_believed,
            targets=targets,
            n1_sagittal=self.n1_sagittal,
            n2_sagittal=self.n2_sagittal,
            n1_frontal=self.n1_frontal,
            n2_frontal=self.n2_frontal,
            duration=self.duration,
            control_tick=self.control_tick,
            disturbances=self.pushes + self.loads,
            initial_sagittal=self.initial_sagittal,
            initial_frontal=self.initial_frontal,
            initial_support=self.support,
            seed=self.seed,
            initial_radius=self.initial_radius,
            path_start=(self.path_x0, self.path_y0),
            path_velocity=(self.path_vx, self.path_vy),
            path_gains=(self.gain_x, self.gain_y),
            swing_order=self.swing_order,
            swing_height_profile=self.swing_height_profile,
        )


def _fmt(value: float) -> str:
    return repr(float(value))


def _terms_line(drs: DrsMotion, axis: str) -> str:
    return ", ".join(
        f"{_fmt(t.amplitude)}:{_fmt(t.period)}:{_fmt(t.phase)}"
        for t in drs.terms if t.axis == axis)


def _samples_line(drs: DrsMotion, axis: str) -> str:
    prof = drs._axis_profile(axis)
    if prof is None:
        return ""
    return f"{_fmt(prof.dt)}:" + ",".join(_fmt(v) for v in prof.positions)


def serialize_config(cfg: RunConfig) -> str:
    """Canonical text form; parse(serialize(parse(text))) == parse(text)."""
    out = io.StringIO()
    p = cfg.params

    def section(name, pairs):
        out.write(f"[{name}]\n")
        for key, val in pairs:
            out.write(f"{key} = {val}\n")
        out.write("\n")

    section("params", [("m", _fmt(p.m)), ("H", _fmt(p.H)), ("g", _fmt(p.g)),
                       ("T_step", _fmt(p.T_step)), ("W", _fmt(p.W))])
    drs_pairs = [("x", _terms_line(cfg.drs, "x")), ("y", _terms_line(cfg.drs, "y"))]
    for axis in ("x", "y"):
        line = _samples_line(cfg.drs, axis)
        if line:
            drs_pairs.append((f"{axis}_samples", line))
    section("drs", drs_pairs)
    if cfg.drs_believed is not None:
        bel_pairs = [("x", _terms_line(cfg.drs_believed, "x")),
                     ("y", _terms_line(cfg.drs_believed, "y"))]
        for axis in ("x", "y"):
            line = _samples_line(cfg.drs_believed, axis)
            if line:
                bel_pairs.append((f"{axis}_samples", line))
        section("drs_believed", bel_pairs)
    target_pairs = [("sagittal", _fmt(cfg.target_sagittal)),
                    ("frontal", "step-width" if cfg.target_frontal is None
                     else _fmt(cfg.target_frontal)),
                    ("mode", cfg.mode)]
    if cfg.mode == "path":
        target_pairs += [("path_x0", _fmt(cfg.path_x0)), ("path_y0", _fmt(cfg.path_y0)),
                         ("path_vx", _fmt(cfg.path_vx)), ("path_vy", _fmt(cfg.path_vy)),
                         ("gain_x", _fmt(cfg.gain_x)), ("gain_y", _fmt(cfg.gain_y))]
    section("targets", target_pairs)
    section("orbit", [("n1_sagittal", str(cfg.n1_sagittal)),
                      ("n2_sagittal", str(cfg.n2_sagittal)),
                      ("n1_frontal", str(cfg.n1_frontal)),
                      ("n2_frontal", str(cfg.n2_frontal))])
    sim_pairs = [("duration", _fmt(cfg.duration)),
                 ("control_tick", _fmt(cfg.control_tick)),
                 ("support", cfg.support.value),
                 ("seed", str(cfg.seed)),
                 ("initial_sagittal", f"{_fmt(cfg.initial_sagittal[0])}:{_fmt(cfg.initial_sagittal[1])}"),
                 ("initial_frontal", f"{_fmt(cfg.initial_frontal[0])}:{_fmt(cfg.initial_frontal[1])}")]
    if cfg.initial_radius is not None:
        sim_pairs.append(("initial_radius", _fmt(cfg.initial_radius)))
    section("sim", sim_pairs)
    if cfg.pushes or cfg.loads:
        pairs = []
        if cfg.pushes:
            pairs.append(("push", ", ".join(
                f"{_fmt(d.time)}:{d.plane.value}:{_fmt(d.delta_momentum)}"
                for d in cfg.pushes)))
        if cfg.loads:
            pairs.append(("load", ", ".join(
                f"{_fmt(d.start)}:{_fmt(d.stop)}:{d.plane.value}:{_fmt(d.rate)}"
                for d in cfg.loads)))
        section("disturbances", pairs)
    section("swing", [("order", str(cfg.swing_order)),
                      ("height_profile", ",".join(_fmt(v) for v in cfg.swing_height_profile))])
    return out.getvalue()


def _key_line(text: str, section: str, key: str) -> str:
    """Best-effort line/column hint for diagnostics."""
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if stripped.startswith("[") and stripped.endswith("]"):
            current = stripped[1:-1].strip()
        elif current == section and (stripped.startswith(key + " ")
                                     or stripped.startswith(key + "=")
                                     or stripped.startswith(key + ":")
                                     or stripped == key):
            col = raw.index(key) + 1
            return f" (line {lineno}, column {col})"
    return ""


def _parse_float(section, key, value, text):
    try:
        out = float(value)
    except ValueError:
        raise ConfigError(f"[{section}] {key}: expected a number, got {value!r}"
                          f"{_key_line(text, section, key)}") from None
    if not math.isfinite(out):
        raise ConfigError(f"[{section}] {key}: value must be finite"
                          f"{_key_line(text, section, key)}")
    return out


def _parse_int(section, key, value, text):
    try:
        return int(value)
    except ValueError:
        raise ConfigError(f"[{section}] {key}: expected an integer, got {value!r}"
                          f"{_key_line(text, section, key)}") from None


def _parse_terms(section, key, value, axis, text):
    terms = []
    for chunk in value.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        parts = chunk.split(":")
        if len(parts) not in (2, 3):
            raise ConfigError(
                f"[{section}] {key}: term {chunk!r} must be "
                f"amplitude:period[:phase]{_key_line(text, section, key)}")
        amp = _parse_float(section, key, parts[0], text)
        period = _parse_float(section, key, parts[1], text)
        ph = _parse_float(section, key, parts[2], text) if len(parts) == 3 else 0.0
        terms.append(SinusoidTerm(axis=axis, amplitude=amp, period=period, phase=ph))
    return terms


def _parse_drs(parser, section, text) -> DrsMotion | None:
    if not parser.has_section(section):
        return None
    terms = []
    profiles = []
    for axis in ("x", "y"):
        if parser.has_option(section, axis):
            terms += _parse_terms(section, axis, parser.get(section, axis), axis, text)
        skey = f"{axis}_samples"
        if parser.has_option(section, skey):
            raw = parser.get(section, skey).strip()
            if raw:
                head, _, rest = raw.partition(":")
                dt = _parse_float(section, skey, head, text)
                vals = [_parse_float(section, skey, v, text)
                        for v in rest.split(",") if v.strip()]
                profiles.append(SampledProfile(axis=axis, positions=tuple(vals), dt=dt))
    try:
        return DrsMotion(terms=tuple(terms), profiles=tuple(profiles))
    except ValueError as exc:
        raise ConfigError(f"[{section}]: {exc}") from None


def _parse_pair(section, key, value, text):
    parts = value.split(":")
    if len(parts) != 2:
        raise ConfigError(f"[{section}] {key}: expected pos:mom"
                          f"{_key_line(text, section, key)}")
    return (_parse_float(section, key, parts[0], text),
            _parse_float(section, key, parts[1], text))


_PLANES = {"sagittal": Plane.SAGITTAL, "frontal": Plane.FRONTAL}


def parse_config(text: str) -> RunConfig:
    """Parse and validate scenario text into a RunConfig."""
    parser = configparser.ConfigParser(interpolation=None, delimiters=("=",))
    parser.optionxform = str
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"config parse failure: {exc}") from None

    for section in parser.sections():
        if section not in _SCHEMA:
            raise ConfigError(f"unknown section [{section}]")
        for key in parser.options(section):
            if key not in _SCHEMA[section]:
                raise ConfigError(f"unknown key {key!r} in [{section}]"
                                  f"{_key_line(text, section, key)}")

    cfg = RunConfig()

    if parser.has_section("params"):
        vals = {k: _parse_float("params", k, parser.get("params", k), text)
                for k in parser.options("params")}
        base = cfg.params
        cfg = replace(cfg, params=AlipParams(
            m=vals.get("m", base.m), H=vals.get("H", base.H),
            g=vals.get("g", base.g), T_step=vals.get("T_step", base.T_step),
            W=vals.get("W", base.W)))

    drs = _parse_drs(parser, "drs", text)
    if drs is not None:
        cfg = replace(cfg, drs=drs)
    cfg = replace(cfg, drs_believed=_parse_drs(parser, "drs_believed", text))

    if parser.has_section("targets"):
        get = lambda k: parser.get("targets", k)
        if parser.has_option("targets", "sagittal"):
            cfg = replace(cfg, target_sagittal=_parse_float(
                "targets", "sagittal", get("sagittal"), text))
        if parser.has_option("targets", "frontal"):
            raw = get("frontal").strip()
            cfg = replace(cfg, target_frontal=None if raw == "step-width"
                          else _parse_float("targets", "frontal", raw, text))
        if parser.has_option("targets", "mode"):
            mode = get("mode").strip()
            if mode not in ("momentum", "path"):
                raise ConfigError(f"[targets] mode must be momentum or path, got {mode!r}"
                                  f"{_key_line(text, 'targets', 'mode')}")
            cfg = replace(cfg, mode=mode)
        for k in ("path_x0", "path_y0", "path_vx", "path_vy", "gain_x", "gain_y"):
            if parser.has_option("targets", k):
                cfg = replace(cfg, **{k: _parse_float("targets", k, get(k), text)})

    if parser.has_section("orbit"):
        for k in parser.options("orbit"):
            val = _parse_int("orbit", k, parser.get("orbit", k), text)
            if val < 1:
                raise ConfigError(f"[orbit] {k} must be >= 1"
                                  f"{_key_line(text, 'orbit', k)}")
            cfg = replace(cfg, **{k: val})

    if parser.has_section("sim"):
        get = lambda k: parser.get("sim", k)
        if parser.has_option("sim", "duration"):
            cfg = replace(cfg, duration=_parse_float("sim", "duration", get("duration"), text))
        if parser.has_option("sim", "control_tick"):
            cfg = replace(cfg, control_tick=_parse_float(
                "sim", "control_tick", get("control_tick"), text))
        if parser.has_option("sim", "support"):
            raw = get("support").strip()
            if raw not in ("left", "right"):
                raise ConfigError(f"[sim] support must be left or right, got {raw!r}"
                                  f"{_key_line(text, 'sim', 'support')}")
            cfg = replace(cfg, support=SupportFoot(raw))
        if parser.has_option("sim", "seed"):
            cfg = replace(cfg, seed=_parse_int("sim", "seed", get("seed"), text))
        if parser.has_option("sim", "initial_sagittal"):
            cfg = replace(cfg, initial_sagittal=_parse_pair(
                "sim", "initial_sagittal", get("initial_sagittal"), text))
        if parser.has_option("sim", "initial_frontal"):
            cfg = replace(cfg, initial_frontal=_parse_pair(
                "sim", "initial_frontal", get("initial_frontal"), text))
        if parser.has_option("sim", "initial_radius"):
            cfg = replace(cfg, initial_radius=_parse_float(
                "sim", "initial_radius", get("initial_radius"), text))

    if parser.has_section("disturbances"):
        pushes = []
        loads = []
        if parser.has_option("disturbances", "push"):
            for chunk in parser.get("disturbances", "push").split(","):
                chunk = chunk.strip()
                if not chunk:
                    continue
                parts = chunk.split(":")
                if len(parts) != 3 or parts[1] not in _PLANES:
                    raise ConfigError(
                        f"[disturbances] push entry {chunk!r} must be "
                        f"time:plane:delta{_key_line(text, 'disturbances', 'push')}")
                pushes.append(Push(plane=_PLANES[parts[1]],
                                   time=_parse_float("disturbances", "push", parts[0], text),
                                   delta_momentum=_parse_float("disturbances", "push", parts[2], text)))
        if parser.has_option("disturbances", "load"):
            for chunk in parser.get("disturbances", "load").split(","):
                chunk = chunk.strip()
                if not chunk:
                    continue
                parts = chunk.split(":")
                if len(parts) != 4 or parts[2] not in _PLANES:
                    raise ConfigError(
                        f"[disturbances] load entry {chunk!r} must be "
                        f"start:stop:plane:rate{_key_line(text, 'disturbances', 'load')}")
                loads.append(LoadBias(plane=_PLANES[parts[2]],
                                      start=_parse_float("disturbances", "load", parts[0], text),
                                      stop=_parse_float("disturbances", "load", parts[1], text),
                                      rate=_parse_float("disturbances", "load", parts[3], text)))
        cfg = replace(cfg, pushes=tuple(pushes), loads=tuple(loads))

    if parser.has_section("swing"):
        if parser.has_option("swing", "order"):
            cfg = replace(cfg, swing_order=_parse_int(
                "swing", "order", parser.get("swing", "order"), text))
        if parser.has_option("swing", "height_profile"):
            vals = tuple(_parse_float("swing", "height_profile", v, text)
                         for v in parser.get("swing", "height_profile").split(",")
                         if v.strip())
            cfg = replace(cfg, swing_height_profile=vals)

    try:
        cfg.to_scenario()
    except ValueError as exc:
        raise ConfigError(f"invalid scenario: {exc}") from None
    return cfg


def load_config(path) -> RunConfig:
    return parse_config(Path(path).read_text())


# ---------------------------------------------------------------------------
# canned cases

_BASE = RunConfig()


def _case(drs_terms, sagittal, n1_sag, n2_sag, n1_fro, n2_fro, duration):
    return replace(
        _BASE,
        drs=DrsMotion(terms=drs_terms),
        target_sagittal=sagittal,
        n1_sagittal=n1_sag, n2_sagittal=n2_sag,
        n1_frontal=n1_fro, n2_frontal=n2_fro,
        duration=duration,
    )


PRESETS = {
    # table-top simulation cases
    "case_a": lambda: _case((SinusoidTerm("x", 0.04, 0.4),), 4.1, 1, 1, 2, 1, 4.0),
    "case_b": lambda: _case((SinusoidTerm("x", 0.14, 6.0),), 12.5, 15, 1, 2, 1, 18.0),
    "case_c": lambda: _case((SinusoidTerm("y", 0.06, 0.72),), 0.0, 1, 1, 18, 10, 16.0),
    "case_d": lambda: _case((SinusoidTerm("x", 0.04, 0.4), SinusoidTerm("y", 0.1, 6.0)),
                            6.27, 1, 1, 30, 2, 26.0),
    # treadmill-scale cases (walking in place under slow sway)
    "exp_a": lambda: _case((SinusoidTerm("y", 0.04, 6.8),), 0.0, 1, 1, 34, 2, 28.0),
    "exp_b": lambda: _case((SinusoidTerm("y", 0.04, 5.6),), 0.0, 1, 1, 14, 1, 12.0),
    "exp_c": lambda: _case((SinusoidTerm("x", 0.04, 6.8),), 0.0, 17, 1, 2, 1, 15.0),
    "exp_d": lambda: _case((SinusoidTerm("x", 0.04, 5.6),), 0.0, 14, 1, 2, 1, 12.0),
}


def preset_config(name: str) -> RunConfig:
    try:
        builder = PRESETS[name]
    except KeyError:
        raise ConfigError(
            f"unknown preset {name!r}; available: {', '.join(sorted(PRESETS))}") from None
    return builder()


# ---------------------------------------------------------------------------
# output helpers

def _f17(value: float) -> str:
    return format(float(value), ".17g")


def write_trace_csv(trace: SimTrace, path):
    with open(path, "w", newline="") as fh:
        fh.write(",".join(TRACE_COLUMNS) + "\n")
        for row in trace.samples:
            fh.write(",".join([
                _f17(row.t), _f17(row.x_sc), _f17(row.l_ys), _f17(row.y_sc),
                _f17(row.l_xs), _f17(row.s), row.support, str(row.event),
                _f17(row.u_x), _f17(row.u_y)]) + "\n")


def _metrics_dict(m) -> dict:
    return {
        "avg_forward_velocity": m.avg_forward_velocity,
        "velocity_error": m.velocity_error,
        "drift_velocity": m.drift_velocity,
        "landing_positions": [list(u) for u in m.landing_positions],
        "max_state_norm": m.max_state_norm,
        "converged": m.converged,
        "steps_to_converge": m.steps_to_converge,
    }


def _sagittal_orbit(cfg: RunConfig):
    scenario = cfg.to_scenario()
    targets = (cfg.target_sagittal,) * cfg.n1_sagittal
    return periodic_orbit(cfg.params, cfg.drs, Plane.SAGITTAL,
                          cfg.n1_sagittal, cfg.n2_sagittal, targets)


def _frontal_orbit(cfg: RunConfig):
    if cfg.target_frontal is None:
        targets = frontal_target_sequence(cfg.params, cfg.support, cfg.n1_frontal)
    else:
        targets = (cfg.target_frontal,) * cfg.n1_frontal
    return periodic_orbit(cfg.params, cfg.drs, Plane.FRONTAL,
                          cfg.n1_frontal, cfg.n2_frontal, targets)


def cmd_simulate(cfg: RunConfig, out_dir) -> int:
    """Run a scenario; write trace.csv, metrics.json, status.json."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    scenario = cfg.to_scenario()
    try:
        trace = run(scenario)
        orbit = None
        if cfg.drs_believed is None and cfg.mode == "momentum":
            orbit = _sagittal_orbit(cfg)
        try:
            m = metrics(trace, cfg.params, scenario.targets, orbit)
            metrics_payload = _metrics_dict(m)
        except Exception as exc:
            metrics_payload = {"error": str(exc)}
    except Exception as exc:
        status = {"status": "numerical-failure", "error": str(exc),
                  "exit_code": EXIT_NUMERICAL}
        (out / "status.json").write_text(json.dumps(status, indent=2) + "\n")
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL

    exit_code = EXIT_OK if trace.status == "ok" else EXIT_DIVERGED
    write_trace_csv(trace, out / "trace.csv")
    (out / "metrics.json").write_text(json.dumps(metrics_payload, indent=2) + "\n")
    status = {"status": trace.status, "events": len(trace.events),
              "samples": len(trace.samples), "duration": scenario.duration,
              "exit_code": exit_code}
    (out / "status.json").write_text(json.dumps(status, indent=2) + "\n")
    print(f"simulate: {trace.status}, {len(trace.events)} landings, "
          f"{len(trace.samples)} samples -> {out}")
    return exit_code


def cmd_stability(cfg: RunConfig) -> int:
    """Print certification reports and periodic-orbit anchors for both planes."""
    doc = {"params": {"m": cfg.params.m, "H": cfg.params.H, "g": cfg.params.g,
                      "T_step": cfg.params.T_step, "W": cfg.params.W}}
    for plane, n1, n2, orbit_fn in (
            (Plane.SAGITTAL, cfg.n1_sagittal, cfg.n2_sagittal, _sagittal_orbit),
            (Plane.FRONTAL, cfg.n1_frontal, cfg.n2_frontal, _frontal_orbit)):
        report = certify(cfg.params, plane, n1)
        orbit = orbit_fn(cfg)
        doc[plane.value] = {
            "report": report.to_dict(),
            "n2": n2,
            "T_sys": orbit.T_sys,
            "targets": list(orbit.targets),
            "anchors": [[a.pos, a.mom] for a in orbit.anchors],
        }
    print(json.dumps(doc, indent=2))
    return EXIT_OK


def _dedupe(values, label):
    seen = []
    for v in values:
        if v in seen:
            print(f"warning: duplicate {label} value {v} ignored", file=sys.stderr)
        else:
            seen.append(v)
    return seen


def cmd_sweep(cfg: RunConfig, grid_da, grid_dt, out_dir) -> int:
    """Run the believed-motion uncertainty grid; write sweep.csv."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    grid_da = _dedupe(grid_da, "delta_A")
    grid_dt = _dedupe(grid_dt, "delta_t")
    scenario = cfg.to_scenario()
    grid = uncertainty_sweep(scenario, grid_da, grid_dt)
    lines = [",".join(SWEEP_COLUMNS)]
    for row in grid:
        for cell in row:
            vel = cell.metrics.avg_forward_velocity if cell.metrics else float("nan")
            steps = (cell.metrics.steps_to_converge
                     if cell.metrics and cell.metrics.steps_to_converge is not None
                     else "")
            lines.append(",".join([
                _f17(cell.delta_amp), _f17(cell.delta_time), _f17(vel),
                str(int(cell.bounded)), str(steps), cell.status]))
    (out / "sweep.csv").write_text("\n".join(lines) + "\n")
    n_cells = len(grid_da) * len(grid_dt)
    n_bounded = sum(cell.bounded for row in grid for cell in row)
    print(f"sweep: {n_cells} cells, {n_bounded} bounded -> {out / 'sweep.csv'}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument handling

class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _float_list(raw: str):
    try:
        return [float(v) for v in raw.split(",") if v.strip()]
    except ValueError:
        raise _UsageError(f"expected a comma-separated number list, got {raw!r}") from None


def _resolve_config(args) -> RunConfig:
    if getattr(args, "preset", None):
        cfg = preset_config(args.preset)
    elif getattr(args, "config", None):
        cfg = load_config(args.config)
    else:
        raise _UsageError("one of --config or --preset is required")
    if getattr(args, "duration", None) is not None:
        cfg = replace(cfg, duration=args.duration)
    if getattr(args, "seed", None) is not None:
        cfg = replace(cfg, seed=args.seed)
    return cfg


def main(argv=None) -> int:
    parser = _Parser(prog="alipdrs",
                     description="Walking-on-swaying-ground scenario runner")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, with_out=True):
        p.add_argument("--config", help="scenario config file")
        p.add_argument("--preset", help=f"named case: {', '.join(sorted(PRESETS))}")
        p.add_argument("--duration", type=float, help="override duration, s")
        p.add_argument("--seed", type=int, help="override RNG seed")
        if with_out:
            p.add_argument("--out", required=True, help="output directory")

    add_common(sub.add_parser("simulate", help="run one scenario, write CSV trace"))
    add_common(sub.add_parser("stability", help="print certification and orbits"),
               with_out=False)
    sweep_p = sub.add_parser("sweep", help="believed-sway uncertainty grid")
    add_common(sweep_p)
    sweep_p.add_argument("--grid-da", default="0,0.013,0.026,0.04",
                         help="comma list of amplitude offsets, m")
    sweep_p.add_argument("--grid-dt", default="0,0.13,0.26,0.4",
                         help="comma list of phase offsets, s")

    try:
        args = parser.parse_args(argv)
        cfg = _resolve_config(args)
        if args.command == "simulate":
            return cmd_simulate(cfg, args.out)
        if args.command == "stability":
            return cmd_stability(cfg)
        return cmd_sweep(cfg, _float_list(args.grid_da),
                         _float_list(args.grid_dt), args.out)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ConfigError, FileNotFoundError, PeriodRatioError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # numerical or internal failure
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
