"""Run configuration: strict key-value parsing and object builders.

The config format is INI-style text with a fixed schema; unknown
sections or keys are rejected with the offending line number so typos
never silently fall back to defaults.  Every subcommand reads the same
RunConfig, using only the sections it needs.
"""

from __future__ import annotations

import configparser
import re
from dataclasses import dataclass, field

import numpy as np

from .curvature import (
    geodesic_sheet_chart,
    geodesic_sphere_chart,
    graph_chart,
    horosphere_chart,
    torus_graph_chart,
    torus_plane_chart,
)
from .errors import ConfigError
from .manifold import PointTangent, SpaceForm, model_from_spec
from .oscint import (
    BumpAmplitude,
    LinearPhase,
    LinearSquarePhase,
    OscillatoryProblem,
    QuadraticPhase,
)

_SCHEMA = {
    "model": {"kind", "dimension", "curvature", "profile", "profile_params", "r_bounds"},
    "chart": {
        "kind",
        "radius",
        "center",
        "columns",
        "offset",
        "height_amplitude",
        "height_waves",
        "halfwidth",
    },
    "tolerances": {"jacobi_tol", "rank_tol", "slack", "node_cap"},
    "grids": {"r_grid", "lambda_grid", "sweep_density", "lambda_cap", "degree_cap"},
    "oscint": {"dimension", "phase", "matrix", "slope", "linear", "square", "plateau", "order"},
    "kuznecov": {"target", "columns", "offset", "height_amplitude", "height_waves"},
    "run": {"seed", "threads", "quiet"},
}


@dataclass
class RunConfig:
    model_kind: str = "spaceform"
    model_dimension: int = 3
    model_curvature: float = -1.0
    model_profile: str = "cosh"
    model_profile_params: tuple = (1.0,)
    model_r_bounds: tuple = (-30.0, 30.0)

    chart_kind: str = "geodesic_sphere"
    chart_radius: float = 1.0
    chart_center: tuple = ()
    chart_columns: tuple = ((1,), (0,))
    chart_offset: tuple = ()
    chart_height_amplitude: float = 0.2
    chart_height_waves: int = 1
    chart_halfwidth: float = 1.0

    jacobi_tol: float = 1e-6
    rank_tol: float = 1e-6
    slack: float = 1e-6
    node_cap: float = 4.0e8

    r_grid: tuple = tuple(np.linspace(0.05, 50.0, 50))
    lambda_grid: tuple = tuple(2.0 ** np.arange(4, 10))
    sweep_density: int = 10
    lambda_cap: float = 1000.0
    degree_cap: int = 200

    oscint_dimension: int = 2
    oscint_phase: str = "quadratic"
    oscint_matrix: tuple = ((1.0, 0.0), (0.0, 1.0))
    oscint_slope: tuple = (1.0,)
    oscint_linear: float = 1.0
    oscint_square: float = 1.0
    oscint_plateau: float = 0.5
    oscint_order: int = 4

    kuznecov_target: str = "torus_plane"
    kuznecov_columns: tuple = ((1,), (0,))
    kuznecov_offset: tuple = ()
    kuznecov_height_amplitude: float = 0.2
    kuznecov_height_waves: int = 1

    seed: int = 0
    threads: int = 1
    quiet: bool = False
    raw: dict = field(default_factory=dict)


def _key_lines(text):
    """Map (section, key) to the line it appears on, for diagnostics."""
    lines = {}
    section = None
    for no, raw in enumerate(text.splitlines(), 1):
        s = raw.strip()
        if not s or s.startswith(("#", ";")):
            continue
        if s.startswith("[") and s.endswith("]"):
            section = s[1:-1].strip().lower()
            lines[(section, None)] = no
        elif "=" in s or ":" in s:
            key = re.split("[=:]", s, 1)[0].strip().lower()
            lines[(section, key)] = no
    return lines


def _floats(text, key):
    parts = [p for p in re.split("[,\\s]+", text.strip()) if p]
    if not parts:
        raise ConfigError(f"{key} must be a nonempty list")
    try:
        return tuple(float(p) for p in parts)
    except ValueError as exc:
        raise ConfigError(f"{key} has a non-numeric entry: {exc}") from None


def _matrix(text, key):
    rows = [r for r in text.split(";") if r.strip()]
    vals = [_floats(r, key) for r in rows]
    if len({len(v) for v in vals}) != 1:
        raise ConfigError(f"{key} rows have unequal lengths")
    return tuple(vals)


def _sorted_grid(values, key):
    if any(b <= a for a, b in zip(values, values[1:])):
        raise ConfigError(f"{key} must be sorted strictly ascending")
    if any(v <= 0 for v in values):
        raise ConfigError(f"{key} must be positive")
    return values


def parse_config(path=None, text=None):
    """Read a config file (or literal text) into a RunConfig."""
    cfg = RunConfig()
    if path is None and text is None:
        return cfg
    if text is None:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    lines = _key_lines(text)
    parser = configparser.ConfigParser(interpolation=None, delimiters=("=", ":"))
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"config parse error: {exc}") from None

    for sec in parser.sections():
        s = sec.lower()
        if s not in _SCHEMA:
            raise ConfigError(f"unknown section [{sec}] (line {lines.get((s, None), '?')})")
        for key in parser.options(sec):
            k = key.lower()
            if k not in _SCHEMA[s]:
                raise ConfigError(
                    f"unknown key '{key}' in section [{sec}] (line {lines.get((s, k), '?')})"
                )
            cfg.raw[(s, k)] = parser.get(sec, key)

    def get(sec, key):
        return cfg.raw.get((sec, key))

    def get_float(sec, key, positive=False):
        v = get(sec, key)
        if v is None:
            return None
        try:
            out = float(v)
        except ValueError:
            raise ConfigError(f"{key} must be a number") from None
        if positive and not out > 0:
            raise ConfigError(f"{key} must be positive")
        return out

    def get_int(sec, key, minimum=None):
        v = get(sec, key)
        if v is None:
            return None
        try:
            out = int(v)
        except ValueError:
            raise ConfigError(f"{key} must be an integer") from None
        if minimum is not None and out < minimum:
            raise ConfigError(f"{key} must be at least {minimum}")
        return out

    def get_choice(sec, key, choices):
        v = get(sec, key)
        if v is None:
            return None
        out = v.strip().lower()
        if out not in choices:
            raise ConfigError(f"{key} must be one of {sorted(choices)}")
        return out

    # model
    v = get_choice("model", "kind", {"euclidean", "torus", "spaceform", "sphere", "warped"})
    if v is not None:
        cfg.model_kind = v
    v = get_int("model", "dimension", minimum=2)
    if v is not None:
        cfg.model_dimension = v
    v = get_float("model", "curvature")
    if v is not None:
        cfg.model_curvature = v
    v = get_choice("model", "profile", {"cosh", "quadratic", "cosh_quad", "polynomial"})
    if v is not None:
        cfg.model_profile = v
    v = get("model", "profile_params")
    if v is not None:
        cfg.model_profile_params = _floats(v, "profile_params")
    v = get("model", "r_bounds")
    if v is not None:
        bounds = _floats(v, "r_bounds")
        if len(bounds) != 2 or bounds[0] >= bounds[1]:
            raise ConfigError("r_bounds must be two increasing numbers")
        cfg.model_r_bounds = bounds

    # chart
    v = get_choice(
        "chart",
        "kind",
        {"geodesic_sphere", "geodesic_sheet", "horosphere", "graph", "torus_plane", "torus_graph"},
    )
    if v is not None:
        cfg.chart_kind = v
    v = get_float("chart", "radius", positive=True)
    if v is not None:
        cfg.chart_radius = v
    for name in ("center", "offset"):
        v = get("chart", name)
        if v is not None:
            setattr(cfg, f"chart_{name}", _floats(v, name))
    v = get("chart", "columns")
    if v is not None:
        cfg.chart_columns = _matrix(v, "columns")
    v = get_float("chart", "height_amplitude")
    if v is not None:
        cfg.chart_height_amplitude = v
    v = get_int("chart", "height_waves", minimum=1)
    if v is not None:
        cfg.chart_height_waves = v
    v = get_float("chart", "halfwidth", positive=True)
    if v is not None:
        cfg.chart_halfwidth = v

    # tolerances
    for name in ("jacobi_tol", "rank_tol", "slack", "node_cap"):
        v = get_float("tolerances", name, positive=True)
        if v is not None:
            setattr(cfg, name, v)

    # grids
    v = get("grids", "r_grid")
    if v is not None:
        cfg.r_grid = _sorted_grid(_floats(v, "r_grid"), "r_grid")
    v = get("grids", "lambda_grid")
    if v is not None:
        cfg.lambda_grid = _sorted_grid(_floats(v, "lambda_grid"), "lambda_grid")
    v = get_int("grids", "sweep_density", minimum=1)
    if v is not None:
        cfg.sweep_density = v
    v = get_float("grids", "lambda_cap", positive=True)
    if v is not None:
        cfg.lambda_cap = v
    v = get_int("grids", "degree_cap", minimum=0)
    if v is not None:
        cfg.degree_cap = v

    # oscint
    v = get_int("oscint", "dimension", minimum=1)
    if v is not None:
        cfg.oscint_dimension = v
    v = get_choice("oscint", "phase", {"quadratic", "linear", "linear_square", "none"})
    if v is not None:
        cfg.oscint_phase = v
    v = get("oscint", "matrix")
    if v is not None:
        cfg.oscint_matrix = _matrix(v, "matrix")
    v = get("oscint", "slope")
    if v is not None:
        cfg.oscint_slope = _floats(v, "slope")
    v = get_float("oscint", "linear")
    if v is not None:
        cfg.oscint_linear = v
    v = get_float("oscint", "square")
    if v is not None:
        cfg.oscint_square = v
    v = get_float("oscint", "plateau")
    if v is not None:
        cfg.oscint_plateau = v
    v = get_int("oscint", "order", minimum=1)
    if v is not None:
        cfg.oscint_order = v

    # kuznecov
    v = get_choice("kuznecov", "target", {"torus_plane", "torus_graph", "sphere"})
    if v is not None:
        cfg.kuznecov_target = v
    v = get("kuznecov", "columns")
    if v is not None:
        cfg.kuznecov_columns = _matrix(v, "columns")
    v = get("kuznecov", "offset")
    if v is not None:
        cfg.kuznecov_offset = _floats(v, "offset")
    v = get_float("kuznecov", "height_amplitude")
    if v is not None:
        cfg.kuznecov_height_amplitude = v
    v = get_int("kuznecov", "height_waves", minimum=1)
    if v is not None:
        cfg.kuznecov_height_waves = v

    # run
    v = get_int("run", "seed")
    if v is not None:
        cfg.seed = v
    v = get_int("run", "threads", minimum=0)
    if v is not None:
        cfg.threads = v
    v = get("run", "quiet")
    if v is not None:
        if v.strip().lower() not in ("0", "1", "true", "false", "yes", "no"):
            raise ConfigError("quiet must be a boolean")
        cfg.quiet = v.strip().lower() in ("1", "true", "yes")
    return cfg


def build_model(cfg):
    return model_from_spec(
        cfg.model_kind,
        dimension=cfg.model_dimension,
        curvature=cfg.model_curvature,
        profile=cfg.model_profile,
        profile_params=cfg.model_profile_params,
        r_bounds=cfg.model_r_bounds,
    )


def _default_center(model):
    if isinstance(model, SpaceForm):
        return model.base_point()
    return np.zeros(model.chart_dim())


def _cosine_height(amplitude, waves):
    def height(ang):
        ang = np.atleast_1d(np.asarray(ang, dtype=float))
        return amplitude * float(np.sum(np.cos(waves * ang)))

    return height


def build_chart(cfg, model):
    """Construct the configured hypersurface chart on the model."""
    kind = cfg.chart_kind
    center = np.asarray(cfg.chart_center, dtype=float) if cfg.chart_center else _default_center(model)
    if kind == "geodesic_sphere":
        return geodesic_sphere_chart(model, center, cfg.chart_radius)
    if kind == "geodesic_sheet":
        return geodesic_sheet_chart(model, center, halfwidth=cfg.chart_halfwidth)
    if kind == "horosphere":
        v = model.tangent_basis(center)[0]
        return horosphere_chart(model, PointTangent(center, v))
    if kind == "graph":
        height = _cosine_height(cfg.chart_height_amplitude, cfg.chart_height_waves)
        return graph_chart(model, center, height, halfwidth=cfg.chart_halfwidth)
    if kind == "torus_plane":
        offset = np.asarray(cfg.chart_offset, dtype=float) if cfg.chart_offset else None
        return torus_plane_chart(model, np.asarray(cfg.chart_columns), offset)
    if kind == "torus_graph":
        offset = np.asarray(cfg.chart_offset, dtype=float) if cfg.chart_offset else None
        height = _cosine_height(cfg.chart_height_amplitude, cfg.chart_height_waves)
        return torus_graph_chart(model, height, offset)
    raise ConfigError(f"unknown chart kind '{kind}'")


def build_oscint_problem(cfg):
    n = cfg.oscint_dimension
    if cfg.oscint_phase == "quadratic":
        q = np.asarray(cfg.oscint_matrix, dtype=float)
        if q.shape != (n, n):
            q = np.eye(n)
        phase = QuadraticPhase(q)
    elif cfg.oscint_phase == "linear":
        k = np.asarray(cfg.oscint_slope, dtype=float)
        if k.size != n:
            k = np.ones(n)
        phase = LinearPhase(k)
    elif cfg.oscint_phase == "linear_square":
        phase = LinearSquarePhase(cfg.oscint_linear, cfg.oscint_square)
    else:  # phase "none": no oscillation
        phase = LinearPhase(np.zeros(n))
    amplitude = BumpAmplitude(cfg.oscint_plateau)
    grid = cfg.lambda_grid
    if n == 3 and max(grid) > 2.0**7:
        grid = tuple(2.0 ** np.linspace(4.0, 7.0, 7))
    return OscillatoryProblem(n, phase, amplitude, grid)
