"""Sweep configuration: YAML loading with line tracking, defaults and validation.

A config is a mapping with a ``runs`` list and an optional ``defaults``
mapping merged under every run::

    defaults:
      delta0: 1.0
      grid: {t_min: 1.0e-4, t_max: 1.0e4, count: 200}
    runs:
      - id: entropic-500
        model: {kind: entropic}
        n: 500
        fits: {alpha: true, beta: true, pcp: true}
"""

from __future__ import annotations

import copy
from dataclasses import dataclass, field
from pathlib import Path

import yaml

MODEL_KINDS = ("log-product", "log-ratio-squared", "entropic", "index-power", "gue", "bilaplacian")
NORMALIZATIONS = ("symmetric-normalized", "combinatorial")
ORDERS = ("two", "four")

RUN_DEFAULTS = {
    "delta0": 1.0,
    "normalization": "symmetric-normalized",
    "order": "four",
    "grid": {"t_min": 1e-4, "t_max": 1e4, "count": 200},
    "fits": {"alpha": True, "beta": True, "pcp": True, "alpha_window": None, "beta_window": [1e-4, 1e-1]},
    "controls": {"gue": False, "bilaplacian": False, "ks": False},
    "seed": 0,
    "emit_kernel": False,
}

_RUN_KEYS = {"id", "model", "n"} | set(RUN_DEFAULTS)
_MODEL_KEYS = {"kind", "gamma", "literal_diagonal"}


class ConfigError(Exception):
    """Config could not be read or failed validation; ``problems`` lists every violation."""

    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("\n".join(self.problems))


@dataclass
class Config:
    runs: list
    source: str = "<config>"
    lines: dict = field(default_factory=dict, repr=False)


def _plain(node, path, lines, loader):
    """Convert a composed YAML node to Python data, recording each path's line number."""
    lines[path] = node.start_mark.line + 1
    if isinstance(node, yaml.MappingNode):
        out = {}
        for key_node, value_node in node.value:
            key = loader.construct_object(key_node, deep=True)
            out[key] = _plain(value_node, path + (key,), lines, loader)
        return out
    if isinstance(node, yaml.SequenceNode):
        return [_plain(item, path + (i,), lines, loader) for i, item in enumerate(node.value)]
    return loader.construct_object(node, deep=True)


def _parse(text: str, source: str):
    try:
        root = yaml.compose(text, Loader=yaml.SafeLoader)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        where = f"{source}:{mark.line + 1}" if mark is not None else source
        raise ConfigError([f"{where}: could not parse YAML: {getattr(exc, 'problem', exc)}"]) from None
    lines: dict = {}
    data = _plain(root, (), lines, yaml.SafeLoader("")) if root is not None else None
    return data, lines


def _fmt_path(path) -> str:
    out = ""
    for part in path:
        out += f"[{part}]" if isinstance(part, int) else (f".{part}" if out else str(part))
    return out


def _merge(base: dict, override: dict) -> dict:
    out = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(out.get(key), dict):
            out[key] = _merge(out[key], value)
        else:
            out[key] = copy.deepcopy(value)
    return out


def _is_number(x) -> bool:
    return isinstance(x, (int, float)) and not isinstance(x, bool)


def _is_int(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def _check_run(run: dict, problems: list) -> None:
    """Append (path, message) pairs for every violation in one merged run."""
    for key in run:
        if key not in _RUN_KEYS:
            problems.append(((key,), f"unknown key {key!r}"))

    model = run.get("model")
    kind = None
    if isinstance(model, str):
        model = {"kind": model}
        run["model"] = model
    if not isinstance(model, dict):
        problems.append((("model",), "model must be a mapping with a 'kind' key"))
    else:
        for key in model:
            if key not in _MODEL_KEYS:
                problems.append((("model", key), f"unknown model key {key!r}"))
        kind = model.get("kind")
        if kind not in MODEL_KINDS:
            problems.append((("model", "kind"), f"kind must be one of {', '.join(MODEL_KINDS)}; got {kind!r}"))
        if kind == "index-power":
            gamma = model.get("gamma", 1.0)
            if not _is_number(gamma) or not gamma > 0:
                problems.append((("model", "gamma"), f"gamma must be > 0, got {gamma!r}"))
        elif "gamma" in model:
            problems.append((("model", "gamma"), "gamma only applies to index-power"))
        if model.get("literal_diagonal") and kind != "log-product":
            problems.append((("model", "literal_diagonal"), "literal_diagonal only applies to log-product"))

    n = run.get("n")
    if not _is_int(n) or n < 1:
        problems.append((("n",), f"n must be a positive integer, got {n!r}"))
        n = None
    delta0 = run.get("delta0")
    if not _is_number(delta0) or not delta0 > 0:
        problems.append((("delta0",), f"delta0 must be > 0, got {delta0!r}"))
    if run.get("normalization") not in NORMALIZATIONS:
        problems.append((("normalization",), f"normalization must be one of {', '.join(NORMALIZATIONS)}"))
    if run.get("order") not in ORDERS:
        problems.append((("order",), f"order must be one of {', '.join(ORDERS)}"))
    seed = run.get("seed")
    if not _is_int(seed) or not 0 <= seed < 2**64:
        problems.append((("seed",), f"seed must be an unsigned 64-bit integer, got {seed!r}"))
    if not isinstance(run.get("emit_kernel"), bool):
        problems.append((("emit_kernel",), "emit_kernel must be true or false"))

    grid = run.get("grid")
    if not isinstance(grid, dict):
        problems.append((("grid",), "grid must be a mapping"))
    else:
        t_min, t_max, count = grid.get("t_min"), grid.get("t_max"), grid.get("count")
        if not (_is_number(t_min) and _is_number(t_max) and 0 < t_min < t_max):
            problems.append((("grid",), f"grid needs 0 < t_min < t_max, got ({t_min!r}, {t_max!r})"))
        if not _is_int(count) or count < 3:
            problems.append((("grid", "count"), f"count must be an integer >= 3, got {count!r}"))
        for key in grid:
            if key not in ("t_min", "t_max", "count"):
                problems.append((("grid", key), f"unknown grid key {key!r}"))

    fits = run.get("fits")
    if not isinstance(fits, dict):
        problems.append((("fits",), "fits must be a mapping"))
    else:
        for key in ("alpha", "beta", "pcp"):
            if not isinstance(fits.get(key), bool):
                problems.append((("fits", key), f"{key} must be true or false"))
        aw = fits.get("alpha_window")
        if aw is not None and not (isinstance(aw, list) and len(aw) == 2 and all(_is_int(v) for v in aw)
                                   and 1 <= aw[0] < aw[1] and (n is None or aw[1] <= n)):
            problems.append((("fits", "alpha_window"), f"alpha_window must be [lo, hi] with 1 <= lo < hi <= n, got {aw!r}"))
        bw = fits.get("beta_window")
        if not (isinstance(bw, list) and len(bw) == 2 and all(_is_number(v) for v in bw) and 0 < bw[0] < bw[1] < 1):
            problems.append((("fits", "beta_window"), f"beta_window must be [t_lo, t_hi] with 0 < t_lo < t_hi < 1, got {bw!r}"))
        for key in fits:
            if key not in RUN_DEFAULTS["fits"]:
                problems.append((("fits", key), f"unknown fits key {key!r}"))

    controls = run.get("controls")
    if not isinstance(controls, dict):
        problems.append((("controls",), "controls must be a mapping"))
    else:
        for key in controls:
            if key not in RUN_DEFAULTS["controls"]:
                problems.append((("controls", key), f"unknown controls key {key!r}"))
            elif not isinstance(controls[key], bool):
                problems.append((("controls", key), f"{key} must be true or false"))
        if n is not None:
            if controls.get("gue") and n < 2:
                problems.append((("controls", "gue"), f"GUE control needs n >= 2, got n = {n}"))
            if controls.get("bilaplacian") and n < 2:
                problems.append((("controls", "bilaplacian"), f"bi-Laplacian control needs n >= 2, got n = {n}"))
            if controls.get("ks") and n < 50:
                problems.append((("controls", "ks"), f"spacing statistics need n >= 50, got n = {n}"))
    if n is not None and kind in ("gue", "bilaplacian") and n < 2:
        problems.append((("n",), f"{kind} model needs n >= 2, got n = {n}"))


def parse_config(text: str, source: str = "<config>") -> Config:
    """Parse and validate config text. Raises :class:`ConfigError` listing every problem."""
    data, lines = _parse(text, source)

    def where(path):
        p = tuple(path)
        while p and p not in lines:
            p = p[:-1]
        return f"{source}:{lines.get(p, 1)}"

    if not isinstance(data, dict) or not isinstance(data.get("runs"), list) or not data["runs"]:
        raise ConfigError([f"{where(('runs',))}: config must be a mapping with a non-empty 'runs' list"])
    problems = []
    for key in data:
        if key not in ("runs", "defaults"):
            problems.append(f"{where((key,))}: unknown top-level key {key!r}")
    defaults = data.get("defaults", {}) or {}
    if not isinstance(defaults, dict):
        problems.append(f"{where(('defaults',))}: defaults must be a mapping")
        defaults = {}
    base = _merge(RUN_DEFAULTS, defaults)

    runs, seen = [], {}
    for i, raw in enumerate(data["runs"]):
        prefix = ("runs", i)
        if not isinstance(raw, dict):
            problems.append(f"{where(prefix)}: runs[{i}] must be a mapping")
            continue
        run = _merge(base, raw)
        run_id = run.get("id", f"run-{i:03d}")
        if not isinstance(run_id, str) or not run_id or "/" in run_id or run_id.startswith("."):
            problems.append(f"{where(prefix + ('id',))}: runs[{i}].id must be a plain non-empty name")
        elif run_id in seen:
            problems.append(f"{where(prefix + ('id',))}: runs[{i}].id {run_id!r} duplicates runs[{seen[run_id]}]")
        else:
            seen[run_id] = i
        run["id"] = run_id
        local = []
        _check_run(run, local)
        for path, message in local:
            full = prefix + path
            # defaults-level values have no line under the run; point at the defaults entry
            if full not in lines and ("defaults",) + path in lines:
                loc = where(("defaults",) + path)
            else:
                loc = where(full)
            problems.append(f"{loc}: runs[{i}] ({run_id}).{_fmt_path(path)}: {message}")
        runs.append(run)
    if problems:
        raise ConfigError(problems)
    return Config(runs, source, lines)


def load_config(path) -> Config:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError([f"{path}: cannot read config: {exc.strerror or exc}"]) from None
    return parse_config(text, str(path))


def dump_config(data: dict) -> str:
    return yaml.safe_dump(data, sort_keys=False, default_flow_style=None)
