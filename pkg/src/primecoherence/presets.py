"""Built-in sweep configurations for the standard studies."""

from __future__ import annotations

PRIME_MODELS = (
    {"kind": "log-product"},
    {"kind": "log-ratio-squared"},
    {"kind": "entropic"},
    {"kind": "index-power", "gamma": 2.0},
)

WIDE_GRID = {"t_min": 1e-10, "t_max": 1e4, "count": 300}


def _slug(model: dict) -> str:
    return model["kind"] if "gamma" not in model else f"{model['kind']}-g{model['gamma']:g}"


def model_comparison(n: int = 500) -> dict:
    runs = [{"id": f"cmp-{_slug(m)}", "model": dict(m), "n": n} for m in PRIME_MODELS]
    runs.append({"id": "cmp-gue", "model": {"kind": "gue"}, "n": n, "seed": 0,
                 "controls": {"gue": True}})
    return {"defaults": {"delta0": 1.0, "fits": {"pcp": False}}, "runs": runs}


def entropic_profile(n: int = 2000) -> dict:
    return {"runs": [{"id": "profile-entropic", "model": {"kind": "entropic"}, "n": n, "delta0": 1.0,
                      "fits": {"alpha": True, "beta": True, "pcp": True}}]}


def controls(n: int = 500) -> dict:
    return {"defaults": {"delta0": 1.0, "fits": {"beta": False, "pcp": False}}, "runs": [
        {"id": "ctl-prime-log-ratio-squared", "model": {"kind": "log-ratio-squared"}, "n": n},
        {"id": "ctl-bilaplacian", "model": {"kind": "bilaplacian"}, "n": n, "normalization": "combinatorial"},
        {"id": "ctl-gue", "model": {"kind": "gue"}, "n": n, "seed": 0},
    ]}


def small_kernels() -> dict:
    return {"defaults": {"delta0": 1.0, "emit_kernel": True, "fits": {"pcp": False, "beta": False}}, "runs": [
        {"id": "small-log-ratio-squared", "model": {"kind": "log-ratio-squared"}, "n": 20},
        {"id": "small-entropic", "model": {"kind": "entropic"}, "n": 20},
    ]}


def combinatorial_plateau(sizes=(500, 1000, 2000)) -> dict:
    runs = [{"id": f"plateau-combinatorial-{n}", "model": {"kind": "index-power", "gamma": 2.0}, "n": n}
            for n in sizes]
    runs.append({"id": f"plateau-bilaplacian-{max(sizes)}", "model": {"kind": "bilaplacian"}, "n": max(sizes),
                 "controls": {"bilaplacian": True}})
    return {"defaults": {"delta0": 1.0, "normalization": "combinatorial", "order": "four", "grid": dict(WIDE_GRID),
                         "fits": {"beta": False, "pcp": False}}, "runs": runs}


PRESETS = {
    "model-comparison": model_comparison,
    "entropic-profile": entropic_profile,
    "controls": controls,
    "small-kernels": small_kernels,
    "combinatorial-plateau": combinatorial_plateau,
}


def preset(name: str) -> dict:
    return PRESETS[name]()
