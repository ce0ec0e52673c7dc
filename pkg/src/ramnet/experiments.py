"""Topology comparison experiments: build families, measure, compare to a baseline.

An experiment pits one baseline topology (typically an LPS graph) against
competitor families at matched size and degree, optionally sweeping one
parameter (network size ``n``, rewiring probability ``p_w``, or
``swap_count``).  Per family and sweep point it reports best/mean/worst
envelopes over seeds for each requested metric and three summary ratios
against the baseline:

    nu  = gamma_baseline / gamma_X      (eigenvalue ratio advantage)
    eta = lambda2_baseline / lambda2_X  (algebraic connectivity advantage)
    psi = s_c_baseline / s_c_X          (detection convergence speed advantage)

Seeds are derived from one master seed through numpy's SeedSequence with
the path (point index, family index, draw index, retry index), so runs are
reproducible and the runner can be cancelled between seeds without
corrupting anything already computed.  Disconnected random draws are
rejected and resampled with a recorded rejection count.

Specs live in TOML files; see :func:`parse_experiment_spec` for the schema.
Results serialize to a directory as ``result.json`` (round-trippable),
per-metric CSV tables, and gnuplot-ready column files under ``plots/``.
"""

from __future__ import annotations

import json
import os
import sys
from dataclasses import asdict, dataclass, replace
from typing import Any, NamedTuple

import numpy as np

from .detection import DetectionModel, detection_convergence_time
from .generators import GeneratorParams, build_graph
from .graph import Graph
from .spectral import spectral_summary

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

__all__ = [
    "SCHEMA_VERSION",
    "METRICS",
    "DetectionSettings",
    "CompetitorSpec",
    "SweepSpec",
    "ExperimentSpec",
    "Envelope",
    "FamilyResult",
    "PointResult",
    "ExperimentResult",
    "derive_seed",
    "parse_experiment_spec",
    "run_experiment",
    "serialize_result",
    "load_result",
]

SCHEMA_VERSION = 1

METRICS = ("gamma", "gamma2", "lambda2", "s_c")
_MINIMIZED = {"gamma2"}  # smaller contraction factor is better
_SWEEPABLE = ("n", "p_w", "swap_count")
_MAX_CONNECT_RETRIES = 1000


@dataclass(frozen=True)
class DetectionSettings:
    """Model behind the s_c metric (noiseless channels; threshold 0)."""

    mu: float = 1.0
    sigma2: float = 1.0
    rel_margin: float = 0.1
    max_iterations: int = 10_000


@dataclass(frozen=True)
class CompetitorSpec:
    params: GeneratorParams
    n_seeds: int = 1

    def __post_init__(self) -> None:
        if self.n_seeds < 1:
            raise ValueError(f"n_seeds must be at least 1, got {self.n_seeds}")


@dataclass(frozen=True)
class SweepSpec:
    parameter: str
    values: tuple

    def __post_init__(self) -> None:
        if self.parameter not in _SWEEPABLE:
            raise ValueError(f"sweep parameter must be one of {_SWEEPABLE}, got {self.parameter!r}")
        if len(self.values) == 0:
            raise ValueError("sweep needs at least one value")
        if any(b <= a for a, b in zip(self.values, self.values[1:])):
            raise ValueError(f"sweep values must be strictly increasing, got {self.values}")


@dataclass(frozen=True)
class ExperimentSpec:
    baseline: GeneratorParams
    competitors: tuple[CompetitorSpec, ...]
    metrics: tuple[str, ...] = ("gamma",)
    master_seed: int = 0
    sweep: SweepSpec | None = None
    detection: DetectionSettings | None = None

    def __post_init__(self) -> None:
        for m in self.metrics:
            if m not in METRICS:
                raise ValueError(f"unknown metric {m!r}, expected one of {METRICS}")
        if not self.metrics:
            raise ValueError("at least one metric is required")


class Envelope(NamedTuple):
    """Best/mean/worst of one metric over the seeds of one family."""

    best: float
    mean: float
    worst: float


@dataclass(frozen=True)
class FamilyResult:
    label: str
    family: str
    params: GeneratorParams
    n_seeds: int
    n_rejected: int
    metrics: dict[str, Envelope]
    ratios: dict[str, float]

    def __post_init__(self) -> None:  # dicts break dataclass hashing; freeze semantics only
        pass


@dataclass(frozen=True)
class PointResult:
    sweep_value: float | int | None
    families: tuple[FamilyResult, ...]  # baseline first


@dataclass(frozen=True)
class ExperimentResult:
    schema_version: int
    master_seed: int
    metrics: tuple[str, ...]
    sweep_parameter: str | None
    points: tuple[PointResult, ...]


def derive_seed(master_seed: int, *path: int) -> int:
    """Deterministic 64-bit child seed for a draw path under one master seed."""
    state = np.random.SeedSequence([master_seed, *path]).generate_state(1, np.uint64)
    return int(state[0])


# -- spec resolution ----------------------------------------------------------


def _apply_sweep(params: GeneratorParams, parameter: str, value) -> GeneratorParams:
    f = params.family
    if parameter == "n":
        n = int(value)
        if f == "lps1":
            raise ValueError("cannot sweep n for lps1; its size is fixed by q")
        if f == "lps2":
            return replace(params, q=n - 1)
        return replace(params, n=n)
    if parameter == "p_w":
        return replace(params, p_w=float(value)) if f == "ws1" else params
    return replace(params, swap_count=int(value)) if f == "r3l" else params


def _shape(params: GeneratorParams) -> tuple[int, int]:
    """(n_vertices, degree) the resolved parameters will produce."""
    if params.family == "lps2":
        return params.q + 1, params.p + 1
    if params.family == "lps1":
        q = params.q
        return q * (q * q - 1) // 2, params.p + 1
    return params.n, params.k


def _is_stochastic(family: str) -> bool:
    return family in ("ws1", "er", "r3l")


def _build_connected(
    params: GeneratorParams, master_seed: int, path: tuple[int, ...]
) -> tuple[Graph, int]:
    """Build one connected instance, resampling disconnected random draws."""
    if not _is_stochastic(params.family):
        g = build_graph(params)
        if not g.is_connected():
            raise RuntimeError(f"deterministic family {params.family!r} built a disconnected graph")
        return g, 0
    for retry in range(_MAX_CONNECT_RETRIES):
        g = build_graph(params.with_seed(derive_seed(master_seed, *path, retry)))
        if g.is_connected():
            return g, retry
    raise RuntimeError(
        f"no connected {params.family!r} draw in {_MAX_CONNECT_RETRIES} attempts for {params}"
    )


def _measure(g: Graph, metrics: tuple[str, ...], detection: DetectionSettings) -> dict[str, float]:
    out = {}
    summary = spectral_summary(g)
    for m in metrics:
        if m == "gamma":
            out[m] = summary.gamma
        elif m == "gamma2":
            out[m] = summary.gamma2
        elif m == "lambda2":
            out[m] = summary.lambda2
        else:  # s_c
            model = DetectionModel(mu=detection.mu, sigma2=detection.sigma2, n_sensors=g.n_vertices)
            t = detection_convergence_time(
                g, model, rel_margin=detection.rel_margin, max_iterations=detection.max_iterations
            )
            out[m] = 0.0 if t is None else 1.0 / max(t, 1)
    return out


def _envelope(metric: str, values: list[float]) -> Envelope:
    arr = np.asarray(values, dtype=np.float64)
    if metric in _MINIMIZED:
        return Envelope(best=float(arr.min()), mean=float(arr.mean()), worst=float(arr.max()))
    return Envelope(best=float(arr.max()), mean=float(arr.mean()), worst=float(arr.min()))


_RATIO_OF = {"nu": "gamma", "eta": "lambda2", "psi": "s_c"}


def _ratios(metrics: tuple[str, ...], base: dict[str, Envelope], own: dict[str, Envelope]) -> dict[str, float]:
    out = {}
    for ratio, metric in _RATIO_OF.items():
        if metric in metrics and own[metric].mean != 0.0:
            out[ratio] = base[metric].mean / own[metric].mean
    return out


def run_experiment(spec: ExperimentSpec) -> ExperimentResult:
    """Execute the full sweep x family x seed grid of one experiment."""
    detection = spec.detection if spec.detection is not None else DetectionSettings()
    sweep_values: tuple = spec.sweep.values if spec.sweep is not None else (None,)
    points = []
    for p_idx, sv in enumerate(sweep_values):
        resolved = [spec.baseline] + [c.params for c in spec.competitors]
        if spec.sweep is not None:
            resolved = [_apply_sweep(par, spec.sweep.parameter, sv) for par in resolved]
        shapes = [_shape(par) for par in resolved]
        if len(set(shapes)) > 1:
            raise ValueError(
                f"families are not size/degree matched at sweep point {sv!r}: "
                + ", ".join(f"{par.family}->{sh}" for par, sh in zip(resolved, shapes))
            )

        seed_counts = [1] + [c.n_seeds for c in spec.competitors]
        families = []
        for f_idx, (params, n_seeds) in enumerate(zip(resolved, seed_counts)):
            per_metric: dict[str, list[float]] = {m: [] for m in spec.metrics}
            rejected = 0
            for s_idx in range(n_seeds):
                g, rej = _build_connected(params, spec.master_seed, (p_idx, f_idx, s_idx))
                rejected += rej
                for m, val in _measure(g, spec.metrics, detection).items():
                    per_metric[m].append(val)
            label = f"{params.family}:baseline" if f_idx == 0 else f"{params.family}:{f_idx}"
            families.append(
                FamilyResult(
                    label=label,
                    family=params.family,
                    params=params,
                    n_seeds=n_seeds,
                    n_rejected=rejected,
                    metrics={m: _envelope(m, vals) for m, vals in per_metric.items()},
                    ratios={},
                )
            )
        base_metrics = families[0].metrics
        families = [
            replace(fam, ratios=_ratios(spec.metrics, base_metrics, fam.metrics))
            for fam in families
        ]
        points.append(PointResult(sweep_value=sv, families=tuple(families)))
    return ExperimentResult(
        schema_version=SCHEMA_VERSION,
        master_seed=spec.master_seed,
        metrics=spec.metrics,
        sweep_parameter=spec.sweep.parameter if spec.sweep is not None else None,
        points=tuple(points),
    )


# -- TOML spec files ----------------------------------------------------------

_PARAM_KEYS = ("family", "n", "k", "p_w", "p", "q", "swap_count")


def _params_from_table(table: dict, where: str) -> GeneratorParams:
    if "family" not in table:
        raise ValueError(f"{where}: missing required key 'family'")
    extra = set(table) - set(_PARAM_KEYS)
    if extra:
        raise ValueError(f"{where}: unknown keys {sorted(extra)}")
    return GeneratorParams(**{k: table[k] for k in _PARAM_KEYS if k in table})


def parse_experiment_spec(path: str) -> ExperimentSpec:
    """Read an experiment spec from a TOML document.

    Schema (see the package README for a worked example)::

        master_seed = 7                   # optional, default 0
        metrics = ["gamma", "s_c"]        # subset of gamma, gamma2, lambda2, s_c

        [baseline]                        # required; generator parameters
        family = "lps2"                   # rrl | ws1 | er | lps1 | lps2 | r3l
        p = 5
        q = 41

        [[competitors]]                   # one table per competitor family
        family = "rrl"
        n = 42
        k = 6
        n_seeds = 1                       # optional, default 1

        [sweep]                           # optional
        parameter = "n"                   # n | p_w | swap_count
        values = [42, 62, 102]            # strictly increasing

        [detection]                       # optional; s_c metric settings
        mu = 1.0
        sigma2 = 1.0
        rel_margin = 0.1
        max_iterations = 10000
    """
    with open(path, "rb") as fh:
        doc = tomllib.load(fh)
    known = {"master_seed", "metrics", "baseline", "competitors", "sweep", "detection"}
    extra = set(doc) - known
    if extra:
        raise ValueError(f"{path}: unknown top-level keys {sorted(extra)}")
    if "baseline" not in doc:
        raise ValueError(f"{path}: missing required [baseline] table")

    baseline = _params_from_table(doc["baseline"], f"{path}: [baseline]")
    competitors = []
    for i, tab in enumerate(doc.get("competitors", [])):
        where = f"{path}: [[competitors]] #{i + 1}"
        n_seeds = tab.pop("n_seeds", 1)
        competitors.append(CompetitorSpec(params=_params_from_table(tab, where), n_seeds=n_seeds))

    sweep = None
    if "sweep" in doc:
        tab = doc["sweep"]
        extra = set(tab) - {"parameter", "values"}
        if extra:
            raise ValueError(f"{path}: [sweep] unknown keys {sorted(extra)}")
        sweep = SweepSpec(parameter=tab.get("parameter", ""), values=tuple(tab.get("values", ())))

    detection = None
    if "detection" in doc:
        tab = doc["detection"]
        extra = set(tab) - {"mu", "sigma2", "rel_margin", "max_iterations"}
        if extra:
            raise ValueError(f"{path}: [detection] unknown keys {sorted(extra)}")
        detection = DetectionSettings(**tab)

    return ExperimentSpec(
        baseline=baseline,
        competitors=tuple(competitors),
        metrics=tuple(doc.get("metrics", ("gamma",))),
        master_seed=doc.get("master_seed", 0),
        sweep=sweep,
        detection=detection,
    )


# -- result serialization -----------------------------------------------------


def _params_to_dict(params: GeneratorParams) -> dict:
    return {k: v for k, v in asdict(params).items() if v is not None and k != "seed"}


def _result_to_dict(result: ExperimentResult) -> dict:
    return {
        "schema_version": result.schema_version,
        "master_seed": result.master_seed,
        "metrics": list(result.metrics),
        "sweep_parameter": result.sweep_parameter,
        "points": [
            {
                "sweep_value": pt.sweep_value,
                "families": [
                    {
                        "label": fam.label,
                        "family": fam.family,
                        "params": _params_to_dict(fam.params),
                        "n_seeds": fam.n_seeds,
                        "n_rejected": fam.n_rejected,
                        "metrics": {m: env._asdict() for m, env in fam.metrics.items()},
                        "ratios": dict(fam.ratios),
                    }
                    for fam in pt.families
                ],
            }
            for pt in result.points
        ],
    }


def serialize_result(result: ExperimentResult, out_dir: str) -> None:
    """Write result.json, per-metric CSVs, and gnuplot data columns.

    Output is byte-deterministic for a given result: keys are sorted,
    floats use repr round-tripping, rows follow the result order.
    """
    os.makedirs(os.path.join(out_dir, "plots"), exist_ok=True)
    with open(os.path.join(out_dir, "result.json"), "w", encoding="utf-8", newline="\n") as fh:
        json.dump(_result_to_dict(result), fh, indent=2, sort_keys=True)
        fh.write("\n")

    def fmt_sv(sv) -> str:
        return "" if sv is None else repr(sv)

    for metric in result.metrics:
        rows = ["sweep_value,family,envelope,value\n"]
        for pt in result.points:
            for fam in pt.families:
                env = fam.metrics[metric]
                for name, value in zip(("best", "mean", "worst"), env):
                    rows.append(f"{fmt_sv(pt.sweep_value)},{fam.label},{name},{value!r}\n")
        with open(
            os.path.join(out_dir, f"metric_{metric}.csv"), "w", encoding="utf-8", newline="\n"
        ) as fh:
            fh.writelines(rows)

    labels = [fam.label for fam in result.points[0].families] if result.points else []
    for metric in result.metrics:
        for label in labels:
            stem = f"{metric}_{label.replace(':', '_')}.dat"
            lines = [f"# {result.sweep_parameter or 'index'} best mean worst\n"]
            for idx, pt in enumerate(result.points):
                fam = next(f for f in pt.families if f.label == label)
                env = fam.metrics[metric]
                x = idx if pt.sweep_value is None else pt.sweep_value
                lines.append(f"{x!r} {env.best!r} {env.mean!r} {env.worst!r}\n")
            with open(os.path.join(out_dir, "plots", stem), "w", encoding="utf-8", newline="\n") as fh:
                fh.writelines(lines)


def load_result(out_dir: str) -> ExperimentResult:
    """Rebuild an :class:`ExperimentResult` from a serialized directory."""
    with open(os.path.join(out_dir, "result.json"), "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise ValueError(
            f"unsupported schema_version {doc.get('schema_version')!r}, expected {SCHEMA_VERSION}"
        )
    points = []
    for pt in doc["points"]:
        families = []
        for fam in pt["families"]:
            families.append(
                FamilyResult(
                    label=fam["label"],
                    family=fam["family"],
                    params=GeneratorParams(**fam["params"]),
                    n_seeds=fam["n_seeds"],
                    n_rejected=fam["n_rejected"],
                    metrics={m: Envelope(**env) for m, env in fam["metrics"].items()},
                    ratios=dict(fam["ratios"]),
                )
            )
        points.append(PointResult(sweep_value=pt["sweep_value"], families=tuple(families)))
    return ExperimentResult(
        schema_version=doc["schema_version"],
        master_seed=doc["master_seed"],
        metrics=tuple(doc["metrics"]),
        sweep_parameter=doc["sweep_parameter"],
        points=tuple(points),
    )
