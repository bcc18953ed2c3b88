"""Experiment configuration: INI parsing, validation, serialization.

One [experiment] section carries the run-level fields; per-estimator
sections ([dcca], [hxa], [ccf]) and [simulation]/[theory] carry the
remaining knobs.  A custom model uses ``model = inline`` together with
four [component.*] sections and an optional [covariance] section;
otherwise ``model`` names a preset.  parse_config(serialize_config(cfg))
reproduces cfg field by field.
"""

from __future__ import annotations

import configparser
import io
from dataclasses import dataclass
from typing import Mapping

from .errors import ConfigError
from .filters import AR1, FRACTIONAL, WHITE
from .innovations import N_STREAMS, CovarianceSpec
from .models import (
    DEFAULT_CCF_TRUNCATION,
    DEFAULT_EXPONENT_TRUNCATION,
    PRESETS,
    ComponentSpec,
    ModelSpec,
)

ESTIMATOR_NAMES = ("dfa", "dcca", "hxa", "ccf")
INLINE = "inline"
MIN_T = 100

_COMPONENT_SECTIONS = (
    ("component.x1", 1),
    ("component.x2", 2),
    ("component.y1", 3),
    ("component.y2", 4),
)
_KNOWN_SECTIONS = {
    "experiment",
    "simulation",
    "theory",
    "dfa",
    "dcca",
    "hxa",
    "ccf",
    "covariance",
} | {name for name, _ in _COMPONENT_SECTIONS}


@dataclass(frozen=True)
class ExperimentConfig:
    """Fully resolved run description; every field is concrete."""

    model_name: str
    model: ModelSpec
    T: int
    replications: int
    base_seed: int
    estimators: tuple[str, ...]
    dfa_s_min: int
    dfa_s_max: int
    dfa_step: int
    dcca_s_min: int
    dcca_s_max: int
    dcca_step: int
    detrend_order: int
    hxa_tau_min: int
    hxa_tau_max: int
    ccf_max_lag: int
    sim_truncation: int
    ccf_truncation: int
    output_dir: str

    def seeds(self) -> list[int]:
        """Replication seed schedule: base_seed, base_seed+1, ..."""
        return [self.base_seed + r for r in range(self.replications)]


class _Reader:
    """Typed configparser access that reports section.key on bad values."""

    def __init__(self, parser: configparser.ConfigParser):
        self.parser = parser

    def has(self, section: str, key: str) -> bool:
        return self.parser.has_option(section, key)

    def raw(self, section: str, key: str) -> str:
        return self.parser.get(section, key)

    def _typed(self, section, key, default, required, cast, what):
        if not self.has(section, key):
            if required:
                raise ConfigError(f"[{section}] missing required key {key!r}")
            return default
        text = self.parser.get(section, key).strip()
        try:
            return cast(text)
        except ValueError:
            raise ConfigError(f"[{section}] {key}: expected {what}, got {text!r}") from None

    def integer(self, section, key, default=None, required=False):
        return self._typed(section, key, default, required, int, "an integer")

    def real(self, section, key, default=None, required=False):
        return self._typed(section, key, default, required, float, "a number")

    def text(self, section, key, default=None, required=False):
        return self._typed(section, key, default, required, str, "a string")


def _parse_model(reader: _Reader, model_name: str) -> ModelSpec:
    if model_name in PRESETS:
        return PRESETS[model_name]()
    if model_name != INLINE:
        raise ConfigError(
            f"[experiment] model: unknown name {model_name!r}; "
            f"use one of {', '.join(sorted(PRESETS))} or {INLINE!r}"
        )
    comps = []
    for section, slot in _COMPONENT_SECTIONS:
        if not reader.parser.has_section(section):
            raise ConfigError(f"inline model needs a [{section}] section")
        kind = reader.text(section, "kind", required=True).strip().lower()
        if kind not in (FRACTIONAL, AR1, WHITE):
            raise ConfigError(
                f"[{section}] kind: expected one of {FRACTIONAL}/{AR1}/{WHITE}, got {kind!r}"
            )
        weight = reader.real(section, "weight", required=True)
        if kind == WHITE:
            param = 0.0
        else:
            param = reader.real(section, "param", required=True)
        try:
            comps.append(ComponentSpec(kind=kind, weight=weight, slot=slot, param=param))
        except ValueError as e:
            raise ConfigError(f"[{section}]: {e}") from None

    variances = [1.0, 1.0, 1.0, 1.0]
    covariances = {}
    if reader.parser.has_section("covariance"):
        for key in reader.parser.options("covariance"):
            if key.startswith("var_"):
                try:
                    i = int(key[4:])
                except ValueError:
                    i = -1
                if not 1 <= i <= N_STREAMS:
                    raise ConfigError(f"[covariance] unknown key {key!r}")
                variances[i - 1] = reader.real("covariance", key, required=True)
            elif key.startswith("sigma_") and len(key) == 8:
                try:
                    i, j = int(key[6]), int(key[7])
                except ValueError:
                    raise ConfigError(f"[covariance] unknown key {key!r}") from None
                if not 1 <= i < j <= N_STREAMS:
                    raise ConfigError(
                        f"[covariance] {key}: stream indices must satisfy 1 <= i < j <= 4"
                    )
                covariances[(i, j)] = reader.real("covariance", key, required=True)
            else:
                raise ConfigError(f"[covariance] unknown key {key!r}")
    try:
        cov = CovarianceSpec(variances=tuple(variances), covariances=covariances)
        return ModelSpec(
            x_components=(comps[0], comps[1]), y_components=(comps[2], comps[3]), covariance=cov
        )
    except ValueError as e:
        raise ConfigError(str(e)) from None


def parse_config(
    text: str, overrides: Mapping[tuple[str, str], str] | None = None
) -> ExperimentConfig:
    """Build a validated ExperimentConfig from INI text.

    ``overrides`` maps (section, key) to replacement raw values and is
    applied after parsing, before validation; the CLI uses it for flag
    precedence.  All problems raise ConfigError naming the section and
    key.
    """
    parser = configparser.ConfigParser(interpolation=None)
    try:
        parser.read_string(text)
    except configparser.Error as e:
        raise ConfigError(f"malformed config: {e}") from None
    for section in parser.sections():
        if section not in _KNOWN_SECTIONS:
            raise ConfigError(
                f"unknown section [{section}]; known sections: "
                + ", ".join(sorted(_KNOWN_SECTIONS))
            )
    if overrides:
        for (section, key), value in overrides.items():
            if not parser.has_section(section):
                parser.add_section(section)
            parser.set(section, key, value)
    if not parser.has_section("experiment"):
        raise ConfigError("missing [experiment] section")

    r = _Reader(parser)
    model_name = r.text("experiment", "model", default="model1").strip().lower()
    model = _parse_model(r, model_name)

    T = r.integer("experiment", "t", default=10_000)
    replications = r.integer("experiment", "replications", default=100)
    base_seed = r.integer("experiment", "base_seed", default=42)
    output_dir = r.text("experiment", "output_dir", default="out").strip()

    est_text = r.text("experiment", "estimators", default="dfa, dcca, hxa")
    requested = [e.strip().lower() for e in est_text.split(",") if e.strip()]
    unknown = [e for e in requested if e not in ESTIMATOR_NAMES]
    if unknown:
        raise ConfigError(
            f"[experiment] estimators: unknown name(s) {unknown}; "
            f"choose from {', '.join(ESTIMATOR_NAMES)}"
        )
    if not requested:
        raise ConfigError("[experiment] estimators: at least one estimator is required")
    estimators = tuple(e for e in ESTIMATOR_NAMES if e in requested)

    # DFA fits only scales with >= 20 boxes by default; larger boxes sit in
    # the finite-size saturation regime and drag the slope down.
    dfa_s_min = r.integer("dfa", "s_min", default=10)
    dfa_step = r.integer("dfa", "step", default=10)
    dfa_s_max = r.integer("dfa", "s_max", default=max(T // 20, dfa_s_min + 3 * dfa_step))

    cfg = ExperimentConfig(
        model_name=model_name,
        model=model,
        T=T,
        replications=replications,
        base_seed=base_seed,
        estimators=estimators,
        dfa_s_min=dfa_s_min,
        dfa_s_max=dfa_s_max,
        dfa_step=dfa_step,
        dcca_s_min=r.integer("dcca", "s_min", default=10),
        dcca_s_max=r.integer("dcca", "s_max", default=max(T // 5, 1)),
        dcca_step=r.integer("dcca", "step", default=10),
        detrend_order=r.integer("dcca", "detrend_order", default=1),
        # scale-dependent defaults stay valid down to T = MIN_T
        hxa_tau_min=r.integer("hxa", "tau_min", default=1),
        hxa_tau_max=r.integer("hxa", "tau_max", default=min(100, T // 10)),
        ccf_max_lag=r.integer("ccf", "max_lag", default=min(100, (T - 1) // 2)),
        sim_truncation=r.integer(
            "simulation", "truncation", default=max(T, DEFAULT_EXPONENT_TRUNCATION)
        ),
        ccf_truncation=r.integer("theory", "ccf_truncation", default=DEFAULT_CCF_TRUNCATION),
        output_dir=output_dir,
    )
    validate_config(cfg)
    return cfg


def validate_config(cfg: ExperimentConfig) -> None:
    """Check run-level invariants and every estimator's preconditions."""

    def bad(field, message):
        raise ConfigError(f"{field}: {message}")

    if cfg.T < MIN_T:
        bad("T", f"must be >= {MIN_T}, got {cfg.T}")
    if cfg.replications < 1:
        bad("replications", f"must be >= 1, got {cfg.replications}")
    if cfg.base_seed < 0:
        bad("base_seed", f"must be >= 0, got {cfg.base_seed}")
    if not cfg.estimators:
        bad("estimators", "at least one estimator is required")
    if cfg.detrend_order < 0:
        bad("dcca.detrend_order", f"must be >= 0, got {cfg.detrend_order}")
    if cfg.dfa_s_min < cfg.detrend_order + 2:
        bad(
            "dfa.s_min",
            f"must be >= detrend_order + 2 = {cfg.detrend_order + 2}, got {cfg.dfa_s_min}",
        )
    if cfg.dfa_s_max > cfg.T // 2:
        bad("dfa.s_max", f"must be <= T/2 = {cfg.T // 2}, got {cfg.dfa_s_max}")
    if cfg.dfa_s_max < cfg.dfa_s_min:
        bad("dfa.s_max", f"scale range [{cfg.dfa_s_min}, {cfg.dfa_s_max}] is empty")
    if cfg.dfa_step < 1:
        bad("dfa.step", f"must be >= 1, got {cfg.dfa_step}")
    if cfg.dcca_s_min < cfg.detrend_order + 2:
        bad(
            "dcca.s_min",
            f"must be >= detrend_order + 2 = {cfg.detrend_order + 2}, got {cfg.dcca_s_min}",
        )
    if cfg.dcca_s_max > cfg.T // 2:
        bad("dcca.s_max", f"must be <= T/2 = {cfg.T // 2}, got {cfg.dcca_s_max}")
    if cfg.dcca_s_max < cfg.dcca_s_min:
        bad("dcca.s_max", f"scale range [{cfg.dcca_s_min}, {cfg.dcca_s_max}] is empty")
    if cfg.dcca_step < 1:
        bad("dcca.step", f"must be >= 1, got {cfg.dcca_step}")
    if not 1 <= cfg.hxa_tau_min < cfg.hxa_tau_max:
        bad("hxa.tau_min", f"need 1 <= tau_min < tau_max, got [{cfg.hxa_tau_min}, {cfg.hxa_tau_max}]")
    if cfg.hxa_tau_max > cfg.T // 10:
        bad("hxa.tau_max", f"must be <= T/10 = {cfg.T // 10}, got {cfg.hxa_tau_max}")
    if cfg.ccf_max_lag < 0:
        bad("ccf.max_lag", f"must be >= 0, got {cfg.ccf_max_lag}")
    if "ccf" in cfg.estimators and cfg.T <= 2 * cfg.ccf_max_lag:
        bad("ccf.max_lag", f"need T > 2*max_lag, got T={cfg.T}, max_lag={cfg.ccf_max_lag}")
    if cfg.sim_truncation < 0:
        bad("simulation.truncation", f"must be >= 0, got {cfg.sim_truncation}")
    if cfg.ccf_truncation < cfg.ccf_max_lag + 100:
        bad(
            "theory.ccf_truncation",
            f"must be >= ccf.max_lag + 100 = {cfg.ccf_max_lag + 100}, got {cfg.ccf_truncation}",
        )
    if not cfg.output_dir:
        bad("output_dir", "must be non-empty")


def default_config(model_name: str = "model1", **overrides: str) -> ExperimentConfig:
    """Config with all defaults for a named preset; kwargs patch [experiment] keys."""
    text = f"[experiment]\nmodel = {model_name}\n"
    return parse_config(text, overrides={("experiment", k): v for k, v in overrides.items()})


def serialize_config(cfg: ExperimentConfig) -> str:
    """Render a config back to INI text; inverse of parse_config."""
    parser = configparser.ConfigParser(interpolation=None)
    parser["experiment"] = {
        "model": cfg.model_name,
        "t": str(cfg.T),
        "replications": str(cfg.replications),
        "base_seed": str(cfg.base_seed),
        "estimators": ", ".join(cfg.estimators),
        "output_dir": cfg.output_dir,
    }
    parser["simulation"] = {"truncation": str(cfg.sim_truncation)}
    parser["theory"] = {"ccf_truncation": str(cfg.ccf_truncation)}
    parser["dfa"] = {
        "s_min": str(cfg.dfa_s_min),
        "s_max": str(cfg.dfa_s_max),
        "step": str(cfg.dfa_step),
    }
    parser["dcca"] = {
        "s_min": str(cfg.dcca_s_min),
        "s_max": str(cfg.dcca_s_max),
        "step": str(cfg.dcca_step),
        "detrend_order": str(cfg.detrend_order),
    }
    parser["hxa"] = {"tau_min": str(cfg.hxa_tau_min), "tau_max": str(cfg.hxa_tau_max)}
    parser["ccf"] = {"max_lag": str(cfg.ccf_max_lag)}

    if cfg.model_name == INLINE:
        for (section, slot), comp in zip(_COMPONENT_SECTIONS, cfg.model.components):
            body = {"kind": comp.kind, "weight": repr(comp.weight)}
            if comp.kind != WHITE:
                body["param"] = repr(comp.param)
            parser[section] = body
        cov = cfg.model.covariance
        body = {f"var_{i + 1}": repr(v) for i, v in enumerate(cov.variances)}
        for (i, j), s in sorted(cov.covariances.items()):
            body[f"sigma_{i}{j}"] = repr(s)
        parser["covariance"] = body

    out = io.StringIO()
    parser.write(out)
    return out.getvalue()
