"""Experiment configuration: flat key-value files plus CLI overrides.

The config format is INI-style, one section per concern::

    [plan]
    scheme = s22t           ; s22d/s22t/s23t/s23d/s24d/custom
    band = -25:25
    ; length = 51           ; optional: override the band with a centered one

    [system]                ; only read when scheme = custom
    outputs = 2
    inputs = 2
    response_1_1 = const (1+0j)
    response_1_2 = deriv 1
    ...

    [signals]
    kind = bl51             ; bl51/hardy/custom
    ; coeff_1 = -1:(0.5+0j), 0:(1+0j), 1:(0.5+0j)   ; when kind = custom

    [reconstruct]
    mode = pseudoinverse    ; or explicit (preset schemes only)
    output_counts = 408,408
    truncation = 512

    [noise]
    sigma = 0.05
    seed = 0
    postfilter = 26
    trials = 10

    [output]
    dir = out
    figures = true

Channel responses use a tiny grammar that round-trips through
``format_response`` / ``parse_response``: terms joined by `` + ``, each term
an optional complex weight times an atom, atoms being ``const C``,
``deriv P``, ``shift A`` or ``table n:C,n:C,...`` (complex literals written
without spaces, e.g. ``(1+2j)``).
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field, replace
from pathlib import Path

from .errors import ConfigError
from .plan import SamplingPlan, make_plan
from .presets import SCHEMES, build_scheme, signal_pair
from .reconstruct import Reconstructor, left_inverse
from .spectrum import SpectrumSignal
from .system import (
    ChannelResponse,
    Constant,
    Derivative,
    LinearCombo,
    MimoSystem,
    Tabulated,
    Translation,
    fold_system,
)

__all__ = [
    "ExperimentConfig",
    "ResolvedExperiment",
    "load_config",
    "parse_response",
    "format_response",
]


def _cfmt(c: complex) -> str:
    return repr(complex(c))


def format_response(resp: ChannelResponse) -> str:
    if isinstance(resp, Constant):
        return f"const {_cfmt(resp.gain)}"
    if isinstance(resp, Derivative):
        return f"deriv {resp.order}"
    if isinstance(resp, Translation):
        return f"shift {resp.alpha!r}"
    if isinstance(resp, Tabulated):
        pairs = ",".join(f"{n}:{_cfmt(c)}" for n, c in sorted(resp.values.items()))
        return f"table {pairs}"
    if isinstance(resp, LinearCombo):
        return " + ".join(
            f"{_cfmt(w)}*{format_response(part)}" for w, part in resp.terms
        )
    raise ConfigError(f"cannot serialize response of type {type(resp).__name__}")


def _parse_atom(text: str) -> ChannelResponse:
    kind, _, rest = text.strip().partition(" ")
    rest = rest.strip()
    try:
        if kind == "const":
            return Constant(complex(rest))
        if kind == "deriv":
            return Derivative(int(rest))
        if kind == "shift":
            return Translation(float(rest))
        if kind == "table":
            entries = {}
            for item in rest.split(","):
                n, _, c = item.strip().partition(":")
                entries[int(n)] = complex(c)
            return Tabulated(entries)
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"bad response atom {text!r}: {exc}") from exc
    raise ConfigError(f"unknown response kind {kind!r} in {text!r}")


def parse_response(text: str) -> ChannelResponse:
    parts = [p.strip() for p in text.split(" + ") if p.strip()]
    if not parts:
        raise ConfigError("empty response description")
    if len(parts) == 1 and "*" not in parts[0]:
        return _parse_atom(parts[0])
    terms = []
    for part in parts:
        if "*" in part:
            w_text, _, atom_text = part.partition("*")
            try:
                weight = complex(w_text.strip())
            except ValueError as exc:
                raise ConfigError(f"bad weight {w_text!r} in {part!r}") from exc
        else:
            weight, atom_text = 1 + 0j, part
        terms.append((weight, _parse_atom(atom_text)))
    return LinearCombo(tuple(terms))


def _parse_coeff_list(text: str) -> SpectrumSignal:
    coeffs = {}
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        n, _, c = item.partition(":")
        try:
            coeffs[int(n)] = complex(c)
        except ValueError as exc:
            raise ConfigError(f"bad coefficient entry {item!r}: {exc}") from exc
    return SpectrumSignal(coeffs)


@dataclass(frozen=True)
class ExperimentConfig:
    scheme: str = "s22t"
    lo: int = -25
    hi: int = 25
    length: int | None = None
    alpha: float | None = None
    signals: str = "bl51"
    custom_signals: tuple[SpectrumSignal, ...] | None = None
    custom_outputs: int | None = None
    custom_inputs: int | None = None
    custom_responses: tuple[tuple[ChannelResponse, ...], ...] | None = None
    mode: str = "pseudoinverse"
    output_counts: tuple[int, ...] | None = None
    truncation: int = 512
    sigma: float = 0.05
    seed: int = 0
    postfilter: int | None = None
    trials: int = 10
    out_dir: Path = field(default_factory=lambda: Path("out"))
    figures: bool = True

    def override(self, **kwargs) -> "ExperimentConfig":
        provided = {k: v for k, v in kwargs.items() if v is not None}
        return replace(self, **provided) if provided else self


@dataclass(frozen=True)
class ResolvedExperiment:
    config: ExperimentConfig
    plan: SamplingPlan
    system: MimoSystem
    signals: tuple
    inverse_table: object | None   # n -> matrix, preset schemes only
    alpha: float

    def reconstructor(self) -> Reconstructor:
        folded = fold_system(self.system, self.plan)
        if self.config.mode == "explicit":
            if self.inverse_table is None:
                raise ConfigError(
                    "explicit mode needs a preset scheme with a built-in inverse table"
                )
            return left_inverse(folded, mode="explicit", table=self.inverse_table)
        if self.config.mode != "pseudoinverse":
            raise ConfigError(f"unknown mode {self.config.mode!r}")
        return left_inverse(folded)

    def output_counts(self) -> tuple[int, ...]:
        if self.config.output_counts is not None:
            counts = self.config.output_counts
            if len(counts) != self.plan.inputs:
                raise ConfigError(
                    f"{len(counts)} output counts for {self.plan.inputs} inputs"
                )
            return counts
        return (8 * self.plan.width,) * self.plan.inputs


def resolve(config: ExperimentConfig) -> ResolvedExperiment:
    """Materialize a config into plan, system, signals and inverse table."""
    if config.scheme == "custom":
        if config.custom_responses is None:
            raise ConfigError("scheme = custom requires a [system] section")
        system = MimoSystem(config.custom_responses)
        lo, hi = config.lo, config.hi
        if config.length is not None:
            folds = system.n_outputs // max(system.n_inputs, 1)
            width = max(folds, 1) * config.length
            lo = -((width - 1) // 2)
            hi = lo + width - 1
        plan = make_plan(system.n_outputs, system.n_inputs, lo, hi)
        table, alpha = None, 0.0
    else:
        plan, system, table, alpha = build_scheme(
            config.scheme, config.lo, config.hi,
            alpha=config.alpha, length=config.length,
        )
    if config.signals == "custom":
        if not config.custom_signals:
            raise ConfigError("signals = custom requires coeff_<r> entries")
        signals = config.custom_signals
    else:
        signals = signal_pair(config.signals)
    if len(signals) != plan.inputs:
        raise ConfigError(
            f"{len(signals)} signals provided for {plan.inputs} input channels"
        )
    return ResolvedExperiment(
        config=config,
        plan=plan,
        system=system,
        signals=tuple(signals),
        inverse_table=table,
        alpha=alpha,
    )


def _get(parser, section, key, convert, default):
    if not parser.has_option(section, key):
        return default
    raw = parser.get(section, key)
    try:
        return convert(raw)
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"[{section}] {key} = {raw!r}: {exc}") from exc


def _parse_band(text: str) -> tuple[int, int]:
    lo, _, hi = text.partition(":")
    return int(lo), int(hi)


_BOOL_WORDS = {
    "1": True, "true": True, "yes": True, "on": True,
    "0": False, "false": False, "no": False, "off": False,
}


def _parse_bool(text: str) -> bool:
    try:
        return _BOOL_WORDS[text.strip().lower()]
    except KeyError:
        raise ValueError(f"not a boolean: {text!r}") from None


def load_config(path: str | Path) -> ExperimentConfig:
    """Read an experiment config file; missing keys keep their defaults."""
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    try:
        with open(path, "r", encoding="utf-8") as fh:
            parser.read_file(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except configparser.Error as exc:
        raise ConfigError(f"malformed config {path}: {exc}") from exc

    cfg = ExperimentConfig()
    band = _get(parser, "plan", "band", _parse_band, (cfg.lo, cfg.hi))
    scheme = _get(parser, "plan", "scheme", str, cfg.scheme).strip()
    cfg = replace(
        cfg,
        scheme=scheme,
        lo=band[0],
        hi=band[1],
        length=_get(parser, "plan", "length", int, None),
        alpha=_get(parser, "system", "alpha", float, None),
        signals=_get(parser, "signals", "kind", str, cfg.signals).strip(),
        mode=_get(parser, "reconstruct", "mode", str, cfg.mode).strip(),
        output_counts=_get(
            parser, "reconstruct", "output_counts",
            lambda s: tuple(int(v) for v in s.split(",")), None,
        ),
        truncation=_get(parser, "reconstruct", "truncation", int, cfg.truncation),
        sigma=_get(parser, "noise", "sigma", float, cfg.sigma),
        seed=_get(parser, "noise", "seed", int, cfg.seed),
        postfilter=_get(parser, "noise", "postfilter", int, None),
        trials=_get(parser, "noise", "trials", int, cfg.trials),
        out_dir=_get(parser, "output", "dir", Path, cfg.out_dir),
        figures=_get(parser, "output", "figures", _parse_bool, cfg.figures),
    )

    if scheme == "custom":
        if not parser.has_section("system"):
            raise ConfigError("scheme = custom requires a [system] section")
        outputs = _get(parser, "system", "outputs", int, None)
        inputs = _get(parser, "system", "inputs", int, None)
        if outputs is None or inputs is None:
            raise ConfigError("[system] outputs and inputs are required for custom schemes")
        grid = []
        for m in range(1, outputs + 1):
            row = []
            for r in range(1, inputs + 1):
                key = f"response_{m}_{r}"
                if not parser.has_option("system", key):
                    raise ConfigError(f"[system] missing {key}")
                row.append(parse_response(parser.get("system", key)))
            grid.append(tuple(row))
        cfg = replace(
            cfg,
            custom_outputs=outputs,
            custom_inputs=inputs,
            custom_responses=tuple(grid),
        )

    if cfg.signals == "custom":
        n_inputs = cfg.custom_inputs or (
            SCHEMES[cfg.scheme].n_inputs if cfg.scheme in SCHEMES else None
        )
        if n_inputs is None:
            raise ConfigError("cannot infer the input count for custom signals")
        sigs = []
        for r in range(1, n_inputs + 1):
            key = f"coeff_{r}"
            if not parser.has_option("signals", key):
                raise ConfigError(f"[signals] missing {key}")
            sigs.append(_parse_coeff_list(parser.get("signals", key)))
        cfg = replace(cfg, custom_signals=tuple(sigs))

    if cfg.scheme not in SCHEMES and cfg.scheme != "custom":
        raise ConfigError(
            f"unknown scheme {cfg.scheme!r}; choose from "
            f"{sorted(SCHEMES) + ['custom']}"
        )
    return cfg
