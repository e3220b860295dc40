#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Experiment configuration

INI-style files read with configparser. Every section and key is checked
against SCHEMA, so a misspelt key is an error rather than a silently ignored
setting.
"""

import configparser
import math
from dataclasses import dataclass

from stablestein.errors import ConfigError
from stablestein.stable.params import StableParams

__all__ = [
    "SCHEMA",
    "ExperimentConfig",
    "load_config",
]


def _floats(text):
    return tuple(float(v) for v in str(text).replace(",", " ").split())


def _ints(text):
    return tuple(int(v) for v in str(text).replace(",", " ").split())


def _bool(text):
    value = str(text).strip().lower()
    if value in ("1", "true", "yes", "on"):
        return True
    if value in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text}")


# section -> key -> (parser, default)
SCHEMA = {
    "stable": {
        "alpha": (float, 1.5),
        "beta": (float, 0.0),
        "m1": (float, 1.0),
        "m2": (float, 1.0),
    },
    "grid": {
        "x_min": (float, -20.0),
        "x_max": (float, 20.0),
        "n_points": (int, 401),
        "t_min": (float, -10.0),
        "t_max": (float, 10.0),
        "n_t": (int, 201),
    },
    "mc": {
        "n": (int, 20000),
        "seed": (int, 42),
        "workers": (int, 1),
        "chunk": (int, 20000),
        "seeds": (int, 1),
        "mismatch": (_bool, False),
    },
    "solve": {
        "h": (str, "gaussian_bump"),
        "t_min": (float, 1e-3),
        "t_max": (float, 20.0),
        "n_t": (int, 64),
        "core": (float, 0.8),
    },
    "sd": {
        "etas": (_floats, (0.1, 0.5, 0.9)),
        "n_points": (int, 8192),
        "half_width": (float, 200.0),
    },
    "bounds": {
        "n_values": (_ints, (10, 100, 1000)),
        "split": (_floats, (4.0,)),
        "delta": (float, 0.5),
        "sample_size": (int, 1000),
        "two_point_scale": (float, None),
    },
    "constants": {
        "policy": (str, None),
        "C_alpha_A_K": (float, None),
        "C_1_nu": (float, None),
        "C_2_nu": (float, None),
        "truncation_U": (float, 1.0),
        "calibration_n": (_ints, (10, 20, 40)),
    },
    "dna": {
        "matched": (_bool, True),
        "A": (float, 0.5),
        "theta": (float, 0.0),
        "e_amplitude": (float, 0.0),
        "e_width": (float, 1.0),
    },
    "output": {
        "out": (str, "."),
        "overwrite": (_bool, False),
        "plot": (_bool, True),
        "verbose": (_bool, True),
    },
}

POLICIES = ("user", "truncation", "calibrated")


@dataclass(frozen=True)
class ExperimentConfig:
    """Resolved configuration: every schema key with its value"""
    sections: dict
    source: str = "<defaults>"

    def __getitem__(self, section):
        return self.sections[section]

    def get(self, section, key):
        return self.sections[section][key]

    @property
    def params(self):
        s = self.sections["stable"]
        return StableParams(s["alpha"], s["beta"], s["m1"], s["m2"])

    def header_lines(self):
        """The resolved configuration as comment lines, without [output]"""
        lines = [f"# config: {self.source}"]
        for section in SCHEMA:
            if section == "output":
                continue
            for key, value in self.sections[section].items():
                if isinstance(value, tuple):
                    value = " ".join(f"{v:g}" if isinstance(v, float) else str(v) for v in value)
                lines.append(f"# [{section}] {key} = {value}")
        return lines

    def validate(self):
        """Range checks; raises ConfigError"""
        s = self.sections
        try:
            self.params
        except ValueError as err:
            raise ConfigError(f"[stable] {err}") from None
        if not s["grid"]["x_min"] < s["grid"]["x_max"]:
            raise ConfigError("[grid] x_min must be below x_max")
        if s["grid"]["n_points"] < 8 or s["grid"]["n_t"] < 1:
            raise ConfigError("[grid] n_points must be at least 8 and n_t at least 1")
        for key in ("n", "workers", "chunk", "seeds"):
            if s["mc"][key] < 1:
                raise ConfigError(f"[mc] {key} must be at least 1, got {s['mc'][key]}")
        if not 0 <= s["mc"]["seed"] < 2 ** 64:
            raise ConfigError("[mc] seed must fit in 64 unsigned bits")
        if any(not 0 < eta < 1 for eta in s["sd"]["etas"]):
            raise ConfigError(f"[sd] etas must lie in (0, 1), got {s['sd']['etas']}")
        if not 0 < s["solve"]["core"] <= 1:
            raise ConfigError("[solve] core must lie in (0, 1]")
        if not 0 < s["solve"]["t_min"] < s["solve"]["t_max"] or s["solve"]["n_t"] % 2:
            raise ConfigError("[solve] needs 0 < t_min < t_max and an even n_t")
        if not s["bounds"]["n_values"] or min(s["bounds"]["n_values"]) < 1:
            raise ConfigError("[bounds] n_values must be positive integers")
        if not s["bounds"]["split"] or min(s["bounds"]["split"]) <= 0:
            raise ConfigError("[bounds] split values (M or N) must be positive")
        if not 0 < s["bounds"]["delta"] < 1:
            raise ConfigError("[bounds] delta must lie in (0, 1)")
        policy = s["constants"]["policy"]
        if policy is not None and policy not in POLICIES:
            raise ConfigError(f"[constants] policy must be one of {POLICIES}, got {policy}")
        for key in ("C_alpha_A_K", "C_1_nu", "C_2_nu", "truncation_U"):
            v = s["constants"][key]
            if v is not None and not (math.isfinite(v) and v > 0):
                raise ConfigError(f"[constants] {key} must be finite and positive, got {v}")
        return self


def load_config(path=None, overrides=None):
    """Read and validate a configuration file

    Parameters
    ----------
    path : str, optional
        INI file; schema defaults alone when omitted
    overrides : dict, optional
        {(section, key): value} applied after the file, e.g. from command-line
        flags; values may be raw strings or already parsed

    Returns
    -------
    ExperimentConfig
        Resolved configuration
    """
    sections = {name: {k: default for k, (_, default) in keys.items()}
                for name, keys in SCHEMA.items()}
    if path is not None:
        parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
        parser.optionxform = str
        try:
            with open(path, encoding="utf-8") as fh:
                parser.read_file(fh)
        except (OSError, configparser.Error) as err:
            raise ConfigError(f"cannot read {path}: {err}") from None
        for section in parser.sections():
            if section not in SCHEMA:
                raise ConfigError(f"unknown section [{section}] in {path}")
            for key, raw in parser.items(section):
                sections[section][key] = _parse(section, key, raw)
    for (section, key), value in (overrides or {}).items():
        sections[section][key] = _parse(section, key, value) if isinstance(value, str) else value
    return ExperimentConfig(sections, str(path) if path else "<defaults>").validate()


def _parse(section, key, raw):
    if section not in SCHEMA:
        raise ConfigError(f"unknown section [{section}]")
    if key not in SCHEMA[section]:
        raise ConfigError(f"unknown key '{key}' in [{section}]")
    fn = SCHEMA[section][key][0]
    try:
        return fn(raw.strip())
    except ValueError as err:
        raise ConfigError(f"[{section}] {key}: cannot parse '{raw}': {err}") from None
