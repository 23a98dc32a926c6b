"""Model files: declarative TOML descriptions of a walk.

Two kinds are accepted.

kind = "jackson" takes the six network parameters::

    kind = "jackson"
    lambda1 = 0.1
    lambda2 = 0.1
    sigma1 = 0.4
    sigma2 = 0.4
    q1 = 0.5
    q2 = 0.5

kind = "general" takes four tables, one per region, mapping offset keys
"dx,dy" to probabilities::

    kind = "general"
    [origin]
    "0,0" = 0.8
    "1,0" = 0.1
    "0,1" = 0.1
    [face1]
    ...

Unknown keys are rejected, never ignored.
"""

from __future__ import annotations

import sys
from typing import Dict, Tuple

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .model import (
    REGIONS,
    JacksonParams,
    RandomWalkSpec,
    TransitionLaw,
    jackson_spec,
)

_JACKSON_KEYS = {"kind", "lambda1", "lambda2", "sigma1", "sigma2", "q1", "q2"}
_GENERAL_KEYS = {"kind", *REGIONS}


class ModelFileError(Exception):
    """Raised for malformed or schema-violating model files."""


def _parse_offset(key: str, region: str) -> Tuple[int, int]:
    parts = key.split(",")
    if len(parts) != 2:
        raise ModelFileError(
            f"[{region}] key {key!r} is not of the form \"dx,dy\"")
    try:
        dx, dy = int(parts[0]), int(parts[1])
    except ValueError:
        raise ModelFileError(
            f"[{region}] key {key!r} has non-integer components") from None
    if dx not in (-1, 0, 1) or dy not in (-1, 0, 1):
        raise ModelFileError(
            f"[{region}] offset {key!r} has components outside {{-1,0,1}}")
    return dx, dy


def load_model_with_params(path: str):
    """Parse a model file; returns (spec, params).

    params is the JacksonParams instance for kind="jackson" files and
    None for general ones, so callers can report network-level
    quantities (utilizations) when they exist.

    Raises ModelFileError on TOML syntax errors (with the parser's
    line/column message) and on any schema violation: missing kind,
    unknown keys, bad offset syntax, non-numeric probabilities.
    Distributional validity (support, normalization, connectivity) is
    the job of validate_spec, not of parsing.
    """
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except tomllib.TOMLDecodeError as exc:
        raise ModelFileError(f"{path}: TOML parse error: {exc}") from exc

    kind = data.get("kind")
    if kind is None:
        raise ModelFileError(f"{path}: missing required key 'kind'")

    if kind == "jackson":
        unknown = set(data) - _JACKSON_KEYS
        if unknown:
            raise ModelFileError(
                f"{path}: unknown keys for kind=\"jackson\": "
                f"{sorted(unknown)}")
        missing = _JACKSON_KEYS - {"kind"} - set(data)
        if missing:
            raise ModelFileError(
                f"{path}: missing jackson parameters: {sorted(missing)}")
        values = {}
        for name in sorted(_JACKSON_KEYS - {"kind"}):
            raw = data[name]
            if isinstance(raw, bool) or not isinstance(raw, (int, float)):
                raise ModelFileError(
                    f"{path}: parameter {name} must be a number, "
                    f"got {raw!r}")
            values[name] = float(raw)
        try:
            params = JacksonParams(**values)
        except ValueError as exc:
            raise ModelFileError(f"{path}: {exc}") from exc
        return jackson_spec(params), params

    if kind == "general":
        unknown = set(data) - _GENERAL_KEYS
        if unknown:
            raise ModelFileError(
                f"{path}: unknown keys for kind=\"general\": "
                f"{sorted(unknown)}")
        missing = set(REGIONS) - set(data)
        if missing:
            raise ModelFileError(
                f"{path}: missing region tables: {sorted(missing)}")
        laws: Dict[str, TransitionLaw] = {}
        for region in REGIONS:
            table = data[region]
            if not isinstance(table, dict):
                raise ModelFileError(
                    f"{path}: [{region}] must be a table of "
                    f"\"dx,dy\" = probability entries")
            probs = {}
            for key, raw in table.items():
                offset = _parse_offset(key, region)
                if isinstance(raw, bool) or not isinstance(raw, (int, float)):
                    raise ModelFileError(
                        f"{path}: [{region}] value for {key!r} must be a "
                        f"number, got {raw!r}")
                if offset in probs:
                    raise ModelFileError(
                        f"{path}: [{region}] duplicate offset {key!r}")
                probs[offset] = float(raw)
            laws[region] = TransitionLaw(region, probs)
        return RandomWalkSpec(laws=laws), None

    raise ModelFileError(
        f"{path}: kind must be \"jackson\" or \"general\", got {kind!r}")


def load_model(path: str) -> RandomWalkSpec:
    """Parse a model file into a RandomWalkSpec; see load_model_with_params."""
    return load_model_with_params(path)[0]
