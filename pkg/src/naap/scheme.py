"""Architecture schemes and the tabular features derived from them.

A scheme is a plain chain of convolution layers. The scheme file format is
one JSON object per architecture::

    {"name": "arch_001", "input": [32, 32, 3],
     "layers": [{"out_width": 16, "kernel": 3, "stride": 1, "skip": false}, ...]}

A JSON-lines file holds many of them.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import astuple, dataclass, fields
from pathlib import Path
from typing import Callable, Iterable, Iterator

DEFAULT_INPUT = (32, 32, 3)

SCHEME_FEATURES = (
    "depth",
    "num_stages",
    "first_width",
    "last_width",
    "num_params",
    "num_macs",
    "num_skip_connections",
    "num_lost_rf_layers",
)
ORIGINAL_FEATURES = SCHEME_FEATURES[:6]


class SchemeError(ValueError):
    """Malformed or inconsistent scheme document."""


@dataclass(frozen=True)
class LayerSpec:
    index: int
    in_width: int
    out_width: int
    kernel_size: int = 3
    stride: int = 1
    requests_skip: bool = False

    def __post_init__(self):
        if self.kernel_size not in (1, 3):
            raise SchemeError(f"layer {self.index}: kernel must be 1 or 3, got {self.kernel_size}")
        if self.stride not in (1, 2):
            raise SchemeError(f"layer {self.index}: stride must be 1 or 2, got {self.stride}")
        if self.in_width < 1 or self.out_width < 1:
            raise SchemeError(f"layer {self.index}: widths must be >= 1")


@dataclass(frozen=True)
class ArchitectureScheme:
    name: str
    layers: tuple[LayerSpec, ...]
    input_resolution: tuple[int, int] = DEFAULT_INPUT[:2]
    input_channels: int = DEFAULT_INPUT[2]

    def __post_init__(self):
        if not self.layers:
            raise SchemeError(f"scheme {self.name!r}: empty layer list")
        if self.layers[0].in_width != self.input_channels:
            raise SchemeError(
                f"scheme {self.name!r}: layer 1 in_width {self.layers[0].in_width} "
                f"!= input channels {self.input_channels}"
            )
        for prev, cur in zip(self.layers, self.layers[1:]):
            if prev.out_width != cur.in_width:
                raise SchemeError(
                    f"scheme {self.name!r}: chaining broken at layer {cur.index} "
                    f"(in_width {cur.in_width} != previous out_width {prev.out_width})"
                )


@dataclass(frozen=True)
class SchemeFeatures:
    depth: int
    num_stages: int
    first_width: int
    last_width: int
    num_params: int
    num_macs: int
    num_skip_connections: int
    num_lost_rf_layers: int

    def as_tuple(self) -> tuple[int, ...]:
        return astuple(self)

    def as_dict(self) -> dict[str, int]:
        return {f.name: getattr(self, f.name) for f in fields(self)}


def _require(obj: dict, key: str, where: str):
    if key not in obj:
        raise SchemeError(f"{where}: missing field {key!r}")
    return obj[key]


def _as_int(value, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise SchemeError(f"{where}: expected integer, got {value!r}")
    return value


def scheme_from_dict(doc: dict, line: int | None = None) -> ArchitectureScheme:
    where = f"line {line}" if line is not None else "scheme"
    if not isinstance(doc, dict):
        raise SchemeError(f"{where}: expected a JSON object")
    name = str(_require(doc, "name", where))
    inp = doc.get("input", list(DEFAULT_INPUT))
    if not (isinstance(inp, (list, tuple)) and len(inp) == 3):
        raise SchemeError(f"{where}: 'input' must be [H, W, C]")
    h, w, c = (_as_int(v, f"{where}: input") for v in inp)
    raw_layers = _require(doc, "layers", where)
    if not isinstance(raw_layers, list):
        raise SchemeError(f"{where}: 'layers' must be a list")
    layers = []
    in_width = c
    for i, raw in enumerate(raw_layers, start=1):
        lw = f"{where}, layer {i}"
        if not isinstance(raw, dict):
            raise SchemeError(f"{lw}: expected an object")
        # an explicit in_width is honoured so chaining errors surface
        declared_in = _as_int(raw["in_width"], f"{lw}: in_width") if "in_width" in raw else in_width
        out = _as_int(_require(raw, "out_width", lw), f"{lw}: out_width")
        layers.append(
            LayerSpec(
                index=i,
                in_width=declared_in,
                out_width=out,
                kernel_size=_as_int(raw.get("kernel", 3), f"{lw}: kernel"),
                stride=_as_int(raw.get("stride", 1), f"{lw}: stride"),
                requests_skip=bool(raw.get("skip", False)),
            )
        )
        in_width = out
    return ArchitectureScheme(name=name, layers=tuple(layers), input_resolution=(h, w), input_channels=c)


def parse_scheme(text: str) -> ArchitectureScheme:
    """Parse one JSON scheme document."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemeError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return scheme_from_dict(doc)


def scheme_to_dict(scheme: ArchitectureScheme) -> dict:
    return {
        "name": scheme.name,
        "input": [*scheme.input_resolution, scheme.input_channels],
        "layers": [
            {"out_width": l.out_width, "kernel": l.kernel_size, "stride": l.stride, "skip": l.requests_skip}
            for l in scheme.layers
        ],
    }


def serialize_scheme(scheme: ArchitectureScheme) -> str:
    return json.dumps(scheme_to_dict(scheme), sort_keys=True)


def read_schemes(path: str | Path) -> list[ArchitectureScheme]:
    """Read a JSON-lines schemes file; blank lines are skipped."""
    out = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                doc = json.loads(line)
            except json.JSONDecodeError as exc:
                raise SchemeError(f"line {lineno}: {exc.msg}") from exc
            out.append(scheme_from_dict(doc, line=lineno))
    return out


def write_schemes(schemes: Iterable[ArchitectureScheme], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for s in schemes:
            fh.write(serialize_scheme(s) + "\n")


def count_skip_connections(scheme: ArchitectureScheme) -> int:
    # a residual add is only legal when input and output shapes agree
    return sum(
        1 for l in scheme.layers if l.requests_skip and l.in_width == l.out_width and l.stride == 1
    )


def count_lost_rf_layers(scheme: ArchitectureScheme) -> int:
    return sum(1 for l in scheme.layers if l.kernel_size == 1 and l.stride == 2)


def count_params_macs(scheme: ArchitectureScheme) -> tuple[int, int]:
    """Total conv parameters (bias included) and multiply-accumulates."""
    h, w = scheme.input_resolution
    params = macs = 0
    for l in scheme.layers:
        k2 = l.kernel_size * l.kernel_size
        h = math.ceil(h / l.stride)
        w = math.ceil(w / l.stride)
        params += k2 * l.in_width * l.out_width + l.out_width
        macs += k2 * l.in_width * l.out_width * h * w
    return params, macs


def stages_by_downsampling(scheme: ArchitectureScheme) -> int:
    return 1 + sum(1 for l in scheme.layers if l.stride == 2)


StageRule = Callable[[ArchitectureScheme], int]


def scheme_feature_vector(
    scheme: ArchitectureScheme, stage_rule: StageRule = stages_by_downsampling
) -> SchemeFeatures:
    params, macs = count_params_macs(scheme)
    return SchemeFeatures(
        depth=len(scheme.layers),
        num_stages=stage_rule(scheme),
        first_width=scheme.layers[0].out_width,
        last_width=scheme.layers[-1].out_width,
        num_params=params,
        num_macs=macs,
        num_skip_connections=count_skip_connections(scheme),
        num_lost_rf_layers=count_lost_rf_layers(scheme),
    )


def naap_generation_grid() -> Iterator[ArchitectureScheme]:
    """Enumerate a NAAP-440-style scheme space.

    Layers 1-2 are fixed 3x3 stems, layers 3 and 4 vary kernel, stride, skip
    and width (layer 3 input in {16, 24}, layer 4 output in {32, 40}), and an
    optional fifth layer adds depth. Used by the synthetic data generator and
    by the skip/receptive-field property tests.
    """
    i = 0
    for w2, w3, k3, s3, sk3, w4, k4, s4, sk4, tail in itertools.product(
        (16, 24), (16, 24, 32, 40), (1, 3), (1, 2), (False, True),
        (32, 40), (1, 3), (1, 2), (False, True), (None, 48, 64),
    ):
        layers = [
            LayerSpec(1, 3, 16, 3, 1),
            LayerSpec(2, 16, w2, 3, 2),
            LayerSpec(3, w2, w3, k3, s3, sk3),
            LayerSpec(4, w3, w4, k4, s4, sk4),
        ]
        if tail is not None:
            layers.append(LayerSpec(5, w4, tail, 3, 1))
        yield ArchitectureScheme(name=f"grid_{i:05d}", layers=tuple(layers))
        i += 1
