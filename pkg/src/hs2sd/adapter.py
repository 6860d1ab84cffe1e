"""Forward pass of the λ adapter: two cross-attention layers followed by a
small two-layer network producing two logits, of which the first softmax
component is the balancing weight.

Weight files are JSON::

    {"format_version": 1,
     "header": {"input_dim": d, "width": w, "hidden": h, "layers": 2},
     "tensors": {"layer0.wq": {"shape": [d, w], "data": [...row-major...]}, ...}}

Layer ``l`` projects queries from the previous layer output (``Sx`` coordinates
for ``l = 0``) and keys/values from ``Sy`` coordinates. Linear maps act as
``x @ W + b``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import InputError, ShapeMismatchError
from .pointset import PointSet, check_compatible

FORMAT_VERSION = 1
N_LAYERS = 2
_LAM_LO = float(np.nextafter(0.0, 1.0))
_LAM_HI = float(np.nextafter(1.0, 0.0))


def default_hidden(width: int) -> int:
    return max(width // 2, 2)


def tensor_shapes(input_dim: int, width: int, hidden: int) -> dict[str, tuple[int, ...]]:
    shapes: dict[str, tuple[int, ...]] = {}
    for layer in range(N_LAYERS):
        q_in = input_dim if layer == 0 else width
        p = f"layer{layer}."
        shapes[p + "wq"] = (q_in, width)
        shapes[p + "bq"] = (width,)
        shapes[p + "wk"] = (input_dim, width)
        shapes[p + "bk"] = (width,)
        shapes[p + "wv"] = (input_dim, width)
        shapes[p + "bv"] = (width,)
        shapes[p + "wo"] = (width, width)
        shapes[p + "bo"] = (width,)
    shapes["g.w1"] = (width, hidden)
    shapes["g.b1"] = (hidden,)
    shapes["g.w2"] = (hidden, 2)
    shapes["g.b2"] = (2,)
    return shapes


@dataclass(frozen=True)
class AdapterWeights:
    input_dim: int
    width: int
    hidden: int
    tensors: dict

    def __post_init__(self):
        expected = tensor_shapes(self.input_dim, self.width, self.hidden)
        missing = sorted(set(expected) - set(self.tensors))
        extra = sorted(set(self.tensors) - set(expected))
        if missing or extra:
            raise ShapeMismatchError(f"adapter tensors missing {missing} / unexpected {extra}")
        frozen = {}
        for name, shape in expected.items():
            t = np.array(self.tensors[name], dtype=np.float64)
            if t.shape != shape:
                raise ShapeMismatchError(f"adapter tensor {name} has shape {t.shape}, header implies {shape}")
            if not np.all(np.isfinite(t)):
                raise InputError(f"adapter tensor {name} has non-finite entries")
            t.setflags(write=False)
            frozen[name] = t
        object.__setattr__(self, "tensors", frozen)

    @classmethod
    def random(cls, input_dim: int, width: int, hidden: int | None = None, *, seed=None, scale: float = 0.5):
        hidden = default_hidden(width) if hidden is None else hidden
        rng = np.random.default_rng(seed)
        shapes = tensor_shapes(input_dim, width, hidden)
        return cls(input_dim, width, hidden, {k: scale * rng.standard_normal(s) for k, s in shapes.items()})

    @classmethod
    def zeros(cls, input_dim: int, width: int, hidden: int | None = None):
        hidden = default_hidden(width) if hidden is None else hidden
        shapes = tensor_shapes(input_dim, width, hidden)
        return cls(input_dim, width, hidden, {k: np.zeros(s) for k, s in shapes.items()})

    def to_json(self) -> dict:
        return {
            "format_version": FORMAT_VERSION,
            "header": {"input_dim": self.input_dim, "width": self.width, "hidden": self.hidden, "layers": N_LAYERS},
            "tensors": {
                k: {"shape": list(v.shape), "data": v.ravel().tolist()} for k, v in sorted(self.tensors.items())
            },
        }

    @classmethod
    def from_json(cls, doc: dict) -> AdapterWeights:
        try:
            if doc.get("format_version") != FORMAT_VERSION:
                raise InputError(f"unsupported adapter format_version {doc.get('format_version')!r}")
            header = doc["header"]
            if header.get("layers", N_LAYERS) != N_LAYERS:
                raise ShapeMismatchError(f"adapter must have {N_LAYERS} attention layers")
            d, w, h = int(header["input_dim"]), int(header["width"]), int(header["hidden"])
            expected = tensor_shapes(d, w, h)
            tensors = {}
            for name, entry in doc["tensors"].items():
                shape = tuple(entry["shape"])
                if name in expected and shape != expected[name]:
                    raise ShapeMismatchError(f"adapter tensor {name} declares {shape}, header implies {expected[name]}")
                data = np.asarray(entry["data"], dtype=np.float64)
                if data.size != math.prod(shape):
                    raise ShapeMismatchError(f"adapter tensor {name}: {data.size} values for shape {shape}")
                tensors[name] = data.reshape(shape)
        except (KeyError, TypeError, AttributeError) as exc:
            raise InputError(f"malformed adapter weight file: {exc!r}") from None
        return cls(d, w, h, tensors)


def save_weights(weights: AdapterWeights, path) -> None:
    Path(path).write_text(json.dumps(weights.to_json()))


def load_weights(path) -> AdapterWeights:
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read adapter weights {path}: {exc}") from None
    return AdapterWeights.from_json(doc)


def _softmax(z: np.ndarray, axis: int = -1) -> np.ndarray:
    z = z - z.max(axis=axis, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=axis, keepdims=True)


def adapter_logits(x: np.ndarray, y: np.ndarray, weights: AdapterWeights) -> np.ndarray:
    t = weights.tensors
    w = weights.width
    h = x
    for layer in range(N_LAYERS):
        p = f"layer{layer}."
        q = h @ t[p + "wq"] + t[p + "bq"]
        k = y @ t[p + "wk"] + t[p + "bk"]
        v = y @ t[p + "wv"] + t[p + "bv"]
        attn = _softmax(q @ k.T / math.sqrt(w))
        h = (attn @ v) @ t[p + "wo"] + t[p + "bo"]
    pooled = h.mean(axis=0)
    hidden = np.maximum(pooled @ t["g.w1"] + t["g.b1"], 0.0)
    return hidden @ t["g.w2"] + t["g.b2"]


def lambda_adapter_forward(sx: PointSet, sy: PointSet, weights: AdapterWeights, *, symmetrize: bool = False) -> float:
    """Balancing weight in ``(0, 1)`` for the pair ``(sx, sy)``.

    Cross-attention is not symmetric in its arguments; ``symmetrize`` averages
    the outputs for ``(sx, sy)`` and ``(sy, sx)``.
    """
    check_compatible(sx, sy, same_size=True)
    if sx.dim != weights.input_dim:
        raise ShapeMismatchError(f"adapter expects {weights.input_dim}-dimensional points, got {sx.dim}")
    lam = float(_softmax(adapter_logits(sx.points, sy.points, weights))[0])
    if symmetrize:
        lam = 0.5 * (lam + float(_softmax(adapter_logits(sy.points, sx.points, weights))[0]))
    # saturated logits round to exactly 0 or 1; keep the weight interior
    return min(max(lam, _LAM_LO), _LAM_HI)
