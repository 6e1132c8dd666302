"""Reading and writing models, results, derivations, PGM images and DOT graphs."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, BinaryIO, Mapping

import numpy as np

from .algebra import Element, FuzzySet, Subset
from .errors import Unsupported, ValidationError
from .sequent import Derivation
from .spaces import GridSpace, Space, SpaceModel, build_model


def load_json(path: str | Path) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ValidationError("json", f"{path}: {exc}") from exc
    except OSError as exc:
        raise ValidationError("file", f"{path}: {exc.strerror}") from exc


# -- PGM ------------------------------------------------------------------


def _pgm_tokens(data: bytes, count: int) -> tuple[list[int], int]:
    """Read ``count`` whitespace-separated header integers, skipping comments."""
    out, i = [], 2
    while len(out) < count:
        while i < len(data) and data[i:i + 1].isspace():
            i += 1
        if data[i:i + 1] == b"#":
            while i < len(data) and data[i:i + 1] not in (b"\n", b"\r"):
                i += 1
            continue
        j = i
        while j < len(data) and data[j:j + 1].isdigit():
            j += 1
        if j == i:
            raise ValidationError("pgm", "malformed header")
        out.append(int(data[i:j]))
        i = j
    return out, i


def read_pgm(path: str | Path) -> np.ndarray:
    """Read a P2 (ASCII) or P5 (binary) graymap as a ``height x width`` int array."""
    data = Path(path).read_bytes()
    magic = data[:2]
    if magic not in (b"P2", b"P5"):
        raise ValidationError("pgm", f"{path}: not a PGM file")
    (width, height, maxval), pos = _pgm_tokens(data, 3)
    if magic == b"P5":
        dtype = np.uint8 if maxval < 256 else np.dtype(">u2")
        raw = np.frombuffer(data[pos + 1:], dtype=dtype, count=width * height)
    else:
        raw = np.array(data[pos:].split()[:width * height], dtype=np.int64)
    if raw.size != width * height:
        raise ValidationError("pgm", f"{path}: expected {width * height} pixels, found {raw.size}")
    return raw.astype(np.int64).reshape(height, width)


def write_pgm(out: BinaryIO, pixels: np.ndarray, maxval: int = 255) -> None:
    height, width = pixels.shape
    out.write(f"P5\n{width} {height}\n{maxval}\n".encode("ascii"))
    out.write(np.asarray(pixels, dtype=np.uint8).tobytes())


def pgm_atom(space: Space, name: str, source: Mapping[str, Any], base: Path | None = None) -> Subset:
    """Atom from an image: pixels at or above ``threshold`` (or below, with ``"above": false``)."""
    if not isinstance(space, GridSpace):
        raise ValidationError("atom valuation", f"atom {name!r}: images only value grid models")
    path = Path(source.get("pgm") or source["file"])
    if base is not None and not path.is_absolute():
        path = base / path
    pixels = read_pgm(path)
    if pixels.shape != (space.height, space.width):
        raise ValidationError("atom valuation", f"atom {name!r}: image is {pixels.shape[1]}x{pixels.shape[0]}, "
                                                f"grid is {space.width}x{space.height}")
    threshold = int(source.get("threshold", 128))
    hit = pixels >= threshold if source.get("above", True) else pixels < threshold
    from .bitsets import mask_to_bits
    return space.algebra.from_bits(mask_to_bits(hit.ravel()))


def element_pixels(space: GridSpace, a: Element) -> np.ndarray:
    """Satisfying pixels white (255), others black."""
    from .bitsets import bits_to_mask
    mask = bits_to_mask(a.bits, space.n).reshape(space.height, space.width)
    return np.where(mask, 255, 0).astype(np.uint8)


# -- models and results ---------------------------------------------------


def load_model(path: str | Path) -> SpaceModel:
    path = Path(path)
    desc = load_json(path)
    if not isinstance(desc, Mapping):
        raise ValidationError("model", f"{path}: top level must be an object")
    return build_model(desc, lambda sp, name, source: pgm_atom(sp, name, source, path.parent))


def load_derivation(path: str | Path) -> Derivation:
    data = load_json(path)
    try:
        return Derivation.from_json(data)
    except (KeyError, TypeError) as exc:
        raise ValidationError("derivation", f"{path}: missing field {exc}") from exc


def element_to_json(a: Element) -> Any:
    return a.algebra.to_json(a)


def result_atom(model: SpaceModel, path: str | Path) -> Element:
    """Read a ``check --format json`` document back as a predicate on ``model``."""
    from .spaces import atom_from_json
    doc = load_json(path)
    value = doc["result"] if isinstance(doc, Mapping) and "result" in doc else doc
    return atom_from_json(model.space, value)


# -- DOT ------------------------------------------------------------------


def _dot_id(p: Any) -> str:
    return json.dumps(str(p))


def to_dot(model: SpaceModel, a: Element, title: str = "result") -> str:
    """Graphviz rendering: satisfying nodes filled, fuzzy values as labels."""
    space = model.space
    lines = [f"digraph {json.dumps(title)} {{", "  node [shape=circle, style=filled];"]
    for i, p in enumerate(space.points):
        if isinstance(a, FuzzySet):
            v = a.values[i]
            shade = 100 - (60 * v) // space.algebra.k
            lines.append(f'  {_dot_id(p)} [label="{p}\\n{v}/{space.algebra.k}", fillcolor="gray{shade}"];')
        else:
            color = "lightblue" if (a.bits >> i) & 1 else "white"
            lines.append(f"  {_dot_id(p)} [fillcolor={color}];")
    if space.point_based:
        step = space.step_matrix.tocoo()
        for u, v in sorted(zip(step.row.tolist(), step.col.tolist())):
            lines.append(f"  {_dot_id(space.points[u])} -> {_dot_id(space.points[v])};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def require_grid(model: SpaceModel) -> GridSpace:
    if not isinstance(model.space, GridSpace):
        raise Unsupported("PGM output needs a grid model")
    return model.space
