"""Readers and writers for fields (.sfield), diagrams (.pdiag) and ensembles.

.sfield is ASCII::

    SFIELD 1
    dims nx ny nz
    spacing sx sy sz
    origin ox oy oz
    <nx*ny*nz reals, x fastest>

.pdiag is CSV with the header
``birth,death,btype,b_x,b_y,b_z,d_x,d_y,d_z,pair_class``, optionally preceded
by ``# family=<family>`` and ``# source=<name>`` lines. Floats are written with
``repr`` so a save/load cycle is bit-exact.

An ensemble directory holds .sfield files and an optional ``ensemble.txt``
manifest listing member filenames one per line; ``#meta key=value`` lines in
the manifest carry ensemble metadata.
"""
from __future__ import annotations

import csv
import io
import math
from pathlib import Path

import numpy as np

from .diagram import FAMILIES, PAIR_CLASSES, PersistenceDiagram
from .errors import DimensionMismatch, MissingPath, NonFiniteValue, ParseError
from .fields import Ensemble, ScalarField

MANIFEST = "ensemble.txt"
FIELD_SUFFIX = ".sfield"
DIAGRAM_SUFFIX = ".pdiag"
DIAGRAM_HEADER = ["birth", "death", "btype", "b_x", "b_y", "b_z", "d_x", "d_y", "d_z", "pair_class"]


def _fmt(x) -> str:
    return repr(float(x))


# -- scalar fields -------------------------------------------------------------


def write_field(field: ScalarField, path) -> None:
    nx = field.dims[0]
    lines = [
        "SFIELD 1",
        "dims " + " ".join(map(str, field.dims)),
        "spacing " + " ".join(map(_fmt, field.spacing)),
        "origin " + " ".join(map(_fmt, field.origin)),
    ]
    vals = field.values
    for start in range(0, vals.size, nx):
        lines.append(" ".join(map(_fmt, vals[start : start + nx])))
    Path(path).write_text("\n".join(lines) + "\n")


def _header_triple(lines, lineno, key, cast, path):
    if lineno > len(lines):
        raise ParseError(path, lineno, f"missing '{key}' line")
    parts = lines[lineno - 1].split()
    if len(parts) != 4 or parts[0] != key:
        raise ParseError(path, lineno, f"expected '{key} a b c'")
    try:
        return tuple(cast(p) for p in parts[1:])
    except ValueError:
        raise ParseError(path, lineno, f"bad number in '{key}' line") from None


def read_field(path, name: str | None = None) -> ScalarField:
    path = Path(path)
    if not path.exists():
        raise MissingPath(f"no such file or directory: {path}")
    lines = path.read_text().splitlines()
    if not lines or lines[0].split() != ["SFIELD", "1"]:
        raise ParseError(path, 1, "expected 'SFIELD 1'")
    dims = _header_triple(lines, 2, "dims", int, path)
    spacing = _header_triple(lines, 3, "spacing", float, path)
    origin = _header_triple(lines, 4, "origin", float, path)
    if min(dims) < 1:
        raise ParseError(path, 2, "dims must be positive")

    count = dims[0] * dims[1] * dims[2]
    values = np.empty(count)
    i = 0
    for lineno, line in enumerate(lines[4:], start=5):
        for tok in line.split():
            if i >= count:
                raise ParseError(path, lineno, f"more than {count} values")
            try:
                v = float(tok)
            except ValueError:
                raise ParseError(path, lineno, f"not a number: {tok!r}") from None
            if not math.isfinite(v):
                raise NonFiniteValue(path, i)
            values[i] = v
            i += 1
    if i != count:
        raise ParseError(path, len(lines), f"expected {count} values, found {i}")
    return ScalarField(dims, values, spacing, origin, name if name is not None else path.stem)


# -- ensembles -----------------------------------------------------------------


def _read_manifest(path: Path):
    names, meta = [], {}
    for lineno, raw in enumerate(path.read_text().splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#meta "):
            key, sep, value = line[len("#meta ") :].partition("=")
            if not sep:
                raise ParseError(path, lineno, "expected '#meta key=value'")
            meta[key.strip()] = value
        elif not line.startswith("#"):
            names.append(line)
    return names, meta


def load_ensemble(path) -> Ensemble:
    """Load every member of a directory (or of a manifest file).

    Without a manifest, members are the .sfield files of the directory in
    lexicographic filename order.
    """
    path = Path(path)
    if not path.exists():
        raise MissingPath(f"no such file or directory: {path}")
    if path.is_dir():
        folder = path
        manifest = path / MANIFEST
    else:
        folder = path.parent
        manifest = path
    if manifest.exists():
        names, meta = _read_manifest(manifest)
        files = [folder / n for n in names]
    else:
        meta = {}
        files = sorted(folder.glob("*" + FIELD_SUFFIX), key=lambda p: p.name)
    if not files:
        raise MissingPath(f"no {FIELD_SUFFIX} files in {folder}")

    members = []
    for f in files:
        field = read_field(f)
        if members and not field.same_grid(members[0]):
            raise DimensionMismatch(f)
        members.append(field)
    return Ensemble(members, meta)


def save_ensemble(ensemble: Ensemble, directory) -> list[Path]:
    """Write members and a manifest; returns the member paths in order."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    width = len(str(len(ensemble) - 1))
    names, paths = [], []
    for i, m in enumerate(ensemble):
        stem = m.name or f"member_{i:0{width}d}"
        if stem in names:
            stem = f"{stem}_{i:0{width}d}"
        names.append(stem)
        p = directory / (stem + FIELD_SUFFIX)
        write_field(m, p)
        paths.append(p)
    lines = [f"#meta {k}={v}" for k, v in ensemble.metadata.items()]
    lines += [p.name for p in paths]
    (directory / MANIFEST).write_text("\n".join(lines) + "\n")
    return paths


# -- diagrams ------------------------------------------------------------------


def _btype(pair_class: str) -> str:
    return "saddle" if pair_class == "saddle_max" else "minimum"


def format_diagram(diagram: PersistenceDiagram) -> str:
    buf = io.StringIO()
    buf.write(f"# family={diagram.family}\n")
    buf.write(f"# source={diagram.source_name}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(DIAGRAM_HEADER)
    for i in range(len(diagram)):
        cls = diagram.pair_classes[i]
        w.writerow(
            [_fmt(diagram.births[i]), _fmt(diagram.deaths[i]), _btype(cls)]
            + [_fmt(x) for x in diagram.birth_locations[i]]
            + [_fmt(x) for x in diagram.death_locations[i]]
            + [cls]
        )
    return buf.getvalue()


def save_diagram(diagram: PersistenceDiagram, path) -> None:
    Path(path).write_text(format_diagram(diagram))


def parse_diagram(text: str, path="<string>") -> PersistenceDiagram:
    lines = text.splitlines()
    meta = {}
    lineno = 0
    while lineno < len(lines) and lines[lineno].startswith("#"):
        key, _, value = lines[lineno][1:].strip().partition("=")
        meta[key.strip()] = value
        lineno += 1
    if lineno >= len(lines) or lines[lineno].strip().split(",") != DIAGRAM_HEADER:
        raise ParseError(path, lineno + 1, "missing .pdiag header")

    rows = []
    for offset, line in enumerate(lines[lineno + 1 :], start=lineno + 2):
        if not line.strip():
            continue
        cells = line.split(",")
        if len(cells) != len(DIAGRAM_HEADER):
            raise ParseError(path, offset, f"expected {len(DIAGRAM_HEADER)} columns, got {len(cells)}")
        try:
            nums = [float(c) for c in cells[:2]] + [float(c) for c in cells[3:9]]
        except ValueError:
            raise ParseError(path, offset, "bad number") from None
        cls = cells[9].strip()
        if cls not in PAIR_CLASSES or cells[2].strip() != _btype(cls):
            raise ParseError(path, offset, f"bad btype/pair_class {cells[2]!r}/{cls!r}")
        if not all(math.isfinite(v) for v in nums) or nums[1] < nums[0]:
            raise ParseError(path, offset, "invalid point")
        rows.append((nums, cls))

    family = meta.get("family")
    if family is None:
        family = "maxima" if any(c == "saddle_max" for _, c in rows) else "minima"
    if family not in FAMILIES:
        raise ParseError(path, 1, f"unknown family {family!r}")
    arr = np.array([r for r, _ in rows], dtype=np.float64).reshape(-1, 8)
    return PersistenceDiagram(
        arr[:, 0],
        arr[:, 1],
        arr[:, 2:5],
        arr[:, 5:8],
        [c for _, c in rows],
        family,
        meta.get("source", ""),
    )


def load_diagram(path) -> PersistenceDiagram:
    path = Path(path)
    if not path.exists():
        raise MissingPath(f"no such file or directory: {path}")
    return parse_diagram(path.read_text(), path)


def load_diagram_dir(directory) -> list[PersistenceDiagram]:
    directory = Path(directory)
    if not directory.is_dir():
        raise MissingPath(f"no such directory: {directory}")
    files = sorted(directory.glob("*" + DIAGRAM_SUFFIX), key=lambda p: p.name)
    return [load_diagram(f) for f in files]
