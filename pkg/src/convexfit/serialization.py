"""Model JSON round-trip and dataset CSV loading.

Model documents:

    {"kind": "max_affine", "p": P, "hyperplanes": [{"alpha": a, "beta": [...]}, ...]}
    {"kind": "ensemble", "members": [<max_affine>, ...]}
    {"kind": "lse", "anchors": [{"x": [...], "yhat": v, "g": [...]}, ...]}

Coefficients are written as decimal text via Python's shortest
round-trip float repr, so deserialize(serialize(m)) reproduces every
coefficient bit-for-bit.

Dataset CSV: header ``x1,...,xp,y``, one observation per line.
"""

from __future__ import annotations

import csv
import json
from typing import Union

import numpy as np

from .errors import DataError, SerializationError
from .models import Dataset, EnsembleModel, Hyperplane, LseModel, MaxAffineModel, Model


def serialize(model: Model) -> str:
    """Render a model as a JSON document (exact round-trip)."""
    return json.dumps(_to_obj(model), indent=2)


def deserialize(text: str) -> Model:
    """Parse a model document; malformed input raises SerializationError
    with the failing location."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SerializationError(f"invalid JSON: {exc}") from exc
    return _from_obj(obj, "$")


def save_model(model: Model, path) -> None:
    with open(path, "w") as fh:
        fh.write(serialize(model))
        fh.write("\n")


def load_model(path) -> Model:
    with open(path) as fh:
        return deserialize(fh.read())


def _to_obj(model: Model):
    if isinstance(model, MaxAffineModel):
        return {
            "kind": "max_affine",
            "p": model.p,
            "hyperplanes": [
                {"alpha": h.alpha, "beta": list(map(float, h.beta))}
                for h in model.hyperplanes
            ],
        }
    if isinstance(model, EnsembleModel):
        return {
            "kind": "ensemble",
            "members": [_to_obj(m) for m in model.members],
        }
    if isinstance(model, LseModel):
        return {
            "kind": "lse",
            "anchors": [
                {
                    "x": list(map(float, xi)),
                    "yhat": float(v),
                    "g": list(map(float, gi)),
                }
                for xi, v, gi in zip(model.x, model.yhat, model.g)
            ],
        }
    raise SerializationError(f"cannot serialize object of type {type(model).__name__}")


def _need(obj, key, where):
    if not isinstance(obj, dict):
        raise SerializationError(f"expected an object, got {type(obj).__name__}", where)
    if key not in obj:
        raise SerializationError(f"missing field '{key}'", where)
    return obj[key]


def _real_vector(v, where) -> np.ndarray:
    if not isinstance(v, list) or not all(isinstance(e, (int, float)) for e in v):
        raise SerializationError("expected a list of numbers", where)
    return np.asarray(v, dtype=np.float64)


def _from_obj(obj, where) -> Model:
    kind = _need(obj, "kind", where)
    if kind == "max_affine":
        p = _need(obj, "p", where)
        if not isinstance(p, int) or p < 1:
            raise SerializationError(f"'p' must be a positive integer, got {p!r}", where)
        raw = _need(obj, "hyperplanes", where)
        if not isinstance(raw, list) or not raw:
            raise SerializationError("'hyperplanes' must be a non-empty list", where)
        planes = []
        for i, h in enumerate(raw):
            loc = f"{where}.hyperplanes[{i}]"
            alpha = _need(h, "alpha", loc)
            if not isinstance(alpha, (int, float)):
                raise SerializationError("'alpha' must be a number", loc)
            beta = _real_vector(_need(h, "beta", loc), f"{loc}.beta")
            if beta.shape[0] != p:
                raise SerializationError(
                    f"beta has length {beta.shape[0]}, expected p={p}", loc
                )
            planes.append(Hyperplane(float(alpha), beta))
        try:
            return MaxAffineModel(planes)
        except DataError as exc:
            raise SerializationError(str(exc), where) from exc
    if kind == "ensemble":
        raw = _need(obj, "members", where)
        if not isinstance(raw, list) or not raw:
            raise SerializationError("'members' must be a non-empty list", where)
        members = []
        for i, sub in enumerate(raw):
            member = _from_obj(sub, f"{where}.members[{i}]")
            if not isinstance(member, MaxAffineModel):
                raise SerializationError(
                    "ensemble members must be max_affine models",
                    f"{where}.members[{i}]",
                )
            members.append(member)
        try:
            return EnsembleModel(members)
        except DataError as exc:
            raise SerializationError(str(exc), where) from exc
    if kind == "lse":
        raw = _need(obj, "anchors", where)
        if not isinstance(raw, list) or not raw:
            raise SerializationError("'anchors' must be a non-empty list", where)
        xs, vs, gs = [], [], []
        for i, a in enumerate(raw):
            loc = f"{where}.anchors[{i}]"
            xs.append(_real_vector(_need(a, "x", loc), f"{loc}.x"))
            v = _need(a, "yhat", loc)
            if not isinstance(v, (int, float)):
                raise SerializationError("'yhat' must be a number", loc)
            vs.append(float(v))
            gs.append(_real_vector(_need(a, "g", loc), f"{loc}.g"))
        p = xs[0].shape[0]
        for i, (xi, gi) in enumerate(zip(xs, gs)):
            if xi.shape[0] != p or gi.shape[0] != p:
                raise SerializationError(
                    "anchor dimensions are inconsistent", f"{where}.anchors[{i}]"
                )
        try:
            return LseModel(np.stack(xs), np.asarray(vs), np.stack(gs))
        except DataError as exc:
            raise SerializationError(str(exc), where) from exc
    raise SerializationError(f"unknown model kind {kind!r}", where)


def load_dataset_csv(path) -> Dataset:
    """Read ``x1,...,xp,y`` CSV into a Dataset."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"{path}: empty file") from None
        header = [h.strip() for h in header]
        p = len(header) - 1
        expected = [f"x{i + 1}" for i in range(p)] + ["y"]
        if p < 1 or header != expected:
            raise DataError(
                f"{path}: header must be x1,...,xp,y; got {','.join(header)}"
            )
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != p + 1:
                raise DataError(
                    f"{path}:{lineno}: expected {p + 1} fields, got {len(row)}"
                )
            try:
                rows.append([float(v) for v in row])
            except ValueError as exc:
                raise DataError(f"{path}:{lineno}: {exc}") from exc
        if not rows:
            raise DataError(f"{path}: no observations")
    data = np.asarray(rows, dtype=np.float64)
    return Dataset(data[:, :p], data[:, p])


def save_dataset_csv(data: Dataset, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([f"x{i + 1}" for i in range(data.p)] + ["y"])
        for xi, yi in zip(data.x, data.y):
            writer.writerow([repr(float(v)) for v in xi] + [repr(float(yi))])


def load_points_csv(path) -> np.ndarray:
    """Read prediction inputs: either ``x1,...,xp`` or a full dataset CSV
    whose ``y`` column is ignored."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise DataError(f"{path}: empty file") from None
        has_y = header and header[-1] == "y"
        p = len(header) - 1 if has_y else len(header)
        expected = [f"x{i + 1}" for i in range(p)] + (["y"] if has_y else [])
        if p < 1 or header != expected:
            raise DataError(
                f"{path}: header must be x1,...,xp[,y]; got {','.join(header)}"
            )
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(header):
                raise DataError(
                    f"{path}:{lineno}: expected {len(header)} fields, got {len(row)}"
                )
            try:
                rows.append([float(v) for v in row[:p]])
            except ValueError as exc:
                raise DataError(f"{path}:{lineno}: {exc}") from exc
        if not rows:
            raise DataError(f"{path}: no points")
    pts = np.asarray(rows, dtype=np.float64)
    if not np.isfinite(pts).all():
        raise DataError(f"{path}: non-finite point entries")
    return pts
