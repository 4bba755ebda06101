"""JSON instance files.

Layout::

    {
      "n": 3, "K": 2,
      "models": [
        {"initial": [...], "steps": [[...], ...], "transitions": [[row, col, prob], ...]}
      ],
      "costs": [...],
      "budget": 4
    }

Floats are written with ``repr``, the shortest decimal that parses back to
the same double, so a write/read round trip is bit exact.
"""
from __future__ import annotations

import hashlib
import json
from pathlib import Path

import numpy as np

from .errors import InstanceFormatError, ValidationError
from .mobility import Instance, MobilityModel, validate_model

__all__ = ["instance_to_dict", "instance_from_dict", "write_instance", "read_instance", "instance_digest"]


def _model_to_dict(m: MobilityModel) -> dict:
    T = m.transitions.tocoo()
    order = np.lexsort((T.col, T.row))
    return {
        "initial": m.initial.tolist(),
        "steps": m.steps.tolist(),
        "transitions": [[int(T.row[j]), int(T.col[j]), float(T.data[j])] for j in order],
    }


def instance_to_dict(instance: Instance) -> dict:
    return {
        "n": instance.n,
        "K": instance.horizon,
        "models": [_model_to_dict(m) for m in instance.models],
        "costs": instance.costs.tolist(),
        "budget": instance.budget,
    }


def _field(obj, key, where):
    if not isinstance(obj, dict):
        raise InstanceFormatError(f"{where}: expected an object, got {type(obj).__name__}")
    if key not in obj:
        raise InstanceFormatError(f"{where}: missing field {key!r}")
    return obj[key]


def instance_from_dict(doc: dict, validate: bool = True) -> Instance:
    """Build an instance from the JSON layout.

    Raises :class:`InstanceFormatError` on structural problems and, when
    ``validate`` is set, :class:`ValidationError` if a model breaks its
    probability invariants.
    """
    n = _field(doc, "n", "instance")
    K = _field(doc, "K", "instance")
    raw_models = _field(doc, "models", "instance")
    costs = _field(doc, "costs", "instance")
    budget = _field(doc, "budget", "instance")
    if not isinstance(raw_models, list) or not raw_models:
        raise InstanceFormatError("instance: 'models' must be a non-empty list")
    models = []
    for i, md in enumerate(raw_models):
        where = f"models[{i}]"
        initial = _field(md, "initial", where)
        steps = _field(md, "steps", where)
        trans = _field(md, "transitions", where)
        try:
            edges = [(int(r), int(c), float(p)) for r, c, p in trans]
        except (TypeError, ValueError) as exc:
            raise InstanceFormatError(f"{where}.transitions: expected [row, col, prob] triples ({exc})") from None
        try:
            m = MobilityModel.from_edges(int(n), edges, initial, steps)
        except (TypeError, ValueError) as exc:
            raise InstanceFormatError(f"{where}: {exc}") from None
        if m.horizon != int(K):
            raise InstanceFormatError(f"{where}.steps: {m.horizon} columns, but K = {K}")
        if validate:
            problems = validate_model(m)
            if problems:
                raise ValidationError([f"{where}: {p}" for p in problems])
        models.append(m)
    try:
        return Instance(tuple(models), costs, budget)
    except (TypeError, ValueError) as exc:
        raise InstanceFormatError(f"instance: {exc}") from None


def write_instance(instance: Instance, path) -> None:
    Path(path).write_text(json.dumps(instance_to_dict(instance)) + "\n")


def read_instance(path, validate: bool = True) -> Instance:
    text = Path(path).read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceFormatError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    try:
        return instance_from_dict(doc, validate)
    except InstanceFormatError as exc:
        raise InstanceFormatError(f"{path}: {exc}") from None


def instance_digest(instance: Instance) -> str:
    """SHA-256 of the canonical JSON form, for regression pinning."""
    blob = json.dumps(instance_to_dict(instance), sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()
