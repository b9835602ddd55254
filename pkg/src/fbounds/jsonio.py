"""JSON distribution files: ``{"observational": {"p": {"a,b,y": prob}}, "factorial": {"r": {...}}}``."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Optional, Tuple, Union

import numpy as np

from .model import FactorialDist, ModelError, ObservationalDist

INPUT_TOL = 1e-9


class DistributionFormatError(ValueError):
    pass


def _cells(block, name: str) -> np.ndarray:
    if not isinstance(block, dict):
        raise DistributionFormatError(f"{name}: expected an object of 'a,b,y' keys")
    arr = np.zeros((2, 2, 2))
    seen = set()
    for key, value in block.items():
        parts = [s.strip() for s in str(key).split(",")]
        if len(parts) != 3 or any(s not in ("0", "1") for s in parts):
            raise DistributionFormatError(f"{name}: bad key {key!r}, expected 'a,b,y' with 0/1 entries")
        idx = tuple(int(s) for s in parts)
        if idx in seen:
            raise DistributionFormatError(f"{name}: duplicate key {key!r}")
        seen.add(idx)
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise DistributionFormatError(f"{name}: value for {key!r} must be a number")
        arr[idx] = float(value)
    if len(seen) != 8:
        missing = [f"{a},{b},{y}" for a in (0, 1) for b in (0, 1) for y in (0, 1) if (a, b, y) not in seen]
        raise DistributionFormatError(f"{name}: missing keys {', '.join(missing)}")
    if not np.all(np.isfinite(arr)) or arr.min() < -INPUT_TOL:
        raise DistributionFormatError(f"{name}: probabilities must be finite and nonnegative")
    return np.clip(arr, 0.0, None)


def _normalize(arr: np.ndarray, axis, name: str) -> np.ndarray:
    sums = arr.sum(axis=axis, keepdims=True)
    if np.max(np.abs(sums - 1.0)) > INPUT_TOL:
        raise DistributionFormatError(f"{name}: probabilities must sum to 1 (got {np.ravel(sums).tolist()})")
    return arr / sums


def distributions_from_dict(doc: dict) -> Tuple[Optional[ObservationalDist], Optional[FactorialDist]]:
    if not isinstance(doc, dict):
        raise DistributionFormatError("top level must be an object")
    unknown = set(doc) - {"observational", "factorial"}
    if unknown:
        raise DistributionFormatError(f"unknown top-level keys: {', '.join(sorted(unknown))}")
    obs = fact = None
    try:
        if "observational" in doc:
            block = doc["observational"]
            if not isinstance(block, dict) or "p" not in block:
                raise DistributionFormatError("observational: expected {\"p\": {...}}")
            obs = ObservationalDist(_normalize(_cells(block["p"], "observational"), None, "observational"))
        if "factorial" in doc:
            block = doc["factorial"]
            if not isinstance(block, dict) or "r" not in block:
                raise DistributionFormatError("factorial: expected {\"r\": {...}}")
            fact = FactorialDist(_normalize(_cells(block["r"], "factorial"), 2, "factorial arm"))
    except ModelError as exc:
        raise DistributionFormatError(str(exc)) from exc
    if obs is None and fact is None:
        raise DistributionFormatError("file has neither 'observational' nor 'factorial' data")
    return obs, fact


def _block(arr: np.ndarray) -> dict:
    return {f"{a},{b},{y}": float(arr[a, b, y]) for a in (0, 1) for b in (0, 1) for y in (0, 1)}


def distributions_to_dict(obs: Optional[ObservationalDist], fact: Optional[FactorialDist]) -> dict:
    doc = {}
    if obs is not None:
        doc["observational"] = {"p": _block(obs.p)}
    if fact is not None:
        doc["factorial"] = {"r": _block(fact.r)}
    return doc


def read_distributions(path: Union[str, Path]):
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise DistributionFormatError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from exc
    return distributions_from_dict(doc)


def write_distributions(path: Union[str, Path], obs, fact) -> None:
    with open(path, "w") as fh:
        json.dump(distributions_to_dict(obs, fact), fh, indent=2, sort_keys=True)
        fh.write("\n")
