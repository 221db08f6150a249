"""Canonical JSON files for constructed metrics.

Keys are sorted and every float is written with 17 significant digits, so a
write/read/write cycle is byte-identical and files diff cleanly.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import hirzebruch, ruled
from .errors import MetricFileError
from .frame import ProfilePair

SCHEMA_VERSION = 1
PROFILE_KINDS = ("chern", "third", "critical")
RULED_KINDS = ("ruled-zero", "ruled-numeric")
KINDS = PROFILE_KINDS + RULED_KINDS
RULED_NODES = 1001


def canonical_json(obj) -> str:
    """Serialize with sorted keys and ``%.17g`` floats."""
    if isinstance(obj, dict):
        items = (f"{json.dumps(str(k))}: {canonical_json(obj[k])}" for k in sorted(obj))
        return "{" + ", ".join(items) + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        return "[" + ", ".join(canonical_json(v) for v in obj) + "]"
    if isinstance(obj, (bool, np.bool_)) or obj is None:
        return json.dumps(None if obj is None else bool(obj))
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        if not math.isfinite(obj):
            raise MetricFileError("non-finite numbers cannot be written")
        return format(float(obj) + 0.0, ".17g")  # + 0.0 folds -0.0 into 0.0
    if isinstance(obj, str):
        return json.dumps(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


@dataclass
class MetricFile:
    """A constructed metric: parameters plus sampled profile arrays.

    Profile kinds store ``grid_t``, ``f``, ``h``, their first two derivatives
    and ``l``.  Ruled kinds store ``grid_z`` and ``F`` on interior momentum
    nodes.
    """

    kind: str
    parameters: dict
    arrays: dict
    l: float | None = None
    schema_version: int = SCHEMA_VERSION
    extra: dict = field(default_factory=dict)

    # -- construction ------------------------------------------------------

    @classmethod
    def from_profile(cls, sol: hirzebruch.ClosedFormSolution, p: ProfilePair) -> "MetricFile":
        params = {"m": sol.m, "phi0": sol.phi0, "phi1": sol.phi1, "lambda": sol.lam,
                  "c1": sol.c1, "c2": sol.c2, "n_grid": int(p.t.size)}
        arrays = {"grid_t": p.t, "f": p.f.values, "h": p.h.values,
                  "f1": p.f1.values, "f2": p.f2.values, "h1": p.h1.values, "h2": p.h2.values}
        return cls(sol.kind, params, arrays, p.l)

    @classmethod
    def from_admissible(cls, kind: str, sol: ruled.AdmissibleSolution,
                        n_nodes: int = RULED_NODES) -> "MetricFile":
        z = ruled.MomentumGrid.uniform(n_nodes).nodes
        params = {k: v for k, v in sol.parameters().items() if v is not None}
        return cls(kind, params, {"grid_z": z, "F": sol.F(z)})

    # -- serialization -----------------------------------------------------

    def to_dict(self) -> dict:
        out = {"schema_version": self.schema_version, "kind": self.kind,
               "parameters": self.parameters}
        out.update({k: np.asarray(v) for k, v in self.arrays.items()})
        if self.l is not None:
            out["l"] = self.l
        return out

    def to_json(self) -> str:
        return canonical_json(self.to_dict()) + "\n"

    def write(self, path) -> None:
        Path(path).write_text(self.to_json())

    @classmethod
    def from_json(cls, text: str) -> "MetricFile":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise MetricFileError(f"not valid JSON: {exc}") from None
        if not isinstance(data, dict):
            raise MetricFileError("top level must be an object")
        if data.get("schema_version") != SCHEMA_VERSION:
            raise MetricFileError(f"unsupported schema_version {data.get('schema_version')!r}")
        kind = data.get("kind")
        if kind not in KINDS:
            raise MetricFileError(f"unknown kind {kind!r}")
        params = data.get("parameters")
        if not isinstance(params, dict):
            raise MetricFileError("missing parameters object")
        names = (["grid_t", "f", "h", "f1", "f2", "h1", "h2"] if kind in PROFILE_KINDS
                 else ["grid_z", "F"])
        arrays = {}
        for name in names:
            if name not in data:
                raise MetricFileError(f"missing array {name!r}")
            try:
                arr = np.asarray(data[name], dtype=float)
            except (TypeError, ValueError):
                raise MetricFileError(f"array {name!r} is not numeric") from None
            if arr.ndim != 1 or not np.all(np.isfinite(arr)):
                raise MetricFileError(f"array {name!r} must be a flat list of finite numbers")
            arrays[name] = arr
        if len({a.size for a in arrays.values()}) != 1:
            raise MetricFileError("arrays must have equal length")
        l = data.get("l")
        if kind in PROFILE_KINDS:
            needed = ("m", "phi0", "phi1", "lambda", "c1", "c2")
            if l is None:
                raise MetricFileError("missing l")
        else:
            needed = ("x", "b", "sSigma", "sC_tilde", "representation")
        for key in needed:
            if key not in params:
                raise MetricFileError(f"missing parameter {key!r}")
        return cls(kind, params, arrays, None if l is None else float(l))

    @classmethod
    def read(cls, path) -> "MetricFile":
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise MetricFileError(f"cannot read {path}: {exc.strerror}") from None
        return cls.from_json(text)

    # -- reconstruction ----------------------------------------------------

    def solution(self) -> hirzebruch.ClosedFormSolution:
        p = self.parameters
        return hirzebruch.ClosedFormSolution(self.kind, int(p["m"]), float(p["phi0"]),
                                             float(p["phi1"]), float(p["lambda"]),
                                             float(p["c1"]), float(p["c2"]))

    def profile(self) -> ProfilePair:
        """Profile from the stored samples and derivative arrays."""
        a = self.arrays
        try:
            return ProfilePair.from_jets(a["grid_t"], a["f"], a["f1"], a["f2"], a["h"], a["h1"],
                                         a["h2"], m=int(self.parameters["m"]), kind=self.kind)
        except ValueError as exc:
            raise MetricFileError(str(exc)) from None

    def admissible(self) -> ruled.AdmissibleSolution:
        """Admissible solution rebuilt from the stored parameters."""
        p = self.parameters
        x, b = float(p["x"]), float(p["b"])
        if p["representation"] == "quartic":
            F = ruled.QuarticF(x, float(p["c"]))
        else:
            F = ruled.EulerF(x, b, float(p["c1"]), float(p["c2"]), float(p["sC_tilde"]),
                             float(p["sSigma"]))
        return ruled.AdmissibleSolution(x, b, float(p["sSigma"]), float(p["sC_tilde"]), F,
                                        p.get("genus"), p.get("m"))

    def regenerate(self) -> "MetricFile":
        """Solve again from the stored parameters alone."""
        p = self.parameters
        if self.kind in PROFILE_KINDS:
            scale = p["phi1"] if self.kind == "chern" else p["phi0"]
            sol = hirzebruch.solve(self.kind, int(p["m"]), float(scale))
            return MetricFile.from_profile(sol, hirzebruch.build_profile(sol, int(p["n_grid"])))
        if self.kind == "ruled-zero":
            sol = ruled.solve_zero_chern(float(p["b"]))
        else:
            sol = ruled.solve_x_for_genus(int(p["genus"]), int(p["m"]), float(p["b"]))
        return MetricFile.from_admissible(self.kind, sol, self.arrays["grid_z"].size)
