"""Time-series container and CSV round-tripping for the three state representations.

CSV layouts (one row per recorded step, 17 significant digits):

* vector:   ``t,x_1,...,x_n``
* matrix:   ``t,x_11,x_12,...,x_nn``          (row-major)
* operator: ``t,re_11,im_11,...,re_nn,im_nn`` (row-major, re/im pairs)
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError

KINDS = ("vector", "matrix", "operator")


def _fmt(v: float) -> str:
    return format(v, ".17g")


def _header(kind: str, n: int) -> list[str]:
    if kind == "vector":
        return ["t"] + [f"x_{i + 1}" for i in range(n)]
    if kind == "matrix":
        return ["t"] + [f"x_{i + 1}{j + 1}" for i in range(n) for j in range(n)]
    return ["t"] + [s for i in range(n) for j in range(n)
                    for s in (f"re_{i + 1}{j + 1}", f"im_{i + 1}{j + 1}")]


@dataclass
class Trajectory:
    """Recorded states of one integration run.

    ``states`` has shape ``(T, n)`` for the vector form and ``(T, n, n)``
    (real or complex) for the matrix and operator forms.  ``meta`` carries
    integrator settings and the invariant-drift maxima observed along the run.
    """

    times: np.ndarray
    states: np.ndarray
    kind: str = "vector"
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        self.states = np.asarray(self.states)
        if self.kind not in KINDS:
            raise ValidationError(f"unknown trajectory kind {self.kind!r}")
        if self.times.ndim != 1 or len(self.times) != len(self.states):
            raise ValidationError("times and states must have matching length")
        if len(self.times) > 1 and not np.all(np.diff(self.times) > 0):
            raise ValidationError("times must be strictly increasing")
        expected_ndim = 2 if self.kind == "vector" else 3
        if self.states.ndim != expected_ndim:
            raise ValidationError(
                f"{self.kind} trajectory expects {expected_ndim}-d states, "
                f"got shape {self.states.shape}")
        if self.kind == "matrix" and self.states.shape[1] != self.states.shape[2]:
            raise ValidationError("matrix states must be square")
        if self.kind == "operator" and self.states.shape[1] != self.states.shape[2]:
            raise ValidationError("operator states must be square")

    def __len__(self) -> int:
        return len(self.times)

    @property
    def n(self) -> int:
        return self.states.shape[1]

    @property
    def final_state(self) -> np.ndarray:
        return self.states[-1]

    def diagonal(self) -> "Trajectory":
        """The vector trajectory carried on the diagonal (real part for operators)."""
        if self.kind == "vector":
            return self
        diags = np.diagonal(self.states, axis1=1, axis2=2)
        if self.kind == "operator":
            diags = diags.real
        return Trajectory(self.times, np.ascontiguousarray(diags), "vector",
                          dict(self.meta, derived_from=self.kind))

    def to_csv(self, path) -> None:
        n = self.n
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(",".join(_header(self.kind, n)) + "\n")
            for t, state in zip(self.times, self.states):
                if self.kind == "vector":
                    vals = state
                elif self.kind == "matrix":
                    vals = state.reshape(-1)
                else:
                    flat = state.reshape(-1)
                    vals = np.empty(2 * flat.size)
                    vals[0::2] = flat.real
                    vals[1::2] = flat.imag
                fh.write(_fmt(t) + "," + ",".join(_fmt(v) for v in vals) + "\n")

    @classmethod
    def from_csv(cls, path) -> "Trajectory":
        try:
            with open(path, "r", encoding="utf-8") as fh:
                lines = [ln.rstrip("\n") for ln in fh if ln.strip()]
        except OSError as exc:
            raise ValidationError(f"cannot read trajectory file {path}: {exc}") from exc
        if not lines:
            raise ValidationError(f"trajectory file {path} is empty")
        cols = lines[0].split(",")
        if len(cols) < 2 or cols[0] != "t":
            raise ValidationError(f"trajectory file {path}: unrecognized header")
        if cols[1] == "x_1":
            kind, n = "vector", len(cols) - 1
        elif cols[1] == "x_11":
            kind = "matrix"
            n = int(round(np.sqrt(len(cols) - 1)))
        elif cols[1] == "re_11":
            kind = "operator"
            n = int(round(np.sqrt((len(cols) - 1) / 2)))
        else:
            raise ValidationError(f"trajectory file {path}: unrecognized header")
        if cols != _header(kind, n):
            raise ValidationError(f"trajectory file {path}: unrecognized header")
        if len(lines) < 2:
            raise ValidationError(f"trajectory file {path}: no data rows")
        try:
            data = np.array([[float(v) for v in ln.split(",")] for ln in lines[1:]])
        except ValueError as exc:
            raise ValidationError(f"trajectory file {path}: non-numeric row: {exc}") from exc
        if data.ndim != 2 or data.shape[1] != len(cols):
            raise ValidationError(f"trajectory file {path}: ragged rows")
        times = data[:, 0]
        body = data[:, 1:]
        if kind == "vector":
            states = body
        elif kind == "matrix":
            states = body.reshape(-1, n, n)
        else:
            states = (body[:, 0::2] + 1j * body[:, 1::2]).reshape(-1, n, n)
        return cls(times, states, kind, {"source": str(path)})
