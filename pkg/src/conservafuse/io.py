"""JSON / CSV encodings shared by the CLI and the scripts."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ValidationError
from .fusion import SplitEstimate


class ProblemFormatError(ValidationError):
    pass


def matrix_to_json(M) -> dict:
    M = np.asarray(M, dtype=float)
    return {"dim": int(M.shape[0]), "data": M.tolist()}


def parse_matrix(obj, name: str = "matrix") -> np.ndarray:
    """Nested row-major list, scalar, or ``{"dim": n, "data": [[...]]}``."""
    if isinstance(obj, dict):
        if "data" not in obj:
            raise ProblemFormatError(f"{name}: object form needs a 'data' field")
        M = np.asarray(obj["data"], dtype=float)
        if "dim" in obj and M.shape != (obj["dim"], obj["dim"]):
            raise ProblemFormatError(f"{name}: dim={obj['dim']} but data has shape {M.shape}")
        return M
    try:
        M = np.asarray(obj, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ProblemFormatError(f"{name}: not a numeric matrix") from exc
    if M.ndim == 0:
        M = M.reshape(1, 1)
    return M


def parse_estimate(obj, name: str, rho: float | None = None) -> SplitEstimate:
    """``{"mean": [...], "P": ..., "Q": ...}``; ``{"C": ...}`` splits by ``rho`` (or Q = 0)."""
    if not isinstance(obj, dict):
        raise ProblemFormatError(f"{name}: expected an object")
    mean = obj.get("mean")
    if "P" in obj:
        P = parse_matrix(obj["P"], f"{name}.P")
        Q = parse_matrix(obj["Q"], f"{name}.Q") if "Q" in obj else np.zeros_like(P)
        return SplitEstimate(P, Q, mean)
    if "C" in obj:
        C = parse_matrix(obj["C"], f"{name}.C")
        if rho is None:
            return SplitEstimate.from_covariance(C, mean)
        return SplitEstimate.from_rho(C, rho, mean)
    raise ProblemFormatError(f"{name}: needs 'P' (and 'Q') or 'C'")


@dataclass
class Problem:
    estA: SplitEstimate
    estB: SplitEstimate
    rho: float | None = None
    cross_covariances: list = field(default_factory=list)

    @property
    def dim(self) -> int:
        return self.estA.dim


def problem_from_json(obj) -> Problem:
    if not isinstance(obj, dict) or "estA" not in obj or "estB" not in obj:
        raise ProblemFormatError("problem needs 'estA' and 'estB'")
    rho = obj.get("rho")
    if rho is not None:
        rho = float(rho)
    estA = parse_estimate(obj["estA"], "estA", rho)
    estB = parse_estimate(obj["estB"], "estB", rho)
    raw = obj.get("P_AB", [])
    if isinstance(raw, dict) or (raw and np.ndim(raw) == 2):
        raw = [raw]
    pabs = []
    for item in raw:
        if isinstance(item, dict) and "P_AB" in item:
            item = item["P_AB"]
        pabs.append(parse_matrix(item, "P_AB"))
    return Problem(estA, estB, rho, pabs)


def load_problem(path) -> Problem:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ProblemFormatError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemFormatError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from exc
    return problem_from_json(obj)


def estimate_to_json(est: SplitEstimate) -> dict:
    out = {"P": est.P.tolist(), "Q": est.Q.tolist()}
    if est.mean is not None:
        out["mean"] = est.mean.tolist()
    return out


def dumps(obj) -> str:
    return json.dumps(obj, indent=2)


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def polyline_rows(label: str, theta, points):
    for t, (x1, x2) in zip(theta, points):
        yield f"{label},{_fmt(t)},{_fmt(x1)},{_fmt(x2)}"


def write_polylines(path, curves) -> None:
    """``curves``: iterable of ``(label, theta, points)``; header ``label,theta,x1,x2``."""
    lines = ["label,theta,x1,x2"]
    for label, theta, points in curves:
        lines.extend(polyline_rows(label, theta, points))
    Path(path).write_text("\n".join(lines) + "\n")


def read_polylines(path) -> dict:
    """Inverse of :func:`write_polylines`: ``{label: (theta, points)}``."""
    out: dict = {}
    for line in Path(path).read_text().splitlines()[1:]:
        label, t, x1, x2 = line.split(",")
        out.setdefault(label, ([], []))
        out[label][0].append(float(t))
        out[label][1].append((float(x1), float(x2)))
    return {k: (np.array(t), np.array(p)) for k, (t, p) in out.items()}
