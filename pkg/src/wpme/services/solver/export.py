"""
Trajectory CSV export / import.

Columns: t,node_index,x[,y],u  (node_index is the C-order flat index)
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from wpme.exceptions import ScenarioError
from wpme.services.common import read_csv, write_csv
from wpme.services.geometry.fields import ScalarField
from wpme.services.geometry.manifold import ManifoldSpec
from wpme.services.solver.trajectory import Trajectory

_AXIS_NAMES = ("x", "y")


def trajectory_header(manifold: ManifoldSpec) -> list:
    return ["t", "node_index", *_AXIS_NAMES[: manifold.n], "u"]


def _trajectory_rows(traj: Trajectory):
    coords = [c.reshape(-1) for c in traj.manifold.coordinates()]
    for t, state in zip(traj.times, traj.states):
        for node, u in enumerate(state.reshape(-1)):
            yield (float(t), node, *(float(c[node]) for c in coords), float(u))


def write_trajectory_csv(traj: Trajectory, path: Path) -> Path:
    write_csv(path, trajectory_header(traj.manifold), _trajectory_rows(traj))
    return path


def read_initial_state(path: Path, manifold: ManifoldSpec) -> ScalarField:
    """
    Initial data from a CSV: the last snapshot of an exported trajectory, or a
    plain `node_index,u` table.
    """
    path = Path(path)
    if not path.exists():
        raise ScenarioError("initial data file not found", str(path))
    rows = read_csv(path)
    if not rows or "node_index" not in rows[0] or "u" not in rows[0]:
        raise ScenarioError("initial data CSV needs node_index and u columns", str(path))

    if "t" in rows[0]:
        last_t = max(float(r["t"]) for r in rows)
        rows = [r for r in rows if float(r["t"]) == last_t]

    values = np.full(manifold.node_count, np.nan)
    for r in rows:
        node = int(r["node_index"])
        if not 0 <= node < manifold.node_count:
            raise ScenarioError(f"node_index {node} outside the grid", str(path))
        values[node] = float(r["u"])
    if np.any(np.isnan(values)):
        raise ScenarioError(
            f"initial data covers {int(np.sum(~np.isnan(values)))} of {manifold.node_count} nodes", str(path)
        )
    return ScalarField(manifold, values.reshape(manifold.shape))
