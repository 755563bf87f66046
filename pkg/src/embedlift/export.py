"""Writers for meshes, tables and the JSON report."""

import json
from pathlib import Path
from typing import Any

import numpy as np
import pandas as pd
from pydantic import BaseModel

from embedlift.grid import PolarGrid
from embedlift.logger import get_logger
from embedlift.surface import HarmonicMapData, lift, surface_jet

logger = get_logger(__name__)

SCHEMA_VERSION = 1


class MeshExport(BaseModel):
    """Summary of a written mesh; `skipped_cells` are (ring, sector) indices."""

    path: Path
    n_vertices: int
    n_faces: int
    skipped_cells: list[tuple[int, int]]


def mesh_export(m: HarmonicMapData, grid: PolarGrid, path: Path) -> MeshExport:
    """Write the lift over a polar grid as a Wavefront OBJ file.

    Vertices are the lifted grid points with normals from the surface jet.
    The center is a single vertex fanned to the first ring by triangles; the
    other rings are joined by quads, wrapping around in θ. Cells touching a
    point where the lift is undefined are left out and listed.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    z = grid.unique_points()
    points = lift(m, z, strict=False)
    normals = surface_jet(m, z, strict=False).normal
    valid = np.all(np.isfinite(points), axis=-1) & np.all(np.isfinite(normals), axis=-1)

    n_theta = grid.n_theta

    def index(ring: int, sector: int) -> int:
        # 0-based position in z; ring 0 is the center
        return 0 if ring == 0 else 1 + (ring - 1) * n_theta + sector % n_theta

    faces, skipped = [], []
    for ring in range(grid.n_r - 1):
        for sector in range(n_theta):
            if ring == 0:
                cell = [index(0, 0), index(1, sector), index(1, sector + 1)]
            else:
                cell = [index(ring, sector), index(ring + 1, sector), index(ring + 1, sector + 1), index(ring, sector + 1)]
            if valid[cell].all():
                faces.append(cell)
            else:
                skipped.append((ring, sector))

    lines = [f"# lift of {m.label}"]
    safe_points = np.where(valid[:, None], points, 0.0)
    safe_normals = np.where(valid[:, None], normals, 0.0)
    lines.extend(f"v {x:.12g} {y:.12g} {w:.12g}" for x, y, w in safe_points)
    lines.extend(f"vn {x:.12g} {y:.12g} {w:.12g}" for x, y, w in safe_normals)
    lines.extend("f " + " ".join(f"{i + 1}//{i + 1}" for i in cell) for cell in faces)
    path.write_text("\n".join(lines) + "\n")
    if skipped:
        logger.warning(f"{m.label}: {len(skipped)} mesh cells skipped")
    logger.info(f"wrote {path} ({len(z)} vertices, {len(faces)} faces)")
    return MeshExport(path=path, n_vertices=len(z), n_faces=len(faces), skipped_cells=skipped)


def samples_to_csv(points: np.ndarray, images: np.ndarray, path: Path) -> Path:
    """Table of extension samples p ↦ E(p)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame = pd.DataFrame(np.column_stack([points, images]), columns=["px", "py", "pz", "ex", "ey", "ez"])
    frame.to_csv(path, index=False)
    return path


def _jsonable(value: Any) -> Any:
    if isinstance(value, BaseModel):
        return _jsonable(value.model_dump(mode="json"))
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, float) and not np.isfinite(value):
        return None
    return value


def write_report(report: dict, path: Path) -> Path:
    """Write report.json with sorted keys; non-finite floats become null."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    payload = {"schema_version": SCHEMA_VERSION, **_jsonable(report)}
    path.write_text(json.dumps(_jsonable(payload), sort_keys=True, indent=2, allow_nan=False) + "\n")
    return path
