"""Camera-to-surface projection for the command console.

Pinhole model with square pixels, principal point at the image center, and
pixel origin at the top-left (+x right, +y down).  Zoom converts to field of
view by angular magnification.  Texture placements pair a geo-registered quad
(a wall rectangle or a ground cell) with the 3x3 homography taking quad-local
(s, t) in [0, 1]^2 to source image pixels, computed from the four exact
corner correspondences of the asymmetric camera-apex frustum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .geo import Point3


class ProjectionError(ValueError):
    """Degenerate frustum or invalid camera geometry."""


def zoom_to_fov(zoom: float, base_fov_h: float) -> float:
    """Horizontal field of view (degrees) at a given optical zoom.

    Angular magnification model: fov = 2 atan(tan(base/2) / zoom).  Strictly
    decreasing in zoom and equal to base_fov_h at zoom 1.
    """
    if zoom < 1.0:
        raise ProjectionError(f"zoom {zoom} must be >= 1")
    if zoom == 1.0:
        return base_fov_h  # exact fixed point, no round-trip through tan/atan
    return math.degrees(2.0 * math.atan(math.tan(math.radians(base_fov_h) / 2.0) / zoom))


@dataclass(frozen=True)
class CameraPose:
    """World pose and intrinsics of a tracked video camera.

    rotation maps world vectors into the camera frame, where +z looks out of
    the lens, +x is image-right and +y is image-down.
    """

    position: Point3
    rotation: Tuple[Tuple[float, float, float], ...]  # 3x3, world -> camera
    image_size: Tuple[int, int]
    base_fov_h: float
    zoom: float = 1.0

    def __post_init__(self):
        R = np.asarray(self.rotation, dtype=float)
        if R.shape != (3, 3) or np.max(np.abs(R.T @ R - np.eye(3))) > 1e-9:
            raise ProjectionError("rotation must be orthonormal (R'R = I within 1e-9)")
        if self.zoom < 1.0:
            raise ProjectionError("zoom must be >= 1")
        if not (0.0 < self.base_fov_h < 180.0):
            raise ProjectionError("base_fov_h must be in (0, 180)")
        if self.image_size[0] <= 0 or self.image_size[1] <= 0:
            raise ProjectionError("image size must be positive")

    @property
    def R(self) -> np.ndarray:
        return np.asarray(self.rotation, dtype=float)

    @property
    def focal_px(self) -> float:
        fov = math.radians(zoom_to_fov(self.zoom, self.base_fov_h))
        return (self.image_size[0] / 2.0) / math.tan(fov / 2.0)


def look_at_rotation(position: Point3, target: Point3, up=(0.0, 0.0, 1.0)) -> Tuple[Tuple[float, ...], ...]:
    """World->camera rotation for a camera at position looking at target."""
    fwd = np.array([target.x - position.x, target.y - position.y, target.z - position.z],
                   dtype=float)
    n = np.linalg.norm(fwd)
    if n == 0:
        raise ProjectionError("camera position equals look-at target")
    fwd /= n
    upv = np.asarray(up, dtype=float)
    right = np.cross(fwd, upv)
    if np.linalg.norm(right) < 1e-12:
        right = np.cross(fwd, np.array([0.0, 1.0, 0.0]))
    right /= np.linalg.norm(right)
    down = np.cross(fwd, right)
    return tuple(tuple(row) for row in np.vstack([right, down, fwd]))


def project_point(cam: CameraPose, p: Point3) -> Tuple[Optional[Tuple[float, float]], bool]:
    """Pinhole projection; the flag is False for points at or behind the camera."""
    pc = cam.R @ np.array([p.x - cam.position.x, p.y - cam.position.y, p.z - cam.position.z])
    if pc[2] <= 0.0:
        return None, False
    f = cam.focal_px
    w, h = cam.image_size
    return (w / 2.0 + f * pc[0] / pc[2], h / 2.0 + f * pc[1] / pc[2]), True


def unproject(cam: CameraPose, pixel: Tuple[float, float], depth: float) -> Point3:
    """Analytic inverse of project_point at the given camera-frame depth."""
    if depth <= 0:
        raise ProjectionError("depth must be > 0")
    f = cam.focal_px
    w, h = cam.image_size
    pc = np.array([(pixel[0] - w / 2.0) * depth / f, (pixel[1] - h / 2.0) * depth / f, depth])
    pw = cam.R.T @ pc
    return Point3(pw[0] + cam.position.x, pw[1] + cam.position.y, pw[2] + cam.position.z)


# Quad-local (s, t) coordinates of the four corners, in storage order.
_CORNER_ST = ((0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0))


@dataclass(frozen=True)
class WallRect:
    """A wall rectangle: corners in (s, t) order (0,0),(1,0),(1,1),(0,1).

    The outward normal is the side the camera must be on; by default it is
    the cross product of the s and t edge directions.
    """

    id: str
    corners: Tuple[Point3, Point3, Point3, Point3]

    def __post_init__(self):
        c = np.array([[p.x, p.y, p.z] for p in self.corners])
        u = c[1] - c[0]
        v = c[3] - c[0]
        if np.linalg.norm(u) == 0 or np.linalg.norm(v) == 0:
            raise ProjectionError(f"wall {self.id}: degenerate edge")
        n = np.cross(u, v)
        nn = np.linalg.norm(n)
        if nn == 0:
            raise ProjectionError(f"wall {self.id}: collinear corners")
        # Coplanarity of the fourth corner within 1e-6 m.
        if abs(np.dot(c[2] - c[0], n / nn)) > 1e-6:
            raise ProjectionError(f"wall {self.id}: corners not coplanar")
        cosang = np.dot(u, v) / (np.linalg.norm(u) * np.linalg.norm(v))
        if abs(cosang) > 1e-6:
            raise ProjectionError(f"wall {self.id}: corners do not form right angles")
        if np.linalg.norm((c[2] - c[1]) - v) > 1e-6:
            raise ProjectionError(f"wall {self.id}: not a parallelogram")

    @property
    def normal(self) -> np.ndarray:
        c = np.array([[p.x, p.y, p.z] for p in self.corners])
        n = np.cross(c[1] - c[0], c[3] - c[0])
        return n / np.linalg.norm(n)


@dataclass(frozen=True)
class TexturePlacement:
    target: str                                  # wall id or "cell:<index>"
    quad: Tuple[Point3, Point3, Point3, Point3]  # geo-registered corners
    homography: Tuple[Tuple[float, float, float], ...]  # (s,t,1) -> image px
    source: str
    timestamp: float

    def to_record(self) -> dict:
        return {
            "target": self.target,
            "quad": [[p.x, p.y, p.z] for p in self.quad],
            "homography": [v for row in self.homography for v in row],
            "source": self.source,
            "timestamp": self.timestamp,
        }


def _homography_from_corners(pixels: Sequence[Tuple[float, float]]) -> np.ndarray:
    """DLT from the four (s,t) <-> pixel correspondences; exact interpolation."""
    A = []
    for (s, t), (u, v) in zip(_CORNER_ST, pixels):
        A.append([s, t, 1, 0, 0, 0, -u * s, -u * t, -u])
        A.append([0, 0, 0, s, t, 1, -v * s, -v * t, -v])
    A = np.asarray(A, dtype=float)
    _, sv, Vt = np.linalg.svd(A)
    if sv[-2] == 0 or sv[0] / sv[-2] > 1e12:
        raise ProjectionError("near-singular corner correspondences")
    H = Vt[-1].reshape(3, 3)
    H = H / np.linalg.norm(H)
    # Fix the overall sign so equal inputs yield identical matrices.
    flat = H.ravel()
    pivot = flat[np.argmax(np.abs(flat))]
    if pivot < 0:
        H = -H
    if abs(np.linalg.det(H)) <= 1e-12:
        raise ProjectionError("singular homography")
    return H


def _placement_for_quad(cam: CameraPose, target: str, corners: Sequence[Point3],
                        source: str, timestamp: float) -> TexturePlacement:
    pixels = []
    for p in corners:
        px, in_front = project_point(cam, p)
        if not in_front:
            raise ProjectionError(f"{target}: corner behind camera")
        pixels.append(px)
    H = _homography_from_corners(pixels)
    return TexturePlacement(
        target=target,
        quad=tuple(corners),
        homography=tuple(tuple(row) for row in H),
        source=source,
        timestamp=timestamp,
    )


def wall_frustum_homography(cam: CameraPose, wall: WallRect,
                            source: str = "", timestamp: float = 0.0) -> TexturePlacement:
    """Placement for a wall from the camera-apex frustum over the rectangle.

    The camera must lie strictly on the wall's outward side; otherwise the
    frustum is degenerate and the placement is rejected.
    """
    c0 = wall.corners[0]
    side = np.dot(wall.normal, np.array([cam.position.x - c0.x,
                                         cam.position.y - c0.y,
                                         cam.position.z - c0.z]))
    if side <= 0:
        raise ProjectionError(f"wall {wall.id}: camera on or behind the wall plane")
    return _placement_for_quad(cam, wall.id, wall.corners, source, timestamp)


@dataclass(frozen=True)
class GroundCell:
    index: int
    x0: float
    y0: float
    x1: float
    y1: float

    @property
    def corners(self) -> Tuple[Point3, Point3, Point3, Point3]:
        return (Point3(self.x0, self.y0, 0.0), Point3(self.x1, self.y0, 0.0),
                Point3(self.x1, self.y1, 0.0), Point3(self.x0, self.y1, 0.0))


def grid_ground(bounds: Tuple[float, float, float, float], cell: float) -> List[GroundCell]:
    """Tile the AOI bounding rectangle with cell-sized squares, row-major.

    Edge cells are clipped to the AOI, so partial rows/columns are included.
    """
    if cell <= 0:
        raise ValueError("cell size must be > 0")
    xmin, ymin, xmax, ymax = bounds
    if xmax <= xmin or ymax <= ymin:
        raise ValueError("empty AOI bounds")
    nx = max(1, math.ceil((xmax - xmin) / cell))
    ny = max(1, math.ceil((ymax - ymin) / cell))
    cells = []
    for j in range(ny):
        for i in range(nx):
            cells.append(GroundCell(
                index=j * nx + i,
                x0=xmin + i * cell,
                y0=ymin + j * cell,
                x1=min(xmin + (i + 1) * cell, xmax),
                y1=min(ymin + (j + 1) * cell, ymax),
            ))
    return cells


def _point_in_poly(p, poly) -> bool:
    # Winding-agnostic ray-crossing test (boundary treatment immaterial here).
    inside = False
    x0, y0 = poly[-1]
    for x1, y1 in poly:
        if (y0 > p[1]) != (y1 > p[1]):
            xi = x0 + (p[1] - y0) * (x1 - x0) / (y1 - y0)
            if p[0] < xi:
                inside = not inside
        x0, y0 = x1, y1
    return inside


def _segs_cross(a, b, c, d) -> bool:
    def cr(o, p, q):
        return (p[0] - o[0]) * (q[1] - o[1]) - (p[1] - o[1]) * (q[0] - o[0])
    d1, d2 = cr(c, d, a), cr(c, d, b)
    d3, d4 = cr(a, b, c), cr(a, b, d)
    return ((d1 > 0) != (d2 > 0)) and ((d3 > 0) != (d4 > 0))


def _polys_overlap(p1, p2) -> bool:
    if any(_point_in_poly(v, p2) for v in p1) or any(_point_in_poly(v, p1) for v in p2):
        return True
    n1, n2 = len(p1), len(p2)
    return any(_segs_cross(p1[i], p1[(i + 1) % n1], p2[j], p2[(j + 1) % n2])
               for i in range(n1) for j in range(n2))


def place_on_ground(cam: CameraPose, cells: Sequence[GroundCell],
                    source: str = "", timestamp: float = 0.0) -> List[TexturePlacement]:
    """Placements for every cell fully in front of the camera whose projected
    quad overlaps the image rectangle; output ordered by cell index."""
    w, h = cam.image_size
    image_rect = [(0.0, 0.0), (float(w), 0.0), (float(w), float(h)), (0.0, float(h))]
    placements = []
    for cell in sorted(cells, key=lambda c: c.index):
        pixels = []
        for p in cell.corners:
            px, in_front = project_point(cam, p)
            if not in_front:
                break
            pixels.append(px)
        if len(pixels) < 4:
            continue
        if not _polys_overlap(pixels, image_rect):
            continue
        placements.append(_placement_for_quad(cam, f"cell:{cell.index}",
                                              cell.corners, source, timestamp))
    return placements


def video_quad(cam: CameraPose, range_m: float = 10.0) -> Tuple[Point3, Point3, Point3, Point3]:
    """Corners of the camera image plane placed range_m along the view ray;
    the size is proportional so any range along the axis renders equivalently."""
    w, h = cam.image_size
    return (unproject(cam, (0.0, 0.0), range_m),
            unproject(cam, (float(w), 0.0), range_m),
            unproject(cam, (float(w), float(h)), range_m),
            unproject(cam, (0.0, float(h)), range_m))
