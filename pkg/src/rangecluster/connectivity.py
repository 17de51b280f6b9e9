"""Pair predicates deciding whether two neighboring range-image points
belong to the same object, plus pixel-neighborhood enumeration.

The default predicate is the angle test: for two returns at ranges d_a, d_b
separated by beam angle alpha, the segment between them is seen from the
sensor under

    beta = atan2(d2 * sin(alpha), d1 - d2 * cos(alpha)),  d1 = max, d2 = min

and the pair is connected when beta exceeds a threshold theta. Flat or
gently sloped surfaces give large beta; a depth discontinuity between two
objects gives a small one. Any other symmetric pair predicate can be
injected wherever a condition is accepted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .range_image import ProjectionConfig, RangeImage

PixelPair = tuple[tuple[int, int], tuple[int, int]]

# Batch predicate: (img, rows_a, cols_a, rows_b, cols_b, alpha) -> bool array.
Condition = Callable[
    [RangeImage, np.ndarray, np.ndarray, np.ndarray, np.ndarray, np.ndarray],
    np.ndarray,
]


def separation_angle(d_a: float, d_b: float, alpha: float) -> float:
    """Angle beta under which the segment between two returns is seen.

    atan2 keeps the result correct even when the denominator hits zero
    (d_a == d_b with alpha -> 0 pushes beta to pi/2).
    """
    if d_a <= 0.0 or d_b <= 0.0:
        raise ValueError(f"ranges must be positive, got {d_a}, {d_b}")
    if not 0.0 < alpha < math.pi / 2:
        raise ValueError(f"alpha must lie in (0, pi/2), got {alpha}")
    d1 = max(d_a, d_b)
    d2 = min(d_a, d_b)
    return math.atan2(d2 * math.sin(alpha), d1 - d2 * math.cos(alpha))


def angle_condition(d_a: float, d_b: float, alpha: float, theta_deg: float) -> bool:
    """True when the pair's separation angle exceeds theta (degrees)."""
    if not 0.0 < theta_deg < 90.0:
        raise ValueError(f"theta must lie in (0, 90) degrees, got {theta_deg}")
    return separation_angle(d_a, d_b, alpha) > math.radians(theta_deg)


def neighborhood(
    p: tuple[int, int], rows: int, cols: int, wrap: bool = True
) -> list[tuple[int, int]]:
    """4-connected neighbors of p in up, down, left, right order.

    Columns wrap modulo cols when wrap is set (azimuth is periodic);
    rows never wrap. Grids narrower than 3 columns have no distinct
    wrap neighbors, so wrap degrades to plain adjacency there (the
    query pixel is never returned).
    """
    r, c = p
    if not (0 <= r < rows and 0 <= c < cols):
        raise ValueError(f"pixel {p} out of bounds for {rows}x{cols}")
    out: list[tuple[int, int]] = []
    if r > 0:
        out.append((r - 1, c))
    if r < rows - 1:
        out.append((r + 1, c))
    if wrap and cols > 2:
        out.append((r, (c - 1) % cols))
        out.append((r, (c + 1) % cols))
    else:
        if c > 0:
            out.append((r, c - 1))
        if c < cols - 1:
            out.append((r, c + 1))
    return out


@dataclass
class ConditionParams:
    """Beam-angle increments feeding the angle test.

    horizontal_step is the azimuth increment between adjacent columns;
    vertical_steps[r] is the elevation increment between rows r and r+1.
    """

    theta_deg: float
    horizontal_step: float
    vertical_steps: np.ndarray  # (rows - 1,) radians

    def __post_init__(self) -> None:
        self.vertical_steps = np.asarray(self.vertical_steps, dtype=np.float64)
        if not 0.0 < self.theta_deg < 90.0:
            raise ValueError(f"theta must lie in (0, 90) degrees, got {self.theta_deg}")
        steps = np.concatenate(([self.horizontal_step], self.vertical_steps.ravel()))
        if steps.size and not np.all((steps > 0.0) & (steps < math.pi / 2)):
            raise ValueError("all step angles must lie in (0, pi/2)")

    @classmethod
    def from_projection(cls, cfg: ProjectionConfig, theta_deg: float = 10.0) -> "ConditionParams":
        """Uniform row spacing derived from the projection FOV.

        Scanners with non-uniform ring spacing can pass an explicit
        per-row table instead.
        """
        v_step = cfg.fov_rad / cfg.rows
        return cls(
            theta_deg=theta_deg,
            horizontal_step=2.0 * math.pi / cfg.cols,
            vertical_steps=np.full(max(cfg.rows - 1, 0), v_step),
        )


def pair_alpha(pair: PixelPair, params: ConditionParams, cols: int | None = None) -> float:
    """Beam angle between a 4-adjacent pixel pair (wrap-aware when cols given)."""
    (ra, ca), (rb, cb) = pair
    if (ra, ca) == (rb, cb):
        raise ValueError("pair pixels must differ")
    dc = abs(ca - cb)
    if cols is not None:
        dc = min(dc, cols - dc)
    if ra == rb and dc == 1:
        return params.horizontal_step
    if ca == cb and abs(ra - rb) == 1:
        return float(params.vertical_steps[min(ra, rb)])
    raise ValueError(f"pixels {pair} are not 4-adjacent")


class AngleCondition:
    """Default batch predicate: separation angle vs. a threshold."""

    def __init__(self, theta_deg: float = 10.0):
        if not 0.0 < theta_deg < 90.0:
            raise ValueError(f"theta must lie in (0, 90) degrees, got {theta_deg}")
        self.theta_deg = theta_deg
        self._theta_rad = math.radians(theta_deg)

    def __call__(self, img, rows_a, cols_a, rows_b, cols_b, alpha) -> np.ndarray:
        d_a = img.range[rows_a, cols_a]
        d_b = img.range[rows_b, cols_b]
        d1 = np.maximum(d_a, d_b)
        d2 = np.minimum(d_a, d_b)
        beta = np.arctan2(d2 * np.sin(alpha), d1 - d2 * np.cos(alpha))
        return beta > self._theta_rad


class EuclideanCondition:
    """Naive alternative predicate: 3D distance under a threshold.

    Kept for comparison experiments; it cannot separate close objects.
    """

    def __init__(self, max_distance: float):
        if max_distance <= 0.0:
            raise ValueError("max_distance must be positive")
        self.max_distance = max_distance

    def __call__(self, img, rows_a, cols_a, rows_b, cols_b, alpha) -> np.ndarray:
        pa = img.point_index[rows_a, cols_a]
        pb = img.point_index[rows_b, cols_b]
        if np.any(pa < 0) or np.any(pb < 0):
            raise ValueError("Euclidean condition evaluated on an empty pixel")
        delta = img.cloud.xyz[pa] - img.cloud.xyz[pb]
        return np.einsum("ij,ij->i", delta, delta) <= self.max_distance**2


def always_connected(img, rows_a, cols_a, rows_b, cols_b, alpha) -> np.ndarray:
    """Constant-true predicate; reduces clustering to plain occupancy CCL."""
    return np.ones(np.shape(rows_a), dtype=bool)


def compute_pair_conditions(
    img: RangeImage,
    condition: Condition,
    params: ConditionParams,
    occupancy: np.ndarray,
    wrap: bool = True,
) -> tuple[np.ndarray, np.ndarray]:
    """Evaluate the predicate once for every occupied adjacent pixel pair.

    Returns (cond_right, cond_down): cond_right[r, c] is the decision for
    the pair {(r, c), (r, (c+1) % cols)}, cond_down[r, c] for
    {(r, c), (r+1, c)}. Pairs with an empty side are False. Precomputing
    keeps the expansion loop free of predicate calls; decisions are
    identical because predicates are pure functions of the pair.
    """
    rows, cols = occupancy.shape
    cond_right = np.zeros((rows, cols), dtype=bool)
    cond_down = np.zeros((rows, cols), dtype=bool)

    both_right = occupancy & np.roll(occupancy, -1, axis=1)
    if not wrap:
        both_right[:, cols - 1] = False
    rr, cc = np.nonzero(both_right)
    if rr.size:
        alpha = np.full(rr.shape, params.horizontal_step)
        cond_right[rr, cc] = condition(img, rr, cc, rr, (cc + 1) % cols, alpha)

    if rows > 1:
        both_down = occupancy[:-1] & occupancy[1:]
        rr, cc = np.nonzero(both_down)
        if rr.size:
            alpha = params.vertical_steps[rr]
            cond_down[rr, cc] = condition(img, rr, cc, rr + 1, cc, alpha)

    return cond_right, cond_down
