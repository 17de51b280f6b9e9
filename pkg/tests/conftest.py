import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from rangecluster import ProjectionConfig, SceneSpec, Box, synth_scene


@pytest.fixture
def small_cfg():
    """Small grid keeps hand-traced neighborhoods readable."""
    return ProjectionConfig(rows=8, cols=16, fov_up_deg=3.0, fov_down_deg=-25.0)


@pytest.fixture
def two_box_scene():
    """Two boxes 0.5 m apart laterally at 10 m; separation spans many columns.

    Shallow boxes: deep ones expose grazing side faces whose returns
    legitimately fragment under the angle test, which would muddy the
    partition-equality assertions.
    """
    spec = SceneSpec(
        primitives=[
            Box(center=(10.15, -1.25, -1.0), size=(0.3, 2.0, 1.5), class_id=10),
            Box(center=(10.15, 1.25, -1.0), size=(0.3, 2.0, 1.5), class_id=10),
            Box(center=(0.0, 0.0, -1.9), size=(240.0, 240.0, 0.2), class_id=40),
        ],
    )
    return synth_scene(spec, seed=0)


@pytest.fixture
def close_cars_scene():
    """Fronts at 10.0 m and 10.8 m, adjacent in azimuth: a staggered parked pair."""
    spec = SceneSpec(
        primitives=[
            Box(center=(10.15, -1.2, -1.0), size=(0.3, 2.0, 1.5), class_id=10),
            Box(center=(10.95, 0.7, -1.0), size=(0.3, 2.0, 1.5), class_id=10),
            Box(center=(0.0, 0.0, -1.9), size=(240.0, 240.0, 0.2), class_id=40),
        ],
    )
    return synth_scene(spec, seed=0)
