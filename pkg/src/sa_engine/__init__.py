"""Distributed situational-awareness engine.

Spatial information filtering (operation zone / foci / nimbus), occlusion
render directives, top-down map interaction, camera-to-terrain texture
placement, and hub-based state replication among federates.
"""

from .entities import DEFAULT_CLASS_TABLE, Entity, EntityClass, EntityDatabase
from .filtering import (
    AmplificationConfig,
    FilterDecisionSet,
    FocusSet,
    ImpactZone,
    OperationZone,
    Visibility,
    compute_impact_zone,
    run_filter,
    zone_pass,
)
from .geo import AABB3, Disc2, Point3, Polygon2, Polyline2
from .mapview import MapViewState, Route, screen_to_world, world_to_screen
from .occlusion import OcclusionConfig, Occluder, classify_zone, count_layers, make_directive
from .projection import CameraPose, WallRect, wall_frustum_homography, zoom_to_fov
from .scenario import Scenario, load_scenario, replay, run

__version__ = "0.1.0"
