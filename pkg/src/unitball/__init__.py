"""Numerical checks of the unit-ball theorem for surfaces of bounded curvature.

A closed smooth surface with every normal curvature at most 1 in absolute
value, lying in an open ball of radius 2, bounds a region containing a unit
ball.  This package samples such surfaces, verifies the steps of that
argument on them, and builds the genus-2 fishbowl that shows the volume
bound fails without the radius-2 hypothesis.
"""
from .catalog import (Arc, Line, Polynomial, ProfileCurve, RadialGraph, Surface, make_cylinder,
                      make_ellipsoid, make_perturbed_sphere, make_revolution, make_sphere, make_torus,
                      make_tube_segment)
from .errors import (DegeneratePatch, GeometryError, GeometryOverlap, InvalidRadius, NoFeasibleStart,
                     NonpositiveRadius, NotWatertight, OnSurface, OriginOnSurface, PreconditionFailed,
                     ProjectionUndefined, SelfIntersecting, SpecError, StitchMismatch)
from .fishbowl import (MAIN_BODY_VOLUME, FishbowlParams, build_fishbowl, fishbowl_report,
                       main_body_volume, main_body_volume_quadrature)
from .geometry import ParamPoint, Patch, curvature_sample, max_abs_normal_curvature, normal_curvature
from .mesh import BallSpec, TriMesh, enclosed_volume, euler_characteristic, genus, tessellate
from .probe import ProbeConfig, probe_min_volume
from .surfacespec import load_spec, parse_config, parse_inline
from .verifier import (VerificationReport, check_bounding_ball, check_curvature_hypothesis,
                       check_enclosed_ball_lemma, check_projection_short, check_star_shape,
                       trace_geodesic, verify_theorem)

__version__ = "0.1.0"
