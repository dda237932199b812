"""Spherical geometry and the virtual NFOV camera.

Directions live on the unit sphere as (latitude, longitude) degree pairs;
the camera is a 65.5-degree 4:3 gnomonic viewport with zero roll.
"""

import math

from panocam import (
    CameraModel,
    Direction,
    angular_distance,
    fov_outline,
    nfov_pixel_ray,
    nfov_project,
    sphere_to_equirect_px,
    wrapped_delta,
)

# Great-circle distances: a quarter turn on the equator, and two directions
# 15 degrees from the pole on opposite meridians (30 degrees over the top).
print("equator quarter turn:", angular_distance(Direction(0, 0), Direction(0, 90)))
print("over the pole:       ", angular_distance(Direction(75, 0), Direction(75, 180)))

# Componentwise displacement wraps longitude around the seam.
print("wrapped (0,350)->(0,10):", wrapped_delta(Direction(0, 350), Direction(0, 10)))

cam = CameraModel()
print(f"\ncamera: {cam.hfov} deg horizontal, {cam.vfov:.4f} deg vertical, "
      f"{cam.width_px}x{cam.height_px}")

# The center pixel looks straight down the principal axis; the midline of the
# right border sits exactly half the horizontal FOV off axis.
principal = Direction(12, 200)
center_ray = nfov_pixel_ray(cam, principal, (cam.width_px / 2, cam.height_px / 2))
edge_ray = nfov_pixel_ray(cam, principal, (cam.width_px, cam.height_px / 2))
print("center ray offset:", angular_distance(center_ray, principal))
print("edge ray offset:  ", angular_distance(edge_ray, principal))

# Projection is invertible inside the viewport.
d = nfov_pixel_ray(cam, principal, (100.25, 333.75))
x, y = nfov_project(cam, principal, d)
print(f"pixel (100.25, 333.75) -> {d} -> ({x:.9f}, {y:.9f})")

# Equirectangular mapping: x follows longitude, y runs pole to pole.
print("\nequirect px of (0,180) in 3840x1920:", sphere_to_equirect_px(3840, 1920, Direction(0, 180)))
print("equirect px of (-45,90) in 360x180: ", sphere_to_equirect_px(360, 180, Direction(-45, 90)))

# Backprojecting the camera border onto the panorama. A camera straddling the
# longitude seam produces several polyline segments so a display never draws
# a line across the whole image.
segs = fov_outline(cam, Direction(0, 0), 3840, 1920, samples_per_edge=12)
print(f"\noutline at the seam: {len(segs)} segments, "
      f"{sum(len(s) for s in segs)} points")
for k, seg in enumerate(segs):
    xs = seg[:, 0]
    print(f"  segment {k}: x in [{xs.min():7.1f}, {xs.max():7.1f}]")
