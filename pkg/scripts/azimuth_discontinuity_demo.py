"""Why terminals should track the satellite direction, not azimuth/elevation.

For a pass near zenith, the azimuth angle of the satellite flips by almost
180 degrees within a couple of time steps while the actual direction change
stays tiny. Run this script to print both quantities side by side around
the overhead point of the default scenario.
"""

import math

import numpy as np

from leobeam.config import RunConfig
from leobeam.orbit import propagate_circular
from leobeam.sim import build_context


def azimuth_elevation(direction_local):
    east, north, up = direction_local
    az = math.degrees(math.atan2(east, north)) % 360.0
    el = math.degrees(math.asin(up))
    return az, el


def main():
    ctx = build_context(RunConfig.default())
    # user 200 m cross-track of the overhead point: the pass is near-zenith
    user = ctx.earth.radius_m * ctx.frame.u_sat + 200.0 * ctx.frame.u_y
    user = user / np.linalg.norm(user) * ctx.earth.radius_m
    up = user / np.linalg.norm(user)
    north = ctx.frame.u_x - float(ctx.frame.u_x @ up) * up
    north = north / np.linalg.norm(north)
    east = np.cross(north, up)

    print(f"{'t [s]':>7} {'azimuth [deg]':>14} {'elevation [deg]':>16} "
          f"{'direction step [deg]':>21}")
    prev_dir = None
    for t in np.arange(-2.0, 2.01, 0.5):
        state = propagate_circular(ctx.state, float(t), ctx.earth)
        los = state.position_m - user
        d = los / np.linalg.norm(los)
        az, el = azimuth_elevation((float(d @ east), float(d @ north), float(d @ up)))
        step = "" if prev_dir is None else \
            f"{math.degrees(math.acos(min(1.0, float(d @ prev_dir)))):21.4f}"
        print(f"{t:7.1f} {az:14.2f} {el:16.3f} {step:>21}")
        prev_dir = d
    print("\nThe azimuth column swings by ~180 degrees across the overhead "
          "point while each actual direction step stays below a degree.")


if __name__ == "__main__":
    main()
