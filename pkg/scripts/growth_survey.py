#!/usr/bin/env python3
"""Survey growth of the built-in groups against every applicable floor.

Prints, for each group, the measured ball sizes, the measured growth
constant min s_n/n^d, and the margin over the closed-form floors.
"""

import argparse
from fractions import Fraction

from growthlab import bounds, heat
from growthlab.groups import ball_profile, builtin_group

SURVEY = [
    ("z", 1, 1, 60),
    ("dihedralinf", 1, 1, 40),
    ("zd:2", 2, 2, 30),
    ("zd:3", 3, 3, 12),
    ("zd:4", 4, 4, 8),
    ("heisenberg", 4, 3, 12),
    ("ut:4", 10, 6, 6),
]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--budget", type=int, default=10**7)
    args = ap.parse_args()
    for name, degree, hirsch, radius in SURVEY:
        model = builtin_group(name)
        profile = ball_profile(model, radius, args.budget)
        c = heat.measured_growth_constant(profile, degree)
        floor = bounds.ball_floor_virtually_nilpotent(degree, hirsch, radius)
        measured = profile.size(radius)
        print(f"{model.name:12s} d={degree:2d} h={hirsch}  s_{radius} = {measured}")
        print(f"{'':12s} measured c = {float(c):.4f}   floor at n={radius}: "
              f"{float(floor):.3e}   margin x{float(Fraction(measured) / floor):.3e}")


if __name__ == "__main__":
    main()
