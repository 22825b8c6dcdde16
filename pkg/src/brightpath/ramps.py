"""Monotone ramp profiles shared by gate schedules and adiabatic runs.

A ramp maps normalized progress s in [0, 1] to [0, 1].  The smooth profile
sin^2(pi s / 2) starts and ends with zero velocity, which suppresses
diabatic ringing at schedule boundaries in full-dynamics runs.
"""

from __future__ import annotations

import numpy as np

RAMP_NAMES = ("linear", "smooth")


def ramp_value(name: str, s):
    """Ramp profile, elementwise; scalars in, scalars out."""
    s = np.asarray(s, dtype=float)
    if name == "linear":
        out = s
    elif name == "smooth":
        out = np.sin(np.pi * s / 2.0) ** 2
    else:
        raise ValueError(f"unknown ramp {name!r}; expected one of {RAMP_NAMES}")
    return out if out.ndim else float(out)


def ramp_rate(name: str, s):
    """Derivative of the ramp profile with respect to s."""
    s = np.asarray(s, dtype=float)
    if name == "linear":
        out = np.ones_like(s)
    elif name == "smooth":
        out = (np.pi / 2.0) * np.sin(np.pi * s)
    else:
        raise ValueError(f"unknown ramp {name!r}; expected one of {RAMP_NAMES}")
    return out if out.ndim else float(out)
