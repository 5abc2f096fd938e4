"""Shared fixtures: a config factory in scaled units.

Most tests work in units of gamma with a toy carrier (omega/gamma a few
thousand) so that carrier-resolved checks stay cheap; the physics under
test is scale-free.
"""

import pytest

from pulsekick import parse_config

GAMMA = 1.9e7          # rad/s
DIPOLE = 3.584e-29     # C m
MASS = 1.44e-25        # kg


def scaled_config(delta=-5.0, rabi=0.1, omega=5000.0, rise=100.0, plateau=300.0,
                  fall=None, fidelity="full-obe", neglect_dxb=False, gvf=1.0,
                  mode_volume=None, rtol=1e-10, atol=1e-12, shape="raised_cosine"):
    """Build a SimConfig from gamma-scaled parameters."""
    lines = [
        "[scaled]",
        f"gamma = {GAMMA!r}",
        f"omega_over_gamma = {float(omega)!r}",
        f"delta_over_gamma = {float(delta)!r}",
        f"rabi0_over_gamma = {float(rabi)!r}",
        f"gamma_rise_time = {float(rise)!r}",
        f"gamma_plateau = {float(plateau)!r}",
    ]
    if fall is not None:
        lines.append(f"gamma_fall_time = {float(fall)!r}")
    if shape != "raised_cosine":
        lines.append(f'shape = "{shape}"')
    lines += [
        "",
        "[atom]",
        f"dipole = {DIPOLE!r}",
        f"mass = {MASS!r}",
        "",
        "[field]",
    ]
    if gvf != 1.0:
        lines.append(f"group_velocity_factor = {float(gvf)!r}")
    if mode_volume is not None:
        lines.append(f"mode_volume = {float(mode_volume)!r}")
    lines += [
        "",
        "[numerics]",
        f'fidelity = "{fidelity}"',
        f"neglect_dxb = {'true' if neglect_dxb else 'false'}",
        f"rtol = {rtol!r}",
        f"atol = {atol!r}",
    ]
    return parse_config("\n".join(lines))


@pytest.fixture
def mk():
    """Factory fixture for scaled configs."""
    return scaled_config
