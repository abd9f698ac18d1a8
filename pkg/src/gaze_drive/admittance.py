"""Virtual mass-damper admittance model mapping force to body velocity.

The continuous model is a first-order lag: under a constant force F the
desired velocity follows (F / D) * (1 - exp(-t / tau)) with tau = M / D.
The live loop uses the exact zero-order-hold discretization of that lag,
which is unconditionally stable for any timestep and reproduces the
analytic step response exactly at the sample times (making the closed
form a strict oracle for the filter).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .intent import VirtualForce
from .kinematics import BodyVelocity, RobotGeometry, WheelSpeeds, inverse_kinematics

__all__ = [
    "AdmittanceParams",
    "AdmittanceState",
    "DEFAULT_PARAMS",
    "step_response",
    "filter_step",
    "desired_wheel_speeds",
]

#: Longest filter step accepted before the zero-order-hold assumption on the
#: force input becomes meaningless for this control loop.
MAX_FILTER_DT = 0.1


@dataclass(frozen=True, slots=True)
class AdmittanceParams:
    """Gains of the gaze force pipeline and the admittance filter.

    stiffness: N/m, gaze displacement to force (consumed upstream).
    virtual_mass: kg, damping: N*s/m; their ratio sets the time constant.
    v_max: m/s, componentwise safety saturation of the output velocity.
    """

    stiffness: float = 10.0
    virtual_mass: float = 10.0
    damping: float = 20.0
    v_max: float = 0.5

    def __post_init__(self) -> None:
        for name in ("stiffness", "virtual_mass", "damping", "v_max"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0.0):
                raise ValueError(f"invalid parameter: {name} must be finite and > 0, got {value!r}")

    @property
    def tau(self) -> float:
        """First-order time constant M / D in seconds."""
        return self.virtual_mass / self.damping

    def with_damping(self, damping: float) -> "AdmittanceParams":
        return replace(self, damping=damping)


DEFAULT_PARAMS = AdmittanceParams()


@dataclass(frozen=True, slots=True)
class AdmittanceState:
    """Filtered velocity state owned by the control loop."""

    v: BodyVelocity = BodyVelocity(0.0, 0.0, 0.0)
    t_last: float = 0.0


def step_response(force: VirtualForce, params: AdmittanceParams, t: float) -> BodyVelocity:
    """Closed-form velocity at time t under a constant force from rest.

    Pure first-order lag, componentwise on (fx, fy); no saturation is
    applied. This is the analytic oracle for ``filter_step``.
    """
    if not (math.isfinite(t) and t >= 0.0):
        raise ValueError(f"invalid input: t must be finite and >= 0, got {t!r}")
    ramp = 1.0 - math.exp(-t / params.tau)
    return BodyVelocity(force.fx / params.damping * ramp, force.fy / params.damping * ramp, 0.0)


def _clamp(value: float, limit: float) -> float:
    if value > limit:
        return limit
    if value < -limit:
        return -limit
    return value


def filter_step(
    state: AdmittanceState,
    force: VirtualForce,
    params: AdmittanceParams,
    dt: float,
) -> AdmittanceState:
    """Advance the admittance filter by one step of piecewise-constant force.

    Exact exponential update: v' = v * exp(-dt/tau) + (F/D) * (1 - exp(-dt/tau)),
    componentwise on (vx, vy), followed by a componentwise clamp to +-v_max.
    Yaw is not force-driven and passes through as zero.
    """
    if not (math.isfinite(dt) and 0.0 < dt <= MAX_FILTER_DT):
        raise ValueError(f"invalid timestep: dt must lie in (0, {MAX_FILTER_DT}], got {dt!r}")
    decay = math.exp(-dt / params.tau)
    gain = 1.0 - decay
    vx = _clamp(state.v.vx * decay + force.fx / params.damping * gain, params.v_max)
    vy = _clamp(state.v.vy * decay + force.fy / params.damping * gain, params.v_max)
    return AdmittanceState(v=BodyVelocity(vx, vy, 0.0), t_last=state.t_last + dt)


def desired_wheel_speeds(state: AdmittanceState, geom: RobotGeometry) -> WheelSpeeds:
    """Wheel speed targets for the current filtered velocity."""
    return inverse_kinematics(state.v, geom)
