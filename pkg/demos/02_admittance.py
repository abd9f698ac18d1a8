"""Admittance filter behavior under the three damping settings.

A constant 10 N virtual force is applied from rest. Lower damping gives a
higher steady-state speed (F/D) and a slower time constant (tau = M/D).
Writes admittance_step.png when matplotlib is importable.
"""

from gaze_drive import AdmittanceParams, AdmittanceState, VirtualForce, filter_step, step_response

FORCE = VirtualForce(10.0, 0.0)
DT = 1.0 / 30.0
HORIZON = 6.0

curves = {}
for damping in (10.0, 20.0, 30.0):
    params = AdmittanceParams(stiffness=10.0, virtual_mass=10.0, damping=damping, v_max=10.0)
    state = AdmittanceState()
    ts, vs = [0.0], [0.0]
    while state.t_last < HORIZON:
        state = filter_step(state, FORCE, params, DT)
        ts.append(state.t_last)
        vs.append(state.v.vx)
    curves[damping] = (ts, vs)
    analytic = step_response(FORCE, params, params.tau).vx
    print(f"D={damping:4.0f} N*s/m  tau={params.tau:.3f} s  v(tau)={analytic:.4f} m/s  "
          f"steady state F/D={10.0 / damping:.3f} m/s  filter end={vs[-1]:.4f} m/s")

print("\nthe discrete filter equals the closed form at every sample "
      "(exact zero-order-hold discretization); see tests/test_admittance.py")

try:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    print("matplotlib not available; skipping plot")
else:
    fig, ax = plt.subplots(figsize=(7, 4))
    for damping, (ts, vs) in curves.items():
        ax.plot(ts, vs, label=f"D = {damping:.0f} N*s/m")
    ax.set_xlabel("time [s]")
    ax.set_ylabel("velocity [m/s]")
    ax.set_title("Admittance step response, F = 10 N, M = 10 kg")
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig("admittance_step.png", dpi=120)
    print("wrote admittance_step.png")
