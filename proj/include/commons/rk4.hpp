#pragma once

namespace commons {

/// One classic fourth-order Runge-Kutta step for an autonomous system.
/// System must be callable as State(const State&).
template <class System, class State>
State rk4_step(const System& f, const State& y, double dt) {
  const State k1 = f(y);
  const State k2 = f(State(y + (0.5 * dt) * k1));
  const State k3 = f(State(y + (0.5 * dt) * k2));
  const State k4 = f(State(y + dt * k3));
  return y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace commons
