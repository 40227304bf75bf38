#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

namespace heis {

using State = std::vector<double>;
using VectorField = std::function<State(const State&)>;

/// One classical fourth-order Runge-Kutta step of y' = f(y).
inline State rk4_step(const VectorField& f, const State& y, double h) {
  auto axpy = [](const State& a, double s, const State& b) {
    State r(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) r[k] = a[k] + s * b[k];
    return r;
  };
  State k1 = f(y);
  State k2 = f(axpy(y, h / 2, k1));
  State k3 = f(axpy(y, h / 2, k2));
  State k4 = f(axpy(y, h, k3));
  State out(y.size());
  for (std::size_t k = 0; k < y.size(); ++k) out[k] = y[k] + h / 6 * (k1[k] + 2 * k2[k] + 2 * k3[k] + k4[k]);
  return out;
}

/// Fixed-step RK4 from s = 0 to s = s_end; the last step is shortened to land exactly.
/// `observe(s, y)` is called at s = 0 and after every step when provided.
inline State rk4_integrate(const VectorField& f, State y, double s_end, double step,
                           const std::function<void(double, const State&)>& observe = {}) {
  if (observe) observe(0.0, y);
  if (s_end <= 0) return y;
  auto steps = static_cast<std::size_t>(std::ceil(s_end / step - 1e-9));
  double h = s_end / static_cast<double>(steps);
  for (std::size_t k = 1; k <= steps; ++k) {
    y = rk4_step(f, y, h);
    if (observe) observe(h * static_cast<double>(k), y);
  }
  return y;
}

}  // namespace heis
