#pragma once

// Adaptive Gauss-Kronrod integration on a line, periodic trapezoid rule on the
// circle, and the Weyl plane-wave expansion used to check the Green tensor.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <queue>
#include <tuple>
#include <type_traits>
#include <utility>
#include <vector>

#include "lossypdc/constants.hpp"
#include "lossypdc/errors.hpp"

namespace lossypdc {

struct QuadratureSpec {
  double rel_tol = 1e-8;
  double abs_floor = 0.0;
  int max_subdivisions = 200000;
  /// Integrate over theta with x = a + (b - a) sin(theta); removes an
  /// inverse square-root endpoint singularity at b.
  bool sin_map = false;
  /// Upper bound on initial panel width in the integration variable (theta
  /// when sin_map is set). Zero leaves the interval as one panel.
  double max_panel_width = 0.0;
  int max_angular_points = 1 << 16;

  void validate() const {
    if (!(rel_tol > 0.0)) throw UsageError("quadrature: rel_tol must be positive");
    if (!(abs_floor >= 0.0)) throw UsageError("quadrature: abs_floor must be non-negative");
    if (max_subdivisions < 1) throw UsageError("quadrature: max_subdivisions must be >= 1");
    if (!(max_panel_width >= 0.0)) throw UsageError("quadrature: max_panel_width must be >= 0");
    if (max_angular_points < 8) throw UsageError("quadrature: max_angular_points must be >= 8");
  }
};

template <class T>
struct QuadratureResult {
  T value;
  double error = 0.0;
  long evaluations = 0;
  int panels = 0;
};

namespace detail {

template <class T>
T zero_value() {
  if constexpr (requires { T::Zero(); }) {
    return T::Zero();
  } else {
    return T{};
  }
}

template <class T>
double magnitude(const T& v) {
  if constexpr (requires { v.norm(); }) {
    return static_cast<double>(v.norm());
  } else {
    return std::abs(v);
  }
}

// 21-point Kronrod extension of the 10-point Gauss rule (QUADPACK qk21).
inline constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};
inline constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077958109831074, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
inline constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

template <class T>
struct Panel {
  double a;
  double b;
  T value;
  double error;
  bool at_roundoff;  // error is the rounding floor of the panel
};

template <class T, class G>
Panel<T> gauss_kronrod_21(G& g, double a, double b) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);

  std::array<T, 21> fv;
  fv[10] = g(centre);
  for (int j = 0; j < 10; ++j) {
    const double dx = half * kXgk[j];
    fv[j] = g(centre - dx);
    fv[20 - j] = g(centre + dx);
  }

  T resk = kWgk[10] * fv[10];
  T resg = zero_value<T>();
  for (int j = 0; j < 10; ++j) {
    resk += kWgk[j] * (fv[j] + fv[20 - j]);
    if (j % 2 == 1) resg += kWg[j / 2] * (fv[j] + fv[20 - j]);
  }
  const T mean = 0.5 * resk;
  double resabs = kWgk[10] * magnitude(fv[10]);
  double resasc = kWgk[10] * magnitude(T(fv[10] - mean));
  for (int j = 0; j < 10; ++j) {
    resabs += kWgk[j] * (magnitude(fv[j]) + magnitude(fv[20 - j]));
    resasc += kWgk[j] * (magnitude(T(fv[j] - mean)) + magnitude(T(fv[20 - j] - mean)));
  }
  const double scale = std::abs(half);
  resabs *= scale;
  resasc *= scale;

  double err = magnitude(T(resk - resg)) * scale;
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  const double floor = 50.0 * eps * resabs;
  return {a, b, T(resk * half), std::max(err, floor), err <= floor};
}

}  // namespace detail

/// Adaptive 21-point Gauss-Kronrod quadrature of f over [a, b].
///
/// Panels are bisected largest-error first until the summed error estimate is
/// below max(abs_floor, rel_tol |value|), or until the largest remaining
/// error is the rounding floor of its panel. The value is summed in panel
/// order, so results are bit-reproducible. Throws ConvergenceError when the
/// panel budget runs out.
template <class F>
auto integrate_radial(F&& f, double a, double b, const QuadratureSpec& spec) {
  using T = std::decay_t<std::invoke_result_t<F&, double>>;
  spec.validate();
  if (!(a < b)) throw UsageError("integrate_radial: requires a < b");

  long evaluations = 0;
  auto g = [&](double t) -> T {
    ++evaluations;
    if (!spec.sin_map) return T(f(t));
    const double width = b - a;
    return T(f(a + width * std::sin(t)) * (width * std::cos(t)));
  };
  const double lo = spec.sin_map ? 0.0 : a;
  const double hi = spec.sin_map ? 0.5 * kPi : b;

  std::size_t initial = 1;
  if (spec.max_panel_width > 0.0)
    initial = static_cast<std::size_t>(std::ceil((hi - lo) / spec.max_panel_width));
  if (initial > static_cast<std::size_t>(spec.max_subdivisions))
    throw ConvergenceError("integrate_radial: oscillation cap needs more panels than the budget",
                           0.0, std::numeric_limits<double>::infinity());
  initial = std::max<std::size_t>(initial, 1);

  std::vector<detail::Panel<T>> panels;
  panels.reserve(initial);
  for (std::size_t j = 0; j < initial; ++j) {
    const double pa = lo + (hi - lo) * static_cast<double>(j) / static_cast<double>(initial);
    const double pb = j + 1 == initial
                          ? hi
                          : lo + (hi - lo) * static_cast<double>(j + 1) / static_cast<double>(initial);
    panels.push_back(detail::gauss_kronrod_21<T>(g, pa, pb));
  }

  auto sum_panels = [&] {
    T total = detail::zero_value<T>();
    double err = 0.0;
    for (const auto& p : panels) {
      total += p.value;
      err += p.error;
    }
    return std::pair{total, err};
  };

  auto by_error = [&](std::size_t l, std::size_t r) {
    if (panels[l].error != panels[r].error) return panels[l].error < panels[r].error;
    return l > r;
  };
  std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(by_error)> queue(by_error);
  for (std::size_t j = 0; j < panels.size(); ++j) queue.push(j);

  auto [total, error] = sum_panels();
  int since_resum = 0;
  while (error > std::max(spec.abs_floor, spec.rel_tol * detail::magnitude(total))) {
    if (panels.size() >= static_cast<std::size_t>(spec.max_subdivisions))
      throw ConvergenceError("integrate_radial: subdivision budget exhausted",
                             detail::magnitude(total), error);
    const std::size_t worst = queue.top();
    if (panels[worst].at_roundoff) break;
    queue.pop();
    const auto old = panels[worst];
    const double mid = 0.5 * (old.a + old.b);
    if (!(mid > old.a && mid < old.b))
      throw ConvergenceError("integrate_radial: panel width reached machine resolution",
                             detail::magnitude(total), error);
    panels[worst] = detail::gauss_kronrod_21<T>(g, old.a, mid);
    panels.push_back(detail::gauss_kronrod_21<T>(g, mid, old.b));
    queue.push(worst);
    queue.push(panels.size() - 1);

    total += panels[worst].value + panels.back().value - old.value;
    error += panels[worst].error + panels.back().error - old.error;
    if (++since_resum == 256) {
      std::tie(total, error) = sum_panels();
      since_resum = 0;
    }
  }
  std::tie(total, error) = sum_panels();
  return QuadratureResult<T>{total, error, evaluations, static_cast<int>(panels.size())};
}

/// Trapezoid rule for a 2 pi periodic f, doubling the point count from
/// `initial_points` until successive estimates agree.
template <class F>
auto integrate_angular(F&& f, const QuadratureSpec& spec, int initial_points = 8) {
  using T = std::decay_t<std::invoke_result_t<F&, double>>;
  constexpr double eps = std::numeric_limits<double>::epsilon();
  spec.validate();
  if (initial_points < 1) throw UsageError("integrate_angular: initial_points must be >= 1");

  int n = initial_points;
  T sum = detail::zero_value<T>();
  double abs_sum = 0.0;
  for (int j = 0; j < n; ++j) {
    const T v = f(2.0 * kPi * j / n);
    sum += v;
    abs_sum += detail::magnitude(v);
  }
  T estimate = sum * (2.0 * kPi / n);
  long evaluations = n;

  while (true) {
    if (2 * n > spec.max_angular_points)
      throw ConvergenceError("integrate_angular: point budget exhausted",
                             detail::magnitude(estimate), std::numeric_limits<double>::infinity());
    for (int j = 0; j < n; ++j) {
      const T v = f(2.0 * kPi * (j + 0.5) / n);
      sum += v;
      abs_sum += detail::magnitude(v);
    }
    evaluations += n;
    n *= 2;
    const T refined = sum * (2.0 * kPi / n);
    const double change = detail::magnitude(T(refined - estimate));
    const double resabs = abs_sum * (2.0 * kPi / n);
    estimate = refined;
    if (change <= std::max({spec.abs_floor, spec.rel_tol * detail::magnitude(refined),
                            100.0 * eps * resabs}))
      return QuadratureResult<T>{refined, change, evaluations, n};
  }
}

/// Plane-wave (Weyl) expansion of the scalar spherical wave next to its
/// closed form.
struct WeylComparison {
  cd quadrature;
  cd closed_form;
  double error_estimate = 0.0;
};

/// (i / 8 pi^2) \int d^2k e^{i k.rho + i q_z z} / q_z over propagating and
/// evanescent sectors, and e^{i q r} / (4 pi r). Requires z > 0, q > 0, rho >= 0.
WeylComparison weyl_oracle(double z, double rho, double q, const QuadratureSpec& spec = {});

}  // namespace lossypdc
