#include "cwrmt/definetti.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <utility>

// Boost 1.74 pchip calls isnan unqualified.
using std::isnan;
#include <boost/math/interpolators/pchip.hpp>
#include <boost/math/quadrature/gauss.hpp>

#include "cwrmt/errors.hpp"

namespace cwrmt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// tanh(18) is the largest rapidity whose image stays below 1 in double precision.
constexpr double kRapidityCap = 18.0;

using GaussRule = boost::math::quadrature::gauss<double, 20>;

double log_cosh(double y) {
  const double ay = std::abs(y);
  if (ay < 1.0) {
    // cosh y - 1 = 2 sinh^2(y/2) keeps full relative precision near 0.
    const double s = std::sinh(0.5 * ay);
    return std::log1p(2.0 * s * s);
  }
  return ay + std::log1p(std::exp(-2.0 * ay)) - std::numbers::ln2;
}

double log_sum_exp(std::span<const double> xs) {
  double peak = -kInf;
  for (double x : xs) peak = std::max(peak, x);
  if (!std::isfinite(peak)) return peak;
  double acc = 0.0;
  for (double x : xs) acc += std::exp(x - peak);
  return peak + std::log(acc);
}

// h(t) = 1 / (1 - t^2) and its derivatives.
double h_derivative(int n, double t) {
  double factorial = 1.0;
  for (int i = 2; i <= n; ++i) factorial *= i;
  const double sign = (n % 2 == 0) ? 1.0 : -1.0;
  return 0.5 * factorial *
         (std::pow(1.0 - t, -(n + 1)) + sign * std::pow(1.0 + t, -(n + 1)));
}

}  // namespace

// ---------------------------------------------------------------------------
// Potential

Potential::Potential(Parts parts) : parts_(std::move(parts)) {
  if (!parts_.value) throw PreconditionError("potential requires a value function");
}

double Potential::derivative(int order, double t) const {
  switch (order) {
    case 0:
      return parts_.value(t);
    case 1:
      return parts_.d1(t);
    case 2:
      return parts_.d2(t);
    case 4:
      return parts_.d4(t);
    default:
      throw DomainError("potential derivative of order " + std::to_string(order) +
                        " is not provided");
  }
}

double Potential::at_rapidity(double y) const {
  if (parts_.in_rapidity) return parts_.in_rapidity(y);
  return parts_.value(std::tanh(y));
}

Potential curie_weiss_potential(double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw DomainError("curie_weiss_potential: beta must be positive, got " +
                      std::to_string(beta));
  }
  const double inv_beta = 1.0 / beta;

  Potential::Parts parts;
  parts.value = [inv_beta](double t) {
    if (std::abs(t) >= 1.0) return kInf;
    const double y = std::atanh(t);
    return inv_beta * y * y + std::log1p(-t * t);
  };
  parts.d1 = [inv_beta](double t) {
    const double y = std::atanh(t);
    const double h = 1.0 / (1.0 - t * t);
    return h * (2.0 * inv_beta * y - 2.0 * t);
  };
  parts.d2 = [inv_beta](double t) {
    const double y = std::atanh(t);
    const double h = h_derivative(0, t);
    const double h1 = h_derivative(1, t);
    const double y2 = 2.0 * h * h + 2.0 * y * h1;
    const double log_part = -1.0 / ((1.0 + t) * (1.0 + t)) - 1.0 / ((1.0 - t) * (1.0 - t));
    return inv_beta * y2 + log_part;
  };
  parts.d4 = [inv_beta](double t) {
    const double y = std::atanh(t);
    const double h = h_derivative(0, t);
    const double h1 = h_derivative(1, t);
    const double h2 = h_derivative(2, t);
    const double h3 = h_derivative(3, t);
    const double y4 = 6.0 * h1 * h1 + 8.0 * h * h2 + 2.0 * y * h3;
    const double log_part = -6.0 / std::pow(1.0 + t, 4) - 6.0 / std::pow(1.0 - t, 4);
    return inv_beta * y4 + log_part;
  };
  // F(tanh y) = y^2 / beta - 2 ln cosh y
  parts.in_rapidity = [inv_beta](double y) { return inv_beta * y * y - 2.0 * log_cosh(y); };
  parts.even = true;
  std::ostringstream label;
  label << "curie_weiss(beta=" << beta << ")";
  parts.label = label.str();
  return Potential(std::move(parts));
}

Potential make_potential(Potential::Fn value, bool even, std::string label, double h) {
  if (!(h > 0.0)) throw DomainError("make_potential: finite-difference step must be positive");
  Potential::Parts parts;
  // Central differences with one Richardson step to remove the h^2 term, so
  // that t^4 reads as flat at second order and t^6 as flat at fourth.
  parts.d1 = [value, h](double t) {
    auto d = [&](double s) { return (value(t + s) - value(t - s)) / (2.0 * s); };
    return (4.0 * d(h) - d(2.0 * h)) / 3.0;
  };
  parts.d2 = [value, h](double t) {
    auto d = [&](double s) { return (value(t + s) - 2.0 * value(t) + value(t - s)) / (s * s); };
    return (4.0 * d(h) - d(2.0 * h)) / 3.0;
  };
  const double h4 = 5.0 * h;
  parts.d4 = [value, h4](double t) {
    auto d = [&](double s) {
      return (value(t + 2.0 * s) - 4.0 * value(t + s) + 6.0 * value(t) - 4.0 * value(t - s) +
              value(t - 2.0 * s)) /
             std::pow(s, 4);
    };
    return (4.0 * d(h4) - d(2.0 * h4)) / 3.0;
  };
  parts.value = std::move(value);
  parts.even = even;
  parts.label = std::move(label);
  return Potential(std::move(parts));
}

bool probe_boundary_growth(const Potential& p) {
  constexpr double kOuter = 1.0 - 1e-6;
  constexpr double kInner = 1.0 - 1e-3;
  return p(kOuter) > p(kInner) && p(-kOuter) > p(-kInner);
}

double log_density_unnormalized(const Potential& p, double scale, double t) {
  if (!(std::abs(t) < 1.0)) {
    throw DomainError("log_density_unnormalized: t must lie in (-1, 1)");
  }
  return -0.5 * scale * p(t) - std::log1p(-t * t);
}

// ---------------------------------------------------------------------------
// Minimum finding and asymptotics

LaplaceExpansion find_minimum(const Potential& p) {
  constexpr int kGrid = 3601;
  int best = 0;
  double best_value = kInf;
  std::vector<double> ts(kGrid);
  for (int i = 0; i < kGrid; ++i) {
    ts[i] = std::tanh(kRapidityCap * i / (kGrid - 1));
    const double v = p(ts[i]);
    if (v < best_value) {
      best_value = v;
      best = i;
    }
  }
  if (best == kGrid - 1 || !std::isfinite(best_value)) {
    throw ClassificationError("find_minimum: minimum of " + p.label() +
                              " lies on the boundary t -> 1");
  }

  double a = 0.0;
  double lo = best > 0 ? ts[best - 1] : 0.0;
  double hi = ts[best + 1];
  const double slope_lo = p.derivative(1, lo);
  if (lo == 0.0 && slope_lo >= 0.0) {
    a = 0.0;
  } else {
    if (!(slope_lo < 0.0 && p.derivative(1, hi) > 0.0)) {
      throw ClassificationError("find_minimum: derivative of " + p.label() +
                                " does not change sign around the grid minimum");
    }
    while (hi - lo > 1e-13) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      (p.derivative(1, mid) < 0.0 ? lo : hi) = mid;
    }
    a = 0.5 * (lo + hi);
  }

  LaplaceExpansion out;
  out.a = a;
  out.F_at_a = p(a);
  out.lambda = 1.0;
  out.Q = 1.0 / (1.0 - a * a);
  const double second = p.derivative(2, a);
  if (std::abs(second) > 1e-8) {
    if (second < 0.0) {
      throw ClassificationError("find_minimum: critical point of " + p.label() +
                                " is not a minimum");
    }
    out.nu = 2;
    out.P = second / 2.0;
    return out;
  }
  if (a != 0.0) {
    throw ClassificationError("find_minimum: degenerate minimum of " + p.label() + " away from 0");
  }
  const double fourth = p.derivative(4, a);
  if (fourth > 1e-8) {
    out.nu = 4;
    out.P = fourth / 24.0;
    return out;
  }
  throw ClassificationError("find_minimum: minimum of " + p.label() +
                            " is flat beyond fourth order");
}

double magnetization(double beta) {
  if (!(beta > 0.0)) throw DomainError("magnetization: beta must be positive");
  if (beta <= 1.0) return 0.0;
  auto f = [beta](double m) { return std::tanh(beta * m) - m; };
  double lo = 1e-8;
  double hi = 1.0 - 1e-15;
  for (int i = 0; i < 400; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (f(mid) > 0.0 ? lo : hi) = mid;
  }
  return std::abs(f(lo)) <= std::abs(f(hi)) ? lo : hi;
}

double laplace_moment_asymptotic(const LaplaceExpansion& e, int K, double scale) {
  if (K < 0) throw DomainError("laplace_moment_asymptotic: K must be non-negative");
  if (!(scale > 0.0)) throw DomainError("laplace_moment_asymptotic: scale must be positive");
  if (!(e.P > 0.0) || (e.nu != 2 && e.nu != 4)) {
    throw ClassificationError("laplace_moment_asymptotic: unsupported expansion");
  }
  if (e.a > 0.0) {
    if (e.nu != 2) throw ClassificationError("laplace_moment_asymptotic: quartic minimum away from 0");
    return 0.5 * (std::pow(e.a, K) + std::pow(-e.a, K));
  }
  if (K % 2 == 1) return 0.0;
  if (e.nu == 2) {
    double double_factorial = 1.0;
    for (int j = K - 1; j > 1; j -= 2) double_factorial *= j;
    return double_factorial * std::pow(e.P, -K / 2.0) * std::pow(scale, -K / 2.0);
  }
  const double c_k = std::tgamma((K + 1) / 4.0) / std::tgamma(0.25) * std::pow(2.0, K / 4.0);
  return c_k * std::pow(e.P, -K / 4.0) * std::pow(scale, -K / 4.0);
}

// ---------------------------------------------------------------------------
// DeFinettiMeasure

struct DeFinettiMeasure::State {
  struct Panel {
    double lo;
    double hi;
    double mass;  // normalized
  };
  struct Island {
    double lo;
    double hi;
    std::size_t first_panel;
    std::size_t end_panel;
    double mass_before;
    double mass;
    std::vector<double> u;
    std::vector<double> y;
    std::shared_ptr<boost::math::interpolators::pchip<std::vector<double>>> inverse;
  };

  Potential potential;
  double scale;
  double log_peak = 0.0;  // max of the log density in rapidity
  double log_z = 0.0;
  std::vector<double> node_t;
  std::vector<double> node_w;  // normalized weights
  std::vector<Panel> panels;
  std::vector<double> panel_cdf;  // cumulative mass at each panel's right edge
  std::vector<Island> islands;
  std::vector<CdfNode> table;
  bool exact_inversion = false;
  double interpolation_error = 0.0;

  State(Potential p, double s) : potential(std::move(p)), scale(s) {}

  // Log density in rapidity: -S G(y) / 2.
  double log_density_y(double y) const { return -0.5 * scale * potential.at_rapidity(y); }

  double normalized_density_y(double y) const { return std::exp(log_density_y(y) - log_z); }

  double partial_mass(double lo, double hi) const {
    if (hi <= lo) return 0.0;
    const double c = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    const auto& x = GaussRule::abscissa();
    const auto& w = GaussRule::weights();
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      acc += w[i] * (normalized_density_y(c + half * x[i]) + normalized_density_y(c - half * x[i]));
    }
    return acc * half;
  }

  double cdf_y(double y) const {
    if (panels.empty() || y <= panels.front().lo) return 0.0;
    if (y >= panels.back().hi) return 1.0;
    auto it = std::upper_bound(panels.begin(), panels.end(), y,
                               [](double v, const Panel& p) { return v < p.hi; });
    const auto k = static_cast<std::size_t>(it - panels.begin());
    const double before = k == 0 ? 0.0 : panel_cdf[k - 1];
    return std::min(1.0, before + partial_mass(it->lo, y));
  }

  // Solves cdf_y(y) = u by safeguarded Newton inside the panel that holds u.
  double invert(double u) const {
    auto it = std::lower_bound(panel_cdf.begin(), panel_cdf.end(), u);
    std::size_t k = static_cast<std::size_t>(it - panel_cdf.begin());
    if (k >= panels.size()) k = panels.size() - 1;
    // Skip zero-mass panels (gaps never contain panels, but guard anyway).
    while (k + 1 < panels.size() && panels[k].mass <= 0.0) ++k;
    const Panel& panel = panels[k];
    const double before = k == 0 ? 0.0 : panel_cdf[k - 1];
    const double target = u - before;
    double lo = panel.lo;
    double hi = panel.hi;
    double y = lo + (hi - lo) * std::clamp(target / std::max(panel.mass, 1e-300), 0.0, 1.0);
    for (int iter = 0; iter < 100; ++iter) {
      const double f = partial_mass(panel.lo, y) - target;
      if (f > 0.0) hi = y; else lo = y;
      const double dens = normalized_density_y(y);
      double next = dens > 0.0 ? y - f / dens : 0.5 * (lo + hi);
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      if (std::abs(next - y) <= 1e-15 * (1.0 + std::abs(y))) return next;
      y = next;
    }
    return y;
  }
};

namespace {

struct Interval {
  double lo;
  double hi;
};

double golden_section_min(const std::function<double(double)>& f, double lo, double hi) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int i = 0; i < 200 && hi - lo > 1e-12 * (1.0 + std::abs(lo)); ++i) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = f(x2);
    }
  }
  return 0.5 * (lo + hi);
}

// Modes of the rapidity density. For even potentials only y >= 0 is scanned
// and the result mirrored, so a mode at 0 stays exactly at 0.
std::vector<double> locate_modes(const DeFinettiMeasure::State& s, double drop) {
  constexpr int kGrid = 7201;
  const bool even = s.potential.even();
  const double lo = even ? 0.0 : -kRapidityCap;
  const double hi = kRapidityCap;
  std::vector<double> ys(kGrid);
  std::vector<double> gs(kGrid);
  for (int i = 0; i < kGrid; ++i) {
    ys[i] = lo + (hi - lo) * i / (kGrid - 1);
    gs[i] = s.potential.at_rapidity(ys[i]);
    if (std::isnan(gs[i])) gs[i] = kInf;
  }

  std::vector<int> candidates;
  for (int i = 0; i < kGrid; ++i) {
    const bool left_ok = i == 0 ? true : gs[i] < gs[i - 1];
    const bool right_ok = i == kGrid - 1 ? true : gs[i] <= gs[i + 1];
    if (left_ok && right_ok && std::isfinite(gs[i])) candidates.push_back(i);
  }
  if (candidates.empty()) {
    candidates.push_back(static_cast<int>(std::min_element(gs.begin(), gs.end()) - gs.begin()));
  }

  auto g = [&](double y) { return s.potential.at_rapidity(y); };
  std::vector<double> modes;
  std::vector<double> values;
  for (int i : candidates) {
    double y = ys[i];
    if (!(even && i == 0)) {
      const double a = ys[std::max(i - 1, 0)];
      const double b = ys[std::min(i + 1, kGrid - 1)];
      y = golden_section_min(g, a, b);
    }
    modes.push_back(y);
    values.push_back(g(y));
  }
  const double g_min = *std::min_element(values.begin(), values.end());
  std::vector<double> kept;
  for (std::size_t i = 0; i < modes.size(); ++i) {
    if (0.5 * s.scale * (values[i] - g_min) < drop) {
      kept.push_back(modes[i]);
      if (even && modes[i] != 0.0) kept.push_back(-modes[i]);
    }
  }
  return kept;
}

// Distance from `mode` (in direction dir) to where the log density falls
// below `threshold`.
double extent(const DeFinettiMeasure::State& s, double mode, double dir, double threshold) {
  auto below = [&](double y) {
    const double v = s.log_density_y(y);
    return std::isnan(v) || v < threshold;
  };
  double good = 0.0;
  double d = 1e-6;
  for (;;) {
    const double y = mode + dir * d;
    if (std::abs(y) >= kRapidityCap) {
      if (!below(dir * kRapidityCap)) {
        throw IntegrabilityError("mixing density of " + s.potential.label() +
                                 " does not decay toward t = " + (dir > 0 ? "+1" : "-1"));
      }
      d = std::abs(dir * kRapidityCap - mode);
      break;
    }
    if (below(y)) break;
    good = d;
    d *= 2.0;
  }
  double bad = d;
  for (int i = 0; i < 100 && bad - good > 1e-9 * (1.0 + bad); ++i) {
    const double mid = 0.5 * (good + bad);
    (below(mode + dir * mid) ? bad : good) = mid;
  }
  return bad;
}

}  // namespace

DeFinettiMeasure::DeFinettiMeasure(std::shared_ptr<const State> state) : state_(std::move(state)) {}

DeFinettiMeasure DeFinettiMeasure::create(Potential potential, double scale,
                                          const MeasureOptions& options) {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw DomainError("DeFinettiMeasure: scale must be positive and finite");
  }
  auto s = std::make_shared<State>(std::move(potential), scale);

  const std::vector<double> modes = locate_modes(*s, options.tail_log_drop);
  double log_peak = -kInf;
  for (double m : modes) log_peak = std::max(log_peak, s->log_density_y(m));
  if (!std::isfinite(log_peak)) {
    throw IntegrabilityError("mixing density of " + s->potential.label() + " has no finite peak");
  }
  s->log_peak = log_peak;
  const double threshold = log_peak - options.tail_log_drop;

  std::vector<Interval> intervals;
  for (double m : modes) {
    if (s->potential.even() && m < 0.0) continue;
    const double right = m + extent(*s, m, +1.0, threshold);
    const double left = m - extent(*s, m, -1.0, threshold);
    intervals.push_back({left, right});
    if (s->potential.even() && m > 0.0) intervals.push_back({-right, -left});
    if (s->potential.even() && m == 0.0) intervals.back() = {-right, right};
  }
  std::sort(intervals.begin(), intervals.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  std::vector<Interval> merged;
  for (const Interval& iv : intervals) {
    if (!merged.empty() && iv.lo <= merged.back().hi) {
      merged.back().hi = std::max(merged.back().hi, iv.hi);
    } else {
      merged.push_back(iv);
    }
  }

  const auto& x = GaussRule::abscissa();
  const auto& w = GaussRule::weights();

  struct Rule {
    std::vector<double> y;
    std::vector<double> log_w;  // log(weight) + log density - log_peak
    std::vector<Interval> panels;
    std::vector<double> panel_log_mass;
    double log_z;
  };
  auto build_rule = [&](int panels_per_island) {
    Rule rule;
    for (const Interval& iv : merged) {
      const double width = (iv.hi - iv.lo) / panels_per_island;
      for (int p = 0; p < panels_per_island; ++p) {
        const double lo = iv.lo + width * p;
        const double hi = p + 1 == panels_per_island ? iv.hi : iv.lo + width * (p + 1);
        const double c = 0.5 * (lo + hi);
        const double half = 0.5 * (hi - lo);
        std::vector<double> local;
        local.reserve(2 * x.size());
        for (std::size_t i = 0; i < x.size(); ++i) {
          for (double sign : {-1.0, 1.0}) {
            const double y = c + sign * half * x[i];
            const double lw = std::log(half * w[i]) + s->log_density_y(y) - log_peak;
            rule.y.push_back(y);
            rule.log_w.push_back(lw);
            local.push_back(lw);
          }
        }
        rule.panels.push_back({lo, hi});
        rule.panel_log_mass.push_back(log_sum_exp(local));
      }
    }
    rule.log_z = log_peak + log_sum_exp(rule.log_w);
    return rule;
  };

  Rule coarse = build_rule(options.initial_panels);
  Rule fine;
  bool converged = false;
  for (int p = options.initial_panels * 2; p <= options.max_panels; p *= 2) {
    fine = build_rule(p);
    if (!std::isfinite(fine.log_z)) break;
    if (std::abs(fine.log_z - coarse.log_z) < options.log_normalizer_tolerance) {
      converged = true;
      break;
    }
    coarse = std::move(fine);
  }
  if (!converged) {
    throw IntegrabilityError("normalizer of " + s->potential.label() +
                             " did not converge under refinement");
  }

  s->log_z = fine.log_z;
  const double shift = fine.log_z - log_peak;
  s->node_t.reserve(fine.y.size());
  s->node_w.reserve(fine.y.size());
  for (std::size_t i = 0; i < fine.y.size(); ++i) {
    s->node_t.push_back(std::tanh(fine.y[i]));
    s->node_w.push_back(std::exp(fine.log_w[i] - shift));
  }
  double running = 0.0;
  for (std::size_t k = 0; k < fine.panels.size(); ++k) {
    const double mass = std::exp(fine.panel_log_mass[k] - shift);
    s->panels.push_back({fine.panels[k].lo, fine.panels[k].hi, mass});
    running += mass;
    s->panel_cdf.push_back(running);
  }
  // Remove the residual rounding so the last cumulative value is exactly 1.
  for (double& c : s->panel_cdf) c /= running;
  for (auto& panel : s->panels) panel.mass /= running;

  // Inverse-CDF tables, one per island of support.
  const std::size_t per_island = s->panels.size() / merged.size();
  const std::size_t n = std::max<std::size_t>(options.cdf_nodes, 4);
  double mass_before = 0.0;
  for (std::size_t i = 0; i < merged.size(); ++i) {
    State::Island island;
    island.lo = merged[i].lo;
    island.hi = merged[i].hi;
    island.first_panel = i * per_island;
    island.end_panel = (i + 1) * per_island;
    island.mass_before = mass_before;
    island.mass = s->panel_cdf[island.end_panel - 1] - mass_before;
    island.u.resize(n);
    island.y.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
      // Chebyshev spacing in u: the tails, where y(u) is steep, get short segments.
      const double theta = std::numbers::pi * static_cast<double>(j) / static_cast<double>(n - 1);
      const double u = mass_before + island.mass * 0.5 * (1.0 - std::cos(theta));
      island.u[j] = u;
      if (j == 0) {
        island.y[j] = island.lo;
      } else if (j + 1 == n) {
        island.y[j] = island.hi;
      } else {
        island.y[j] = s->invert(u);
      }
    }
    mass_before += island.mass;
    s->islands.push_back(std::move(island));
  }

  double worst = 0.0;
  for (auto& island : s->islands) {
    for (std::size_t j = 0; j < n; ++j) {
      if (j == 0 && &island != &s->islands.front()) continue;
      s->table.push_back({std::tanh(island.y[j]), island.u[j]});
    }
    auto u = island.u;
    auto y = island.y;
    island.inverse = std::make_shared<boost::math::interpolators::pchip<std::vector<double>>>(
        std::move(u), std::move(y));
    for (std::size_t j = 0; j + 1 < n; ++j) {
      const double u_mid = 0.5 * (island.u[j] + island.u[j + 1]);
      const double y_mid = (*island.inverse)(u_mid);
      worst = std::max(worst, std::abs(s->cdf_y(y_mid) - u_mid));
    }
  }
  s->interpolation_error = worst;
  s->exact_inversion = worst > options.max_interpolation_error;

  return DeFinettiMeasure(std::move(s));
}

const Potential& DeFinettiMeasure::potential() const { return state_->potential; }
double DeFinettiMeasure::scale() const { return state_->scale; }
double DeFinettiMeasure::log_normalizer() const { return state_->log_z; }

double DeFinettiMeasure::log_density_unnormalized(double t) const {
  return cwrmt::log_density_unnormalized(state_->potential, state_->scale, t);
}

double DeFinettiMeasure::density(double t) const {
  return std::exp(log_density_unnormalized(t) - state_->log_z);
}

double DeFinettiMeasure::expectation(const std::function<double(double)>& f) const {
  double acc = 0.0;
  for (std::size_t i = 0; i < state_->node_t.size(); ++i) {
    acc += state_->node_w[i] * f(state_->node_t[i]);
  }
  return acc;
}

double DeFinettiMeasure::moment(int K) const {
  if (K < 0) throw DomainError("moment: K must be non-negative");
  if (K == 0) return 1.0;
  if (K % 2 == 1 && state_->potential.even()) return 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < state_->node_t.size(); ++i) {
    double p = 1.0;
    const double t = state_->node_t[i];
    for (int k = 0; k < K; ++k) p *= t;
    acc += state_->node_w[i] * p;
  }
  return std::clamp(acc, -1.0, 1.0);
}

double DeFinettiMeasure::abs_moment() const {
  return expectation([](double t) { return std::abs(t); });
}

double DeFinettiMeasure::cdf(double t) const {
  if (t <= -1.0) return 0.0;
  if (t >= 1.0) return 1.0;
  return state_->cdf_y(std::atanh(t));
}

double DeFinettiMeasure::probability(double lo, double hi) const {
  if (hi <= lo) return 0.0;
  return std::max(0.0, cdf(hi) - cdf(lo));
}

std::span<const CdfNode> DeFinettiMeasure::cdf_table() const { return state_->table; }
bool DeFinettiMeasure::uses_exact_inversion() const { return state_->exact_inversion; }
double DeFinettiMeasure::max_interpolation_error() const { return state_->interpolation_error; }
std::size_t DeFinettiMeasure::quadrature_nodes() const { return state_->node_t.size(); }
std::size_t DeFinettiMeasure::panel_count() const { return state_->panels.size(); }

double DeFinettiMeasure::sample_t(RandomStream& rng) const {
  const auto& islands = state_->islands;
  std::size_t which = 0;
  if (islands.size() > 1) {
    const double pick = rng.uniform();
    while (which + 1 < islands.size() &&
           pick >= islands[which].mass_before + islands[which].mass) {
      ++which;
    }
  }
  const auto& island = islands[which];
  const double u = island.mass_before + island.mass * rng.uniform_open();
  const double y = state_->exact_inversion ? state_->invert(u) : (*island.inverse)(u);
  return std::tanh(std::clamp(y, island.lo, island.hi));
}

MomentSequence moments_of(const DeFinettiMeasure& measure) {
  return [measure](int K) { return measure.moment(K); };
}

MomentSequence point_mass_moments(double t0) {
  if (!(std::abs(t0) < 1.0)) throw DomainError("point_mass_moments: t0 must lie in (-1, 1)");
  return [t0](int K) { return K == 0 ? 1.0 : std::pow(t0, K); };
}

}  // namespace cwrmt
