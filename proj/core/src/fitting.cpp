#include "magpol/fitting.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "magpol/errors.hpp"

namespace magpol {

namespace {

constexpr std::array<std::string_view, 7> kParamNames{"kappa",   "gamma",           "g_eff",        "omega_c",
                                                      "omega_m", "amplitude_scale", "calibration_c"};

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

}  // namespace

std::string_view to_string(FitParam p) noexcept { return kParamNames[static_cast<std::size_t>(p)]; }

FitParam parse_fit_param(std::string_view text) {
  for (std::size_t i = 0; i < kParamNames.size(); ++i) {
    if (kParamNames[i] == text) return static_cast<FitParam>(i);
  }
  throw ConfigError(fmt::format("unknown fit parameter '{}'", text));
}

double FitResult::estimate(FitParam p) const {
  for (const auto& [which, value] : estimates) {
    if (which == p) return value;
  }
  throw PreconditionError(fmt::format("'{}' was not a free parameter of this fit", to_string(p)));
}

bool FitResult::has_flag(std::string_view flag) const {
  return std::find(flags.begin(), flags.end(), flag) != flags.end();
}

void FitProblem::validate() const {
  if (free.empty()) throw ConfigError("fit has no free parameters");
  if (data.size() < 2 * free.size()) {
    throw ConfigError(fmt::format("underdetermined fit: {} data points for {} free parameters (need >= {})",
                                  data.size(), free.size(), 2 * free.size()));
  }
  for (std::size_t i = 0; i < free.size(); ++i) {
    const auto& f = free[i];
    if (f.which == FitParam::CalibrationC) throw ConfigError("calibration_c is fitted by fit_saturation");
    if (!std::isfinite(f.lower) || !std::isfinite(f.upper) || !(f.lower <= f.upper)) {
      throw ConfigError(fmt::format("bounds for {} must be finite and ordered (got [{}, {}])", to_string(f.which),
                                    f.lower, f.upper));
    }
    if (!std::isfinite(f.initial)) throw ConfigError(fmt::format("initial {} is not finite", to_string(f.which)));
    for (std::size_t j = 0; j < i; ++j) {
      if (free[j].which == f.which) throw ConfigError(fmt::format("{} listed twice", to_string(f.which)));
    }
  }
  for (const auto& d : data) {
    if (!std::isfinite(d.omega) || !std::isfinite(d.s21_abs)) throw ConfigError("fit data must be finite");
  }
}

TransmissionModel apply_parameters(const TransmissionModel& base, std::span<const FreeParam> free,
                                   std::span<const double> values) {
  TransmissionModel m = base;
  for (std::size_t i = 0; i < free.size(); ++i) {
    const double v = values[i];
    switch (free[i].which) {
      case FitParam::Kappa: m.params = m.params.with_total_kappa(v, m.params.kappa_int); break;
      case FitParam::Gamma: m.params.gamma = v; break;
      case FitParam::GEff: m.g_eff = v; break;
      case FitParam::OmegaC: m.params.omega_c = v; break;
      case FitParam::OmegaM: m.omega_m = v; break;
      case FitParam::AmplitudeScale: m.amplitude_scale = v; break;
      case FitParam::CalibrationC: break;
    }
  }
  return m;
}

namespace {

class TransmissionObjective {
 public:
  TransmissionObjective(const FitProblem& problem, const FitOptions& options)
      : problem_(problem), options_(options), data_(problem.data) {
    std::sort(data_.begin(), data_.end(), [](const SpectrumSample& a, const SpectrumSample& b) {
      return a.omega < b.omega || (a.omega == b.omega && a.s21_abs < b.s21_abs);
    });
    lower_.resize(static_cast<Eigen::Index>(problem.free.size()));
    upper_.resize(lower_.size());
    for (std::size_t i = 0; i < problem.free.size(); ++i) {
      lower_[static_cast<Eigen::Index>(i)] = problem.free[i].lower;
      upper_[static_cast<Eigen::Index>(i)] = problem.free[i].upper;
    }
  }

  [[nodiscard]] Eigen::Index n_params() const { return lower_.size(); }
  [[nodiscard]] Eigen::Index n_data() const { return static_cast<Eigen::Index>(data_.size()); }
  [[nodiscard]] const std::vector<SpectrumSample>& data() const { return data_; }

  [[nodiscard]] Vec project(Vec x) const { return x.cwiseMax(lower_).cwiseMin(upper_); }
  [[nodiscard]] const Vec& lower() const { return lower_; }
  [[nodiscard]] const Vec& upper() const { return upper_; }

  [[nodiscard]] TransmissionModel model(const Vec& x) const {
    return apply_parameters(problem_.fixed, problem_.free, std::span<const double>(x.data(), static_cast<std::size_t>(x.size())));
  }

  [[nodiscard]] Vec residuals(const Vec& x) const {
    const auto m = model(x);
    Vec r(n_data());
    for (Eigen::Index i = 0; i < n_data(); ++i) {
      const auto& d = data_[static_cast<std::size_t>(i)];
      r[i] = std::abs(s21(m, d.omega)) - d.s21_abs;
    }
    return r;
  }

  [[nodiscard]] double rss(const Vec& x) const { return residuals(x).squaredNorm(); }

  // Central differences with a relative step, clipped to the bounds.
  [[nodiscard]] Mat jacobian(const Vec& x) const {
    Mat j(n_data(), n_params());
    for (Eigen::Index k = 0; k < n_params(); ++k) {
      const double h = options_.fd_relative_step * std::max(std::abs(x[k]), 1e-3);
      Vec xp = x;
      Vec xm = x;
      xp[k] = std::min(x[k] + h, upper_[k]);
      xm[k] = std::max(x[k] - h, lower_[k]);
      const double span = xp[k] - xm[k];
      if (span <= 0.0) {
        j.col(k).setZero();
        continue;
      }
      j.col(k) = (residuals(xp) - residuals(xm)) / span;
    }
    return j;
  }

 private:
  const FitProblem& problem_;
  const FitOptions& options_;
  std::vector<SpectrumSample> data_;
  Vec lower_;
  Vec upper_;
};

// Condition number of J with each column scaled by max(|x_k|, 1e-3), i.e. of the
// sensitivity to relative parameter changes.
double scaled_condition(const Mat& j, const Vec& x) {
  Mat scaled = j;
  for (Eigen::Index k = 0; k < j.cols(); ++k) scaled.col(k) *= std::max(std::abs(x[k]), 1e-3);
  const Eigen::JacobiSVD<Mat> svd(scaled);
  const auto& s = svd.singularValues();
  if (s.size() == 0) return std::numeric_limits<double>::infinity();
  const double smin = s[s.size() - 1];
  return smin > 0.0 ? s[0] / smin : std::numeric_limits<double>::infinity();
}

double relative_step(const Vec& from, const Vec& to) {
  double worst = 0.0;
  for (Eigen::Index k = 0; k < from.size(); ++k) {
    worst = std::max(worst, std::abs(to[k] - from[k]) / std::max(std::abs(from[k]), 1e-3));
  }
  return worst;
}

struct SearchOutcome {
  Vec x;
  double rss = 0.0;
  int iterations = 0;
  bool converged = false;
};

SearchOutcome nelder_mead(const TransmissionObjective& obj, Vec start, const FitOptions& options) {
  const Eigen::Index n = obj.n_params();
  std::vector<Vec> simplex(static_cast<std::size_t>(n + 1), obj.project(start));
  for (Eigen::Index k = 0; k < n; ++k) {
    Vec v = simplex[0];
    const double width = obj.upper()[k] - obj.lower()[k];
    double step = 0.05 * std::max(std::abs(v[k]), 1e-3);
    if (v[k] + step > obj.upper()[k]) step = -std::min(step, 0.5 * width);
    v[k] += step;
    simplex[static_cast<std::size_t>(k + 1)] = obj.project(v);
  }
  std::vector<double> f(simplex.size());
  for (std::size_t i = 0; i < simplex.size(); ++i) f[i] = obj.rss(simplex[i]);

  SearchOutcome out;
  const int max_iter = options.max_iterations * 20;
  std::vector<std::size_t> order(simplex.size());
  for (int it = 1; it <= max_iter; ++it) {
    out.iterations = it;
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return f[a] < f[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second = order[order.size() - 2];

    double diameter = 0.0;
    for (const auto& v : simplex) diameter = std::max(diameter, relative_step(simplex[best], v));
    if (f[worst] - f[best] <= options.rss_relative_tol * f[best] + 1e-300 && diameter < options.step_tol * 1e3) {
      out.converged = true;
      break;
    }

    Vec centroid = Vec::Zero(n);
    for (std::size_t i = 0; i < simplex.size(); ++i) {
      if (i != worst) centroid += simplex[i];
    }
    centroid /= static_cast<double>(n);

    const Vec reflected = obj.project(centroid + (centroid - simplex[worst]));
    const double fr = obj.rss(reflected);
    if (fr < f[best]) {
      const Vec expanded = obj.project(centroid + 2.0 * (centroid - simplex[worst]));
      const double fe = obj.rss(expanded);
      if (fe < fr) {
        simplex[worst] = expanded;
        f[worst] = fe;
      } else {
        simplex[worst] = reflected;
        f[worst] = fr;
      }
      continue;
    }
    if (fr < f[second]) {
      simplex[worst] = reflected;
      f[worst] = fr;
      continue;
    }
    const Vec contracted = fr < f[worst] ? obj.project(centroid + 0.5 * (reflected - centroid))
                                         : obj.project(centroid + 0.5 * (simplex[worst] - centroid));
    const double fc = obj.rss(contracted);
    if (fc < std::min(fr, f[worst])) {
      simplex[worst] = contracted;
      f[worst] = fc;
      continue;
    }
    for (std::size_t i = 0; i < simplex.size(); ++i) {
      if (i == best) continue;
      simplex[i] = obj.project(simplex[best] + 0.5 * (simplex[i] - simplex[best]));
      f[i] = obj.rss(simplex[i]);
    }
  }
  const auto best = static_cast<std::size_t>(std::min_element(f.begin(), f.end()) - f.begin());
  out.x = simplex[best];
  out.rss = f[best];
  return out;
}

void flag_bounds(FitResult& result, std::span<const FreeParam> free) {
  for (std::size_t i = 0; i < free.size(); ++i) {
    const double v = result.estimates[i].second;
    if (free[i].lower == free[i].upper) continue;
    // Anything within step-tolerance distance of a bound counts as pinned there.
    const double slack = 1e-8 * (free[i].upper - free[i].lower);
    if (v <= free[i].lower + slack) result.flags.push_back(fmt::format("at_lower_bound:{}", to_string(free[i].which)));
    if (v >= free[i].upper - slack) result.flags.push_back(fmt::format("at_upper_bound:{}", to_string(free[i].which)));
  }
}

}  // namespace

FitResult fit_transmission(const FitProblem& problem, const FitOptions& options) {
  problem.validate();
  problem.fixed.validate();
  const TransmissionObjective obj(problem, options);
  const Eigen::Index n = obj.n_params();

  Vec x(n);
  for (Eigen::Index k = 0; k < n; ++k) x[k] = problem.free[static_cast<std::size_t>(k)].initial;
  x = obj.project(x);

  Vec r = obj.residuals(x);
  double rss = r.squaredNorm();
  double lambda = options.initial_damping;
  bool converged = rss == 0.0;
  bool ill_conditioned = false;
  int iterations = 0;

  Mat j = obj.jacobian(x);
  while (!converged && iterations < options.max_iterations) {
    ++iterations;
    if (scaled_condition(j, x) > options.simplex_condition) {
      ill_conditioned = true;
      break;
    }
    const Mat a = j.transpose() * j;
    const Vec grad = j.transpose() * r;
    Vec diag = a.diagonal();
    const double floor = std::max(diag.maxCoeff(), 1e-300) * 1e-12;
    diag = diag.cwiseMax(floor);
    Mat damped = a;
    damped.diagonal() += lambda * diag;
    const Vec delta = damped.ldlt().solve(-grad);
    const Vec trial = obj.project(x + delta);
    const double step = relative_step(x, trial);
    const Vec r_trial = obj.residuals(trial);
    const double rss_trial = r_trial.squaredNorm();

    if (rss_trial < rss) {
      const double change = (rss - rss_trial) / rss;
      x = trial;
      r = r_trial;
      rss = rss_trial;
      lambda /= 3.0;
      if (change < options.rss_relative_tol || step < options.step_tol || rss == 0.0) {
        converged = true;
        break;
      }
      j = obj.jacobian(x);
    } else {
      lambda *= 2.0;
      if (step < options.step_tol) {
        converged = true;
        break;
      }
    }
  }

  FitResult result;
  if (ill_conditioned) {
    const auto nm = nelder_mead(obj, x, options);
    x = nm.x;
    rss = nm.rss;
    iterations += nm.iterations;
    converged = nm.converged;
    result.used_simplex = true;
    result.flags.emplace_back("ill_conditioned");
  }
  if (!converged && iterations >= options.max_iterations && !result.used_simplex) {
    result.flags.emplace_back("max_iterations");
  }

  result.rss = rss;
  result.n_iterations = iterations;
  result.converged = converged;
  result.jacobian_condition = scaled_condition(obj.jacobian(x), x);
  for (Eigen::Index k = 0; k < n; ++k) result.estimates.emplace_back(problem.free[static_cast<std::size_t>(k)].which, x[k]);
  flag_bounds(result, problem.free);

  const auto model = obj.model(x);
  for (const auto& d : obj.data()) result.residuals.push_back({d.omega, d.s21_abs, std::abs(s21(model, d.omega))});
  return result;
}

double predicted_g_eff(double power_dbm, double calibration_c, const HybridParams& params,
                       const DetuningPair& detuning, const SolverOptions& solver) {
  const double u = calibration_c * std::sqrt(dbm_to_watts(power_dbm));
  return solve_chi(u, detuning, params, solver).g_eff;
}

FitResult fit_saturation(std::span<const SaturationSample> input, const HybridParams& params,
                         const SaturationFitOptions& options) {
  if (input.size() < 3) {
    throw PreconditionError(fmt::format("saturation fit needs at least 3 points (got {})", input.size()));
  }
  if (!(options.initial_c > 0.0) || !(options.bracket > 1.0) || options.scan_points < 3) {
    throw ConfigError("saturation fit needs initial_c > 0, bracket > 1 and at least 3 scan points");
  }
  for (const auto& s : input) {
    if (!std::isfinite(s.power_dbm) || !(s.g_eff > 0.0 && s.g_eff <= params.g)) {
      throw PreconditionError(fmt::format("saturation point ({} dBm, g_eff {}) needs g_eff in (0, {}]", s.power_dbm,
                                          s.g_eff, params.g));
    }
  }
  const bool all_equal = std::all_of(input.begin(), input.end(),
                                     [&](const SaturationSample& s) { return s.g_eff == input.front().g_eff; });
  if (all_equal) throw UnidentifiableError("all g_eff values are equal; the calibration cannot be identified");

  std::vector<SaturationSample> data(input.begin(), input.end());
  std::sort(data.begin(), data.end(), [](const SaturationSample& a, const SaturationSample& b) {
    return a.power_dbm < b.power_dbm || (a.power_dbm == b.power_dbm && a.g_eff < b.g_eff);
  });

  int evaluations = 0;
  auto objective = [&](double log_c) {
    ++evaluations;
    const double c = std::exp(log_c);
    double sum = 0.0;
    for (const auto& d : data) {
      const double diff = predicted_g_eff(d.power_dbm, c, params, options.detuning, options.solver) - d.g_eff;
      sum += diff * diff;
    }
    return sum;
  };

  const double centre = std::log(options.initial_c);
  const double half = std::log(options.bracket);
  const int n = options.scan_points;
  auto node = [&](int k) { return centre + half * (2.0 * k / (n - 1) - 1.0); };
  int best = 0;
  double best_value = std::numeric_limits<double>::infinity();
  for (int k = 0; k < n; ++k) {
    const double v = objective(node(k));
    if (v < best_value) {
      best_value = v;
      best = k;
    }
  }

  double a = node(std::max(best - 1, 0));
  double b = node(std::min(best + 1, n - 1));
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = objective(x1);
  double f2 = objective(x2);
  int iterations = 0;
  while (b - a > options.log_tol && iterations < 500) {
    ++iterations;
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = objective(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = objective(x2);
    }
  }
  double log_c = 0.5 * (a + b);
  double rss = objective(log_c);
  if (best_value < rss) {
    log_c = node(best);
    rss = best_value;
  }

  FitResult result;
  const double c = std::exp(log_c);
  result.estimates.emplace_back(FitParam::CalibrationC, c);
  result.rss = rss;
  result.n_iterations = iterations;
  result.converged = b - a <= options.log_tol;
  if (best == 0) result.flags.emplace_back("at_lower_bound:calibration_c");
  if (best == n - 1) result.flags.emplace_back("at_upper_bound:calibration_c");

  // One parameter: the condition number is 1 unless the data are insensitive to c.
  const double h = 1e-6;
  const double slope = std::abs(objective(log_c + h) - 2.0 * rss + objective(log_c - h));
  result.jacobian_condition = slope > 0.0 ? 1.0 : std::numeric_limits<double>::infinity();

  for (const auto& d : data) {
    result.residuals.push_back(
        {d.power_dbm, d.g_eff, predicted_g_eff(d.power_dbm, c, params, options.detuning, options.solver)});
  }
  return result;
}

}  // namespace magpol
