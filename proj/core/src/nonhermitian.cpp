#include "magpol/nonhermitian.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "magpol/errors.hpp"

namespace magpol {

namespace {

constexpr Complex kI{0.0, 1.0};

// sqrt(discriminant) on the branch documented in the header.
Complex branch_sqrt(Complex disc) {
  Complex s = std::sqrt(disc);
  if (disc.real() > 0.0) {
    if (s.real() < 0.0) s = -s;
  } else if (s.imag() < 0.0 || (s.imag() == 0.0 && s.real() < 0.0)) {
    s = -s;
  }
  return s;
}

void require_resonant(const TwoModeHamiltonian& h, const char* what) {
  if (!h.resonant()) {
    throw PreconditionError(fmt::format("{} requires omega_a == omega_b (got {} vs {})", what,
                                        h.omega_a, h.omega_b));
  }
}

}  // namespace

TwoModeHamiltonian TwoModeHamiltonian::resonator_magnon(const HybridParams& params, double omega_m,
                                                        double g_eff) {
  return {params.omega_c, omega_m, params.kappa(), params.gamma, g_eff};
}

Matrix2c TwoModeHamiltonian::matrix() const {
  Matrix2c m;
  m << Complex(omega_a, -kappa_a), Complex(g_eff, 0.0), Complex(g_eff, 0.0), Complex(omega_b, -kappa_b);
  return m;
}

Complex TwoModeHamiltonian::trace() const noexcept {
  return {omega_a + omega_b, -(kappa_a + kappa_b)};
}

Complex TwoModeHamiltonian::determinant() const noexcept {
  return Complex(omega_a, -kappa_a) * Complex(omega_b, -kappa_b) - g_eff * g_eff;
}

Complex TwoModeHamiltonian::discriminant() const noexcept {
  const Complex d{kappa_b - kappa_a, omega_b - omega_a};
  return 4.0 * g_eff * g_eff - d * d;
}

double TwoModeHamiltonian::norm() const { return matrix().norm(); }

const char* to_string(RegimeClass r) noexcept {
  switch (r) {
    case RegimeClass::BelowEP: return "below_ep";
    case RegimeClass::AtEP: return "at_ep";
    case RegimeClass::AboveEP: return "above_ep";
  }
  return "?";
}

double EigenvectorShape::normalized_amplitude() const {
  return amplitude / std::sqrt(1.0 + amplitude * amplitude);
}

EigenPair eigenvalues(const TwoModeHamiltonian& h) {
  const Complex tr = h.trace();
  const Complex s = branch_sqrt(h.discriminant());
  if (h.g_eff == 0.0) {
    // Decoupled modes: report the diagonal entries exactly, labelled by the branch.
    const Complex a{h.omega_a, -h.kappa_a};
    const Complex b{h.omega_b, -h.kappa_b};
    const Complex plus = 0.5 * (tr + s);
    return std::abs(plus - a) <= std::abs(plus - b) ? EigenPair{a, b} : EigenPair{b, a};
  }
  return {0.5 * (tr + s), 0.5 * (tr - s)};
}

EigenPair eigenvalues_resonant(const TwoModeHamiltonian& h) {
  require_resonant(h, "eigenvalues_resonant");
  const Complex centre{h.omega_a, -0.5 * (h.kappa_a + h.kappa_b)};
  const double dk = h.kappa_b - h.kappa_a;
  const double radicand = 4.0 * h.g_eff * h.g_eff - dk * dk;
  const Complex half_split =
      radicand >= 0.0 ? Complex(0.5 * std::sqrt(radicand), 0.0) : Complex(0.0, 0.5 * std::sqrt(-radicand));
  return {centre + half_split, centre - half_split};
}

std::pair<EigenvectorShape, EigenvectorShape> eigenvectors_resonant(const TwoModeHamiltonian& h) {
  require_resonant(h, "eigenvectors_resonant");
  const double dk = h.kappa_b - h.kappa_a;
  if (!(dk > 0.0)) {
    throw PreconditionError("eigenvectors_resonant requires kappa_b > kappa_a (gamma > kappa)");
  }
  if (h.g_eff == 0.0) {
    throw DegenerateInputError("eigenvector amplitudes are undefined for g_eff = 0");
  }
  const double two_g = 2.0 * h.g_eff;
  const double radicand = two_g * two_g - dk * dk;
  constexpr double half_pi = 0.5 * std::numbers::pi;
  if (radicand <= 0.0) {
    const double root = std::sqrt(-radicand);
    return {{(dk + root) / two_g, half_pi}, {(dk - root) / two_g, half_pi}};
  }
  const double c = std::sqrt(radicand) / two_g;
  return {{1.0, std::acos(c)}, {1.0, std::acos(-c)}};
}

Complex eigenvector_component(const TwoModeHamiltonian& h, Complex omega) {
  if (h.g_eff == 0.0) {
    throw DegenerateInputError("eigenvector gauge (x, 1) is undefined for g_eff = 0");
  }
  return (omega - Complex(h.omega_b, -h.kappa_b)) / h.g_eff;
}

double default_regime_epsilon(const TwoModeHamiltonian& h) noexcept {
  return 1e-9 * std::abs(h.kappa_b - h.kappa_a);
}

RegimeClass classify_regime(const TwoModeHamiltonian& h, std::optional<double> epsilon) {
  require_resonant(h, "classify_regime");
  const double eps = epsilon.value_or(default_regime_epsilon(h));
  const double dk = std::abs(h.kappa_b - h.kappa_a);
  const double two_g = 2.0 * h.g_eff;
  if (std::abs(two_g - dk) <= eps) return RegimeClass::AtEP;
  return two_g < dk ? RegimeClass::BelowEP : RegimeClass::AboveEP;
}

PolaritonEigensystem eigensystem(const TwoModeHamiltonian& h) {
  PolaritonEigensystem out;
  const auto ev = eigenvalues(h);
  out.omega1 = ev.omega1;
  out.omega2 = ev.omega2;
  if (h.resonant()) out.regime = classify_regime(h);
  if (h.resonant() && h.kappa_b > h.kappa_a && h.g_eff > 0.0) {
    std::tie(out.mode1, out.mode2) = eigenvectors_resonant(h);
  } else if (h.g_eff > 0.0) {
    const Complex x1 = eigenvector_component(h, ev.omega1);
    const Complex x2 = eigenvector_component(h, ev.omega2);
    out.mode1 = {std::abs(x1), std::arg(x1)};
    out.mode2 = {std::abs(x2), std::arg(x2)};
  } else {
    const double inf = std::numeric_limits<double>::infinity();
    const bool first_is_photon = ev.omega1 == Complex(h.omega_a, -h.kappa_a);
    out.mode1 = {first_is_photon ? inf : 0.0, 0.0};
    out.mode2 = {first_is_photon ? 0.0 : inf, 0.0};
  }
  return out;
}

double ep_coupling(const HybridParams& params) {
  const double kappa = params.kappa();
  if (!(params.gamma > kappa)) {
    throw NoExceptionalPointError(
        fmt::format("no EP at positive coupling: gamma ({}) must exceed kappa ({})", params.gamma, kappa));
  }
  return 0.5 * (params.gamma - kappa);
}

double default_jordan_epsilon(const TwoModeHamiltonian& h) { return 1e-8 * h.norm(); }

Matrix2c propagator(const TwoModeHamiltonian& h, double t_us, std::optional<double> jordan_epsilon) {
  if (!(t_us >= 0.0)) throw DomainError(fmt::format("propagator time must be >= 0 (got {})", t_us));
  const double tau = kTwoPi * t_us;
  const Matrix2c H = h.matrix();
  const Complex mu = 0.5 * h.trace();
  const Matrix2c K = H - mu * Matrix2c::Identity();
  const Complex s = branch_sqrt(h.discriminant());
  const Complex phase = std::exp(-kI * mu * tau);
  const double eps = jordan_epsilon.value_or(default_jordan_epsilon(h));

  if (std::abs(s) <= eps) {
    return phase * (Matrix2c::Identity() - kI * tau * K);
  }
  const Complex delta = 0.5 * s;
  const Complex sinc_term = std::sin(delta * tau) / delta;
  return phase * (std::cos(delta * tau) * Matrix2c::Identity() - kI * sinc_term * K);
}

DensityMatrix2::DensityMatrix2(const Matrix2c& rho) : rho_(rho) {
  if (!rho_.allFinite()) throw DomainError("density matrix has non-finite entries");
  if (hermiticity_error() > 1e-12) {
    throw DomainError(fmt::format("density matrix is not Hermitian (error {})", hermiticity_error()));
  }
  const double tr = trace();
  if (!(tr > 0.0 && tr <= 1.0 + 1e-12)) {
    throw DomainError(fmt::format("density matrix trace must lie in (0, 1] (got {})", tr));
  }
  if (min_eigenvalue() < -1e-12) {
    throw DomainError(fmt::format("density matrix is not positive semidefinite (min eigenvalue {})",
                                  min_eigenvalue()));
  }
}

DensityMatrix2 DensityMatrix2::photon() {
  Matrix2c m = Matrix2c::Zero();
  m(0, 0) = 1.0;
  return DensityMatrix2(m);
}

DensityMatrix2 DensityMatrix2::magnon() {
  Matrix2c m = Matrix2c::Zero();
  m(1, 1) = 1.0;
  return DensityMatrix2(m);
}

DensityMatrix2 DensityMatrix2::pure(const Eigen::Vector2cd& psi) {
  return DensityMatrix2(Matrix2c(psi * psi.adjoint()));
}

double DensityMatrix2::min_eigenvalue() const {
  const double a = rho_(0, 0).real();
  const double d = rho_(1, 1).real();
  const Complex b = 0.5 * (rho_(0, 1) + std::conj(rho_(1, 0)));
  const double half_diff = 0.5 * (a - d);
  return 0.5 * (a + d) - std::sqrt(half_diff * half_diff + std::norm(b));
}

double DensityMatrix2::hermiticity_error() const {
  return (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff();
}

DensityMatrix2 evolve_density(const TwoModeHamiltonian& h, const DensityMatrix2& rho0, double t_us) {
  const Matrix2c P = propagator(h, t_us);
  const Matrix2c raw = P * rho0.matrix() * P.adjoint();
  return DensityMatrix2(Matrix2c(0.5 * (raw + raw.adjoint())), DensityMatrix2::Unchecked{});
}

double counter_rotating_bound(double chi) {
  if (!(chi >= 0.0 && chi < 1.0)) {
    throw DomainError(fmt::format("reduced occupation must lie in [0, 1) (got {})", chi));
  }
  return 1.0 - std::sqrt(1.0 - chi);
}

}  // namespace magpol
