#pragma once

// Two-mode effective non-Hermitian Hamiltonian
//
//        | omega_a - i kappa_a      g_eff        |
//   H =  |                                      |
//        |     g_eff           omega_b - i kappa_b |
//
// over the single-excitation basis {|photon>, |magnon>}. For the resonator/magnon
// pair, (omega_a, kappa_a) = (omega_c, kappa) and (omega_b, kappa_b) = (omega_0, gamma).
//
// Frequencies follow the f/2pi MHz convention; time arguments are microseconds, and
// the time-domain routines multiply H by 2pi internally.

#include <complex>
#include <optional>
#include <utility>

#include <Eigen/Core>

#include "magpol/core_model.hpp"

namespace magpol {

using Complex = std::complex<double>;
using Matrix2c = Eigen::Matrix2cd;

struct TwoModeHamiltonian {
  double omega_a = 0.0;
  double omega_b = 0.0;
  double kappa_a = 0.0;
  double kappa_b = 0.0;
  double g_eff = 0.0;

  /// Resonator (a) coupled to the magnon mode of a subensemble at omega_m (b).
  [[nodiscard]] static TwoModeHamiltonian resonator_magnon(const HybridParams& params, double omega_m,
                                                           double g_eff);

  [[nodiscard]] Matrix2c matrix() const;
  [[nodiscard]] Complex trace() const noexcept;
  [[nodiscard]] Complex determinant() const noexcept;
  /// 4 g^2 - (kappa_b - kappa_a + i omega_b - i omega_a)^2, i.e. (omega_1 - omega_2)^2.
  [[nodiscard]] Complex discriminant() const noexcept;
  /// Frobenius norm of the matrix.
  [[nodiscard]] double norm() const;
  [[nodiscard]] bool resonant() const noexcept { return omega_a == omega_b; }
};

enum class RegimeClass { BelowEP, AtEP, AboveEP };

[[nodiscard]] const char* to_string(RegimeClass r) noexcept;

struct EigenPair {
  Complex omega1;  ///< carries the "+" branch of the square root
  Complex omega2;
};

/// Eigenvector (A e^{i phi}, 1)^T in the unnormalized gauge.
struct EigenvectorShape {
  double amplitude = 0.0;
  double phase = 0.0;

  [[nodiscard]] Complex photon_component() const { return std::polar(amplitude, phase); }
  /// A / sqrt(1 + A^2): photon weight of the normalized vector.
  [[nodiscard]] double normalized_amplitude() const;
};

struct PolaritonEigensystem {
  Complex omega1;
  Complex omega2;
  EigenvectorShape mode1;
  EigenvectorShape mode2;
  std::optional<RegimeClass> regime;  ///< set only for resonant Hamiltonians
};

/// Both eigenvalues, omega_{1,2} = (tr +- s) / 2 with s = sqrt(discriminant).
///
/// Branch convention for s: when Re(discriminant) > 0 the root with positive real part
/// is taken, otherwise the root with non-negative imaginary part. This keeps the labels
/// continuous along resonant sweeps (real splitting above the EP, linewidth splitting
/// below it).
[[nodiscard]] EigenPair eigenvalues(const TwoModeHamiltonian& h);

/// Resonant closed form omega_0 - i(kappa_a + kappa_b)/2 +- sqrt(4 g^2 - (kappa_b - kappa_a)^2)/2.
/// Throws PreconditionError when omega_a != omega_b.
[[nodiscard]] EigenPair eigenvalues_resonant(const TwoModeHamiltonian& h);

/// Closed-form amplitudes and phases of the resonant eigenvectors.
/// Below/at the EP: A_{1,2} = [(kb-ka) +- sqrt((kb-ka)^2 - 4g^2)] / 2g, phi = pi/2.
/// Above the EP: A = 1, phi_{1,2} = arccos(+- sqrt(4g^2 - (kb-ka)^2) / 2g).
/// Throws PreconditionError off resonance or when kappa_b <= kappa_a, and
/// DegenerateInputError for g_eff = 0.
[[nodiscard]] std::pair<EigenvectorShape, EigenvectorShape> eigenvectors_resonant(
    const TwoModeHamiltonian& h);

/// Photon component x of the eigenvector (x, 1)^T belonging to `omega`.
/// Valid for any h with g_eff != 0; throws DegenerateInputError otherwise.
[[nodiscard]] Complex eigenvector_component(const TwoModeHamiltonian& h, Complex omega);

/// Default EP tolerance 1e-9 |kappa_b - kappa_a|.
[[nodiscard]] double default_regime_epsilon(const TwoModeHamiltonian& h) noexcept;

/// BelowEP if 2g < |kb-ka| - eps, AtEP if |2g - |kb-ka|| <= eps, AboveEP otherwise.
/// Throws PreconditionError off resonance.
[[nodiscard]] RegimeClass classify_regime(const TwoModeHamiltonian& h,
                                          std::optional<double> epsilon = std::nullopt);

/// Eigenvalues, eigenvector shapes and (when resonant) the regime.
[[nodiscard]] PolaritonEigensystem eigensystem(const TwoModeHamiltonian& h);

/// EP coupling (gamma - kappa)/2. Throws NoExceptionalPointError when gamma <= kappa.
[[nodiscard]] double ep_coupling(const HybridParams& params);

/// Default Jordan-branch switch: 1e-8 ||H||.
[[nodiscard]] double default_jordan_epsilon(const TwoModeHamiltonian& h);

/// exp(-i 2pi H t) for t in microseconds.
///
/// With mu = tr/2 and K = H - mu I (so K^2 = delta^2 I, delta = s/2) the propagator is
/// e^{-i mu t}[cos(delta t) I - i sin(delta t)/delta K], the spectral formula written
/// without explicit projectors. When |omega_1 - omega_2| <= jordan_epsilon the Jordan
/// form e^{-i mu t}(I - i t K) is used. Throws DomainError for t < 0.
[[nodiscard]] Matrix2c propagator(const TwoModeHamiltonian& h, double t_us,
                                  std::optional<double> jordan_epsilon = std::nullopt);

/// 2x2 density matrix over {|photon>, |magnon>}.
class DensityMatrix2 {
 public:
  /// Validates Hermiticity (1e-12), 0 < trace <= 1 and positive semidefiniteness.
  /// Throws DomainError otherwise.
  explicit DensityMatrix2(const Matrix2c& rho);

  [[nodiscard]] static DensityMatrix2 photon();
  [[nodiscard]] static DensityMatrix2 magnon();
  /// |psi><psi| for a unit-norm or sub-normalized state vector.
  [[nodiscard]] static DensityMatrix2 pure(const Eigen::Vector2cd& psi);

  [[nodiscard]] const Matrix2c& matrix() const noexcept { return rho_; }
  [[nodiscard]] double trace() const noexcept { return rho_.trace().real(); }
  /// Smallest eigenvalue of the Hermitian part.
  [[nodiscard]] double min_eigenvalue() const;
  /// max |rho - rho^dagger| elementwise.
  [[nodiscard]] double hermiticity_error() const;

 private:
  struct Unchecked {};
  DensityMatrix2(const Matrix2c& rho, Unchecked) : rho_(rho) {}
  friend DensityMatrix2 evolve_density(const TwoModeHamiltonian&, const DensityMatrix2&, double);

  Matrix2c rho_;
};

/// rho(t) = P rho0 P^dagger with P = propagator(h, t).
[[nodiscard]] DensityMatrix2 evolve_density(const TwoModeHamiltonian& h, const DensityMatrix2& rho0,
                                            double t_us);

/// |C_Sigma| = 1 - sqrt(1 - chi), the summed counter-rotating coefficient.
/// Throws DomainError unless 0 <= chi < 1.
[[nodiscard]] double counter_rotating_bound(double chi);

}  // namespace magpol
