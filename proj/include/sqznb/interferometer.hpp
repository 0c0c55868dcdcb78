#pragma once

// Quantum noise of a power-recycled Fabry-Perot Michelson interferometer in
// the two-photon formalism, with optional squeezed-vacuum injection at the
// antisymmetric port.
//
// With Omega = 2 pi f and gamma = 2 pi f_pole:
//
//   h_SQL^2(Omega) = 8 hbar / (M Omega^2 L^2)
//   K(Omega)       = 16 omega_0 gamma P_arm / (M L c Omega^2 (gamma^2 + Omega^2))
//   S_h(Omega)     = h_SQL^2 / 2 * (1 + K^2) / K * V(theta_K)
//
// theta_K = atan2(1, -K) is the quadrature probed by the readout noise
// combination b2 - K b1 and V(theta) is the detected squeezed-state variance
// along it (V = 1 without squeezing). K is normalized so that h_SQL is reached
// exactly at K = 1.

#include <span>
#include <string>
#include <vector>

#include "sqznb/squeezing.hpp"

namespace sqznb {

namespace constants {
inline constexpr double kSpeedOfLight = 299792458.0;    // m/s
inline constexpr double kHbar = 1.054571817e-34;        // J s
}  // namespace constants

struct InterferometerConfig {
  std::string label;
  double arm_length = 0.0;   // m
  double mirror_mass = 0.0;  // kg
  double arm_power = 0.0;    // W circulating in each arm
  double wavelength = 0.0;   // m
  double cavity_pole = 0.0;  // Hz, arm cavity half-bandwidth

  // Throws InvalidArgument unless every physical quantity is positive and finite.
  void validate() const;

  // gamma = pi c / (2 F L), in Hz.
  static double pole_from_finesse(double finesse, double arm_length);
  // Finesse of a cavity in which light makes `bounces` round trips: F = pi N / 2.
  static double finesse_from_bounces(double bounces);
};

class AnglePolicy {
 public:
  enum class Kind { kNone, kFixed, kFrequencyDependent };

  static AnglePolicy none() { return AnglePolicy(Kind::kNone, 0.0); }
  // angle in [0, pi).
  static AnglePolicy fixed(double angle);
  static AnglePolicy fd_optimal() { return AnglePolicy(Kind::kFrequencyDependent, 0.0); }

  Kind kind() const noexcept { return kind_; }
  double angle() const noexcept { return angle_; }

  std::string name() const;
  static AnglePolicy parse(const std::string& name, double angle = 0.0);

 private:
  AnglePolicy(Kind kind, double angle) : kind_(kind), angle_(angle) {}
  Kind kind_;
  double angle_;
};

// Squeezed quadrature aligned with the readout (phase) quadrature.
inline constexpr double kPhaseQuadrature = 1.5707963267948966;

struct SqueezerSetup {
  double inject_db = 0.0;
  LossChain chain;
  PhaseNoise phase_noise;
  AnglePolicy policy = AnglePolicy::none();

  void validate() const;

  // State reaching the photodetector, minor axis at the policy's fixed angle
  // (phase quadrature otherwise).
  SqueezedState detected_state() const;
};

struct QuantumNoiseCurve {
  std::vector<double> frequencies;  // Hz
  std::vector<double> asd;          // 1/sqrt(Hz)
  InterferometerConfig config;
  SqueezerSetup setup;
};

// Both take f in Hz > 0, else InvalidArgument.
double sql_asd(const InterferometerConfig& config, double f);
double coupling_kappa(const InterferometerConfig& config, double f);

// Quadrature angle of the output noise combination for a given coupling.
double noise_quadrature_angle(double kappa) noexcept;

double quantum_noise_asd(const InterferometerConfig& config, const SqueezerSetup& setup, double f);

// Point-wise quantum_noise_asd over a strictly increasing positive grid.
// Evaluated in parallel; results match sequential evaluation bit for bit.
QuantumNoiseCurve quantum_noise_curve(const InterferometerConfig& config,
                                      const SqueezerSetup& setup,
                                      std::span<const double> grid);

}  // namespace sqznb
