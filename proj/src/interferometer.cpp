#include "sqznb/interferometer.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "sqznb/error.hpp"
#include "sqznb/parallel.hpp"

namespace sqznb {

namespace {

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw InvalidArgument(std::string(name) + " must be positive and finite, got " +
                          std::to_string(value));
  }
}

double angular(double f) {
  require_positive(f, "frequency");
  return 2.0 * std::numbers::pi * f;
}

}  // namespace

void InterferometerConfig::validate() const {
  require_positive(arm_length, "arm_length");
  require_positive(mirror_mass, "mirror_mass");
  require_positive(arm_power, "arm_power");
  require_positive(wavelength, "wavelength");
  require_positive(cavity_pole, "cavity_pole");
}

double InterferometerConfig::pole_from_finesse(double finesse, double arm_length) {
  require_positive(finesse, "finesse");
  require_positive(arm_length, "arm_length");
  const double gamma = std::numbers::pi * constants::kSpeedOfLight / (2.0 * finesse * arm_length);
  return gamma / (2.0 * std::numbers::pi);
}

double InterferometerConfig::finesse_from_bounces(double bounces) {
  require_positive(bounces, "bounce count");
  return std::numbers::pi * bounces / 2.0;
}

AnglePolicy AnglePolicy::fixed(double angle) {
  if (!(angle >= 0.0 && angle < std::numbers::pi)) {
    throw InvalidArgument("fixed squeeze angle must lie in [0, pi), got " + std::to_string(angle));
  }
  return AnglePolicy(Kind::kFixed, angle);
}

std::string AnglePolicy::name() const {
  switch (kind_) {
    case Kind::kNone: return "none";
    case Kind::kFixed: return "fixed";
    case Kind::kFrequencyDependent: return "fd_optimal";
  }
  return "none";
}

AnglePolicy AnglePolicy::parse(const std::string& name, double angle) {
  if (name == "none") return none();
  if (name == "fixed") return fixed(angle);
  if (name == "fd_optimal" || name == "fd-optimal") return fd_optimal();
  throw InvalidArgument("unknown angle policy '" + name + "' (expected none, fixed, fd_optimal)");
}

void SqueezerSetup::validate() const {
  if (!(inject_db >= 0.0) || !std::isfinite(inject_db)) {
    throw InvalidArgument("inject_db must be >= 0, got " + std::to_string(inject_db));
  }
}

SqueezedState SqueezerSetup::detected_state() const {
  validate();
  const double angle = policy.kind() == AnglePolicy::Kind::kFixed ? policy.angle() : kPhaseQuadrature;
  const auto injected = state_from_db(inject_db, angle);
  return apply_phase_noise(apply_loss(injected, chain.total()), phase_noise);
}

double sql_asd(const InterferometerConfig& config, double f) {
  const double omega = angular(f);
  return std::sqrt(8.0 * constants::kHbar /
                   (config.mirror_mass * omega * omega * config.arm_length * config.arm_length));
}

double coupling_kappa(const InterferometerConfig& config, double f) {
  const double omega = angular(f);
  const double omega0 = 2.0 * std::numbers::pi * constants::kSpeedOfLight / config.wavelength;
  const double gamma = 2.0 * std::numbers::pi * config.cavity_pole;
  const double scale = 16.0 * omega0 * gamma * config.arm_power /
                       (config.mirror_mass * config.arm_length * constants::kSpeedOfLight);
  return scale / (omega * omega * (gamma * gamma + omega * omega));
}

double noise_quadrature_angle(double kappa) noexcept { return std::atan2(1.0, -kappa); }

namespace {

// Detected state is frequency independent, so it is computed once per curve.
double asd_with_state(const InterferometerConfig& config, const SqueezerSetup& setup,
                      const SqueezedState& state, double f) {
  const double h_sql = sql_asd(config, f);
  const double kappa = coupling_kappa(config, f);
  double variance = 1.0;
  switch (setup.policy.kind()) {
    case AnglePolicy::Kind::kNone: break;
    case AnglePolicy::Kind::kFixed: variance = state.variance_along(noise_quadrature_angle(kappa)); break;
    case AnglePolicy::Kind::kFrequencyDependent: variance = state.v_minus(); break;
  }
  const double psd = 0.5 * h_sql * h_sql * (kappa + 1.0 / kappa) * variance;
  return std::sqrt(psd);
}

}  // namespace

double quantum_noise_asd(const InterferometerConfig& config, const SqueezerSetup& setup, double f) {
  config.validate();
  return asd_with_state(config, setup, setup.detected_state(), f);
}

QuantumNoiseCurve quantum_noise_curve(const InterferometerConfig& config,
                                      const SqueezerSetup& setup,
                                      std::span<const double> grid) {
  config.validate();
  if (grid.empty()) throw InvalidArgument("frequency grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0) || !std::isfinite(grid[i])) {
      throw InvalidArgument("grid frequencies must be positive, got " + std::to_string(grid[i]));
    }
    if (i > 0 && !(grid[i] > grid[i - 1])) {
      throw InvalidArgument("grid frequencies must be strictly increasing at index " +
                            std::to_string(i));
    }
  }
  const auto state = setup.detected_state();

  QuantumNoiseCurve curve{{grid.begin(), grid.end()}, std::vector<double>(grid.size()), config, setup};
  parallel_for(grid.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      curve.asd[i] = asd_with_state(config, setup, state, grid[i]);
    }
  });
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(curve.asd[i]) || !(curve.asd[i] > 0.0)) {
      throw NumericalError("non-finite quantum noise at " + std::to_string(grid[i]) + " Hz");
    }
  }
  return curve;
}

}  // namespace sqznb
