#pragma once

// Inverse problems and uncertainty propagation on top of the squeezing
// degradation chain.

#include <cstdint>
#include <span>
#include <string>
#include <utility>

#include "sqznb/squeezing.hpp"

namespace sqznb {

struct Measurement {
  double value = 0.0;
  double sigma = 0.0;  // one standard deviation, >= 0
};

struct FitResult {
  double estimate = 0.0;
  double residual = 0.0;  // dB
  std::size_t iterations = 0;
  std::pair<double, double> bracket{0.0, 1.0};
};

// Detection efficiency that turns `inject_db` into `detected_db` under the
// given phase noise. Bisection on [0, 1], residual <= 1e-9 dB.
// InvalidArgument if detected_db < 0 or detected_db > inject_db;
// InfeasibleError (with the attainable range) if no efficiency reaches it.
FitResult fit_efficiency(double inject_db, double detected_db, const PhaseNoise& noise);

struct UncertaintyInputs {
  Measurement inject_db{10.3, 0.2};
  Measurement efficiency{0.44, 0.02};
  Measurement theta_rms{0.037, 0.006};  // rad
  PhaseAveraging averaging = PhaseAveraging::kSmallAngle;
};

struct UncertaintyResult {
  double nominal_db = 0.0;       // forward value at the central inputs
  double mean_db = 0.0;
  double sigma_db = 0.0;         // sample standard deviation
  double linear_sigma_db = 0.0;  // first-order propagation, for comparison
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  // Draws moved back onto the domain boundary, per input.
  std::size_t clamped_inject = 0;
  std::size_t clamped_efficiency = 0;
  std::size_t clamped_theta = 0;
};

inline constexpr std::size_t kMinMonteCarloSamples = 1000;

// Independent Gaussian draws of the three inputs, propagated forward per
// draw. Out-of-domain draws (inject < 0, efficiency outside [0, 1], theta
// outside [0, pi/4)) are clamped and counted. Deterministic for a given
// seed regardless of the worker count.
UncertaintyResult mc_uncertainty(const UncertaintyInputs& inputs, std::size_t samples,
                                 std::uint64_t seed, std::size_t workers = 0);

struct NamedMeasurement {
  std::string label;
  Measurement efficiency;
};

struct ChainUncertaintyResult {
  double nominal = 0.0;  // product of central efficiencies
  double mean = 0.0;
  double sigma = 0.0;
  std::size_t samples = 0;
  std::size_t clamped = 0;
};

// Monte Carlo of a loss chain total with independent Gaussian element
// efficiencies, each clamped to (0, 1].
ChainUncertaintyResult mc_chain_total(std::span<const NamedMeasurement> elements,
                                      std::size_t samples, std::uint64_t seed,
                                      std::size_t workers = 0);

struct OptimalInjection {
  double inject_db = 0.0;
  double detected_db = 0.0;
  std::size_t iterations = 0;
};

inline constexpr double kMaxInjectDb = 60.0;

// Injected level in [0, 60] dB maximizing detected squeezing (golden-section
// search). NoOptimumError when theta_rms = 0 (detected squeezing keeps rising
// with injection) or efficiency = 0 (nothing survives).
OptimalInjection optimal_inject_db(double efficiency, const PhaseNoise& noise);

}  // namespace sqznb
