#include "sqznb/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "sqznb/budget.hpp"
#include "sqznb/error.hpp"
#include "sqznb/numerics.hpp"
#include "sqznb/parallel.hpp"
#include "sqznb/random.hpp"

namespace sqznb {

namespace {

constexpr double kFitTolDb = 1e-9;
// Largest admissible phase jitter after clamping.
const double kThetaCeiling = std::nextafter(std::numbers::pi / 4, 0.0);

void check_samples(std::size_t samples) {
  if (samples < kMinMonteCarloSamples) {
    throw InvalidArgument("Monte Carlo needs at least " + std::to_string(kMinMonteCarloSamples) +
                          " samples, got " + std::to_string(samples));
  }
}

void check_sigma(const Measurement& m, const char* name) {
  if (!(m.sigma >= 0.0) || !std::isfinite(m.sigma) || !std::isfinite(m.value)) {
    throw InvalidArgument(std::string(name) + " needs a finite value and sigma >= 0");
  }
}

struct Moments {
  double mean;
  double sigma;
};

// Fixed summation order keeps results independent of how samples were
// produced. Deviations are taken from the first sample so a degenerate
// distribution gives exactly zero spread.
Moments moments(const std::vector<double>& values) {
  const double shift = values.front();
  const double n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v - shift;
  const double mean_dev = sum / n;
  double ss = 0.0;
  for (double v : values) ss += (v - shift - mean_dev) * (v - shift - mean_dev);
  return {shift + mean_dev, std::sqrt(ss / (n - 1.0))};
}

template <typename T>
T clamp_counted(T value, T lo, T hi, unsigned char& flag) {
  if (value < lo) {
    flag = 1;
    return lo;
  }
  if (value > hi) {
    flag = 1;
    return hi;
  }
  return value;
}

}  // namespace

FitResult fit_efficiency(double inject_db, double detected_db_target, const PhaseNoise& noise) {
  if (!(inject_db >= 0.0) || !std::isfinite(inject_db)) {
    throw InvalidArgument("injected squeezing must be >= 0 dB");
  }
  if (!(detected_db_target >= 0.0) || detected_db_target > inject_db) {
    throw InvalidArgument("detected squeezing must lie in [0, injected] dB");
  }
  auto forward = [&](double eta) { return propagate_db(inject_db, eta, noise); };
  const double at_zero = forward(0.0);
  const double at_one = forward(1.0);
  const double lo = std::min(at_zero, at_one);
  const double hi = std::max(at_zero, at_one);
  if (detected_db_target < lo - kFitTolDb || detected_db_target > hi + kFitTolDb) {
    throw InfeasibleError("detected squeezing " + format_double(detected_db_target) +
                          " dB is unattainable; efficiencies in [0, 1] give [" +
                          format_double(lo) + ", " + format_double(hi) + "] dB");
  }
  const auto root = bisect(forward, detected_db_target, 0.0, 1.0, 1e-12);
  if (root.residual > kFitTolDb) {
    throw NumericalError("efficiency fit did not converge (residual " +
                         format_double(root.residual) + " dB)");
  }
  return {root.x, root.residual, root.iterations, {0.0, 1.0}};
}

UncertaintyResult mc_uncertainty(const UncertaintyInputs& inputs, std::size_t samples,
                                 std::uint64_t seed, std::size_t workers) {
  check_samples(samples);
  check_sigma(inputs.inject_db, "inject_db");
  check_sigma(inputs.efficiency, "efficiency");
  check_sigma(inputs.theta_rms, "theta_rms");

  auto forward = [&](double inject, double eta, double theta) {
    return propagate_db(inject, eta, PhaseNoise(theta, inputs.averaging));
  };

  UncertaintyResult result;
  result.samples = samples;
  result.seed = seed;
  result.nominal_db =
      forward(inputs.inject_db.value, inputs.efficiency.value, inputs.theta_rms.value);

  std::vector<double> values(samples);
  // One flag byte per sample and input; counted after the parallel section.
  std::vector<unsigned char> flags(3 * samples, 0);
  parallel_for(
      samples,
      [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
          CounterRng rng(seed, i);
          const double inject = clamp_counted(rng.normal(inputs.inject_db.value, inputs.inject_db.sigma),
                                              0.0, std::numeric_limits<double>::max(), flags[3 * i]);
          const double eta = clamp_counted(rng.normal(inputs.efficiency.value, inputs.efficiency.sigma),
                                           0.0, 1.0, flags[3 * i + 1]);
          const double theta = clamp_counted(rng.normal(inputs.theta_rms.value, inputs.theta_rms.sigma),
                                             0.0, kThetaCeiling, flags[3 * i + 2]);
          values[i] = forward(inject, eta, theta);
        }
      },
      workers);

  for (std::size_t i = 0; i < samples; ++i) {
    result.clamped_inject += flags[3 * i];
    result.clamped_efficiency += flags[3 * i + 1];
    result.clamped_theta += flags[3 * i + 2];
  }
  const auto m = moments(values);
  result.mean_db = m.mean;
  result.sigma_db = m.sigma;

  // Central differences, one-sided where the nominal point touches a bound.
  auto partial = [&](auto&& shifted, double value, double lo, double hi) {
    const double h = 1e-6;
    const double a = std::max(lo, value - h);
    const double b = std::min(hi, value + h);
    return (shifted(b) - shifted(a)) / (b - a);
  };
  const auto& in = inputs;
  const double d_inject = partial(
      [&](double x) { return forward(x, in.efficiency.value, in.theta_rms.value); },
      in.inject_db.value, 0.0, std::numeric_limits<double>::max());
  const double d_eta = partial(
      [&](double x) { return forward(in.inject_db.value, x, in.theta_rms.value); },
      in.efficiency.value, 0.0, 1.0);
  const double d_theta = partial(
      [&](double x) { return forward(in.inject_db.value, in.efficiency.value, x); },
      in.theta_rms.value, 0.0, kThetaCeiling);
  result.linear_sigma_db = std::hypot(d_inject * in.inject_db.sigma, d_eta * in.efficiency.sigma,
                                      d_theta * in.theta_rms.sigma);
  return result;
}

ChainUncertaintyResult mc_chain_total(std::span<const NamedMeasurement> elements,
                                      std::size_t samples, std::uint64_t seed,
                                      std::size_t workers) {
  check_samples(samples);
  ChainUncertaintyResult result;
  result.samples = samples;
  result.nominal = 1.0;
  for (const auto& e : elements) {
    check_sigma(e.efficiency, e.label.c_str());
    if (!(e.efficiency.value > 0.0 && e.efficiency.value <= 1.0)) {
      throw InvalidArgument("loss element '" + e.label + "' efficiency must lie in (0, 1]");
    }
    result.nominal *= e.efficiency.value;
  }

  const double floor = std::numeric_limits<double>::min();
  std::vector<double> values(samples);
  std::vector<unsigned char> flags(samples * std::max<std::size_t>(1, elements.size()), 0);
  parallel_for(
      samples,
      [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
          CounterRng rng(seed, i);
          double product = 1.0;
          for (std::size_t k = 0; k < elements.size(); ++k) {
            const auto& m = elements[k].efficiency;
            product *= clamp_counted(rng.normal(m.value, m.sigma), floor, 1.0,
                                     flags[i * elements.size() + k]);
          }
          values[i] = product;
        }
      },
      workers);
  for (auto f : flags) result.clamped += f;
  const auto m = moments(values);
  result.mean = m.mean;
  result.sigma = m.sigma;
  return result;
}

OptimalInjection optimal_inject_db(double efficiency, const PhaseNoise& noise) {
  if (!(efficiency >= 0.0 && efficiency <= 1.0)) {
    throw InvalidArgument("efficiency must lie in [0, 1]");
  }
  if (noise.theta_rms() == 0.0) {
    throw NoOptimumError("without phase noise detected squeezing increases monotonically with "
                         "injection; there is no finite optimum");
  }
  if (efficiency == 0.0) {
    throw NoOptimumError("at zero efficiency the detected state is vacuum for every injection");
  }
  auto objective = [&](double inject) { return propagate_db(inject, efficiency, noise); };
  const auto best = golden_section_maximize(objective, 0.0, kMaxInjectDb, 1e-7);
  return {best.x, best.value, best.iterations};
}

}  // namespace sqznb
