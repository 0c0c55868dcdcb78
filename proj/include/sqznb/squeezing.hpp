#pragma once

// Gaussian squeezed-state quadrature variances and how they degrade on the
// way from the squeezer to the photodetector.
//
// Variances are normalized to vacuum = 1. Squeezing levels are power dB:
// s dB of squeezing is a variance ratio of 10^(s/10).

#include <string>
#include <vector>

namespace sqznb {

class SqueezedState {
 public:
  // Vacuum.
  SqueezedState() = default;

  // Throws InvalidArgument unless 0 < v_minus <= v_plus and
  // v_plus * v_minus >= 1 (to 1e-12 relative).
  SqueezedState(double v_plus, double v_minus, double angle = 0.0);

  double v_plus() const noexcept { return v_plus_; }
  double v_minus() const noexcept { return v_minus_; }
  // Angle of the squeezed (minor) axis from the in-phase quadrature, radians.
  double angle() const noexcept { return angle_; }

  // Variance along a quadrature at `theta` radians from the in-phase axis.
  double variance_along(double theta) const noexcept;

  bool is_pure(double rel_tol = 1e-12) const noexcept;

  friend bool operator==(const SqueezedState&, const SqueezedState&) = default;

 private:
  double v_plus_ = 1.0;
  double v_minus_ = 1.0;
  double angle_ = 0.0;
};

enum class PhaseAveraging {
  // cos^2/sin^2 of the RMS jitter substituted directly.
  kSmallAngle,
  // Exact Gaussian average: weights (1 +- exp(-2 theta^2)) / 2.
  kGaussian,
};

class PhaseNoise {
 public:
  PhaseNoise() = default;
  // theta_rms in radians, must lie in [0, pi/4).
  explicit PhaseNoise(double theta_rms,
                      PhaseAveraging averaging = PhaseAveraging::kSmallAngle);

  static PhaseNoise from_mrad(double mrad,
                              PhaseAveraging averaging = PhaseAveraging::kSmallAngle) {
    return PhaseNoise(mrad * 1e-3, averaging);
  }

  double theta_rms() const noexcept { return theta_rms_; }
  PhaseAveraging averaging() const noexcept { return averaging_; }

  // Fraction of the orthogonal quadrature leaking into the measured one.
  double leakage() const noexcept;

 private:
  double theta_rms_ = 0.0;
  PhaseAveraging averaging_ = PhaseAveraging::kSmallAngle;
};

struct LossElement {
  std::string label;
  double efficiency;  // power transmission in (0, 1]
};

class LossChain {
 public:
  LossChain() = default;
  explicit LossChain(std::vector<LossElement> elements);

  // Single anonymous element carrying a total efficiency.
  static LossChain single(double efficiency, std::string label = "total");

  void add(std::string label, double efficiency);

  const std::vector<LossElement>& elements() const noexcept { return elements_; }
  bool empty() const noexcept { return elements_.empty(); }

  // Product of element efficiencies; 1 for an empty chain.
  double total() const noexcept;

 private:
  std::vector<LossElement> elements_;
};

// Pure state with `squeeze_db` >= 0 of squeezing along `angle`.
SqueezedState state_from_db(double squeeze_db, double angle = 0.0);

// V -> eta V + (1 - eta) on both quadratures; eta in [0, 1].
SqueezedState apply_loss(const SqueezedState& state, double efficiency);

// V''(+-) = V'(+-) cos^2 + V'(-+) sin^2 of the phase jitter.
SqueezedState apply_phase_noise(const SqueezedState& state, const PhaseNoise& noise);

// -10 log10(v_minus). Positive below vacuum, negative when antisqueezing
// leaks in strongly enough to lift the measured quadrature above vacuum.
double detected_db(const SqueezedState& state);

inline double chain_total(const LossChain& chain) { return chain.total(); }

struct Propagation {
  SqueezedState injected;
  SqueezedState after_loss;
  SqueezedState detected;
  double efficiency = 1.0;
  double detected_db = 0.0;
};

// Injection -> loss -> phase noise.
Propagation propagate(double inject_db, const LossChain& chain, const PhaseNoise& noise);
Propagation propagate(double inject_db, double efficiency, const PhaseNoise& noise);

// Shorthand for propagate(...).detected_db.
double propagate_db(double inject_db, double efficiency, const PhaseNoise& noise);

// Squeeze factor r for a level in dB (v_minus = exp(-2r)).
double squeeze_factor_from_db(double squeeze_db) noexcept;
double db_from_squeeze_factor(double r) noexcept;

}  // namespace sqznb
