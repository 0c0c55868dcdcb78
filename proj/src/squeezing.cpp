#include "sqznb/squeezing.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "sqznb/error.hpp"

namespace sqznb {

namespace {

constexpr double kHeisenbergRelTol = 1e-12;

void check_efficiency(double efficiency) {
  if (!(efficiency >= 0.0 && efficiency <= 1.0)) {
    throw InvalidArgument("efficiency must lie in [0, 1], got " + std::to_string(efficiency));
  }
}

}  // namespace

SqueezedState::SqueezedState(double v_plus, double v_minus, double angle)
    : v_plus_(v_plus), v_minus_(v_minus), angle_(angle) {
  if (!(std::isfinite(v_plus) && std::isfinite(v_minus) && std::isfinite(angle))) {
    throw InvalidArgument("squeezed state parameters must be finite");
  }
  if (!(v_minus > 0.0)) {
    throw InvalidArgument("quadrature variances must be positive");
  }
  if (v_plus < v_minus) {
    throw InvalidArgument("v_plus must not be smaller than v_minus");
  }
  if (v_plus * v_minus < 1.0 - kHeisenbergRelTol) {
    throw InvalidArgument("variance product " + std::to_string(v_plus * v_minus) +
                          " violates the uncertainty bound");
  }
}

double SqueezedState::variance_along(double theta) const noexcept {
  const double c = std::cos(theta - angle_);
  const double s = std::sin(theta - angle_);
  return v_minus_ * c * c + v_plus_ * s * s;
}

bool SqueezedState::is_pure(double rel_tol) const noexcept {
  return std::abs(v_plus_ * v_minus_ - 1.0) <= rel_tol;
}

PhaseNoise::PhaseNoise(double theta_rms, PhaseAveraging averaging)
    : theta_rms_(theta_rms), averaging_(averaging) {
  if (!(theta_rms >= 0.0 && theta_rms < std::numbers::pi / 4)) {
    throw InvalidArgument("phase noise RMS must lie in [0, pi/4) rad, got " +
                          std::to_string(theta_rms));
  }
}

double PhaseNoise::leakage() const noexcept {
  if (averaging_ == PhaseAveraging::kGaussian) {
    return 0.5 * (1.0 - std::exp(-2.0 * theta_rms_ * theta_rms_));
  }
  const double s = std::sin(theta_rms_);
  return s * s;
}

LossChain::LossChain(std::vector<LossElement> elements) {
  for (auto& e : elements) add(std::move(e.label), e.efficiency);
}

LossChain LossChain::single(double efficiency, std::string label) {
  LossChain chain;
  chain.add(std::move(label), efficiency);
  return chain;
}

void LossChain::add(std::string label, double efficiency) {
  if (!(efficiency > 0.0 && efficiency <= 1.0)) {
    throw InvalidArgument("loss element '" + label + "' efficiency must lie in (0, 1], got " +
                          std::to_string(efficiency));
  }
  elements_.push_back({std::move(label), efficiency});
}

double LossChain::total() const noexcept {
  double product = 1.0;
  for (const auto& e : elements_) product *= e.efficiency;
  return product;
}

SqueezedState state_from_db(double squeeze_db, double angle) {
  if (!(squeeze_db >= 0.0) || !std::isfinite(squeeze_db)) {
    throw InvalidArgument("squeezing level must be a finite value >= 0 dB, got " +
                          std::to_string(squeeze_db));
  }
  return SqueezedState(std::pow(10.0, squeeze_db / 10.0), std::pow(10.0, -squeeze_db / 10.0),
                       angle);
}

SqueezedState apply_loss(const SqueezedState& state, double efficiency) {
  check_efficiency(efficiency);
  const double vacuum = 1.0 - efficiency;
  return SqueezedState(efficiency * state.v_plus() + vacuum,
                       efficiency * state.v_minus() + vacuum, state.angle());
}

SqueezedState apply_phase_noise(const SqueezedState& state, const PhaseNoise& noise) {
  const double leak = noise.leakage();
  // Jitter cannot change a circularly symmetric state.
  if (leak == 0.0 || state.v_plus() == state.v_minus()) return state;
  const double keep = 1.0 - leak;
  // leak < 1/2 keeps the ordering.
  return SqueezedState(state.v_plus() * keep + state.v_minus() * leak,
                       state.v_minus() * keep + state.v_plus() * leak, state.angle());
}

double detected_db(const SqueezedState& state) { return -10.0 * std::log10(state.v_minus()); }

Propagation propagate(double inject_db, const LossChain& chain, const PhaseNoise& noise) {
  Propagation p;
  p.injected = state_from_db(inject_db);
  p.efficiency = chain.total();
  p.after_loss = apply_loss(p.injected, p.efficiency);
  p.detected = apply_phase_noise(p.after_loss, noise);
  p.detected_db = detected_db(p.detected);
  return p;
}

Propagation propagate(double inject_db, double efficiency, const PhaseNoise& noise) {
  check_efficiency(efficiency);
  Propagation p;
  p.injected = state_from_db(inject_db);
  p.efficiency = efficiency;
  p.after_loss = apply_loss(p.injected, efficiency);
  p.detected = apply_phase_noise(p.after_loss, noise);
  p.detected_db = detected_db(p.detected);
  return p;
}

double propagate_db(double inject_db, double efficiency, const PhaseNoise& noise) {
  return propagate(inject_db, efficiency, noise).detected_db;
}

double squeeze_factor_from_db(double squeeze_db) noexcept {
  return squeeze_db * std::numbers::ln10 / 20.0;
}

double db_from_squeeze_factor(double r) noexcept { return 20.0 * r / std::numbers::ln10; }

}  // namespace sqznb
