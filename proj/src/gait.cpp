#include "multigait/gait.hpp"

#include <cmath>
#include <stdexcept>

namespace multigait {

namespace {

double frac(double x) { return x - std::floor(x); }

constexpr double kPi = 3.14159265358979323846;

}  // namespace

void GaitParams::validate() const {
  for (double o : phase_offsets) {
    if (!(o >= 0.0 && o < 1.0)) {
      throw std::invalid_argument("gait phase offset outside [0,1)");
    }
  }
  if (!(stance_ratio > 0.0 && stance_ratio < 1.0)) {
    throw std::invalid_argument("stance ratio outside (0,1)");
  }
  if (!(frequency_hz >= 0.0) || !std::isfinite(frequency_hz)) {
    throw std::invalid_argument("stepping frequency must be finite and >= 0");
  }
  if (!std::isfinite(base_height_cmd)) {
    throw std::invalid_argument("base height command must be finite");
  }
}

PhaseState advancePhase(PhaseState state, double frequency_hz, double dt) {
  if (!std::isfinite(frequency_hz) || frequency_hz < 0.0) {
    throw std::invalid_argument("advancePhase: bad frequency");
  }
  if (!std::isfinite(dt) || dt <= 0.0) {
    throw std::invalid_argument("advancePhase: bad dt");
  }
  return PhaseState{frac(state.phi1 + frequency_hz * dt)};
}

std::array<double, kNumLegs> legPhases(PhaseState state,
                                       const std::array<double, 3>& offsets) {
  std::array<double, kNumLegs> phases;
  phases[0] = frac(state.phi1);
  for (int i = 0; i < 3; ++i) {
    if (!(offsets[i] >= 0.0 && offsets[i] < 1.0)) {
      throw std::invalid_argument("legPhases: offset outside [0,1)");
    }
    phases[i + 1] = frac(state.phi1 + offsets[i]);
  }
  return phases;
}

std::array<double, 8> encodeGaitVector(PhaseState state,
                                       const GaitParams& params) {
  params.validate();
  const double a = 2.0 * kPi * state.phi1;
  return {std::sin(a),
          std::cos(a),
          params.phase_offsets[0],
          params.phase_offsets[1],
          params.phase_offsets[2],
          params.frequency_hz,
          params.stance_ratio,
          params.base_height_cmd};
}

double normalCdf(double x, double sigma) {
  // Phi(x) = erfc(-x / (sigma*sqrt(2))) / 2; erfc keeps the tails accurate.
  return 0.5 * std::erfc(-x / (sigma * std::sqrt(2.0)));
}

double remapPhase(double phi, double stance_ratio) {
  if (phi <= stance_ratio) {
    return 0.5 * phi / stance_ratio;
  }
  return 0.5 + 0.5 * (phi - stance_ratio) / (1.0 - stance_ratio);
}

ContactSchedule desiredContactSchedule(const std::array<double, kNumLegs>& phases,
                                       double stance_ratio, double sigma) {
  if (!(stance_ratio > 0.0 && stance_ratio < 1.0)) {
    throw std::invalid_argument("desiredContactSchedule: stance ratio outside (0,1)");
  }
  if (!(sigma > 0.0)) {
    throw std::invalid_argument("desiredContactSchedule: sigma must be > 0");
  }
  ContactSchedule schedule;
  for (int i = 0; i < kNumLegs; ++i) {
    const double p = remapPhase(phases[i], stance_ratio);
    schedule.c_des[i] =
        normalCdf(p, sigma) * (1.0 - normalCdf(p - 0.5, sigma)) +
        normalCdf(p - 1.0, sigma) * (1.0 - normalCdf(p - 1.5, sigma));
  }
  return schedule;
}

const std::array<std::string, 5>& gaitNames() {
  static const std::array<std::string, 5> names = {
      "walking", "trotting", "pacing", "pronking", "bounding"};
  return names;
}

NamedGait namedGait(const std::string& name) {
  if (name == "walking") return {{0.5, 0.25, 0.75}, 0.75};
  if (name == "trotting") return {{0.5, 0.5, 0.0}, 0.5};
  if (name == "pacing") return {{0.5, 0.0, 0.5}, 0.5};
  if (name == "pronking") return {{0.0, 0.0, 0.0}, 0.5};
  if (name == "bounding") return {{0.0, 0.5, 0.5}, 0.5};
  throw std::out_of_range("unknown gait name: " + name);
}

}  // namespace multigait
