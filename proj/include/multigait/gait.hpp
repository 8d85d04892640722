#pragma once

#include <array>
#include <string>

namespace multigait {

// Per-leg order used everywhere: FL, FR, RL, RR.
constexpr int kNumLegs = 4;

// Gait command g_t minus the phase part: offsets of legs 2..4 relative to
// the front-left leg, stepping frequency, stance ratio, base height command.
struct GaitParams {
  std::array<double, 3> phase_offsets{0.5, 0.5, 0.0};  // FR, RL, RR in [0,1)
  double frequency_hz = 2.0;                           // f >= 0
  double stance_ratio = 0.5;                           // in (0,1)
  double base_height_cmd = 0.3;                        // [m]

  void validate() const;
};

// Periodic phase of the front-left leg; the other legs are derived from it.
struct PhaseState {
  double phi1 = 0.0;  // in [0,1)
};

// Desired per-leg stance probability.
struct ContactSchedule {
  std::array<double, kNumLegs> c_des{};
};

// Time-invariant part of the gait command, the discriminator conditioning
// vector g^p = (offsets, stance ratio, frequency).
struct PartialGaitParams {
  std::array<double, 3> phase_offsets{0.5, 0.5, 0.0};
  double stance_ratio = 0.5;
  double frequency_hz = 2.0;

  std::array<double, 5> toVector() const {
    return {phase_offsets[0], phase_offsets[1], phase_offsets[2],
            stance_ratio, frequency_hz};
  }
};

// phi1 <- (phi1 + f*dt) mod 1. Throws on non-finite or non-positive dt.
PhaseState advancePhase(PhaseState state, double frequency_hz, double dt);

// Phases of all four legs: leg 1 is phi1, legs 2..4 add their offsets mod 1.
std::array<double, kNumLegs> legPhases(PhaseState state,
                                       const std::array<double, 3>& offsets);

// The 8-dim gait vector [sin 2*pi*phi1, cos 2*pi*phi1, off2, off3, off4,
// f, stance_ratio, h_cmd].
std::array<double, 8> encodeGaitVector(PhaseState state,
                                       const GaitParams& params);

// Normal CDF with zero mean and standard deviation sigma.
double normalCdf(double x, double sigma);

// Probabilistic desired contact schedule. Each leg phase is remapped so the
// stance->swing switch sits at 0.5, then pushed through a product of four
// normal CDFs; the second product term covers the wrap at phi near 1.
ContactSchedule desiredContactSchedule(const std::array<double, kNumLegs>& phases,
                                       double stance_ratio, double sigma = 0.05);

// Piecewise-linear phase remap used by the contact schedule; exposed for tests.
double remapPhase(double phi, double stance_ratio);

struct NamedGait {
  std::array<double, 3> phase_offsets;
  double stance_ratio;
};

// The five supported gait names: walking, trotting, pacing, pronking,
// bounding. Throws std::out_of_range for anything else.
NamedGait namedGait(const std::string& name);

const std::array<std::string, 5>& gaitNames();

}  // namespace multigait
