#pragma once

#include <Eigen/Dense>
#include <random>
#include <string>

#include "multigait/autodiff.hpp"

namespace multigait {

// Observation / network dimensions used throughout.
constexpr int kPartialObsDim = 42;
constexpr int kCommandDim = 3;
constexpr int kPrivilegedDim = 21;
constexpr int kTerrainDim = 187;
constexpr int kLatentDim = 16;
constexpr int kHistoryLen = 5;
constexpr int kHistoryDim = kHistoryLen * kPartialObsDim;  // 210
constexpr int kEncodedHistoryDim = 32;
constexpr int kActionDim = 12;
constexpr int kCampStateDim = 30;
constexpr int kDiscInputDim = 2 * kCampStateDim + 5;  // 65
constexpr int kGeneratorInputDim = kCommandDim + kPartialObsDim;  // 45
constexpr int kActorInputDim =
    kCommandDim + kEncodedHistoryDim + 3 + kLatentDim;  // 54
constexpr int kCriticInputDim = kCommandDim + kPartialObsDim + kPrivilegedDim +
                                kTerrainDim + kLatentDim;  // 269

// Unit-norm gait-skill embedding.
struct LatentCode {
  Eigen::VectorXd z;  // 16, |z| = 1
};

// z_bar / |z_bar|; throws when |z_bar| <= 1e-8. A 1e-16 guard inside the
// norm keeps the training graph finite without disturbing unit inputs.
LatentCode projectHypersphere(const Eigen::VectorXd& z_bar);

// Tape variant over a (16 x batch) matrix of pre-projection latents.
ad::NodeId projectHypersphereTape(ad::Tape& tape, ad::NodeId z_bar);

// Diagonal Gaussian over joint position offsets.
struct ActionDistribution {
  Eigen::VectorXd mean;  // 12, in (-action_scale, action_scale)
  Eigen::VectorXd std;   // 12, > 0

  Eigen::VectorXd sample(std::mt19937_64& rng) const;
  double logProb(const Eigen::VectorXd& action) const;
  double entropy() const;
};

// Holds the parameters of all seven networks plus the learned log-std and
// provides the inference-path forwards. Training builds its own tapes with
// the specs exposed here.
class PolicyNets {
 public:
  PolicyNets(std::uint64_t seed, double action_scale = 0.5,
             double initial_action_std = 0.2);

  // Inference-path forwards (pure given the parameter snapshot).
  Eigen::VectorXd stmEncode(const Eigen::VectorXd& history210) const;
  Eigen::VectorXd estimateVelocity(const Eigen::VectorXd& h) const;
  LatentCode encodeGait(const Eigen::VectorXd& gait_vec8) const;
  LatentCode generateLatent(const Eigen::VectorXd& command,
                            const Eigen::VectorXd& partial_obs) const;
  ActionDistribution actorForward(const Eigen::VectorXd& command,
                                  const Eigen::VectorXd& h,
                                  const Eigen::VectorXd& v_est,
                                  const LatentCode& z) const;
  double criticForward(const Eigen::VectorXd& command,
                       const Eigen::VectorXd& partial_obs,
                       const Eigen::VectorXd& privileged,
                       const Eigen::VectorXd& terrain,
                       const LatentCode& z) const;
  double discriminatorScore(const Eigen::VectorXd& s_t,
                            const Eigen::VectorXd& s_next,
                            const std::array<double, 5>& g_p) const;

  ad::ParamStore& params() { return params_; }
  const ad::ParamStore& params() const { return params_; }
  double actionScale() const { return action_scale_; }

  Eigen::VectorXd actionStd() const;

  // Network specs (Table-layout sizes), exposed for the trainer's tapes.
  static ad::MlpSpec stmencSpec();
  static ad::MlpSpec estimatorSpec();
  static ad::MlpSpec encoderSpec();
  static ad::MlpSpec generatorSpec();
  static ad::MlpSpec lowlevelSpec();
  static ad::MlpSpec criticSpec();
  static ad::MlpSpec discriminatorSpec();

  // Parameter-name prefixes in the store.
  static constexpr const char* kStmenc = "stmenc";
  static constexpr const char* kEstimator = "estimator";
  static constexpr const char* kEncoder = "encoder";
  static constexpr const char* kGenerator = "generator";
  static constexpr const char* kLowlevel = "lowlevel";
  static constexpr const char* kCritic = "critic";
  static constexpr const char* kDiscriminator = "disc";
  static constexpr const char* kLogStd = "log_std";

  // Names of everything updated by the policy optimizer (all but the
  // discriminator), and of the discriminator alone.
  std::vector<std::string> policyParamNames() const;
  std::vector<std::string> discriminatorParamNames() const;

 private:
  ad::ParamStore params_;
  double action_scale_;
};

}  // namespace multigait
