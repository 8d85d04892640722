#include "multigait/nets.hpp"

#include <cmath>
#include <stdexcept>

namespace multigait {

namespace {
constexpr double kNormEps = 1e-16;   // inside the norm, keeps graphs finite
constexpr double kMinNorm = 1e-8;    // below this the projection is rejected
constexpr double kLog2Pi = 1.8378770664093453;
}  // namespace

LatentCode projectHypersphere(const Eigen::VectorXd& z_bar) {
  const double n2 = z_bar.squaredNorm();
  if (!(std::sqrt(n2) > kMinNorm)) {
    throw std::invalid_argument("projectHypersphere: norm too small");
  }
  return LatentCode{z_bar / std::sqrt(n2 + kNormEps)};
}

ad::NodeId projectHypersphereTape(ad::Tape& tape, ad::NodeId z_bar) {
  const int rows = static_cast<int>(tape.value(z_bar).rows());
  ad::NodeId n2 = tape.colsum(tape.mul(z_bar, z_bar));       // 1 x batch
  ad::NodeId inv = tape.reciprocal(tape.sqrt(tape.addScalar(n2, kNormEps)));
  return tape.mul(z_bar, tape.replicateRows(inv, rows));
}

Eigen::VectorXd ActionDistribution::sample(std::mt19937_64& rng) const {
  std::normal_distribution<double> unit(0.0, 1.0);
  Eigen::VectorXd a(mean.size());
  for (Eigen::Index i = 0; i < mean.size(); ++i) {
    a[i] = mean[i] + std[i] * unit(rng);
  }
  return a;
}

double ActionDistribution::logProb(const Eigen::VectorXd& action) const {
  double lp = 0.0;
  for (Eigen::Index i = 0; i < mean.size(); ++i) {
    const double z = (action[i] - mean[i]) / std[i];
    lp += -0.5 * z * z - std::log(std[i]);
  }
  return lp - 0.5 * kLog2Pi * static_cast<double>(mean.size());
}

double ActionDistribution::entropy() const {
  double h = 0.0;
  for (Eigen::Index i = 0; i < mean.size(); ++i) h += std::log(std[i]);
  return h + 0.5 * (1.0 + kLog2Pi) * static_cast<double>(mean.size());
}

ad::MlpSpec PolicyNets::stmencSpec() {
  return {kHistoryDim, {256, 128}, kEncodedHistoryDim};
}
ad::MlpSpec PolicyNets::estimatorSpec() {
  return {kEncodedHistoryDim, {64, 32}, 3};
}
ad::MlpSpec PolicyNets::encoderSpec() { return {8, {64, 32}, kLatentDim}; }
ad::MlpSpec PolicyNets::generatorSpec() {
  return {kGeneratorInputDim, {128, 64}, kLatentDim};
}
ad::MlpSpec PolicyNets::lowlevelSpec() {
  return {kActorInputDim, {256, 128, 64}, kActionDim,
          ad::MlpSpec::OutputActivation::kTanh};
}
ad::MlpSpec PolicyNets::criticSpec() {
  return {kCriticInputDim, {512, 256, 128}, 1};
}
ad::MlpSpec PolicyNets::discriminatorSpec() {
  return {kDiscInputDim, {1024, 512}, 1};
}

PolicyNets::PolicyNets(std::uint64_t seed, double action_scale,
                       double initial_action_std)
    : action_scale_(action_scale) {
  mlpInit(params_, kStmenc, stmencSpec(), seed + 1);
  mlpInit(params_, kEstimator, estimatorSpec(), seed + 2);
  mlpInit(params_, kEncoder, encoderSpec(), seed + 3);
  mlpInit(params_, kGenerator, generatorSpec(), seed + 4);
  // small output gain keeps initial actions near the nominal pose
  mlpInit(params_, kLowlevel, lowlevelSpec(), seed + 5, 0.01);
  mlpInit(params_, kCritic, criticSpec(), seed + 6);
  mlpInit(params_, kDiscriminator, discriminatorSpec(), seed + 7);
  params_.add(kLogStd, ad::Mat::Constant(kActionDim, 1,
                                         std::log(initial_action_std)));
}

Eigen::VectorXd PolicyNets::stmEncode(const Eigen::VectorXd& history210) const {
  if (history210.size() != kHistoryDim) {
    throw std::invalid_argument("stmEncode: history must stack 5 observations");
  }
  return mlpForward(params_, kStmenc, stmencSpec(), history210);
}

Eigen::VectorXd PolicyNets::estimateVelocity(const Eigen::VectorXd& h) const {
  return mlpForward(params_, kEstimator, estimatorSpec(), h);
}

LatentCode PolicyNets::encodeGait(const Eigen::VectorXd& gait_vec8) const {
  return projectHypersphere(mlpForward(params_, kEncoder, encoderSpec(), gait_vec8));
}

LatentCode PolicyNets::generateLatent(const Eigen::VectorXd& command,
                                      const Eigen::VectorXd& partial_obs) const {
  Eigen::VectorXd in(kGeneratorInputDim);
  in << command, partial_obs;
  return projectHypersphere(mlpForward(params_, kGenerator, generatorSpec(), in));
}

ActionDistribution PolicyNets::actorForward(const Eigen::VectorXd& command,
                                            const Eigen::VectorXd& h,
                                            const Eigen::VectorXd& v_est,
                                            const LatentCode& z) const {
  Eigen::VectorXd in(kActorInputDim);
  in << command, h, v_est, z.z;
  ActionDistribution dist;
  dist.mean = action_scale_ * mlpForward(params_, kLowlevel, lowlevelSpec(), in);
  dist.std = actionStd();
  return dist;
}

double PolicyNets::criticForward(const Eigen::VectorXd& command,
                                 const Eigen::VectorXd& partial_obs,
                                 const Eigen::VectorXd& privileged,
                                 const Eigen::VectorXd& terrain,
                                 const LatentCode& z) const {
  Eigen::VectorXd in(kCriticInputDim);
  in << command, partial_obs, privileged, terrain, z.z;
  return mlpForward(params_, kCritic, criticSpec(), in)[0];
}

double PolicyNets::discriminatorScore(const Eigen::VectorXd& s_t,
                                      const Eigen::VectorXd& s_next,
                                      const std::array<double, 5>& g_p) const {
  if (s_t.size() != kCampStateDim || s_next.size() != kCampStateDim) {
    throw std::invalid_argument("discriminatorScore: bad state dimension");
  }
  Eigen::VectorXd in(kDiscInputDim);
  in.segment(0, kCampStateDim) = s_t;
  in.segment(kCampStateDim, kCampStateDim) = s_next;
  for (int i = 0; i < 5; ++i) in[2 * kCampStateDim + i] = g_p[i];
  return mlpForward(params_, kDiscriminator, discriminatorSpec(), in)[0];
}

Eigen::VectorXd PolicyNets::actionStd() const {
  return params_.at(kLogStd).col(0).array().exp();
}

std::vector<std::string> PolicyNets::policyParamNames() const {
  std::vector<std::string> names;
  for (const auto& n : params_.names()) {
    if (n.rfind(kDiscriminator, 0) != 0) names.push_back(n);
  }
  return names;
}

std::vector<std::string> PolicyNets::discriminatorParamNames() const {
  std::vector<std::string> names;
  for (const auto& n : params_.names()) {
    if (n.rfind(kDiscriminator, 0) == 0) names.push_back(n);
  }
  return names;
}

}  // namespace multigait
