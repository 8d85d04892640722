#include "multigait/nets.hpp"

#include <cmath>
#include <random>

#include "doctest.h"

using namespace multigait;

TEST_CASE("hypersphere projection") {
  Eigen::VectorXd z = Eigen::VectorXd::Zero(16);
  z[0] = 3.0;
  z[1] = 4.0;
  auto p = projectHypersphere(z);
  CHECK(p.z[0] == doctest::Approx(0.6).epsilon(1e-9));
  CHECK(p.z[1] == doctest::Approx(0.8).epsilon(1e-9));
  CHECK(p.z.norm() == doctest::Approx(1.0).epsilon(1e-9));

  // idempotence
  auto pp = projectHypersphere(p.z);
  CHECK((pp.z - p.z).cwiseAbs().maxCoeff() < 1e-12);

  // scale invariance
  for (double alpha : {1e-3, 0.1, 10.0, 1e3}) {
    auto scaled = projectHypersphere(alpha * z);
    CHECK((scaled.z - p.z).cwiseAbs().maxCoeff() < 1e-9);
  }

  CHECK_THROWS(projectHypersphere(Eigen::VectorXd::Zero(16)));
}

TEST_CASE("taped projection matches the plain path") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> unit(0.0, 1.0);
  ad::Tape tape;
  ad::Mat batch(16, 5);
  for (Eigen::Index i = 0; i < batch.size(); ++i) batch(i) = unit(rng);
  const ad::Mat out = tape.value(projectHypersphereTape(tape, tape.constant(batch)));
  for (int j = 0; j < 5; ++j) {
    auto plain = projectHypersphere(batch.col(j));
    CHECK((out.col(j) - plain.z).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(std::abs(out.col(j).norm() - 1.0) < 1e-6);
  }
}

TEST_CASE("network shapes follow the architecture table") {
  PolicyNets nets(42);

  Eigen::VectorXd hist = Eigen::VectorXd::Constant(kHistoryDim, 0.1);
  Eigen::VectorXd h = nets.stmEncode(hist);
  CHECK(h.size() == 32);
  CHECK((nets.stmEncode(hist) - h).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS(nets.stmEncode(Eigen::VectorXd::Zero(41)));

  Eigen::VectorXd v = nets.estimateVelocity(h);
  CHECK(v.size() == 3);
  CHECK(v.allFinite());

  Eigen::VectorXd g = Eigen::VectorXd::Constant(8, 0.2);
  auto z = nets.encodeGait(g);
  CHECK(z.z.size() == kLatentDim);
  CHECK(std::abs(z.z.norm() - 1.0) < 1e-6);
  CHECK((nets.encodeGait(g).z - z.z).cwiseAbs().maxCoeff() == 0.0);

  Eigen::VectorXd cmd(3);
  cmd << 0.5, 0.0, 0.0;
  Eigen::VectorXd obs = Eigen::VectorXd::Constant(kPartialObsDim, -0.05);
  auto zg = nets.generateLatent(cmd, obs);
  CHECK(std::abs(zg.z.norm() - 1.0) < 1e-6);

  auto dist = nets.actorForward(cmd, h, v, z);
  CHECK(dist.mean.size() == 12);
  CHECK(dist.mean.cwiseAbs().maxCoeff() < nets.actionScale());
  CHECK((dist.std.array() > 0).all());
  CHECK(dist.std[0] == doctest::Approx(0.2));

  Eigen::VectorXd priv = Eigen::VectorXd::Constant(kPrivilegedDim, 0.01);
  Eigen::VectorXd scan = Eigen::VectorXd::Constant(kTerrainDim, -0.3);
  const double value = nets.criticForward(cmd, obs, priv, scan, z);
  CHECK(std::isfinite(value));

  Eigen::VectorXd s = Eigen::VectorXd::Constant(kCampStateDim, 0.1);
  Eigen::VectorXd sn = Eigen::VectorXd::Constant(kCampStateDim, 0.2);
  const double score = nets.discriminatorScore(s, sn, {0.5, 0.5, 0.0, 0.5, 2.0});
  CHECK(std::isfinite(score));
  CHECK(nets.discriminatorScore(s, sn, {0.5, 0.5, 0.0, 0.5, 2.0}) == score);
}

TEST_CASE("zeroed estimator returns a zero estimate") {
  PolicyNets nets(7);
  for (const auto& name : nets.params().names()) {
    if (name.rfind("estimator", 0) == 0) nets.params().at(name).setZero();
  }
  Eigen::VectorXd h = Eigen::VectorXd::Constant(32, 0.3);
  CHECK(nets.estimateVelocity(h).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("log probability matches the diagonal Gaussian closed form") {
  PolicyNets nets(1);
  std::mt19937_64 rng(11);
  ActionDistribution dist;
  dist.mean = Eigen::VectorXd::LinSpaced(12, -0.3, 0.3);
  dist.std = Eigen::VectorXd::Constant(12, 0.25);
  const Eigen::VectorXd a = dist.sample(rng);
  CHECK(a.allFinite());

  double expected = 0.0;
  for (int i = 0; i < 12; ++i) {
    const double z = (a[i] - dist.mean[i]) / dist.std[i];
    expected += -0.5 * z * z - std::log(dist.std[i]) - 0.5 * std::log(2.0 * M_PI);
  }
  CHECK(dist.logProb(a) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(std::isfinite(dist.entropy()));
}

TEST_CASE("supervised estimator loss reaches the history encoder") {
  PolicyNets nets(5);
  std::mt19937_64 rng(2);
  std::normal_distribution<double> unit(0.0, 1.0);
  ad::Mat hist(kHistoryDim, 4);
  for (Eigen::Index i = 0; i < hist.size(); ++i) hist(i) = unit(rng);
  ad::Mat label(3, 4);
  for (Eigen::Index i = 0; i < label.size(); ++i) label(i) = unit(rng);

  ad::Tape tape;
  ad::TapeBinding bind(tape, nets.params());
  ad::NodeId h = mlpForwardTape(tape, bind, PolicyNets::kStmenc,
                                PolicyNets::stmencSpec(), tape.constant(hist));
  ad::NodeId v = mlpForwardTape(tape, bind, PolicyNets::kEstimator,
                                PolicyNets::estimatorSpec(), h);
  ad::NodeId err = tape.sub(v, tape.constant(label));
  ad::NodeId loss = tape.mean(tape.colsum(tape.square(err)));
  auto grads = parameterGradients(tape, loss, bind);
  CHECK(grads.at("stmenc.w0").cwiseAbs().maxCoeff() > 0.0);
  CHECK(grads.at("estimator.w0").cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("latent norm holds over random inputs") {
  PolicyNets nets(9);
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 200; ++trial) {
    Eigen::VectorXd g(8);
    for (int i = 0; i < 8; ++i) g[i] = u(rng);
    CHECK(std::abs(nets.encodeGait(g).z.norm() - 1.0) < 1e-6);

    Eigen::VectorXd cmd(3), obs(kPartialObsDim);
    for (int i = 0; i < 3; ++i) cmd[i] = u(rng);
    for (int i = 0; i < kPartialObsDim; ++i) obs[i] = u(rng);
    CHECK(std::abs(nets.generateLatent(cmd, obs).z.norm() - 1.0) < 1e-6);
  }
}
