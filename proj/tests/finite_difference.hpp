#pragma once

#include <functional>

#include "multigait/autodiff.hpp"

// Central finite differences over a ParamStore entry; used as the gradient
// oracle in several suites.
namespace fd {

using multigait::ad::Mat;
using multigait::ad::ParamStore;

inline Mat gradient(ParamStore& params, const std::string& name,
                    const std::function<double()>& f, double h = 1e-5) {
  Mat& p = params.at(name);
  Mat g(p.rows(), p.cols());
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const double saved = p(i);
    p(i) = saved + h;
    const double up = f();
    p(i) = saved - h;
    const double down = f();
    p(i) = saved;
    g(i) = (up - down) / (2.0 * h);
  }
  return g;
}

// Probe a deterministic sample of entries instead of every entry; returns
// max relative error against `analytic`.
inline double probeMaxRelError(ParamStore& params, const std::string& name,
                               const Mat& analytic,
                               const std::function<double()>& f,
                               int probes = 16, double h = 1e-5,
                               std::uint64_t seed = 1234) {
  Mat& p = params.at(name);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<Eigen::Index> pick(0, p.size() - 1);
  double max_rel = 0.0;
  for (int k = 0; k < probes; ++k) {
    const Eigen::Index i = pick(rng);
    const double saved = p(i);
    p(i) = saved + h;
    const double up = f();
    p(i) = saved - h;
    const double down = f();
    p(i) = saved;
    const double num = (up - down) / (2.0 * h);
    const double den = std::max({std::abs(num), std::abs(analytic(i)), 1e-8});
    max_rel = std::max(max_rel, std::abs(num - analytic(i)) / den);
  }
  return max_rel;
}

}  // namespace fd
