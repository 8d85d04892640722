#include "multigait/autodiff.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace multigait::ad {

namespace {

void checkSameShape(const Mat& a, const Mat& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument(std::string(what) + ": shape mismatch");
  }
}

template <typename F>
Mat cwise(const Mat& m, F f) {
  return m.unaryExpr(f);
}

}  // namespace

NodeId Tape::push(Node n) {
  nodes_.push_back(std::move(n));
  return static_cast<NodeId>(nodes_.size() - 1);
}

NodeId Tape::emit(Op op, Mat value, NodeId a, NodeId b, double c, int i0, int i1) {
  Node n;
  n.value = std::move(value);
  n.op = op;
  n.a = a;
  n.b = b;
  n.c = c;
  n.i0 = i0;
  n.i1 = i1;
  return push(std::move(n));
}

NodeId Tape::constant(Mat v) { return emit(Op::kConstant, std::move(v), -1, -1); }

NodeId Tape::constant(double v) {
  Mat m(1, 1);
  m(0, 0) = v;
  return constant(std::move(m));
}

NodeId Tape::add(NodeId a, NodeId b) {
  checkSameShape(nodes_[a].value, nodes_[b].value, "add");
  return emit(Op::kAdd, nodes_[a].value + nodes_[b].value, a, b);
}

NodeId Tape::sub(NodeId a, NodeId b) {
  checkSameShape(nodes_[a].value, nodes_[b].value, "sub");
  return emit(Op::kSub, nodes_[a].value - nodes_[b].value, a, b);
}

NodeId Tape::mul(NodeId a, NodeId b) {
  checkSameShape(nodes_[a].value, nodes_[b].value, "mul");
  return emit(Op::kMul, nodes_[a].value.cwiseProduct(nodes_[b].value), a, b);
}

NodeId Tape::scale(NodeId a, double c) {
  return emit(Op::kScale, nodes_[a].value * c, a, -1, c);
}

NodeId Tape::addScalar(NodeId a, double c) {
  return emit(Op::kAddScalar, nodes_[a].value.array() + c, a, -1, c);
}

NodeId Tape::matmul(NodeId a, NodeId b) {
  if (nodes_[a].value.cols() != nodes_[b].value.rows()) {
    throw std::invalid_argument("matmul: inner dimension mismatch");
  }
  return emit(Op::kMatMulNN, nodes_[a].value * nodes_[b].value, a, b);
}

NodeId Tape::matmulNT(NodeId a, NodeId b) {
  if (nodes_[a].value.cols() != nodes_[b].value.cols()) {
    throw std::invalid_argument("matmulNT: inner dimension mismatch");
  }
  return emit(Op::kMatMulNT, nodes_[a].value * nodes_[b].value.transpose(), a, b);
}

NodeId Tape::matmulTN(NodeId a, NodeId b) {
  if (nodes_[a].value.rows() != nodes_[b].value.rows()) {
    throw std::invalid_argument("matmulTN: inner dimension mismatch");
  }
  return emit(Op::kMatMulTN, nodes_[a].value.transpose() * nodes_[b].value, a, b);
}

NodeId Tape::colsum(NodeId a) {
  return emit(Op::kColSum, nodes_[a].value.colwise().sum(), a, -1);
}

NodeId Tape::rowsum(NodeId a) {
  return emit(Op::kRowSum, nodes_[a].value.rowwise().sum(), a, -1);
}

NodeId Tape::replicateRows(NodeId a, int rows) {
  if (nodes_[a].value.rows() != 1) {
    throw std::invalid_argument("replicateRows: expected a 1 x c row");
  }
  return emit(Op::kRepRows, nodes_[a].value.replicate(rows, 1), a, -1, 0.0, rows);
}

NodeId Tape::replicateCols(NodeId a, int cols) {
  if (nodes_[a].value.cols() != 1) {
    throw std::invalid_argument("replicateCols: expected an r x 1 column");
  }
  return emit(Op::kRepCols, nodes_[a].value.replicate(1, cols), a, -1, 0.0, cols);
}

NodeId Tape::exp(NodeId a) {
  return emit(Op::kExp, cwise(nodes_[a].value, [](double v) { return std::exp(v); }), a, -1);
}

NodeId Tape::log(NodeId a) {
  return emit(Op::kLog, cwise(nodes_[a].value, [](double v) { return std::log(v); }), a, -1);
}

NodeId Tape::sqrt(NodeId a) {
  return emit(Op::kSqrt, cwise(nodes_[a].value, [](double v) { return std::sqrt(v); }), a, -1);
}

NodeId Tape::tanh(NodeId a) {
  return emit(Op::kTanh, cwise(nodes_[a].value, [](double v) { return std::tanh(v); }), a, -1);
}

NodeId Tape::reciprocal(NodeId a) {
  return emit(Op::kReciprocal, cwise(nodes_[a].value, [](double v) { return 1.0 / v; }), a, -1);
}

NodeId Tape::concatRows(NodeId a, NodeId b) {
  const Mat& va = nodes_[a].value;
  const Mat& vb = nodes_[b].value;
  if (va.cols() != vb.cols()) {
    throw std::invalid_argument("concatRows: column count mismatch");
  }
  Mat out(va.rows() + vb.rows(), va.cols());
  out.topRows(va.rows()) = va;
  out.bottomRows(vb.rows()) = vb;
  return emit(Op::kConcatRows, std::move(out), a, b);
}

NodeId Tape::sliceRows(NodeId a, int row0, int nrows) {
  const Mat& v = nodes_[a].value;
  if (row0 < 0 || nrows < 0 || row0 + nrows > v.rows()) {
    throw std::invalid_argument("sliceRows: range out of bounds");
  }
  return emit(Op::kSliceRows, v.middleRows(row0, nrows), a, -1, 0.0, row0, nrows);
}

NodeId Tape::concatCols(NodeId a, NodeId b) {
  const Mat& va = nodes_[a].value;
  const Mat& vb = nodes_[b].value;
  if (va.rows() != vb.rows()) {
    throw std::invalid_argument("concatCols: row count mismatch");
  }
  Mat out(va.rows(), va.cols() + vb.cols());
  out.leftCols(va.cols()) = va;
  out.rightCols(vb.cols()) = vb;
  return emit(Op::kConcatCols, std::move(out), a, b);
}

NodeId Tape::sliceCols(NodeId a, int col0, int ncols) {
  const Mat& v = nodes_[a].value;
  if (col0 < 0 || ncols < 0 || col0 + ncols > v.cols()) {
    throw std::invalid_argument("sliceCols: range out of bounds");
  }
  return emit(Op::kSliceCols, v.middleCols(col0, ncols), a, -1, 0.0, col0, ncols);
}

NodeId Tape::elu(NodeId a) {
  const Mat& v = nodes_[a].value;
  Mat pos_mask = (v.array() > 0.0).cast<double>();
  Mat neg_mask = Mat::Ones(v.rows(), v.cols()) - pos_mask;
  NodeId mp = constant(std::move(pos_mask));
  NodeId mn = constant(std::move(neg_mask));
  // exp argument is zeroed on the positive side so large inputs cannot overflow
  NodeId e = exp(mul(a, mn));
  return add(mul(a, mp), mul(mn, addScalar(e, -1.0)));
}

NodeId Tape::min(NodeId a, NodeId b) {
  const Mat& va = nodes_[a].value;
  const Mat& vb = nodes_[b].value;
  checkSameShape(va, vb, "min");
  Mat mask_a = (va.array() <= vb.array()).cast<double>();
  Mat mask_b = Mat::Ones(va.rows(), va.cols()) - mask_a;
  return add(mul(a, constant(std::move(mask_a))), mul(b, constant(std::move(mask_b))));
}

NodeId Tape::clamp(NodeId a, double lo, double hi) {
  const Mat& v = nodes_[a].value;
  Mat inside = ((v.array() > lo) && (v.array() < hi)).cast<double>();
  Mat fixed = (v.array() <= lo).cast<double>() * lo + (v.array() >= hi).cast<double>() * hi;
  return add(mul(a, constant(std::move(inside))), constant(std::move(fixed)));
}

NodeId Tape::sumAll(NodeId a) { return rowsum(colsum(a)); }

NodeId Tape::mean(NodeId a) {
  const auto n = nodes_[a].value.size();
  return scale(sumAll(a), 1.0 / static_cast<double>(n));
}

double Tape::scalarValue(NodeId id) const {
  const Mat& v = nodes_[id].value;
  if (v.size() != 1) {
    throw std::invalid_argument("scalarValue: node is not 1x1");
  }
  return v(0, 0);
}

void Tape::backwardInto(NodeId output, std::vector<NodeId>& grads) {
  const Mat& out = nodes_[output].value;
  if (out.rows() != 1 || out.cols() != 1) {
    throw std::invalid_argument("gradient: output must be a 1x1 scalar");
  }
  grads.assign(static_cast<std::size_t>(output) + 1, -1);
  grads[output] = constant(Mat::Ones(1, 1));

  auto accumulate = [&](NodeId parent, NodeId contrib) {
    grads[parent] = grads[parent] < 0 ? contrib : add(grads[parent], contrib);
  };

  struct Meta {
    Op op;
    NodeId a, b;
    double c;
    int i0, i1;
  };
  for (NodeId u = output; u >= 0; --u) {
    const NodeId g = grads[u];
    if (g < 0) continue;
    // metadata copy: nodes_ may reallocate while emitting gradient nodes
    const Meta n{nodes_[u].op, nodes_[u].a, nodes_[u].b,
                 nodes_[u].c, nodes_[u].i0, nodes_[u].i1};
    switch (n.op) {
      case Op::kConstant:
        break;
      case Op::kAdd:
        accumulate(n.a, g);
        accumulate(n.b, g);
        break;
      case Op::kSub:
        accumulate(n.a, g);
        accumulate(n.b, scale(g, -1.0));
        break;
      case Op::kMul:
        accumulate(n.a, mul(g, n.b));
        accumulate(n.b, mul(g, n.a));
        break;
      case Op::kScale:
        accumulate(n.a, scale(g, n.c));
        break;
      case Op::kAddScalar:
        accumulate(n.a, g);
        break;
      case Op::kMatMulNN:
        accumulate(n.a, matmulNT(g, n.b));
        accumulate(n.b, matmulTN(n.a, g));
        break;
      case Op::kMatMulNT:
        accumulate(n.a, matmul(g, n.b));
        accumulate(n.b, matmulTN(g, n.a));
        break;
      case Op::kMatMulTN:
        accumulate(n.a, matmulNT(n.b, g));
        accumulate(n.b, matmul(n.a, g));
        break;
      case Op::kColSum:
        accumulate(n.a, replicateRows(g, static_cast<int>(nodes_[n.a].value.rows())));
        break;
      case Op::kRowSum:
        accumulate(n.a, replicateCols(g, static_cast<int>(nodes_[n.a].value.cols())));
        break;
      case Op::kRepRows:
        accumulate(n.a, colsum(g));
        break;
      case Op::kRepCols:
        accumulate(n.a, rowsum(g));
        break;
      case Op::kExp:
        accumulate(n.a, mul(g, u));
        break;
      case Op::kLog:
        accumulate(n.a, mul(g, reciprocal(n.a)));
        break;
      case Op::kSqrt:
        accumulate(n.a, scale(mul(g, reciprocal(u)), 0.5));
        break;
      case Op::kTanh:
        accumulate(n.a, mul(g, addScalar(scale(mul(u, u), -1.0), 1.0)));
        break;
      case Op::kReciprocal:
        accumulate(n.a, scale(mul(g, mul(u, u)), -1.0));
        break;
      case Op::kConcatRows: {
        const int ra = static_cast<int>(nodes_[n.a].value.rows());
        const int rb = static_cast<int>(nodes_[n.b].value.rows());
        accumulate(n.a, sliceRows(g, 0, ra));
        accumulate(n.b, sliceRows(g, ra, rb));
        break;
      }
      case Op::kSliceRows: {
        const Mat& src = nodes_[n.a].value;
        Mat pad = Mat::Zero(src.rows(), src.cols());
        pad.middleRows(n.i0, n.i1) = nodes_[g].value;
        // pad is a linear embedding; represent it as PadRows so that the
        // embedded gradient stays connected for double-backward
        accumulate(n.a, emit(Op::kPadRows, std::move(pad), g, -1, 0.0, n.i0,
                             static_cast<int>(src.rows())));
        break;
      }
      case Op::kPadRows:
        accumulate(n.a, sliceRows(g, n.i0, static_cast<int>(nodes_[n.a].value.rows())));
        break;
      case Op::kConcatCols: {
        const int ca = static_cast<int>(nodes_[n.a].value.cols());
        const int cb = static_cast<int>(nodes_[n.b].value.cols());
        accumulate(n.a, sliceCols(g, 0, ca));
        accumulate(n.b, sliceCols(g, ca, cb));
        break;
      }
      case Op::kSliceCols: {
        const Mat& src = nodes_[n.a].value;
        Mat pad = Mat::Zero(src.rows(), src.cols());
        pad.middleCols(n.i0, n.i1) = nodes_[g].value;
        accumulate(n.a, emit(Op::kPadCols, std::move(pad), g, -1, 0.0, n.i0,
                             static_cast<int>(src.cols())));
        break;
      }
      case Op::kPadCols:
        accumulate(n.a, sliceCols(g, n.i0, static_cast<int>(nodes_[n.a].value.cols())));
        break;
    }
  }
}

NodeId Tape::gradient(NodeId output, NodeId wrt) {
  std::vector<NodeId> grads;
  backwardInto(output, grads);
  if (wrt >= static_cast<NodeId>(grads.size()) || grads[wrt] < 0) {
    throw std::invalid_argument("gradient: target does not participate in the output");
  }
  return grads[wrt];
}

std::vector<NodeId> Tape::gradient(NodeId output, std::span<const NodeId> wrt) {
  std::vector<NodeId> grads;
  backwardInto(output, grads);
  std::vector<NodeId> result;
  result.reserve(wrt.size());
  for (NodeId id : wrt) {
    if (id < static_cast<NodeId>(grads.size()) && grads[id] >= 0) {
      result.push_back(grads[id]);
    } else {
      const Mat& v = nodes_[id].value;
      result.push_back(constant(Mat::Zero(v.rows(), v.cols())));
    }
  }
  return result;
}

// ----- ParamStore -----

Mat& ParamStore::add(const std::string& name, Mat value) {
  if (values_.count(name)) {
    throw std::invalid_argument("ParamStore::add: duplicate name " + name);
  }
  names_.push_back(name);
  return values_.emplace(name, std::move(value)).first->second;
}

Mat& ParamStore::at(const std::string& name) {
  auto it = values_.find(name);
  if (it == values_.end()) {
    throw std::out_of_range("ParamStore: unknown parameter " + name);
  }
  return it->second;
}

const Mat& ParamStore::at(const std::string& name) const {
  auto it = values_.find(name);
  if (it == values_.end()) {
    throw std::out_of_range("ParamStore: unknown parameter " + name);
  }
  return it->second;
}

bool ParamStore::contains(const std::string& name) const {
  return values_.count(name) != 0;
}

std::size_t ParamStore::totalSize() const {
  std::size_t n = 0;
  for (const auto& name : names_) n += values_.at(name).size();
  return n;
}

NodeId TapeBinding::operator()(const std::string& name) {
  auto it = ids_.find(name);
  if (it != ids_.end()) return it->second;
  NodeId id = tape_->constant(store_->at(name));
  ids_.emplace(name, id);
  bound_.emplace_back(name, id);
  return id;
}

std::unordered_map<std::string, Mat> parameterGradients(Tape& tape, NodeId loss,
                                                        const TapeBinding& binding) {
  std::vector<NodeId> ids;
  ids.reserve(binding.bound().size());
  for (const auto& [name, id] : binding.bound()) ids.push_back(id);
  std::vector<NodeId> grad_ids = tape.gradient(loss, ids);
  std::unordered_map<std::string, Mat> grads;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    grads.emplace(binding.bound()[i].first, tape.value(grad_ids[i]));
  }
  return grads;
}

// ----- MLP -----

namespace {

std::vector<int> layerDims(const MlpSpec& spec) {
  if (spec.input_dim < 1 || spec.output_dim < 1) {
    throw std::invalid_argument("MlpSpec: dims must be >= 1");
  }
  std::vector<int> dims;
  dims.push_back(spec.input_dim);
  for (int h : spec.hidden) {
    if (h < 1) throw std::invalid_argument("MlpSpec: dims must be >= 1");
    dims.push_back(h);
  }
  dims.push_back(spec.output_dim);
  return dims;
}

std::string wName(const std::string& prefix, std::size_t i) {
  return prefix + ".w" + std::to_string(i);
}
std::string bName(const std::string& prefix, std::size_t i) {
  return prefix + ".b" + std::to_string(i);
}

}  // namespace

void mlpInit(ParamStore& store, const std::string& prefix, const MlpSpec& spec,
             std::uint64_t seed, double output_gain) {
  const std::vector<int> dims = layerDims(spec);
  std::mt19937_64 engine(seed);
  for (std::size_t i = 0; i + 1 < dims.size(); ++i) {
    const int fan_in = dims[i];
    const int fan_out = dims[i + 1];
    const bool last = (i + 2 == dims.size());
    const double gain = last ? output_gain : std::sqrt(2.0);
    const double bound = gain * std::sqrt(3.0 / fan_in);
    std::uniform_real_distribution<double> dist(-bound, bound);
    Mat w(fan_out, fan_in);
    for (int r = 0; r < fan_out; ++r) {
      for (int c = 0; c < fan_in; ++c) {
        w(r, c) = dist(engine);
      }
    }
    store.add(wName(prefix, i), std::move(w));
    store.add(bName(prefix, i), Mat::Zero(fan_out, 1));
  }
}

std::int64_t mlpParamCount(const MlpSpec& spec) {
  const std::vector<int> dims = layerDims(spec);
  std::int64_t n = 0;
  for (std::size_t i = 0; i + 1 < dims.size(); ++i) {
    n += static_cast<std::int64_t>(dims[i]) * dims[i + 1] + dims[i + 1];
  }
  return n;
}

Mat mlpForwardBatch(const ParamStore& store, const std::string& prefix,
                    const MlpSpec& spec, const Mat& input) {
  const std::vector<int> dims = layerDims(spec);
  if (input.rows() != spec.input_dim) {
    throw std::invalid_argument("mlpForward: input dimension mismatch");
  }
  Mat x = input;
  for (std::size_t i = 0; i + 1 < dims.size(); ++i) {
    const Mat& w = store.at(wName(prefix, i));
    const Mat& b = store.at(bName(prefix, i));
    x = (w * x).colwise() + Eigen::VectorXd(b.col(0));
    const bool last = (i + 2 == dims.size());
    if (!last) {
      x = x.unaryExpr([](double v) { return v > 0.0 ? v : std::exp(v) - 1.0; });
    } else if (spec.output == MlpSpec::OutputActivation::kTanh) {
      x = x.unaryExpr([](double v) { return std::tanh(v); });
    }
  }
  return x;
}

Eigen::VectorXd mlpForward(const ParamStore& store, const std::string& prefix,
                           const MlpSpec& spec, const Eigen::VectorXd& input) {
  return mlpForwardBatch(store, prefix, spec, input).col(0);
}

NodeId mlpForwardTape(Tape& tape, TapeBinding& binding, const std::string& prefix,
                      const MlpSpec& spec, NodeId input) {
  const std::vector<int> dims = layerDims(spec);
  if (tape.value(input).rows() != spec.input_dim) {
    throw std::invalid_argument("mlpForwardTape: input dimension mismatch");
  }
  const int batch = static_cast<int>(tape.value(input).cols());
  NodeId x = input;
  for (std::size_t i = 0; i + 1 < dims.size(); ++i) {
    NodeId w = binding(wName(prefix, i));
    NodeId b = binding(bName(prefix, i));
    x = tape.add(tape.matmul(w, x), tape.replicateCols(b, batch));
    const bool last = (i + 2 == dims.size());
    if (!last) {
      x = tape.elu(x);
    } else if (spec.output == MlpSpec::OutputActivation::kTanh) {
      x = tape.tanh(x);
    }
  }
  return x;
}

// ----- Adam -----

Adam::Adam(double lr, double beta1, double beta2, double eps)
    : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {
  if (lr <= 0.0) throw std::invalid_argument("Adam: learning rate must be > 0");
}

void Adam::setLearningRate(double lr) {
  if (lr <= 0.0) throw std::invalid_argument("Adam: learning rate must be > 0");
  lr_ = lr;
}

void Adam::step(ParamStore& params,
                const std::unordered_map<std::string, Mat>& grads) {
  ++t_;
  const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  for (const auto& name : params.names()) {
    auto git = grads.find(name);
    if (git == grads.end()) continue;
    const Mat& g = git->second;
    Mat& p = params.at(name);
    checkSameShape(p, g, "Adam::step");
    auto [it, inserted] = moments_.try_emplace(
        name, std::pair<Mat, Mat>(Mat::Zero(p.rows(), p.cols()),
                                  Mat::Zero(p.rows(), p.cols())));
    Mat& m = it->second.first;
    Mat& v = it->second.second;
    m = beta1_ * m + (1.0 - beta1_) * g;
    v = beta2_ * v + (1.0 - beta2_) * g.cwiseProduct(g);
    p.array() -= lr_ * (m.array() / bc1) / ((v.array() / bc2).sqrt() + eps_);
  }
}

}  // namespace multigait::ad
