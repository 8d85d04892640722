#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace multigait::ad {

using Mat = Eigen::MatrixXd;
using NodeId = std::int32_t;

// Reverse-mode tape over matrix-valued nodes. Values are evaluated eagerly
// on construction; gradient() builds the backward pass out of the same op
// set, so gradients are themselves differentiable (used by the discriminator
// gradient penalty, which needs d/dparams of an input gradient norm).
class Tape {
 public:
  enum class Op : std::uint8_t {
    kConstant,
    kAdd,
    kSub,
    kMul,        // elementwise
    kScale,      // value * c
    kAddScalar,  // value + c
    kMatMulNN,   // A * B
    kMatMulNT,   // A * B^T
    kMatMulTN,   // A^T * B
    kColSum,     // collapse rows -> 1 x c
    kRowSum,     // collapse cols -> r x 1
    kRepRows,    // replicate a 1 x c row down to r x c
    kRepCols,    // replicate an r x 1 column across to r x n
    kExp,
    kLog,
    kSqrt,
    kTanh,
    kReciprocal,
    kConcatRows,
    kSliceRows,
    kPadRows,
    kConcatCols,
    kSliceCols,
    kPadCols,
  };

  NodeId constant(Mat v);
  NodeId constant(double v);  // 1x1

  NodeId add(NodeId a, NodeId b);
  NodeId sub(NodeId a, NodeId b);
  NodeId mul(NodeId a, NodeId b);
  NodeId scale(NodeId a, double c);
  NodeId addScalar(NodeId a, double c);
  NodeId matmul(NodeId a, NodeId b);    // A * B
  NodeId matmulNT(NodeId a, NodeId b);  // A * B^T
  NodeId matmulTN(NodeId a, NodeId b);  // A^T * B
  NodeId colsum(NodeId a);
  NodeId rowsum(NodeId a);
  NodeId replicateRows(NodeId a, int rows);
  NodeId replicateCols(NodeId a, int cols);
  NodeId exp(NodeId a);
  NodeId log(NodeId a);
  NodeId sqrt(NodeId a);
  NodeId tanh(NodeId a);
  NodeId reciprocal(NodeId a);
  NodeId concatRows(NodeId a, NodeId b);
  NodeId sliceRows(NodeId a, int row0, int nrows);
  NodeId concatCols(NodeId a, NodeId b);
  NodeId sliceCols(NodeId a, int col0, int ncols);

  // Derived helpers (built from primitives; masks are captured as constants,
  // which is the correct almost-everywhere derivative).
  NodeId neg(NodeId a) { return scale(a, -1.0); }
  NodeId square(NodeId a) { return mul(a, a); }
  NodeId elu(NodeId a);
  NodeId min(NodeId a, NodeId b);
  NodeId clamp(NodeId a, double lo, double hi);
  NodeId sumAll(NodeId a);
  NodeId mean(NodeId a);

  const Mat& value(NodeId id) const { return nodes_[id].value; }
  double scalarValue(NodeId id) const;
  std::size_t size() const { return nodes_.size(); }

  // Builds gradient nodes of a scalar output w.r.t. `wrt`. Throws if the
  // output is not 1x1 or if `wrt` does not participate in the output.
  NodeId gradient(NodeId output, NodeId wrt);
  // Multi-target variant; targets that do not participate get a zero node.
  std::vector<NodeId> gradient(NodeId output, std::span<const NodeId> wrt);

 private:
  struct Node {
    Mat value;
    Op op = Op::kConstant;
    NodeId a = -1;
    NodeId b = -1;
    double c = 0.0;
    int i0 = 0;
    int i1 = 0;
  };

  NodeId push(Node n);
  NodeId emit(Op op, Mat value, NodeId a, NodeId b, double c = 0.0, int i0 = 0,
              int i1 = 0);
  void backwardInto(NodeId output, std::vector<NodeId>& grads);

  std::vector<Node> nodes_;
};

// Named parameter arrays; iteration order is insertion order so that
// updates and serialization are deterministic.
class ParamStore {
 public:
  Mat& add(const std::string& name, Mat value);
  Mat& at(const std::string& name);
  const Mat& at(const std::string& name) const;
  bool contains(const std::string& name) const;
  const std::vector<std::string>& names() const { return names_; }
  std::size_t totalSize() const;

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, Mat> values_;
};

// Binds parameters into a tape as leaves, remembering name -> node.
class TapeBinding {
 public:
  explicit TapeBinding(Tape& tape, const ParamStore& store)
      : tape_(&tape), store_(&store) {}

  NodeId operator()(const std::string& name);
  const std::vector<std::pair<std::string, NodeId>>& bound() const {
    return bound_;
  }

 private:
  Tape* tape_;
  const ParamStore* store_;
  std::vector<std::pair<std::string, NodeId>> bound_;
  std::unordered_map<std::string, NodeId> ids_;
};

// Gradients of a scalar loss for every bound parameter, keyed by name.
std::unordered_map<std::string, Mat> parameterGradients(Tape& tape,
                                                        NodeId loss,
                                                        const TapeBinding& binding);

struct MlpSpec {
  int input_dim = 0;
  std::vector<int> hidden;
  int output_dim = 0;
  enum class OutputActivation { kLinear, kTanh } output = OutputActivation::kLinear;
};

// Scaled-uniform fan-in init: bound = gain * sqrt(3 / fan_in), biases zero.
// Hidden layers use gain sqrt(2) (ELU); the output layer uses `output_gain`.
void mlpInit(ParamStore& store, const std::string& prefix, const MlpSpec& spec,
             std::uint64_t seed, double output_gain = 1.0);

std::int64_t mlpParamCount(const MlpSpec& spec);

// Inference-path forward (no tape).
Eigen::VectorXd mlpForward(const ParamStore& store, const std::string& prefix,
                           const MlpSpec& spec, const Eigen::VectorXd& input);
Mat mlpForwardBatch(const ParamStore& store, const std::string& prefix,
                    const MlpSpec& spec, const Mat& input);

// Training-path forward; input is (input_dim x batch).
NodeId mlpForwardTape(Tape& tape, TapeBinding& binding, const std::string& prefix,
                      const MlpSpec& spec, NodeId input);

// Bias-corrected adaptive-moment optimizer over a ParamStore.
class Adam {
 public:
  Adam(double lr, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8);

  void step(ParamStore& params,
            const std::unordered_map<std::string, Mat>& grads);
  std::int64_t iterations() const { return t_; }
  double learningRate() const { return lr_; }
  void setLearningRate(double lr);

  // Checkpoint access: first/second moments and step count.
  std::unordered_map<std::string, std::pair<Mat, Mat>>& moments() {
    return moments_;
  }
  void setIterations(std::int64_t t) { t_ = t; }

 private:
  double lr_, beta1_, beta2_, eps_;
  std::int64_t t_ = 0;
  std::unordered_map<std::string, std::pair<Mat, Mat>> moments_;
};

}  // namespace multigait::ad
