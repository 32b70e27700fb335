#pragma once

#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "natlog/nn.hpp"
#include "natlog/rng.hpp"
#include "natlog/sexpr.hpp"

namespace natlog {

enum class Architecture { sum, tree_rnn, tree_rntn };
enum class ComparisonKind { nn, ntn };

inline std::string to_string(Architecture a) {
  switch (a) {
    case Architecture::sum: return "sum";
    case Architecture::tree_rnn: return "rnn";
    case Architecture::tree_rntn: return "rntn";
  }
  return {};
}

inline Architecture architecture_from_string(const std::string& s) {
  if (s == "sum") return Architecture::sum;
  if (s == "rnn") return Architecture::tree_rnn;
  if (s == "rntn") return Architecture::tree_rntn;
  throw std::invalid_argument("unknown architecture: " + s);
}

inline std::string to_string(ComparisonKind k) {
  return k == ComparisonKind::nn ? "nn" : "ntn";
}

inline ComparisonKind comparison_from_string(const std::string& s) {
  if (s == "nn") return ComparisonKind::nn;
  if (s == "ntn") return ComparisonKind::ntn;
  throw std::invalid_argument("unknown comparison kind: " + s);
}

struct ModelConfig {
  Architecture architecture = Architecture::tree_rnn;
  ComparisonKind comparison = ComparisonKind::ntn;
  int embedding_dim = 25;
  int feature_dim = 75;
  int num_labels = 7;
  double l2_lambda = 0.0;
  bool l2_on_embeddings = true;
  bool use_embedding_transform = false;
  double comparison_dropout = 0.0;  // at the comparison layer input
  double transform_dropout = 0.0;   // at the transform layer output
  std::vector<std::string> vocabulary;

  void validate() const {
    if (embedding_dim < 1 || feature_dim < 1 || num_labels < 1)
      throw std::invalid_argument("dimensions must be positive");
    if (l2_lambda < 0.0) throw std::invalid_argument("l2_lambda must be >= 0");
    if (comparison_dropout < 0.0 || comparison_dropout >= 1.0 ||
        transform_dropout < 0.0 || transform_dropout >= 1.0)
      throw std::invalid_argument("dropout rates must be in [0, 1)");
    if (vocabulary.empty()) throw std::invalid_argument("empty vocabulary");
  }

  bool has_composition() const { return architecture != Architecture::sum; }
  bool has_composition_tensor() const {
    return architecture == Architecture::tree_rntn;
  }
  bool has_comparison_tensor() const { return comparison == ComparisonKind::ntn; }
};

// Every learned parameter of the pair model. The same struct doubles as a
// gradient bundle and as the optimizer accumulators, which keeps the update
// and checkpoint code uniform. Unused blocks are left empty.
struct ModelParams {
  Mat embeddings;  // dim x vocab, one column per token
  Mat transform_w;
  Vec transform_b;
  Mat compose_w;  // dim x 2 dim
  Vec compose_b;
  std::vector<Mat> compose_t;  // dim slices of dim x dim
  Mat compare_w;  // feature x 2 dim
  Vec compare_b;
  std::vector<Mat> compare_t;  // feature slices of dim x dim
  Mat softmax_w;  // labels x feature
  Vec softmax_b;

  static ModelParams zeros(const ModelConfig& cfg) {
    const int n = cfg.embedding_dim;
    const int f = cfg.feature_dim;
    ModelParams p;
    p.embeddings = Mat::Zero(n, static_cast<Eigen::Index>(cfg.vocabulary.size()));
    if (cfg.use_embedding_transform) {
      p.transform_w = Mat::Zero(n, n);
      p.transform_b = Vec::Zero(n);
    }
    if (cfg.has_composition()) {
      p.compose_w = Mat::Zero(n, 2 * n);
      p.compose_b = Vec::Zero(n);
      if (cfg.has_composition_tensor())
        p.compose_t.assign(static_cast<std::size_t>(n), Mat::Zero(n, n));
    }
    p.compare_w = Mat::Zero(f, 2 * n);
    p.compare_b = Vec::Zero(f);
    if (cfg.has_comparison_tensor())
      p.compare_t.assign(static_cast<std::size_t>(f), Mat::Zero(n, n));
    p.softmax_w = Mat::Zero(cfg.num_labels, f);
    p.softmax_b = Vec::Zero(cfg.num_labels);
    return p;
  }

  void set_zero() {
    for (const ParamView& v : views())
      for (std::ptrdiff_t i = 0; i < v.size; ++i) v.data[i] = 0.0;
  }

  std::vector<ParamView> views() {
    std::vector<ParamView> out;
    auto push_mat = [&out](const std::string& name, Mat& m) {
      if (m.size() > 0) out.push_back({name, m.data(), m.size()});
    };
    auto push_vec = [&out](const std::string& name, Vec& v) {
      if (v.size() > 0) out.push_back({name, v.data(), v.size()});
    };
    push_mat("embeddings", embeddings);
    push_mat("transform_w", transform_w);
    push_vec("transform_b", transform_b);
    push_mat("compose_w", compose_w);
    push_vec("compose_b", compose_b);
    for (std::size_t i = 0; i < compose_t.size(); ++i)
      push_mat("compose_t[" + std::to_string(i) + "]", compose_t[i]);
    push_mat("compare_w", compare_w);
    push_vec("compare_b", compare_b);
    for (std::size_t i = 0; i < compare_t.size(); ++i)
      push_mat("compare_t[" + std::to_string(i) + "]", compare_t[i]);
    push_mat("softmax_w", softmax_w);
    push_vec("softmax_b", softmax_b);
    return out;
  }

  // Squared norm of the weight matrices and tensors (biases excluded).
  double squared_weight_norm(bool include_embeddings) const {
    double total = 0.0;
    if (include_embeddings) total += embeddings.squaredNorm();
    total += transform_w.squaredNorm();
    total += compose_w.squaredNorm();
    for (const Mat& t : compose_t) total += t.squaredNorm();
    total += compare_w.squaredNorm();
    for (const Mat& t : compare_t) total += t.squaredNorm();
    total += softmax_w.squaredNorm();
    return total;
  }

  void scale(double s) {
    for (const ParamView& v : views())
      for (std::ptrdiff_t i = 0; i < v.size; ++i) v.data[i] *= s;
  }
};

// Gradient of the (lambda/2)||weights||^2 penalty, added on top of the
// data-term gradients.
inline void add_l2_gradient(ModelParams& grads, const ModelParams& params,
                            const ModelConfig& cfg) {
  if (cfg.l2_lambda == 0.0) return;
  const double l = cfg.l2_lambda;
  if (cfg.l2_on_embeddings) grads.embeddings += l * params.embeddings;
  if (params.transform_w.size()) grads.transform_w += l * params.transform_w;
  if (params.compose_w.size()) grads.compose_w += l * params.compose_w;
  for (std::size_t i = 0; i < params.compose_t.size(); ++i)
    grads.compose_t[i] += l * params.compose_t[i];
  grads.compare_w += l * params.compare_w;
  for (std::size_t i = 0; i < params.compare_t.size(); ++i)
    grads.compare_t[i] += l * params.compare_t[i];
  grads.softmax_w += l * params.softmax_w;
}

struct UnknownTokenError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The pair model of the experiments: two tree networks sharing one
// parameter set, a comparison layer with independent parameters and a leaky
// rectifier, and a softmax over the relation labels.
struct PairModel {
  ModelConfig config;
  ModelParams params;
  std::unordered_map<std::string, int> token_index;

  static PairModel init(ModelConfig cfg, Rng& rng) {
    cfg.validate();
    PairModel model;
    model.config = std::move(cfg);
    model.params = ModelParams::zeros(model.config);
    for (std::size_t i = 0; i < model.config.vocabulary.size(); ++i)
      model.token_index.emplace(model.config.vocabulary[i], static_cast<int>(i));
    if (model.token_index.size() != model.config.vocabulary.size())
      throw std::invalid_argument("duplicate vocabulary token");
    // (-0.01, 0.01) for embeddings, (-0.05, 0.05) for layer parameters.
    auto& p = model.params;
    p.embeddings = init_uniform(p.embeddings.rows(), p.embeddings.cols(), -0.01,
                                0.01, rng);
    auto layer_mat = [&rng](Mat& m) {
      if (m.size()) m = init_uniform(m.rows(), m.cols(), -0.05, 0.05, rng);
    };
    auto layer_vec = [&rng](Vec& v) {
      if (v.size()) v = init_uniform(v.size(), -0.05, 0.05, rng);
    };
    layer_mat(p.transform_w);
    layer_vec(p.transform_b);
    layer_mat(p.compose_w);
    layer_vec(p.compose_b);
    for (Mat& t : p.compose_t) layer_mat(t);
    layer_mat(p.compare_w);
    layer_vec(p.compare_b);
    for (Mat& t : p.compare_t) layer_mat(t);
    layer_mat(p.softmax_w);
    layer_vec(p.softmax_b);
    return model;
  }

  int token_id(const std::string& token) const {
    const auto it = token_index.find(token);
    if (it == token_index.end())
      throw UnknownTokenError("token not in vocabulary: " + token);
    return it->second;
  }
};

// Expressions are compiled to index-based trees before training so the hot
// loops never touch strings. Nodes are in post order; the root is last.
struct CompiledNode {
  int left = -1;
  int right = -1;
  int token = -1;
};

struct CompiledTree {
  std::vector<CompiledNode> nodes;

  int root() const { return static_cast<int>(nodes.size()) - 1; }
};

inline int compile_into(const Expression& e, const PairModel& model,
                        CompiledTree& tree) {
  if (e.is_leaf()) {
    tree.nodes.push_back({-1, -1, model.token_id(e.token)});
  } else {
    const int l = compile_into(*e.left, model, tree);
    const int r = compile_into(*e.right, model, tree);
    tree.nodes.push_back({l, r, -1});
  }
  return static_cast<int>(tree.nodes.size()) - 1;
}

inline CompiledTree compile_expression(const Expression& e,
                                       const PairModel& model) {
  CompiledTree tree;
  compile_into(e, model, tree);
  return tree;
}

namespace detail {

struct NodeTrace {
  Vec transform_act;   // leaf with transform: tanh output before dropout
  Vec transform_mask;  // inverted-dropout mask, empty in eval mode
  Vec compose_act_nn;  // branch: tanh(M [l;r] + b)
  Vec compose_act_tn;  // branch, tensor layer: tanh(bilinear)
  Vec output;
};

struct TreeTrace {
  std::vector<NodeTrace> nodes;
  Vec root_output;
};

inline Vec dropout_mask(Eigen::Index n, double rate, Rng& rng) {
  Vec mask(n);
  const double keep_scale = 1.0 / (1.0 - rate);
  for (Eigen::Index i = 0; i < n; ++i)
    mask[i] = rng.real() < rate ? 0.0 : keep_scale;
  return mask;
}

}  // namespace detail

struct PairTrace {
  detail::TreeTrace left, right;
  Vec mask_left, mask_right;  // comparison-input dropout, empty in eval mode
  Vec cmp_in_left, cmp_in_right;
  Vec compare_pre_nn;  // pre-activation of the affine comparison term
  Vec compare_pre_tn;  // pre-activation of the bilinear term, empty for nn
  Vec features;
  Vec logits;
  Vec probabilities;
};

namespace detail {

// Bottom-up evaluation with the configured composition; the trace keeps
// everything the backward pass needs.
inline void forward_tree(const PairModel& model, const CompiledTree& tree,
                         bool train_mode, Rng* dropout_rng, TreeTrace& trace) {
  const ModelConfig& cfg = model.config;
  const ModelParams& p = model.params;
  const int n = cfg.embedding_dim;
  trace.nodes.assign(tree.nodes.size(), {});
  for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
    const CompiledNode& node = tree.nodes[i];
    NodeTrace& t = trace.nodes[i];
    if (node.token >= 0) {
      Vec out = p.embeddings.col(node.token);
      if (cfg.use_embedding_transform) {
        t.transform_act = tanh_activation(p.transform_w * out + p.transform_b);
        out = t.transform_act;
        if (train_mode && cfg.transform_dropout > 0.0) {
          t.transform_mask = dropout_mask(n, cfg.transform_dropout, *dropout_rng);
          out = out.cwiseProduct(t.transform_mask);
        }
      }
      t.output = std::move(out);
      continue;
    }
    if (cfg.architecture == Architecture::sum) continue;  // branches unused
    const Vec& xl = trace.nodes[static_cast<std::size_t>(node.left)].output;
    const Vec& xr = trace.nodes[static_cast<std::size_t>(node.right)].output;
    t.compose_act_nn = tanh_activation(p.compose_w.leftCols(n) * xl +
                                       p.compose_w.rightCols(n) * xr +
                                       p.compose_b);
    if (cfg.has_composition_tensor()) {
      Vec bilinear(n);
      for (int s = 0; s < n; ++s)
        bilinear[s] = xl.dot(p.compose_t[static_cast<std::size_t>(s)] * xr);
      t.compose_act_tn = tanh_activation(bilinear);
      t.output = t.compose_act_nn + t.compose_act_tn;
    } else {
      t.output = t.compose_act_nn;
    }
  }
  if (cfg.architecture == Architecture::sum) {
    Vec total = Vec::Zero(n);
    for (std::size_t i = 0; i < tree.nodes.size(); ++i)
      if (tree.nodes[i].token >= 0) total += trace.nodes[i].output;
    trace.root_output = std::move(total);
  } else {
    trace.root_output = trace.nodes.back().output;
  }
}

inline void backward_tree(const PairModel& model, const CompiledTree& tree,
                          const TreeTrace& trace, const Vec& root_grad,
                          ModelParams& grads) {
  const ModelConfig& cfg = model.config;
  const ModelParams& p = model.params;
  const int n = cfg.embedding_dim;

  std::vector<Vec> down(tree.nodes.size());
  auto leaf_backward = [&](std::size_t i, const Vec& grad_out) {
    const CompiledNode& node = tree.nodes[i];
    const NodeTrace& t = trace.nodes[i];
    if (!cfg.use_embedding_transform) {
      grads.embeddings.col(node.token) += grad_out;
      return;
    }
    Vec g = grad_out;
    if (t.transform_mask.size()) g = g.cwiseProduct(t.transform_mask);
    const Vec dpre = g.cwiseProduct(tanh_derivative(t.transform_act));
    grads.transform_w += dpre * p.embeddings.col(node.token).transpose();
    grads.transform_b += dpre;
    grads.embeddings.col(node.token) += p.transform_w.transpose() * dpre;
  };

  if (cfg.architecture == Architecture::sum) {
    for (std::size_t i = 0; i < tree.nodes.size(); ++i)
      if (tree.nodes[i].token >= 0) leaf_backward(i, root_grad);
    return;
  }

  down[tree.nodes.size() - 1] = root_grad;
  for (std::size_t idx = tree.nodes.size(); idx-- > 0;) {
    const CompiledNode& node = tree.nodes[idx];
    const Vec& grad_out = down[idx];
    if (grad_out.size() == 0) continue;
    if (node.token >= 0) {
      leaf_backward(idx, grad_out);
      continue;
    }
    const NodeTrace& t = trace.nodes[idx];
    const Vec& xl = trace.nodes[static_cast<std::size_t>(node.left)].output;
    const Vec& xr = trace.nodes[static_cast<std::size_t>(node.right)].output;
    const Vec du = grad_out.cwiseProduct(tanh_derivative(t.compose_act_nn));
    grads.compose_w.leftCols(n) += du * xl.transpose();
    grads.compose_w.rightCols(n) += du * xr.transpose();
    grads.compose_b += du;
    Vec dl = p.compose_w.leftCols(n).transpose() * du;
    Vec dr = p.compose_w.rightCols(n).transpose() * du;
    if (cfg.has_composition_tensor()) {
      const Vec dv = grad_out.cwiseProduct(tanh_derivative(t.compose_act_tn));
      for (int s = 0; s < n; ++s) {
        const Mat& slice = p.compose_t[static_cast<std::size_t>(s)];
        grads.compose_t[static_cast<std::size_t>(s)] +=
            dv[s] * (xl * xr.transpose());
        dl += dv[s] * (slice * xr);
        dr += dv[s] * (slice.transpose() * xl);
      }
    }
    auto& dleft = down[static_cast<std::size_t>(node.left)];
    if (dleft.size() == 0) dleft = std::move(dl); else dleft += dl;
    auto& dright = down[static_cast<std::size_t>(node.right)];
    if (dright.size() == 0) dright = std::move(dr); else dright += dr;
  }
}

}  // namespace detail

// Forward pass over a pair of compiled trees. In train mode the dropout
// layers draw their masks from dropout_rng; in eval mode the pass is a pure
// function of parameters and input.
inline PairTrace forward_pair(const PairModel& model, const CompiledTree& left,
                              const CompiledTree& right, bool train_mode = false,
                              Rng* dropout_rng = nullptr) {
  const ModelConfig& cfg = model.config;
  const ModelParams& p = model.params;
  const int n = cfg.embedding_dim;
  const int f = cfg.feature_dim;
  if (train_mode &&
      (cfg.comparison_dropout > 0.0 ||
       (cfg.use_embedding_transform && cfg.transform_dropout > 0.0)) &&
      dropout_rng == nullptr)
    throw std::invalid_argument("train-mode dropout requires an rng");

  PairTrace trace;
  detail::forward_tree(model, left, train_mode, dropout_rng, trace.left);
  detail::forward_tree(model, right, train_mode, dropout_rng, trace.right);

  trace.cmp_in_left = trace.left.root_output;
  trace.cmp_in_right = trace.right.root_output;
  if (train_mode && cfg.comparison_dropout > 0.0) {
    trace.mask_left = detail::dropout_mask(n, cfg.comparison_dropout, *dropout_rng);
    trace.mask_right = detail::dropout_mask(n, cfg.comparison_dropout, *dropout_rng);
    trace.cmp_in_left = trace.cmp_in_left.cwiseProduct(trace.mask_left);
    trace.cmp_in_right = trace.cmp_in_right.cwiseProduct(trace.mask_right);
  }

  trace.compare_pre_nn = p.compare_w.leftCols(n) * trace.cmp_in_left +
                         p.compare_w.rightCols(n) * trace.cmp_in_right +
                         p.compare_b;
  trace.features = leaky_rectifier(trace.compare_pre_nn);
  if (cfg.has_comparison_tensor()) {
    Vec bilinear(f);
    for (int s = 0; s < f; ++s)
      bilinear[s] = trace.cmp_in_left.dot(
          p.compare_t[static_cast<std::size_t>(s)] * trace.cmp_in_right);
    trace.compare_pre_tn = bilinear;
    trace.features += leaky_rectifier(bilinear);
  }
  trace.logits = p.softmax_w * trace.features + p.softmax_b;
  const SoftmaxResult sm = softmax_nll(trace.logits, 0);
  trace.probabilities = sm.probabilities;
  return trace;
}

// NLL of the gold label plus the L2 penalty.
inline double pair_loss(const PairModel& model, const PairTrace& trace,
                        int gold) {
  const SoftmaxResult sm = softmax_nll(trace.logits, gold);
  return sm.loss + 0.5 * model.config.l2_lambda *
                       model.params.squared_weight_norm(
                           model.config.l2_on_embeddings);
}

// Reverse-mode gradients for one example, accumulated into grads. The L2
// term is added only when include_l2 is set; minibatch training adds it
// once per batch instead of once per example.
inline void backward_pair(const PairModel& model, const CompiledTree& left,
                          const CompiledTree& right, const PairTrace& trace,
                          int gold, ModelParams& grads, bool include_l2 = false) {
  const ModelConfig& cfg = model.config;
  const ModelParams& p = model.params;
  const int n = cfg.embedding_dim;
  const int f = cfg.feature_dim;

  Vec dlogits = trace.probabilities;
  dlogits[gold] -= 1.0;
  grads.softmax_w += dlogits * trace.features.transpose();
  grads.softmax_b += dlogits;
  const Vec dfeat = p.softmax_w.transpose() * dlogits;

  const Vec du = dfeat.cwiseProduct(leaky_rectifier_derivative(trace.compare_pre_nn));
  grads.compare_w.leftCols(n) += du * trace.cmp_in_left.transpose();
  grads.compare_w.rightCols(n) += du * trace.cmp_in_right.transpose();
  grads.compare_b += du;
  Vec da = p.compare_w.leftCols(n).transpose() * du;
  Vec db = p.compare_w.rightCols(n).transpose() * du;
  if (cfg.has_comparison_tensor()) {
    const Vec dv = dfeat.cwiseProduct(leaky_rectifier_derivative(trace.compare_pre_tn));
    const Mat outer = trace.cmp_in_left * trace.cmp_in_right.transpose();
    for (int s = 0; s < f; ++s) {
      const Mat& slice = p.compare_t[static_cast<std::size_t>(s)];
      grads.compare_t[static_cast<std::size_t>(s)] += dv[s] * outer;
      da += dv[s] * (slice * trace.cmp_in_right);
      db += dv[s] * (slice.transpose() * trace.cmp_in_left);
    }
  }
  if (trace.mask_left.size()) da = da.cwiseProduct(trace.mask_left);
  if (trace.mask_right.size()) db = db.cwiseProduct(trace.mask_right);

  detail::backward_tree(model, left, trace.left, da, grads);
  detail::backward_tree(model, right, trace.right, db, grads);

  if (include_l2) add_l2_gradient(grads, p, cfg);
}

// Distribution over labels plus the comparison-layer feature vector, in
// eval mode.
struct Classification {
  Vec probabilities;
  Vec features;

  int argmax() const {
    int best = 0;
    for (int i = 1; i < probabilities.size(); ++i)
      if (probabilities[i] > probabilities[best]) best = i;
    return best;  // ties resolve to the lowest index
  }
};

inline Classification classify_pair(const PairModel& model,
                                    const CompiledTree& left,
                                    const CompiledTree& right) {
  PairTrace trace = forward_pair(model, left, right);
  return {std::move(trace.probabilities), std::move(trace.features)};
}

inline Classification classify_pair(const PairModel& model,
                                    const Expression& left,
                                    const Expression& right) {
  return classify_pair(model, compile_expression(left, model),
                       compile_expression(right, model));
}

}  // namespace natlog
