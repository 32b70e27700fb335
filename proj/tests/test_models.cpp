#include <catch2/catch_amalgamated.hpp>

#include <filesystem>

#include "natlog/checkpoint.hpp"
#include "natlog/models.hpp"
#include "natlog/sexpr.hpp"

using namespace natlog;

namespace {

ModelConfig tiny_config(Architecture arch, ComparisonKind cmp, int dim,
                        int feature_dim = 6) {
  ModelConfig cfg;
  cfg.architecture = arch;
  cfg.comparison = cmp;
  cfg.embedding_dim = dim;
  cfg.feature_dim = feature_dim;
  cfg.vocabulary = {"a", "b", "c", "d", "not"};
  return cfg;
}

// Random strictly binary expression over the tiny vocabulary.
ExpressionPtr random_tree(Rng& rng, int depth) {
  if (depth == 0 || rng.below(3) == 0) {
    const std::vector<std::string> tokens = {"a", "b", "c", "d", "not"};
    return make_leaf(tokens[static_cast<std::size_t>(rng.below(4))]);
  }
  return make_branch(random_tree(rng, depth - 1), random_tree(rng, depth - 1));
}

double model_loss(PairModel& model, const std::vector<LabeledExample>& examples) {
  double total = 0.0;
  for (const auto& ex : examples) {
    const PairTrace trace = forward_pair(model, ex.left, ex.right);
    total += pair_loss(model, trace, ex.label);
  }
  return total;
}

double full_grad_check(PairModel& model,
                       const std::vector<LabeledExample>& examples) {
  ModelParams grads = ModelParams::zeros(model.config);
  for (const auto& ex : examples) {
    const PairTrace trace = forward_pair(model, ex.left, ex.right);
    backward_pair(model, ex.left, ex.right, trace, ex.label, grads,
                  /*include_l2=*/true);
  }
  return grad_check_max_error(model.params.views(), grads.views(),
                              [&] { return model_loss(model, examples); });
}

std::vector<LabeledExample> random_examples(PairModel& model, Rng& rng, int n) {
  std::vector<LabeledExample> out;
  for (int i = 0; i < n; ++i) {
    const ExpressionPtr l = random_tree(rng, 2);
    const ExpressionPtr r = random_tree(rng, 2);
    out.push_back({static_cast<int>(rng.below(7)),
                   compile_expression(*l, model),
                   compile_expression(*r, model)});
  }
  return out;
}

}  // namespace

TEST_CASE("rnn composition follows the affine-tanh form") {
  Rng rng(1);
  PairModel model =
      PairModel::init(tiny_config(Architecture::tree_rnn, ComparisonKind::nn, 1), rng);
  // n = 1, M = [1 1], b = 0, both children 0.5 -> tanh(1.0).
  model.params.compose_w << 1.0, 1.0;
  model.params.compose_b.setZero();
  model.params.embeddings.setConstant(0.5);
  const CompiledTree t = compile_expression(*parse_sexpr("( a b )"), model);
  const PairTrace trace = forward_pair(model, t, t);
  CHECK_THAT(trace.left.root_output[0],
             Catch::Matchers::WithinAbs(0.761594, 1e-6));

  // Zero weights compose to the zero vector.
  model.params.compose_w.setZero();
  const PairTrace zero = forward_pair(model, t, t);
  CHECK(zero.left.root_output[0] == 0.0);
}

TEST_CASE("rnn outputs stay inside the tanh range") {
  Rng rng(2);
  PairModel model =
      PairModel::init(tiny_config(Architecture::tree_rnn, ComparisonKind::nn, 4), rng);
  for (int i = 0; i < 20; ++i) {
    const CompiledTree t =
        compile_expression(*random_tree(rng, 3), model);
    const PairTrace trace = forward_pair(model, t, t);
    for (int d = 0; d < 4; ++d) {
      CHECK(trace.left.root_output[d] > -1.0);
      CHECK(trace.left.root_output[d] < 1.0);
    }
  }
}

TEST_CASE("rntn adds a bilinear tanh term") {
  Rng rng(3);
  PairModel model = PairModel::init(
      tiny_config(Architecture::tree_rntn, ComparisonKind::nn, 1), rng);
  // n = 1, M = 0, b = 0, T = [1], children 1.0 -> tanh(0) + tanh(1).
  model.params.compose_w.setZero();
  model.params.compose_b.setZero();
  model.params.compose_t[0] << 1.0;
  model.params.embeddings.setConstant(1.0);
  const CompiledTree t = compile_expression(*parse_sexpr("( a b )"), model);
  const PairTrace trace = forward_pair(model, t, t);
  CHECK_THAT(trace.left.root_output[0],
             Catch::Matchers::WithinAbs(0.761594, 1e-6));
}

TEST_CASE("rntn with a zero tensor equals the rnn on every input") {
  Rng rng(4);
  const ModelConfig rnn_cfg = tiny_config(Architecture::tree_rnn, ComparisonKind::nn, 5);
  PairModel rnn = PairModel::init(rnn_cfg, rng);
  ModelConfig rntn_cfg = rnn_cfg;
  rntn_cfg.architecture = Architecture::tree_rntn;
  Rng rng2(4);
  PairModel rntn = PairModel::init(rntn_cfg, rng2);
  rntn.params.embeddings = rnn.params.embeddings;
  rntn.params.compose_w = rnn.params.compose_w;
  rntn.params.compose_b = rnn.params.compose_b;
  rntn.params.compare_w = rnn.params.compare_w;
  rntn.params.compare_b = rnn.params.compare_b;
  rntn.params.softmax_w = rnn.params.softmax_w;
  rntn.params.softmax_b = rnn.params.softmax_b;
  for (Mat& t : rntn.params.compose_t) t.setZero();
  Rng tree_rng(11);
  for (int i = 0; i < 10; ++i) {
    const ExpressionPtr l = random_tree(tree_rng, 3);
    const ExpressionPtr r = random_tree(tree_rng, 3);
    const Classification a = classify_pair(rnn, *l, *r);
    const Classification b = classify_pair(rntn, *l, *r);
    CHECK((a.probabilities - b.probabilities).cwiseAbs().maxCoeff() < 1e-15);
  }
}

TEST_CASE("sum composition ignores order and structure") {
  Rng rng(5);
  PairModel model =
      PairModel::init(tiny_config(Architecture::sum, ComparisonKind::nn, 4), rng);
  const ExpressionPtr e1 = parse_sexpr("( ( a b ) c )");
  const ExpressionPtr e2 = parse_sexpr("( c ( b a ) )");
  const CompiledTree t1 = compile_expression(*e1, model);
  const CompiledTree t2 = compile_expression(*e2, model);
  const PairTrace tr1 = forward_pair(model, t1, t1);
  const PairTrace tr2 = forward_pair(model, t2, t2);
  CHECK((tr1.left.root_output - tr2.left.root_output).cwiseAbs().maxCoeff() <
        1e-15);
  // Single leaf embeds to its embedding column.
  const CompiledTree leaf = compile_expression(*parse_sexpr("b"), model);
  const PairTrace tr3 = forward_pair(model, leaf, leaf);
  CHECK((tr3.left.root_output - model.params.embeddings.col(model.token_id("b")))
            .cwiseAbs()
            .maxCoeff() < 1e-15);
  // Opposite embeddings cancel.
  model.params.embeddings.col(model.token_id("a")) =
      -model.params.embeddings.col(model.token_id("b"));
  const CompiledTree ab = compile_expression(*parse_sexpr("( a b )"), model);
  const PairTrace tr4 = forward_pair(model, ab, ab);
  CHECK(tr4.left.root_output.cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("tree models are order-sensitive unlike the sum") {
  Rng rng(6);
  PairModel model = PairModel::init(
      tiny_config(Architecture::tree_rnn, ComparisonKind::nn, 4), rng);
  const Classification ab =
      classify_pair(model, *parse_sexpr("( a b )"), *parse_sexpr("c"));
  const Classification ba =
      classify_pair(model, *parse_sexpr("( b a )"), *parse_sexpr("c"));
  CHECK((ab.probabilities - ba.probabilities).cwiseAbs().maxCoeff() > 1e-12);
}

TEST_CASE("swapping the pair changes the prediction in general") {
  Rng rng(7);
  PairModel model = PairModel::init(
      tiny_config(Architecture::tree_rnn, ComparisonKind::nn, 4), rng);
  // Exhibit a parameterization and input where the argmax differs.
  bool found = false;
  Rng tree_rng(8);
  const ExpressionPtr l = parse_sexpr("( a b )");
  const ExpressionPtr r = parse_sexpr("( c d )");
  for (int trial = 0; trial < 50 && !found; ++trial) {
    model.params.embeddings = init_uniform(4, 5, -1.0, 1.0, tree_rng);
    model.params.compare_w = init_uniform(6, 8, -1.0, 1.0, tree_rng);
    model.params.softmax_w = init_uniform(7, 6, -1.0, 1.0, tree_rng);
    const Classification fwd = classify_pair(model, *l, *r);
    const Classification bwd = classify_pair(model, *r, *l);
    found = fwd.argmax() != bwd.argmax();
  }
  CHECK(found);
}

TEST_CASE("unknown tokens are rejected") {
  Rng rng(9);
  PairModel model =
      PairModel::init(tiny_config(Architecture::sum, ComparisonKind::nn, 3), rng);
  CHECK_THROWS_AS(compile_expression(*parse_sexpr("zebra"), model),
                  UnknownTokenError);
}

TEST_CASE("eval-mode forward is deterministic even with dropout configured") {
  Rng rng(10);
  ModelConfig cfg = tiny_config(Architecture::tree_rnn, ComparisonKind::ntn, 3);
  cfg.use_embedding_transform = true;
  cfg.comparison_dropout = 0.1;
  cfg.transform_dropout = 0.25;
  PairModel model = PairModel::init(cfg, rng);
  const CompiledTree t = compile_expression(*parse_sexpr("( a ( b c ) )"), model);
  const PairTrace x = forward_pair(model, t, t);
  const PairTrace y = forward_pair(model, t, t);
  CHECK((x.probabilities - y.probabilities).cwiseAbs().maxCoeff() == 0.0);
  // Train mode with dropout requires an rng and perturbs activations.
  CHECK_THROWS_AS(forward_pair(model, t, t, true, nullptr),
                  std::invalid_argument);
  Rng dropout_rng(3);
  const PairTrace z = forward_pair(model, t, t, true, &dropout_rng);
  CHECK((x.probabilities - z.probabilities).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("untrained models still emit a valid distribution") {
  Rng rng(11);
  PairModel model = PairModel::init(
      tiny_config(Architecture::tree_rntn, ComparisonKind::ntn, 3), rng);
  const Classification c =
      classify_pair(model, *parse_sexpr("( a b )"), *parse_sexpr("c"));
  CHECK_THAT(c.probabilities.sum(), Catch::Matchers::WithinAbs(1.0, 1e-12));
  CHECK(c.features.size() == 6);
}

TEST_CASE("composition parameters are shared between the two trees") {
  Rng rng(12);
  PairModel model = PairModel::init(
      tiny_config(Architecture::tree_rnn, ComparisonKind::nn, 3), rng);
  const CompiledTree left = compile_expression(*parse_sexpr("( a b )"), model);
  const CompiledTree right = compile_expression(*parse_sexpr("( c d )"), model);
  const PairTrace before = forward_pair(model, left, right);
  model.params.compose_w(0, 0) += 0.05;
  const PairTrace after = forward_pair(model, left, right);
  // Perturbing one composition weight moves both sentence embeddings.
  CHECK((before.left.root_output - after.left.root_output).cwiseAbs().maxCoeff() >
        0.0);
  CHECK((before.right.root_output - after.right.root_output)
            .cwiseAbs()
            .maxCoeff() > 0.0);
}

TEST_CASE("gradients match finite differences for every architecture") {
  int case_index = 0;
  for (const int dim : {2, 5}) {
    for (const Architecture arch :
         {Architecture::sum, Architecture::tree_rnn, Architecture::tree_rntn}) {
      for (const ComparisonKind cmp : {ComparisonKind::nn, ComparisonKind::ntn}) {
        ModelConfig cfg = tiny_config(arch, cmp, dim);
        cfg.l2_lambda = 0.01;
        Rng rng(100 + static_cast<std::uint64_t>(case_index++));
        PairModel model = PairModel::init(cfg, rng);
        auto examples = random_examples(model, rng, 2);
        CAPTURE(dim, static_cast<int>(arch), static_cast<int>(cmp));
        CHECK(full_grad_check(model, examples) < 1e-4);
      }
    }
  }
}

TEST_CASE("gradients match finite differences with the embedding transform") {
  ModelConfig cfg = tiny_config(Architecture::tree_rntn, ComparisonKind::ntn, 3);
  cfg.use_embedding_transform = true;
  cfg.l2_lambda = 0.001;
  Rng rng(55);
  PairModel model = PairModel::init(cfg, rng);
  auto examples = random_examples(model, rng, 2);
  CHECK(full_grad_check(model, examples) < 1e-4);

  ModelConfig sum_cfg = tiny_config(Architecture::sum, ComparisonKind::nn, 4);
  sum_cfg.use_embedding_transform = true;
  Rng rng2(56);
  PairModel sum_model = PairModel::init(sum_cfg, rng2);
  auto sum_examples = random_examples(sum_model, rng2, 2);
  CHECK(full_grad_check(sum_model, sum_examples) < 1e-4);
}

TEST_CASE("saturated softmax with zero regularization has near-zero gradients") {
  Rng rng(60);
  ModelConfig cfg = tiny_config(Architecture::sum, ComparisonKind::nn, 2);
  PairModel model = PairModel::init(cfg, rng);
  const CompiledTree t = compile_expression(*parse_sexpr("a"), model);
  // Drive the gold logit far above the rest.
  model.params.softmax_b.setConstant(-50.0);
  model.params.softmax_b[2] = 50.0;
  const PairTrace trace = forward_pair(model, t, t);
  ModelParams grads = ModelParams::zeros(cfg);
  backward_pair(model, t, t, trace, 2, grads, true);
  double max_abs = 0.0;
  for (const ParamView& v : grads.views())
    for (std::ptrdiff_t i = 0; i < v.size; ++i)
      max_abs = std::max(max_abs, std::abs(v.data[i]));
  CHECK(max_abs < 1e-12);
}

TEST_CASE("doubling lambda doubles the regularization gradient") {
  Rng rng(61);
  ModelConfig cfg = tiny_config(Architecture::tree_rnn, ComparisonKind::nn, 3);
  cfg.l2_lambda = 0.01;
  PairModel model = PairModel::init(cfg, rng);
  ModelParams reg1 = ModelParams::zeros(cfg);
  add_l2_gradient(reg1, model.params, cfg);
  cfg.l2_lambda = 0.02;
  ModelParams reg2 = ModelParams::zeros(cfg);
  add_l2_gradient(reg2, model.params, cfg);
  CHECK((reg2.compose_w - 2.0 * reg1.compose_w).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(reg1.compose_b.cwiseAbs().maxCoeff() == 0.0);  // biases unregularized
}

TEST_CASE("checkpoints round-trip bitwise") {
  Rng rng(62);
  ModelConfig cfg = tiny_config(Architecture::tree_rntn, ComparisonKind::ntn, 3);
  cfg.use_embedding_transform = true;
  cfg.l2_lambda = 0.0003;
  PairModel model = PairModel::init(cfg, rng);
  AdaDeltaOptimizer opt(cfg);
  // Give the optimizer some non-trivial state.
  ModelParams grads = ModelParams::zeros(cfg);
  const CompiledTree t = compile_expression(*parse_sexpr("( a b )"), model);
  const PairTrace trace = forward_pair(model, t, t);
  backward_pair(model, t, t, trace, 1, grads);
  opt.step(model.params, grads);

  const auto path = std::filesystem::temp_directory_path() / "natlog_ckpt_test.json";
  save_checkpoint(path, model, &opt, 62);
  LoadedCheckpoint loaded = load_checkpoint(path);
  CHECK(loaded.seed == 62);
  CHECK(loaded.model.config.vocabulary == cfg.vocabulary);
  auto orig = model.params.views();
  auto back = loaded.model.params.views();
  REQUIRE(orig.size() == back.size());
  for (std::size_t v = 0; v < orig.size(); ++v)
    for (std::ptrdiff_t i = 0; i < orig[v].size; ++i)
      CHECK(orig[v].data[i] == back[v].data[i]);
  REQUIRE(loaded.optimizer.has_value());
  auto o1 = opt.grad_sq().views();
  auto o2 = loaded.optimizer->grad_sq().views();
  for (std::size_t v = 0; v < o1.size(); ++v)
    for (std::ptrdiff_t i = 0; i < o1[v].size; ++i)
      CHECK(o1[v].data[i] == o2[v].data[i]);
  std::filesystem::remove(path);
}
