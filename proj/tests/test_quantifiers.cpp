#include <catch2/catch_amalgamated.hpp>

#include <set>
#include <string>
#include <vector>

#include "natlog/quantifiers.hpp"
#include "natlog/sexpr.hpp"

using namespace natlog;

namespace {

QuantSentence sentence(const Lexicon& lex, const std::string& q,
                       const std::string& noun, const std::string& pred,
                       bool nneg = false, bool pneg = false) {
  return {*quantifier_from_token(q), lex.index_of(noun), nneg,
          lex.index_of(pred), pneg};
}

}  // namespace

TEST_CASE("eval_sentence follows the quantifier truth conditions") {
  const Lexicon lex = Lexicon::default_lexicon();
  MiniWorld w;
  w.entity_count = 4;
  w.extensions[lex.index_of("turtle")] = 0b0001;
  w.extensions[lex.index_of("swim")] = 0b0001;
  CHECK(eval_sentence(sentence(lex, "some", "turtle", "swim"), w));

  MiniWorld w2;
  w2.entity_count = 4;
  w2.extensions[lex.index_of("turtle")] = 0b0001;
  w2.extensions[lex.index_of("move")] = 0b0011;
  CHECK_FALSE(eval_sentence(sentence(lex, "no", "turtle", "move"), w2));

  MiniWorld w3;
  w3.entity_count = 4;
  w3.extensions[lex.index_of("turtle")] = 0b0111;
  w3.extensions[lex.index_of("swim")] = 0b0011;
  CHECK(eval_sentence(sentence(lex, "most", "turtle", "swim"), w3));  // 2 > 1
  CHECK(eval_sentence(sentence(lex, "two", "turtle", "swim"), w3));
  CHECK_FALSE(eval_sentence(sentence(lex, "three", "turtle", "swim"), w3));
  CHECK_FALSE(eval_sentence(sentence(lex, "all", "turtle", "swim"), w3));
  // Negated noun: (most (not turtle)) swim over the one non-turtle entity.
  CHECK_FALSE(eval_sentence(sentence(lex, "most", "turtle", "swim", true), w3));
}

TEST_CASE("the default lexicon closes its stipulations under join") {
  const Lexicon lex = Lexicon::default_lexicon();
  const auto rel = [&](const std::string& a, const std::string& b) {
    return lex.relation_between(lex.index_of(a), lex.index_of(b));
  };
  CHECK(rel("turtle", "reptile") == Relation::forward_entailment);
  CHECK(rel("reptile", "turtle") == Relation::reverse_entailment);
  // Derived, not stipulated:
  CHECK(rel("turtle", "animal") == Relation::forward_entailment);
  CHECK(rel("lizard", "animal") == Relation::forward_entailment);
  CHECK(rel("warthog", "turtle") == Relation::alternation);
  CHECK(rel("warthog", "lizard") == Relation::alternation);
  // Left unconstrained: | then < joins to nothing determinate.
  CHECK_FALSE(rel("growl", "move").has_value());
  CHECK_FALSE(rel("bark", "move").has_value());
  CHECK_FALSE(rel("growl", "bark").has_value());
  // Cross-category pairs are unconstrained.
  CHECK_FALSE(rel("turtle", "swim").has_value());
}

TEST_CASE("inconsistent lexicons are rejected") {
  Lexicon lex;
  lex.add_item("a", WordCategory::noun);
  lex.add_item("b", WordCategory::noun);
  lex.add_item("c", WordCategory::noun);
  lex.stipulate("a", "b", Relation::forward_entailment);
  lex.stipulate("b", "c", Relation::forward_entailment);
  lex.stipulate("a", "c", Relation::alternation);  // contradicts < o <
  CHECK_THROWS_AS(lex.close(), InconsistentFactsError);
}

TEST_CASE("the published sentence-pair examples reproduce") {
  const Lexicon lex = Lexicon::default_lexicon();
  QuantLabeler labeler(lex);
  // (most turtle) swim | (no turtle) move
  CHECK(labeler.label(sentence(lex, "most", "turtle", "swim"),
                      sentence(lex, "no", "turtle", "move")) ==
        Relation::alternation);
  // (all lizard) reptile < (some lizard) animal
  CHECK(labeler.label(sentence(lex, "all", "lizard", "reptile"),
                      sentence(lex, "some", "lizard", "animal")) ==
        Relation::forward_entailment);
  // (most turtle) reptile | (all turtle) (not animal)
  CHECK(labeler.label(sentence(lex, "most", "turtle", "reptile"),
                      sentence(lex, "all", "turtle", "animal", false, true)) ==
        Relation::alternation);
}

TEST_CASE("labels agree with explicit world enumeration") {
  // Independent route: materialize every world as a MiniWorld, evaluate the
  // sentences with eval_sentence, and classify the satisfaction sets with
  // set logic. The aligned word pairs must satisfy their closed lexical
  // relation; every extension is non-degenerate; identical words share one
  // extension.
  const Lexicon lex = Lexicon::default_lexicon();
  const int max_entities = 4;
  QuantLabeler labeler(lex, max_entities);

  const auto explicit_label = [&](const QuantSentence& s1,
                                  const QuantSentence& s2) -> RelationOutcome {
    std::vector<int> words;
    for (const int w : {s1.noun, s1.predicate, s2.noun, s2.predicate}) {
      bool found = false;
      for (const int u : words) found |= (u == w);
      if (!found) words.push_back(w);
    }
    int n_true_true = 0, n_true_false = 0, n_false_true = 0, n_false_false = 0;
    int total = 0;
    for (int m = 1; m <= max_entities; ++m) {
      const std::uint32_t full = (std::uint32_t{1} << m) - 1;
      std::vector<std::uint32_t> ext(words.size(), 1);
      const auto consistent = [&](const MiniWorld& w) {
        const auto check = [&](int a, int b) {
          if (a == b) return true;
          const auto r = lex.relation_between(a, b);
          if (!r) return true;
          const std::uint32_t x = w.extensions.at(a);
          const std::uint32_t y = w.extensions.at(b);
          switch (*r) {
            case Relation::equivalence: return x == y;
            case Relation::forward_entailment: return (x & ~y & full) == 0;
            case Relation::reverse_entailment: return (y & ~x & full) == 0;
            case Relation::negation: return (x & y) == 0 && (x | y) == full;
            case Relation::alternation: return (x & y) == 0;
            case Relation::cover: return (x | y) == full;
            case Relation::independence: return true;
          }
          return true;
        };
        return check(s1.noun, s2.noun) && check(s1.predicate, s2.predicate);
      };
      const std::uint64_t combos = 1;
      std::vector<std::uint32_t> values;
      for (std::uint32_t v = 1; v < full; ++v) values.push_back(v);
      if (values.empty()) continue;
      std::vector<std::size_t> idx(words.size(), 0);
      while (true) {
        MiniWorld w;
        w.entity_count = m;
        for (std::size_t i = 0; i < words.size(); ++i)
          w.extensions[words[i]] = values[idx[i]];
        if (consistent(w)) {
          total += 1;
          const bool t1 = eval_sentence(s1, w);
          const bool t2 = eval_sentence(s2, w);
          (t1 ? (t2 ? n_true_true : n_true_false)
              : (t2 ? n_false_true : n_false_false)) += 1;
        }
        std::size_t carry = 0;
        while (carry < idx.size()) {
          if (++idx[carry] < values.size()) break;
          idx[carry] = 0;
          ++carry;
        }
        if (carry == idx.size()) break;
      }
      (void)combos;
    }
    const int s1_count = n_true_true + n_true_false;
    const int s2_count = n_true_true + n_false_true;
    if (s1_count == 0 || s1_count == total || s2_count == 0 || s2_count == total)
      return std::nullopt;
    if (n_true_false == 0 && n_false_true == 0) return Relation::equivalence;
    if (n_true_false == 0) return Relation::forward_entailment;
    if (n_false_true == 0) return Relation::reverse_entailment;
    if (n_true_true == 0 && n_false_false == 0) return Relation::negation;
    if (n_true_true == 0) return Relation::alternation;
    if (n_false_false == 0) return Relation::cover;
    return Relation::independence;
  };

  Rng rng(23);
  const std::vector<QuantSentence> sentences = enumerate_sentences(lex, max_entities);
  REQUIRE(sentences.size() > 100);
  for (int trial = 0; trial < 60; ++trial) {
    const QuantSentence& s1 =
        sentences[static_cast<std::size_t>(rng.below(sentences.size()))];
    const QuantSentence& s2 =
        sentences[static_cast<std::size_t>(rng.below(sentences.size()))];
    CHECK(labeler.label(s1, s2) == explicit_label(s1, s2));
  }
}

TEST_CASE("labeling properties over random sentence pairs") {
  const Lexicon lex = Lexicon::default_lexicon();
  QuantLabeler labeler(lex);
  const std::vector<QuantSentence> sentences = enumerate_sentences(lex);
  Rng rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const QuantSentence& s1 =
        sentences[static_cast<std::size_t>(rng.below(sentences.size()))];
    const QuantSentence& s2 =
        sentences[static_cast<std::size_t>(rng.below(sentences.size()))];
    const RelationOutcome fwd = labeler.label(s1, s2);
    const RelationOutcome bwd = labeler.label(s2, s1);
    REQUIRE(fwd.has_value() == bwd.has_value());
    if (fwd) CHECK(*fwd == converse(*bwd));
    // Valid sentences are non-degenerate, so the self pair is equivalence.
    CHECK(labeler.label(s1, s1) == Relation::equivalence);
    // Toggling predicate negation twice is the identity.
    QuantSentence toggled = s1;
    toggled.predicate_negated = !toggled.predicate_negated;
    toggled.predicate_negated = !toggled.predicate_negated;
    CHECK(labeler.label(toggled, s2) == fwd);
  }
}

TEST_CASE("a quantifier and its negation split the worlds in two") {
  const Lexicon lex = Lexicon::default_lexicon();
  QuantLabeler labeler(lex);
  const std::vector<QuantSentence> sentences = enumerate_sentences(lex);
  int checked = 0;
  for (const QuantSentence& s : sentences) {
    QuantSentence negated = s;
    negated.quantifier.negated = !negated.quantifier.negated;
    if (labeler.is_degenerate(negated)) continue;
    CHECK(labeler.label(s, negated) == Relation::negation);
    checked += 1;
    if (checked >= 50) break;
  }
  CHECK(checked == 50);
}

TEST_CASE("enumerate_sentences filters exactly the degenerate sentences") {
  const Lexicon lex = Lexicon::default_lexicon();
  const std::vector<QuantSentence> sentences = enumerate_sentences(lex);
  // Raw space: 10 quantifiers x (5 nouns x 2) x (9 predicates x 2).
  CHECK(sentences.size() < 1800);
  CHECK(sentences.size() > 1200);
  const auto contains = [&](const QuantSentence& s) {
    for (const auto& t : sentences)
      if (t == s) return true;
    return false;
  };
  CHECK_FALSE(contains(sentence(lex, "all", "turtle", "turtle")));
  CHECK_FALSE(contains(sentence(lex, "some", "turtle", "turtle")));
  CHECK_FALSE(contains(sentence(lex, "some", "turtle", "turtle", false, true)));
  CHECK(contains(sentence(lex, "some", "turtle", "swim")));
  CHECK(contains(sentence(lex, "two", "turtle", "turtle")));  // varies with |turtle|
  CHECK(contains(sentence(lex, "all", "lizard", "reptile")));  // unconstrained in-sentence
  // Determinism of the enumeration order.
  const std::vector<QuantSentence> again = enumerate_sentences(lex);
  CHECK(sentences == again);
}

TEST_CASE("sentence serialization matches the dataset grammar") {
  const Lexicon lex = Lexicon::default_lexicon();
  CHECK(serialize_sexpr(sentence_to_expression(
            sentence(lex, "most", "turtle", "swim"), lex)) ==
        "( ( most turtle ) swim )");
  CHECK(serialize_sexpr(sentence_to_expression(
            sentence(lex, "all", "turtle", "animal", false, true), lex)) ==
        "( ( all turtle ) ( not animal ) )");
  CHECK(serialize_sexpr(sentence_to_expression(
            sentence(lex, "less_than_two", "lizard", "growl", true, false), lex)) ==
        "( ( less_than_two ( not lizard ) ) growl )");
}

TEST_CASE("quantifier dataset construction honors its contracts") {
  const Lexicon lex = Lexicon::default_lexicon();
  QuantDatasetConfig cfg;
  cfg.target_train = 2000;
  cfg.target_test = 600;
  cfg.check_stability = false;
  cfg.seed = 9;
  const QuantDataset data = build_quant_dataset(lex, cfg);
  CHECK(data.train.size() == 2000);
  CHECK(data.test.size() == 600);
  CHECK(data.num_train_sentences + data.num_test_sentences == data.num_sentences);

  // The sentence vocabularies of the two sides are disjoint.
  const auto key = [&](const QuantSentence& s) {
    return serialize_sexpr(sentence_to_expression(s, lex));
  };
  std::set<std::string> train_sentences, test_sentences;
  for (const auto& p : data.train) {
    train_sentences.insert(key(p.s1));
    train_sentences.insert(key(p.s2));
  }
  for (const auto& p : data.test) {
    test_sentences.insert(key(p.s1));
    test_sentences.insert(key(p.s2));
  }
  for (const auto& s : test_sentences) CHECK_FALSE(train_sentences.contains(s));

  // Labels recompute identically.
  QuantLabeler labeler(lex, cfg.max_entities);
  for (std::size_t i = 0; i < 50; ++i) {
    const auto& p = data.train[i * 17 % data.train.size()];
    CHECK(labeler.label(p.s1, p.s2) == p.label);
  }

  // Byte-level determinism.
  const QuantDataset again = build_quant_dataset(lex, cfg);
  REQUIRE(again.train.size() == data.train.size());
  for (std::size_t i = 0; i < data.train.size(); ++i) {
    CHECK(data.train[i].s1 == again.train[i].s1);
    CHECK(data.train[i].s2 == again.train[i].s2);
    CHECK(data.train[i].label == again.train[i].label);
  }
}

TEST_CASE("degenerate sentence splits are rejected") {
  const Lexicon lex = Lexicon::default_lexicon();
  QuantDatasetConfig cfg;
  cfg.train_sentence_fraction = 1.0;
  CHECK_THROWS_AS(build_quant_dataset(lex, cfg), std::invalid_argument);
  cfg.train_sentence_fraction = 0.9999;  // rounds to all sentences
  CHECK_THROWS_AS(build_quant_dataset(lex, cfg), InsufficientPairsError);
}

TEST_CASE("stability check passes for the signatures of a small sample") {
  const Lexicon lex = Lexicon::default_lexicon();
  QuantLabeler labeler(lex);
  const std::vector<QuantSentence> sentences = enumerate_sentences(lex);
  Rng rng(41);
  for (int trial = 0; trial < 40; ++trial) {
    const QuantSentence& s1 =
        sentences[static_cast<std::size_t>(rng.below(sentences.size()))];
    const QuantSentence& s2 =
        sentences[static_cast<std::size_t>(rng.below(sentences.size()))];
    labeler.label(s1, s2);
  }
  CHECK(labeler.cached_signatures() > 0);
  CHECK_NOTHROW(labeler.verify_stability(2));
}
