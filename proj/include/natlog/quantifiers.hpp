#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include "natlog/relations.hpp"
#include "natlog/rng.hpp"
#include "natlog/sexpr.hpp"
#include "natlog/worlds.hpp"

namespace natlog {

enum class QuantifierBase : std::uint8_t { some, most, all, two, three };

// Witness bound for the world enumeration. A truth-region's demands are two
// quantifier conditions plus the closed lexical constraints; the counting
// quantifiers pin at most 3 entities, a nested chain T <= R <= A can force
// one more inside R, and "most" over a complemented scope then needs
// |A \ R| > |R|, giving |A| <= 9 plus one entity for properness. Labels at
// this bound agree with every larger bound for the default lexicon (checked
// exhaustively over all signatures); the stability check re-verifies at
// bound + 1 whenever a dataset is built, so custom lexicons that need a
// deeper bound fail loudly instead of silently mislabeling.
inline constexpr int kDefaultMaxEntities = 10;

struct Quantifier {
  QuantifierBase base = QuantifierBase::some;
  bool negated = false;  // "no", "not_all", "less_than_two", ...

  bool operator==(const Quantifier&) const = default;
};

inline const std::vector<Quantifier>& all_quantifiers() {
  static const std::vector<Quantifier> qs = {
      {QuantifierBase::some, false},  {QuantifierBase::most, false},
      {QuantifierBase::all, false},   {QuantifierBase::two, false},
      {QuantifierBase::three, false}, {QuantifierBase::some, true},
      {QuantifierBase::all, true},    {QuantifierBase::most, true},
      {QuantifierBase::two, true},    {QuantifierBase::three, true},
  };
  return qs;
}

// Negated quantifiers are atomic tokens in the datasets.
inline std::string quantifier_token(Quantifier q) {
  switch (q.base) {
    case QuantifierBase::some: return q.negated ? "no" : "some";
    case QuantifierBase::most: return q.negated ? "not_most" : "most";
    case QuantifierBase::all: return q.negated ? "not_all" : "all";
    case QuantifierBase::two: return q.negated ? "less_than_two" : "two";
    case QuantifierBase::three: return q.negated ? "less_than_three" : "three";
  }
  return {};
}

inline std::optional<Quantifier> quantifier_from_token(const std::string& t) {
  for (const Quantifier& q : all_quantifiers())
    if (quantifier_token(q) == t) return q;
  return std::nullopt;
}

enum class WordCategory : std::uint8_t { noun, verb };

struct LexiconItem {
  std::string name;
  WordCategory category = WordCategory::noun;
};

// Content words plus the stipulated pairwise relations. On construction the
// stipulations are closed under converse and join (reusing the deductive
// closure), and inconsistencies are rejected; labeling consults the closed
// relation map, so e.g. turtle < animal follows from turtle < reptile and
// reptile < animal without being written down.
class Lexicon {
 public:
  int add_item(std::string name, WordCategory category) {
    items_.push_back({std::move(name), category});
    return static_cast<int>(items_.size()) - 1;
  }

  void stipulate(const std::string& a, const std::string& b, Relation r) {
    facts_.push_back({index_of(a), index_of(b), r});
  }

  // Completes construction; must be called after the last stipulation.
  void close() {
    const ClosureState closure =
        deductive_closure(facts_, static_cast<int>(items_.size()));
    closed_.clear();
    for (const auto& [pair, rel] : closure.known())
      if (pair.first != pair.second) closed_.emplace(pair, rel);
  }

  int index_of(const std::string& name) const {
    for (std::size_t i = 0; i < items_.size(); ++i)
      if (items_[i].name == name) return static_cast<int>(i);
    throw std::invalid_argument("unknown lexicon item: " + name);
  }

  const std::vector<LexiconItem>& items() const { return items_; }
  const LexiconItem& item(int i) const { return items_[static_cast<std::size_t>(i)]; }

  std::optional<Relation> relation_between(int a, int b) const {
    const auto it = closed_.find({a, b});
    if (it == closed_.end()) return std::nullopt;
    return it->second;
  }

  std::vector<int> noun_indices() const {
    std::vector<int> out;
    for (std::size_t i = 0; i < items_.size(); ++i)
      if (items_[i].category == WordCategory::noun)
        out.push_back(static_cast<int>(i));
    return out;
  }

  std::vector<int> predicate_indices(bool allow_noun_predicates) const {
    std::vector<int> out;
    for (std::size_t i = 0; i < items_.size(); ++i)
      if (items_[i].category == WordCategory::verb || allow_noun_predicates)
        out.push_back(static_cast<int>(i));
    return out;
  }

  static Lexicon default_lexicon() {
    Lexicon lex;
    for (const char* n : {"warthog", "turtle", "lizard", "reptile", "animal"})
      lex.add_item(n, WordCategory::noun);
    for (const char* v : {"swim", "move", "growl", "bark"})
      lex.add_item(v, WordCategory::verb);
    const auto fwd = Relation::forward_entailment;
    const auto alt = Relation::alternation;
    lex.stipulate("turtle", "reptile", fwd);
    lex.stipulate("lizard", "reptile", fwd);
    lex.stipulate("reptile", "animal", fwd);
    lex.stipulate("warthog", "animal", fwd);
    lex.stipulate("warthog", "reptile", alt);
    lex.stipulate("turtle", "lizard", alt);
    lex.stipulate("swim", "move", fwd);
    lex.stipulate("growl", "swim", alt);
    lex.stipulate("bark", "swim", alt);
    lex.close();
    return lex;
  }

 private:
  std::vector<LexiconItem> items_;
  std::vector<RelationalStatement> facts_;
  std::map<std::pair<int, int>, Relation> closed_;
};

struct QuantSentence {
  Quantifier quantifier;
  int noun = 0;  // lexicon index
  bool noun_negated = false;
  int predicate = 0;  // lexicon index
  bool predicate_negated = false;

  bool operator==(const QuantSentence&) const = default;
};

// Extensions for the content words of the sentences under evaluation, over a
// domain of entity_count entities.
struct MiniWorld {
  int entity_count = 0;
  std::map<int, std::uint32_t> extensions;  // word index -> entity bitmask
};

// Restrictor/scope truth conditions; word negation complements within the
// entity domain before the quantifier applies, and a negated quantifier
// inverts the result.
inline bool quantifier_truth(Quantifier q, std::uint32_t restrictor,
                             std::uint32_t scope) {
  bool value = false;
  switch (q.base) {
    case QuantifierBase::some: value = (restrictor & scope) != 0; break;
    case QuantifierBase::all: value = (restrictor & ~scope) == 0; break;
    case QuantifierBase::most:
      value = std::popcount(restrictor & scope) >
              std::popcount(restrictor & ~scope);
      break;
    case QuantifierBase::two: value = std::popcount(restrictor & scope) >= 2; break;
    case QuantifierBase::three:
      value = std::popcount(restrictor & scope) >= 3;
      break;
  }
  return q.negated ? !value : value;
}

inline bool eval_sentence(const QuantSentence& s, const MiniWorld& w) {
  const std::uint32_t full =
      (w.entity_count >= 32) ? ~std::uint32_t{0}
                             : (std::uint32_t{1} << w.entity_count) - 1;
  const auto ext = [&](int word) {
    const auto it = w.extensions.find(word);
    if (it == w.extensions.end())
      throw std::invalid_argument("world does not assign the sentence's words");
    return it->second;
  };
  std::uint32_t a = ext(s.noun);
  if (s.noun_negated) a = full & ~a;
  std::uint32_t b = ext(s.predicate);
  if (s.predicate_negated) b = full & ~b;
  return quantifier_truth(s.quantifier, a, b);
}

namespace detail {

// The world space for a sentence pair is fixed by: both quantifiers and
// their negation flags, which of the four word slots share a word, and the
// closed lexical relation for the two aligned slot pairs (noun with noun,
// predicate with predicate). Identical words share one extension; aligned
// distinct words must satisfy their closed relation in every world; all
// extensions are non-degenerate. Everything else about the concrete words
// is irrelevant, which is what makes caching by signature sound.
struct PairSignature {
  Quantifier q1, q2;
  bool nneg1 = false, pneg1 = false, nneg2 = false, pneg2 = false;
  std::array<std::int8_t, 4> slot_class{};  // classes of (n1, p1, n2, p2)
  std::int8_t noun_rel = -1;  // relation index, -1 unconstrained, -2 shared
  std::int8_t pred_rel = -1;

  std::uint64_t key() const {
    std::uint64_t k = 0;
    auto push = [&k](std::uint64_t v, int bits) { k = (k << bits) | v; };
    push(static_cast<std::uint64_t>(q1.base), 3);
    push(q1.negated, 1);
    push(nneg1, 1);
    push(pneg1, 1);
    push(static_cast<std::uint64_t>(q2.base), 3);
    push(q2.negated, 1);
    push(nneg2, 1);
    push(pneg2, 1);
    for (const std::int8_t c : slot_class) push(static_cast<std::uint64_t>(c), 2);
    push(static_cast<std::uint64_t>(noun_rel + 2), 4);
    push(static_cast<std::uint64_t>(pred_rel + 2), 4);
    return k;
  }
};

inline PairSignature make_signature(const QuantSentence& s1,
                                    const QuantSentence& s2,
                                    const Lexicon& lex) {
  PairSignature sig;
  sig.q1 = s1.quantifier;
  sig.q2 = s2.quantifier;
  sig.nneg1 = s1.noun_negated;
  sig.pneg1 = s1.predicate_negated;
  sig.nneg2 = s2.noun_negated;
  sig.pneg2 = s2.predicate_negated;
  const std::array<int, 4> words = {s1.noun, s1.predicate, s2.noun,
                                    s2.predicate};
  std::array<int, 4> class_word{};
  std::int8_t num_classes = 0;
  for (int slot = 0; slot < 4; ++slot) {
    std::int8_t cls = -1;
    for (std::int8_t c = 0; c < num_classes; ++c)
      if (class_word[static_cast<std::size_t>(c)] == words[static_cast<std::size_t>(slot)]) {
        cls = c;
        break;
      }
    if (cls < 0) {
      cls = num_classes++;
      class_word[static_cast<std::size_t>(cls)] = words[static_cast<std::size_t>(slot)];
    }
    sig.slot_class[static_cast<std::size_t>(slot)] = cls;
  }
  auto aligned_rel = [&](int slot_a, int slot_b) -> std::int8_t {
    if (sig.slot_class[static_cast<std::size_t>(slot_a)] ==
        sig.slot_class[static_cast<std::size_t>(slot_b)])
      return -2;
    const auto rel = lex.relation_between(words[static_cast<std::size_t>(slot_a)],
                                          words[static_cast<std::size_t>(slot_b)]);
    return rel ? static_cast<std::int8_t>(*rel) : std::int8_t{-1};
  };
  sig.noun_rel = aligned_rel(0, 2);
  sig.pred_rel = aligned_rel(1, 3);
  return sig;
}

inline bool quantifier_truth_counts(Quantifier q, int intersection,
                                    int difference) {
  bool value = false;
  switch (q.base) {
    case QuantifierBase::some: value = intersection >= 1; break;
    case QuantifierBase::all: value = difference == 0; break;
    case QuantifierBase::most: value = intersection > difference; break;
    case QuantifierBase::two: value = intersection >= 2; break;
    case QuantifierBase::three: value = intersection >= 3; break;
  }
  return q.negated ? !value : value;
}

struct RegionWitnesses {
  bool both = false;
  bool only_first = false;
  bool only_second = false;
  bool neither = false;

  bool saturated() const { return both && only_first && only_second && neither; }
};

// Enumerates worlds up to entity permutation: a world over the k distinct
// words is determined by the cardinalities of the 2^k atomic Venn regions.
// Truth values and constraints depend only on those counts, so walking all
// count vectors with total <= max_entities visits every truth combination
// the concrete worlds realize. Constraint relations zero entire regions out
// structurally; every word must be non-empty and proper; early exit fires
// once all four truth regions are witnessed.
inline RegionWitnesses enumerate_regions(const PairSignature& sig,
                                         int max_entities) {
  RegionWitnesses bits;
  const int num_classes =
      1 + *std::max_element(sig.slot_class.begin(), sig.slot_class.end());
  const int num_regions = 1 << num_classes;

  const auto slot_member = [&](int region, int slot, bool negated) {
    const bool in =
        (region >> sig.slot_class[static_cast<std::size_t>(slot)]) & 1;
    return in != negated;
  };
  // A lexical relation empties the regions its necessity core forbids.
  const auto region_allowed = [&](int region) {
    const auto check = [&](std::int8_t rel, int slot_a, int slot_b) {
      if (rel < 0) return true;
      const bool a = (region >> sig.slot_class[static_cast<std::size_t>(slot_a)]) & 1;
      const bool b = (region >> sig.slot_class[static_cast<std::size_t>(slot_b)]) & 1;
      switch (static_cast<Relation>(rel)) {
        case Relation::equivalence: return a == b;
        case Relation::forward_entailment: return !(a && !b);
        case Relation::reverse_entailment: return !(b && !a);
        case Relation::negation: return a != b;
        case Relation::alternation: return !(a && b);
        case Relation::cover: return a || b;
        case Relation::independence: return true;
      }
      return true;
    };
    return check(sig.noun_rel, 0, 2) && check(sig.pred_rel, 1, 3);
  };

  struct RegionInfo {
    bool inter1, diff1, inter2, diff2;
    int word_mask;  // which word classes contain this region
  };
  std::array<RegionInfo, 16> regions{};
  int num_free = 0;
  for (int r = 0; r < num_regions; ++r) {
    if (!region_allowed(r)) continue;
    RegionInfo info{};
    const bool r1 = slot_member(r, 0, sig.nneg1);
    const bool s1 = slot_member(r, 1, sig.pneg1);
    const bool r2 = slot_member(r, 2, sig.nneg2);
    const bool s2 = slot_member(r, 3, sig.pneg2);
    info.inter1 = r1 && s1;
    info.diff1 = r1 && !s1;
    info.inter2 = r2 && s2;
    info.diff2 = r2 && !s2;
    info.word_mask = r;
    regions[static_cast<std::size_t>(num_free++)] = info;
  }

  int inter1 = 0, diff1 = 0, inter2 = 0, diff2 = 0, total = 0;
  std::array<int, 4> word_count{};
  const auto apply = [&](const RegionInfo& info, int delta) {
    inter1 += info.inter1 * delta;
    diff1 += info.diff1 * delta;
    inter2 += info.inter2 * delta;
    diff2 += info.diff2 * delta;
    total += delta;
    for (int w = 0; w < num_classes; ++w)
      word_count[static_cast<std::size_t>(w)] +=
          ((info.word_mask >> w) & 1) * delta;
  };
  auto recurse = [&](auto&& self, int idx) -> void {
    if (idx == num_free) {
      if (total < 2) return;
      for (int c = 0; c < num_classes; ++c)
        if (word_count[static_cast<std::size_t>(c)] < 1 ||
            word_count[static_cast<std::size_t>(c)] > total - 1)
          return;
      const bool t1 = quantifier_truth_counts(sig.q1, inter1, diff1);
      const bool t2 = quantifier_truth_counts(sig.q2, inter2, diff2);
      if (t1 && t2) bits.both = true;
      else if (t1) bits.only_first = true;
      else if (t2) bits.only_second = true;
      else bits.neither = true;
      return;
    }
    const RegionInfo& info = regions[static_cast<std::size_t>(idx)];
    const int budget = max_entities - total;
    int assigned = 0;
    for (int c = 0; c <= budget && !bits.saturated(); ++c) {
      if (c > 0) {
        apply(info, 1);
        assigned += 1;
      }
      self(self, idx + 1);
    }
    apply(info, -assigned);
  };
  recurse(recurse, 0);
  return bits;
}

// Region witnesses determine the relation between the two satisfaction sets
// exactly as classify_set_pair would over the explicit world list.
inline RelationOutcome classify_regions(const RegionWitnesses& bits) {
  const bool s1_empty = !bits.both && !bits.only_first;
  const bool s1_full = !bits.only_second && !bits.neither;
  const bool s2_empty = !bits.both && !bits.only_second;
  const bool s2_full = !bits.only_first && !bits.neither;
  if (s1_empty || s1_full || s2_empty || s2_full) return std::nullopt;
  if (!bits.only_first && !bits.only_second) return Relation::equivalence;
  if (!bits.only_first) return Relation::forward_entailment;
  if (!bits.only_second) return Relation::reverse_entailment;
  if (!bits.both && !bits.neither) return Relation::negation;
  if (!bits.both) return Relation::alternation;
  if (!bits.neither) return Relation::cover;
  return Relation::independence;
}

inline RelationOutcome label_signature(const PairSignature& sig,
                                       int max_entities) {
  return classify_regions(enumerate_regions(sig, max_entities));
}

}  // namespace detail

struct UnstableLabelError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Gold labeling by finite-model enumeration with signature caching: the
// model enumeration runs once per abstract pattern, not once per pair.
class QuantLabeler {
 public:
  explicit QuantLabeler(const Lexicon& lex, int max_entities = kDefaultMaxEntities)
      : lex_(&lex), max_entities_(max_entities) {
    if (max_entities < 4)
      throw std::invalid_argument("max_entities must be at least 4");
  }

  RelationOutcome label(const QuantSentence& s1, const QuantSentence& s2) {
    const detail::PairSignature sig = detail::make_signature(s1, s2, *lex_);
    const std::uint64_t key = sig.key();
    const auto it = cache_.find(key);
    if (it != cache_.end()) return decode(it->second);
    const RelationOutcome out = detail::label_signature(sig, max_entities_);
    cache_.emplace(key, encode(out));
    signatures_.push_back(sig);
    return out;
  }

  // True in every world or in none, over the sentence's own words.
  bool is_degenerate(const QuantSentence& s) {
    detail::PairSignature sig = detail::make_signature(s, s, *lex_);
    const detail::RegionWitnesses bits =
        detail::enumerate_regions(sig, max_entities_);
    return !(bits.both || bits.only_first) || !(bits.only_second || bits.neither);
  }

  int max_entities() const { return max_entities_; }
  std::size_t cached_signatures() const { return signatures_.size(); }

  // Recomputes every cached signature with one extra entity; a disagreement
  // means max_entities was too small for some quantifier pattern.
  void verify_stability(int num_threads = 1) const {
    std::vector<std::string> failures;
    std::mutex failures_mutex;
    const std::size_t n = signatures_.size();
    const int workers = std::max(1, num_threads);
    std::vector<std::thread> pool;
    std::atomic<std::size_t> next{0};
    auto work = [&] {
      for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
        const auto& sig = signatures_[i];
        const RelationOutcome at_max = decode(cache_.at(sig.key()));
        const RelationOutcome at_next =
            detail::label_signature(sig, max_entities_ + 1);
        if (at_max != at_next) {
          std::lock_guard<std::mutex> lock(failures_mutex);
          failures.push_back(std::string{to_char(at_max)} + " vs " +
                             to_char(at_next));
        }
      }
    };
    for (int t = 0; t < workers; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
    if (!failures.empty())
      throw UnstableLabelError(
          "labels differ between entity bounds " + std::to_string(max_entities_) +
          " and " + std::to_string(max_entities_ + 1) + " for " +
          std::to_string(failures.size()) + " signatures");
  }

 private:
  static std::int8_t encode(RelationOutcome o) {
    return o ? static_cast<std::int8_t>(*o) : std::int8_t{-1};
  }
  static RelationOutcome decode(std::int8_t v) {
    if (v < 0) return std::nullopt;
    return static_cast<Relation>(v);
  }

  const Lexicon* lex_;
  int max_entities_;
  std::unordered_map<std::uint64_t, std::int8_t> cache_;
  std::vector<detail::PairSignature> signatures_;
};

inline RelationOutcome label_quant_pair(const QuantSentence& s1,
                                        const QuantSentence& s2,
                                        const Lexicon& lex,
                                        int max_entities = kDefaultMaxEntities) {
  QuantLabeler labeler(lex, max_entities);
  return labeler.label(s1, s2);
}

// Full quantifier x noun x predicate cross product (each side optionally
// negated), minus sentences that are true in every world or in none.
inline std::vector<QuantSentence> enumerate_sentences(
    const Lexicon& lex, int max_entities = kDefaultMaxEntities, bool allow_noun_predicates = true) {
  QuantLabeler labeler(lex, max_entities);
  std::vector<QuantSentence> out;
  const std::vector<int> nouns = lex.noun_indices();
  const std::vector<int> preds = lex.predicate_indices(allow_noun_predicates);
  for (const Quantifier& q : all_quantifiers())
    for (const int noun : nouns)
      for (const bool nneg : {false, true})
        for (const int pred : preds)
          for (const bool pneg : {false, true}) {
            const QuantSentence s{q, noun, nneg, pred, pneg};
            if (!labeler.is_degenerate(s)) out.push_back(s);
          }
  return out;
}

inline ExpressionPtr sentence_to_expression(const QuantSentence& s,
                                            const Lexicon& lex) {
  ExpressionPtr noun = make_leaf(lex.item(s.noun).name);
  if (s.noun_negated) noun = make_branch(make_leaf("not"), noun);
  ExpressionPtr pred = make_leaf(lex.item(s.predicate).name);
  if (s.predicate_negated) pred = make_branch(make_leaf("not"), pred);
  return make_branch(
      make_branch(make_leaf(quantifier_token(s.quantifier)), noun), pred);
}

inline std::vector<std::string> quant_vocabulary(const Lexicon& lex) {
  std::vector<std::string> vocab;
  for (const Quantifier& q : all_quantifiers())
    vocab.push_back(quantifier_token(q));
  for (const auto& item : lex.items()) vocab.push_back(item.name);
  vocab.push_back("not");
  return vocab;
}

struct InsufficientPairsError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct QuantDatasetConfig {
  double train_sentence_fraction = 2.0 / 3.0;
  int target_train = 27000;
  int target_test = 7000;
  int max_entities = kDefaultMaxEntities;
  bool allow_noun_predicates = true;
  bool check_stability = true;
  std::uint64_t seed = 1;
};

struct QuantPair {
  Relation label = Relation::independence;
  QuantSentence s1, s2;
};

struct QuantDataset {
  std::vector<QuantPair> train;
  std::vector<QuantPair> test;
  std::size_t num_sentences = 0;
  std::size_t num_train_sentences = 0;
  std::size_t num_test_sentences = 0;
};

// Sentences are partitioned into disjoint train/test vocabularies of
// sentences; labeled pairs are then sampled without replacement within each
// side until the targets are met, discarding pairs with no defined label.
inline QuantDataset build_quant_dataset(const Lexicon& lex,
                                        const QuantDatasetConfig& cfg) {
  if (cfg.train_sentence_fraction <= 0.0 || cfg.train_sentence_fraction >= 1.0)
    throw std::invalid_argument("train_sentence_fraction must be in (0, 1)");
  std::vector<QuantSentence> sentences =
      enumerate_sentences(lex, cfg.max_entities, cfg.allow_noun_predicates);
  Rng rng(cfg.seed);
  rng.shuffle(sentences);
  const std::size_t n_train = static_cast<std::size_t>(
      cfg.train_sentence_fraction * static_cast<double>(sentences.size()) + 0.5);
  if (n_train == 0 || n_train >= sentences.size())
    throw InsufficientPairsError("sentence split leaves one side empty");

  QuantDataset dataset;
  dataset.num_sentences = sentences.size();
  dataset.num_train_sentences = n_train;
  dataset.num_test_sentences = sentences.size() - n_train;

  QuantLabeler labeler(lex, cfg.max_entities);
  auto sample_side = [&](std::size_t begin, std::size_t count, int target,
                         std::vector<QuantPair>& out) {
    std::vector<std::uint64_t> order(count * count);
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    rng.shuffle(order);
    for (const std::uint64_t idx : order) {
      if (out.size() >= static_cast<std::size_t>(target)) return;
      const QuantSentence& s1 = sentences[begin + idx / count];
      const QuantSentence& s2 = sentences[begin + idx % count];
      if (const RelationOutcome label = labeler.label(s1, s2))
        out.push_back({*label, s1, s2});
    }
    if (out.size() < static_cast<std::size_t>(target))
      throw InsufficientPairsError(
          "side exhausted before reaching its pair target");
  };
  sample_side(0, n_train, cfg.target_train, dataset.train);
  sample_side(n_train, sentences.size() - n_train, cfg.target_test,
              dataset.test);
  if (cfg.check_stability)
    labeler.verify_stability(static_cast<int>(std::thread::hardware_concurrency()));
  return dataset;
}

}  // namespace natlog
