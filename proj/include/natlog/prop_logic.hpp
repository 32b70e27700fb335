#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "natlog/relations.hpp"
#include "natlog/rng.hpp"
#include "natlog/sexpr.hpp"

namespace natlog {

inline constexpr int kNumPropVariables = 6;
inline constexpr int kNumValuations = 64;  // 2^6

// Formulas over p1..p6 with not/and/or.
struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
  enum class Kind { variable, negation, conjunction, disjunction };
  Kind kind = Kind::variable;
  int var = 0;  // 1..6 for variables
  FormulaPtr left;
  FormulaPtr right;  // unused for negation
};

inline FormulaPtr make_variable(int index) {
  if (index < 1 || index > kNumPropVariables)
    throw std::invalid_argument("variable index out of range");
  return std::make_shared<Formula>(
      Formula{Formula::Kind::variable, index, nullptr, nullptr});
}

inline FormulaPtr make_negation(FormulaPtr f) {
  return std::make_shared<Formula>(
      Formula{Formula::Kind::negation, 0, std::move(f), nullptr});
}

inline FormulaPtr make_conjunction(FormulaPtr l, FormulaPtr r) {
  return std::make_shared<Formula>(
      Formula{Formula::Kind::conjunction, 0, std::move(l), std::move(r)});
}

inline FormulaPtr make_disjunction(FormulaPtr l, FormulaPtr r) {
  return std::make_shared<Formula>(
      Formula{Formula::Kind::disjunction, 0, std::move(l), std::move(r)});
}

// A valuation is a 6-bit integer; bit i-1 is the truth value of p_i.
inline bool eval_formula(const Formula& f, int valuation) {
  switch (f.kind) {
    case Formula::Kind::variable:
      return (valuation >> (f.var - 1)) & 1;
    case Formula::Kind::negation:
      return !eval_formula(*f.left, valuation);
    case Formula::Kind::conjunction:
      return eval_formula(*f.left, valuation) && eval_formula(*f.right, valuation);
    case Formula::Kind::disjunction:
      return eval_formula(*f.left, valuation) || eval_formula(*f.right, valuation);
  }
  return false;
}

// Bit mask over the 64 valuations in which variable i is true.
inline constexpr std::uint64_t variable_sat_mask(int index) {
  std::uint64_t mask = 0;
  for (int v = 0; v < kNumValuations; ++v)
    if ((v >> (index - 1)) & 1) mask |= std::uint64_t{1} << v;
  return mask;
}

// Satisfying valuations as a 64-bit mask, composed structurally; the domain
// is always the full 64-valuation space, so complement is plain bitwise not.
inline std::uint64_t sat_set(const Formula& f) {
  switch (f.kind) {
    case Formula::Kind::variable:
      return variable_sat_mask(f.var);
    case Formula::Kind::negation:
      return ~sat_set(*f.left);
    case Formula::Kind::conjunction:
      return sat_set(*f.left) & sat_set(*f.right);
    case Formula::Kind::disjunction:
      return sat_set(*f.left) | sat_set(*f.right);
  }
  return 0;
}

inline int operator_count(const Formula& f) {
  switch (f.kind) {
    case Formula::Kind::variable:
      return 0;
    case Formula::Kind::negation:
      return 1 + operator_count(*f.left);
    default:
      return 1 + operator_count(*f.left) + operator_count(*f.right);
  }
}

// Bitmask over p1..p6 of the variables occurring in f.
inline std::uint32_t variables_used(const Formula& f) {
  switch (f.kind) {
    case Formula::Kind::variable:
      return 1u << (f.var - 1);
    case Formula::Kind::negation:
      return variables_used(*f.left);
    default:
      return variables_used(*f.left) | variables_used(*f.right);
  }
}

// Tautologies and contradictions have no defined relation; every other pair
// is classified over the full 64-valuation domain, whatever variables the
// formulas actually mention.
inline RelationOutcome label_pair(const Formula& f1, const Formula& f2) {
  const std::uint64_t s1 = sat_set(f1);
  const std::uint64_t s2 = sat_set(f2);
  if (s1 == 0 || ~s1 == 0 || s2 == 0 || ~s2 == 0) return std::nullopt;
  return classify_set_pair(s1, s2, kNumValuations);
}

// Binarization used for model input: `not x` pairs the operator token with
// its argument, `(x and y)` attaches the operator under the left child.
inline ExpressionPtr to_expression(const Formula& f) {
  switch (f.kind) {
    case Formula::Kind::variable:
      return make_leaf("p" + std::to_string(f.var));
    case Formula::Kind::negation:
      return make_branch(make_leaf("not"), to_expression(*f.left));
    case Formula::Kind::conjunction:
      return make_branch(make_branch(to_expression(*f.left), make_leaf("and")),
                         to_expression(*f.right));
    case Formula::Kind::disjunction:
      return make_branch(make_branch(to_expression(*f.left), make_leaf("or")),
                         to_expression(*f.right));
  }
  return nullptr;
}

inline const std::vector<std::string>& prop_vocabulary() {
  static const std::vector<std::string> vocab = {"p1", "p2", "p3",  "p4", "p5",
                                                 "p6", "not", "and", "or"};
  return vocab;
}

// Top-down expansion against an operator budget: node kinds are drawn
// uniformly among {var, not, and, or} while budget remains, and binary
// operators split the rest of the budget uniformly between their children.
inline FormulaPtr sample_formula(Rng& rng, int budget) {
  if (budget <= 0) return make_variable(static_cast<int>(rng.below(6)) + 1);
  switch (rng.below(4)) {
    case 0:
      return make_variable(static_cast<int>(rng.below(6)) + 1);
    case 1:
      return make_negation(sample_formula(rng, budget - 1));
    case 2: {
      const int left = static_cast<int>(rng.below(static_cast<std::uint64_t>(budget)));
      return make_conjunction(sample_formula(rng, left),
                              sample_formula(rng, budget - 1 - left));
    }
    default: {
      const int left = static_cast<int>(rng.below(static_cast<std::uint64_t>(budget)));
      return make_disjunction(sample_formula(rng, left),
                              sample_formula(rng, budget - 1 - left));
    }
  }
}

struct GenerationExhaustedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PropDatasetConfig {
  int max_ops = 12;
  int train_cutoff = 4;
  double test_fraction = 0.20;
  int max_vars_per_pair = 4;
  int target_train = 60000;
  int target_test = 21000;
  std::uint64_t seed = 1;
};

struct PropPair {
  Relation label = Relation::independence;
  FormulaPtr f1;
  FormulaPtr f2;
  int bin = 0;  // operator count of the larger formula
};

struct PropDataset {
  std::vector<PropPair> train;
  std::map<int, std::vector<PropPair>> test_by_bin;

  std::size_t test_size() const {
    std::size_t n = 0;
    for (const auto& [bin, items] : test_by_bin) n += items.size();
    return n;
  }
};

// Generates unique unordered formula pairs, labels them by valuation
// enumeration, bins by the operator count of the larger formula, holds out
// test_fraction of every bin, and keeps only bins <= train_cutoff for
// training. The only label-balancing mechanism is the cap on distinct
// variables per pair.
inline PropDataset build_prop_dataset(const PropDatasetConfig& cfg) {
  if (cfg.max_ops < 1 || cfg.train_cutoff < 1 || cfg.train_cutoff > cfg.max_ops)
    throw std::invalid_argument("invalid operator limits");
  if (cfg.test_fraction <= 0.0 || cfg.test_fraction >= 1.0)
    throw std::invalid_argument("test_fraction must be in (0, 1)");

  // Totals needed so that the per-bin holdout leaves target_train training
  // pairs in the low bins and target_test test pairs overall.
  const std::size_t low_cap = static_cast<std::size_t>(
      cfg.target_train / (1.0 - cfg.test_fraction) + 0.5);
  const double high_target =
      (cfg.target_test - cfg.test_fraction * static_cast<double>(low_cap)) /
      cfg.test_fraction;
  const std::size_t high_cap =
      high_target > 0 ? static_cast<std::size_t>(high_target + 0.5) : 0;

  Rng rng(cfg.seed);
  std::map<int, std::vector<PropPair>> by_bin;
  std::unordered_set<std::string> seen;
  std::size_t low_total = 0;
  std::size_t high_total = 0;
  long long stale = 0;
  const long long stale_limit = 50'000'000;

  while (low_total < low_cap || high_total < high_cap) {
    if (++stale > stale_limit)
      throw GenerationExhaustedError(
          "unique-pair sampling stalled before reaching the dataset targets");
    const int budget1 = static_cast<int>(rng.below(cfg.max_ops + 1));
    const int budget2 = static_cast<int>(rng.below(cfg.max_ops + 1));
    const FormulaPtr f1 = sample_formula(rng, budget1);
    const FormulaPtr f2 = sample_formula(rng, budget2);
    const int bin = std::max(operator_count(*f1), operator_count(*f2));
    if (bin == 0) continue;  // bare-variable pairs carry no signal
    const bool low = bin <= cfg.train_cutoff;
    if (low ? low_total >= low_cap : high_total >= high_cap) continue;
    if (std::popcount(variables_used(*f1) | variables_used(*f2)) >
        cfg.max_vars_per_pair)
      continue;
    const RelationOutcome label = label_pair(*f1, *f2);
    if (!label) continue;
    std::string k1 = serialize_sexpr(to_expression(*f1));
    std::string k2 = serialize_sexpr(to_expression(*f2));
    if (k2 < k1) std::swap(k1, k2);
    if (!seen.insert(k1 + "\t" + k2).second) continue;
    by_bin[bin].push_back({*label, f1, f2, bin});
    (low ? low_total : high_total) += 1;
    stale = 0;
  }

  PropDataset dataset;
  for (auto& [bin, items] : by_bin) {
    rng.shuffle(items);
    const std::size_t test_count = static_cast<std::size_t>(
        cfg.test_fraction * static_cast<double>(items.size()));
    dataset.test_by_bin[bin].assign(items.begin(),
                                    items.begin() + static_cast<std::ptrdiff_t>(test_count));
    if (bin <= cfg.train_cutoff)
      dataset.train.insert(dataset.train.end(),
                           items.begin() + static_cast<std::ptrdiff_t>(test_count),
                           items.end());
  }
  return dataset;
}

}  // namespace natlog
