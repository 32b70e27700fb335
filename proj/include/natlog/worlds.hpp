#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "natlog/relations.hpp"
#include "natlog/rng.hpp"

namespace natlog {

// A boolean structure: terms naming non-degenerate subsets of a small
// domain. Extensions are drawn with replacement, so several terms may name
// one set and many sets stay unnamed.
struct WorldModel {
  int domain_size = 0;
  std::vector<std::uint64_t> extensions;  // extensions[i] belongs to term p(i+1)

  int num_terms() const { return static_cast<int>(extensions.size()); }
};

struct RelationalStatement {
  int left = 0;   // term index
  int right = 0;  // term index
  Relation relation = Relation::independence;

  bool operator==(const RelationalStatement&) const = default;
};

inline WorldModel generate_world(int num_terms, int domain_size,
                                 std::uint64_t seed) {
  if (domain_size < 2 || domain_size > 63)
    throw std::invalid_argument("domain_size must be in [2, 63]");
  if (num_terms < 1) throw std::invalid_argument("num_terms must be positive");
  WorldModel world;
  world.domain_size = domain_size;
  world.extensions.reserve(static_cast<std::size_t>(num_terms));
  Rng rng(seed);
  const std::uint64_t nondegenerate = full_set(domain_size) - 1;  // 1..full-1
  for (int i = 0; i < num_terms; ++i)
    world.extensions.push_back(rng.below(nondegenerate) + 1);
  return world;
}

// One statement per ordered pair of terms, self-pairs included (they are
// trivially equivalences). An n-term world yields n^2 statements.
inline std::vector<RelationalStatement> all_statements(const WorldModel& world) {
  std::vector<RelationalStatement> statements;
  const int n = world.num_terms();
  statements.reserve(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      statements.push_back(
          {i, j,
           classify_set_pair(world.extensions[i], world.extensions[j],
                             world.domain_size)});
    }
  }
  return statements;
}

struct InconsistentFactsError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Fixpoint of reflexivity, converses, and joins over a fact set. Both
// orientations of every fact are stored, so combining each popped fact with
// the outgoing edges of its right endpoint covers all derivations.
class ClosureState {
 public:
  explicit ClosureState(int num_terms)
      : num_terms_(num_terms),
        out_(static_cast<std::size_t>(num_terms)) {}

  const std::map<std::pair<int, int>, Relation>& known() const { return known_; }

  std::optional<Relation> lookup(int left, int right) const {
    const auto it = known_.find({left, right});
    if (it == known_.end()) return std::nullopt;
    return it->second;
  }

  void close_over(const std::vector<RelationalStatement>& facts) {
    for (int t = 0; t < num_terms_; ++t) add(t, t, Relation::equivalence);
    for (const auto& f : facts) add(f.left, f.right, f.relation);
    while (!worklist_.empty()) {
      const auto [a, b, r] = worklist_.back();
      worklist_.pop_back();
      // Copy: add() below may grow out_[b].
      const std::vector<std::pair<int, Relation>> edges = out_[b];
      for (const auto& [c, r2] : edges) {
        if (const RelationOutcome rc = join(r, r2)) add(a, c, *rc);
      }
    }
  }

 private:
  void add(int a, int b, Relation r) {
    const auto [it, inserted] = known_.emplace(std::make_pair(a, b), r);
    if (!inserted) {
      if (it->second != r)
        throw InconsistentFactsError(
            "derived two distinct relations for one term pair");
      return;
    }
    out_[static_cast<std::size_t>(a)].emplace_back(b, r);
    worklist_.push_back({a, b, r});
    add(b, a, converse(r));
  }

  int num_terms_;
  std::map<std::pair<int, int>, Relation> known_;
  std::vector<std::vector<std::pair<int, Relation>>> out_;
  std::vector<std::tuple<int, int, Relation>> worklist_;
};

inline ClosureState deductive_closure(const std::vector<RelationalStatement>& facts,
                                      int num_terms) {
  ClosureState state(num_terms);
  state.close_over(facts);
  return state;
}

struct SplitResult {
  std::vector<RelationalStatement> train;
  std::vector<RelationalStatement> test;
  std::vector<RelationalStatement> dropped;
};

// Shuffles the statements, splits them evenly, and moves test items that are
// not derivable from the training half into the dropped bucket.
inline SplitResult split_and_prune(std::vector<RelationalStatement> statements,
                                   int num_terms, std::uint64_t seed) {
  Rng rng(seed);
  rng.shuffle(statements);
  SplitResult result;
  const std::size_t train_size = statements.size() / 2;
  result.train.assign(statements.begin(),
                      statements.begin() + static_cast<std::ptrdiff_t>(train_size));
  std::vector<RelationalStatement> test_candidates(
      statements.begin() + static_cast<std::ptrdiff_t>(train_size),
      statements.end());
  const ClosureState closure = deductive_closure(result.train, num_terms);
  for (const auto& s : test_candidates) {
    const auto derived = closure.lookup(s.left, s.right);
    if (!derived) {
      result.dropped.push_back(s);
      continue;
    }
    if (*derived != s.relation)
      throw InconsistentFactsError(
          "closure of the training half contradicts a test label");
    result.test.push_back(s);
  }
  return result;
}

inline std::string term_name(int index) { return "p" + std::to_string(index + 1); }

}  // namespace natlog
