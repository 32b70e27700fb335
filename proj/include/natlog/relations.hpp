#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace natlog {

// The seven semantic relations over pairs of non-degenerate sets. They are
// mutually exclusive and jointly exhaustive, which classify_set_pair's case
// order makes explicit.
enum class Relation : std::uint8_t {
  equivalence = 0,     // x = y
  forward_entailment,  // x strictly contained in y
  reverse_entailment,  // x strictly contains y
  negation,            // disjoint and jointly exhaustive
  alternation,         // disjoint, not exhaustive
  cover,               // overlapping and exhaustive
  independence,        // everything else
};

inline constexpr int kNumRelations = 7;

inline constexpr std::array<Relation, kNumRelations> kAllRelations = {
    Relation::equivalence,        Relation::forward_entailment,
    Relation::reverse_entailment, Relation::negation,
    Relation::alternation,        Relation::cover,
    Relation::independence,
};

// Fixed ASCII encoding shared by every file format.
inline constexpr char to_char(Relation r) {
  constexpr std::array<char, kNumRelations> codes = {'=', '<', '>', '^',
                                                     '|', 'v', '#'};
  return codes[static_cast<std::size_t>(r)];
}

inline std::optional<Relation> relation_from_char(char c) {
  for (Relation r : kAllRelations) {
    if (to_char(r) == c) return r;
  }
  return std::nullopt;
}

inline Relation relation_from_char_checked(char c) {
  const auto r = relation_from_char(c);
  if (!r) throw std::invalid_argument(std::string("unknown relation code '") + c + "'");
  return *r;
}

// A determinate relation, or "no valid inference can be drawn".
using RelationOutcome = std::optional<Relation>;

inline constexpr char kIndeterminateChar = '.';

inline char to_char(RelationOutcome o) {
  return o ? to_char(*o) : kIndeterminateChar;
}

inline Relation converse(Relation r) {
  switch (r) {
    case Relation::forward_entailment: return Relation::reverse_entailment;
    case Relation::reverse_entailment: return Relation::forward_entailment;
    default: return r;
  }
}

// Bitmask of the full domain; domain sizes up to 64 are supported so that a
// 64-valuation space can be classified directly.
inline constexpr std::uint64_t full_set(int domain_size) {
  return domain_size >= 64 ? ~std::uint64_t{0}
                           : (std::uint64_t{1} << domain_size) - 1;
}

// A pair of non-degenerate subsets of a finite domain. The relations are
// undefined when either set is empty or the whole domain, so such pairs are
// rejected at construction.
class SetPair {
 public:
  SetPair(std::uint64_t x, std::uint64_t y, int domain_size)
      : x_(x), y_(y), domain_size_(domain_size) {
    if (domain_size < 1 || domain_size > 64)
      throw std::invalid_argument("domain size must be in [1, 64]");
    const std::uint64_t full = full_set(domain_size);
    if ((x & ~full) != 0 || (y & ~full) != 0)
      throw std::invalid_argument("set contains elements outside the domain");
    if (x == 0 || y == 0 || x == full || y == full)
      throw std::invalid_argument(
          "relations are undefined for empty or universal sets");
  }

  std::uint64_t x() const { return x_; }
  std::uint64_t y() const { return y_; }
  int domain_size() const { return domain_size_; }

 private:
  std::uint64_t x_;
  std::uint64_t y_;
  int domain_size_;
};

// Case analysis in the order: equivalence, containment either way, then the
// disjointness/exhaustiveness combinations, with independence as the
// remainder. Exactly one case fires for every valid pair.
inline Relation classify_set_pair(const SetPair& p) {
  const std::uint64_t full = full_set(p.domain_size());
  const std::uint64_t x = p.x();
  const std::uint64_t y = p.y();
  if (x == y) return Relation::equivalence;
  if ((x & ~y) == 0) return Relation::forward_entailment;
  if ((y & ~x) == 0) return Relation::reverse_entailment;
  const bool disjoint = (x & y) == 0;
  const bool exhaustive = (x | y) == full;
  if (disjoint && exhaustive) return Relation::negation;
  if (disjoint) return Relation::alternation;
  if (exhaustive) return Relation::cover;
  return Relation::independence;
}

inline Relation classify_set_pair(std::uint64_t x, std::uint64_t y,
                                  int domain_size) {
  return classify_set_pair(SetPair(x, y, domain_size));
}

struct DomainTooSmallError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The 7x7 join table, derived by enumerating triples of non-degenerate sets
// rather than transcribed. A cell is determinate when every witnessing
// triple yields the same x-z relation, indeterminate when two witnesses
// disagree, and derivation fails if some (r1, r2) pair is never witnessed.
class JoinTable {
 public:
  static JoinTable derive(int max_domain_size) {
    if (max_domain_size < 4)
      throw std::invalid_argument("max_domain_size must be at least 4");
    JoinTable table;
    // outcome_bits[r1][r2]: bitmask of x-z relations seen for that cell.
    std::array<std::array<std::uint8_t, kNumRelations>, kNumRelations>
        outcome_bits{};
    for (int d = 2; d <= max_domain_size; ++d) {
      const std::uint64_t full = full_set(d);
      // Precompute pairwise relations to keep the triple loop cheap.
      const int count = static_cast<int>(full) - 1;  // sets 1 .. full-1
      std::vector<std::uint8_t> rel(static_cast<std::size_t>(count) * count);
      auto rel_at = [&](int a, int b) -> std::uint8_t& {
        return rel[static_cast<std::size_t>(a - 1) * count + (b - 1)];
      };
      for (int a = 1; a <= count; ++a)
        for (int b = 1; b <= count; ++b)
          rel_at(a, b) = static_cast<std::uint8_t>(classify_set_pair(
              static_cast<std::uint64_t>(a), static_cast<std::uint64_t>(b), d));
      for (int x = 1; x <= count; ++x) {
        for (int y = 1; y <= count; ++y) {
          const std::uint8_t r1 = rel_at(x, y);
          for (int z = 1; z <= count; ++z) {
            outcome_bits[r1][rel_at(y, z)] |=
                static_cast<std::uint8_t>(1u << rel_at(x, z));
          }
        }
      }
    }
    std::vector<std::string> unwitnessed;
    for (int i = 0; i < kNumRelations; ++i) {
      for (int j = 0; j < kNumRelations; ++j) {
        const std::uint8_t bits = outcome_bits[i][j];
        if (bits == 0) {
          unwitnessed.push_back(std::string{to_char(kAllRelations[i])} + "," +
                                to_char(kAllRelations[j]));
          continue;
        }
        if ((bits & (bits - 1)) == 0) {
          int idx = 0;
          while (!(bits & (1u << idx))) ++idx;
          table.cells_[i][j] = kAllRelations[idx];
        } else {
          table.cells_[i][j] = std::nullopt;
        }
      }
    }
    if (!unwitnessed.empty()) {
      std::ostringstream msg;
      msg << "join table underdetermined at domain size " << max_domain_size
          << "; unwitnessed pairs:";
      for (const auto& p : unwitnessed) msg << " (" << p << ")";
      throw DomainTooSmallError(msg.str());
    }
    return table;
  }

  RelationOutcome cell(Relation r1, Relation r2) const {
    return cells_[static_cast<std::size_t>(r1)][static_cast<std::size_t>(r2)];
  }

  bool operator==(const JoinTable& other) const = default;

  // One row per line, cells encoded with the standard characters.
  std::string to_text() const {
    std::string out;
    for (int i = 0; i < kNumRelations; ++i) {
      for (int j = 0; j < kNumRelations; ++j) {
        if (j) out += ' ';
        out += to_char(cells_[i][j]);
      }
      out += '\n';
    }
    return out;
  }

 private:
  JoinTable() = default;
  std::array<std::array<RelationOutcome, kNumRelations>, kNumRelations>
      cells_{};
};

// Table derived once over domain sizes 2..5, which the acceptance suite
// pins against the published table.
inline const JoinTable& default_join_table() {
  static const JoinTable table = JoinTable::derive(5);
  return table;
}

inline RelationOutcome join(Relation r1, Relation r2) {
  return default_join_table().cell(r1, r2);
}

}  // namespace natlog
