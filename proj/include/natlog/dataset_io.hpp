#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "natlog/prop_logic.hpp"
#include "natlog/quantifiers.hpp"
#include "natlog/relations.hpp"
#include "natlog/sexpr.hpp"
#include "natlog/worlds.hpp"

namespace natlog {

// The universal dataset record: REL<TAB>sexpr<TAB>sexpr per line.
struct LabeledPair {
  Relation label = Relation::independence;
  ExpressionPtr left;
  ExpressionPtr right;
};

inline std::string format_dataset_line(const LabeledPair& pair) {
  std::string line{to_char(pair.label)};
  line += '\t';
  line += serialize_sexpr(pair.left);
  line += '\t';
  line += serialize_sexpr(pair.right);
  return line;
}

inline LabeledPair parse_dataset_line(const std::string& line) {
  const std::size_t t1 = line.find('\t');
  const std::size_t t2 = line.find('\t', t1 + 1);
  if (t1 == std::string::npos || t2 == std::string::npos || t1 != 1)
    throw std::invalid_argument("malformed dataset line: " + line);
  LabeledPair pair;
  pair.label = relation_from_char_checked(line[0]);
  pair.left = parse_sexpr(std::string_view(line).substr(2, t2 - 2));
  pair.right = parse_sexpr(std::string_view(line).substr(t2 + 1));
  return pair;
}

inline void write_dataset(const std::filesystem::path& path,
                          const std::vector<LabeledPair>& pairs) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  for (const LabeledPair& p : pairs) out << format_dataset_line(p) << '\n';
}

inline std::vector<LabeledPair> read_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset: " + path.string());
  std::vector<LabeledPair> pairs;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    pairs.push_back(parse_dataset_line(line));
  }
  return pairs;
}

inline void write_json(const std::filesystem::path& path,
                       const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << j.dump(2) << '\n';
}

inline nlohmann::json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path.string());
  return nlohmann::json::parse(in);
}

// ---- relation-world dataset ----

inline LabeledPair statement_to_pair(const RelationalStatement& s) {
  return {s.relation, make_leaf(term_name(s.left)), make_leaf(term_name(s.right))};
}

inline std::vector<LabeledPair> statements_to_pairs(
    const std::vector<RelationalStatement>& statements) {
  std::vector<LabeledPair> pairs;
  pairs.reserve(statements.size());
  for (const auto& s : statements) pairs.push_back(statement_to_pair(s));
  return pairs;
}

// Writes train.tsv / test.tsv / dropped.tsv plus meta.json. The hidden set
// extensions never reach the files: models see term symbols only.
inline void write_world_dataset(const std::filesystem::path& dir,
                                const SplitResult& split, int num_terms,
                                int domain_size, std::uint64_t seed) {
  std::filesystem::create_directories(dir);
  write_dataset(dir / "train.tsv", statements_to_pairs(split.train));
  write_dataset(dir / "test.tsv", statements_to_pairs(split.test));
  write_dataset(dir / "dropped.tsv", statements_to_pairs(split.dropped));
  nlohmann::json meta = {
      {"task", "sets"},
      {"seed", seed},
      {"num_terms", num_terms},
      {"domain_size", domain_size},
      {"train_count", split.train.size()},
      {"test_count", split.test.size()},
      {"dropped_count", split.dropped.size()},
  };
  write_json(dir / "meta.json", meta);
}

// ---- propositional dataset ----

inline LabeledPair prop_pair_to_labeled(const PropPair& p) {
  return {p.label, to_expression(*p.f1), to_expression(*p.f2)};
}

inline void write_prop_dataset(const std::filesystem::path& dir,
                               const PropDataset& dataset,
                               const PropDatasetConfig& cfg) {
  std::filesystem::create_directories(dir);
  std::vector<LabeledPair> train;
  train.reserve(dataset.train.size());
  for (const auto& p : dataset.train) train.push_back(prop_pair_to_labeled(p));
  write_dataset(dir / "train.tsv", train);
  std::vector<LabeledPair> test;
  nlohmann::json bin_counts = nlohmann::json::object();
  for (const auto& [bin, items] : dataset.test_by_bin) {
    for (const auto& p : items) test.push_back(prop_pair_to_labeled(p));
    bin_counts[std::to_string(bin)] = items.size();
  }
  write_dataset(dir / "test.tsv", test);
  nlohmann::json meta = {
      {"task", "prop"},
      {"seed", cfg.seed},
      {"max_ops", cfg.max_ops},
      {"train_cutoff", cfg.train_cutoff},
      {"test_fraction", cfg.test_fraction},
      {"max_vars_per_pair", cfg.max_vars_per_pair},
      {"train_count", train.size()},
      {"test_count", test.size()},
      {"test_bin_counts", bin_counts},
  };
  write_json(dir / "meta.json", meta);
}

// ---- quantifier dataset ----

inline void write_quant_dataset(const std::filesystem::path& dir,
                                const QuantDataset& dataset, const Lexicon& lex,
                                const QuantDatasetConfig& cfg) {
  std::filesystem::create_directories(dir);
  auto to_pairs = [&lex](const std::vector<QuantPair>& src) {
    std::vector<LabeledPair> out;
    out.reserve(src.size());
    for (const auto& p : src)
      out.push_back({p.label, sentence_to_expression(p.s1, lex),
                     sentence_to_expression(p.s2, lex)});
    return out;
  };
  write_dataset(dir / "train.tsv", to_pairs(dataset.train));
  write_dataset(dir / "test.tsv", to_pairs(dataset.test));
  nlohmann::json meta = {
      {"task", "quant"},
      {"seed", cfg.seed},
      {"train_sentence_fraction", cfg.train_sentence_fraction},
      {"max_entities", cfg.max_entities},
      {"num_sentences", dataset.num_sentences},
      {"num_train_sentences", dataset.num_train_sentences},
      {"num_test_sentences", dataset.num_test_sentences},
      {"train_count", dataset.train.size()},
      {"test_count", dataset.test.size()},
  };
  write_json(dir / "meta.json", meta);
}

// Lexicon file: items with categories plus pairwise relations in the
// standard one-character encoding.
inline Lexicon lexicon_from_json(const nlohmann::json& j) {
  Lexicon lex;
  for (const auto& item : j.at("items")) {
    const std::string category = item.at("category").get<std::string>();
    if (category != "noun" && category != "verb")
      throw std::invalid_argument("lexicon category must be noun or verb");
    lex.add_item(item.at("name").get<std::string>(),
                 category == "noun" ? WordCategory::noun : WordCategory::verb);
  }
  for (const auto& rel : j.at("relations")) {
    const std::string code = rel.at(1).get<std::string>();
    if (code.size() != 1)
      throw std::invalid_argument("relation code must be one character");
    lex.stipulate(rel.at(0).get<std::string>(), rel.at(2).get<std::string>(),
                  relation_from_char_checked(code[0]));
  }
  lex.close();
  return lex;
}

inline nlohmann::json lexicon_to_json(const Lexicon& lex) {
  nlohmann::json items = nlohmann::json::array();
  for (const auto& item : lex.items())
    items.push_back({{"name", item.name},
                     {"category", item.category == WordCategory::noun
                                      ? "noun"
                                      : "verb"}});
  // Only the closed relations in one orientation.
  nlohmann::json relations = nlohmann::json::array();
  const int n = static_cast<int>(lex.items().size());
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (const auto r = lex.relation_between(a, b))
        relations.push_back({lex.item(a).name, std::string{to_char(*r)},
                             lex.item(b).name});
  return {{"items", items}, {"relations", relations}};
}

inline Lexicon load_lexicon(const std::filesystem::path& path) {
  return lexicon_from_json(read_json(path));
}

}  // namespace natlog
