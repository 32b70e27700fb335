#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace natlog {

// Strictly binary expression tree; leaves carry vocabulary tokens. This is
// the one structure every dataset format and every model consumes.
struct Expression;
using ExpressionPtr = std::shared_ptr<const Expression>;

struct Expression {
  std::string token;  // leaves only
  ExpressionPtr left;
  ExpressionPtr right;

  bool is_leaf() const { return left == nullptr; }
};

inline ExpressionPtr make_leaf(std::string token) {
  return std::make_shared<Expression>(Expression{std::move(token), nullptr, nullptr});
}

inline ExpressionPtr make_branch(ExpressionPtr left, ExpressionPtr right) {
  return std::make_shared<Expression>(
      Expression{std::string{}, std::move(left), std::move(right)});
}

struct SexprError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

namespace detail {

inline std::vector<std::string_view> tokenize_sexpr(std::string_view text) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      ++i;
    } else if (c == '(' || c == ')') {
      tokens.push_back(text.substr(i, 1));
      ++i;
    } else {
      std::size_t j = i;
      while (j < text.size() && text[j] != ' ' && text[j] != '\t' &&
             text[j] != '\n' && text[j] != '\r' && text[j] != '(' &&
             text[j] != ')')
        ++j;
      tokens.push_back(text.substr(i, j - i));
      i = j;
    }
  }
  return tokens;
}

inline ExpressionPtr parse_sexpr_at(const std::vector<std::string_view>& tokens,
                                    std::size_t& pos) {
  if (pos >= tokens.size()) throw SexprError("unexpected end of input");
  const std::string_view tok = tokens[pos];
  if (tok == ")") throw SexprError("unexpected ')'");
  if (tok != "(") {
    ++pos;
    return make_leaf(std::string(tok));
  }
  ++pos;  // consume '('
  std::vector<ExpressionPtr> children;
  while (pos < tokens.size() && tokens[pos] != ")") {
    children.push_back(parse_sexpr_at(tokens, pos));
    if (children.size() > 2) throw SexprError("non-binary branch");
  }
  if (pos >= tokens.size()) throw SexprError("unbalanced parentheses");
  ++pos;  // consume ')'
  if (children.size() != 2) throw SexprError("non-binary branch");
  return make_branch(children[0], children[1]);
}

}  // namespace detail

// Parses a whitespace-tokenized parenthesized form into a strictly binary
// tree. A bare symbol parses to a leaf.
inline ExpressionPtr parse_sexpr(std::string_view text) {
  const auto tokens = detail::tokenize_sexpr(text);
  if (tokens.empty()) throw SexprError("empty input");
  std::size_t pos = 0;
  ExpressionPtr expr = detail::parse_sexpr_at(tokens, pos);
  if (pos != tokens.size()) throw SexprError("trailing tokens after expression");
  return expr;
}

inline void serialize_sexpr(const Expression& e, std::string& out) {
  if (e.is_leaf()) {
    out += e.token;
    return;
  }
  out += "( ";
  serialize_sexpr(*e.left, out);
  out += ' ';
  serialize_sexpr(*e.right, out);
  out += " )";
}

inline std::string serialize_sexpr(const Expression& e) {
  std::string out;
  serialize_sexpr(e, out);
  return out;
}

inline std::string serialize_sexpr(const ExpressionPtr& e) {
  return serialize_sexpr(*e);
}

// Number of leaves whose token is one of the given symbols; used to bin
// formula pairs by operator count.
inline int count_leaves_in(const Expression& e,
                           const std::vector<std::string>& symbols) {
  if (e.is_leaf()) {
    for (const auto& s : symbols)
      if (e.token == s) return 1;
    return 0;
  }
  return count_leaves_in(*e.left, symbols) + count_leaves_in(*e.right, symbols);
}

}  // namespace natlog
