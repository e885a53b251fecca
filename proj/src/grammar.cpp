#include "lotbench/grammar.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace lotbench {

std::string_view compare_op_text(CompareOp op) noexcept {
  switch (op) {
    case CompareOp::Eq:
      return "==";
    case CompareOp::Neq:
      return "!=";
    case CompareOp::Gt:
      return ">";
    case CompareOp::Lt:
      return "<";
  }
  return "?";
}

bool is_known_fraction(const Fraction& f) noexcept {
  return std::find(kFractions.begin(), kFractions.end(), f) != kFractions.end();
}

NumericTerm NumericTerm::make_constant(int value) {
  if (value < kConstantMin || value > kConstantMax) {
    throw TypeError("integer constant " + std::to_string(value) +
                    " outside [" + std::to_string(kConstantMin) + ", " +
                    std::to_string(kConstantMax) + "]");
  }
  NumericTerm t;
  t.kind = Kind::Constant;
  t.constant = value;
  return t;
}

NumericTerm NumericTerm::fraction_of_total(Fraction frac) {
  if (!is_known_fraction(frac)) {
    throw TypeError("fraction " + std::to_string(frac.num) + "/" +
                    std::to_string(frac.den) + " is not in the grammar");
  }
  NumericTerm t;
  t.kind = Kind::FractionOfTotal;
  t.fraction = frac;
  return t;
}

ExprPtr Expr::compare(CompareOp op, NumericTerm rhs) {
  if (rhs.is_fraction() && (op == CompareOp::Eq || op == CompareOp::Neq)) {
    throw TypeError("equality comparisons admit only integer constants");
  }
  auto node = std::shared_ptr<Expr>(new Expr());
  node->kind_ = ExprKind::Compare;
  node->op_ = op;
  node->term_ = rhs;
  return node;
}

ExprPtr Expr::logical_and(ExprPtr lhs, ExprPtr rhs) {
  if (!lhs || !rhs) throw TypeError("connective child must not be null");
  auto node = std::shared_ptr<Expr>(new Expr());
  node->kind_ = ExprKind::And;
  node->lhs_ = std::move(lhs);
  node->rhs_ = std::move(rhs);
  return node;
}

ExprPtr Expr::logical_or(ExprPtr lhs, ExprPtr rhs) {
  if (!lhs || !rhs) throw TypeError("connective child must not be null");
  auto node = std::shared_ptr<Expr>(new Expr());
  node->kind_ = ExprKind::Or;
  node->lhs_ = std::move(lhs);
  node->rhs_ = std::move(rhs);
  return node;
}

bool expr_equal(const Expr& a, const Expr& b) noexcept {
  if (a.kind() != b.kind()) return false;
  if (a.kind() == ExprKind::Compare) {
    return a.op() == b.op() && a.term() == b.term();
  }
  return expr_equal(*a.lhs(), *b.lhs()) && expr_equal(*a.rhs(), *b.rhs());
}

int count_operators(const Expr& expr) noexcept {
  if (expr.kind() == ExprKind::Compare) {
    return expr.term().is_fraction() ? 2 : 1;  // comparison + multiplication
  }
  return 1 + count_operators(*expr.lhs()) + count_operators(*expr.rhs());
}

std::string render_term(const NumericTerm& term) {
  if (term.is_fraction()) {
    return std::to_string(term.fraction.num) + "/" +
           std::to_string(term.fraction.den) + " * n";
  }
  return std::to_string(term.constant);
}

namespace {

void render_into(const Expr& expr, std::string& out) {
  out.push_back('(');
  switch (expr.kind()) {
    case ExprKind::Compare:
      out += "x ";
      out += compare_op_text(expr.op());
      out.push_back(' ');
      out += render_term(expr.term());
      break;
    case ExprKind::And:
      render_into(*expr.lhs(), out);
      out += " and ";
      render_into(*expr.rhs(), out);
      break;
    case ExprKind::Or:
      render_into(*expr.lhs(), out);
      out += " or ";
      render_into(*expr.rhs(), out);
      break;
  }
  out.push_back(')');
}

}  // namespace

std::string render_expression(const Expr& expr) {
  std::string out;
  out.reserve(32);
  render_into(expr, out);
  return out;
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

namespace {

struct Parser {
  std::string_view text;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }

  bool at_end() {
    skip_ws();
    return pos >= text.size();
  }

  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }

  bool consume(char c) {
    skip_ws();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  bool consume_word(std::string_view word) {
    skip_ws();
    if (text.substr(pos, word.size()) != word) return false;
    std::size_t after = pos + word.size();
    if (after < text.size() &&
        std::isalnum(static_cast<unsigned char>(text[after]))) {
      return false;  // longer identifier, not this keyword
    }
    pos = after;
    return true;
  }

  [[noreturn]] void fail(const std::string& message) {
    throw ParseError(message, pos);
  }

  long parse_int() {
    skip_ws();
    if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos]))) {
      fail("expected an integer");
    }
    long value = 0;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      value = value * 10 + (text[pos] - '0');
      if (value > 1000000) fail("integer literal too large");
      ++pos;
    }
    return value;
  }

  CompareOp parse_compare_op() {
    skip_ws();
    if (text.substr(pos, 2) == "==") { pos += 2; return CompareOp::Eq; }
    if (text.substr(pos, 2) == "!=") { pos += 2; return CompareOp::Neq; }
    if (consume('>')) return CompareOp::Gt;
    if (consume('<')) return CompareOp::Lt;
    fail("expected a comparison operator (==, !=, >, <)");
  }

  NumericTerm parse_term() {
    long first = parse_int();
    skip_ws();
    if (pos < text.size() && text[pos] == '/') {
      ++pos;
      long den = parse_int();
      skip_ws();
      if (!consume('*')) fail("expected '*' after fraction");
      skip_ws();
      if (consume_word("x")) {
        throw TypeError("the subject count cannot appear inside a fraction term");
      }
      if (!consume_word("n")) fail("expected total variable 'n' after '*'");
      return NumericTerm::fraction_of_total(
          Fraction{static_cast<int>(first), static_cast<int>(den)});
    }
    return NumericTerm::make_constant(static_cast<int>(first));
  }

  ExprPtr parse_comparison() {
    skip_ws();
    if (consume_word("n")) {
      throw TypeError("the total count cannot be the subject of a comparison");
    }
    if (!consume_word("x")) fail("expected subject variable 'x'");
    CompareOp op = parse_compare_op();
    NumericTerm term = parse_term();
    return Expr::compare(op, term);  // factory rejects Eq/Neq on fractions
  }

  ExprPtr parse_atom() {
    skip_ws();
    if (consume('(')) {
      ExprPtr inner = parse_or();
      if (!consume(')')) fail("expected ')'");
      return inner;
    }
    return parse_comparison();
  }

  ExprPtr parse_and() {
    ExprPtr left = parse_atom();
    while (consume_word("and")) {
      left = Expr::logical_and(std::move(left), parse_atom());
    }
    return left;
  }

  ExprPtr parse_or() {
    ExprPtr left = parse_and();
    while (consume_word("or")) {
      left = Expr::logical_or(std::move(left), parse_and());
    }
    return left;
  }
};

}  // namespace

ExprPtr parse_expression(std::string_view text) {
  Parser parser{text};
  if (parser.at_end()) parser.fail("empty expression");
  ExprPtr expr = parser.parse_or();
  if (!parser.at_end()) parser.fail("unexpected trailing input");
  return expr;
}

ExprPtr canonicalize(const ExprPtr& expr) {
  if (expr->kind() == ExprKind::Compare) return expr;
  ExprPtr lhs = canonicalize(expr->lhs());
  ExprPtr rhs = canonicalize(expr->rhs());
  if (render_expression(*rhs) < render_expression(*lhs)) std::swap(lhs, rhs);
  return expr->kind() == ExprKind::And
             ? Expr::logical_and(std::move(lhs), std::move(rhs))
             : Expr::logical_or(std::move(lhs), std::move(rhs));
}

bool validate_expr(const Expr& expr) noexcept {
  switch (expr.kind()) {
    case ExprKind::Compare: {
      const NumericTerm& t = expr.term();
      if (t.is_fraction()) {
        if (expr.op() == CompareOp::Eq || expr.op() == CompareOp::Neq) return false;
        return is_known_fraction(t.fraction);
      }
      return t.constant >= kConstantMin && t.constant <= kConstantMax;
    }
    case ExprKind::And:
    case ExprKind::Or:
      return expr.lhs() && expr.rhs() && validate_expr(*expr.lhs()) &&
             validate_expr(*expr.rhs());
  }
  return false;
}

}  // namespace lotbench
