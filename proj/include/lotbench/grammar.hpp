#ifndef LOTBENCH_GRAMMAR_HPP
#define LOTBENCH_GRAMMAR_HPP

// Typed expression language for numerical concepts over (total, num) pairs.
//
// An expression is a Boolean tree whose leaves compare the subject's count
// ("x") against either an integer constant in [0, 100] or a fraction of the
// total count ("f * n", f drawn from a fixed list of nine fractions).
// Equality and inequality admit only constant right-hand sides; ordering
// comparisons admit both. Conjunction and disjunction combine Boolean
// subtrees. Nothing else is expressible: the factory functions reject
// ill-typed forms, so every Expr in the program is well-formed.
//
// Trees are immutable and shared; ExprPtr is safe to copy across threads.

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>

#include "lotbench/errors.hpp"

namespace lotbench {

inline constexpr int kConstantMin = 0;
inline constexpr int kConstantMax = 100;
inline constexpr int kTotalMin = 5;
inline constexpr int kTotalMax = 100;

enum class CompareOp : std::uint8_t { Eq, Neq, Gt, Lt };

std::string_view compare_op_text(CompareOp op) noexcept;

struct Fraction {
  int num = 0;
  int den = 1;
  friend bool operator==(const Fraction&, const Fraction&) = default;
};

// The nine fractions admitted by the grammar, in ascending value order.
inline constexpr std::array<Fraction, 9> kFractions = {{{1, 5},
                                                        {1, 4},
                                                        {1, 3},
                                                        {2, 5},
                                                        {1, 2},
                                                        {3, 5},
                                                        {2, 3},
                                                        {3, 4},
                                                        {4, 5}}};

bool is_known_fraction(const Fraction& f) noexcept;

// Right-hand side of a comparison: a constant, or a fraction of the total.
// A fraction term carries exactly one multiplication and never nests.
struct NumericTerm {
  enum class Kind : std::uint8_t { Constant, FractionOfTotal };

  Kind kind = Kind::Constant;
  int constant = 0;
  Fraction fraction{};

  static NumericTerm make_constant(int value);          // throws TypeError
  static NumericTerm fraction_of_total(Fraction frac);  // throws TypeError

  bool is_fraction() const noexcept { return kind == Kind::FractionOfTotal; }
  friend bool operator==(const NumericTerm&, const NumericTerm&) = default;
};

enum class ExprKind : std::uint8_t { Compare, And, Or };

class Expr;
using ExprPtr = std::shared_ptr<const Expr>;

class Expr {
 public:
  // Factories validate the fine-grained type constraints and throw
  // TypeError on violations (Eq/Neq against a fraction term, out-of-range
  // constants, fractions outside the fixed list).
  static ExprPtr compare(CompareOp op, NumericTerm rhs);
  static ExprPtr logical_and(ExprPtr lhs, ExprPtr rhs);
  static ExprPtr logical_or(ExprPtr lhs, ExprPtr rhs);

  ExprKind kind() const noexcept { return kind_; }

  // Compare accessors; valid only when kind() == Compare.
  CompareOp op() const noexcept { return op_; }
  const NumericTerm& term() const noexcept { return term_; }

  // Connective accessors; valid only when kind() is And or Or.
  const ExprPtr& lhs() const noexcept { return lhs_; }
  const ExprPtr& rhs() const noexcept { return rhs_; }

 private:
  Expr() = default;

  ExprKind kind_ = ExprKind::Compare;
  CompareOp op_ = CompareOp::Eq;
  NumericTerm term_{};
  ExprPtr lhs_;
  ExprPtr rhs_;
};

bool expr_equal(const Expr& a, const Expr& b) noexcept;

// Number of operator nodes: each comparison, connective and fraction
// multiplication counts one. Defines the complexity of the expression.
int count_operators(const Expr& expr) noexcept;

// Deterministic fully parenthesized text, e.g. "((x > 5) and (x < 10))",
// "(x < 1/2 * n)". Round-trips through parse_expression.
std::string render_expression(const Expr& expr);
std::string render_term(const NumericTerm& term);

// Inverse of render_expression on its image; tolerates extra whitespace
// and unparenthesized comparisons. Throws ParseError for malformed input
// and TypeError for well-tokenized input the grammar forbids.
ExprPtr parse_expression(std::string_view text);

// Sorts the children of every connective by rendered text. Idempotent;
// preserves operator count and extension.
ExprPtr canonicalize(const ExprPtr& expr);

// Recomputes every type invariant over the whole tree. The factories make
// violations unconstructible; this exists for audits over decoded data.
bool validate_expr(const Expr& expr) noexcept;

}  // namespace lotbench

#endif  // LOTBENCH_GRAMMAR_HPP
