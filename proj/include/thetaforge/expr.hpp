#ifndef THETAFORGE_EXPR_HPP
#define THETAFORGE_EXPR_HPP

#include <memory>
#include <string>
#include <vector>

#include "thetaforge/puiseux.hpp"

namespace thetaforge {

// Grammar of the expansion language:
//   expr     := term (('+'|'-') term)*
//   term     := factor ('*' factor)*
//   factor   := atom ('^' INT)?
//   atom     := RATIONAL | 'q' '^' '(' RATIONAL ')'
//             | NAME '(' (RATIONAL (',' RATIONAL)*)? ')' | '(' expr ')'
//   RATIONAL := INT ('/' POSINT)?
// Call names: fsum, poch, triple, polygonal, fifth_pentagonal.
struct ExprAst;
using ExprPtr = std::shared_ptr<const ExprAst>;

struct ExprAst {
    enum class Kind { RationalLiteral, QPower, Call, BinOp, Pow };

    Kind kind;
    Rational value;              // RationalLiteral coefficient / QPower exponent
    std::string name;            // Call
    std::vector<Rational> args;  // Call
    char op = 0;                 // BinOp: '+', '-', '*'
    ExprPtr lhs, rhs;            // BinOp
    ExprPtr base;                // Pow
    long exponent = 0;           // Pow
};

// PARSE_ERROR with the byte offset of the offending token and what was
// expected there.
class ParseError : public std::runtime_error {
  public:
    ParseError(std::size_t offset, const std::string& expected)
        : std::runtime_error("PARSE_ERROR at byte " + std::to_string(offset) +
                             ": expected " + expected),
          offset_(offset),
          expected_(expected) {}

    std::size_t offset() const { return offset_; }
    const std::string& expected() const { return expected_; }

  private:
    std::size_t offset_;
    std::string expected_;
};

ExprPtr parse_expr(const std::string& text);

// Canonical text form; parse(print(ast)) reproduces the same printed string.
std::string print_expr(const ExprPtr& ast);

// Expands the expression exactly through the cutoff, delegating calls to the
// series constructors (fsum -> theta_sum, poch -> pochhammer_q,
// triple -> triple_product_q, polygonal -> the r-gonal LHS,
// fifth_pentagonal -> the fifth-power expansion).
PuiseuxSeries eval_expr(const ExprPtr& ast, const Rational& cutoff);

}  // namespace thetaforge

#endif
