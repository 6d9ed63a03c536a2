#pragma once

// Closed-form scalar expressions over named coordinates, compiled to
// functions of Jets so that every derivative is exact.
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := ('+' | '-') unary | power
//   power   := primary ('^' unary)?
//   primary := number | name | name '(' expr (',' expr)* ')' | '(' expr ')'
//
// Functions: exp log sin cos sinh cosh sqrt pow. Names resolve to
// coordinates first, then to constants (pi is predefined).

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "warpgeo/metric_chart.hpp"

namespace warpgeo::cli {

class Expression {
 public:
  // Throws ParseError (with a column) or ExpressionNotDifferentiable.
  static Expression compile(const std::string& text, const std::vector<std::string>& coordinates,
                            const std::map<std::string, double>& constants = {});

  Jet operator()(std::span<const Jet> x) const;
  double operator()(const Vec& x) const;
  ScalarField field() const;
  const std::string& text() const { return text_; }

  struct Node;

 private:
  std::string text_;
  std::shared_ptr<const Node> root_;
};

}  // namespace warpgeo::cli
