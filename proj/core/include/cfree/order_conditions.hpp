#pragma once

#include <string>
#include <vector>

#include "cfree/tableau.hpp"

namespace cfree {

/// Signed residual (lhs - rhs) of one algebraic order condition.
struct Residual {
  std::string label;
  int order = 0;
  double value = 0.0;
};

struct OrderReport {
  std::vector<Residual> classical;
  std::vector<Residual> nonclassical;
  int certified_order = 0;
  std::vector<std::string> notes;

  /// Labels of every condition whose |residual| exceeds `tol`.
  [[nodiscard]] std::vector<std::string> violated(double tol) const;
};

/// Pass threshold for algebraic conditions: 1e-13 for exact coefficients,
/// 1e-8 for rounded printed decimals.
double certification_tolerance(const CFTableau& tableau);

/// Residuals of the eight Butcher conditions of order <= up_to (1..4).
std::vector<Residual> check_classical(const ClassicalMethod& method, int up_to = 4);

/// Residuals of the non-classical conditions for a two-exponential update:
/// one of order 3 and three of order 4. `part` selects the update (y) or the
/// embedded (yhat) rows. Throws UnsupportedShapeError unless that block has
/// exactly two rows.
std::vector<Residual> check_nonclassical(const CFTableau& tableau, Part part = Part::Update);

/// Evaluates every applicable condition for the update or embedded block and
/// returns the largest order p <= 4 whose conditions all hold within `tol`.
/// A block with one exponential is capped at order 2; a three-or-more row
/// block is capped at 2 as well since no non-classical conditions are
/// evaluated for it.
OrderReport certify(const CFTableau& tableau, Part part, double tol);

}  // namespace cfree
