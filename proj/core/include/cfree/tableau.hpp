#pragma once

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace cfree {

/// Coefficient row of a commutator-free tableau. Entry k multiplies the
/// stage value f_k; rows of FSAL embedded updates may carry one extra entry
/// for f(y_{n+1}).
using Row = std::vector<double>;

/// Which block of the tableau a row belongs to.
enum class Part { Stage, Update, Embedded };

/// Position of a single row: for Part::Stage, `stage` is the 1-based stage
/// index r (2..s); for the update blocks it is ignored. `row` is the 1-based
/// exponential index j inside the block (j = 1 acts first).
struct RowRef {
  Part part = Part::Stage;
  int stage = 0;
  int row = 1;

  friend bool operator==(const RowRef&, const RowRef&) = default;
};

std::string to_string(const RowRef& ref);

/// Two rows declared elementwise identical, so their exponential can be
/// computed once per step.
using ReusePair = std::pair<RowRef, RowRef>;

/// Full coefficient set of a commutator-free method or embedded pair.
///
/// `alpha[r-1]` holds the exponential rows of stage r; `alpha[0]` is always
/// empty because the first stage is the base point. Update rows (`beta`) and
/// embedded rows (`beta_hat`) are stored in application order.
struct CFTableau {
  std::string name;
  int stages = 0;
  std::vector<std::vector<Row>> alpha;
  std::vector<Row> beta;
  std::vector<Row> beta_hat;
  int order = 0;
  /// Order of the embedded solution, 0 when the tableau is not a pair.
  int embedded_order = 0;
  bool fsal = false;
  std::vector<ReusePair> reuse;
  /// Coefficients are rounded decimals copied from print rather than exact values.
  bool printed_decimal = false;

  [[nodiscard]] bool is_pair() const { return !beta_hat.empty(); }

  /// Row addressed by `ref`; throws StructuralError if it does not exist.
  [[nodiscard]] const Row& row(const RowRef& ref) const;

  /// Length every row of `part` must have (s, or s+1 for FSAL embedded rows).
  [[nodiscard]] int row_length(Part part) const;
};

/// Row lengths, explicitness and elementwise identity of declared reuse
/// pairs. Throws StructuralError describing the first violation.
void validate_structure(const CFTableau& tableau);

/// validate_structure plus consistency of the update weights (sum(b) = 1).
void validate(const CFTableau& tableau);

/// Rows compared after zero padding to a common length.
bool rows_identical(const Row& a, const Row& b, double tol);

/// Classical Runge-Kutta coefficients obtained by summing the exponential
/// rows of a commutator-free tableau.
struct ReducedCoefficients {
  Eigen::MatrixXd a;       ///< a(r, k) = sum_j alpha^k_{r,j}
  Eigen::VectorXd b;       ///< b^k = sum_j beta^k_j
  Eigen::VectorXd b_hat;   ///< length s, or s+1 when the embedded rows use f(y1); empty if no pair
  Eigen::VectorXd c;       ///< c_r = sum_k a(r, k)
};

/// Computes the reduced coefficients with plain left-to-right summation.
ReducedCoefficients reduce(const CFTableau& tableau);

/// A classical RK method (a, b, c) as seen by the order conditions.
struct ClassicalMethod {
  Eigen::MatrixXd a;
  Eigen::VectorXd b;
  Eigen::VectorXd c;
};

/// The principal method (a, b, c).
ClassicalMethod principal_method(const ReducedCoefficients& reduced);

/// The embedded method. For FSAL pairs the stage matrix is extended by the
/// row b (the stage at y1) and c by sum(b).
ClassicalMethod embedded_method(const ReducedCoefficients& reduced);

/// Every ordered row position of the tableau, in evaluation order:
/// stage rows 2..s, update rows, then embedded rows.
std::vector<RowRef> all_rows(const CFTableau& tableau);

}  // namespace cfree
