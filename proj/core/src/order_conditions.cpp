#include "cfree/order_conditions.hpp"

#include <cmath>

#include "cfree/errors.hpp"

namespace cfree {
namespace {

// Plain summation in index order keeps results reproducible bit for bit.
double dot(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) acc += x(i) * y(i);
  return acc;
}

double sum(const Eigen::VectorXd& x) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) acc += x(i);
  return acc;
}

Eigen::VectorXd matvec(const Eigen::MatrixXd& a, const Eigen::VectorXd& x) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(a.rows());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) out(i) += a(i, j) * x(j);
  }
  return out;
}

Eigen::VectorXd padded(const Row& row, Eigen::Index n) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
  for (std::size_t k = 0; k < row.size() && static_cast<Eigen::Index>(k) < n; ++k) {
    v(static_cast<Eigen::Index>(k)) = row[k];
  }
  return v;
}

}  // namespace

std::vector<std::string> OrderReport::violated(double tol) const {
  std::vector<std::string> out;
  for (const auto* block : {&classical, &nonclassical}) {
    for (const Residual& r : *block) {
      if (!(std::abs(r.value) <= tol)) out.push_back(r.label);
    }
  }
  return out;
}

double certification_tolerance(const CFTableau& tableau) {
  return tableau.printed_decimal ? 1e-8 : 1e-13;
}

std::vector<Residual> check_classical(const ClassicalMethod& m, int up_to) {
  if (up_to < 1 || up_to > 4) throw DomainError("check_classical: up_to must be in 1..4");
  const Eigen::VectorXd& b = m.b;
  const Eigen::VectorXd& c = m.c;
  const Eigen::VectorXd c2 = c.cwiseProduct(c);
  const Eigen::VectorXd ac = matvec(m.a, c);

  std::vector<Residual> out;
  out.push_back({"sum(b) = 1", 1, sum(b) - 1.0});
  if (up_to >= 2) out.push_back({"b.c = 1/2", 2, dot(b, c) - 1.0 / 2.0});
  if (up_to >= 3) {
    out.push_back({"b.c^2 = 1/3", 3, dot(b, c2) - 1.0 / 3.0});
    out.push_back({"b.A.c = 1/6", 3, dot(b, ac) - 1.0 / 6.0});
  }
  if (up_to >= 4) {
    out.push_back({"b.c^3 = 1/4", 4, dot(b, c2.cwiseProduct(c)) - 1.0 / 4.0});
    out.push_back({"b.(c*A.c) = 1/8", 4, dot(b, c.cwiseProduct(ac)) - 1.0 / 8.0});
    out.push_back({"b.A.c^2 = 1/12", 4, dot(b, matvec(m.a, c2)) - 1.0 / 12.0});
    out.push_back({"b.A.A.c = 1/24", 4, dot(b, matvec(m.a, ac)) - 1.0 / 24.0});
  }
  return out;
}

std::vector<Residual> check_nonclassical(const CFTableau& tableau, Part part) {
  const std::vector<Row>& rows = part == Part::Embedded ? tableau.beta_hat : tableau.beta;
  if (part == Part::Stage) throw UnsupportedShapeError("check_nonclassical: stage rows are not an update");
  if (rows.size() != 2) {
    throw UnsupportedShapeError("check_nonclassical: '" + tableau.name + "' " +
                                (part == Part::Embedded ? "embedded" : "update") + " block has " +
                                std::to_string(rows.size()) + " rows; two are required");
  }
  const ReducedCoefficients reduced = reduce(tableau);
  const ClassicalMethod m =
      part == Part::Embedded ? embedded_method(reduced) : principal_method(reduced);
  const Eigen::VectorXd beta1 = padded(rows[0], m.c.size());
  const Eigen::VectorXd beta2 = padded(rows[1], m.c.size());
  const double sum2 = sum(beta2);
  const Eigen::VectorXd c2 = m.c.cwiseProduct(m.c);

  // The summation over k applies to both addends of each condition.
  return {
      {"beta1.c + sum(beta2)/2 = 1/3", 3, dot(beta1, m.c) + sum2 / 2.0 - 1.0 / 3.0},
      {"beta1.c + sum(beta2)/3 = 1/4", 4, dot(beta1, m.c) + sum2 / 3.0 - 1.0 / 4.0},
      {"beta1.c^2 + sum(beta2)/3 = 1/6", 4, dot(beta1, c2) + sum2 / 3.0 - 1.0 / 6.0},
      {"beta1.A.c + sum(beta2)/6 = 1/12", 4, dot(beta1, matvec(m.a, m.c)) + sum2 / 6.0 - 1.0 / 12.0},
  };
}

OrderReport certify(const CFTableau& tableau, Part part, double tol) {
  if (part == Part::Embedded && !tableau.is_pair()) {
    throw UnsupportedShapeError("certify: '" + tableau.name + "' has no embedded rows");
  }
  const ReducedCoefficients reduced = reduce(tableau);
  const ClassicalMethod m =
      part == Part::Embedded ? embedded_method(reduced) : principal_method(reduced);
  const std::size_t n_rows = part == Part::Embedded ? tableau.beta_hat.size() : tableau.beta.size();

  OrderReport report;
  report.classical = check_classical(m, 4);
  int cap = 4;
  if (n_rows == 2) {
    report.nonclassical = check_nonclassical(tableau, part);
    report.notes.push_back(
        "fourth non-classical order-4 condition not evaluated algebraically: verified empirically only");
  } else if (n_rows == 1) {
    cap = 2;
    report.notes.push_back("single exponential in the update: order capped at 2");
  } else {
    cap = 2;
    report.notes.push_back("more than two exponentials in the update: non-classical conditions not evaluated, order capped at 2");
  }

  auto holds_through = [&](int p) {
    for (const auto* block : {&report.classical, &report.nonclassical}) {
      for (const Residual& r : *block) {
        if (r.order <= p && !(std::abs(r.value) <= tol)) return false;
      }
    }
    return true;
  };
  for (int p = 1; p <= cap && holds_through(p); ++p) report.certified_order = p;
  return report;
}

}  // namespace cfree
