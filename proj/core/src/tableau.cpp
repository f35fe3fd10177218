#include "cfree/tableau.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cfree/errors.hpp"

namespace cfree {
namespace {

constexpr double kReuseTolerance = 1e-14;
constexpr double kConsistencyTolerance = 1e-8;

void check_structure(const CFTableau& t) {
  if (t.stages < 1) {
    throw StructuralError("tableau '" + t.name + "': stage count must be positive");
  }
  if (static_cast<int>(t.alpha.size()) != t.stages) {
    throw StructuralError("tableau '" + t.name + "': expected " + std::to_string(t.stages) +
                          " stage blocks, got " + std::to_string(t.alpha.size()));
  }
  if (!t.alpha[0].empty()) {
    throw StructuralError("tableau '" + t.name + "': stage 1 cannot have exponential rows");
  }
  for (int r = 2; r <= t.stages; ++r) {
    const auto& rows = t.alpha[r - 1];
    if (rows.empty()) {
      throw StructuralError("tableau '" + t.name + "': stage " + std::to_string(r) + " has no rows");
    }
    for (std::size_t j = 0; j < rows.size(); ++j) {
      const Row& row = rows[j];
      if (static_cast<int>(row.size()) != t.stages) {
        throw StructuralError("tableau '" + t.name + "': stage " + std::to_string(r) + " row " +
                              std::to_string(j + 1) + " has length " + std::to_string(row.size()) +
                              ", expected " + std::to_string(t.stages));
      }
      for (int k = r; k <= t.stages; ++k) {
        if (row[k - 1] != 0.0) {
          throw StructuralError("tableau '" + t.name + "': stage " + std::to_string(r) +
                                " row " + std::to_string(j + 1) +
                                " references f_" + std::to_string(k) + " (not explicit)");
        }
      }
    }
  }
  if (t.beta.empty()) {
    throw StructuralError("tableau '" + t.name + "': no update rows");
  }
  for (std::size_t j = 0; j < t.beta.size(); ++j) {
    if (static_cast<int>(t.beta[j].size()) != t.stages) {
      throw StructuralError("tableau '" + t.name + "': update row " + std::to_string(j + 1) +
                            " has length " + std::to_string(t.beta[j].size()) + ", expected " +
                            std::to_string(t.stages));
    }
  }
  const int hat_len = t.row_length(Part::Embedded);
  for (std::size_t j = 0; j < t.beta_hat.size(); ++j) {
    if (static_cast<int>(t.beta_hat[j].size()) != hat_len) {
      throw StructuralError("tableau '" + t.name + "': embedded row " + std::to_string(j + 1) +
                            " has length " + std::to_string(t.beta_hat[j].size()) +
                            ", expected " + std::to_string(hat_len));
    }
  }
  for (const auto& [lhs, rhs] : t.reuse) {
    const Row& a = t.row(lhs);
    const Row& b = t.row(rhs);
    if (!rows_identical(a, b, kReuseTolerance)) {
      throw StructuralError("tableau '" + t.name + "': reuse pair " + to_string(lhs) + " = " +
                            to_string(rhs) + " is not elementwise identical");
    }
  }
}

}  // namespace

std::string to_string(const RowRef& ref) {
  std::ostringstream os;
  switch (ref.part) {
    case Part::Stage: os << "stage" << ref.stage << '.' << ref.row; break;
    case Part::Update: os << "y." << ref.row; break;
    case Part::Embedded: os << "yhat." << ref.row; break;
  }
  return os.str();
}

const Row& CFTableau::row(const RowRef& ref) const {
  const std::vector<Row>* block = nullptr;
  switch (ref.part) {
    case Part::Stage:
      if (ref.stage < 2 || ref.stage > stages || ref.stage > static_cast<int>(alpha.size())) {
        throw StructuralError("tableau '" + name + "': no stage " + std::to_string(ref.stage));
      }
      block = &alpha[ref.stage - 1];
      break;
    case Part::Update: block = &beta; break;
    case Part::Embedded: block = &beta_hat; break;
  }
  if (ref.row < 1 || ref.row > static_cast<int>(block->size())) {
    throw StructuralError("tableau '" + name + "': no row " + to_string(ref));
  }
  return (*block)[ref.row - 1];
}

int CFTableau::row_length(Part part) const {
  return (part == Part::Embedded && fsal) ? stages + 1 : stages;
}

bool rows_identical(const Row& a, const Row& b, double tol) {
  const std::size_t n = std::max(a.size(), b.size());
  for (std::size_t k = 0; k < n; ++k) {
    const double x = k < a.size() ? a[k] : 0.0;
    const double y = k < b.size() ? b[k] : 0.0;
    if (std::abs(x - y) > tol) return false;
  }
  return true;
}

void validate_structure(const CFTableau& tableau) { check_structure(tableau); }

void validate(const CFTableau& tableau) {
  check_structure(tableau);
  const ReducedCoefficients reduced = reduce(tableau);
  const double tol = tableau.printed_decimal ? kConsistencyTolerance : 1e-13;
  if (std::abs(reduced.b.sum() - 1.0) > tol) {
    throw StructuralError("tableau '" + tableau.name + "': update weights sum to " +
                          std::to_string(reduced.b.sum()) + ", not 1");
  }
}

ReducedCoefficients reduce(const CFTableau& t) {
  check_structure(t);
  const int s = t.stages;
  ReducedCoefficients out;
  out.a = Eigen::MatrixXd::Zero(s, s);
  for (int r = 2; r <= s; ++r) {
    for (const Row& row : t.alpha[r - 1]) {
      for (int k = 0; k < s; ++k) out.a(r - 1, k) += row[k];
    }
  }
  out.b = Eigen::VectorXd::Zero(s);
  for (const Row& row : t.beta) {
    for (int k = 0; k < s; ++k) out.b(k) += row[k];
  }
  if (t.is_pair()) {
    const int n = t.row_length(Part::Embedded);
    out.b_hat = Eigen::VectorXd::Zero(n);
    for (const Row& row : t.beta_hat) {
      for (int k = 0; k < n; ++k) out.b_hat(k) += row[k];
    }
  }
  out.c = Eigen::VectorXd::Zero(s);
  for (int r = 0; r < s; ++r) {
    for (int k = 0; k < s; ++k) out.c(r) += out.a(r, k);
  }
  return out;
}

ClassicalMethod principal_method(const ReducedCoefficients& reduced) {
  return {reduced.a, reduced.b, reduced.c};
}

ClassicalMethod embedded_method(const ReducedCoefficients& reduced) {
  const auto s = reduced.a.rows();
  if (reduced.b_hat.size() == s) return {reduced.a, reduced.b_hat, reduced.c};
  if (reduced.b_hat.size() != s + 1) {
    throw StructuralError("embedded weights have unexpected length");
  }
  ClassicalMethod m;
  m.a = Eigen::MatrixXd::Zero(s + 1, s + 1);
  m.a.topLeftCorner(s, s) = reduced.a;
  m.a.block(s, 0, 1, s) = reduced.b.transpose();
  m.c = Eigen::VectorXd::Zero(s + 1);
  m.c.head(s) = reduced.c;
  double sum_b = 0.0;
  for (Eigen::Index k = 0; k < s; ++k) sum_b += reduced.b(k);
  m.c(s) = sum_b;
  m.b = reduced.b_hat;
  return m;
}

std::vector<RowRef> all_rows(const CFTableau& t) {
  std::vector<RowRef> out;
  for (int r = 2; r <= t.stages && r <= static_cast<int>(t.alpha.size()); ++r) {
    for (std::size_t j = 0; j < t.alpha[r - 1].size(); ++j) {
      out.push_back({Part::Stage, r, static_cast<int>(j) + 1});
    }
  }
  for (std::size_t j = 0; j < t.beta.size(); ++j) {
    out.push_back({Part::Update, 0, static_cast<int>(j) + 1});
  }
  for (std::size_t j = 0; j < t.beta_hat.size(); ++j) {
    out.push_back({Part::Embedded, 0, static_cast<int>(j) + 1});
  }
  return out;
}

}  // namespace cfree
