#include "cfree/catalog.hpp"

#include <cmath>
#include <functional>
#include <sstream>

#include <Eigen/Dense>

#include "cfree/errors.hpp"

namespace cfree {
namespace {

using LMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
using LVector = Eigen::Matrix<long double, Eigen::Dynamic, 1>;

Row padded(std::initializer_list<double> values, int length) {
  Row row(values);
  row.resize(static_cast<std::size_t>(length), 0.0);
  return row;
}

RowRef stage_row(int stage, int row) { return {Part::Stage, stage, row}; }
RowRef update_row(int row) { return {Part::Update, 0, row}; }
RowRef embedded_row(int row) { return {Part::Embedded, 0, row}; }

void require_nonzero(double value, const char* what) {
  if (value == 0.0 || !std::isfinite(value)) {
    throw SingularParameterError(std::string("cf32 family: ") + what + " vanishes");
  }
}

// Solves for the free entries of one row of a two-row update block so that
// sum(b) = 1, b.c = 1/2, b.c^2 = 1/3, b.A.c = 1/6 and
// beta1.c + sum(beta2)/2 = 1/3 hold, where b is the sum of both rows.
// Entries of `unknown_row` outside `free` keep their given values. The
// system is solved in the least-squares sense and the residual is verified.
Row solve_order3_row(const Eigen::MatrixXd& a, const Eigen::VectorXd& c, const Row& other_row,
                     Row unknown_row, bool unknown_is_first, const std::vector<int>& free,
                     const std::string& who) {
  const auto n = static_cast<Eigen::Index>(c.size());
  LVector cl = c.cast<long double>();
  LVector ac = a.cast<long double>() * cl;
  LMatrix functionals(4, n);
  LVector targets(5);
  for (Eigen::Index k = 0; k < n; ++k) {
    functionals(0, k) = 1.0L;
    functionals(1, k) = cl(k);
    functionals(2, k) = cl(k) * cl(k);
    functionals(3, k) = ac(k);
  }
  targets << 1.0L, 0.5L, 1.0L / 3.0L, 1.0L / 6.0L, 1.0L / 3.0L;

  LVector other(n), fixed(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    other(k) = other_row[static_cast<std::size_t>(k)];
    fixed(k) = unknown_row[static_cast<std::size_t>(k)];
  }
  for (int k : free) fixed(k) = 0.0L;

  // Rows 0..3: functional . (other + fixed + x) = target.
  // Row 4: the two-exponential order-3 condition, linear in x through beta1 or beta2.
  const auto m = static_cast<Eigen::Index>(free.size());
  LMatrix system(5, m);
  LVector rhs(5);
  for (int i = 0; i < 4; ++i) {
    rhs(i) = targets(i) - functionals.row(i).dot(other + fixed);
    for (Eigen::Index j = 0; j < m; ++j) system(i, j) = functionals(i, free[static_cast<std::size_t>(j)]);
  }
  if (unknown_is_first) {
    // beta1 = fixed + x, beta2 = other
    rhs(4) = targets(4) - cl.dot(fixed) - other.sum() / 2.0L;
    for (Eigen::Index j = 0; j < m; ++j) system(4, j) = cl(free[static_cast<std::size_t>(j)]);
  } else {
    // beta1 = other, beta2 = fixed + x
    rhs(4) = targets(4) - cl.dot(other) - fixed.sum() / 2.0L;
    for (Eigen::Index j = 0; j < m; ++j) system(4, j) = 0.5L;
  }
  const LVector x = system.completeOrthogonalDecomposition().solve(rhs);
  const long double residual = (system * x - rhs).cwiseAbs().maxCoeff();
  if (!(residual < 1e-12L)) {
    std::ostringstream os;
    os << who << ": order-3 conditions cannot be satisfied (residual " << static_cast<double>(residual)
       << "); abscissae are probably coincident";
    throw SingularParameterError(os.str());
  }
  for (Eigen::Index j = 0; j < m; ++j) {
    unknown_row[static_cast<std::size_t>(free[static_cast<std::size_t>(j)])] = static_cast<double>(x(j));
  }
  return unknown_row;
}

struct Quadratic {
  double a2, a1, a0;
};

Quadratic family_quadratic(double a, Cf32Variant v) {
  switch (v) {
    case Cf32Variant::ThirdStageInUpdateRow2: return {36.0, 9.0 * a - 30.0, 3.0 * a + 1.0};
    case Cf32Variant::ThirdStageInUpdateRow1: return {36.0, 9.0 * a - 6.0, -3.0 * a + 1.0};
    case Cf32Variant::SecondStageInUpdateRow1:
      return {4.0 * a * (3.0 * a - 1.0), 4.0 * (3.0 * a - 1.0), 3.0};
    case Cf32Variant::SecondStageInUpdateRow2: return {4.0 * a, 12.0 * a - 2.0, 9.0 * a + 6.0};
  }
  throw DomainError("unknown cf32 variant");
}

std::string family_name(double a, Cf32Variant v, RootChoice root) {
  std::ostringstream os;
  os.precision(17);
  os << "cf32[" << to_string(v) << ",a=" << a << (root == RootChoice::Other ? ",other-root" : "")
     << "]";
  return os.str();
}

CFTableau make_cf4() {
  CFTableau t;
  t.name = "cf4";
  t.stages = 4;
  t.alpha = {{},
             {padded({0.5}, 4)},
             {padded({0.0, 0.5}, 4)},
             {padded({0.5, 0.0, 0.0}, 4), padded({-0.5, 0.0, 1.0}, 4)}};
  t.beta = {{1.0 / 4.0, 1.0 / 6.0, 1.0 / 6.0, -1.0 / 12.0},
            {-1.0 / 12.0, 1.0 / 6.0, 1.0 / 6.0, 1.0 / 4.0}};
  t.order = 4;
  t.embedded_order = 0;
  t.reuse = {{stage_row(2, 1), stage_row(4, 1)}};
  return t;
}

CFTableau make_cf32(std::string name, double c2, Row stage3, Row update1) {
  CFTableau t;
  t.name = std::move(name);
  t.stages = 3;
  t.fsal = true;
  stage3.resize(3, 0.0);
  t.alpha = {{}, {padded({c2}, 3)}, {stage3}};
  t.beta = {std::move(update1), stage3};
  t.beta_hat = {{0.0, 3.0 / 4.0, 0.0, 1.0 / 4.0}};
  t.order = 3;
  t.embedded_order = 2;
  t.reuse = {{stage_row(3, 1), update_row(2)}};
  return t;
}

CFTableau make_cf43_decimal() {
  CFTableau t;
  t.name = "cf43_decimal";
  t.stages = 4;
  t.fsal = true;
  t.printed_decimal = true;
  t.alpha = {{},
             {padded({4.785707347}, 4)},
             {padded({.7701000600, .03922683443}, 4)},
             {padded({.7701000600, .03922683443, 0.0}, 4),
              padded({.6195164818, .06934556872, -.4981889449}, 4)}};
  t.beta = {{.4211354919, -.005776103764, -.1381183969, .2227590088},
            {-.1403784973, .006491728470, 1.302163795, -.6682770264}};
  t.beta_hat = {{.6195164818, .06934556872, -.4981889449, 0.0, 0.0},
                {-0.075415454, -0.082788288, 0.0, .5828295568, .3847010797}};
  t.order = 4;
  t.embedded_order = 3;
  t.reuse = {{stage_row(3, 1), stage_row(4, 1)}, {stage_row(4, 2), embedded_row(1)}};
  return t;
}

CFTableau make_cf43_v2() {
  CFTableau t;
  t.name = "cf43_v2";
  t.stages = 4;
  t.fsal = true;
  t.printed_decimal = true;
  t.alpha = {{},
             {padded({.67104050}, 4)},
             {padded({2.547687640, -1.355037274}, 4)},
             {padded({2.547687640, -1.355037274, 0.0}, 4),
              padded({-.21944181, -0.0735967, .1003880}, 4)}};
  t.beta = {{.324015249, .15832891, -.21057643, .2282322824},
            {-.108005081, .84426683, .44843513, -.6846968472}};
  // yhat rows in application order; the reverse order violates the
  // two-exponential order-3 condition.
  t.beta_hat = {{.45603817, .93310478, 0.0, -.2660264, 0.06953371},
                {-.21944181, -0.0735967, .1003880, 0.0, 0.0}};
  t.order = 4;
  t.embedded_order = 3;
  t.reuse = {{stage_row(3, 1), stage_row(4, 1)}, {stage_row(4, 2), embedded_row(2)}};
  return t;
}

CFTableau make_cf43_4stage() {
  CFTableau t;
  t.name = "cf43_4stage";
  t.stages = 4;
  t.fsal = false;
  t.printed_decimal = true;
  t.alpha = {{},
             {padded({1.351207192}, 4)},
             {padded({0.5, 0.097900176}, 4)},
             {padded({0.5, 0.097900176, 0.0}, 4),
              padded({7.900943678, 2.989500877, -10.48834473}, 4)}};
  t.beta = {{.301574869, -0.054881885, .238291289, 0.01501572796},
            {-.1005249562, .1005249562, .5450471839, -0.04504718389}};
  t.beta_hat = {{0.5, 0.097900176, 0.0, 0.0},
                {-.2989500877, -0.0522571042, .783338473, -0.03003145592}};
  t.order = 4;
  t.embedded_order = 3;
  t.reuse = {{stage_row(3, 1), stage_row(4, 1)}, {stage_row(3, 1), embedded_row(1)}};
  return t;
}

}  // namespace

std::string_view to_string(Cf32Variant v) {
  switch (v) {
    case Cf32Variant::ThirdStageInUpdateRow2: return "stage3-in-update-row2";
    case Cf32Variant::ThirdStageInUpdateRow1: return "stage3-in-update-row1";
    case Cf32Variant::SecondStageInUpdateRow1: return "stage2-in-update-row1";
    case Cf32Variant::SecondStageInUpdateRow2: return "stage2-in-update-row2";
  }
  return "unknown";
}

Cf32Variant parse_cf32_variant(std::string_view name) {
  for (auto v : {Cf32Variant::ThirdStageInUpdateRow2, Cf32Variant::ThirdStageInUpdateRow1,
                 Cf32Variant::SecondStageInUpdateRow1, Cf32Variant::SecondStageInUpdateRow2}) {
    if (to_string(v) == name) return v;
  }
  throw InputError("unknown cf32 variant '" + std::string(name) + "'");
}

double cf32_family_discriminant(double a, Cf32Variant variant) {
  const Quadratic q = family_quadratic(a, variant);
  return q.a1 * q.a1 - 4.0 * q.a2 * q.a0;
}

double cf32_family_root(double a, Cf32Variant variant, RootChoice choice) {
  const Quadratic q = family_quadratic(a, variant);
  if (q.a2 == 0.0) {
    // Degenerate: a single root of the linear equation.
    if (q.a1 == 0.0) {
      throw SingularParameterError("cf32 family: defining polynomial is constant at a = " +
                                   std::to_string(a));
    }
    return -q.a0 / q.a1;
  }
  const double disc = q.a1 * q.a1 - 4.0 * q.a2 * q.a0;
  if (disc < 0.0) {
    std::ostringstream os;
    os << "cf32 family " << to_string(variant) << ": discriminant " << disc << " < 0 at a = " << a
       << " (complex roots)";
    throw DomainError(os.str());
  }
  // Cancellation-free pair of roots.
  const double q_half = -0.5 * (q.a1 + std::copysign(std::sqrt(disc), q.a1));
  double r1 = q_half / q.a2;
  double r2 = q_half != 0.0 ? q.a0 / q_half : r1;
  if (std::abs(r2) < std::abs(r1)) std::swap(r1, r2);
  return choice == RootChoice::SmallerMagnitude ? r1 : r2;
}

CFTableau instantiate_cf32_family(double a, Cf32Variant variant, const Cf32Options& options) {
  const double z = cf32_family_root(a, variant, options.root);
  double c2 = 0.0;
  Row stage3, update1, update2;
  RowRef reused_stage, reused_update;

  switch (variant) {
    case Cf32Variant::ThirdStageInUpdateRow2: {
      require_nonzero(a, "a");
      const double w = z;
      c2 = a;
      stage3 = {(6.0 * a * w - 3.0 * w - a) / (3.0 * a), w / a, 0.0};
      update2 = stage3;
      reused_stage = stage_row(3, 1);
      reused_update = update_row(2);
      break;
    }
    case Cf32Variant::ThirdStageInUpdateRow1: {
      require_nonzero(a, "a");
      require_nonzero(3.0 * a - 1.0, "3a - 1");
      const double v = z;
      c2 = a;
      stage3 = {(6.0 * a * v - 3.0 * v + a) / (3.0 * a), v / a, 0.0};
      update1 = stage3;
      update2 = {(-12.0 * a * v - 6.0 * v + a + 1.0) / (6.0 * a),
                 (-18.0 * a * v - 6.0 * v + 1.0) / (6.0 * a * (3.0 * a - 1.0)),
                 (12.0 * v + 3.0 * a - 2.0) / (2.0 * (3.0 * a - 1.0))};
      reused_stage = stage_row(3, 1);
      reused_update = update_row(1);
      break;
    }
    case Cf32Variant::SecondStageInUpdateRow1: {
      const double g = z;
      require_nonzero(g, "gamma");
      c2 = 1.0 / 3.0;
      stage3 = {a, 1.0 / (2.0 * g), 0.0};
      update1 = {1.0 / 3.0, 0.0, 0.0};
      update2 = {(3.0 * a - 1.0) * g + 2.0 / 3.0, -3.0 * a * g, g};
      reused_stage = stage_row(2, 1);
      reused_update = update_row(1);
      break;
    }
    case Cf32Variant::SecondStageInUpdateRow2: {
      require_nonzero(a, "a");
      const double d = z;
      c2 = -1.0 / 3.0;
      stage3 = {-2.0 * a * d / 3.0 - 2.0 * a, a, 0.0};
      update1 = {(-6.0 * a * d + 8.0 * a + 3.0) / (6.0 * a), d, -1.0 / (2.0 * a)};
      update2 = {-1.0 / 3.0, 0.0, 0.0};
      reused_stage = stage_row(2, 1);
      reused_update = update_row(2);
      break;
    }
  }

  CFTableau t;
  t.name = family_name(a, variant, options.root);
  t.stages = 3;
  t.fsal = true;
  t.order = 3;
  t.embedded_order = 2;
  t.alpha = {{}, {padded({c2}, 3)}, {stage3}};

  if (variant == Cf32Variant::ThirdStageInUpdateRow2) {
    // The non-reused row follows from the order-3 conditions.
    Eigen::MatrixXd am = Eigen::MatrixXd::Zero(3, 3);
    am(1, 0) = c2;
    am(2, 0) = stage3[0];
    am(2, 1) = stage3[1];
    const Eigen::VectorXd c = am.rowwise().sum();
    update1 = solve_order3_row(am, c, update2, Row(3, 0.0), true, {0, 1, 2}, t.name);
  }
  t.beta = {update1, update2};

  const double c3 = stage3[0] + stage3[1];
  const double p1 = options.hat_params[0];
  const double p3 = options.hat_params[1];
  if (c2 == 1.0) {
    throw SingularParameterError(t.name + ": c2 = 1 leaves the embedded weights undetermined");
  }
  const double x2 = (p1 + p3 - 0.5 - p3 * c3) / (c2 - 1.0);
  const double x4 = 1.0 - p1 - p3 - x2;
  t.beta_hat = {{p1, x2, p3, x4}};
  t.reuse = {{reused_stage, reused_update}};
  validate(t);
  return t;
}

long double cf43_omega() {
  auto poly = [](long double z) {
    return ((((144.0L * z + 90.0L) * z - 3.0L) * z - 13.0L) * z - 5.0L) * z - 1.0L;
  };
  auto dpoly = [](long double z) {
    return (((720.0L * z + 360.0L) * z - 9.0L) * z - 26.0L) * z - 5.0L;
  };
  long double lo = 0.0L, hi = 1.0L;
  if (!(poly(lo) < 0.0L && poly(hi) > 0.0L)) throw NumericalError("cf43_omega: root not bracketed");
  for (int i = 0; i < 200 && hi - lo > 0.0L; ++i) {
    const long double mid = 0.5L * (lo + hi);
    if (mid == lo || mid == hi) break;
    (poly(mid) < 0.0L ? lo : hi) = mid;
  }
  long double z = 0.5L * (lo + hi);
  for (int i = 0; i < 3; ++i) {
    const long double step = poly(z) / dpoly(z);
    if (!std::isfinite(static_cast<double>(step))) break;
    const long double next = z - step;
    if (next < lo || next > hi) break;
    z = next;
  }
  if (!(std::fabs(poly(z)) <= 1e-15L)) throw NumericalError("cf43_omega: root finder did not converge");
  return z;
}

CFTableau instantiate_cf43(double hat_parameter) {
  const long double w = cf43_omega();
  const long double w2 = w * w, w3 = w2 * w, w4 = w3 * w;
  auto d = [](long double v) { return static_cast<double>(v); };

  const double p1 = d((7.0L - 288.0L * w4 - 36.0L * w3 + 48.0L * w2 + 17.0L * w) / 2.0L);
  const double p2 = d((-389.0L + 31824.0L * w4 + 10962.0L * w3 - 3651.0L * w2 - 2027.0L * w) / 268.0L);
  const double p3 = d((54.0L - 2880.0L * w4 - 2520.0L * w3 + 234.0L * w2 + 553.0L * w) / 268.0L);
  const double p4 = d((-51696.0L * w4 - 13878.0L * w3 + 7557.0L * w2 + 2285.0L * w + 1244.0L) / 804.0L);
  const double p5 =
      d((-521424.0L * w4 - 323586.0L * w3 + 61119.0L * w2 + 61599.0L * w + 10976.0L) / 20100.0L);
  const double p6 = d((-5328.0L * w4 + 558.0L * w3 + 93.0L * w2 - 122.0L * w + 47.0L) / 300.0L);
  const long double p7l = (1008.0L * w4 - 1530.0L * w3 + 501.0L * w2 - 16.0L * w + 229.0L) / 536.0L;
  const double p7 = d(p7l);
  const double p8 =
      d((541872.0L * w4 + 76158.0L * w3 - 84207.0L * w2 - 19972.0L * w - 2703.0L) / 40200.0L);
  const double p9 = d((-2304.0L * w4 + 144.0L * w3 + 174.0L * w2 + 4.0L * w + 21.0L) / 150.0L);
  const double p10 =
      d((256752.0L * w4 + 67878.0L * w3 - 170787.0L * w2 - 10852.0L * w + 22877.0L) / 40200.0L);
  const double p11 = d((-864.0L * w4 - 396.0L * w3 + 684.0L * w2 + 264.0L * w + 11.0L) / 150.0L);

  CFTableau t;
  t.name = "cf43";
  t.stages = 4;
  t.fsal = true;
  t.order = 4;
  t.embedded_order = 3;
  t.alpha = {{},
             {padded({p1}, 4)},
             {padded({p2, p3}, 4)},
             {padded({p2, p3, 0.0}, 4), padded({p4, p5, p6}, 4)}};
  t.beta = {{p7, p8, p9, d(w / 2.0L)}, {d(-p7l / 3.0L), p10, p11, d(-3.0L * w / 2.0L)}};
  // The first embedded row repeats the second row of stage 4.
  const Row hat1 = {p4, p5, p6, 0.0, 0.0};
  t.beta_hat = {hat1};

  const ReducedCoefficients reduced = reduce(t);
  const ClassicalMethod ext = embedded_method(
      ReducedCoefficients{reduced.a, reduced.b, Eigen::VectorXd::Zero(5), reduced.c});
  Row hat2(5, 0.0);
  hat2[2] = hat_parameter;
  hat2 = solve_order3_row(ext.a, ext.c, hat1, hat2, false, {0, 1, 3, 4}, t.name);
  t.beta_hat.push_back(hat2);
  t.reuse = {{stage_row(3, 1), stage_row(4, 1)}, {stage_row(4, 2), embedded_row(1)}};
  validate(t);
  return t;
}

std::vector<CFTableau> catalog() {
  std::vector<CFTableau> out;
  out.push_back(make_cf4());
  out.push_back(make_cf32("cf32a", 1.0 / 3.0, {-1.0, 2.0}, {1.0, -5.0 / 4.0, 1.0 / 4.0}));
  out.push_back(make_cf32("cf32b", 1.0 / 3.0, {-5.0 / 12.0, 1.0 / 4.0},
                          {-37.0 / 12.0, 9.0 / 4.0, 2.0}));
  out.push_back(instantiate_cf43());
  out.push_back(make_cf43_decimal());
  out.push_back(make_cf43_v2());
  out.push_back(make_cf43_4stage());
  for (const auto& t : out) validate_structure(t);
  return out;
}

CFTableau find_tableau(std::string_view name) {
  std::string known;
  for (auto& t : catalog()) {
    if (t.name == name) return t;
    known += (known.empty() ? "" : ", ") + t.name;
  }
  throw InputError("unknown tableau '" + std::string(name) + "' (known: " + known + ")");
}

std::vector<ReusePair> scan_identical_rows(const CFTableau& tableau, double tol) {
  const std::vector<RowRef> refs = all_rows(tableau);
  std::vector<ReusePair> out;
  auto is_zero = [](const Row& r) {
    for (double v : r) {
      if (v != 0.0) return false;
    }
    return true;
  };
  for (std::size_t i = 0; i < refs.size(); ++i) {
    const Row& a = tableau.row(refs[i]);
    if (is_zero(a)) continue;
    for (std::size_t j = i + 1; j < refs.size(); ++j) {
      if (rows_identical(a, tableau.row(refs[j]), tol)) out.emplace_back(refs[i], refs[j]);
    }
  }
  return out;
}

}  // namespace cfree
