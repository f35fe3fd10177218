#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "cfree/tableau.hpp"

namespace cfree {

/// Named tableaux: cf4, cf32a, cf32b, cf43, cf43_decimal, cf43_v2, cf43_4stage.
std::vector<CFTableau> catalog();

/// Catalog lookup by name; throws InputError listing the known names.
CFTableau find_tableau(std::string_view name);

/// Reuse patterns of the one-parameter 3(2) families. Each name says which
/// earlier stage's exponential is shared with which row of the update.
enum class Cf32Variant {
  ThirdStageInUpdateRow2,   ///< omega: 36z^2 + (9a-30)z + 3a + 1
  ThirdStageInUpdateRow1,   ///< nu:    36z^2 + (9a-6)z - 3a + 1
  SecondStageInUpdateRow1,  ///< gamma: 4a(3a-1)z^2 + 4(3a-1)z + 3
  SecondStageInUpdateRow2,  ///< delta: 4az^2 + (12a-2)z + 9a + 6
};

std::string_view to_string(Cf32Variant v);
Cf32Variant parse_cf32_variant(std::string_view name);

enum class RootChoice { SmallerMagnitude, Other };

struct Cf32Options {
  RootChoice root = RootChoice::SmallerMagnitude;
  /// Values of the free embedded weights b_hat^1 and b_hat^3; b_hat^2 and the
  /// f(y1) weight follow from sum(b_hat) = 1 and b_hat.c = 1/2.
  std::array<double, 2> hat_params{0.0, 0.0};
};

/// Root of the variant's defining quadratic at parameter a. Throws
/// DomainError (naming the discriminant) when the roots are complex.
double cf32_family_root(double a, Cf32Variant variant, RootChoice choice);

/// Discriminant of the variant's defining quadratic.
double cf32_family_discriminant(double a, Cf32Variant variant);

/// FSAL 3(2) pair from the given family. Throws DomainError for complex
/// roots and SingularParameterError for vanishing denominators or when the
/// order conditions cannot be met (coincident abscissae).
CFTableau instantiate_cf32_family(double a, Cf32Variant variant, const Cf32Options& options = {});

/// Unique real root of 144z^5 + 90z^4 - 3z^3 - 13z^2 - 5z - 1, in extended precision.
long double cf43_omega();

/// Exact-coefficient 4(3) FSAL pair. The second embedded row is the member
/// of its one-parameter family with b_hat_2^3 = hat_parameter.
CFTableau instantiate_cf43(double hat_parameter = 0.0);

/// Every pair of distinct nonzero rows that is elementwise identical within `tol`.
std::vector<ReusePair> scan_identical_rows(const CFTableau& tableau, double tol);

}  // namespace cfree
