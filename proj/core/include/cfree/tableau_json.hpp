#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "cfree/tableau.hpp"

namespace cfree {

/// Serializes a tableau to the JSON exchange format. Coefficients are
/// written as decimal strings with 17 significant digits so that reading the
/// text back reproduces every double exactly.
///
///   { "name": "cf32a", "s": 3,
///     "alpha": [ [["0.333..", "0", "0"]], [["-1", "2", "0"]] ],   // stages 2..s
///     "beta": [[...], [...]], "beta_hat": [[...]],
///     "order_p": 3, "order_phat": 2, "fsal": true,
///     "reuse_map": [["stage3.1", "y.2"]], "printed_decimal": false }
std::string write_tableau_json(const CFTableau& tableau, int indent = 2);

/// Parses the exchange format. Coefficients may be JSON numbers or decimal
/// strings. Throws InputError (with the byte offset for syntax errors) or
/// StructuralError when the tableau is malformed. Consistency (sum(b) = 1)
/// is left to the order-condition checks so that perturbed tableaux load.
CFTableau read_tableau_json(std::string_view text);

CFTableau load_tableau_file(const std::filesystem::path& path);
void save_tableau_file(const CFTableau& tableau, const std::filesystem::path& path);

/// Parses "stage3.1", "y.2" or "yhat.1".
RowRef parse_row_ref(std::string_view text);

/// Shortest-roundtrip-safe decimal text ("%.17g").
std::string format_double(double value);

}  // namespace cfree
