#include "cfree/tableau_json.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cfree/errors.hpp"

namespace cfree {
namespace {

using nlohmann::json;

json row_to_json(const Row& row) {
  json out = json::array();
  for (double v : row) out.push_back(format_double(v));
  return out;
}

double parse_number(const json& value, const std::string& where) {
  if (value.is_number()) return value.get<double>();
  if (value.is_string()) {
    const auto& text = value.get_ref<const std::string&>();
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
      throw InputError(where + ": '" + text + "' is not a decimal number");
    }
    return out;
  }
  throw InputError(where + ": expected a number or decimal string");
}

Row row_from_json(const json& value, const std::string& where) {
  if (!value.is_array()) throw InputError(where + ": expected an array of coefficients");
  Row row;
  for (std::size_t k = 0; k < value.size(); ++k) {
    row.push_back(parse_number(value[k], where + "[" + std::to_string(k) + "]"));
  }
  return row;
}

std::vector<Row> rows_from_json(const json& value, const std::string& where) {
  if (!value.is_array()) throw InputError(where + ": expected an array of rows");
  std::vector<Row> rows;
  for (std::size_t j = 0; j < value.size(); ++j) {
    rows.push_back(row_from_json(value[j], where + "[" + std::to_string(j) + "]"));
  }
  return rows;
}

const json& field(const json& doc, const char* key) {
  const auto it = doc.find(key);
  if (it == doc.end()) throw InputError(std::string("tableau JSON: missing field '") + key + "'");
  return *it;
}

}  // namespace

std::string format_double(double value) {
  char buf[40];
  const int n = std::snprintf(buf, sizeof buf, "%.17g", value);
  return std::string(buf, static_cast<std::size_t>(n));
}

RowRef parse_row_ref(std::string_view text) {
  auto parse_int = [&](std::string_view digits) {
    int v = 0;
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
    if (ec != std::errc() || ptr != digits.data() + digits.size()) {
      throw InputError("bad row reference '" + std::string(text) + "'");
    }
    return v;
  };
  const auto dot = text.rfind('.');
  if (dot == std::string_view::npos) throw InputError("bad row reference '" + std::string(text) + "'");
  const std::string_view head = text.substr(0, dot);
  const int row = parse_int(text.substr(dot + 1));
  if (head == "y") return {Part::Update, 0, row};
  if (head == "yhat") return {Part::Embedded, 0, row};
  if (head.substr(0, 5) == "stage") return {Part::Stage, parse_int(head.substr(5)), row};
  throw InputError("bad row reference '" + std::string(text) + "'");
}

std::string write_tableau_json(const CFTableau& t, int indent) {
  json doc;
  doc["name"] = t.name;
  doc["s"] = t.stages;
  json alpha = json::array();
  for (int r = 2; r <= t.stages; ++r) {
    json rows = json::array();
    for (const Row& row : t.alpha[static_cast<std::size_t>(r - 1)]) rows.push_back(row_to_json(row));
    alpha.push_back(rows);
  }
  doc["alpha"] = alpha;
  doc["beta"] = json::array();
  for (const Row& row : t.beta) doc["beta"].push_back(row_to_json(row));
  doc["beta_hat"] = json::array();
  for (const Row& row : t.beta_hat) doc["beta_hat"].push_back(row_to_json(row));
  doc["order_p"] = t.order;
  doc["order_phat"] = t.embedded_order;
  doc["fsal"] = t.fsal;
  doc["reuse_map"] = json::array();
  for (const auto& [lhs, rhs] : t.reuse) {
    doc["reuse_map"].push_back(json::array({to_string(lhs), to_string(rhs)}));
  }
  doc["printed_decimal"] = t.printed_decimal;
  return doc.dump(indent);
}

CFTableau read_tableau_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw InputError("tableau JSON: syntax error at byte " + std::to_string(e.byte) + ": " + e.what());
  }
  if (!doc.is_object()) throw InputError("tableau JSON: top level must be an object");

  CFTableau t;
  try {
    t.name = field(doc, "name").get<std::string>();
    t.stages = field(doc, "s").get<int>();
    if (t.stages < 1) throw InputError("tableau JSON: 's' must be positive");
    const json& alpha = field(doc, "alpha");
    if (!alpha.is_array()) throw InputError("tableau JSON: 'alpha' must be an array");
    // Accept either s-1 blocks (stages 2..s) or s blocks with an empty first stage.
    std::size_t offset = 0;
    if (alpha.size() == static_cast<std::size_t>(t.stages)) {
      if (!alpha[0].empty()) throw InputError("tableau JSON: stage 1 cannot have rows");
      offset = 1;
    } else if (alpha.size() != static_cast<std::size_t>(t.stages - 1)) {
      throw InputError("tableau JSON: 'alpha' has " + std::to_string(alpha.size()) +
                       " stage blocks, expected " + std::to_string(t.stages - 1));
    }
    t.alpha.assign(1, {});
    for (std::size_t r = offset; r < alpha.size(); ++r) {
      t.alpha.push_back(rows_from_json(alpha[r], "alpha[" + std::to_string(r) + "]"));
    }
    t.beta = rows_from_json(field(doc, "beta"), "beta");
    if (doc.contains("beta_hat")) t.beta_hat = rows_from_json(doc["beta_hat"], "beta_hat");
    t.order = field(doc, "order_p").get<int>();
    t.embedded_order = doc.value("order_phat", 0);
    t.fsal = doc.value("fsal", false);
    t.printed_decimal = doc.value("printed_decimal", false);
    if (doc.contains("reuse_map")) {
      for (const json& pair : doc["reuse_map"]) {
        if (!pair.is_array() || pair.size() != 2) {
          throw InputError("tableau JSON: reuse_map entries must be pairs");
        }
        t.reuse.emplace_back(parse_row_ref(pair[0].get<std::string>()),
                             parse_row_ref(pair[1].get<std::string>()));
      }
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("tableau JSON: ") + e.what());
  }
  validate_structure(t);
  return t;
}

CFTableau load_tableau_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open tableau file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return read_tableau_json(buf.str());
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

void save_tableau_file(const CFTableau& tableau, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write tableau file '" + path.string() + "'");
  out << write_tableau_json(tableau) << '\n';
}

}  // namespace cfree
