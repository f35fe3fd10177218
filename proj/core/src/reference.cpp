#include "cfree/reference.hpp"

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include "cfree/tableau_json.hpp"

namespace cfree {

std::string content_hash(const std::string& text) {
  std::uint64_t h = 14695981039346656037ULL;
  for (const unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::optional<std::filesystem::path> reference_cache_dir() {
  if (const char* env = std::getenv("CFREE_CACHE_DIR")) {
    const std::string v = env;
    if (v == "off" || v.empty()) return std::nullopt;
    return std::filesystem::path(v);
  }
  std::error_code ec;
  auto tmp = std::filesystem::temp_directory_path(ec);
  if (ec) return std::nullopt;
  return tmp / "cfree-reference-cache";
}

std::string reference_key(const std::string& problem, const std::map<std::string, double>& params,
                          const std::vector<double>& y0, double t0, double t1,
                          const ReferenceSpec& spec) {
  std::ostringstream out;
  out << "problem=" << problem << '\n';
  for (const auto& [k, v] : params) out << k << '=' << format_double(v) << '\n';
  out << "y0=";
  for (double v : y0) out << format_double(v) << ' ';
  out << "\nspan=" << format_double(t0) << ' ' << format_double(t1) << '\n';
  out << "reference=" << static_cast<int>(spec.kind) << ' ' << format_double(spec.tol) << ' '
      << format_double(spec.hmax) << ' ' << format_double(spec.steps_per_unit) << '\n';
  return out.str();
}

std::optional<std::vector<double>> read_reference_cache(const std::filesystem::path& dir,
                                                        const std::string& key) {
  std::ifstream in(dir / (content_hash(key) + ".ref"));
  if (!in) return std::nullopt;
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  // The file repeats the key so that hash collisions are detected.
  const auto sep = text.find("---\n");
  if (sep == std::string::npos || text.compare(0, sep, key) != 0) return std::nullopt;
  std::istringstream values(text.substr(sep + 4));
  std::vector<double> out;
  std::string token;
  while (values >> token) {
    try {
      out.push_back(std::stod(token));
    } catch (...) {
      return std::nullopt;
    }
  }
  if (out.empty()) return std::nullopt;
  return out;
}

void write_reference_cache(const std::filesystem::path& dir, const std::string& key,
                           const std::vector<double>& values) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) return;
  const auto final_path = dir / (content_hash(key) + ".ref");
  const auto tmp_path = dir / (content_hash(key) + ".ref.tmp" + std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id())));
  {
    std::ofstream out(tmp_path);
    if (!out) return;
    out << key << "---\n";
    for (double v : values) out << format_double(v) << '\n';
    if (!out) return;
  }
  std::filesystem::rename(tmp_path, final_path, ec);
  if (ec) std::filesystem::remove(tmp_path, ec);
}

}  // namespace cfree
