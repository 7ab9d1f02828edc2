#include "tropikam/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <system_error>

#include <json.hpp>

namespace tropikam {

// ---------------------------------------------------------------------------
// Lagrangians

void LagrangianSpec::validate() const {
  if (grid_size < 2) throw PreconditionError("LagrangianSpec: N must be at least 2");
  if (substeps < 1) throw PreconditionError("LagrangianSpec: K must be at least 1");
  if (!(kinetic > 0.0) || !std::isfinite(kinetic))
    throw PreconditionError("LagrangianSpec: kinetic coefficient must be positive");
  if (!std::isfinite(eps1) || !std::isfinite(eps2))
    throw PreconditionError("LagrangianSpec: potential amplitudes must be finite");
}

double LagrangianSpec::potential_at(double x, double t) const {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  switch (potential) {
    case PotentialKind::zero:
      return 0.0;
    case PotentialKind::pendulum:
      return eps1 * std::cos(two_pi * x);
    case PotentialKind::two_harmonic:
      return eps1 * std::cos(two_pi * x) + eps2 * std::cos(two_pi * (2.0 * x - t));
  }
  return 0.0;
}

double LagrangianSpec::lagrangian(double x, double v, double t) const {
  return 0.5 * kinetic * v * v - potential_at(x, t);
}

namespace {

double parse_double(std::string_view s, std::string_view what) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
    throw PreconditionError("lagrangian: bad number '" + std::string(s) + "' for " +
                            std::string(what));
  return v;
}

std::size_t parse_count(std::string_view s, std::string_view what) {
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw PreconditionError("lagrangian: bad integer '" + std::string(s) + "' for " +
                            std::string(what));
  return v;
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Shortest text that parses back to the same double.
std::string shortest(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, res.ptr};
}

}  // namespace

LagrangianSpec parse_lagrangian(std::string_view text) {
  LagrangianSpec spec;
  const auto colon = text.find(':');
  const std::string_view kind = text.substr(0, colon);
  if (kind == "pendulum") {
    spec.potential = PotentialKind::pendulum;
  } else if (kind == "two-harmonic" || kind == "two_harmonic") {
    spec.potential = PotentialKind::two_harmonic;
    spec.eps2 = 0.05;
  } else if (kind == "zero" || kind == "free") {
    spec.potential = PotentialKind::zero;
    spec.eps1 = 0.0;
  } else {
    throw PreconditionError("lagrangian: unknown potential '" + std::string(kind) +
                            "' (expected pendulum, two-harmonic or free)");
  }
  std::string_view rest = colon == std::string_view::npos ? std::string_view{}
                                                          : text.substr(colon + 1);
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const std::string_view item = rest.substr(0, comma);
    rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    const auto eq = item.find('=');
    if (eq == std::string_view::npos)
      throw PreconditionError("lagrangian: expected key=value, got '" + std::string(item) + "'");
    const std::string_view key = item.substr(0, eq);
    const std::string_view value = item.substr(eq + 1);
    if (key == "N") {
      spec.grid_size = parse_count(value, key);
    } else if (key == "K") {
      spec.substeps = parse_count(value, key);
    } else if (key == "eps" || key == "eps1") {
      spec.eps1 = parse_double(value, key);
    } else if (key == "eps2") {
      spec.eps2 = parse_double(value, key);
    } else if (key == "m") {
      spec.kinetic = parse_double(value, key);
    } else {
      throw PreconditionError("lagrangian: unknown key '" + std::string(key) + "'");
    }
  }
  if (spec.potential == PotentialKind::zero && (spec.eps1 != 0.0 || spec.eps2 != 0.0))
    throw PreconditionError("lagrangian: the free particle takes no amplitudes");
  spec.validate();
  return spec;
}

std::string to_string(const LagrangianSpec& spec) {
  std::string out;
  switch (spec.potential) {
    case PotentialKind::zero:
      out = "free:";
      break;
    case PotentialKind::pendulum:
      out = "pendulum:eps=" + shortest(spec.eps1) + ",";
      break;
    case PotentialKind::two_harmonic:
      out = "two-harmonic:eps1=" + shortest(spec.eps1) + ",eps2=" +
            shortest(spec.eps2) + ",";
      break;
  }
  return out + "N=" + std::to_string(spec.grid_size) + ",K=" + std::to_string(spec.substeps) +
         ",m=" + shortest(spec.kinetic);
}

long circle_displacement(std::size_t from, std::size_t to, std::size_t m) {
  const long n = static_cast<long>(m);
  long d = (static_cast<long>(to) - static_cast<long>(from)) % n;
  if (d < 0) d += n;
  if (2 * d > n) d -= n;  // d now in (-m/2, m/2]
  return d;
}

CostKernel action_kernel(const LagrangianSpec& spec) {
  spec.validate();
  const std::size_t n = spec.grid_size;
  const std::size_t k = spec.substeps;
  const std::size_t m = n * k;
  const double inv_k = 1.0 / static_cast<double>(k);

  // Kinetic part depends on the displacement only.
  std::vector<double> kinetic(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double v = static_cast<double>(k) * static_cast<double>(circle_displacement(0, j, m)) /
                     static_cast<double>(m);
    kinetic[j] = 0.5 * spec.kinetic * v * v;
  }

  // Substep s maps `from` points to `to` points; node i is refined point i*K.
  auto substep = [&](std::size_t s, bool coarse_from, bool coarse_to) {
    const double t = (static_cast<double>(s) + 0.5) * inv_k;
    std::vector<double> pot(2 * m);  // V on the half grid h / (2m)
    for (std::size_t h = 0; h < 2 * m; ++h)
      pot[h] = spec.potential_at(static_cast<double>(h) / static_cast<double>(2 * m), t);
    const std::size_t rows = coarse_from ? n : m;
    const std::size_t cols = coarse_to ? n : m;
    const std::size_t row_step = coarse_from ? k : 1;
    const std::size_t col_step = coarse_to ? k : 1;
    Matrix b(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
      const std::size_t x = r * row_step;
      for (std::size_t c = 0; c < cols; ++c) {
        const std::size_t y = c * col_step;
        const long d = circle_displacement(x, y, m);
        const long twice_mid = static_cast<long>(2 * x) + d;
        const long h = ((twice_mid % static_cast<long>(2 * m)) + static_cast<long>(2 * m)) %
                       static_cast<long>(2 * m);
        b(r, c) = inv_k * (kinetic[static_cast<std::size_t>(d < 0 ? d + static_cast<long>(m) : d)] -
                           pot[static_cast<std::size_t>(h)]);
      }
    }
    return b;
  };

  Matrix chain = substep(0, true, k == 1);
  for (std::size_t s = 1; s < k; ++s)
    chain = detail::minplus_product(chain, substep(s, false, s + 1 == k));

  std::vector<Point> points(n);
  for (std::size_t i = 0; i < n; ++i)
    points[i] = {std::to_string(i), {static_cast<double>(i) / static_cast<double>(n)}};
  return CostKernel(std::move(points), std::move(chain));
}

// ---------------------------------------------------------------------------
// Cost files

namespace {

using nlohmann::json;

struct Position {
  std::size_t line = 0;
  std::size_t column = 0;
};

Position position_of(std::string_view text, std::size_t offset) {
  Position p{1, 1};
  for (std::size_t i = 0; i < std::min(offset, text.size()); ++i) {
    if (text[i] == '\n') {
      ++p.line;
      p.column = 1;
    } else {
      ++p.column;
    }
  }
  return p;
}

// Byte offset of matrix[row][col] in JSON text, or npos. The scan relies on
// the preceding entries being plain numbers, which holds because entries are
// validated in row-major order.
std::size_t locate_entry(std::string_view text, std::size_t row, std::size_t col) {
  std::size_t at = text.find("\"matrix\"");
  if (at == std::string_view::npos) return at;
  at = text.find('[', at);
  if (at == std::string_view::npos) return at;
  std::size_t r = 0, c = 0;
  int depth = 0;
  for (std::size_t i = at; i < text.size(); ++i) {
    const char ch = text[i];
    if (ch == '[') {
      ++depth;
      if (depth == 2) c = 0;
      if (depth == 2 && r == row) {
        std::size_t j = i + 1;
        while (j < text.size() && std::isspace(static_cast<unsigned char>(text[j]))) ++j;
        if (col == 0) return j;
      }
      continue;
    }
    if (ch == ']') {
      if (--depth == 0) return std::string_view::npos;
      continue;
    }
    if (ch == ',') {
      if (depth == 1) ++r;
      if (depth == 2 && ++c == col && r == row) {
        std::size_t j = i + 1;
        while (j < text.size() && std::isspace(static_cast<unsigned char>(text[j]))) ++j;
        return j;
      }
    }
  }
  return std::string_view::npos;
}

[[noreturn]] void fail_at(std::string_view text, std::size_t offset, const std::string& what) {
  if (offset == std::string_view::npos) throw ParseError(what, 0, 0);
  const Position p = position_of(text, offset);
  throw ParseError(what, p.line, p.column);
}

CostKernel parse_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    // e.byte is 1-based and points just past the offending character.
    // Drop the library's own prefix; the location is reported separately.
    std::string what = e.what();
    if (const auto at = what.find(", column "); at != std::string::npos)
      if (const auto colon = what.find(": ", at); colon != std::string::npos)
        what = what.substr(colon + 2);
    fail_at(text, e.byte > 0 ? e.byte - 1 : 0, "malformed JSON: " + what);
  } catch (const json::out_of_range& e) {
    // Numbers beyond the double range; the message quotes the token.
    const std::string what = e.what();
    const auto open = what.find('\'');
    const auto close = open == std::string::npos ? open : what.find('\'', open + 1);
    const std::size_t at = close == std::string::npos
                               ? std::string_view::npos
                               : text.find(what.substr(open + 1, close - open - 1));
    fail_at(text, at, "number is not finite: " + what.substr(what.find(']') + 2));
  }
  const auto top = [&](const char* key) { return text.find("\"" + std::string(key) + "\""); };
  if (!doc.is_object()) fail_at(text, 0, "cost file must be a JSON object");
  if (!doc.contains("version") || !doc["version"].is_number_integer() || doc["version"] != 1)
    fail_at(text, top("version"), "cost file needs \"version\": 1");
  if (!doc.contains("matrix") || !doc["matrix"].is_array())
    fail_at(text, top("matrix"), "cost file needs a \"matrix\" array");

  const json& rows = doc["matrix"];
  const std::size_t n = rows.size();
  if (n == 0) fail_at(text, top("matrix"), "matrix is empty");
  Matrix costs(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    if (!rows[r].is_array() || rows[r].size() != n)
      fail_at(text, locate_entry(text, r, 0),
              "matrix row " + std::to_string(r) + " must hold " + std::to_string(n) +
                  " numbers (matrix must be square)");
    for (std::size_t c = 0; c < n; ++c) {
      const json& v = rows[r][c];
      if (!v.is_number() || !std::isfinite(v.get<double>()))
        fail_at(text, locate_entry(text, r, c),
                "matrix[" + std::to_string(r) + "][" + std::to_string(c) +
                    "] is not a finite number");
      costs(r, c) = v.get<double>();
    }
  }

  std::vector<Point> points(n);
  for (std::size_t i = 0; i < n; ++i) points[i].label = std::to_string(i);
  if (doc.contains("labels")) {
    const json& labels = doc["labels"];
    if (!labels.is_array() || labels.size() != n)
      fail_at(text, top("labels"), "labels must be an array of " + std::to_string(n) + " strings");
    for (std::size_t i = 0; i < n; ++i) {
      if (!labels[i].is_string()) fail_at(text, top("labels"), "labels must be strings");
      points[i].label = labels[i].get<std::string>();
    }
  }
  if (doc.contains("coords")) {
    const json& coords = doc["coords"];
    if (!coords.is_array() || coords.size() != n)
      fail_at(text, top("coords"), "coords must be an array of " + std::to_string(n) + " arrays");
    for (std::size_t i = 0; i < n; ++i) {
      if (!coords[i].is_array()) fail_at(text, top("coords"), "coords entries must be arrays");
      for (const json& v : coords[i]) {
        if (!v.is_number() || !std::isfinite(v.get<double>()))
          fail_at(text, top("coords"), "coords must be finite numbers");
        points[i].coords.push_back(v.get<double>());
      }
    }
  }
  try {
    return CostKernel(std::move(points), std::move(costs));
  } catch (const Error& e) {
    throw ParseError(e.what(), 0, 0);
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

// Splits one CSV line into trimmed fields with their 1-based start columns.
std::vector<std::pair<std::string_view, std::size_t>> split_fields(std::string_view line) {
  std::vector<std::pair<std::string_view, std::size_t>> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    const std::string_view raw =
        line.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                           : comma - start);
    const std::string_view field = trim(raw);
    const std::size_t lead = field.empty() ? 0 : static_cast<std::size_t>(field.data() - raw.data());
    out.emplace_back(field, start + lead + 1);
    if (comma == std::string_view::npos) return out;
    start = comma + 1;
  }
}

CostKernel parse_csv(std::string_view text) {
  std::vector<Point> points;
  std::vector<double> values;
  std::size_t n = 0;
  std::size_t rows = 0;
  std::size_t line_no = 0;
  std::size_t last_line = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    const std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (trim(line).empty()) continue;
    last_line = line_no;
    const auto fields = split_fields(line);
    if (points.empty()) {
      n = fields.size();
      for (const auto& [label, col] : fields) {
        if (label.empty()) throw ParseError("empty label", line_no, col);
        points.push_back({std::string(label), {}});
      }
      continue;
    }
    if (rows == n) throw ParseError("more matrix rows than labels", line_no, 1);
    if (fields.size() != n)
      throw ParseError("row has " + std::to_string(fields.size()) + " fields, expected " +
                           std::to_string(n),
                       line_no, fields.size() > n ? fields[n].second : line.size() + 1);
    for (const auto& [field, col] : fields) {
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
      if (field.empty() || ec != std::errc() || ptr != field.data() + field.size())
        throw ParseError("'" + std::string(field) + "' is not a number", line_no, col);
      if (!std::isfinite(v))
        throw ParseError("'" + std::string(field) + "' is not finite", line_no, col);
      values.push_back(v);
    }
    ++rows;
  }
  if (points.empty()) throw ParseError("empty cost file", 1, 1);
  if (rows != n)
    throw ParseError("matrix has " + std::to_string(rows) + " rows, expected " +
                         std::to_string(n) + " (matrix must be square)",
                     last_line + 1, 1);
  Matrix costs(n, n);
  std::copy(values.begin(), values.end(), costs.values().begin());
  try {
    return CostKernel(std::move(points), std::move(costs));
  } catch (const Error& e) {
    throw ParseError(e.what(), 1, 1);
  }
}

std::string format_json(const CostKernel& k) {
  const std::size_t n = k.size();
  std::string out = "{\n  \"version\": 1,\n  \"labels\": [";
  for (std::size_t i = 0; i < n; ++i) {
    if (i) out += ", ";
    out += json(k.points()[i].label).dump();
  }
  out += "],\n";
  const bool has_coords = std::any_of(k.points().begin(), k.points().end(),
                                      [](const Point& p) { return !p.coords.empty(); });
  if (has_coords) {
    out += "  \"coords\": [";
    for (std::size_t i = 0; i < n; ++i) {
      out += i ? ", [" : "[";
      const auto& c = k.points()[i].coords;
      for (std::size_t j = 0; j < c.size(); ++j) out += (j ? ", " : "") + format_number(c[j]);
      out += "]";
    }
    out += "],\n";
  }
  out += "  \"matrix\": [\n";
  for (std::size_t i = 0; i < n; ++i) {
    out += "    [";
    for (std::size_t j = 0; j < n; ++j) out += (j ? ", " : "") + format_number(k(i, j));
    out += i + 1 < n ? "],\n" : "]\n";
  }
  out += "  ]\n}\n";
  return out;
}

std::string format_csv(const CostKernel& k) {
  std::string out;
  for (std::size_t i = 0; i < k.size(); ++i) {
    const std::string& label = k.points()[i].label;
    if (label.find_first_of(",\n\r") != std::string::npos || trim(label) != label)
      throw PreconditionError("format_cost: label '" + label + "' cannot be written as CSV");
    out += (i ? "," : "") + label;
  }
  out += '\n';
  for (std::size_t i = 0; i < k.size(); ++i) {
    for (std::size_t j = 0; j < k.size(); ++j) out += (j ? "," : "") + format_number(k(i, j));
    out += '\n';
  }
  return out;
}

}  // namespace

CostFormat format_for_path(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext == ".csv" ? CostFormat::csv : CostFormat::json;
}

CostKernel parse_cost(std::string_view text, CostFormat format) {
  return format == CostFormat::csv ? parse_csv(text) : parse_json(text);
}

std::string format_cost(const CostKernel& kernel, CostFormat format) {
  return format == CostFormat::csv ? format_csv(kernel) : format_json(kernel);
}

CostKernel load_cost(const std::filesystem::path& path, CostFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path.string() + "'", 0, 0);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_cost(buf.str(), format);
}

CostKernel load_cost(const std::filesystem::path& path) {
  return load_cost(path, format_for_path(path));
}

void save_cost(const CostKernel& kernel, const std::filesystem::path& path, CostFormat format) {
  const std::string text = format_cost(kernel, format);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

void save_cost(const CostKernel& kernel, const std::filesystem::path& path) {
  save_cost(kernel, path, format_for_path(path));
}

}  // namespace tropikam
