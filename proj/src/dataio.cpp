#include "pafit/dataio.hpp"
#include "pafit/errors.hpp"
#include "pafit/units.hpp"

#include "bundled_data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace pafit {

std::optional<double> LineRecord::bRotCm1() const {
  if (!b_rot_mcm1)
    return std::nullopt;
  return *b_rot_mcm1 * 1e-3;
}

std::optional<double> LineRecord::deltaR1Cm1() const {
  if (!delta_r1_mcm1 || delta_r1_upper_bound)
    return std::nullopt;
  return *delta_r1_mcm1 * 1e-3;
}

double IsotopologueSpec::reducedMassAmu() const {
  return units::reducedMass(mass_a, mass_b);
}

double IsotopologueSpec::reducedMassMe() const {
  return units::amuToMe(reducedMassAmu());
}

namespace dataio {

namespace {

std::string_view trim(std::string_view s) {
  const auto ws = [](char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n';
  };
  while (!s.empty() && ws(s.front()))
    s.remove_prefix(1);
  while (!s.empty() && ws(s.back()))
    s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> splitCommas(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(',', start);
    cells.push_back(trim(line.substr(start, pos - start)));
    if (pos == std::string_view::npos)
      break;
    start = pos + 1;
  }
  return cells;
}

// Splits into (1-based line number, content) pairs, skipping blank lines.
std::vector<std::pair<std::size_t, std::string_view>>
splitLines(std::string_view text) {
  std::vector<std::pair<std::size_t, std::string_view>> out;
  std::size_t number = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto pos = text.find('\n', start);
    const auto line = text.substr(start, pos - start);
    ++number;
    if (!trim(line).empty())
      out.emplace_back(number, trim(line));
    if (pos == std::string_view::npos)
      break;
    start = pos + 1;
  }
  return out;
}

double parseDouble(std::string_view cell, std::size_t line,
                   const char *field) {
  double v = 0.0;
  const auto *end = cell.data() + cell.size();
  const auto [ptr, ec] = std::from_chars(cell.data(), end, v);
  if (ec != std::errc{} || ptr != end || !std::isfinite(v))
    throw ParseError("line " + std::to_string(line) + ": field '" + field +
                         "' is not a number: '" + std::string(cell) + "'",
                     line, field);
  return v;
}

int parseInt(std::string_view cell, std::size_t line, const char *field) {
  int v = 0;
  const auto *end = cell.data() + cell.size();
  const auto [ptr, ec] = std::from_chars(cell.data(), end, v);
  if (ec != std::errc{} || ptr != end)
    throw ParseError("line " + std::to_string(line) + ": field '" + field +
                         "' is not an integer: '" + std::string(cell) + "'",
                     line, field);
  return v;
}

[[noreturn]] void invalid(std::size_t line, const char *field,
                          const std::string &why) {
  throw ParseError("line " + std::to_string(line) + ": field '" + field +
                       "' " + why,
                   line, field);
}

// "<x" marks an upper bound.
std::pair<std::optional<double>, bool>
parseBounded(std::string_view cell, std::size_t line, const char *field) {
  if (cell.empty())
    return {std::nullopt, false};
  if (cell.front() == '<')
    return {parseDouble(trim(cell.substr(1)), line, field), true};
  return {parseDouble(cell, line, field), false};
}

void expectHeader(const std::vector<std::pair<std::size_t, std::string_view>>
                      &lines,
                  std::string_view header) {
  if (lines.empty())
    throw ParseError("missing header row '" + std::string(header) + "'", 1);
  if (lines.front().second != header)
    throw ParseError("line " + std::to_string(lines.front().first) +
                         ": expected header '" + std::string(header) +
                         "', got '" + std::string(lines.front().second) + "'",
                     lines.front().first);
}

std::string formatBounded(const std::optional<double> &v, bool upper) {
  if (!v)
    return {};
  return (upper ? "<" : "") + formatNumber(*v);
}

} // namespace

std::string formatNumber(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

std::vector<IsotopologueSpec> parseIsotopologues(std::string_view text) {
  const auto lines = splitLines(text);
  expectHeader(lines, isotopologue_header);
  std::vector<IsotopologueSpec> out;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto [number, content] = lines[i];
    const auto cells = splitCommas(content);
    if (cells.size() != 3)
      throw ParseError("line " + std::to_string(number) + ": expected 3 fields",
                       number);
    IsotopologueSpec iso{std::string(cells[0]),
                         parseDouble(cells[1], number, "mass_a_amu"),
                         parseDouble(cells[2], number, "mass_b_amu")};
    if (iso.id.empty())
      invalid(number, "id", "is empty");
    if (!(iso.mass_a > 0.0))
      invalid(number, "mass_a_amu", "must be positive");
    if (!(iso.mass_b > 0.0))
      invalid(number, "mass_b_amu", "must be positive");
    if (std::any_of(out.begin(), out.end(),
                    [&](const auto &o) { return o.id == iso.id; }))
      invalid(number, "id", "duplicates '" + iso.id + "'");
    out.push_back(std::move(iso));
  }
  return out;
}

std::string writeIsotopologues(std::span<const IsotopologueSpec> isos) {
  std::string out(isotopologue_header);
  out += '\n';
  for (const auto &iso : isos)
    out += iso.id + ',' + formatNumber(iso.mass_a) + ',' +
           formatNumber(iso.mass_b) + '\n';
  return out;
}

const IsotopologueSpec &findIsotopologue(std::span<const IsotopologueSpec> isos,
                                         std::string_view id) {
  const auto it = std::find_if(isos.begin(), isos.end(),
                               [&](const auto &i) { return i.id == id; });
  if (it == isos.end())
    throw ParseError("unknown isotopologue '" + std::string(id) + "'", 0,
                     "isotopologue");
  return *it;
}

LineList parseLineList(std::string_view text,
                       std::span<const IsotopologueSpec> known) {
  const auto lines = splitLines(text);
  expectHeader(lines, line_list_header);

  LineList out;
  std::vector<std::size_t> line_numbers;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto [number, content] = lines[i];
    const auto cells = splitCommas(content);
    if (cells.size() != 8)
      throw ParseError("line " + std::to_string(number) +
                           ": expected 8 fields, got " +
                           std::to_string(cells.size()),
                       number);

    LineRecord rec;
    rec.isotopologue_id = std::string(cells[0]);
    if (std::none_of(known.begin(), known.end(), [&](const auto &iso) {
          return iso.id == rec.isotopologue_id;
        }))
      invalid(number, "isotopologue",
              "names unknown isotopologue '" + rec.isotopologue_id + "'");

    if (!cells[1].empty())
      rec.delta_pa = parseDouble(cells[1], number, "delta_pa_cm1");
    if (!cells[2].empty()) {
      rec.dv = parseInt(cells[2], number, "dv");
      if (*rec.dv > -1)
        invalid(number, "dv", "must be <= -1");
    }
    rec.f_prime = parseInt(cells[3], number, "f_prime");
    if (rec.f_prime != 1 && rec.f_prime != 2)
      invalid(number, "f_prime", "must be 1 or 2");

    std::tie(rec.rel_depth, rec.rel_depth_upper_bound) =
        parseBounded(cells[4], number, "rel_depth");
    if (rec.rel_depth && (*rec.rel_depth < 0.0 || *rec.rel_depth > 1.0))
      invalid(number, "rel_depth", "must lie in [0, 1]");

    if (!cells[5].empty()) {
      rec.b_rot_mcm1 = parseDouble(cells[5], number, "b_rot_mcm1");
      if (!(*rec.b_rot_mcm1 > 0.0))
        invalid(number, "b_rot_mcm1", "must be positive");
    }
    std::tie(rec.delta_r1_mcm1, rec.delta_r1_upper_bound) =
        parseBounded(cells[6], number, "delta_r1_mcm1");
    if (rec.delta_r1_mcm1 && *rec.delta_r1_mcm1 < 0.0)
      invalid(number, "delta_r1_mcm1", "must be non-negative");

    if (cells[7] == "true")
      rec.observed = true;
    else if (cells[7] == "false")
      rec.observed = false;
    else
      invalid(number, "observed", "must be 'true' or 'false'");

    if (rec.observed && !rec.delta_pa)
      invalid(number, "delta_pa_cm1", "is required for observed lines");
    if (rec.observed && *rec.delta_pa >= observable_limit_cm1)
      out.warnings.push_back("line " + std::to_string(number) +
                             ": delta_pa " + formatNumber(*rec.delta_pa) +
                             " cm^-1 is above the observable limit " +
                             formatNumber(observable_limit_cm1));

    out.records.push_back(std::move(rec));
    line_numbers.push_back(number);
  }

  // Within one (isotopologue, F') series dv must fall as delta_pa falls.
  std::map<std::pair<std::string, int>, std::vector<std::size_t>> series;
  for (std::size_t i = 0; i < out.records.size(); ++i) {
    const auto &r = out.records[i];
    if (r.observed && r.dv)
      series[{r.isotopologue_id, r.f_prime}].push_back(i);
  }
  for (auto &[key, idx] : series) {
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      return *out.records[a].delta_pa > *out.records[b].delta_pa;
    });
    for (std::size_t k = 1; k < idx.size(); ++k)
      if (!(*out.records[idx[k]].dv < *out.records[idx[k - 1]].dv))
        invalid(line_numbers[idx[k]], "dv",
                "does not decrease with delta_pa within the " + key.first +
                    " F'=" + std::to_string(key.second) + " series");
  }
  return out;
}

std::string writeLineList(std::span<const LineRecord> records) {
  std::string out(line_list_header);
  out += '\n';
  for (const auto &r : records) {
    out += r.isotopologue_id;
    out += ',';
    out += r.delta_pa ? formatNumber(*r.delta_pa) : "";
    out += ',';
    out += r.dv ? std::to_string(*r.dv) : "";
    out += ',';
    out += std::to_string(r.f_prime);
    out += ',';
    out += formatBounded(r.rel_depth, r.rel_depth_upper_bound);
    out += ',';
    out += r.b_rot_mcm1 ? formatNumber(*r.b_rot_mcm1) : "";
    out += ',';
    out += formatBounded(r.delta_r1_mcm1, r.delta_r1_upper_bound);
    out += ',';
    out += r.observed ? "true" : "false";
    out += '\n';
  }
  return out;
}

std::vector<IsotopologueSpec> loadBundledIsotopologues() {
  return parseIsotopologues(bundled::isotopologues_csv);
}

std::vector<LineRecord> loadBundledTable1() {
  const auto isos = loadBundledIsotopologues();
  return parseLineList(bundled::table1_lines_csv, isos).records;
}

std::string readFile(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw ParseError("cannot open '" + path.string() + "'", 0);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void writeFile(const std::filesystem::path &path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw ParseError("cannot write '" + path.string() + "'", 0);
  out << contents;
}

} // namespace dataio
} // namespace pafit
