#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pafit {

/// One observed (or expected but unobserved) photoassociation line of the
/// F'=2 progression. Empty CSV cells map to std::nullopt, never to zero.
struct LineRecord {
  std::string isotopologue_id;
  std::optional<double> delta_pa; // cm^-1, R'=0 component, negative
  std::optional<int> dv;          // v' - v'_max, <= -1
  int f_prime = 2;
  std::optional<double> rel_depth; // [0, 1]
  bool rel_depth_upper_bound = false;
  std::optional<double> b_rot_mcm1;    // 1e-3 cm^-1
  std::optional<double> delta_r1_mcm1; // 1e-3 cm^-1
  bool delta_r1_upper_bound = false;   // "not resolved" entries
  bool observed = true;

  std::optional<double> bRotCm1() const;
  // Only a measured splitting; upper bounds yield nullopt.
  std::optional<double> deltaR1Cm1() const;

  bool operator==(const LineRecord &) const = default;
};

struct IsotopologueSpec {
  std::string id;
  double mass_a = 0.0; // amu
  double mass_b = 0.0; // amu

  double reducedMassAmu() const;
  double reducedMassMe() const;
  bool operator==(const IsotopologueSpec &) const = default;
};

struct LineList {
  std::vector<LineRecord> records;
  std::vector<std::string> warnings;
};

namespace dataio {

inline constexpr std::string_view line_list_header =
    "isotopologue,delta_pa_cm1,dv,f_prime,rel_depth,b_rot_mcm1,delta_r1_mcm1,"
    "observed";
inline constexpr std::string_view isotopologue_header =
    "id,mass_a_amu,mass_b_amu";

// Lines must observe this threshold; closer lines are flagged as warnings.
inline constexpr double observable_limit_cm1 = -0.38;

std::vector<IsotopologueSpec> parseIsotopologues(std::string_view text);
std::string writeIsotopologues(std::span<const IsotopologueSpec> isos);

/// Parses a line list, resolving isotopologue ids against `known`.
/// Throws ParseError (with 1-based line number and field name) on malformed
/// rows, unknown ids and invariant violations.
LineList parseLineList(std::string_view text,
                       std::span<const IsotopologueSpec> known);

std::string writeLineList(std::span<const LineRecord> records);

const IsotopologueSpec &findIsotopologue(std::span<const IsotopologueSpec> isos,
                                         std::string_view id);

std::vector<IsotopologueSpec> loadBundledIsotopologues();
std::vector<LineRecord> loadBundledTable1();

std::string readFile(const std::filesystem::path &path);
void writeFile(const std::filesystem::path &path, std::string_view contents);

// Shortest round-trip decimal representation.
std::string formatNumber(double x);

} // namespace dataio
} // namespace pafit
