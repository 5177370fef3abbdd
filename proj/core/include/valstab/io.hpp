#ifndef VALSTAB_IO_HPP
#define VALSTAB_IO_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "valstab/invariants.hpp"
#include "valstab/perturb.hpp"
#include "valstab/scanner.hpp"

// Forward-declared to keep the vendored single-header JSON out of the public
// interface; sources include it directly.
namespace valstab::io {

/**
 * A variety file bundles the fan with named divisor classes:
 *   { "name": "...", "rank": n, "rays": [[ints]], "cones": [[ray indices]],
 *     "classes": { "H": ["p/q", ...], ... },
 *     "nef_basis": ["H1", "H2"], "polarization": "H" }
 * Rationals are parsed bit-exactly; non-primitive rays are rejected with a
 * diagnostic.  The canonical class "K" and the ray divisors "D0", "D1", ...
 * are always available.
 */
struct VarietyBundle {
  toric::ToricVariety variety;
  std::string name;
  std::map<std::string, toric::DivisorClass> classes;
  std::vector<std::string> nef_basis_names;
  std::optional<std::string> polarization_name;
};

VarietyBundle load_variety(const std::string& path);
VarietyBundle parse_variety_json(const std::string& text, const std::string& where);

/**
 * Linear combinations of named classes with rational coefficients:
 * "3H", "-K", "H1+2H2", "1/2*f - 2/3 h", "D0 + D2".
 */
toric::DivisorClass parse_divisor(const VarietyBundle& bundle, const std::string& expr);

/// "e1", "-e3", "(0,1)", "0,-1" all denote lattice vectors.
IntVec parse_valuation(int rank, const std::string& text);

std::string report_table(const invariants::InvariantReport& rep);
std::string report_json_text(const invariants::InvariantReport& rep);

/// CSV schema: a,b,ample,zeta_num,zeta_den,min_val,mu,s,stilde,vol,ms
std::string scan_csv(const std::vector<scanner::ScanRecord>& records);
std::string scan_json_text(const scanner::SliceSpec& spec,
                           const std::vector<scanner::ScanRecord>& records);
/// Gnuplot-ready matrix of zeta decimals (rows: b ascending, cols: a), blanks
/// as "nan" outside the ample cone.
std::string scan_matrix(const scanner::SliceSpec& spec,
                        const std::vector<scanner::ScanRecord>& records, int digits = 9);
std::string continuity_json_text(const scanner::ContinuityReport& rep);

std::string s_estimate_json_text(const perturb::SEstimateResult& res);
std::string modulus_json_text(const perturb::ModulusTable& table);
std::string sandwich_json_text(const perturb::SandwichResult& res);

/// Writes text to path, creating parent directories; newline-terminated.
void write_file(const std::string& path, const std::string& text);

}  // namespace valstab::io

#endif
