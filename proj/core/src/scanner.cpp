#include "valstab/scanner.hpp"

#include <chrono>
#include <fstream>
#include <map>
#include <mutex>

#include "json.hpp"
#include "valstab/parallel.hpp"

namespace valstab::scanner {

namespace {

using nlohmann::ordered_json;

std::string record_key(const Rational& a, const Rational& b) {
  return to_string(a) + ";" + to_string(b);
}

ordered_json record_to_json(const ScanRecord& r) {
  ordered_json j;
  j["a"] = to_string(r.a);
  j["b"] = to_string(r.b);
  j["ample"] = r.ample;
  if (r.zeta) {
    j["zeta"] = to_string(*r.zeta);
    std::string mv = "(";
    for (size_t i = 0; i < r.min_val.size(); ++i) {
      if (i) mv += ",";
      mv += r.min_val[i].get_str();
    }
    j["min_val"] = mv + ")";
    j["mu"] = to_string(*r.mu);
    j["s"] = to_string(*r.s);
    j["stilde"] = to_string(*r.stilde);
    j["vol"] = to_string(*r.vol);
  }
  j["ms"] = r.ms;
  return j;
}

std::optional<ScanRecord> record_from_json(const ordered_json& j) {
  try {
    ScanRecord r;
    r.a = parse_rational(j.at("a").get<std::string>());
    r.b = parse_rational(j.at("b").get<std::string>());
    r.ample = j.at("ample").get<bool>();
    if (r.ample) {
      r.zeta = parse_rational(j.at("zeta").get<std::string>());
      std::string mv = j.at("min_val").get<std::string>();
      IntVec v;
      size_t pos = 1;
      while (pos < mv.size() && mv[pos] != ')') {
        size_t end = mv.find_first_of(",)", pos);
        v.emplace_back(mv.substr(pos, end - pos), 10);
        pos = end + (mv[end] == ',' ? 1 : 0);
        if (mv[end] == ')') break;
      }
      r.min_val = std::move(v);
      r.mu = parse_rational(j.at("mu").get<std::string>());
      r.s = parse_rational(j.at("s").get<std::string>());
      r.stilde = parse_rational(j.at("stilde").get<std::string>());
      r.vol = parse_rational(j.at("vol").get<std::string>());
    }
    r.ms = j.value("ms", 0L);
    return r;
  } catch (...) {
    return std::nullopt;
  }
}

}  // namespace

std::vector<ToricValuation> enumerate_valuations(int n, int budget) {
  std::vector<ToricValuation> out;
  for (auto& v : toric::primitive_vectors(n, budget)) out.emplace_back(std::move(v));
  return out;
}

std::vector<ScanRecord> scan_slice(const ToricVariety& x, const SliceSpec& spec,
                                   const ScanOptions& options) {
  if (spec.grid_a < 1) throw InputError("grid must have at least one cell along a");
  if (spec.grid_b < 0) throw InputError("negative grid resolution");
  const bool one_dim = spec.grid_b == 0;

  std::vector<std::pair<Rational, Rational>> coords;
  for (int i = 0; i <= spec.grid_a; ++i) {
    Rational a = spec.a0 + (spec.a1 - spec.a0) * Rational(i) / Rational(spec.grid_a);
    if (one_dim) {
      coords.emplace_back(a, spec.b0);
      continue;
    }
    for (int j = 0; j <= spec.grid_b; ++j) {
      Rational b = spec.b0 + (spec.b1 - spec.b0) * Rational(j) / Rational(spec.grid_b);
      coords.emplace_back(a, b);
    }
  }

  std::map<std::string, ScanRecord> resumed;
  if (!options.resume_path.empty()) {
    std::ifstream in(options.resume_path);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      auto parsed = ordered_json::parse(line, nullptr, false);
      if (parsed.is_discarded()) continue;
      if (auto rec = record_from_json(parsed)) resumed[record_key(rec->a, rec->b)] = *rec;
    }
  }

  std::vector<ScanRecord> records(coords.size());
  std::vector<char> fresh(coords.size(), 0);
  parallel_for(
      coords.size(),
      [&](size_t i) {
        const auto& [a, b] = coords[i];
        if (auto it = resumed.find(record_key(a, b)); it != resumed.end()) {
          records[i] = it->second;
          return;
        }
        fresh[i] = 1;
        auto started = std::chrono::steady_clock::now();
        ScanRecord rec;
        rec.a = a;
        rec.b = b;
        DivisorClass l = spec.l0 + spec.h1.scaled(a);
        if (!one_dim) l = l + spec.h2.scaled(b);
        rec.ample = toric::is_ample(x, l);
        if (rec.ample) {
          auto z = invariants::zeta_toric(x, l, spec.budget);
          rec.zeta = z.value;
          rec.min_val = z.minimizer;
          rec.mu = invariants::slope_mu(x, l);
          auto st = invariants::nef_thresholds(x, l);
          rec.s = st.first;
          rec.stilde = st.second;
          rec.vol = invariants::volume(x, l);
        }
        if (options.timing) {
          auto elapsed = std::chrono::steady_clock::now() - started;
          rec.ms = std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count();
        }
        records[i] = std::move(rec);
      },
      options.workers);

  bool any_ample = false;
  for (const auto& r : records) any_ample = any_ample || r.ample;
  if (!any_ample) throw InputError("slice misses ample cone");

  if (!options.resume_path.empty()) {
    std::ofstream out(options.resume_path, std::ios::app);
    for (size_t i = 0; i < records.size(); ++i)
      if (fresh[i]) out << record_to_json(records[i]).dump() << "\n";
  }
  return records;
}

ContinuityReport continuity_report(const std::vector<ScanRecord>& records, const SliceSpec& spec,
                                   const QVec& levels) {
  const bool one_dim = spec.grid_b == 0;
  const size_t cols = one_dim ? 1 : static_cast<size_t>(spec.grid_b) + 1;
  const size_t rows = static_cast<size_t>(spec.grid_a) + 1;
  if (records.size() != rows * cols) throw InputError("record count does not match the slice");

  auto at = [&](size_t i, size_t j) -> const ScanRecord& { return records[i * cols + j]; };

  ContinuityReport rep;
  size_t ample = 0;
  for (const auto& r : records) ample += r.ample ? 1 : 0;
  rep.ample_points = ample;
  if ((one_dim && ample < 2) || (!one_dim && ample < 4)) throw InputError("insufficient grid");

  Rational step_a = (spec.a1 - spec.a0) / Rational(spec.grid_a);
  Rational step_b = one_dim ? Rational(1) : (spec.b1 - spec.b0) / Rational(spec.grid_b);
  rep.max_jump = 0;
  rep.lipschitz_like = 0;
  for (size_t i = 0; i < rows; ++i) {
    for (size_t j = 0; j < cols; ++j) {
      const auto& here = at(i, j);
      if (!here.ample) continue;
      if (i + 1 < rows && at(i + 1, j).ample) {
        Rational d = abs(*at(i + 1, j).zeta - *here.zeta);
        rep.max_jump = std::max(rep.max_jump, d);
        rep.lipschitz_like = std::max(rep.lipschitz_like, d / step_a);
        ++rep.adjacent_pairs;
      }
      if (j + 1 < cols && at(i, j + 1).ample) {
        Rational d = abs(*at(i, j + 1).zeta - *here.zeta);
        rep.max_jump = std::max(rep.max_jump, d);
        rep.lipschitz_like = std::max(rep.lipschitz_like, d / step_b);
        ++rep.adjacent_pairs;
      }
    }
  }

  for (const auto& level : levels) {
    for (size_t i = 0; i < rows; ++i) {
      for (size_t j = 0; j < cols; ++j) {
        const auto& here = at(i, j);
        if (!here.ample || !(*here.zeta > level)) continue;
        bool isolated = true;
        auto probe = [&](size_t pi, size_t pj) {
          const auto& nb = at(pi, pj);
          if (nb.ample && *nb.zeta > level) isolated = false;
        };
        if (i > 0) probe(i - 1, j);
        if (i + 1 < rows) probe(i + 1, j);
        if (j > 0) probe(i, j - 1);
        if (j + 1 < cols) probe(i, j + 1);
        if (isolated) rep.flags.push_back({level, here.a, here.b});
      }
    }
  }
  return rep;
}

}  // namespace valstab::scanner
