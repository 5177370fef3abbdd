#include "valstab/io.hpp"

#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace valstab::io {

using nlohmann::ordered_json;

namespace {

std::string vec_text(const IntVec& v) {
  std::string out = "(";
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) out += ";";
    out += v[i].get_str();
  }
  return out + ")";
}

ordered_json tagged_json(const invariants::TaggedValue& t) {
  ordered_json j;
  j["value"] = to_string(t.value);
  j["exact"] = t.exact;
  if (!t.exact) {
    j["error_bound"] = to_string(t.error_bound);
    j["decimal"] = decimal_string(t.value, 12);
  }
  return j;
}

ordered_json interval_json(const RatInterval& iv) {
  ordered_json j;
  j["lo"] = to_string(iv.lo);
  j["hi"] = to_string(iv.hi);
  j["decimal_lo"] = decimal_string(iv.lo, 32, RoundDir::Down);
  j["decimal_hi"] = decimal_string(iv.hi, 32, RoundDir::Up);
  j["rounding"] = "outward";
  return j;
}

}  // namespace

VarietyBundle load_variety(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open variety file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_variety_json(buf.str(), path);
}

VarietyBundle parse_variety_json(const std::string& text, const std::string& where) {
  auto j = ordered_json::parse(text, nullptr, false);
  if (j.is_discarded()) throw InputError(where + ": malformed JSON");
  for (const char* key : {"rank", "rays", "cones"})
    if (!j.contains(key)) throw InputError(where + ": missing required key '" + key + "'");

  int rank = 0;
  try {
    rank = j.at("rank").get<int>();
  } catch (...) {
    throw InputError(where + ": 'rank' must be an integer");
  }
  std::vector<IntVec> rays;
  for (const auto& row : j.at("rays")) {
    IntVec r;
    for (const auto& c : row) {
      if (c.is_number_integer())
        r.emplace_back(c.get<long>());
      else if (c.is_string())
        r.emplace_back(c.get<std::string>(), 10);
      else
        throw InputError(where + ": ray entries must be integers");
    }
    rays.push_back(std::move(r));
  }
  std::vector<std::vector<int>> cones;
  for (const auto& row : j.at("cones")) {
    std::vector<int> c;
    for (const auto& e : row) c.push_back(e.get<int>());
    cones.push_back(std::move(c));
  }

  VarietyBundle bundle{toric::ToricVariety(rank, std::move(rays), std::move(cones)), "", {}, {},
                       std::nullopt};
  bundle.name = j.value("name", std::string{});

  const size_t nrays = bundle.variety.ray_count();
  bundle.classes.emplace("K", toric::canonical_class(bundle.variety));
  for (size_t i = 0; i < nrays; ++i) {
    QVec a(nrays, Rational(0));
    a[i] = 1;
    bundle.classes.emplace("D" + std::to_string(i), toric::DivisorClass(std::move(a)));
  }
  if (j.contains("classes")) {
    for (const auto& [name, arr] : j.at("classes").items()) {
      QVec a;
      for (const auto& e : arr) {
        if (e.is_number_integer())
          a.push_back(Rational(e.get<long>()));
        else
          a.push_back(parse_rational(e.get<std::string>()));
      }
      if (a.size() != nrays)
        throw InputError(where + ": class '" + name + "' has wrong coefficient count");
      bundle.classes[name] = toric::DivisorClass(std::move(a));
    }
  }
  if (j.contains("nef_basis"))
    for (const auto& e : j.at("nef_basis")) {
      std::string name = e.get<std::string>();
      if (!bundle.classes.count(name))
        throw InputError(where + ": nef_basis references unknown class '" + name + "'");
      bundle.nef_basis_names.push_back(name);
    }
  if (j.contains("polarization")) {
    std::string name = j.at("polarization").get<std::string>();
    bundle.polarization_name = name;
  }
  return bundle;
}

toric::DivisorClass parse_divisor(const VarietyBundle& bundle, const std::string& expr) {
  const size_t nrays = bundle.variety.ray_count();
  toric::DivisorClass acc{QVec(nrays, Rational(0))};
  size_t pos = 0;
  auto skip_ws = [&] {
    while (pos < expr.size() && std::isspace(static_cast<unsigned char>(expr[pos]))) ++pos;
  };
  bool first = true;
  skip_ws();
  if (pos == expr.size()) throw InputError("empty divisor expression");
  while (pos < expr.size()) {
    skip_ws();
    int sign = 1;
    if (expr[pos] == '+' || expr[pos] == '-') {
      sign = expr[pos] == '-' ? -1 : 1;
      ++pos;
    } else if (!first) {
      throw InputError("expected '+' or '-' in divisor expression at '" + expr.substr(pos) + "'");
    }
    first = false;
    skip_ws();
    // optional rational coefficient
    Rational coef(1);
    size_t start = pos;
    while (pos < expr.size() && (std::isdigit(static_cast<unsigned char>(expr[pos])) ||
                                 expr[pos] == '/'))
      ++pos;
    if (pos > start) coef = parse_rational(expr.substr(start, pos - start));
    skip_ws();
    if (pos < expr.size() && expr[pos] == '*') {
      ++pos;
      skip_ws();
    }
    // class name
    start = pos;
    while (pos < expr.size() && (std::isalnum(static_cast<unsigned char>(expr[pos])) ||
                                 expr[pos] == '_'))
      ++pos;
    if (pos == start)
      throw InputError("expected a class name in divisor expression at '" +
                       expr.substr(start) + "'");
    std::string name = expr.substr(start, pos - start);
    auto it = bundle.classes.find(name);
    if (it == bundle.classes.end()) throw InputError("unknown divisor class '" + name + "'");
    acc = acc + it->second.scaled(coef * sign);
    skip_ws();
  }
  return acc;
}

IntVec parse_valuation(int rank, const std::string& text) {
  std::string t;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) t += c;
  if (t.empty()) throw InputError("empty valuation");
  int sign = 1;
  size_t pos = 0;
  if (t[0] == '-') {
    sign = -1;
    pos = 1;
  } else if (t[0] == '+') {
    pos = 1;
  }
  if (pos < t.size() && (t[pos] == 'e' || t[pos] == 'E') && pos + 1 < t.size()) {
    int axis = std::atoi(t.c_str() + pos + 1);
    if (axis < 1 || axis > rank) throw InputError("valuation axis out of range: " + text);
    IntVec v(static_cast<size_t>(rank), Zint(0));
    v[static_cast<size_t>(axis - 1)] = sign;
    return v;
  }
  std::string body = t;
  if (!body.empty() && body.front() == '(') {
    if (body.back() != ')') throw InputError("unbalanced parentheses in valuation: " + text);
    body = body.substr(1, body.size() - 2);
  }
  IntVec v;
  size_t at = 0;
  while (at <= body.size()) {
    size_t comma = body.find(',', at);
    std::string piece = body.substr(at, comma == std::string::npos ? comma : comma - at);
    if (piece.empty()) throw InputError("malformed valuation: " + text);
    v.emplace_back(piece, 10);
    if (comma == std::string::npos) break;
    at = comma + 1;
  }
  if (static_cast<int>(v.size()) != rank)
    throw InputError("valuation has wrong dimension: " + text);
  return v;
}

std::string report_table(const invariants::InvariantReport& rep) {
  std::ostringstream out;
  auto line = [&](const char* name, const invariants::TaggedValue& t) {
    out << "  " << name << " = " << to_string(t.value);
    if (!t.exact)
      out << "  (approx, +-" << decimal_string(t.error_bound, 12, RoundDir::Up) << ")";
    out << "\n";
  };
  line("A      ", rep.A);
  line("Vol    ", rep.vol);
  line("tau    ", rep.tau);
  line("S      ", rep.S);
  line("j      ", rep.j);
  if (rep.mu) line("mu     ", *rep.mu);
  if (rep.s) line("s      ", *rep.s);
  if (rep.stilde) line("stilde ", *rep.stilde);
  if (rep.beta_direct) line("beta   ", *rep.beta_direct);
  if (rep.beta_s_form) line("beta(s)", *rep.beta_s_form);
  if (rep.beta_stilde_form) line("beta(s~)", *rep.beta_stilde_form);
  if (rep.beta_over_S) line("beta/S ", *rep.beta_over_S);
  if (!rep.ample) out << "  (class is big but not ample: beta-level fields omitted)\n";
  return out.str();
}

std::string report_json_text(const invariants::InvariantReport& rep) {
  ordered_json j;
  j["n"] = rep.n;
  j["ample"] = rep.ample;
  j["A"] = tagged_json(rep.A);
  j["vol"] = tagged_json(rep.vol);
  j["tau"] = tagged_json(rep.tau);
  j["S"] = tagged_json(rep.S);
  j["j"] = tagged_json(rep.j);
  if (rep.mu) j["mu"] = tagged_json(*rep.mu);
  if (rep.s) j["s"] = tagged_json(*rep.s);
  if (rep.stilde) j["stilde"] = tagged_json(*rep.stilde);
  if (rep.beta_direct) j["beta_direct"] = tagged_json(*rep.beta_direct);
  if (rep.beta_s_form) j["beta_s_form"] = tagged_json(*rep.beta_s_form);
  if (rep.beta_stilde_form) j["beta_stilde_form"] = tagged_json(*rep.beta_stilde_form);
  if (rep.beta_over_S) j["beta_over_S"] = tagged_json(*rep.beta_over_S);
  return j.dump(2) + "\n";
}

std::string scan_csv(const std::vector<scanner::ScanRecord>& records) {
  std::ostringstream out;
  out << "a,b,ample,zeta_num,zeta_den,min_val,mu,s,stilde,vol,ms\n";
  for (const auto& r : records) {
    out << to_string(r.a) << "," << to_string(r.b) << "," << (r.ample ? 1 : 0) << ",";
    if (r.zeta) {
      out << r.zeta->get_num().get_str() << "," << r.zeta->get_den().get_str() << ","
          << vec_text(r.min_val) << "," << to_string(*r.mu) << "," << to_string(*r.s) << ","
          << to_string(*r.stilde) << "," << to_string(*r.vol);
    } else {
      out << ",,,,,,";
    }
    out << "," << r.ms << "\n";
  }
  return out.str();
}

std::string scan_json_text(const scanner::SliceSpec& spec,
                           const std::vector<scanner::ScanRecord>& records) {
  ordered_json j;
  j["slice"] = {{"a0", to_string(spec.a0)}, {"a1", to_string(spec.a1)},
                {"b0", to_string(spec.b0)}, {"b1", to_string(spec.b1)},
                {"grid_a", spec.grid_a},    {"grid_b", spec.grid_b},
                {"budget", spec.budget}};
  ordered_json arr = ordered_json::array();
  for (const auto& r : records) {
    ordered_json e;
    e["a"] = to_string(r.a);
    e["b"] = to_string(r.b);
    e["ample"] = r.ample;
    if (r.zeta) {
      e["zeta"] = to_string(*r.zeta);
      e["min_val"] = vec_text(r.min_val);
      e["mu"] = to_string(*r.mu);
      e["s"] = to_string(*r.s);
      e["stilde"] = to_string(*r.stilde);
      e["vol"] = to_string(*r.vol);
    }
    e["ms"] = r.ms;
    arr.push_back(std::move(e));
  }
  j["records"] = std::move(arr);
  return j.dump(2) + "\n";
}

std::string scan_matrix(const scanner::SliceSpec& spec,
                        const std::vector<scanner::ScanRecord>& records, int digits) {
  const bool one_dim = spec.grid_b == 0;
  const size_t cols = one_dim ? 1 : static_cast<size_t>(spec.grid_b) + 1;
  const size_t rows = static_cast<size_t>(spec.grid_a) + 1;
  std::ostringstream out;
  for (size_t j = 0; j < cols; ++j) {
    for (size_t i = 0; i < rows; ++i) {
      const auto& r = records[i * cols + j];
      if (i) out << " ";
      out << (r.zeta ? decimal_string(*r.zeta, digits) : "nan");
    }
    out << "\n";
  }
  return out.str();
}

std::string continuity_json_text(const scanner::ContinuityReport& rep) {
  ordered_json j;
  j["max_jump"] = to_string(rep.max_jump);
  j["max_jump_decimal"] = decimal_string(rep.max_jump, 12);
  j["lipschitz_like"] = to_string(rep.lipschitz_like);
  j["ample_points"] = rep.ample_points;
  j["adjacent_pairs"] = rep.adjacent_pairs;
  ordered_json flags = ordered_json::array();
  for (const auto& f : rep.flags) {
    flags.push_back({{"level", to_string(f.level)},
                     {"a", to_string(f.a)},
                     {"b", to_string(f.b)}});
  }
  j["refinement_flags"] = std::move(flags);
  return j.dump(2) + "\n";
}

std::string s_estimate_json_text(const perturb::SEstimateResult& res) {
  ordered_json j;
  j["eps"] = to_string(res.eps);
  j["s_minus"] = interval_json(res.s_minus);
  j["s_plus"] = interval_json(res.s_plus);
  j["all_pass"] = res.all_pass;
  ordered_json arr = ordered_json::array();
  for (const auto& r : res.records) {
    arr.push_back({{"v", vec_text(r.v)},
                   {"S_L", to_string(r.s_l)},
                   {"S_Lprime", to_string(r.s_lprime)},
                   {"pass_lower", r.pass_lower},
                   {"pass_upper", r.pass_upper}});
  }
  j["records"] = std::move(arr);
  return j.dump(2) + "\n";
}

std::string modulus_json_text(const perturb::ModulusTable& table) {
  ordered_json j;
  QVec dir = table.direction.a;
  std::string dtext = "[";
  for (size_t i = 0; i < dir.size(); ++i) {
    if (i) dtext += ",";
    dtext += to_string(dir[i]);
  }
  j["direction"] = dtext + "]";
  j["f_monotone"] = table.f_monotone;
  j["h_monotone"] = table.h_monotone;
  ordered_json rows = ordered_json::array();
  for (const auto& r : table.rows) {
    ordered_json e;
    e["eps"] = to_string(r.eps);
    e["skipped"] = r.skipped;
    if (!r.skipped) {
      e["f_hat"] = to_string(r.f_hat);
      e["f_hat_filtered"] = to_string(r.f_hat_filtered);
      e["h_hat"] = to_string(r.h_hat);
      e["f_hat_decimal"] = decimal_string(r.f_hat, 12);
    }
    rows.push_back(std::move(e));
  }
  j["rows"] = std::move(rows);
  return j.dump(2) + "\n";
}

std::string sandwich_json_text(const perturb::SandwichResult& res) {
  ordered_json j;
  j["a"] = to_string(res.a);
  j["upper_nef"] = res.upper_nef;
  j["lower_nef"] = res.lower_nef;
  return j.dump(2) + "\n";
}

void write_file(const std::string& path, const std::string& text) {
  std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw InputError("cannot write file: " + path);
  out << text;
}

}  // namespace valstab::io
