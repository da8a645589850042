#include "decouple/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "decouple/csv.hpp"
#include "decouple/errors.hpp"

namespace decouple {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  const auto e = s.find_last_not_of(" \t\r");
  return b == std::string_view::npos ? std::string() : std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : value) {
    if (c == ',') {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

bool parse_double(const std::string& text, double& out) {
  const auto slash = text.find('/');
  if (slash != std::string::npos) {
    double num = 0.0, den = 0.0;
    if (!parse_double(trim(text.substr(0, slash)), num) || !parse_double(trim(text.substr(slash + 1)), den)) return false;
    if (den == 0.0) return false;
    out = num / den;
    return true;
  }
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size() && !text.empty() && std::isfinite(out);
}

struct Entry {
  std::string value;
  std::size_t line;
  bool used = false;
};

class Entries {
 public:
  explicit Entries(std::map<std::string, Entry> e) : e_(std::move(e)) {}

  bool has(const std::string& key) const { return e_.count(key) != 0; }

  const std::string* raw(const std::string& key) {
    auto it = e_.find(key);
    if (it == e_.end()) return nullptr;
    it->second.used = true;
    return &it->second.value;
  }

  std::optional<double> real(const std::string& key) {
    const std::string* v = raw(key);
    if (!v) return std::nullopt;
    double d = 0.0;
    if (!parse_double(*v, d)) throw ValidationError(key, "expected a number, got '" + *v + "'");
    return d;
  }

  std::optional<int> integer(const std::string& key) {
    const std::string* v = raw(key);
    if (!v) return std::nullopt;
    int i = 0;
    const auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), i);
    if (ec != std::errc() || ptr != v->data() + v->size() || v->empty()) {
      throw ValidationError(key, "expected an integer, got '" + *v + "'");
    }
    return i;
  }

  std::optional<bool> boolean(const std::string& key) {
    const std::string* v = raw(key);
    if (!v) return std::nullopt;
    if (*v == "true" || *v == "yes" || *v == "1") return true;
    if (*v == "false" || *v == "no" || *v == "0") return false;
    throw ValidationError(key, "expected true or false, got '" + *v + "'");
  }

  std::optional<std::vector<int>> integers(const std::string& key) {
    const std::string* v = raw(key);
    if (!v) return std::nullopt;
    std::vector<int> out;
    for (const auto& item : split_list(*v)) {
      int i = 0;
      const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), i);
      if (ec != std::errc() || ptr != item.data() + item.size() || item.empty()) {
        throw ValidationError(key, "expected a comma-separated list of integers, got '" + *v + "'");
      }
      out.push_back(i);
    }
    return out;
  }

  std::vector<std::string> keys_with_prefix(const std::string& prefix) const {
    std::vector<std::string> out;
    for (const auto& [k, v] : e_) {
      if (k.rfind(prefix, 0) == 0) out.push_back(k);
    }
    return out;
  }

  void reject_unused() const {
    for (const auto& [k, v] : e_) {
      if (!v.used) throw ValidationError(k, "unknown key (line " + std::to_string(v.line) + ")");
    }
  }

 private:
  std::map<std::string, Entry> e_;
};

std::map<std::string, Entry> tokenize(std::string_view text) {
  std::map<std::string, Entry> entries;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ParseError("expected 'key = value', got '" + body + "'", line_no);
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    if (key.empty()) throw ParseError("missing key before '='", line_no);
    if (value.empty()) throw ParseError("missing value for '" + key + "'", line_no);
    for (char c : key) {
      if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.')) {
        throw ParseError("invalid character in key '" + key + "'", line_no);
      }
    }
    if (entries.count(key)) {
      throw ParseError("duplicate key '" + key + "' (first set on line " + std::to_string(entries[key].line) + ")",
                       line_no);
    }
    entries.emplace(key, Entry{value, line_no});
  }
  return entries;
}

ControlParams parse_case(const std::string& token) {
  if (token == "bare") return ControlParams::bare();
  const auto colon = token.find(':');
  int n = 0, m = 0;
  auto to_int = [&](const std::string& s, int& out) {
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
      throw ValidationError("trace.cases", "expected bare, n or n:m, got '" + token + "'");
    }
  };
  if (colon == std::string::npos) {
    to_int(token, n);
    return ControlParams::dephasing(n);
  }
  to_int(trim(token.substr(0, colon)), n);
  to_int(trim(token.substr(colon + 1)), m);
  return ControlParams::full(n, m);
}

void require_positive(double v, const std::string& key) {
  if (!(v > 0.0)) throw ValidationError(key, "must be positive");
}

}  // namespace

std::string_view to_string(Experiment e) {
  switch (e) {
    case Experiment::trace: return "trace";
    case Experiment::trace_derivative: return "trace_derivative";
    case Experiment::bloch_sweep: return "bloch_sweep";
    case Experiment::eta_ratio_sweep: return "eta_ratio_sweep";
    case Experiment::full_protection_table: return "full_protection_table";
  }
  return "?";
}

Experiment parse_experiment(std::string_view name) {
  for (Experiment e : {Experiment::trace, Experiment::trace_derivative, Experiment::bloch_sweep,
                       Experiment::eta_ratio_sweep, Experiment::full_protection_table}) {
    if (to_string(e) == name) return e;
  }
  throw ValidationError("experiment", "unknown experiment '" + std::string(name) + "'");
}

ThermalParams ScenarioConfig::thermal() const {
  if (beta_omega_c_override) {
    ThermalParams th;
    th.beta_omega_c = *beta_omega_c_override;
    th.validate();
    return th;
  }
  return ThermalParams::from_physical(temperature_kelvin, tau_seconds, omega_c_tau);
}

const ReservoirSpec& ScenarioConfig::dephasing() const {
  for (const auto& r : reservoirs) {
    if (r.error_class == ErrorClass::dephasing) return r;
  }
  throw ValidationError("reservoirs", "scenario has no dephasing reservoir");
}

OpenSystem ScenarioConfig::system(const ControlParams& c, std::vector<ReservoirSpec> rs) const {
  OpenSystem sys{c, std::move(rs), thermal()};
  sys.validate();
  return sys;
}

IntegratorConfig ScenarioConfig::integrator_for(const ControlParams& c) const {
  IntegratorConfig cfg = IntegratorConfig::defaults(c);
  if (steps) cfg.steps = *steps;
  cfg.convergence_tol = tol;
  cfg.validate(c);
  return cfg;
}

std::vector<std::pair<std::string, std::string>> ScenarioConfig::resolved() const {
  std::vector<std::pair<std::string, std::string>> out;
  out.emplace_back("experiment", std::string(to_string(experiment)));
  out.emplace_back("tau_seconds", format_number(tau_seconds));
  out.emplace_back("temperature_kelvin", format_number(temperature_kelvin));
  out.emplace_back("omega_c_tau", format_number(omega_c_tau));
  out.emplace_back("beta_omega_c", format_number(thermal().beta_omega_c));
  out.emplace_back("beta_omega_c_source", beta_omega_c_override ? "override" : "derived from temperature and tau");
  if (experiment == Experiment::trace) {
    std::string cases;
    for (const auto& c : trace_cases) cases += (cases.empty() ? "" : "; ") + c.describe();
    out.emplace_back("trace.cases", cases);
  } else if (experiment != Experiment::full_protection_table) {
    out.emplace_back("control", control.describe());
  } else {
    out.emplace_back("control.n", std::to_string(control.n));
    out.emplace_back("control.m", std::to_string(control.m));
  }
  for (std::size_t i = 0; i < reservoirs.size(); ++i) {
    const auto& r = reservoirs[i];
    out.emplace_back("reservoirs." + std::to_string(i + 1),
                     std::string(to_string(r.error_class)) + " eta=" + format_number(r.eta) +
                         " s=" + std::to_string(r.s));
  }
  if (experiment == Experiment::trace || experiment == Experiment::trace_derivative) {
    out.emplace_back("initial.theta", format_number(theta));
    out.emplace_back("initial.phi", format_number(phi));
  } else {
    out.emplace_back("sweep.n_theta", std::to_string(n_theta));
    out.emplace_back("sweep.n_phi", std::to_string(n_phi));
  }
  if (experiment == Experiment::trace_derivative) {
    std::string s;
    for (int v : derivative_s) s += (s.empty() ? "" : ",") + std::to_string(v);
    out.emplace_back("trace_derivative.s", s);
  }
  if (experiment == Experiment::eta_ratio_sweep || experiment == Experiment::full_protection_table) {
    std::string s;
    for (int v : added_s) s += (s.empty() ? "" : ",") + std::to_string(v);
    out.emplace_back("added_s", s);
  }
  if (experiment == Experiment::eta_ratio_sweep) {
    out.emplace_back("eta_sweep.points", std::to_string(eta_points));
    out.emplace_back("eta_sweep.min", format_number(eta_min));
    out.emplace_back("eta_sweep.max", format_number(eta_max));
    out.emplace_back("eta_sweep.include_zero", eta_include_zero ? "true" : "false");
  }
  if (experiment == Experiment::full_protection_table) out.emplace_back("table.eta_ratio", format_number(table_eta_ratio));
  out.emplace_back("integrator.steps", steps ? std::to_string(*steps) : "default (max(8000, 40(4max(n,m)+1)))");
  out.emplace_back("integrator.tol", format_number(tol));
  return out;
}

ScenarioConfig parse_scenario(std::string_view text) {
  Entries e(tokenize(text));
  ScenarioConfig cfg;

  const std::string* exp = e.raw("experiment");
  if (!exp) throw ValidationError("experiment", "required key is missing");
  cfg.experiment = parse_experiment(*exp);

  if (auto v = e.real("tau_seconds")) cfg.tau_seconds = *v;
  require_positive(cfg.tau_seconds, "tau_seconds");
  if (auto v = e.real("temperature_kelvin")) cfg.temperature_kelvin = *v;
  require_positive(cfg.temperature_kelvin, "temperature_kelvin");
  if (auto v = e.real("beta_omega_c")) {
    require_positive(*v, "beta_omega_c");
    cfg.beta_omega_c_override = *v;
  }
  cfg.omega_c_tau = 2.0 * std::numbers::pi;
  if (auto v = e.real("omega_c_tau")) cfg.omega_c_tau = *v;
  require_positive(cfg.omega_c_tau, "omega_c_tau");

  // Reservoirs: reservoirs.<k>.class / .eta / .s
  std::set<std::string> indices;
  for (const auto& key : e.keys_with_prefix("reservoirs.")) {
    const auto rest = key.substr(std::string("reservoirs.").size());
    const auto dot = rest.find('.');
    if (dot == std::string::npos) throw ValidationError(key, "expected reservoirs.<index>.<field>");
    indices.insert(rest.substr(0, dot));
  }
  for (const auto& idx : indices) {
    const std::string base = "reservoirs." + idx + ".";
    const std::string* cls = e.raw(base + "class");
    if (!cls) throw ValidationError(base + "class", "required key is missing");
    ReservoirSpec r;
    try {
      r.error_class = parse_error_class(*cls);
    } catch (const ValidationError& err) {
      throw ValidationError(base + "class", err.what());
    }
    const auto eta = e.real(base + "eta");
    if (!eta) throw ValidationError(base + "eta", "required key is missing");
    r.eta = *eta;
    if (!(r.eta >= 0.0)) throw ValidationError(base + "eta", "ratio must be >= 0");
    r.s = e.integer(base + "s").value_or(1);
    if (r.s < 1 || r.s > 12) throw ValidationError(base + "s", "ohmicity exponent must be an integer in [1, 12]");
    r.omega_c = cfg.omega_c_tau;
    cfg.reservoirs.push_back(r);
  }
  validate_reservoirs(cfg.reservoirs);

  const bool sweep_like = cfg.experiment == Experiment::bloch_sweep || cfg.experiment == Experiment::eta_ratio_sweep ||
                          cfg.experiment == Experiment::full_protection_table;
  if (cfg.reservoirs.empty()) {
    ReservoirSpec dephasing;
    dephasing.error_class = ErrorClass::dephasing;
    dephasing.eta = 1.0 / 16.0;
    dephasing.s = sweep_like ? 3 : 1;
    dephasing.omega_c = cfg.omega_c_tau;
    cfg.reservoirs.push_back(dephasing);
  }
  const bool has_dephasing = std::any_of(cfg.reservoirs.begin(), cfg.reservoirs.end(),
                                         [](const ReservoirSpec& r) { return r.error_class == ErrorClass::dephasing; });
  if (!has_dephasing) throw ValidationError("reservoirs", "a dephasing reservoir is required");
  if (cfg.experiment == Experiment::eta_ratio_sweep || cfg.experiment == Experiment::full_protection_table) {
    if (cfg.reservoirs.size() != 1) {
      throw ValidationError("reservoirs", "only the dephasing reservoir may be configured; the bit-flip and "
                                          "dissipation baths are generated by the experiment");
    }
  }

  // Control.
  cfg.control_given = e.has("control.mode");
  if (const std::string* mode = e.raw("control.mode")) cfg.control.mode = parse_control_mode(*mode);
  const auto n = e.integer("control.n");
  const auto m = e.integer("control.m");
  switch (cfg.experiment) {
    case Experiment::eta_ratio_sweep:
      if (cfg.control_given && cfg.control.mode != ControlMode::dephasing_protect) {
        throw ValidationError("control.mode", "eta_ratio_sweep runs the dephasing-protection field only");
      }
      cfg.control.mode = ControlMode::dephasing_protect;
      cfg.control.n = n.value_or(25);
      break;
    case Experiment::full_protection_table:
      cfg.control.mode = ControlMode::full_protect;
      cfg.control.n = n.value_or(25);
      cfg.control.m = m.value_or(10);
      break;
    default:
      if (cfg.control.mode == ControlMode::full_protect && !m) {
        throw ValidationError("control.m", "required for full_protect");
      }
      if (cfg.control.mode != ControlMode::bare && !n) throw ValidationError("control.n", "required for protected modes");
      cfg.control.n = cfg.control.mode == ControlMode::bare ? 0 : *n;
      cfg.control.m = cfg.control.mode == ControlMode::full_protect ? *m : 0;
      break;
  }
  cfg.control.validate();

  // Initial state / sweep grid.
  cfg.theta = e.real("initial.theta").value_or(std::numbers::pi / 2.0);
  cfg.phi = e.real("initial.phi").value_or(0.0);
  cfg.n_theta = e.integer("sweep.n_theta").value_or(25);
  cfg.n_phi = e.integer("sweep.n_phi").value_or(50);
  if (cfg.n_theta < 2) throw ValidationError("sweep.n_theta", "need at least 2 polar angles");
  if (cfg.n_phi < 1) throw ValidationError("sweep.n_phi", "need at least 1 azimuth");

  // Integrator.
  if (auto v = e.integer("integrator.steps")) {
    if (*v < 1) throw ValidationError("integrator.steps", "must be positive");
    cfg.steps = *v;
  }
  if (auto v = e.real("integrator.tol")) cfg.tol = *v;
  require_positive(cfg.tol, "integrator.tol");

  // Experiment-specific.
  if (const std::string* cases = e.raw("trace.cases")) {
    for (const auto& token : split_list(*cases)) cfg.trace_cases.push_back(parse_case(token));
  } else if (cfg.control_given) {
    cfg.trace_cases.push_back(cfg.control);
  } else if (cfg.dephasing().s == 1) {
    cfg.trace_cases = {ControlParams::bare(), ControlParams::dephasing(2), ControlParams::dephasing(3),
                       ControlParams::dephasing(5)};
  } else {
    cfg.trace_cases = {ControlParams::bare(), ControlParams::dephasing(3), ControlParams::dephasing(5),
                       ControlParams::dephasing(15)};
  }
  for (const auto& c : cfg.trace_cases) {
    try {
      c.validate();
    } catch (const ValidationError& err) {
      throw ValidationError("trace.cases", err.what());
    }
  }

  cfg.derivative_s = e.integers("trace_derivative.s").value_or(std::vector<int>{1, 3});
  cfg.added_s = e.integers("added_baths.s").value_or(std::vector<int>{1, 3});
  for (int s : cfg.derivative_s) {
    if (s < 1 || s > 12) throw ValidationError("trace_derivative.s", "ohmicity exponents must lie in [1, 12]");
  }
  for (int s : cfg.added_s) {
    if (s < 1 || s > 12) throw ValidationError("added_baths.s", "ohmicity exponents must lie in [1, 12]");
  }

  cfg.eta_points = e.integer("eta_sweep.points").value_or(13);
  cfg.eta_min = e.real("eta_sweep.min").value_or(1e-3);
  cfg.eta_max = e.real("eta_sweep.max").value_or(1.0);
  cfg.eta_include_zero = e.boolean("eta_sweep.include_zero").value_or(true);
  if (cfg.eta_points < 1) throw ValidationError("eta_sweep.points", "need at least one point");
  require_positive(cfg.eta_min, "eta_sweep.min");
  if (!(cfg.eta_max >= cfg.eta_min)) throw ValidationError("eta_sweep.max", "must be >= eta_sweep.min");

  cfg.table_eta_ratio = e.real("table.eta_ratio").value_or(0.2);
  if (!(cfg.table_eta_ratio >= 0.0)) throw ValidationError("table.eta_ratio", "ratio must be >= 0");

  e.reject_unused();
  return cfg;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("cannot open scenario file " + path.string());
  std::ostringstream buf;
  buf << is.rdbuf();
  return parse_scenario(buf.str());
}

}  // namespace decouple
