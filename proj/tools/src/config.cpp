#include "config.hpp"

#include <charconv>
#include <fstream>
#include <set>

#include "spinwehrl/errors.hpp"

namespace spinwehrl::cli {

using nlohmann::json;

namespace {

// Reads one JSON object and remembers which keys were consumed, so that
// anything left over can be reported as unknown.
class Reader {
 public:
  Reader(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) fail("", "expected an object");
  }

  [[nodiscard]] bool has(const std::string& key) const { return node_.contains(key); }

  double number(const std::string& key, std::optional<double> fallback = std::nullopt) {
    const json* v = take(key);
    if (!v) return require(key, fallback);
    if (!v->is_number()) fail(key, "expected a number");
    return v->get<double>();
  }

  int integer(const std::string& key, std::optional<int> fallback = std::nullopt) {
    const json* v = take(key);
    if (!v) return require(key, fallback);
    if (!v->is_number_integer()) fail(key, "expected an integer");
    return v->get<int>();
  }

  std::string string(const std::string& key, std::optional<std::string> fallback = std::nullopt) {
    const json* v = take(key);
    if (!v) return require(key, std::move(fallback));
    if (!v->is_string()) fail(key, "expected a string");
    return v->get<std::string>();
  }

  std::vector<double> numbers(const std::string& key) {
    const json* v = take(key);
    if (!v) fail(key, "missing required field");
    if (!v->is_array()) fail(key, "expected an array of numbers");
    std::vector<double> out;
    for (const auto& x : *v) {
      if (!x.is_number()) fail(key, "expected an array of numbers");
      out.push_back(x.get<double>());
    }
    return out;
  }

  std::optional<Reader> object(const std::string& key) {
    const json* v = take(key);
    if (!v) return std::nullopt;
    return Reader(*v, field(key));
  }

  Reader required_object(const std::string& key) {
    auto r = object(key);
    if (!r) fail(key, "missing required object");
    return *r;
  }

  void finish() const {
    for (const auto& [k, _] : node_.items()) {
      if (!used_.count(k)) fail(k, "unknown key");
    }
  }

  [[nodiscard]] const std::string& path() const { return path_; }
  [[nodiscard]] std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    const std::string where = key.empty() ? (path_.empty() ? "<root>" : path_) : field(key);
    throw ConfigError(where + ": " + what);
  }

 private:
  const json* take(const std::string& key) {
    used_.insert(key);
    auto it = node_.find(key);
    return it == node_.end() ? nullptr : &*it;
  }

  template <class T>
  T require(const std::string& key, std::optional<T> fallback) const {
    if (!fallback) fail(key, "missing required field");
    return *fallback;
  }

  const json& node_;
  std::string path_;
  std::set<std::string> used_;
};

// Runs `f`, turning library precondition errors into config errors at `where`.
template <class F>
auto checked(const std::string& where, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

TimeSettings read_time(Reader& root, const TimeSettings& defaults) {
  TimeSettings t = defaults;
  if (auto r = root.object("time")) {
    t.t_max = r->number("t_max", defaults.t_max);
    t.dt = r->number("output_dt", defaults.dt);
    t.tol = r->number("tol", defaults.tol);
    r->finish();
  }
  if (!(t.tol > 0.0)) root.fail("time.tol", "must be > 0");
  if (!(t.dt > 0.0)) root.fail("time.output_dt", "must be > 0");
  if (!(t.t_max > 0.0)) root.fail("time.t_max", "must be > 0");
  if (t.t_max / t.dt > 1e7) root.fail("time.output_dt", "too many output points");
  return t;
}

DissipatorSpec read_dissipator(Reader r) {
  const std::string type = r.string("type");
  DissipatorSpec out;
  if (type == "dephasing") {
    out = Dephasing{r.number("lambda")};
  } else if (type == "damping") {
    const double gamma = r.number("gamma");
    const int given = int(r.has("nbar")) + int(r.has("tau_bar_z")) + int(r.has("temperature"));
    if (given != 1) r.fail("", "give exactly one of nbar, tau_bar_z, temperature");
    double nbar = 0.0;
    if (r.has("nbar")) {
      nbar = r.number("nbar");
    } else if (r.has("tau_bar_z")) {
      const double tb = r.number("tau_bar_z");
      nbar = checked(r.field("tau_bar_z"), [&] { return BathParams::from_tau_bar(1.0, tb).nbar(); });
    } else {
      const double temperature = r.number("temperature");
      const double omega = r.number("omega");
      nbar = checked(r.field("temperature"), [&] { return nbar_from_temperature(omega, temperature); });
    }
    out = AmplitudeDamping{gamma, nbar};
  } else {
    r.fail("type", "expected \"dephasing\" or \"damping\"");
  }
  r.finish();
  checked(r.path(), [&] {
    validate_dissipator(out);
    return 0;
  });
  return out;
}

HamiltonianSpec read_hamiltonian(Reader r) {
  const std::string type = r.string("type");
  HamiltonianSpec out;
  if (type == "static") {
    out = StaticJz{r.number("omega")};
  } else if (type == "rotating") {
    out = RotatingField{r.number("b0"), r.number("b1"), r.number("drive_omega")};
  } else {
    r.fail("type", "expected \"static\" or \"rotating\"");
  }
  r.finish();
  return out;
}

DensityMatrix read_initial(Reader r, SpinQuantumNumber j) {
  const int given = int(r.has("bloch")) + int(r.has("populations")) + int(r.has("gibbs")) + int(r.has("coherent"));
  if (given != 1) r.fail("", "give exactly one of bloch, populations, gibbs, coherent");
  std::optional<DensityMatrix> rho;
  if (r.has("bloch")) {
    const auto v = r.numbers("bloch");
    if (v.size() != 3) r.fail("bloch", "expected [x, y, z]");
    if (j.two_j() != 1) r.fail("bloch", "a Bloch vector needs spin two_j = 1");
    rho = checked(r.field("bloch"), [&] { return bloch_to_rho({v[0], v[1], v[2]}); });
  } else if (r.has("populations")) {
    const auto v = r.numbers("populations");
    if (v.size() != static_cast<std::size_t>(j.dim())) {
      r.fail("populations", "expected " + std::to_string(j.dim()) + " entries ordered m = J..-J");
    }
    const Eigen::VectorXd p = Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
    rho = checked(r.field("populations"), [&] { return DensityMatrix::from_populations(j, p); });
  } else if (r.has("gibbs")) {
    Reader g = r.required_object("gibbs");
    const double omega = g.number("omega");
    const double temperature = g.number("temperature");
    g.finish();
    rho = checked(r.field("gibbs"), [&] { return gibbs_state(j, omega, temperature); });
  } else {
    Reader c = r.required_object("coherent");
    const double theta = c.number("theta");
    const double phi = c.number("phi");
    c.finish();
    rho = checked(r.field("coherent"), [&] { return DensityMatrix::pure(j, coherent_state(j, theta, phi).amplitudes); });
  }
  r.finish();
  return *rho;
}

BlochVector read_bloch(Reader& r, const std::string& key, BlochVector fallback) {
  if (!r.has(key)) return fallback;
  const auto v = r.numbers(key);
  if (v.size() != 3) r.fail(key, "expected [x, y, z]");
  const BlochVector b{v[0], v[1], v[2]};
  checked(r.field(key), [&] { return bloch_to_rho(b); });
  return b;
}

const std::set<std::string> kRootKeys{"scenario",   "params",        "spin", "hamiltonian", "dissipator",
                                      "initial_state", "time", "grid", "output",      "compare"};

void check_bath(const std::string& where, double gamma, double omega, double temperature,
                const std::string& temperature_key) {
  checked(where + ".gamma", [&] { return BathParams(gamma, 0.0); });
  checked(where + "." + temperature_key, [&] { return nbar_from_temperature(omega, temperature); });
}

CurveKind read_curve_kind(Reader& r) {
  const std::string k = r.string("kind");
  for (CurveKind c : {CurveKind::dephasing_tau, CurveKind::damping_tau, CurveKind::damping_theta}) {
    if (k == to_string(c)) return c;
  }
  r.fail("kind", "expected dephasing_tau, damping_tau or damping_theta");
}

}  // namespace

std::string_view to_string(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::spontaneous_emission: return "spontaneous_emission";
    case ScenarioKind::thermal_quench: return "thermal_quench";
    case ScenarioKind::rotating_field: return "rotating_field";
    case ScenarioKind::photon_pulse: return "photon_pulse";
    case ScenarioKind::custom: return "custom";
    case ScenarioKind::rate_curve: return "rate_curve";
  }
  return "unknown";
}

const std::vector<ScenarioInfo>& scenario_catalog() {
  static const std::vector<ScenarioInfo> catalog{
      {ScenarioKind::spontaneous_emission, "spin 1/2 decaying from the excited state into a thermal bath"},
      {ScenarioKind::thermal_quench, "spin 1/2 Gibbs state relaxing to a bath at another temperature"},
      {ScenarioKind::rotating_field, "spin 1/2 in a rotating field with dephasing or damping"},
      {ScenarioKind::photon_pulse, "two-level atom excited by a single-photon exponential pulse"},
      {ScenarioKind::custom, "any spin, static or rotating field, quadrature rates"},
      {ScenarioKind::rate_curve, "closed-form spin 1/2 rate curves (tau or theta sweeps)"},
  };
  return catalog;
}

std::optional<ScenarioKind> scenario_from_string(std::string_view name) {
  for (const auto& info : scenario_catalog()) {
    if (to_string(info.kind) == name) return info.kind;
  }
  return std::nullopt;
}

ScenarioConfig parse_config(const json& doc) {
  ScenarioConfig cfg;
  cfg.raw = doc;
  Reader root(doc, "");
  if (!doc.is_object()) root.fail("", "expected a JSON object");
  for (const auto& [k, _] : doc.items()) {
    if (!kRootKeys.count(k)) root.fail(k, "unknown key");
  }
  const std::string name = root.string("scenario");
  const auto kind = scenario_from_string(name);
  if (!kind) root.fail("scenario", "unknown scenario \"" + name + "\"");
  cfg.kind = *kind;
  cfg.csv_name = std::string(to_string(cfg.kind)) + ".csv";

  if (auto g = root.object("grid")) {
    cfg.n_theta = g->integer("n_theta", cfg.n_theta);
    cfg.n_phi = g->integer("n_phi", cfg.n_phi);
    g->finish();
    if (cfg.n_theta < 8 || cfg.n_phi < 8) root.fail("grid", "n_theta and n_phi must be >= 8");
  }
  if (auto o = root.object("output")) {
    cfg.csv_name = o->string("csv", cfg.csv_name);
    o->finish();
    if (cfg.csv_name.empty()) root.fail("output.csv", "must not be empty");
  }
  if (auto c = root.object("compare")) {
    cfg.compare_tolerance = c->number("tolerance", cfg.compare_tolerance);
    c->finish();
    if (!(cfg.compare_tolerance > 0.0)) root.fail("compare.tolerance", "must be > 0");
  }

  switch (cfg.kind) {
    case ScenarioKind::spontaneous_emission: {
      auto& p = cfg.spontaneous;
      Reader r = root.required_object("params");
      p.omega = r.number("omega", p.omega);
      p.gamma = r.number("gamma", p.gamma);
      p.temperature = r.number("temperature", p.temperature);
      r.finish();
      check_bath("params", p.gamma, p.omega, p.temperature, "temperature");
      p.time = read_time(root, p.time);
      cfg.time = p.time;
      break;
    }
    case ScenarioKind::thermal_quench: {
      auto& p = cfg.quench;
      Reader r = root.required_object("params");
      p.omega = r.number("omega", p.omega);
      p.gamma = r.number("gamma", p.gamma);
      p.initial_temperature = r.number("initial_temperature", p.initial_temperature);
      p.bath_temperature = r.number("bath_temperature", p.bath_temperature);
      r.finish();
      check_bath("params", p.gamma, p.omega, p.bath_temperature, "bath_temperature");
      checked("params.initial_temperature",
              [&] { return gibbs_state(spin_half(), p.omega, p.initial_temperature); });
      p.time = read_time(root, p.time);
      cfg.time = p.time;
      break;
    }
    case ScenarioKind::rotating_field: {
      auto& p = cfg.rotating;
      Reader r = root.required_object("params");
      p.b0 = r.number("b0", p.b0);
      p.b1 = r.number("b1", p.b1);
      p.drive_omega = r.number("drive_omega", p.drive_omega);
      p.initial = read_bloch(r, "initial_bloch", p.initial);
      r.finish();
      p.dissipator = read_dissipator(root.required_object("dissipator"));
      p.time = read_time(root, p.time);
      cfg.time = p.time;
      break;
    }
    case ScenarioKind::photon_pulse: {
      auto& p = cfg.pulse;
      Reader r = root.required_object("params");
      p.gamma0 = r.number("gamma0", p.gamma0);
      p.capital_omega = r.number("capital_omega", p.capital_omega);
      p.a0 = r.number("a0", p.a0);
      p.omega0 = r.number("omega0", p.omega0);
      p.omega_p = r.number("omega_p", p.omega_p);
      r.finish();
      checked("params", [&] {
        p.validate();
        return 0;
      });
      cfg.time = read_time(root, cfg.time);
      break;
    }
    case ScenarioKind::custom: {
      auto& p = cfg.custom;
      Reader s = root.required_object("spin");
      const int two_j = s.integer("two_j");
      s.finish();
      const SpinQuantumNumber j = checked("spin.two_j", [&] { return SpinQuantumNumber(two_j); });
      p.hamiltonian = read_hamiltonian(root.required_object("hamiltonian"));
      p.dissipator = read_dissipator(root.required_object("dissipator"));
      cfg.initial = read_initial(root.required_object("initial_state"), j);
      p.time = read_time(root, p.time);
      cfg.time = p.time;
      break;
    }
    case ScenarioKind::rate_curve: {
      auto& p = cfg.curve;
      Reader r = root.required_object("params");
      p.kind = read_curve_kind(r);
      p.points = r.integer("points", p.points);
      p.rate = r.number("rate", p.rate);
      p.tau_bar_z = r.number("tau_bar_z", p.tau_bar_z);
      if (r.has("taus")) p.taus = r.numbers("taus");
      r.finish();
      if (p.points < 2) root.fail("params.points", "must be >= 2");
      if (!(p.rate >= 0.0)) root.fail("params.rate", "must be >= 0");
      if (p.kind == CurveKind::damping_tau) {
        checked("params.tau_bar_z", [&] { return BathParams::from_tau_bar(p.rate, p.tau_bar_z); });
      }
      if (p.kind == CurveKind::damping_theta) {
        if (p.taus.empty()) root.fail("params.taus", "must not be empty");
        for (double t : p.taus) {
          if (!(t >= 0.0 && t <= 1.0)) root.fail("params.taus", "values must lie in [0, 1]");
        }
      }
      break;
    }
  }
  root.finish();
  cfg.custom.n_theta = cfg.n_theta;
  cfg.custom.n_phi = cfg.n_phi;
  return cfg;
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open file");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

ScenarioConfig load_config(const std::filesystem::path& path) { return parse_config(read_json(path)); }

void apply_grid_override(ScenarioConfig& cfg, std::string_view spec) {
  const auto x = spec.find('x');
  int nt = 0;
  int np = 0;
  const auto parse = [](std::string_view s, int& out) {
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
  };
  if (x == std::string_view::npos || !parse(spec.substr(0, x), nt) || !parse(spec.substr(x + 1), np)) {
    throw ConfigError("--grid: expected NxM, got \"" + std::string(spec) + "\"");
  }
  if (nt < 8 || np < 8) throw ConfigError("--grid: both sizes must be >= 8");
  cfg.n_theta = cfg.custom.n_theta = nt;
  cfg.n_phi = cfg.custom.n_phi = np;
}

void apply_tol_override(ScenarioConfig& cfg, double tol) {
  if (!(tol > 0.0)) throw ConfigError("--tol: must be > 0");
  cfg.time.tol = tol;
  cfg.spontaneous.time.tol = tol;
  cfg.quench.time.tol = tol;
  cfg.rotating.time.tol = tol;
  cfg.custom.time.tol = tol;
}

std::optional<DissipatorSpec> scenario_dissipator(const ScenarioConfig& cfg) {
  switch (cfg.kind) {
    case ScenarioKind::spontaneous_emission: {
      const auto& p = cfg.spontaneous;
      return AmplitudeDamping{p.gamma, nbar_from_temperature(p.omega, p.temperature)};
    }
    case ScenarioKind::thermal_quench: {
      const auto& p = cfg.quench;
      return AmplitudeDamping{p.gamma, nbar_from_temperature(p.omega, p.bath_temperature)};
    }
    case ScenarioKind::rotating_field: return cfg.rotating.dissipator;
    case ScenarioKind::photon_pulse: {
      const PulseParams p = cfg.pulse;
      return TimeDependentDamping{[p](double t) { return pulse_effective_rates(p, t).gamma_t; }};
    }
    case ScenarioKind::custom: return cfg.custom.dissipator;
    case ScenarioKind::rate_curve: return std::nullopt;
  }
  return std::nullopt;
}

SpinQuantumNumber scenario_spin(const ScenarioConfig& cfg) {
  return cfg.kind == ScenarioKind::custom ? cfg.initial->spin() : spin_half();
}

ScenarioResult run_scenario(const ScenarioConfig& cfg) {
  switch (cfg.kind) {
    case ScenarioKind::spontaneous_emission: return spontaneous_emission(cfg.spontaneous);
    case ScenarioKind::thermal_quench: return thermal_quench(cfg.quench);
    case ScenarioKind::rotating_field: return rotating_field(cfg.rotating);
    case ScenarioKind::photon_pulse: return photon_pulse_scenario(cfg.pulse, cfg.time);
    case ScenarioKind::custom: return custom_scenario(*cfg.initial, cfg.custom);
    case ScenarioKind::rate_curve: return rate_curve(cfg.curve);
  }
  throw ConfigError("scenario: unhandled kind");
}

}  // namespace spinwehrl::cli
