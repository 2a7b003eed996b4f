#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <thread>

#include "spinwehrl/errors.hpp"

namespace spinwehrl::cli {

namespace fs = std::filesystem;

namespace {

constexpr double kRelFloor = 1e-8;
constexpr double kScaleFloor = 1e-6;

std::string fmt(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

// Collects (a, b) samples per method pair; deviations are relative to
// max(|a|, |b|, 1e-6 * largest |value| of that quantity, 1e-8), so samples
// where a rate has decayed to round-off level do not dominate.
class DeltaTracker {
 public:
  void add(const std::string& q, const std::string& a, const std::string& b, double va, double vb, double t) {
    scale_[q] = std::max({scale_[q], std::abs(va), std::abs(vb)});
    for (auto& s : series_) {
      if (s.delta.quantity == q && s.delta.method_a == a && s.delta.method_b == b) {
        s.samples.push_back({va, vb, t});
        return;
      }
    }
    series_.push_back({{q, a, b, 0.0, t}, {{va, vb, t}}});
  }

  std::vector<MethodDelta> take() {
    std::vector<MethodDelta> out;
    for (auto& s : series_) {
      const double floor = std::max(kRelFloor, kScaleFloor * scale_[s.delta.quantity]);
      for (const auto& [va, vb, t] : s.samples) {
        const double rel = std::abs(va - vb) / std::max({std::abs(va), std::abs(vb), floor});
        if (rel > s.delta.max_rel || std::isnan(rel)) {
          s.delta.max_rel = rel;
          s.delta.at_t = t;
        }
      }
      out.push_back(s.delta);
    }
    return out;
  }

 private:
  struct Sample {
    double a, b, t;
  };
  struct Series {
    MethodDelta delta;
    std::vector<Sample> samples;
  };
  std::vector<Series> series_;
  std::map<std::string, double> scale_;
};

BathParams bath_for(const DissipatorSpec& d, double t) {
  if (const auto* ad = std::get_if<AmplitudeDamping>(&d)) return {ad->gamma, ad->nbar};
  return {std::get<TimeDependentDamping>(d).gamma_t(t), 0.0};
}

ScenarioConfig prepare(const CommandOptions& opts) {
  if (opts.config.empty()) throw ConfigError("--config: a config path is required");
  ScenarioConfig cfg = load_config(opts.config);
  if (opts.grid) apply_grid_override(cfg, *opts.grid);
  if (opts.tol && cfg.kind != ScenarioKind::rate_curve) apply_tol_override(cfg, *opts.tol);
  return cfg;
}

// Maps exceptions onto exit codes.
template <class F>
int guarded(std::ostream& err, F&& f) {
  try {
    return f();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const Error& e) {
    err << "numerical failure: " << e.name() << ": " << e.what() << '\n';
    return kExitNumerical;
  }
}

void write_file(const fs::path& path, const Table& table) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  std::ofstream f(path);
  if (!f) throw ConfigError("--out: cannot write " + path.string());
  write_csv(table, f);
}

void print_deltas(const std::vector<MethodDelta>& deltas, std::ostream& out) {
  char line[160];
  std::snprintf(line, sizeof line, "  %-8s %-22s %-22s %12s %10s\n", "quantity", "method_a", "method_b", "max_rel", "at_t");
  out << line;
  for (const auto& d : deltas) {
    std::snprintf(line, sizeof line, "  %-8s %-22s %-22s %12.3e %10.4g\n", d.quantity.c_str(), d.method_a.c_str(),
                  d.method_b.c_str(), d.max_rel, d.at_t);
    out << line;
  }
}

double parse_value(const std::string& s) {
  double v = 0.0;
  const char* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) throw ConfigError("--values: not a number: \"" + s + "\"");
  return v;
}

nlohmann::json* find_path(nlohmann::json& doc, const std::string& path) {
  nlohmann::json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const std::size_t dot = path.find('.', start);
    const std::string key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (!node->is_object() || !node->contains(key)) return nullptr;
    node = &(*node)[key];
    if (dot == std::string::npos) return node;
    start = dot + 1;
  }
}

}  // namespace

std::vector<MethodDelta> method_deltas(const ScenarioConfig& cfg, const ScenarioResult& result, bool final_only) {
  const auto dissipator = scenario_dissipator(cfg);
  if (!dissipator || result.trajectory.states.empty()) {
    throw NothingToCompare("scenario: " + std::string(to_string(cfg.kind)) + " has a single method");
  }
  const DissipatorSpec& d = *dissipator;
  const GridPtr grid = make_shared_grid(cfg.n_theta, cfg.n_phi);
  DeltaTracker tracker;

  const std::size_t n = result.trajectory.states.size();
  for (std::size_t i = final_only ? n - 1 : 0; i < n; ++i) {
    const double t = result.trajectory.times[i];
    const DensityMatrix& rho = result.trajectory.states[i];
    const bool half = rho.spin().two_j() == 1;
    const EntropyRates quad = wehrl_rates_quadrature(rho, d, t, 0.0, grid);
    tracker.add("dS/dt", "direct", "Pi-Phi", quad.ds_dt, quad.pi - quad.phi, t);

    if (const auto* deph = std::get_if<Dephasing>(&d)) {
      if (half) {
        tracker.add("Pi", "quadrature", "closed_form_spin_half", quad.pi,
                    dephasing_pi_spin_half(rho_to_bloch(rho), deph->lambda), t);
      }
      continue;
    }
    const BathParams bath = bath_for(d, t);
    const double phi_ref = damping_phi(rho, bath);
    const std::string ref_name(to_string(bath.zero_temperature() ? RateMethod::zero_T : RateMethod::exact_hypergeom));
    tracker.add("Phi", "quadrature", ref_name, quad.phi, phi_ref, t);
    if (half) {
      const EntropyRates cf = spin_half_damping_rates(rho_to_bloch(rho), bath, 0.0);
      tracker.add("Phi", "closed_form_spin_half", ref_name, cf.phi, phi_ref, t);
      tracker.add("Phi", "closed_form_spin_half", "quadrature", cf.phi, quad.phi, t);
      tracker.add("Pi", "closed_form_spin_half", "quadrature", cf.pi, quad.pi, t);
    }
  }
  return tracker.take();
}

int cmd_run(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ScenarioConfig cfg = prepare(opts);
    const ScenarioResult r = run_scenario(cfg);
    const fs::path path = fs::path(opts.out_dir) / cfg.csv_name;
    write_file(path, r.table);

    out << "scenario " << r.scenario << " (" << r.table.rows.size() << " rows) -> " << path.string() << '\n';
    if (opts.trajectory && !r.trajectory.states.empty()) {
      const fs::path traj = path.parent_path() / (path.stem().string() + "_trajectory.csv");
      write_file(traj, trajectory_table(r.trajectory));
      out << "trajectory -> " << traj.string() << '\n';
    }
    if (!r.wehrl.empty()) {
      const auto& w = r.wehrl.back();
      const auto& v = r.von_neumann.back();
      out << "  final Pi_wehrl " << fmt(w.pi) << "  Phi_wehrl " << fmt(w.phi) << "  Pi_vN " << fmt(v.pi)
          << "  Phi_vN " << fmt(v.phi) << '\n';
    }
    for (const auto& [k, val] : r.scalars) out << "  " << k << " " << fmt(val) << '\n';
    if (cfg.kind != ScenarioKind::rate_curve) {
      out << "method agreement at the final time:\n";
      print_deltas(method_deltas(cfg, r, true), out);
    }
    return kExitOk;
  });
}

int cmd_compare(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    CommandOptions run_opts = opts;
    run_opts.tol.reset();  // --tol is the comparison tolerance here
    ScenarioConfig cfg = prepare(run_opts);
    const double tol = opts.tol.value_or(cfg.compare_tolerance);
    if (!(tol > 0.0)) throw ConfigError("--tol: must be > 0");
    if (cfg.kind == ScenarioKind::rate_curve) {
      throw NothingToCompare("scenario: rate_curve has a single method");
    }
    const ScenarioResult r = run_scenario(cfg);
    const auto deltas = method_deltas(cfg, r, false);
    out << "scenario " << r.scenario << ", " << r.trajectory.times.size() << " states, grid " << cfg.n_theta << "x"
        << cfg.n_phi << '\n';
    print_deltas(deltas, out);
    const bool ok = std::all_of(deltas.begin(), deltas.end(), [&](const MethodDelta& d) { return d.max_rel <= tol; });
    out << (ok ? "PASS" : "FAIL") << " (tolerance " << fmt(tol) << ")\n";
    return ok ? kExitOk : kExitDeviation;
  });
}

int cmd_sweep(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&]() -> int {
    if (opts.config.empty()) throw ConfigError("--config: a config path is required");
    if (opts.param.empty()) throw ConfigError("--param: a parameter path is required");
    if (opts.values.empty()) throw ConfigError("--values: at least one value is required");
    std::vector<double> values;
    for (const auto& s : opts.values) values.push_back(parse_value(s));

    nlohmann::json base = read_json(opts.config);
    const nlohmann::json* target = find_path(base, opts.param);
    if (!target || !target->is_number()) {
      throw ConfigError("--param: " + opts.param + " does not name a numeric field of the config");
    }

    std::vector<ScenarioConfig> configs;
    for (double v : values) {
      nlohmann::json doc = base;
      *find_path(doc, opts.param) = v;
      ScenarioConfig cfg = parse_config(doc);
      if (opts.grid) apply_grid_override(cfg, *opts.grid);
      if (opts.tol && cfg.kind != ScenarioKind::rate_curve) apply_tol_override(cfg, *opts.tol);
      configs.push_back(std::move(cfg));
    }

    // Workers pull indices; results land in their own slot so the output
    // order never depends on scheduling.
    std::vector<std::optional<ScenarioResult>> results(configs.size());
    std::vector<std::exception_ptr> errors(configs.size());
    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
      for (std::size_t i = next++; i < configs.size(); i = next++) {
        try {
          results[i] = run_scenario(configs[i]);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    };
    const unsigned n_threads =
        std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(), static_cast<unsigned>(configs.size())));
    std::vector<std::thread> pool;
    for (unsigned k = 1; k < n_threads; ++k) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }

    Table table;
    table.columns.push_back(opts.param);
    for (const auto& [k, _] : results.front()->scalars) table.columns.push_back(k);
    for (std::size_t i = 0; i < values.size(); ++i) {
      std::vector<double> row{values[i]};
      for (const auto& [_, v] : results[i]->scalars) row.push_back(v);
      table.rows.push_back(std::move(row));
    }
    const std::string leaf = opts.param.substr(opts.param.rfind('.') + 1);
    const fs::path path = fs::path(opts.out_dir) / ("sweep_" + leaf + ".csv");
    write_file(path, table);
    write_csv(table, out);
    return kExitOk;
  });
}

int cmd_validate(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ScenarioConfig cfg = prepare(opts);
    out << opts.config << ": ok (" << to_string(cfg.kind) << ")\n";
    return kExitOk;
  });
}

int cmd_list_scenarios(std::ostream& out) {
  for (const auto& info : scenario_catalog()) {
    char line[160];
    std::snprintf(line, sizeof line, "%-22s %s\n", std::string(to_string(info.kind)).c_str(), info.summary.data());
    out << line;
  }
  return kExitOk;
}

}  // namespace spinwehrl::cli
