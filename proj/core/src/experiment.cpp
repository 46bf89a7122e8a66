#include "secache/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "secache/optimizer.hpp"

namespace secache {

using nlohmann::json;
using nlohmann::ordered_json;

std::string_view to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::kOcp: return "OCP";
    case Scheme::kMpc: return "MPC";
    case Scheme::kLcc: return "LCC";
  }
  return "?";
}

std::string_view to_string(SweepVar var) {
  switch (var) {
    case SweepVar::kBeta: return "beta";
    case SweepVar::kGuardRadius: return "D";
    case SweepVar::kGammaEve: return "gamma_e";
    case SweepVar::kPlacement: return "p_i";
  }
  return "?";
}

Scheme parse_scheme(std::string_view name) {
  if (name == "OCP") return Scheme::kOcp;
  if (name == "MPC") return Scheme::kMpc;
  if (name == "LCC") return Scheme::kLcc;
  throw SpecError("unknown scheme '" + std::string(name) + "' (expected OCP, MPC or LCC)");
}

SweepVar parse_sweep_var(std::string_view name) {
  if (name == "beta") return SweepVar::kBeta;
  if (name == "D") return SweepVar::kGuardRadius;
  if (name == "gamma_e") return SweepVar::kGammaEve;
  if (name == "p_i") return SweepVar::kPlacement;
  throw SpecError("unknown sweep variable '" + std::string(name) + "' (expected beta, D, gamma_e or p_i)");
}

NetworkParams ParamsConfig::to_network() const {
  try {
    return NetworkParams::from_db(bs_density, eve_density, alpha, guard_radius, gamma_user_db, gamma_eve_db,
                                  tx_power);
  } catch (const std::invalid_argument& e) {
    throw SpecError(e.what());
  }
}

void ExperimentSpec::check() const {
  if (sweep_values.empty()) throw SpecError("sweep: values must not be empty");
  for (std::size_t i = 1; i < sweep_values.size(); ++i) {
    if (!(sweep_values[i] > sweep_values[i - 1])) throw SpecError("sweep: values must be strictly increasing");
  }
  if (schemes.empty()) throw SpecError("schemes: must not be empty");
  auto in_unit = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (fixed_p && !in_unit(*fixed_p)) throw SpecError("fixed_p: must lie in [0, 1]");
  if (sweep_var == SweepVar::kPlacement && !std::all_of(sweep_values.begin(), sweep_values.end(), in_unit))
    throw SpecError("sweep: p_i values must lie in [0, 1]");
  if (sweep_var == SweepVar::kBeta && sweep_values.front() < 0.0) throw SpecError("sweep: beta values must be >= 0");
  if (sweep_var == SweepVar::kGuardRadius && sweep_values.front() < 0.0)
    throw SpecError("sweep: D values must be >= 0");
  if (!std::all_of(validate.hit_p.begin(), validate.hit_p.end(), in_unit) ||
      !std::all_of(validate.secrecy_p.begin(), validate.secrecy_p.end(), in_unit))
    throw SpecError("validate: probabilities must lie in [0, 1]");
  (void)params.to_network();
  if (sim) {
    try {
      sim->validate(params.to_network());
    } catch (const std::invalid_argument& e) {
      throw SpecError(e.what());
    }
  }
}

namespace {

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw SpecError(where + ": expected a JSON object");
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.count(key)) throw SpecError(where + ": unknown field '" + key + "'");
  }
}

template <class T>
void read_if(const json& obj, const char* key, T& out) {
  if (obj.contains(key)) out = obj.at(key).get<T>();
}

ParamsConfig parse_params(const json& j) {
  reject_unknown_keys(j, {"bs_density", "eve_density", "alpha", "D", "gamma_u_db", "gamma_e_db", "P"}, "params");
  ParamsConfig p;
  read_if(j, "bs_density", p.bs_density);
  read_if(j, "eve_density", p.eve_density);
  read_if(j, "alpha", p.alpha);
  read_if(j, "D", p.guard_radius);
  read_if(j, "gamma_u_db", p.gamma_user_db);
  read_if(j, "gamma_e_db", p.gamma_eve_db);
  read_if(j, "P", p.tx_power);
  return p;
}

CatalogSource parse_catalog_source(const json& j) {
  CatalogSource c;
  const std::string source = j.value("source", std::string("sampled"));
  if (source == "inline") {
    reject_unknown_keys(j, {"source", "F", "beta", "epsilon", "C"}, "catalog");
    c.kind = CatalogSource::Kind::kInline;
    if (!j.contains("epsilon")) throw SpecError("catalog: inline source requires 'epsilon'");
    c.epsilon = j.at("epsilon").get<std::vector<double>>();
    c.file_count = static_cast<int>(c.epsilon.size());
  } else if (source == "file") {
    reject_unknown_keys(j, {"source", "path"}, "catalog");
    c.kind = CatalogSource::Kind::kFile;
    if (!j.contains("path")) throw SpecError("catalog: file source requires 'path'");
    c.path = j.at("path").get<std::string>();
    return c;
  } else if (source == "sampled") {
    reject_unknown_keys(j, {"source", "F", "beta", "C", "epsilon_max", "seed"}, "catalog");
    c.kind = CatalogSource::Kind::kSampled;
    read_if(j, "epsilon_max", c.eps_max);
    read_if(j, "seed", c.seed);
  } else {
    throw SpecError("catalog: unknown source '" + source + "' (expected inline, file or sampled)");
  }
  read_if(j, "F", c.file_count);
  read_if(j, "beta", c.beta);
  read_if(j, "C", c.cache_size);
  return c;
}

SimConfig parse_sim(const json& j) {
  reject_unknown_keys(j, {"trials", "seed", "window_radius", "min_expected_bs"}, "sim");
  SimConfig s;
  read_if(j, "trials", s.trials);
  read_if(j, "seed", s.seed);
  if (j.contains("window_radius") && !j.at("window_radius").is_null())
    s.window_radius = j.at("window_radius").get<double>();
  read_if(j, "min_expected_bs", s.min_expected_bs);
  return s;
}

ordered_json params_to_json(const ParamsConfig& p) {
  ordered_json j;
  j["bs_density"] = p.bs_density;
  j["eve_density"] = p.eve_density;
  j["alpha"] = p.alpha;
  j["D"] = p.guard_radius;
  j["gamma_u_db"] = p.gamma_user_db;
  j["gamma_e_db"] = p.gamma_eve_db;
  j["P"] = p.tx_power;
  return j;
}

std::vector<double> uniform_placement(std::size_t n, double p) { return std::vector<double>(n, p); }

std::vector<double> distinct_sorted(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

ExperimentSpec parse_experiment_spec(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw SpecError(std::string("config: malformed JSON: ") + e.what());
  }
  ExperimentSpec spec;
  try {
    reject_unknown_keys(doc, {"params", "catalog", "sweep", "schemes", "fixed_p", "sim", "validate", "output"},
                        "config");
    if (doc.contains("params")) spec.params = parse_params(doc.at("params"));
    if (doc.contains("catalog")) spec.catalog = parse_catalog_source(doc.at("catalog"));
    if (doc.contains("sweep")) {
      const auto& s = doc.at("sweep");
      reject_unknown_keys(s, {"var", "values"}, "sweep");
      if (s.contains("var")) spec.sweep_var = parse_sweep_var(s.at("var").get<std::string>());
      if (s.contains("values")) spec.sweep_values = s.at("values").get<std::vector<double>>();
    }
    if (doc.contains("schemes")) {
      spec.schemes.clear();
      for (const auto& name : doc.at("schemes")) spec.schemes.push_back(parse_scheme(name.get<std::string>()));
    }
    if (doc.contains("fixed_p") && !doc.at("fixed_p").is_null()) spec.fixed_p = doc.at("fixed_p").get<double>();
    if (doc.contains("sim") && !doc.at("sim").is_null()) spec.sim = parse_sim(doc.at("sim"));
    if (doc.contains("validate")) {
      const auto& v = doc.at("validate");
      reject_unknown_keys(v, {"hit_p", "secrecy_p", "hit_tolerance", "secrecy_tolerance"}, "validate");
      read_if(v, "hit_p", spec.validate.hit_p);
      read_if(v, "secrecy_p", spec.validate.secrecy_p);
      read_if(v, "hit_tolerance", spec.validate.hit_tolerance);
      read_if(v, "secrecy_tolerance", spec.validate.secrecy_tolerance);
    }
    read_if(doc, "output", spec.output);
  } catch (const json::exception& e) {
    throw SpecError(std::string("config: ") + e.what());
  }
  spec.check();
  return spec;
}

namespace {

std::string read_file(const std::string& path, const char* what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SpecError(std::string("cannot read ") + what + " '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

ExperimentSpec load_experiment_spec(const std::string& path) {
  ExperimentSpec spec = parse_experiment_spec(read_file(path, "config file"));
  // Catalog files are resolved relative to the config that names them.
  if (spec.catalog.kind == CatalogSource::Kind::kFile) {
    std::filesystem::path catalog_path(spec.catalog.path);
    if (catalog_path.is_relative())
      spec.catalog.path = (std::filesystem::path(path).parent_path() / catalog_path).string();
  }
  return spec;
}

FileCatalog resolve_catalog(const ExperimentSpec& spec) {
  const auto& src = spec.catalog;
  try {
    switch (src.kind) {
      case CatalogSource::Kind::kInline:
        return make_catalog(src.file_count, src.beta, src.epsilon, src.cache_size);
      case CatalogSource::Kind::kFile:
        return catalog_from_json(read_file(src.path, "catalog file"));
      case CatalogSource::Kind::kSampled:
        return make_catalog(src.file_count, src.beta, sample_secrecy_levels(src.file_count, src.eps_max, src.seed),
                            src.cache_size);
    }
  } catch (const CatalogError& e) {
    throw SpecError(std::string("catalog: ") + e.what());
  } catch (const std::domain_error& e) {
    throw SpecError(std::string("catalog: ") + e.what());
  }
  throw SpecError("catalog: unknown source");
}

std::string echo_spec_json(const ExperimentSpec& spec, const FileCatalog& catalog) {
  ordered_json doc;
  doc["params"] = params_to_json(spec.params);
  ordered_json cat;
  cat["source"] = "inline";
  cat["F"] = catalog.file_count();
  cat["beta"] = catalog.beta();
  cat["epsilon"] = std::vector<double>(catalog.secrecy_levels().begin(), catalog.secrecy_levels().end());
  cat["C"] = catalog.cache_size();
  doc["catalog"] = cat;
  ordered_json sweep;
  sweep["var"] = to_string(spec.sweep_var);
  sweep["values"] = spec.sweep_values;
  doc["sweep"] = sweep;
  doc["schemes"] = json::array();
  for (auto s : spec.schemes) doc["schemes"].push_back(to_string(s));
  doc["fixed_p"] = spec.fixed_p ? json(*spec.fixed_p) : json(nullptr);
  if (spec.sim) {
    ordered_json sim;
    sim["trials"] = spec.sim->trials;
    sim["seed"] = spec.sim->seed;
    sim["window_radius"] = spec.sim->window_radius ? json(*spec.sim->window_radius) : json(nullptr);
    sim["min_expected_bs"] = spec.sim->min_expected_bs;
    doc["sim"] = sim;
  } else {
    doc["sim"] = nullptr;
  }
  ordered_json val;
  val["hit_p"] = spec.validate.hit_p;
  val["secrecy_p"] = spec.validate.secrecy_p;
  val["hit_tolerance"] = spec.validate.hit_tolerance;
  val["secrecy_tolerance"] = spec.validate.secrecy_tolerance;
  doc["validate"] = val;
  doc["output"] = spec.output;
  return doc.dump(2) + "\n";
}

std::string format_number(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (std::isnan(value)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

std::vector<SweepRow> run_sweep(const ExperimentSpec& spec) {
  spec.check();
  const FileCatalog base_catalog = resolve_catalog(spec);
  const auto n = static_cast<std::size_t>(base_catalog.file_count());
  std::vector<SweepRow> rows;

  for (double value : spec.sweep_values) {
    ParamsConfig pc = spec.params;
    FileCatalog catalog = base_catalog;
    std::optional<double> fixed = spec.fixed_p;
    switch (spec.sweep_var) {
      case SweepVar::kBeta: catalog = base_catalog.with_beta(value); break;
      case SweepVar::kGuardRadius: pc.guard_radius = value; break;
      case SweepVar::kGammaEve: pc.gamma_eve_db = value; break;
      case SweepVar::kPlacement: fixed = value; break;
    }
    const NetworkParams params = pc.to_network();
    const auto caps = placement_caps(catalog, params);
    const auto q = catalog.popularity();

    std::vector<std::pair<std::string, std::vector<double>>> placements;
    if (fixed) {
      placements.emplace_back("FIXED", uniform_placement(n, *fixed));
    } else {
      for (Scheme s : spec.schemes) {
        std::vector<double> p;
        switch (s) {
          case Scheme::kOcp: {
            const auto sol = solve_ocp(catalog, params, caps);
            p.assign(sol.policy.probabilities().begin(), sol.policy.probabilities().end());
            break;
          }
          case Scheme::kMpc: {
            const auto pol = mpc_placement(catalog, caps);
            p.assign(pol.probabilities().begin(), pol.probabilities().end());
            break;
          }
          case Scheme::kLcc: {
            const auto pol = lcc_placement(catalog, caps);
            p.assign(pol.probabilities().begin(), pol.probabilities().end());
            break;
          }
        }
        placements.emplace_back(std::string(to_string(s)), std::move(p));
      }
    }

    for (const auto& [scheme, p] : placements) {
      std::optional<std::vector<SimEstimate>> hit_sim;
      std::map<double, SimEstimate> secrecy_sim;
      if (spec.sim) {
        hit_sim = simulate_conditional_hit(p, params, *spec.sim);
        const auto values = distinct_sorted(p);
        const auto est = simulate_secrecy(values, params, *spec.sim);
        for (std::size_t j = 0; j < values.size(); ++j) secrecy_sim.emplace(values[j], est[j]);
      }

      double hit_total = 0.0;
      double hit_sim_total = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        SweepRow row{spec.sweep_var, value, scheme, static_cast<int>(i + 1), p[i], caps[i],
                     conditional_hit_probability(p[i], params), {}, {}, {}, {}, {}, {}};
        hit_total += q[i] * row.hit_analytic;
        row.secrecy_lb = secrecy_probability_lower_bound(p[i], params);
        row.secrecy_exact = secrecy_probability_exact(p[i], params);
        if (hit_sim) {
          row.hit_sim = (*hit_sim)[i].estimate;
          row.hit_ci = (*hit_sim)[i].ci95_halfwidth;
          hit_sim_total += q[i] * (*hit_sim)[i].estimate;
          const auto& s = secrecy_sim.at(p[i]);
          row.secrecy_sim = s.estimate;
          row.secrecy_ci = s.ci95_halfwidth;
        }
        rows.push_back(row);
      }
      SweepRow total{spec.sweep_var, value, scheme, 0, 0.0, 0.0, hit_total, {}, {}, {}, {}, {}, {}};
      for (std::size_t i = 0; i < n; ++i) {
        total.p_star += p[i];
        total.psi_cap += caps[i];
      }
      if (hit_sim) {
        const auto agg = SimEstimate::from_frequency(std::clamp(hit_sim_total, 0.0, 1.0), spec.sim->trials);
        total.hit_sim = agg.estimate;
        total.hit_ci = agg.ci95_halfwidth;
      }
      rows.push_back(total);
    }
  }
  return rows;
}

void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
  auto opt = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string(); };
  out << kSweepCsvHeader << '\n';
  for (const auto& r : rows) {
    out << to_string(r.sweep_var) << ',' << format_number(r.sweep_value) << ',' << r.scheme << ',' << r.file_index
        << ',' << format_number(r.p_star) << ',' << format_number(r.psi_cap) << ','
        << format_number(r.hit_analytic) << ',' << opt(r.hit_sim) << ',' << opt(r.hit_ci) << ','
        << opt(r.secrecy_lb) << ',' << opt(r.secrecy_exact) << ',' << opt(r.secrecy_sim) << ','
        << opt(r.secrecy_ci) << '\n';
  }
}

bool ValidationReport::all_passed() const {
  return std::all_of(rows.begin(), rows.end(), [](const ValidationRow& r) { return r.passed; });
}

namespace {

ValidationRow compare(std::string quantity, int file_index, double p, double analytic, const SimEstimate& sim,
                      double base_tol) {
  ValidationRow row;
  row.quantity = std::move(quantity);
  row.file_index = file_index;
  row.p = p;
  row.analytic = analytic;
  row.simulated = sim.estimate;
  // A tiny sample can land on 0 or 1 and report a zero-width interval; take the
  // wider of the empirical and the analytic-variance half-widths.
  const double var = std::max(sim.estimate * (1.0 - sim.estimate), analytic * (1.0 - analytic));
  row.ci = std::max(sim.ci95_halfwidth, 1.96 * std::sqrt(var / static_cast<double>(sim.trials)));
  row.tolerance = std::max(row.ci, base_tol);
  row.abs_diff = std::abs(analytic - sim.estimate);
  row.passed = row.abs_diff <= row.tolerance;
  row.ci_too_wide = row.ci > base_tol;
  return row;
}

}  // namespace

ValidationReport run_validate(const ExperimentSpec& spec) {
  spec.check();
  const FileCatalog catalog = resolve_catalog(spec);
  const NetworkParams params = spec.params.to_network();
  SimConfig sim;
  sim.trials = 100'000;
  if (spec.sim) sim = *spec.sim;
  const auto n = static_cast<std::size_t>(catalog.file_count());

  ValidationReport report;
  for (double p : spec.validate.hit_p) {
    const auto est = simulate_conditional_hit(uniform_placement(n, p), params, sim);
    const double analytic = conditional_hit_probability(p, params);
    for (std::size_t i = 0; i < n; ++i)
      report.rows.push_back(compare("hit", static_cast<int>(i + 1), p, analytic, est[i], spec.validate.hit_tolerance));
  }
  if (!spec.validate.secrecy_p.empty()) {
    const auto est = simulate_secrecy(spec.validate.secrecy_p, params, sim);
    for (std::size_t j = 0; j < est.size(); ++j) {
      const double p = spec.validate.secrecy_p[j];
      report.rows.push_back(
          compare("secrecy", 0, p, secrecy_probability_exact(p, params), est[j], spec.validate.secrecy_tolerance));
    }
  }
  return report;
}

void write_validation_csv(const ValidationReport& report, std::ostream& out) {
  out << kValidateCsvHeader << '\n';
  for (const auto& r : report.rows) {
    out << r.quantity << ',' << r.file_index << ',' << format_number(r.p) << ',' << format_number(r.analytic) << ','
        << format_number(r.simulated) << ',' << format_number(r.ci) << ',' << format_number(r.tolerance) << ','
        << format_number(r.abs_diff) << ',' << (r.passed ? "PASS" : "FAIL") << ','
        << (r.ci_too_wide ? "ci_too_wide" : "") << '\n';
  }
}

std::string solve_report_json(const ExperimentSpec& spec) {
  spec.check();
  const FileCatalog catalog = resolve_catalog(spec);
  const NetworkParams params = spec.params.to_network();
  const auto sol = solve_ocp(catalog, params);
  const auto mpc = mpc_placement(catalog, sol.caps);
  const auto lcc = lcc_placement(catalog, sol.caps);

  auto as_vec = [](std::span<const double> s) { return std::vector<double>(s.begin(), s.end()); };
  ordered_json doc;
  doc["params"] = params_to_json(spec.params);
  doc["catalog"] = json::parse(catalog_to_json(catalog));
  doc["popularity"] = as_vec(catalog.popularity());
  doc["caps"] = sol.caps;
  ordered_json ocp;
  ocp["policy"] = as_vec(sol.policy.probabilities());
  ocp["dual"] = sol.dual;
  ocp["active_set"] = json::array();
  for (auto s : sol.active_set) ocp["active_set"].push_back(to_string(s));
  ocp["objective"] = sol.objective;
  ocp["sum_p"] = sol.policy.total();
  doc["OCP"] = ocp;
  ordered_json m;
  m["policy"] = as_vec(mpc.probabilities());
  m["objective"] = hit_probability(mpc, catalog, params);
  doc["MPC"] = m;
  ordered_json l;
  l["policy"] = as_vec(lcc.probabilities());
  l["objective"] = hit_probability(lcc, catalog, params);
  doc["LCC"] = l;
  return doc.dump(2) + "\n";
}

}  // namespace secache
