#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "secache/analytic.hpp"
#include "secache/catalog.hpp"
#include "secache/simulator.hpp"

namespace secache {

/// Invalid experiment description or unreadable input. The CLI maps this to
/// a non-zero exit status.
class SpecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Scheme { kOcp, kMpc, kLcc };
enum class SweepVar { kBeta, kGuardRadius, kGammaEve, kPlacement };

std::string_view to_string(Scheme scheme);
std::string_view to_string(SweepVar var);
Scheme parse_scheme(std::string_view name);
SweepVar parse_sweep_var(std::string_view name);

/// Network parameters as written in a config file: thresholds in dB,
/// lengths in m, densities per m².
struct ParamsConfig {
  double bs_density = 1.0 / (800.0 * 800.0);
  double eve_density = 1.0 / (5.0 * 800.0 * 800.0);
  double alpha = 3.0;
  double guard_radius = 200.0;
  double gamma_user_db = -5.0;
  double gamma_eve_db = -7.0;
  double tx_power = 1.0;

  /// The single dB -> linear conversion point.
  NetworkParams to_network() const;
};

struct CatalogSource {
  enum class Kind { kInline, kFile, kSampled };
  Kind kind = Kind::kSampled;
  int file_count = 10;
  double beta = 0.7;
  int cache_size = 5;
  std::vector<double> epsilon;  // kInline
  std::string path;             // kFile
  double eps_max = 0.5;         // kSampled
  std::uint64_t seed = 7;       // kSampled
};

struct ValidateConfig {
  std::vector<double> hit_p{0.5};
  std::vector<double> secrecy_p{0.2, 0.5, 0.8};
  double hit_tolerance = 0.01;
  double secrecy_tolerance = 0.015;
};

struct ExperimentSpec {
  ParamsConfig params;
  CatalogSource catalog;
  SweepVar sweep_var = SweepVar::kBeta;
  std::vector<double> sweep_values{0.0, 0.5, 1.0, 1.5, 2.0};
  std::vector<Scheme> schemes{Scheme::kOcp, Scheme::kMpc, Scheme::kLcc};
  /// When set, every sweep point uses the uniform placement p_i = fixed_p
  /// instead of the schemes (scheme column "FIXED").
  std::optional<double> fixed_p;
  std::optional<SimConfig> sim;
  ValidateConfig validate;
  std::string output;

  /// Throws SpecError when the sweep list is empty or not strictly increasing,
  /// the scheme list is empty, or a numeric field is out of range.
  void check() const;
};

ExperimentSpec parse_experiment_spec(std::string_view json_text);
ExperimentSpec load_experiment_spec(const std::string& path);

/// Materialises the catalog (reads the file or draws the secrecy levels).
FileCatalog resolve_catalog(const ExperimentSpec& spec);

/// Fully resolved spec, including the sampled secrecy levels, as JSON.
std::string echo_spec_json(const ExperimentSpec& spec, const FileCatalog& catalog);

/// One CSV row. file_index 0 is the aggregate over files; simulation and
/// secrecy fields are empty (nullopt) when not applicable.
struct SweepRow {
  SweepVar sweep_var;
  double sweep_value;
  std::string scheme;
  int file_index;
  double p_star;
  double psi_cap;
  double hit_analytic;
  std::optional<double> hit_sim;
  std::optional<double> hit_ci;
  std::optional<double> secrecy_lb;
  std::optional<double> secrecy_exact;
  std::optional<double> secrecy_sim;
  std::optional<double> secrecy_ci;
};

inline constexpr std::string_view kSweepCsvHeader =
    "sweep_var,sweep_value,scheme,file_index,p_star,psi_cap,hit_analytic,hit_sim,hit_ci,"
    "secrecy_lb,secrecy_exact,secrecy_sim,secrecy_ci";

std::vector<SweepRow> run_sweep(const ExperimentSpec& spec);
void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out);

struct ValidationRow {
  std::string quantity;  // "hit" or "secrecy"
  int file_index;
  double p;
  double analytic;
  double simulated;
  double ci;
  double tolerance;  // max(ci, base tolerance)
  double abs_diff;
  bool passed;
  bool ci_too_wide;  // ci exceeded the base tolerance
};

struct ValidationReport {
  std::vector<ValidationRow> rows;
  bool all_passed() const;
};

inline constexpr std::string_view kValidateCsvHeader =
    "quantity,file_index,p,analytic,simulated,ci,tolerance,abs_diff,status,note";

/// Analytic vs Monte Carlo: per-file hit probability for each uniform
/// placement in validate.hit_p, and secrecy probability (numerical integral)
/// for each value in validate.secrecy_p. Uses a default SimConfig when the
/// spec has none.
ValidationReport run_validate(const ExperimentSpec& spec);
void write_validation_csv(const ValidationReport& report, std::ostream& out);

/// OCP solution for the spec's catalog and parameters, with the MPC/LCC
/// baselines for comparison, as JSON.
std::string solve_report_json(const ExperimentSpec& spec);

/// Fixed-precision number formatting shared by every writer.
std::string format_number(double value);

}  // namespace secache
