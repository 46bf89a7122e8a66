#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace secache {

/// Raised when a catalog or placement violates one of its invariants.
/// field() names the offending field using the JSON key ("F", "beta",
/// "epsilon", "C", "p").
class CatalogError : public std::invalid_argument {
 public:
  CatalogError(std::string field, const std::string& what)
      : std::invalid_argument(what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Zipf request probabilities q_f ∝ f^{-beta}, f = 1..file_count.
std::vector<double> zipf_popularity(int file_count, double beta);

/// Immutable file population: popularity, per-file secrecy levels and the
/// per-BS cache budget.
class FileCatalog {
 public:
  /// Validates and attaches Zipf popularity. secrecy level 1 is only
  /// accepted when allow_unit_secrecy is set (it forces a zero cap).
  FileCatalog(int file_count, double beta, std::vector<double> secrecy_levels, int cache_size,
              bool allow_unit_secrecy = false);

  int file_count() const noexcept { return static_cast<int>(popularity_.size()); }
  double beta() const noexcept { return beta_; }
  int cache_size() const noexcept { return cache_size_; }
  std::span<const double> popularity() const noexcept { return popularity_; }
  std::span<const double> secrecy_levels() const noexcept { return secrecy_levels_; }

  /// Same secrecy levels and cache size, new Zipf exponent.
  FileCatalog with_beta(double beta) const;

 private:
  double beta_;
  int cache_size_;
  bool allow_unit_secrecy_;
  std::vector<double> popularity_;
  std::vector<double> secrecy_levels_;
};

FileCatalog make_catalog(int file_count, double beta, std::vector<double> secrecy_levels,
                         int cache_size, bool allow_unit_secrecy = false);

/// file_count independent draws, uniform on the open interval (0, eps_max).
std::vector<double> sample_secrecy_levels(int file_count, double eps_max, std::uint64_t seed);

/// Caching probability per file, 0 <= p_i <= 1, sum p_i <= C.
class PlacementPolicy {
 public:
  static constexpr double kStorageSlack = 1e-9;

  PlacementPolicy(std::vector<double> probabilities, int cache_size);

  std::size_t size() const noexcept { return probabilities_.size(); }
  double operator[](std::size_t i) const { return probabilities_[i]; }
  std::span<const double> probabilities() const noexcept { return probabilities_; }
  double total() const noexcept;

 private:
  std::vector<double> probabilities_;
};

/// JSON document {"F": .., "beta": .., "epsilon": [..], "C": ..}.
std::string catalog_to_json(const FileCatalog& catalog);
FileCatalog catalog_from_json(std::string_view json_text);

}  // namespace secache
