#include "secache/catalog.hpp"

#include <cmath>
#include <numeric>

#include <json.hpp>

#include "secache/random.hpp"

namespace secache {

namespace {

// Neumaier compensated sum.
double compensated_sum(std::span<const double> values) {
  double sum = 0.0;
  double carry = 0.0;
  for (double v : values) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      carry += (sum - t) + v;
    } else {
      carry += (v - t) + sum;
    }
    sum = t;
  }
  return sum + carry;
}

}  // namespace

std::vector<double> zipf_popularity(int file_count, double beta) {
  if (file_count < 1) throw CatalogError("F", "zipf_popularity: F must be >= 1");
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw std::domain_error("zipf_popularity: beta must be >= 0");
  std::vector<double> q(static_cast<std::size_t>(file_count));
  for (int f = 1; f <= file_count; ++f) q[f - 1] = std::pow(static_cast<double>(f), -beta);
  const double norm = compensated_sum(q);
  for (double& v : q) v /= norm;
  return q;
}

FileCatalog::FileCatalog(int file_count, double beta, std::vector<double> secrecy_levels,
                         int cache_size, bool allow_unit_secrecy)
    : beta_(beta),
      cache_size_(cache_size),
      allow_unit_secrecy_(allow_unit_secrecy),
      secrecy_levels_(std::move(secrecy_levels)) {
  if (file_count < 1) throw CatalogError("F", "catalog: F must be >= 1");
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw CatalogError("beta", "catalog: beta must be >= 0");
  if (cache_size < 1) throw CatalogError("C", "catalog: C must be >= 1");
  if (cache_size >= file_count) throw CatalogError("C", "catalog: C must be smaller than F");
  if (secrecy_levels_.size() != static_cast<std::size_t>(file_count)) {
    throw CatalogError("epsilon", "catalog: epsilon must have exactly F entries");
  }
  for (double eps : secrecy_levels_) {
    const bool in_range = eps >= 0.0 && (eps < 1.0 || (allow_unit_secrecy && eps == 1.0));
    if (!in_range) throw CatalogError("epsilon", "catalog: every epsilon must lie in [0, 1)");
  }
  popularity_ = zipf_popularity(file_count, beta);
}

FileCatalog FileCatalog::with_beta(double beta) const {
  return FileCatalog(file_count(), beta, secrecy_levels_, cache_size_, allow_unit_secrecy_);
}

FileCatalog make_catalog(int file_count, double beta, std::vector<double> secrecy_levels,
                         int cache_size, bool allow_unit_secrecy) {
  return FileCatalog(file_count, beta, std::move(secrecy_levels), cache_size, allow_unit_secrecy);
}

std::vector<double> sample_secrecy_levels(int file_count, double eps_max, std::uint64_t seed) {
  if (file_count < 1) throw CatalogError("F", "sample_secrecy_levels: F must be >= 1");
  if (!(eps_max > 0.0 && eps_max < 1.0)) {
    throw std::domain_error("sample_secrecy_levels: eps_max must lie in (0, 1)");
  }
  CounterRng rng(seed, /*stream=*/0x5EC);
  std::vector<double> eps;
  eps.reserve(static_cast<std::size_t>(file_count));
  while (static_cast<int>(eps.size()) < file_count) {
    const double v = eps_max * rng.uniform();
    if (v > 0.0 && v < eps_max) eps.push_back(v);
  }
  return eps;
}

PlacementPolicy::PlacementPolicy(std::vector<double> probabilities, int cache_size)
    : probabilities_(std::move(probabilities)) {
  for (double p : probabilities_) {
    if (!(p >= 0.0 && p <= 1.0)) throw CatalogError("p", "placement: every p_i must lie in [0, 1]");
  }
  if (total() > static_cast<double>(cache_size) + kStorageSlack) {
    throw CatalogError("p", "placement: sum of p_i exceeds the cache size");
  }
}

double PlacementPolicy::total() const noexcept { return compensated_sum(probabilities_); }

std::string catalog_to_json(const FileCatalog& catalog) {
  nlohmann::ordered_json doc;
  doc["F"] = catalog.file_count();
  doc["beta"] = catalog.beta();
  doc["epsilon"] = std::vector<double>(catalog.secrecy_levels().begin(), catalog.secrecy_levels().end());
  doc["C"] = catalog.cache_size();
  return doc.dump(2);
}

FileCatalog catalog_from_json(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw CatalogError("", std::string("catalog JSON: ") + e.what());
  }
  auto require = [&doc](const char* key) -> const nlohmann::json& {
    if (!doc.is_object() || !doc.contains(key)) {
      throw CatalogError(key, std::string("catalog JSON: missing field '") + key + "'");
    }
    return doc.at(key);
  };
  try {
    const int file_count = require("F").get<int>();
    const double beta = require("beta").get<double>();
    auto eps = require("epsilon").get<std::vector<double>>();
    const int cache_size = require("C").get<int>();
    return FileCatalog(file_count, beta, std::move(eps), cache_size);
  } catch (const nlohmann::json::type_error& e) {
    throw CatalogError("", std::string("catalog JSON: ") + e.what());
  }
}

}  // namespace secache
