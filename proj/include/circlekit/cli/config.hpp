#pragma once

#include <optional>
#include <string>
#include <vector>

#include "circlekit/cli/serialize.hpp"
#include "circlekit/errors.hpp"
#include "circlekit/expansion.hpp"

namespace circlekit {

class ConfigError : public DomainError {
 public:
  using DomainError::DomainError;
};

inline const std::vector<std::string>& known_tasks() {
  static const std::vector<std::string> tasks{"count",   "series", "integral", "expand",
                                              "compare", "waring", "mobius",   "em-check"};
  return tasks;
}

struct WaringParams {
  std::int64_t q = 1;
  std::int64_t a = 1;
  int d = 2;
  int s = 4;
  int j = 0;
  Integer n = 1;
  int Q = 50;
};

struct RunConfig {
  std::string task;
  std::optional<HomogeneousForm> form;
  FormMetadata meta;
  std::optional<Box> box;
  Rational P = 1;
  std::vector<Rational> P_grid;
  Integer n = 0;
  std::optional<Rational> n_scale;  // when set, n = n_scale * P^d (must be an integer)
  int K = 1;
  std::vector<int> K_list;
  int Q_series = 20;
  double Q_integral = 100.0;
  std::optional<IndexTuple> tuple;
  double gamma = 0.0;
  WaringParams waring;
  QuadratureSpec quad;
  SeriesOptions series;
  IntegralOptions integral;
  CountOptions count;
  bool skip_on_failure = false;
  bool attach_exact = true;
  bool use_cache = true;
  int threads = 0;  // 0: not given in the file
  Json canonical;   // normalized content used for the cache key
};

// Parses a JSON configuration. Errors carry the JSON pointer of the offending field, or the
// line and column of a syntax error.
RunConfig parse_config(const std::string& text, const std::string& task);

// FNV-1a 64-bit digest of the canonical configuration, as 16 hex digits.
std::string config_hash(const RunConfig& cfg);

Integer resolve_n(const RunConfig& cfg, const Rational& P);

}  // namespace circlekit
