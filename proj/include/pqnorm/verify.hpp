#pragma once

// Registry of seeded property checks and the suite runner.
//
// Each check samples instances from its seed, measures a margin (the worst
// observed deviation, relative where a scale exists) and compares it with its
// tolerance. A margin above tolerance caused only by an unresolved certificate
// gap is reported as "inconclusive", which never counts as a pass.

#include "pqnorm/json_io.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace pqnorm {

struct Sizes {
  int d = 2;  // matrix level
  int n = 2;  // dimension / family size
};

struct CheckResult {
  std::string check;
  std::string anchor;
  std::uint64_t seed = 0;
  Sizes sizes;
  int instances = 0;
  double margin = 0.0;
  double tolerance = 0.0;
  std::string verdict;  // pass | fail | inconclusive

  bool passed() const { return verdict == "pass"; }
};

enum class Profile { quick, full };

struct Report {
  std::uint64_t seed = 0;
  Profile profile = Profile::quick;
  std::vector<CheckResult> checks;

  bool all_passed() const;
  int count(const std::string& verdict) const;
};

/// Registered check names in report order.
std::vector<std::string> check_names();

/// Runs one check; `tolerance` replaces the registered one. Throws
/// std::invalid_argument for unknown names.
CheckResult run_check(const std::string& name, std::uint64_t seed, Sizes sizes,
                      std::optional<double> tolerance = std::nullopt);

Sizes profile_sizes(Profile profile);
Report run_all(std::uint64_t seed, Profile profile, std::optional<double> tolerance = std::nullopt);

Json to_json(const CheckResult& r);
Json to_json(const Report& r);

}  // namespace pqnorm
