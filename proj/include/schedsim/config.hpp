#pragma once

#include <string>

#include "schedsim/errors.hpp"
#include "schedsim/job.hpp"

namespace schedsim {

struct Fraction {
  int num = 0;
  int den = 1;

  friend bool operator==(const Fraction&, const Fraction&) = default;
};

/// ceil(frac * m), the conservative integer reading of "at least frac * m".
inline int ceil_fraction(Fraction f, int m) {
  return static_cast<int>((static_cast<long long>(f.num) * m + f.den - 1) / f.den);
}

enum class MlaxVariant { kMlax, kLaxVariant };

inline std::string to_string(MlaxVariant v) {
  return v == MlaxVariant::kMlax ? "mlax" : "lax_variant";
}

struct MlaxConfig {
  Tick alpha = 24;
  Fraction viability_fraction{7, 8};
  Fraction replace_fraction{3, 4};
  MlaxVariant variant = MlaxVariant::kMlax;

  friend bool operator==(const MlaxConfig&, const MlaxConfig&) = default;
};

inline MlaxConfig lax_variant_config(Tick alpha = 24) {
  MlaxConfig cfg;
  cfg.alpha = alpha;
  cfg.viability_fraction = {1, 2};
  cfg.replace_fraction = {1, 2};
  cfg.variant = MlaxVariant::kLaxVariant;
  return cfg;
}

inline void check_config(const MlaxConfig& cfg) {
  if (cfg.alpha < 1) throw ConfigError("alpha must be >= 1");
  if (cfg.alpha > (Tick{1} << 20)) throw ConfigError("alpha too large");
  const auto bad = [](Fraction f) { return f.num <= 0 || f.den <= 0 || f.num > f.den; };
  if (bad(cfg.viability_fraction) || bad(cfg.replace_fraction))
    throw ConfigError("fractions must lie in (0, 1]");
  // replace_fraction <= viability_fraction, compared as cross products.
  if (static_cast<long long>(cfg.replace_fraction.num) * cfg.viability_fraction.den >
      static_cast<long long>(cfg.viability_fraction.num) * cfg.replace_fraction.den)
    throw ConfigError("replace_fraction must not exceed viability_fraction");
}

}  // namespace schedsim
