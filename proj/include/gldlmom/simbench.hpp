#pragma once

// Monte-Carlo study of the method-of-L-moments estimator: draw replicated
// samples from a known GLD, fit each one, and summarize the estimates.

#include <cstdint>
#include <string>

#include "gldlmom/fitting.hpp"
#include "gldlmom/gld.hpp"

namespace gldlmom {

struct SimConfig {
  GldParams generator{0.0, 0.19, 0.14, 0.14};
  std::size_t sample_size = 1000;
  std::size_t replications = 1000;
  std::uint64_t seed = 1;
  // Keep the estimate started from the smaller symmetric root rather than
  // the one with the lowest objective.
  bool report_smaller_start = true;

  /// Throws InvalidParams unless sample_size >= 10, replications >= 2 and
  /// the generator is valid.
  void check() const;

  friend bool operator==(const SimConfig&, const SimConfig&) = default;
};

struct Summary {
  double mean = 0.0;
  double std_error = 0.0;  // standard deviation across replications (n - 1)

  friend bool operator==(const Summary&, const Summary&) = default;
};

struct SimReport {
  SimConfig config;
  std::size_t replications = 0;
  std::size_t completed = 0;
  std::size_t failed = 0;  // replications without a usable fit, excluded below
  Summary lambda1, lambda2, lambda3, lambda4;
  Summary time_seconds;  // per fit, sample generation excluded
  Summary e_ks;

  friend bool operator==(const SimReport&, const SimReport&) = default;
};

/// Replication k draws its sample from substream_seed(config.seed, k), so the
/// report does not depend on scheduling. The OpenMP version spreads
/// replications across threads; the serial one is the reference loop.
SimReport run_simulation(const SimConfig& config);
SimReport run_simulation_serial(const SimConfig& config);

enum class ReportLayout { Table2, Csv, Json };

/// Table2: one block per quantity (lambda1..lambda4, Time, E_KS) with a Mean
/// and a Std error row each. Csv: "quantity,mean,std_error". Json: the full
/// report including the config.
std::string format_report(const SimReport& r, ReportLayout layout, int digits = -1);

}  // namespace gldlmom
