#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace tagsched {

class UndefinedRatio : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Radio power (W) and timing (s) constants of the tag interrogation cycle.
/// Defaults are the Zolertia Firefly reference values.
struct RadioParams {
  double p_tx = 0.102;
  double p_rx = 0.072;
  double t_tx = 128e-6;
  double t_rx = 256e-6;
  double t_req = 128e-6;
  double t_cg = 15.75e-3;

  /// Throws std::invalid_argument unless every field is strictly positive.
  void check() const;
};

/// Average energy (J) to query one tag:
/// P_tx t_tx + P_rx ((C/T) t_req + t_rx) + P_tx (t_req + (C/T) t_cg).
double avg_energy_per_tag(std::size_t carriers, std::size_t tags, const RadioParams& radio = {});

// All "saved" metrics are positive when the candidate beats the reference.
std::int64_t carriers_saved(std::size_t c_reference, std::size_t c_candidate);
double carriers_saved_pct(std::size_t c_reference, std::size_t c_candidate);
std::int64_t timeslots_saved(std::size_t l_reference, std::size_t l_candidate);
double timeslots_saved_pct(std::size_t l_reference, std::size_t l_candidate);
double energy_saved_pct(std::size_t c_reference, std::size_t c_candidate, std::size_t tags,
                        const RadioParams& radio = {});

/// 100 * successes / total. Throws UndefinedRatio on an empty list.
double completion_rate(std::span<const bool> outcomes);

inline constexpr double kReportPercentiles[] = {1, 25, 50, 75, 95, 99};

struct Summary {
  std::size_t count = 0;
  double mean = 0.0;
  double std_err = 0.0;
  std::vector<double> percentiles;  // one per kReportPercentiles entry

  bool operator==(const Summary&) const = default;
};

/// Order-independent: values are sorted before any reduction.
/// Percentiles interpolate linearly between closest ranks.
Summary summarize(std::vector<double> values);

}  // namespace tagsched
