#include "tagsched/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace tagsched {

void RadioParams::check() const {
  for (double v : {p_tx, p_rx, t_tx, t_rx, t_req, t_cg}) {
    if (!(v > 0.0)) throw std::invalid_argument("radio parameters must be strictly positive");
  }
}

double avg_energy_per_tag(std::size_t carriers, std::size_t tags, const RadioParams& radio) {
  if (tags == 0) throw UndefinedRatio("average energy per tag needs at least one tag");
  const double ratio = static_cast<double>(carriers) / static_cast<double>(tags);
  return radio.p_tx * radio.t_tx + radio.p_rx * (ratio * radio.t_req + radio.t_rx) +
         radio.p_tx * (radio.t_req + ratio * radio.t_cg);
}

std::int64_t carriers_saved(std::size_t c_reference, std::size_t c_candidate) {
  return static_cast<std::int64_t>(c_reference) - static_cast<std::int64_t>(c_candidate);
}

double carriers_saved_pct(std::size_t c_reference, std::size_t c_candidate) {
  if (c_reference == 0) throw UndefinedRatio("carriers saved: reference has zero carrier slots");
  return 100.0 * static_cast<double>(carriers_saved(c_reference, c_candidate)) / static_cast<double>(c_reference);
}

std::int64_t timeslots_saved(std::size_t l_reference, std::size_t l_candidate) {
  return static_cast<std::int64_t>(l_reference) - static_cast<std::int64_t>(l_candidate);
}

double timeslots_saved_pct(std::size_t l_reference, std::size_t l_candidate) {
  if (l_reference == 0) throw UndefinedRatio("timeslots saved: reference has zero slots");
  return 100.0 * static_cast<double>(timeslots_saved(l_reference, l_candidate)) / static_cast<double>(l_reference);
}

double energy_saved_pct(std::size_t c_reference, std::size_t c_candidate, std::size_t tags,
                        const RadioParams& radio) {
  const double e_ref = avg_energy_per_tag(c_reference, tags, radio);
  const double e_cand = avg_energy_per_tag(c_candidate, tags, radio);
  return (e_ref - e_cand) / e_ref * 100.0;
}

double completion_rate(std::span<const bool> outcomes) {
  if (outcomes.empty()) throw UndefinedRatio("completion rate of an empty run list");
  const auto successes = std::count(outcomes.begin(), outcomes.end(), true);
  return 100.0 * static_cast<double>(successes) / static_cast<double>(outcomes.size());
}

Summary summarize(std::vector<double> values) {
  Summary s;
  s.count = values.size();
  if (values.empty()) return s;
  std::sort(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double squares = 0.0;
    for (double v : values) squares += (v - s.mean) * (v - s.mean);
    const double sample_sd = std::sqrt(squares / static_cast<double>(values.size() - 1));
    s.std_err = sample_sd / std::sqrt(static_cast<double>(values.size()));
  }
  for (double p : kReportPercentiles) {
    const double pos = p / 100.0 * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, values.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    s.percentiles.push_back(values[lo] + (values[hi] - values[lo]) * frac);
  }
  return s;
}

}  // namespace tagsched
