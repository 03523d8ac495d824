#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tagsched/bench.hpp"
#include "tagsched/core.hpp"

namespace tagsched::io {

// Malformed JSON or a violated instance/schedule invariant; names the field and the rule.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string field, const std::string& rule)
      : std::runtime_error(field + ": " + rule), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// {"nodes": N, "edges": [[u,v],...], "tags": [{"id": k, "host": u},...]}
ProblemInstance parse_instance(std::string_view text);
std::string emit_instance(const ProblemInstance& instance);

/// {"L": L, "C": C, "slots": [{"interrogations": [{"node","tag","carrier"}], "carriers": [...]}]}
/// "carriers" lists every CARRIER-role node of the slot; when absent on input it
/// is derived from the interrogation records.
std::string emit_schedule(const Schedule& schedule);
Schedule parse_schedule(std::string_view text, const ProblemInstance& instance);

/// One instance JSON per line.
std::vector<ProblemInstance> read_corpus(std::istream& in);
void write_corpus(std::ostream& out, const std::vector<ProblemInstance>& corpus);

/// instance_id,N,T,scheduler,success,C,L,objective,runtime_ms
void write_bench_csv(std::ostream& out, const BenchmarkReport& report);
std::string bench_report_json(const BenchmarkReport& report);

}  // namespace tagsched::io
