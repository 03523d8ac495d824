#include "tagsched/io.hpp"

#include <algorithm>
#include <istream>
#include <json.hpp>
#include <ostream>

#include "tagsched/metrics.hpp"

namespace tagsched::io {

using nlohmann::json;

namespace {

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("json", e.what());
  }
}

const json& require(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) throw ParseError(where + key, "required field is missing");
  return obj.at(key);
}

std::uint64_t as_uint(const json& value, const std::string& field) {
  if (!value.is_number_integer() || value.get<std::int64_t>() < 0) {
    throw ParseError(field, "must be a non-negative integer");
  }
  return value.get<std::uint64_t>();
}

std::uint32_t as_id(const json& value, const std::string& field) {
  const auto v = as_uint(value, field);
  if (v > std::numeric_limits<std::uint32_t>::max()) throw ParseError(field, "out of range");
  return static_cast<std::uint32_t>(v);
}

json summary_json(const Summary& s) {
  json p = json::object();
  for (std::size_t i = 0; i < s.percentiles.size(); ++i) {
    p["p" + std::to_string(static_cast<int>(kReportPercentiles[i]))] = s.percentiles[i];
  }
  return json{{"count", s.count}, {"mean", s.mean}, {"std_err", s.std_err}, {"percentiles", p}};
}

}  // namespace

ProblemInstance parse_instance(std::string_view text) {
  const auto doc = parse_json(text);
  if (!doc.is_object()) throw ParseError("instance", "must be a JSON object");
  const auto nodes = as_uint(require(doc, "nodes", ""), "nodes");
  if (nodes == 0) throw ParseError("nodes", "must be at least 1");
  const auto& edges_json = require(doc, "edges", "");
  if (!edges_json.is_array()) throw ParseError("edges", "must be an array");
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < edges_json.size(); ++i) {
    const auto field = "edges[" + std::to_string(i) + "]";
    const auto& e = edges_json[i];
    if (!e.is_array() || e.size() != 2) throw ParseError(field, "must be a [u, v] pair");
    edges.emplace_back(as_id(e[0], field), as_id(e[1], field));
  }
  const auto& tags_json = require(doc, "tags", "");
  if (!tags_json.is_array()) throw ParseError("tags", "must be an array");
  std::vector<Tag> tags;
  for (std::size_t i = 0; i < tags_json.size(); ++i) {
    const auto field = "tags[" + std::to_string(i) + "].";
    const auto& t = tags_json[i];
    tags.push_back(Tag{as_id(require(t, "id", field), field + "id"), as_id(require(t, "host", field), field + "host")});
  }

  Topology topology;
  try {
    topology = Topology(nodes, std::move(edges));
  } catch (const InvalidInput& e) {
    throw ParseError("edges", e.what());
  }
  try {
    return ProblemInstance(std::move(topology), std::move(tags));
  } catch (const InvalidInput& e) {
    throw ParseError("tags", e.what());
  }
}

std::string emit_instance(const ProblemInstance& instance) {
  json edges = json::array();
  for (const auto& [u, v] : instance.topology().edges()) edges.push_back({u, v});
  json tags = json::array();
  for (const auto& tag : instance.tags()) tags.push_back({{"id", tag.id}, {"host", tag.host}});
  return json{{"nodes", instance.node_count()}, {"edges", edges}, {"tags", tags}}.dump();
}

std::string emit_schedule(const Schedule& schedule) {
  json slots = json::array();
  for (const auto& slot : schedule.slots) {
    json records = json::array();
    for (const auto& rec : slot.interrogations) {
      records.push_back({{"node", rec.host}, {"tag", rec.tag}, {"carrier", rec.carrier}});
    }
    json carriers = json::array();
    for (NodeId v = 0; v < slot.roles.size(); ++v) {
      if (slot.roles[v] == Role::kCarrier) carriers.push_back(v);
    }
    slots.push_back({{"interrogations", records}, {"carriers", carriers}});
  }
  return json{{"L", schedule.length()}, {"C", schedule.carrier_slots()}, {"slots", slots}}.dump();
}

Schedule parse_schedule(std::string_view text, const ProblemInstance& instance) {
  const auto doc = parse_json(text);
  if (!doc.is_object()) throw ParseError("schedule", "must be a JSON object");
  const auto& slots_json = require(doc, "slots", "");
  if (!slots_json.is_array()) throw ParseError("slots", "must be an array");
  const std::size_t n = instance.node_count();
  Schedule schedule;
  for (std::size_t s = 0; s < slots_json.size(); ++s) {
    const auto where = "slots[" + std::to_string(s) + "].";
    const auto& records_json = require(slots_json[s], "interrogations", where);
    if (!records_json.is_array()) throw ParseError(where + "interrogations", "must be an array");
    std::vector<Interrogation> records;
    for (std::size_t r = 0; r < records_json.size(); ++r) {
      const auto field = where + "interrogations[" + std::to_string(r) + "].";
      const auto& rj = records_json[r];
      Interrogation rec{as_id(require(rj, "node", field), field + "node"), as_id(require(rj, "tag", field), field + "tag"),
                        as_id(require(rj, "carrier", field), field + "carrier")};
      if (rec.host >= n || rec.carrier >= n) throw ParseError(field, "node ID outside the instance");
      records.push_back(rec);
    }
    Timeslot slot = Timeslot::from_interrogations(n, std::move(records));
    if (slots_json[s].contains("carriers")) {
      const auto& carriers = slots_json[s].at("carriers");
      if (!carriers.is_array()) throw ParseError(where + "carriers", "must be an array");
      for (const auto& c : carriers) {
        const auto v = as_id(c, where + "carriers");
        if (v >= n) throw ParseError(where + "carriers", "node ID outside the instance");
        if (slot.roles[v] == Role::kTagQuery) throw ParseError(where + "carriers", "node is also querying a tag");
        slot.roles[v] = Role::kCarrier;
      }
    }
    schedule.slots.push_back(std::move(slot));
  }
  if (doc.contains("L") && as_uint(doc.at("L"), "L") != schedule.length()) {
    throw ParseError("L", "does not match the number of slots");
  }
  if (doc.contains("C") && as_uint(doc.at("C"), "C") != schedule.carrier_slots()) {
    throw ParseError("C", "does not match the carrier roles in the slots");
  }
  return schedule;
}

std::vector<ProblemInstance> read_corpus(std::istream& in) {
  std::vector<ProblemInstance> corpus;
  std::string line;
  while (std::getline(in, line)) {
    if (std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); })) continue;
    corpus.push_back(parse_instance(line));
  }
  return corpus;
}

void write_corpus(std::ostream& out, const std::vector<ProblemInstance>& corpus) {
  for (const auto& instance : corpus) out << emit_instance(instance) << '\n';
}

void write_bench_csv(std::ostream& out, const BenchmarkReport& report) {
  out << "instance_id,N,T,scheduler,success,C,L,objective,runtime_ms\n";
  for (const auto& r : report.runs) {
    out << r.instance_id << ',' << r.nodes << ',' << r.tags << ',' << r.scheduler << ',' << (r.success ? 1 : 0) << ','
        << r.carriers << ',' << r.length << ',' << r.objective << ',' << r.runtime_ms << '\n';
  }
}

std::string bench_report_json(const BenchmarkReport& report) {
  json schedulers = json::array();
  for (const auto& s : report.schedulers) {
    schedulers.push_back({{"name", s.name},
                          {"runs", s.runs},
                          {"successes", s.successes},
                          {"completion_pct", s.completion_pct},
                          {"runtime_ms", summary_json(s.runtime_ms)}});
  }
  json deltas = json::array();
  for (const auto& d : report.deltas) {
    deltas.push_back({{"N", d.nodes},
                      {"T", d.tags},
                      {"scheduler", d.scheduler},
                      {"carriers_saved", summary_json(d.carriers_saved)},
                      {"carriers_saved_pct", summary_json(d.carriers_saved_pct)},
                      {"timeslots_saved", summary_json(d.timeslots_saved)},
                      {"energy_saved_pct", summary_json(d.energy_saved_pct)}});
  }
  return json{{"reference", report.reference},
              {"sign_convention", "positive = candidate saves relative to the reference"},
              {"schedulers", schedulers},
              {"deltas", deltas}}
      .dump(2);
}

}  // namespace tagsched::io
