#include "cloudauction/io.hpp"

#include <algorithm>

#include <fmt/core.h>

namespace cloudauction {

namespace {

std::pair<std::size_t, std::size_t> position_of(std::string_view text, std::size_t byte) {
  // nlohmann reports the 1-based offset of the last character it read.
  const std::size_t end = std::min(byte == 0 ? 0 : byte - 1, text.size());
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i < end; ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) throw InputError(fmt::format("{}: expected an object", where));
  auto it = j.find(key);
  if (it == j.end()) throw InputError(fmt::format("{}: missing field \"{}\"", where, key));
  return *it;
}

double number_field(const Json& j, const char* key, const std::string& where) {
  const Json& v = field(j, key, where);
  if (!v.is_number()) throw InputError(fmt::format("{}: \"{}\" must be a number", where, key));
  return v.get<double>();
}

std::int64_t integer_field(const Json& j, const char* key, const std::string& where) {
  const Json& v = field(j, key, where);
  if (!v.is_number_integer())
    throw InputError(fmt::format("{}: \"{}\" must be an integer", where, key));
  return v.get<std::int64_t>();
}

int int_field(const Json& j, const char* key, const std::string& where) {
  const std::int64_t x = integer_field(j, key, where);
  if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max())
    throw InputError(fmt::format("{}: \"{}\" out of range", where, key));
  return static_cast<int>(x);
}

}  // namespace

InputError::InputError(const std::string& what, std::size_t line, std::size_t column)
    : std::runtime_error(line ? fmt::format("line {}, column {}: {}", line, column, what) : what),
      line_(line),
      column_(column) {}

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    const auto [line, column] = position_of(text, e.byte);
    std::string msg = e.what();
    // Drop nlohmann's "[json.exception.parse_error.101] parse error at ..." prefix.
    if (auto pos = msg.find(": syntax error"); pos != std::string::npos) msg = msg.substr(pos + 2);
    throw InputError(msg, line, column);
  }
}

Json job_to_json(const JobType& job) {
  Json j;
  j["id"] = job.id;
  j["release"] = job.release;
  j["deadline"] = job.deadline;
  j["demand"] = job.demand;
  j["length"] = job.length;
  j["value"] = job.value;
  return j;
}

Json instance_to_json(const Instance& instance) {
  Json j;
  j["capacity"] = instance.capacity;
  j["kappa"] = instance.kappa;
  j["jobs"] = Json::array();
  for (const auto& job : instance.jobs) j["jobs"].push_back(job_to_json(job));
  return j;
}

Instance instance_from_json(const Json& j) {
  const int capacity = int_field(j, "capacity", "instance");
  const int kappa = int_field(j, "kappa", "instance");
  const Json& arr = field(j, "jobs", "instance");
  if (!arr.is_array()) throw InputError("instance: \"jobs\" must be an array");
  std::vector<JobType> jobs;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string where = fmt::format("jobs[{}]", i);
    JobType job;
    job.id = integer_field(arr[i], "id", where);
    job.release = number_field(arr[i], "release", where);
    job.deadline = number_field(arr[i], "deadline", where);
    job.demand = int_field(arr[i], "demand", where);
    job.length = number_field(arr[i], "length", where);
    job.value = number_field(arr[i], "value", where);
    jobs.push_back(job);
  }
  return Instance(capacity, kappa, std::move(jobs));
}

std::string serialize_instance(const Instance& instance) {
  return instance_to_json(instance).dump(2) + "\n";
}

Instance parse_instance(std::string_view text) { return instance_from_json(parse_json(text)); }

Json outcome_to_json(const Outcome& outcome) {
  Json j;
  j["welfare"] = outcome.welfare;
  j["completed"] = outcome.completed;
  Json pay = Json::object();
  for (const auto& [id, p] : outcome.payments) pay[std::to_string(id)] = p;
  Json util = Json::object();
  for (const auto& [id, u] : outcome.utilities) util[std::to_string(id)] = u;
  j["payments"] = std::move(pay);
  j["utilities"] = std::move(util);
  return j;
}

std::string format_number(double x) { return fmt::format("{}", x); }

std::string trace_csv(const AllocationTrace& trace) {
  std::string out = "segment_start,segment_end,job_id,instances\n";
  for (const auto& seg : trace.segments)
    for (const auto& [id, count] : seg.allocation)
      out += fmt::format("{},{},{},{}\n", format_number(seg.start), format_number(seg.end), id,
                         count);
  return out;
}

std::string schedule_csv(const Instance& instance, const OfflineSolution& solution) {
  std::string out = "job_id,start,end\n";
  for (const auto& s : solution.schedule) {
    const JobType* job = instance.find(s.id);
    out += fmt::format("{},{},{}\n", s.id, format_number(s.start),
                       format_number(s.start + (job ? job->length : 0.0)));
  }
  return out;
}

Json prediction_to_json(const AdversarialInstance& adv) {
  Json j;
  j["family"] = adv.family;
  j["mechanism"] = adv.mechanism;
  j["priority"] = adv.priority;
  j["chi"] = adv.chi;
  Json params = Json::object();
  for (const auto& [k, v] : adv.parameters) params[k] = v;
  j["parameters"] = std::move(params);
  j["predicted_opt"] = adv.predicted_opt;
  j["predicted_mech_welfare"] = adv.predicted_mech_welfare;
  j["predicted_mech_winners"] = adv.predicted_mech_winners;
  j["asymptotic_ratio"] = adv.asymptotic_ratio;
  return j;
}

Json adversarial_to_json(const AdversarialInstance& adv) {
  Json j;
  j["instance"] = instance_to_json(adv.instance);
  j["prediction"] = prediction_to_json(adv);
  return j;
}

AdversarialInstance adversarial_from_json(const Json& j) {
  AdversarialInstance adv;
  adv.instance = instance_from_json(field(j, "instance", "document"));
  const Json& p = field(j, "prediction", "document");
  auto text = [&](const char* key) {
    const Json& v = field(p, key, "prediction");
    if (!v.is_string()) throw InputError(fmt::format("prediction: \"{}\" must be a string", key));
    return v.get<std::string>();
  };
  adv.family = text("family");
  adv.mechanism = text("mechanism");
  adv.priority = text("priority");
  adv.chi = number_field(p, "chi", "prediction");
  const Json& params = field(p, "parameters", "prediction");
  if (!params.is_object()) throw InputError("prediction: \"parameters\" must be an object");
  for (const auto& [k, v] : params.items()) {
    if (!v.is_number()) throw InputError(fmt::format("prediction: parameter {} not a number", k));
    adv.parameters[k] = v.get<double>();
  }
  adv.predicted_opt = number_field(p, "predicted_opt", "prediction");
  adv.predicted_mech_welfare = number_field(p, "predicted_mech_welfare", "prediction");
  const Json& winners = field(p, "predicted_mech_winners", "prediction");
  if (!winners.is_array()) throw InputError("prediction: winners must be an array");
  for (const auto& w : winners) {
    if (!w.is_number_integer()) throw InputError("prediction: winner ids must be integers");
    adv.predicted_mech_winners.push_back(w.get<JobId>());
  }
  adv.asymptotic_ratio = number_field(p, "asymptotic_ratio", "prediction");
  if (adv.mechanism != "dp") {
    try {
      adv.priority_function = parse_priority(adv.priority, adv.instance.kappa);
    } catch (const std::invalid_argument& e) {
      throw InputError(fmt::format("prediction: {}", e.what()));
    }
  }
  return adv;
}

Json dsic_report_to_json(const DsicReport& report) {
  Json j;
  j["deviations"] = report.deviations;
  j["violations"] = Json::array();
  for (const auto& v : report.violations) {
    Json e;
    e["id"] = v.id;
    e["deviation"] = v.deviation;
    e["truth"] = job_to_json(v.truth);
    e["report"] = job_to_json(v.report);
    e["truthful_utility"] = v.truthful_utility;
    e["deviating_utility"] = v.deviating_utility;
    j["violations"].push_back(std::move(e));
  }
  return j;
}

Json monotone_report_to_json(const MonotoneReport& report) {
  Json j;
  j["deviations"] = report.deviations;
  j["violations"] = Json::array();
  for (const auto& v : report.violations) {
    Json e;
    e["id"] = v.id;
    e["deviation"] = v.deviation;
    e["truth"] = job_to_json(v.truth);
    e["report"] = job_to_json(v.report);
    e["truth_completes"] = v.truth_completes;
    e["report_completes"] = v.report_completes;
    j["violations"].push_back(std::move(e));
  }
  return j;
}

}  // namespace cloudauction
