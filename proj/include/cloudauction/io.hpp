#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include <json.hpp>

#include "cloudauction/adversarial.hpp"
#include "cloudauction/engine.hpp"
#include "cloudauction/harness.hpp"
#include "cloudauction/model.hpp"
#include "cloudauction/oracle.hpp"

namespace cloudauction {

using Json = nlohmann::ordered_json;

/// Malformed or ill-typed input. Syntax errors carry a 1-based line/column.
class InputError : public std::runtime_error {
 public:
  InputError(const std::string& what, std::size_t line = 0, std::size_t column = 0);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Parses JSON text, reporting syntax errors as InputError with position.
Json parse_json(std::string_view text);

Json instance_to_json(const Instance& instance);
Instance instance_from_json(const Json& j);

/// Canonical text: fixed field order, two-space indent, shortest round-trip
/// numbers, trailing newline. parse -> serialize reproduces it byte for byte.
std::string serialize_instance(const Instance& instance);
Instance parse_instance(std::string_view text);

Json outcome_to_json(const Outcome& outcome);

/// segment_start,segment_end,job_id,instances; one row per allocated job per
/// segment.
std::string trace_csv(const AllocationTrace& trace);

/// job_id,start,end
std::string schedule_csv(const Instance& instance, const OfflineSolution& solution);

/// Everything an adversarial construction predicts, without the instance.
Json prediction_to_json(const AdversarialInstance& adv);
/// {"instance": ..., "prediction": ...}
Json adversarial_to_json(const AdversarialInstance& adv);
/// Inverse of adversarial_to_json. Custom priorities other than the built-in
/// parseable ones cannot be restored and fail here.
AdversarialInstance adversarial_from_json(const Json& j);

Json dsic_report_to_json(const DsicReport& report);
Json monotone_report_to_json(const MonotoneReport& report);
Json job_to_json(const JobType& job);

/// Shortest representation that reads back to the same double.
std::string format_number(double x);

}  // namespace cloudauction
