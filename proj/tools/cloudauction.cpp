#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/core.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "cloudauction/adversarial.hpp"
#include "cloudauction/dp.hpp"
#include "cloudauction/greedy.hpp"
#include "cloudauction/harness.hpp"
#include "cloudauction/io.hpp"
#include "cloudauction/oracle.hpp"
#include "cloudauction/payments.hpp"

using namespace cloudauction;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitViolations = 2;

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("cloudauction");
  logger->set_pattern("[%l] %v");
  const char* env = std::getenv("CLOUDAUCTION_LOG");
  logger->set_level(spdlog::level::from_str(env ? env : "off"));
  spdlog::set_default_logger(logger);
}

std::string read_input(const std::string& path) {
  if (path == "-") {
    return std::string(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(fmt::format("cannot open {}", path));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError(fmt::format("cannot write {}", path));
  out << text;
}

// Accepts a plain instance or an {"instance", "prediction"} document.
Instance load_instance(const std::string& path) {
  const Json doc = parse_json(read_input(path));
  if (doc.is_object() && doc.contains("instance")) return instance_from_json(doc["instance"]);
  return instance_from_json(doc);
}

Instance load_valid_instance(const std::string& path) {
  Instance inst = load_instance(path);
  const ValidationResult v = validate_instance(inst);
  if (!v.ok()) {
    std::string msg = "invalid instance:";
    for (const auto& e : v.violations)
      msg += e.job ? fmt::format("\n  job {}: {}", *e.job, e.message)
                   : fmt::format("\n  {}", e.message);
    throw InputError(msg);
  }
  return inst;
}

struct MechanismOptions {
  std::string mechanism = "greedy";
  std::string priority = "exp:2";
  double chi = 2.0;

  void add(CLI::App* cmd) {
    cmd->add_option("--mechanism", mechanism, "greedy or dp")
        ->check(CLI::IsMember({"greedy", "dp"}))
        ->capture_default_str();
    cmd->add_option("--priority", priority, "exp:CHI, lin:A, exp-opt, lin-opt, poly:F1:Q")
        ->capture_default_str();
    cmd->add_option("--chi", chi, "base of the dp mechanism's boost")->capture_default_str();
  }

  std::unique_ptr<Mechanism> build(int kappa) const {
    if (mechanism == "dp") return std::make_unique<DpMechanism>(chi);
    return std::make_unique<GreedyMechanism>(parse_priority(priority, kappa));
  }
};

PaymentRule payment_rule(const std::string& s) {
  return s == "bid" ? PaymentRule::pay_your_bid : PaymentRule::critical_value;
}

struct FamilyOptions {
  std::string family;
  int p = 10;
  int kappa = 1;
  double chi = 2.0;
  int h = 2;
  int n_max = 1;
  int capacity = 4;
  std::optional<double> a;
  std::string priority = "poly:2:1";
  std::optional<double> eps;
  std::optional<double> del;
  std::optional<double> mu;

  void add(CLI::App* cmd, bool family_required) {
    auto* opt = cmd->add_option("--family", family, "exp, single, nmaxC, general, linear, dp")
                    ->check(CLI::IsMember({"exp", "single", "nmaxC", "general", "linear", "dp"}));
    if (family_required) opt->required();
    cmd->add_option("--kappa", kappa, "maximum job length")->capture_default_str();
    cmd->add_option("--chi", chi, "exponential base")->capture_default_str();
    cmd->add_option("--group-size", h, "long jobs per group, h (exp, dp)")->capture_default_str();
    cmd->add_option("--n-max", n_max, "largest demand (exp, dp)")->capture_default_str();
    cmd->add_option("--capacity", capacity, "capacity C (nmaxC)")->capture_default_str();
    cmd->add_option("--a", a, "linear slope (default: optimal for kappa)");
    cmd->add_option("--priority", priority, "priority for the general family")
        ->capture_default_str();
    cmd->add_option("--eps", eps, "override the eps separation");
    cmd->add_option("--del", del, "override the del separation");
    cmd->add_option("--mu", mu, "override the mu separation (nmaxC)");
  }

  AdversarialInstance generate(int at_p) const {
    Perturbation pert{eps, del, mu};
    if (family == "exp") return gen_exp_lower(h, n_max, kappa, chi, at_p, pert);
    if (family == "single") return gen_single_machine(kappa, chi, at_p, pert);
    if (family == "nmaxC") return gen_nmax_eq_C(capacity, at_p, pert, chi);
    if (family == "general") return gen_general_f(parse_priority(priority, kappa), kappa, at_p, pert);
    if (family == "linear") return gen_linear(a.value_or(optimal_a(kappa)), kappa, at_p, pert);
    if (family == "dp") return gen_dp_lower(h, n_max, kappa, chi, at_p, pert);
    throw std::invalid_argument(fmt::format("unknown family '{}'", family));
  }
};

std::vector<int> parse_sweep(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size() || v < 1)
      throw std::invalid_argument(fmt::format("bad p value '{}' in sweep", item));
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument("empty sweep");
  return out;
}

// family, parameters (sorted, p excluded), p, ratio, asymptotic_ratio
std::string ratio_header(const AdversarialInstance& adv) {
  std::string h = "family";
  for (const auto& [k, v] : adv.parameters)
    if (k != "p") h += "," + k;
  return h + ",p,ratio,asymptotic_ratio\n";
}

std::string ratio_row(const AdversarialInstance& adv, double ratio) {
  std::string row = adv.family;
  for (const auto& [k, v] : adv.parameters)
    if (k != "p") row += "," + format_number(v);
  const auto p = adv.parameters.count("p") ? adv.parameters.at("p") : 0.0;
  return row + fmt::format(",{},{},{}\n", format_number(p), format_number(ratio),
                           format_number(adv.asymptotic_ratio));
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();
  CLI::App app{"Online cloud auction simulator and stress tester"};
  app.require_subcommand(1);

  // simulate
  auto* simulate = app.add_subcommand("simulate", "run a mechanism and print its allocation trace");
  std::string sim_instance;
  std::string sim_trace = "-";
  std::string sim_outcome;
  MechanismOptions sim_mech;
  simulate->add_option("--instance", sim_instance, "instance JSON ('-' for stdin)")->required();
  simulate->add_option("--trace", sim_trace, "trace CSV destination")->capture_default_str();
  simulate->add_option("--outcome", sim_outcome, "outcome JSON destination (default: stdout)");
  sim_mech.add(simulate);

  // settle
  auto* settle_cmd = app.add_subcommand("settle", "run a mechanism and price the winners");
  std::string settle_instance;
  std::string settle_payment = "critical";
  MechanismOptions settle_mech;
  settle_cmd->add_option("--instance", settle_instance, "instance JSON ('-' for stdin)")
      ->required();
  settle_cmd->add_option("--payment", settle_payment, "critical or bid")
      ->check(CLI::IsMember({"critical", "bid"}))
      ->capture_default_str();
  settle_mech.add(settle_cmd);

  // opt
  auto* opt_cmd = app.add_subcommand("opt", "offline optimum with a witness schedule");
  std::string opt_instance;
  std::optional<double> opt_grid;
  opt_cmd->add_option("--instance", opt_instance, "instance JSON ('-' for stdin)")->required();
  opt_cmd->add_option("--grid", opt_grid, "start-time grid (default: inferred)");

  // adversary
  auto* adversary = app.add_subcommand("adversary", "emit a lower-bound instance family member");
  FamilyOptions adv_family;
  std::string adv_prediction;
  std::string adv_instance_out;
  adv_family.add(adversary, true);
  adversary->add_option("--p", adv_family.p, "chain length")->capture_default_str();
  adversary->add_option("--prediction", adv_prediction, "also write the prediction JSON here");
  adversary->add_option("--instance-out", adv_instance_out, "also write the bare instance here");

  // ratio
  auto* ratio_cmd = app.add_subcommand("ratio", "measured competitive ratio as CSV");
  FamilyOptions ratio_family;
  std::string ratio_input = "-";
  std::string ratio_sweep;
  bool ratio_compute_opt = false;
  ratio_family.add(ratio_cmd, false);
  ratio_cmd->add_option("--p", ratio_family.p, "chain length")->capture_default_str();
  ratio_cmd->add_option("--input", ratio_input, "adversary output when no --family is given")
      ->capture_default_str();
  ratio_cmd->add_option("--sweep", ratio_sweep, "comma-separated p values");
  ratio_cmd->add_flag("--compute-opt", ratio_compute_opt,
                      "use the offline oracle instead of the predicted optimum");

  // check
  auto* check = app.add_subcommand("check", "property checks; exit 2 on violations");
  bool check_dsic_flag = false;
  bool check_mono_flag = false;
  bool check_inv_flag = false;
  std::string check_instance;
  std::size_t check_samples = 1000;
  std::size_t check_count = 10;
  std::uint64_t check_seed = 42;
  int check_jobs = 1;
  std::string check_payment = "critical";
  MechanismOptions check_mech;
  FuzzParams check_fuzz;
  check->add_flag("--dsic", check_dsic_flag, "sample misreports and compare utilities");
  check->add_flag("--monotone", check_mono_flag, "check completion under dominated reports");
  check->add_flag("--invariants", check_inv_flag, "capacity, all-or-nothing, IR, OPT, thresholds");
  check->add_option("--instance", check_instance, "check one instance instead of fuzzing");
  check->add_option("--samples", check_samples, "deviations per instance")->capture_default_str();
  check->add_option("--count", check_count, "fuzzed instances")->capture_default_str();
  check->add_option("--seed", check_seed, "seed for fuzzing and sampling")->capture_default_str();
  check->add_option("--jobs", check_jobs, "worker threads")->capture_default_str();
  check->add_option("--max-jobs", check_fuzz.max_jobs, "largest fuzzed job count")
      ->capture_default_str();
  check->add_option("--payment", check_payment, "critical or bid")
      ->check(CLI::IsMember({"critical", "bid"}))
      ->capture_default_str();
  check_mech.add(check);

  // fuzz
  auto* fuzz = app.add_subcommand("fuzz", "emit random valid instances, one JSON per line");
  std::size_t fuzz_count = 10;
  std::uint64_t fuzz_seed = 42;
  FuzzParams fuzz_params;
  fuzz->add_option("--count", fuzz_count, "number of instances")->capture_default_str();
  fuzz->add_option("--seed", fuzz_seed, "seed")->capture_default_str();
  fuzz->add_option("--min-jobs", fuzz_params.min_jobs, "fewest jobs")->capture_default_str();
  fuzz->add_option("--max-jobs", fuzz_params.max_jobs, "most jobs")->capture_default_str();
  fuzz->add_option("--min-capacity", fuzz_params.min_capacity, "smallest C")->capture_default_str();
  fuzz->add_option("--max-capacity", fuzz_params.max_capacity, "largest C")->capture_default_str();
  fuzz->add_option("--kappa", fuzz_params.kappa, "maximum job length")->capture_default_str();
  fuzz->add_option("--quantum", fuzz_params.quantum, "time grid step")->capture_default_str();
  fuzz->add_option("--horizon", fuzz_params.horizon, "latest release")->capture_default_str();
  fuzz->add_option("--max-laxity", fuzz_params.max_laxity, "largest deadline slack")->capture_default_str();
  fuzz->add_option("--min-value", fuzz_params.min_value, "lowest value")->capture_default_str();
  fuzz->add_option("--max-value", fuzz_params.max_value, "highest value")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (*simulate) {
      const Instance inst = load_valid_instance(sim_instance);
      const auto mech = sim_mech.build(inst.kappa);
      spdlog::info("simulating {} jobs with {}", inst.jobs.size(), mech->name());
      const RunResult r = run(inst, *mech);
      const Outcome outcome = make_outcome(inst, r.completed, {});
      write_output(sim_trace, trace_csv(r.trace));
      write_output(sim_outcome, outcome_to_json(outcome).dump(2) + "\n");
      return kExitOk;
    }
    if (*settle_cmd) {
      const Instance inst = load_valid_instance(settle_instance);
      const auto mech = settle_mech.build(inst.kappa);
      const Outcome outcome = settle(inst, *mech, payment_rule(settle_payment));
      std::cout << outcome_to_json(outcome).dump(2) << "\n";
      return kExitOk;
    }
    if (*opt_cmd) {
      const Instance inst = load_valid_instance(opt_instance);
      const OfflineSolution sol = offline_opt(inst, opt_grid);
      std::cout << "welfare," << format_number(sol.welfare) << "\n\n" << schedule_csv(inst, sol);
      return kExitOk;
    }
    if (*adversary) {
      const AdversarialInstance adv = adv_family.generate(adv_family.p);
      std::cout << adversarial_to_json(adv).dump(2) << "\n";
      if (!adv_prediction.empty())
        write_output(adv_prediction, prediction_to_json(adv).dump(2) + "\n");
      if (!adv_instance_out.empty()) write_output(adv_instance_out, serialize_instance(adv.instance));
      return kExitOk;
    }
    if (*ratio_cmd) {
      auto measure = [&](const AdversarialInstance& adv) {
        const auto mech = adv.make_mechanism();
        std::optional<double> opt;
        if (!ratio_compute_opt) opt = adv.predicted_opt;
        const RatioResult r = competitive_ratio(adv.instance, *mech, opt);
        spdlog::info("{} p={}: W={} OPT={}", adv.family,
                     adv.parameters.count("p") ? adv.parameters.at("p") : 0.0, r.mech_welfare,
                     r.opt_welfare);
        return r.ratio;
      };
      if (ratio_family.family.empty()) {
        const AdversarialInstance adv = adversarial_from_json(parse_json(read_input(ratio_input)));
        std::cout << ratio_header(adv) << ratio_row(adv, measure(adv));
        return kExitOk;
      }
      const std::vector<int> ps =
          ratio_sweep.empty() ? std::vector<int>{ratio_family.p} : parse_sweep(ratio_sweep);
      bool header = false;
      for (int p : ps) {
        const AdversarialInstance adv = ratio_family.generate(p);
        if (!header) {
          std::cout << ratio_header(adv);
          header = true;
        }
        std::cout << ratio_row(adv, measure(adv));
      }
      return kExitOk;
    }
    if (*check) {
      if (!check_dsic_flag && !check_mono_flag && !check_inv_flag)
        throw InputError("check needs at least one of --dsic, --monotone, --invariants");
      std::vector<Instance> instances;
      if (!check_instance.empty())
        instances.push_back(load_valid_instance(check_instance));
      else
        instances = fuzz_instances(check_count, check_seed, check_fuzz);
      const PaymentRule rule = payment_rule(check_payment);

      Json report;
      std::size_t violations = 0;
      Json per_instance = Json::array();
      for (std::size_t i = 0; i < instances.size(); ++i) {
        const Instance& inst = instances[i];
        const auto mech = check_mech.build(inst.kappa);
        const std::uint64_t seed = check_seed + i;
        Json entry;
        entry["index"] = i;
        if (check_dsic_flag) {
          const DsicReport r = check_dsic(inst, *mech, rule, check_samples, seed, check_jobs);
          violations += r.violations.size();
          entry["dsic"] = dsic_report_to_json(r);
        }
        if (check_mono_flag) {
          const MonotoneReport r = check_monotone(inst, *mech, check_samples, seed, check_jobs);
          violations += r.violations.size();
          entry["monotone"] = monotone_report_to_json(r);
        }
        if (check_inv_flag) {
          const InvariantReport r = check_invariants(inst, *mech, rule);
          violations += r.violations.size();
          entry["invariants"] = r.violations;
        }
        const bool dirty =
            (entry.contains("dsic") && !entry["dsic"]["violations"].empty()) ||
            (entry.contains("monotone") && !entry["monotone"]["violations"].empty()) ||
            (entry.contains("invariants") && !entry["invariants"].empty());
        if (dirty) {
          entry["instance"] = instance_to_json(inst);
          per_instance.push_back(std::move(entry));
        }
      }
      report["mechanism"] = check_mech.build(instances.empty() ? 1 : instances[0].kappa)->name();
      report["instances"] = instances.size();
      report["violations"] = violations;
      report["failures"] = std::move(per_instance);
      std::cout << report.dump(2) << "\n";
      return violations ? kExitViolations : kExitOk;
    }
    if (*fuzz) {
      for (const auto& inst : fuzz_instances(fuzz_count, fuzz_seed, fuzz_params))
        std::cout << instance_to_json(inst).dump() << "\n";
      return kExitOk;
    }
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const GuardError& e) {
    std::cerr << "guard: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitOk;
}
