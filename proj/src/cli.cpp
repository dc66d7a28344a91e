#include "gambles/cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "gambles/criteria.hpp"
#include "gambles/dynamics.hpp"
#include "gambles/ergodicity.hpp"
#include "gambles/errors.hpp"
#include "gambles/gamble.hpp"
#include "gambles/io/format.hpp"
#include "gambles/io/manifest.hpp"
#include "gambles/io/spec_file.hpp"
#include "gambles/lotteries.hpp"
#include "gambles/utility.hpp"

namespace gambles::cli {

namespace {

namespace fs = std::filesystem;
using io::Cell;
using io::Table;

constexpr std::uint64_t kDefaultSeed = 1;

struct CommonOptions {
  std::string format = "csv";
  std::string out_dir;
  unsigned threads = 0;
};

// Collects outputs of one command and writes its manifest.
class Session {
 public:
  Session(std::string command, const CommonOptions& common, std::ostream& out)
      : format_(io::parse_format(common.format)), out_dir_(common.out_dir), out_(out) {
    manifest_.command = std::move(command);
  }

  io::RunManifest& manifest() { return manifest_; }
  io::OutputFormat format() const { return format_; }

  void emit(const std::string& stem, const Table& table) {
    const std::string text = table.render(format_);
    if (out_dir_.empty()) {
      out_ << text;
      stdout_text_ += text;
      return;
    }
    const std::string name = stem + "." + std::string(io::file_extension(format_));
    write_file(name, text);
    manifest_.add_output(name, text);
  }

  void finish(std::ostream& err) {
    if (out_dir_.empty()) {
      manifest_.add_output("stdout", stdout_text_);
      err << manifest_.to_text();
    } else {
      write_file("manifest.txt", manifest_.to_text());
    }
  }

 private:
  void write_file(const std::string& name, const std::string& text) const {
    fs::create_directories(out_dir_);
    std::ofstream file(fs::path(out_dir_) / name, std::ios::binary);
    file << text;
    if (!file) throw GambleError("cannot write '" + (fs::path(out_dir_) / name).string() + "'");
  }

  io::OutputFormat format_;
  std::string out_dir_;
  std::ostream& out_;
  io::RunManifest manifest_;
  std::string stdout_text_;
};

std::string num(double value) { return io::format_number(value); }

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("GAMBLES_SEED"); env != nullptr && *env != '\0') {
    std::uint64_t seed = 0;
    const std::string_view text(env);
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), seed);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
      throw ValidationError("GAMBLES_SEED must be an unsigned integer, got '" + std::string(text) + "'");
    }
    return seed;
  }
  return kDefaultSeed;
}

std::optional<UtilityFunction> parse_utility(const std::string& name) {
  if (name == "none") return std::nullopt;
  if (name == "linear") return UtilityFunction::linear();
  if (name == "log") return UtilityFunction::logarithmic();
  if (name == "sqrt") return UtilityFunction::square_root();
  throw ValidationError("unknown utility '" + name + "' (expected none, linear, log or sqrt)");
}

// "5", "1:50" and "1:50:7" (start:stop:step), stop inclusive.
std::vector<int> expand_ranges(const std::vector<std::string>& items) {
  std::vector<int> values;
  for (const auto& item : items) {
    std::vector<int> parts;
    std::size_t begin = 0;
    while (true) {
      const std::size_t end = item.find(':', begin);
      const std::string_view token = std::string_view(item).substr(begin, end - begin);
      int value = 0;
      const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
      if (token.empty() || ec != std::errc{} || ptr != token.data() + token.size()) {
        throw ValidationError("bad n_max value or range '" + item + "'");
      }
      parts.push_back(value);
      if (end == std::string::npos) break;
      begin = end + 1;
    }
    if (parts.size() == 1) {
      values.push_back(parts[0]);
    } else if (parts.size() <= 3) {
      const int step = parts.size() == 3 ? parts[2] : 1;
      if (step <= 0 || parts[1] < parts[0]) throw ValidationError("bad n_max range '" + item + "'");
      for (int n = parts[0]; n <= parts[1]; n += step) values.push_back(n);
    } else {
      throw ValidationError("bad n_max range '" + item + "'");
    }
  }
  return values;
}

Gamble load_gamble(const std::string& path) {
  if (path.empty()) return coin_toss_gamble();
  auto parsed = io::load_spec(path);
  if (auto* lottery = std::get_if<LotterySpec>(&parsed)) return to_gamble(*lottery);
  return std::get<Gamble>(std::move(parsed));
}

// ---------------------------------------------------------------- evaluate

struct EvaluateOptions {
  std::string spec;
  double wealth = 1.0;
  std::optional<double> price;
  std::optional<int> n_max;
  std::string utility = "none";
};

void add_common_rows(Table& table, const CriterionReport& report) {
  table.add_row({Cell::label("wealth"), Cell::number(report.evaluation_wealth)});
  table.add_row({Cell::label("huygens_rate"), Cell::number(report.huygens_rate)});
  table.add_row({Cell::label("laplace_rate"), Cell::number(report.laplace_rate)});
  if (report.bernoulli) {
    const auto& b = *report.bernoulli;
    table.add_row({Cell::label("bernoulli_value"), Cell::number(b.value)});
    table.add_row({Cell::label("bernoulli_expected_gain"), Cell::number(b.decomposition.expected_gain)});
    table.add_row({Cell::label("bernoulli_purchase_loss"), Cell::number(b.decomposition.purchase_loss)});
    table.add_row({Cell::label("price_exceeds_wealth"), Cell::flag(b.price_exceeds_wealth)});
  }
  if (report.utility_kind) {
    table.add_row({Cell::label("utility"), Cell::label(std::string(to_string(*report.utility_kind)))});
    table.add_row({Cell::label("expected_utility_rate"), Cell::number(*report.expected_utility_rate)});
  }
  table.add_row({Cell::label("bankruptcy_possible"), Cell::flag(report.bankruptcy_possible)});
}

int cmd_evaluate(const EvaluateOptions& o, Session& session) {
  auto& m = session.manifest();
  m.set_parameter("spec", o.spec);
  m.set_parameter("wealth", num(o.wealth));
  m.set_parameter("utility", o.utility);
  if (o.price) m.set_parameter("price", num(*o.price));
  if (o.n_max) m.set_parameter("nmax", std::to_string(*o.n_max));

  const auto utility = parse_utility(o.utility);
  const auto parsed = io::load_spec(o.spec, {o.n_max, o.price});
  Table table({"criterion", "value"});

  if (const auto* lottery = std::get_if<LotterySpec>(&parsed)) {
    const auto report = evaluate_criteria(*lottery, o.wealth, utility);
    table.add_row({Cell::label("family"), Cell::label(lottery->family)});
    table.add_row({Cell::label("nmax"), Cell::integer(lottery->n_max())});
    table.add_row({Cell::label("price"), Cell::number(lottery->ticket_price)});
    table.add_row({Cell::label("round_duration"), Cell::number(lottery->round_duration)});
    add_common_rows(table, report);
    const auto parts = menger_decomposition(*lottery, o.wealth);
    table.add_row({Cell::label("laplace_change"), Cell::number(parts.total())});
    table.add_row({Cell::label("menger_first_term"), Cell::number(parts.first_term)});
    table.add_row({Cell::label("menger_tail_sum"), Cell::number(parts.tail_sum)});
  } else {
    const auto& gamble = std::get<Gamble>(parsed);
    const auto report = evaluate_criteria(gamble, o.wealth, utility);
    table.add_row({Cell::label("round_duration"), Cell::number(gamble.round_duration())});
    add_common_rows(table, report);
    const auto factors = growth_factors(gamble, o.wealth);
    for (std::size_t i = 0; i < factors.factors.size(); ++i) {
      table.add_row({Cell::label("growth_factor." + std::to_string(i + 1)), Cell::number(factors.factors[i])});
    }
  }
  session.emit("evaluate", table);
  return kExitOk;
}

// ---------------------------------------------------------------- simulate

struct SimulateOptions {
  std::string spec;
  double wealth = 1.0;
  std::string dynamic = "multiplicative";
  std::size_t rounds = 1000;
  std::size_t ensemble = 1;
  std::optional<std::uint64_t> seed;
  std::vector<std::size_t> times;
};

int cmd_simulate(const SimulateOptions& o, const CommonOptions& common, Session& session) {
  const std::uint64_t seed = resolve_seed(o.seed);
  auto& m = session.manifest();
  m.seed = std::to_string(seed);
  m.set_parameter("spec", o.spec.empty() ? "coin" : o.spec);
  m.set_parameter("wealth", num(o.wealth));
  m.set_parameter("dynamic", o.dynamic);
  m.set_parameter("rounds", std::to_string(o.rounds));
  m.set_parameter("ensemble", std::to_string(o.ensemble));

  const Gamble gamble = load_gamble(o.spec);
  const DynamicKind dynamic = parse_dynamic(o.dynamic);

  if (o.ensemble <= 1) {
    const auto trajectory = simulate_trajectory(gamble, dynamic, o.wealth, o.rounds, seed);
    Table table({"tau", "outcome", "wealth"});
    for (std::size_t tau = 0; tau <= trajectory.rounds(); ++tau) {
      table.add_row({Cell::integer(static_cast<std::int64_t>(tau)),
                     tau == 0 ? Cell::label("") : Cell::integer(trajectory.outcome_path[tau - 1]),
                     Cell::number(trajectory.wealth_path[tau])});
    }
    if (o.rounds > 0) m.results.emplace_back("time_average_rate", num(time_average_rate(trajectory)));
    m.results.emplace_back("final_wealth", num(trajectory.wealth_path.back()));
    session.emit("trajectory", table);
    return kExitOk;
  }

  EnsembleOptions options;
  options.sample_times = o.times;
  options.threads = common.threads;
  const auto summary = simulate_ensemble(gamble, dynamic, o.wealth, o.rounds, o.ensemble, seed, options);
  Table table({"tau", "ensemble_mean_W", "standard_error"});
  for (std::size_t i = 0; i < summary.times.size(); ++i) {
    table.add_row({Cell::integer(static_cast<std::int64_t>(summary.times[i])),
                   Cell::number(summary.ensemble_mean_wealth[i]), Cell::number(summary.standard_error[i])});
  }
  session.emit("ensemble", table);
  return kExitOk;
}

// ---------------------------------------------------------------- diagnose

struct DiagnoseOptions {
  std::string spec;
  double wealth = 1.0;
  std::string dynamic = "multiplicative";
  std::string observable = "delta-log-w";
  std::size_t rounds = 100'000;
  std::size_t ensemble = 10'000;
  std::optional<std::uint64_t> seed;
  double threshold = 0.01;
  std::size_t windows = 8;
};

int cmd_diagnose(const DiagnoseOptions& o, const CommonOptions& common, Session& session) {
  const std::uint64_t seed = resolve_seed(o.seed);
  auto& m = session.manifest();
  m.seed = std::to_string(seed);
  m.set_parameter("spec", o.spec.empty() ? "coin" : o.spec);
  m.set_parameter("wealth", num(o.wealth));
  m.set_parameter("dynamic", o.dynamic);
  m.set_parameter("observable", o.observable);
  m.set_parameter("rounds", std::to_string(o.rounds));
  m.set_parameter("ensemble", std::to_string(o.ensemble));
  m.set_parameter("threshold", num(o.threshold));
  m.set_parameter("windows", std::to_string(o.windows));

  const Gamble gamble = load_gamble(o.spec);
  DiagnoseConfig config;
  config.rounds = o.rounds;
  config.realizations = o.ensemble;
  config.seed = seed;
  config.threshold = o.threshold;
  config.windows = o.windows;
  config.threads = common.threads;
  const auto v = diagnose(gamble, parse_dynamic(o.dynamic), parse_observable(o.observable), o.wealth, config);

  Table table({"field", "value"});
  const auto row = [&](std::string name, Cell cell) { table.add_row({Cell::label(std::move(name)), std::move(cell)}); };
  row("verdict", Cell::label(std::string(to_string(v.verdict))));
  row("dynamic", Cell::label(std::string(to_string(v.dynamic))));
  row("observable", Cell::label(std::string(to_string(v.observable))));
  row("expectation_stationary", Cell::flag(v.expectation_stationary));
  row("stationarity_statistic", Cell::number(v.stationarity_statistic));
  row("stationarity_critical", Cell::number(v.stationarity_critical));
  row("time_average_converges", Cell::flag(v.time_average_converges));
  row("convergence_statistic", Cell::number(v.convergence_statistic));
  row("convergence_critical", Cell::number(v.convergence_critical));
  row("ensemble_expectation", Cell::number(v.ensemble_expectation));
  row("ensemble_standard_error", Cell::number(v.ensemble_standard_error));
  row("time_average", Cell::number(v.time_average));
  row("time_average_standard_error", Cell::number(v.time_average_standard_error));
  row("closed_form_max_z", Cell::number(v.closed_form_max_z));
  for (std::size_t k = 0; k < v.window_times.size(); ++k) {
    row("window_mean." + std::to_string(v.window_times[k]), Cell::number(v.window_means[k]));
  }
  row("bankruptcy", Cell::flag(v.bankruptcy));
  if (!v.note.empty()) row("note", Cell::label(v.note));
  m.results.emplace_back("verdict", std::string(to_string(v.verdict)));
  session.emit("diagnose", table);
  return kExitOk;
}

// ---------------------------------------------------------------- lotteries

struct LotteryOptions {
  double wealth = 1.0;
  double price = 0.0;
  int n_max = 10;
  std::string sweep = "nmax";
  std::vector<double> prices;
  std::vector<double> gaps;
  std::vector<std::string> n_max_values;
  std::optional<double> tolerance;
  double inner_base = std::numbers::e;
  double outer_base = std::numbers::e;
};

std::string price_status(ExtendedReal value) {
  if (value.is_indeterminate()) return "indeterminate";
  if (value == ExtendedReal::minus_infinity()) return "ruin";
  return value > ExtendedReal(0.0) ? "accept" : "decline";
}

int cmd_lottery(const LotteryFamily& family, const LotteryOptions& o, const CommonOptions& common,
                Session& session) {
  auto& m = session.manifest();
  m.set_parameter("family", family.name());
  m.set_parameter("wealth", num(o.wealth));
  m.set_parameter("sweep", o.sweep);
  m.set_parameter("nmax", std::to_string(o.n_max));
  if (family.kind == LotteryFamily::Kind::menger) {
    m.set_parameter("inner_base", num(o.inner_base));
    m.set_parameter("outer_base", num(o.outer_base));
  }

  const LotterySpec base = family.build(o.n_max, 0.0);  // validates n_max and the bases
  std::vector<int> n_values = expand_ranges(o.n_max_values);
  if (n_values.empty()) {
    for (int n = 1; n <= o.n_max; ++n) n_values.push_back(n);
  }

  if (o.sweep == "price") {
    const LotterySpec& lottery = base;
    const double bound = o.wealth + lottery.first_payout().amount;
    std::vector<PricePoint> points;
    for (double p : o.prices) points.push_back(PricePoint::at(p));
    for (double g : o.gaps) points.push_back(PricePoint::gap_below_bound(g));
    if (points.empty()) {
      for (int k = 0; k < 10; ++k) points.push_back(PricePoint::at(bound * k / 10.0));
      for (double g : {1e-3, 1e-6, 1e-9, 1e-12, 1e-15, 1e-30, 1e-100, 0.0}) {
        points.push_back(PricePoint::gap_below_bound(g * o.wealth));
      }
      points.push_back(PricePoint::at(1.25 * bound));
    }
    const auto result = price_sweep(lottery, o.wealth, points, common.threads);
    Table table({"price", "gap_to_bound", "laplace_change", "bernoulli_value", "huygens_rate",
                 "untruncated_log_change", "status"});
    for (std::size_t i = 0; i < result.points.size(); ++i) {
      const auto& p = result.points[i];
      table.add_row({Cell::number(p.price), Cell::number(p.gap_to_bound), Cell::number(p.laplace_change),
                     Cell::number(p.bernoulli_value), Cell::number(p.huygens_rate),
                     Cell::number(untruncated_log_change(family, o.wealth, points[i])),
                     Cell::label(price_status(p.laplace_change))});
    }
    session.emit(family.name() + "_price_sweep", table);
  } else if (o.sweep == "nmax") {
    m.set_parameter("price", num(o.price));
    const auto result = nmax_sweep(family, o.wealth, o.price, n_values, common.threads);
    Table table({"nmax", "huygens_rate", "laplace_change", "bernoulli_value"});
    for (const auto& p : result.points) {
      table.add_row({Cell::integer(p.n_max), Cell::number(p.huygens_rate), Cell::number(p.laplace_change),
                     Cell::number(p.bernoulli_value)});
    }
    session.emit(family.name() + "_nmax_sweep", table);
  } else if (o.sweep == "max-price") {
    if (o.tolerance) m.set_parameter("tolerance", num(*o.tolerance));
    Table table({"nmax", "max_acceptable_price", "bound", "gap_to_bound", "status", "iterations"});
    for (int n : n_values) {
      const auto s = max_acceptable_price(family.build(n, 0.0), o.wealth, o.tolerance.value_or(-1.0));
      const bool solved = s.status == PriceSolution::Status::solved;
      table.add_row({Cell::integer(n), Cell::number(s.price), Cell::number(s.bound), Cell::number(s.bound - s.price),
                     Cell::label(solved ? "solved" : "no_positive_price_acceptable"), Cell::integer(s.iterations)});
    }
    session.emit(family.name() + "_max_price", table);
  } else {
    throw ValidationError("unknown sweep '" + o.sweep + "' (expected price, nmax or max-price)");
  }
  return kExitOk;
}

// ---------------------------------------------------------------- figure2

struct Figure2Options {
  std::string spec;
  double wealth = 1.0;
  std::size_t rounds = 1000;
  std::size_t ensemble = 10'000;
  std::optional<std::uint64_t> seed;
};

int cmd_figure2(const Figure2Options& o, const CommonOptions& common, Session& session) {
  const std::uint64_t seed = resolve_seed(o.seed);
  auto& m = session.manifest();
  m.seed = std::to_string(seed);
  m.set_parameter("spec", o.spec.empty() ? "coin" : o.spec);
  m.set_parameter("wealth", num(o.wealth));
  m.set_parameter("rounds", std::to_string(o.rounds));
  m.set_parameter("ensemble", std::to_string(o.ensemble));

  const Gamble gamble = load_gamble(o.spec);
  const double dt = gamble.round_duration();
  const double huygens = huygens_rate(gamble);
  const double laplace = laplace_rate(gamble, o.wealth);
  const auto outcomes = draw_outcomes(gamble, o.rounds, seed);

  EnsembleOptions options;
  options.threads = common.threads;
  for (std::size_t t = 0; t <= o.rounds; ++t) options.sample_times.push_back(t);

  for (const DynamicKind dynamic : {DynamicKind::additive, DynamicKind::multiplicative}) {
    const auto typical = replay_trajectory(gamble, dynamic, o.wealth, outcomes);
    const auto ensemble = simulate_ensemble(gamble, dynamic, o.wealth, o.rounds, o.ensemble, seed, options);
    Table table({"t", "typical_W", "ensemble_mean_W", "huygens_line", "laplace_line"});
    for (std::size_t t = 0; t <= o.rounds; ++t) {
      const double time = static_cast<double>(t) * dt;
      table.add_row({Cell::integer(static_cast<std::int64_t>(t)), Cell::number(typical.wealth_path[t]),
                     Cell::number(ensemble.ensemble_mean_wealth[t]), Cell::number(o.wealth + time * huygens),
                     Cell::number(o.wealth * std::exp(time * laplace))});
    }
    session.emit("figure2_" + std::string(to_string(dynamic)), table);
  }
  return kExitOk;
}

// ---------------------------------------------------------------- replay

int cmd_replay(const std::string& manifest_path, const std::string& work_dir, std::ostream& out,
               std::ostream& err) {
  std::ifstream in(manifest_path, std::ios::binary);
  if (!in) throw ValidationError("cannot open manifest '" + manifest_path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const auto manifest = io::RunManifest::parse(buffer.str());
  if (manifest.arguments.empty()) throw ValidationError("manifest records no arguments");

  std::vector<std::string> args = manifest.arguments;
  bool to_stdout = true;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--out" && i + 1 < args.size()) {
      args[i + 1] = work_dir;
      to_stdout = false;
    } else if (args[i].starts_with("--out=")) {
      args[i] = "--out=" + work_dir;
      to_stdout = false;
    }
  }

  std::ostringstream captured;
  std::ostringstream captured_err;
  const int code = run(args, captured, captured_err);
  if (code != kExitOk) {
    err << captured_err.str();
    return code;
  }

  bool all_match = true;
  for (const auto& [name, expected] : manifest.outputs) {
    std::string contents;
    if (to_stdout) {
      contents = captured.str();
    } else {
      std::ifstream file(fs::path(work_dir) / name, std::ios::binary);
      std::ostringstream text;
      text << file.rdbuf();
      contents = text.str();
    }
    const std::string actual = "fnv1a64:" + io::fnv1a64_hex(contents);
    const bool match = actual == expected;
    all_match = all_match && match;
    out << name << ' ' << (match ? "match" : "MISMATCH") << ' ' << actual << '\n';
  }
  return all_match ? kExitOk : kExitFailure;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Gambles under additive and multiplicative repetition", "gambles"};
  app.require_subcommand(1);
  CommonOptions common;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--format", common.format, "Output format: csv, jsonl or table")
        ->check(CLI::IsMember({"csv", "jsonl", "table"}));
    sub->add_option("--out", common.out_dir, "Directory for output files and manifest.txt");
    sub->add_option("--threads", common.threads, "Worker threads, 0 for hardware concurrency");
  };
  const auto add_seed = [](CLI::App* sub, std::optional<std::uint64_t>& seed) {
    sub->add_option("--seed", seed, "Master seed (falls back to GAMBLES_SEED, then 1)");
  };

  EvaluateOptions eval;
  auto* evaluate = app.add_subcommand("evaluate", "Evaluate all decision criteria for a gamble or lottery");
  evaluate->add_option("--spec", eval.spec, "Gamble spec file")->required();
  evaluate->add_option("--wealth", eval.wealth, "Current wealth W");
  evaluate->add_option("--price", eval.price, "Ticket price override for lottery specs");
  evaluate->add_option("--nmax", eval.n_max, "n_max override for lottery specs");
  evaluate->add_option("--utility", eval.utility, "Utility for expected utility: none, linear, log or sqrt");
  add_common(evaluate);

  SimulateOptions sim;
  auto* simulate = app.add_subcommand("simulate", "Simulate a trajectory or an ensemble");
  simulate->add_option("--spec", sim.spec, "Gamble spec file (default: the fair coin, factors 0.6 and 1.5)");
  simulate->add_option("--wealth", sim.wealth, "Initial wealth");
  simulate->add_option("--dynamic", sim.dynamic, "additive or multiplicative");
  simulate->add_option("--rounds", sim.rounds, "Rounds T");
  simulate->add_option("--ensemble", sim.ensemble, "Realizations N; 1 prints the trajectory itself");
  simulate->add_option("--times", sim.times, "Ensemble sample times (default 0, 1, 2, 4, ..., T)")->delimiter(',');
  add_seed(simulate, sim.seed);
  add_common(simulate);

  DiagnoseOptions diag;
  auto* diagnose_cmd = app.add_subcommand("diagnose", "Empirical ergodicity test of an observable");
  diagnose_cmd->add_option("--spec", diag.spec, "Gamble spec file (default: the fair coin)");
  diagnose_cmd->add_option("--wealth", diag.wealth, "Initial wealth");
  diagnose_cmd->add_option("--dynamic", diag.dynamic, "additive or multiplicative");
  diagnose_cmd->add_option("--observable", diag.observable, "wealth, delta-w or delta-log-w");
  diagnose_cmd->add_option("--rounds", diag.rounds, "Length T of the long trajectory");
  diagnose_cmd->add_option("--ensemble", diag.ensemble, "Ensemble size N");
  diagnose_cmd->add_option("--threshold", diag.threshold, "Family-wise significance level");
  diagnose_cmd->add_option("--windows", diag.windows, "Ensemble snapshots at t = 1, 2, 4, ...");
  add_seed(diagnose_cmd, diag.seed);
  add_common(diagnose_cmd);

  LotteryOptions lot;
  const auto add_lottery = [&](CLI::App* sub) {
    sub->add_option("--wealth", lot.wealth, "Wealth W");
    sub->add_option("--price", lot.price, "Ticket price for the nmax sweep");
    sub->add_option("--nmax", lot.n_max, "Truncation n_max");
    sub->add_option("--sweep", lot.sweep, "price, nmax or max-price")
        ->check(CLI::IsMember({"price", "nmax", "max-price"}));
    sub->add_option("--prices", lot.prices, "Absolute prices for the price sweep")->delimiter(',');
    sub->add_option("--gaps", lot.gaps, "Prices given as distance below W + D(1)")->delimiter(',');
    sub->add_option("--nmax-values", lot.n_max_values, "n_max list, ranges as a:b or a:b:step")->delimiter(',');
    sub->add_option("--tolerance", lot.tolerance, "Bisection tolerance for max-price (default 1e-9 W)");
    add_common(sub);
  };
  auto* stpetersburg = app.add_subcommand("stpetersburg", "St Petersburg lottery sweeps");
  add_lottery(stpetersburg);
  auto* menger = app.add_subcommand("menger", "Menger super-exponential lottery sweeps");
  add_lottery(menger);
  menger->add_option("--inner-base", lot.inner_base, "Payout D(n) = outer^(inner^n)");
  menger->add_option("--outer-base", lot.outer_base, "Payout D(n) = outer^(inner^n)");

  Figure2Options fig;
  auto* figure2 = app.add_subcommand("figure2", "Typical and ensemble-mean wealth under both dynamics");
  figure2->add_option("--spec", fig.spec, "Gamble spec file (default: the fair coin)");
  figure2->add_option("--wealth", fig.wealth, "Initial wealth");
  figure2->add_option("--rounds", fig.rounds, "Horizon T");
  figure2->add_option("--ensemble", fig.ensemble, "Ensemble size N");
  add_seed(figure2, fig.seed);
  add_common(figure2);

  std::string manifest_path;
  std::string replay_dir;
  auto* replay = app.add_subcommand("replay", "Re-run a manifest and compare output checksums");
  replay->add_option("manifest", manifest_path, "manifest.txt of an earlier run")->required();
  replay->add_option("--work-dir", replay_dir, "Scratch directory for regenerated outputs");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (replay->parsed()) {
      if (replay_dir.empty()) {
        replay_dir = (fs::temp_directory_path() / ("gambles-replay-" + io::fnv1a64_hex(manifest_path))).string();
      }
      return cmd_replay(manifest_path, replay_dir, out, err);
    }

    CLI::App* chosen = app.get_subcommands().front();
    if (chosen == figure2 && common.out_dir.empty()) common.out_dir = ".";
    Session session(chosen->get_name(), common, out);
    session.manifest().arguments = args;
    session.manifest().set_parameter("format", common.format);
    session.manifest().set_parameter("threads", std::to_string(common.threads));

    int code = kExitOk;
    if (chosen == evaluate) {
      code = cmd_evaluate(eval, session);
    } else if (chosen == simulate) {
      code = cmd_simulate(sim, common, session);
    } else if (chosen == diagnose_cmd) {
      code = cmd_diagnose(diag, common, session);
    } else if (chosen == stpetersburg) {
      code = cmd_lottery(LotteryFamily{}, lot, common, session);
    } else if (chosen == menger) {
      code = cmd_lottery(LotteryFamily{LotteryFamily::Kind::menger, lot.inner_base, lot.outer_base}, lot, common,
                         session);
    } else if (chosen == figure2) {
      code = cmd_figure2(fig, common, session);
    }

    // Pin a seed taken from the environment or the default so replay is exact.
    const auto& m = session.manifest();
    if (!m.seed.empty()) {
      bool explicit_seed = false;
      for (const auto& a : args) explicit_seed = explicit_seed || a == "--seed" || a.starts_with("--seed=");
      if (!explicit_seed) {
        session.manifest().arguments.push_back("--seed");
        session.manifest().arguments.push_back(m.seed);
      }
    }
    session.finish(err);
    return code;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const NumericDomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumericDomain;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace gambles::cli
