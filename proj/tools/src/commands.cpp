#include "qcbnorm_cli/commands.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "qcbnorm/cb_quasinorm.hpp"
#include "qcbnorm/channel_information.hpp"
#include "qcbnorm/linalg.hpp"
#include "qcbnorm/parallel.hpp"
#include "qcbnorm/states.hpp"

namespace qcbnorm::cli {

using nlohmann::json;

namespace {

std::string fmt(double v) { return json(v).dump(); }

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

// Seed of one case: depends on the run seed and the case key only.
std::uint64_t case_seed(std::uint64_t seed, const std::string& key) {
  const std::uint64_t h = fnv1a(key);
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(h >> 32)};
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

OptimizerConfig optimizer_config(const RunConfig& cfg, const std::string& key) {
  OptimizerConfig o;
  o.restarts = cfg.restarts;
  o.seed = case_seed(cfg.seed, key);
  return o;
}

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

json outcome_json(const OptimizationOutcome& o) {
  return {{"restart_spread", o.restart_spread()}, {"converged", o.converged}, {"evaluations", o.evals_used}};
}

struct Task {
  Record base;  // key, check, channels, alpha
  std::function<std::vector<Record>(const Record& base)> run;
};

std::string now_utc() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

Report run_tasks(const std::string& command, const RunConfig& cfg, std::vector<Task>& tasks) {
  std::vector<std::vector<Record>> results(tasks.size());
  parallel_for(tasks.size(), [&](std::size_t i) {
    const auto start = std::chrono::steady_clock::now();
    try {
      results[i] = tasks[i].run(tasks[i].base);
    } catch (const std::exception& e) {
      Record r = tasks[i].base;
      r.error = e.what();
      results[i] = {r};
    }
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    for (auto& r : results[i]) r.wall_time_s = elapsed;
  });

  Report report;
  report.command = command;
  report.timing = cfg.timing;
  if (cfg.timing) report.generated_at = now_utc();
  json channels = json::array();
  for (const auto& c : cfg.channels) channels.push_back(c.label);
  report.config = {{"seed", cfg.seed},
                   {"restarts", cfg.restarts},
                   {"alphas", cfg.alphas},
                   {"dimension_cap", cfg.dimension_cap},
                   {"channels", channels},
                   {"tolerances",
                    {{"gap", cfg.tol.gap}, {"dispersion", cfg.tol.dispersion}, {"center", cfg.tol.center}, {"cmi", cfg.tol.cmi}, {"probe", cfg.tol.probe}}}};
  if (command == "verify") {
    report.config["trials"] = cfg.trials;
    report.config["dims"] = cfg.dims;
    report.config["probes"] = cfg.probes;
    report.config["zoo_pairs"] = cfg.zoo_pairs;
  }
  for (auto& batch : results) {
    for (auto& r : batch) report.records.push_back(std::move(r));
  }
  report.sort_records();
  return report;
}

Record make_base(std::string key, std::string check, std::vector<std::string> channels,
                 std::optional<double> alpha = {}) {
  Record r;
  r.key = std::move(key);
  r.check = std::move(check);
  r.channels = std::move(channels);
  r.alpha = alpha;
  return r;
}

void require_cap(const CPMap& map, std::size_t cap) {
  if (map.in_dim() > cap) {
    throw DimensionCapExceeded("input dimension " + std::to_string(map.in_dim()) + " exceeds cap " +
                               std::to_string(cap));
  }
}

// ---- compute ----

std::vector<Record> compute_alpha(const RunConfig& cfg, const CPMap& map, double a, Record r) {
  require_cap(map, cfg.dimension_cap);
  const OptimizerConfig o = optimizer_config(cfg, r.key);
  const RenyiOrder alpha(a);
  if (!alpha.is_quasi()) {
    r.values["cb_norm"] = cb_norm_geq1(map, a, o);
    return {r};
  }
  const CbNormResult cb = cb_quasinorm_primal(map, alpha, o);
  const double pure = cb_quasinorm_pure_ratio(map, alpha, o);
  r.values["cb_primal"] = cb.value;
  r.values["cb_dual"] = cb.dual_value;
  r.values["cb_pure_ratio"] = pure;
  r.gaps["cb_primal_dual"] = {std::log2(cb.value) - std::log2(cb.dual_value), cfg.tol.gap};
  r.gaps["cb_primal_pure_ratio"] = {std::log2(cb.value) - std::log2(pure), cfg.tol.gap};
  r.diagnostics["cb_primal"] = outcome_json(cb.outcome);
  if (map.trace_preserving()) {
    const auto primal = renyi_channel_information_primal(map, alpha, o);
    const auto dual = renyi_channel_information_dual(map, alpha, o);
    r.values["renyi_information_primal"] = primal.value;
    r.values["renyi_information_dual"] = dual.value;
    r.gaps["renyi_crossing"] = {primal.value - dual.value, cfg.tol.gap};
    r.diagnostics["renyi_information_primal"] = outcome_json(primal.outcome);
    r.diagnostics["renyi_information_dual"] = outcome_json(dual.outcome);
  } else {
    r.diagnostics["note"] = "map is not trace preserving; channel information skipped";
  }
  return {r};
}

std::vector<Record> compute_information(const RunConfig& cfg, const CPMap& map, Record r) {
  require_cap(map, cfg.dimension_cap);
  if (!map.trace_preserving()) {
    r.diagnostics["note"] = "map is not trace preserving; channel information skipped";
    return {r};
  }
  OptimizerConfig o = optimizer_config(cfg, r.key);
  o.restarts = std::max(o.restarts, kDispersionRestarts);
  const DispersionResult d = channel_dispersion(map, o);
  r.values["mutual_information"] = d.information.value;
  r.values["v_max"] = d.v_max;
  r.values["v_min"] = d.v_min;
  r.values["optimizer_count"] = static_cast<double>(d.information.optimizer_inputs.size());
  r.gaps["center"] = {divergence_center_check(map, d.information), cfg.tol.center};
  r.diagnostics["center"] = matrix_json(d.information.center.matrix());
  r.diagnostics["mutual_information"] = outcome_json(d.information.outcome);
  r.diagnostics["witnesses"] = d.witnesses.size();
  return {r};
}

// ---- verify ----

struct Pair {
  std::string label;
  ChannelSpec first;
  ChannelSpec second;
};

std::vector<Record> verify_dispersion(const RunConfig& cfg, const Pair& p, const Record& base) {
  const OptimizerConfig o = optimizer_config(cfg, base.key);
  const DispersionGap d = dispersion_additivity_gap(p.first.map, p.second.map, o, cfg.dimension_cap);
  const std::vector<std::string> channels = base.channels;

  Record disp = base;
  disp.values = {{"v_max_joint", d.joint.v_max},   {"v_max_first", d.first.v_max},
                 {"v_max_second", d.second.v_max}, {"v_min_joint", d.joint.v_min},
                 {"v_min_first", d.first.v_min},   {"v_min_second", d.second.v_min}};
  disp.gaps["dispersion_max"] = {d.gap_max, cfg.tol.dispersion};
  disp.gaps["dispersion_min"] = {d.gap_min, cfg.tol.dispersion};
  disp.diagnostics["witnesses"] = {{"joint", d.joint.witnesses.size()},
                                   {"first", d.first.witnesses.size()},
                                   {"second", d.second.witnesses.size()}};

  Record mi = make_base("mutual_information/" + p.label, "mutual_information_additivity", channels);
  const double joint = d.joint.information.value;
  mi.values = {{"joint", joint}, {"first", d.first.information.value}, {"second", d.second.information.value}};
  mi.gaps["additivity"] = {joint - d.first.information.value - d.second.information.value, cfg.tol.gap};
  mi.diagnostics["joint"] = outcome_json(d.joint.information.outcome);

  Record center = make_base("center/" + p.label, "center", channels);
  const CPMap joint_map = tensor_map(p.first.map, p.second.map);
  center.gaps["first"] = {divergence_center_check(p.first.map, d.first.information), cfg.tol.center};
  center.gaps["second"] = {divergence_center_check(p.second.map, d.second.information), cfg.tol.center};
  center.gaps["joint"] = {divergence_center_check(joint_map, d.joint.information), cfg.tol.center};
  center.diagnostics["optimizer_count"] = {{"joint", d.joint.information.optimizer_inputs.size()},
                                           {"first", d.first.information.optimizer_inputs.size()},
                                           {"second", d.second.information.optimizer_inputs.size()}};

  Record structure = make_base("structure/" + p.label, "structure_cmi", channels);
  const StructureCheck s = structure_cmi_check(p.first.map, p.second.map, d.joint.information.outcome.argument, o,
                                               joint);
  structure.values = {{"input_value", s.input_value}, {"optimal_value", s.optimal_value}};
  structure.gaps["cmi_1"] = {s.cmi_1, cfg.tol.cmi};
  structure.gaps["cmi_2"] = {s.cmi_2, cfg.tol.cmi};
  if (s.warning) structure.diagnostics["warning"] = *s.warning;
  return {disp, mi, center, structure};
}

Record verify_carlen_lieb(const RunConfig& cfg, double p, double q, Record r) {
  std::seed_seq seq{static_cast<std::uint32_t>(case_seed(cfg.seed, r.key))};
  Rng rng(seq);
  std::uniform_real_distribution<double> scale(0.5, 2.0);
  const std::size_t d = cfg.dims[0];
  double worst = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < cfg.probes; ++i) {
    const HermitianOperator x1 = random_density(d, d, rng).op() * scale(rng);
    const HermitianOperator x2 = random_density(d, d, rng).op() * scale(rng);
    const Matrix y = random_gaussian(d, d, rng);
    const double mid = carlen_lieb_upsilon((x1 + x2) * 0.5, y, p, q);
    const double avg = 0.5 * (carlen_lieb_upsilon(x1, y, p, q) + carlen_lieb_upsilon(x2, y, p, q));
    worst = std::max(worst, mid - avg);
  }
  r.values["samples"] = cfg.probes;
  r.values["p"] = p;
  r.values["q"] = q;
  r.gaps["convexity_violation"] = {worst, cfg.tol.probe, Gap::Bound::kUpper};
  return r;
}

std::string pair_label(const ChannelSpec& a, const ChannelSpec& b) { return a.label + " x " + b.label; }

}  // namespace

void RunConfig::validate() const {
  if (restarts < 1) throw ConfigError("--restarts must be at least 1");
  if (trials < 0) throw ConfigError("--trials must be nonnegative");
  if (probes < 1) throw ConfigError("--probes must be at least 1");
  if (alphas.empty()) throw ConfigError("--alpha needs at least one value");
  for (double a : alphas) {
    if (!std::isfinite(a) || a < 0.5 || a == 1.0) {
      throw ConfigError("alpha " + fmt(a) + " outside [1/2, 1) and (1, inf)");
    }
    if (command == Command::kVerify && a > 1.0) {
      throw ConfigError("verify covers the quasi-norm regime only; alpha " + fmt(a) + " is above 1");
    }
  }
  for (std::size_t d : dims) {
    if (d < 1) throw ConfigError("--dims entries must be positive");
  }
  if (command == Command::kCompute && channels.empty()) throw ConfigError("compute needs --channel or --zoo");
  const Tolerances& t = tol;
  if (!(t.gap > 0.0) || !(t.dispersion > 0.0) || !(t.center > 0.0) || !(t.cmi > 0.0) || !(t.probe > 0.0)) {
    throw ConfigError("tolerances must be positive");
  }
}

std::vector<ChannelSpec> verify_zoo() {
  return {zoo_channel("identity", {}), zoo_channel("depolarizing", {{"p", 0.3}}),
          zoo_channel("amplitude_damping", {{"gamma", 0.5}}), zoo_channel("dephasing", {{"p", 0.5}})};
}

Report cmd_compute(const RunConfig& cfg) {
  cfg.validate();
  std::vector<Task> tasks;
  for (const auto& spec : cfg.channels) {
    for (double a : cfg.alphas) {
      Record base = make_base("compute/" + spec.label + "/alpha=" + fmt(a), "compute_alpha", {spec.label}, a);
      tasks.push_back({base, [&cfg, &spec, a](const Record& r) { return compute_alpha(cfg, spec.map, a, r); }});
    }
    Record base = make_base("compute/" + spec.label + "/information", "compute_information", {spec.label});
    tasks.push_back({base, [&cfg, &spec](const Record& r) { return compute_information(cfg, spec.map, r); }});
  }
  return run_tasks("compute", cfg, tasks);
}

Report cmd_verify(const RunConfig& cfg) {
  cfg.validate();
  std::vector<Pair> pairs;
  Rng rng(cfg.seed);
  for (int t = 0; t < cfg.trials; ++t) {
    std::ostringstream id;
    id << "random-" << std::setw(2) << std::setfill('0') << t;
    ChannelSpec a{id.str() + "a", random_channel(cfg.dims[0], cfg.dims[1], cfg.dims[2], rng)};
    ChannelSpec b{id.str() + "b", random_channel(cfg.dims[0], cfg.dims[1], cfg.dims[2], rng)};
    pairs.push_back({id.str(), std::move(a), std::move(b)});
  }
  const auto add_all_pairs = [&](const std::vector<ChannelSpec>& set) {
    for (std::size_t i = 0; i < set.size(); ++i) {
      for (std::size_t j = i + 1; j < set.size(); ++j) pairs.push_back({pair_label(set[i], set[j]), set[i], set[j]});
    }
  };
  if (cfg.zoo_pairs) add_all_pairs(verify_zoo());
  add_all_pairs(cfg.channels);

  std::vector<Task> tasks;
  for (const auto& p : pairs) {
    const std::vector<std::string> channels{p.first.label, p.second.label};
    for (double a : cfg.alphas) {
      Record m = make_base("multiplicativity/" + p.label + "/alpha=" + fmt(a), "multiplicativity", channels, a);
      tasks.push_back({m, [&cfg, &p, a](const Record& base) {
                         Record r = base;
                         const auto g = multiplicativity_gap(p.first.map, p.second.map, RenyiOrder(a),
                                                             optimizer_config(cfg, r.key), cfg.dimension_cap);
                         r.values = {{"joint", g.joint}, {"first", g.first}, {"second", g.second}};
                         r.gaps["multiplicativity"] = {g.gap, cfg.tol.gap};
                         return std::vector<Record>{r};
                       }});
      Record ra = make_base("renyi_additivity/" + p.label + "/alpha=" + fmt(a), "renyi_additivity", channels, a);
      tasks.push_back({ra, [&cfg, &p, a](const Record& base) {
                         Record r = base;
                         const auto g = renyi_additivity_gap(p.first.map, p.second.map, RenyiOrder(a),
                                                             optimizer_config(cfg, r.key), cfg.dimension_cap);
                         r.values = {{"joint", g.joint}, {"first", g.first}, {"second", g.second}};
                         r.gaps["additivity"] = {g.gap, cfg.tol.gap};
                         return std::vector<Record>{r};
                       }});
    }
    Record d = make_base("dispersion/" + p.label, "dispersion_additivity", channels);
    tasks.push_back({d, [&cfg, &p](const Record& base) { return verify_dispersion(cfg, p, base); }});
  }
  for (double p : {1.0, 1.5, 2.0}) {
    for (double q : {1.0, 2.0}) {
      Record r = make_base("carlen_lieb/p=" + fmt(p) + ",q=" + fmt(q), "carlen_lieb", {});
      tasks.push_back({r, [&cfg, p, q](const Record& base) {
                         return std::vector<Record>{verify_carlen_lieb(cfg, p, q, base)};
                       }});
    }
  }
  return run_tasks("verify", cfg, tasks);
}

std::optional<RunConfig> parse_command_line(int argc, const char* const* argv, std::ostream& out) {
  CLI::App app{"Completely bounded quasi-norms, channel Renyi information and dispersions"};
  app.require_subcommand(1);
  CLI::App* compute = app.add_subcommand("compute", "Evaluate quantities for the given channels");
  CLI::App* verify = app.add_subcommand("verify", "Certify multiplicativity and additivity on sampled channels");

  RunConfig cfg;
  std::vector<std::string> files;
  std::vector<std::string> zoo;
  std::vector<std::string> params;
  std::vector<std::size_t> dims;
  std::string format = "json";
  std::string out_path;
  bool no_timing = false;
  bool no_zoo = false;
  std::optional<double> tol_all;

  for (CLI::App* sub : {compute, verify}) {
    sub->add_option("--channel", files, "Channel JSON file (repeatable)");
    sub->add_option("--zoo", zoo, "Zoo channel NAME or NAME:k=v,... (repeatable)");
    sub->add_option("--params", params, "Zoo parameters K=V applied to every --zoo channel");
    sub->add_option("--alpha", cfg.alphas, "Comma-separated Renyi orders")->delimiter(',');
    sub->add_option("--seed", cfg.seed, "Random seed");
    sub->add_option("--restarts", cfg.restarts, "Optimizer restarts");
    sub->add_option("--trials", cfg.trials, "Random channel pairs (verify)");
    sub->add_option("--dims", dims, "Random channel dimensions dA,dB,dE")->delimiter(',');
    sub->add_option("--cap", cfg.dimension_cap, "Largest accepted (product) input dimension");
    sub->add_option("--probes", cfg.probes, "Carlen-Lieb samples per (p,q) (verify)");
    sub->add_option("--out", out_path, "Report path (default: standard output)");
    sub->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_flag("--no-timing", no_timing, "Omit timestamps and wall times");
    sub->add_flag("--no-zoo", no_zoo, "Skip the built-in zoo pairs (verify)");
    sub->add_option("--tolerance", tol_all, "Override every tolerance");
    sub->add_option("--tol-gap", cfg.tol.gap, "Gap tolerance in bits");
    sub->add_option("--tol-dispersion", cfg.tol.dispersion, "Dispersion additivity tolerance");
    sub->add_option("--tol-center", cfg.tol.center, "Center check tolerance (trace distance)");
    sub->add_option("--tol-cmi", cfg.tol.cmi, "CMI tolerance in bits");
    sub->add_option("--tol-probe", cfg.tol.probe, "Carlen-Lieb violation tolerance");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw ConfigError(e.what());
  }

  cfg.command = verify->parsed() ? Command::kVerify : Command::kCompute;
  if (!dims.empty()) {
    if (dims.size() != 3) throw ConfigError("--dims expects dA,dB,dE");
    cfg.dims = {dims[0], dims[1], dims[2]};
  }
  cfg.format = format == "csv" ? Format::kCsv : Format::kJson;
  cfg.timing = !no_timing;
  cfg.zoo_pairs = !no_zoo;
  if (!out_path.empty()) cfg.out = out_path;
  if (tol_all) cfg.tol = {*tol_all, *tol_all, *tol_all, *tol_all, *tol_all};

  ZooParams defaults;
  for (const auto& p : params) {
    const auto [k, v] = parse_assignment(p);
    defaults[k] = v;
  }
  if (!params.empty() && zoo.empty()) throw ConfigError("--params needs --zoo");
  for (const auto& f : files) cfg.channels.push_back(load_channel_file(f));
  for (const auto& z : zoo) cfg.channels.push_back(parse_zoo_descriptor(z, defaults));
  cfg.validate();
  return cfg;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::optional<RunConfig> cfg;
  try {
    cfg = parse_command_line(argc, argv, out);
  } catch (const std::exception& e) {
    err << "qcbnorm: " << e.what() << "\n";
    return kExitInputError;
  }
  if (!cfg) return kExitPass;

  Report report;
  try {
    report = cfg->command == Command::kVerify ? cmd_verify(*cfg) : cmd_compute(*cfg);
  } catch (const std::exception& e) {
    err << "qcbnorm: " << e.what() << "\n";
    return kExitInputError;
  }
  const std::string text = cfg->format == Format::kCsv ? report.to_csv() : report.to_json_text();

  if (cfg->out) {
    const std::filesystem::path target(*cfg->out);
    std::filesystem::path tmp = target;
    tmp += ".partial";
    {
      std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
      f << text;
      f.close();
      if (!f) {
        std::error_code ec;
        std::filesystem::remove(tmp, ec);
        err << "qcbnorm: cannot write " << *cfg->out << "\n";
        return kExitInputError;
      }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, target, ec);
    if (ec) {
      std::filesystem::remove(tmp, ec);
      err << "qcbnorm: cannot write " << *cfg->out << "\n";
      return kExitInputError;
    }
  } else {
    out << text;
  }

  const Summary s = report.summary();
  err << "qcbnorm " << report.command << ": " << s.records << " records, " << s.passed << " passed, " << s.failed
      << " failed\n";
  return report.all_pass() ? kExitPass : kExitFailure;
}

}  // namespace qcbnorm::cli
