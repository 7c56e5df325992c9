// bench: synthetic-system kernel benchmark and verification harness.
//
//   bench run    --config cfg.json [overrides]   time + verify, report boosts
//   bench verify --config cfg.json [overrides]   verification only
//   bench gen    --config cfg.json --out sys.json  dump the generated system
//
// Exit codes: 0 ok, 1 usage or precondition error, 2 verification failure.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "mdvec/bench.hpp"

namespace {

struct CliOverrides {
  std::string config_path;
  std::string kernels;
  std::string format = "human";
  std::string out_path;
  std::string paths;
  std::uint64_t n = 0;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::uint64_t repeats = 0;
  std::uint64_t warmup = 0;
  bool warmup_set = false;
  std::uint64_t lanes = 0;
  std::uint64_t shards = 0;
};

void add_common(CLI::App* cmd, CliOverrides& o) {
  cmd->add_option("--config", o.config_path, "JSON config file");
  cmd->add_option("--kernels", o.kernels, "comma-separated kernel subset");
  cmd->add_option("--n", o.n, "number of sites");
  cmd->add_option("--seed", o.seed, "RNG seed")->each([&](const std::string&) {
    o.seed_set = true;
  });
  cmd->add_option("--repeats", o.repeats, "timed repetitions per kernel");
  cmd->add_option("--warmup", o.warmup, "warmup runs per kernel")
      ->each([&](const std::string&) { o.warmup_set = true; });
  cmd->add_option("--format", o.format, "json|csv|human");
  cmd->add_option("--out", o.out_path, "write output to this path");
  cmd->add_option("--lanes", o.lanes, "real lane width override");
  cmd->add_option("--shards", o.shards, "concurrent independent systems");
  cmd->add_option("--paths", o.paths, "both|scalar|vec");
}

mdvec::BenchConfig build_config(const CliOverrides& o) {
  mdvec::BenchConfig cfg;
  if (!o.config_path.empty()) {
    std::ifstream in(o.config_path);
    if (!in) throw mdvec::ContractViolation("cannot open config file " + o.config_path);
    std::ostringstream ss;
    ss << in.rdbuf();
    cfg = mdvec::load_config_json(ss.str());
  }
  if (!o.kernels.empty()) {
    cfg.kernels.clear();
    std::stringstream ss(o.kernels);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (!item.empty()) cfg.kernels.push_back(item);
    }
  }
  if (o.n > 0) cfg.n_sites = o.n;
  if (o.seed_set) cfg.seed = o.seed;
  if (o.repeats > 0) cfg.repeats = o.repeats;
  if (o.warmup_set) cfg.warmup = o.warmup;
  if (o.lanes > 0) {
    cfg.lanes.real_lane = o.lanes;
    cfg.lanes.int_lane = 2 * o.lanes;
  }
  if (o.shards > 0) cfg.shards = o.shards;
  if (!o.paths.empty()) {
    if (o.paths == "both") cfg.paths = mdvec::BenchPaths::kBoth;
    else if (o.paths == "scalar") cfg.paths = mdvec::BenchPaths::kScalarOnly;
    else if (o.paths == "vec") cfg.paths = mdvec::BenchPaths::kVectorOnly;
    else throw mdvec::ContractViolation("unknown --paths value " + o.paths);
  }
  return cfg;
}

mdvec::ReportFormat parse_format(const std::string& f) {
  if (f == "json") return mdvec::ReportFormat::kJson;
  if (f == "csv") return mdvec::ReportFormat::kCsv;
  if (f == "human") return mdvec::ReportFormat::kHuman;
  throw mdvec::ContractViolation("unknown format " + f);
}

void write_out(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(out_path);
    if (!out) throw mdvec::ContractViolation("cannot write " + out_path);
    out << text;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"molecular-dynamics kernel vectorization benchmark"};
  app.require_subcommand(1);

  CliOverrides run_o, verify_o, gen_o;
  CLI::App* run_cmd = app.add_subcommand("run", "time scalar vs vectorized paths");
  add_common(run_cmd, run_o);
  CLI::App* verify_cmd = app.add_subcommand("verify", "verification only");
  add_common(verify_cmd, verify_o);
  CLI::App* gen_cmd = app.add_subcommand("gen", "dump the generated system as JSON");
  add_common(gen_cmd, gen_o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (run_cmd->parsed()) {
      mdvec::BenchConfig cfg = build_config(run_o);
      mdvec::BenchReport report = mdvec::run_bench(cfg);
      write_out(mdvec::emit_report(report, parse_format(run_o.format)),
                run_o.out_path);
      return report.any_failed() ? 2 : 0;
    }
    if (verify_cmd->parsed()) {
      mdvec::BenchConfig cfg = build_config(verify_o);
      mdvec::BenchReport report = mdvec::run_verify(cfg);
      write_out(mdvec::emit_report(report, parse_format(verify_o.format)),
                verify_o.out_path);
      return report.any_failed() ? 2 : 0;
    }
    if (gen_cmd->parsed()) {
      mdvec::BenchConfig cfg = build_config(gen_o);
      write_out(mdvec::dump_system_json(cfg), gen_o.out_path);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
