#include "mdvec/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace mdvec {

namespace {

using nlohmann::json;

double cutoff_for(const std::string& kernel, const KernelParamsConfig& p) {
  if (kernel == "lj") return p.lj_cutoff;
  if (kernel == "ewald_real") return p.ewald_cutoff;
  if (kernel == "halgren") return p.halgren_cutoff;
  if (kernel == "tmatxb" || kernel == "perm_field") return p.polar_cutoff;
  if (kernel == "image") return 0.0;
  if (kernel == "neighbor_build") return p.lj_cutoff;
  throw ContractViolation("unknown kernel: " + kernel);
}

constexpr double kEnergyTol = 1e-10;
constexpr double kForceTol = 1e-9;

double rel_energy_delta(double a, double b) {
  return std::abs(a - b) / std::max(std::abs(a), 1e-30);
}

double rel_comp_delta(const std::vector<double>& a, const std::vector<double>& b) {
  double scale = 1e-30;
  for (double v : a) scale = std::max(scale, std::abs(v));
  double d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d / scale;
}

std::vector<double> time_runs(const std::function<void()>& f, std::size_t repeats,
                              std::size_t warmup) {
  for (std::size_t i = 0; i < warmup; ++i) f();
  std::vector<double> t;
  t.reserve(repeats);
  for (std::size_t i = 0; i < repeats; ++i) {
    auto t0 = std::chrono::steady_clock::now();
    f();
    auto t1 = std::chrono::steady_clock::now();
    t.push_back(std::chrono::duration<double>(t1 - t0).count());
  }
  return t;
}

std::vector<double> force_comps(const ForceAccumulator& acc) {
  std::vector<double> c;
  c.reserve(3 * acc.fx.logical_len());
  c.insert(c.end(), acc.fx.data(), acc.fx.data() + acc.fx.logical_len());
  c.insert(c.end(), acc.fy.data(), acc.fy.data() + acc.fy.logical_len());
  c.insert(c.end(), acc.fz.data(), acc.fz.data() + acc.fz.logical_len());
  return c;
}

std::vector<double> field_comps(const FieldArrays& f) {
  std::vector<double> c;
  c.reserve(3 * f.ex.logical_len());
  c.insert(c.end(), f.ex.data(), f.ex.data() + f.ex.logical_len());
  c.insert(c.end(), f.ey.data(), f.ey.data() + f.ey.logical_len());
  c.insert(c.end(), f.ez.data(), f.ez.data() + f.ez.logical_len());
  return c;
}

struct RunContext {
  const BenchConfig& cfg;
  ParticleSystem sys;
  PairWorkspace ws;
  std::map<double, CellGrid> grids;
  std::map<double, NeighborTable> tables;

  explicit RunContext(const BenchConfig& c) : cfg(c), sys(mdvec::generate_system(c)) {}

  const NeighborTable& table_for(double cutoff) {
    const double lc = cutoff + cfg.params.list_skin;
    auto it = tables.find(lc);
    if (it == tables.end()) {
      auto g = build_cell_grid(sys, lc);
      auto t = build_neighbor_table(sys, g, lc);
      grids.emplace(lc, std::move(g));
      it = tables.emplace(lc, std::move(t)).first;
    }
    return it->second;
  }
};

BenchRow bench_kernel(RunContext& ctx, const std::string& name, bool timing) {
  const BenchConfig& cfg = ctx.cfg;
  const std::size_t n = ctx.sys.n_sites;
  const bool want_s = cfg.paths != BenchPaths::kVectorOnly;
  const bool want_v = cfg.paths != BenchPaths::kScalarOnly;

  std::function<void()> run_s, run_v;
  // getters pull the last run's observables for verification
  std::function<double()> energy_s, energy_v;
  std::function<std::vector<double>()> comps_s, comps_v;

  // long-lived outputs for the closures
  auto accS = std::make_shared<ForceAccumulator>(n);
  auto accV = std::make_shared<ForceAccumulator>(n);
  auto fldS = std::make_shared<FieldArrays>(n);
  auto fldV = std::make_shared<FieldArrays>(n);

  if (name == "lj") {
    LjParams p{cfg.params.lj_cutoff, cfg.params.lj_shift};
    const NeighborTable& tab = ctx.table_for(p.cutoff);
    run_s = [&, p] { lj_forces_scalar(ctx.sys, tab, p, *accS); };
    run_v = [&, p] { lj_forces_vectorized(ctx.sys, tab, p, cfg.lanes, ctx.ws, *accV); };
    energy_s = [accS] { return accS->energy; };
    energy_v = [accV] { return accV->energy; };
    comps_s = [accS] { return force_comps(*accS); };
    comps_v = [accV] { return force_comps(*accV); };
  } else if (name == "ewald_real") {
    EwaldRealParams p{cfg.params.ewald_alpha, cfg.params.ewald_cutoff};
    const NeighborTable& tab = ctx.table_for(p.cutoff);
    run_s = [&, p] { ewald_real_forces_scalar(ctx.sys, tab, p, *accS); };
    run_v = [&, p] {
      ewald_real_forces_vectorized(ctx.sys, tab, p, cfg.lanes, ctx.ws, *accV);
    };
    energy_s = [accS] { return accS->energy; };
    energy_v = [accV] { return accV->energy; };
    comps_s = [accS] { return force_comps(*accS); };
    comps_v = [accV] { return force_comps(*accV); };
  } else if (name == "halgren") {
    HalgrenParams p{cfg.params.halgren_cutoff, cfg.params.halgren_delta,
                    cfg.params.halgren_gamma};
    const NeighborTable& tab = ctx.table_for(p.cutoff);
    run_s = [&, p] { halgren_forces_scalar(ctx.sys, tab, p, *accS); };
    run_v = [&, p] {
      halgren_forces_vectorized(ctx.sys, tab, p, cfg.lanes, ctx.ws, *accV);
    };
    energy_s = [accS] { return accS->energy; };
    energy_v = [accV] { return accV->energy; };
    comps_s = [accS] { return force_comps(*accS); };
    comps_v = [accV] { return force_comps(*accV); };
  } else if (name == "tmatxb" || name == "perm_field") {
    PolarParams p{cfg.params.polar_cutoff, cfg.params.thole_a};
    const NeighborTable& tab = ctx.table_for(p.cutoff);
    if (name == "tmatxb") {
      auto state = std::make_shared<PolarizationState>(
          random_dipoles(ctx.sys, cfg.seed));
      state->thole_a = cfg.params.thole_a;
      run_s = [&, p, state] {
        dipole_field_matvec_scalar(ctx.sys, tab, *state, p, *fldS);
      };
      run_v = [&, p, state] {
        dipole_field_matvec_vectorized(ctx.sys, tab, *state, p, cfg.lanes, ctx.ws,
                                       *fldV);
      };
    } else {
      run_s = [&, p] { permanent_field_scalar(ctx.sys, tab, p, *fldS); };
      run_v = [&, p] {
        permanent_field_vectorized(ctx.sys, tab, p, cfg.lanes, ctx.ws, *fldV);
      };
    }
    comps_s = [fldS] { return field_comps(*fldS); };
    comps_v = [fldV] { return field_comps(*fldV); };
  } else if (name == "image") {
    // out-of-box displacements regenerated per run so repeated wraps do not
    // degenerate to the identity
    auto inX = std::make_shared<PaddedRealArray>(n);
    auto inY = std::make_shared<PaddedRealArray>(n);
    auto inZ = std::make_shared<PaddedRealArray>(n);
    std::mt19937_64 rng(cfg.seed ^ 0xabcdef12345ull);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (std::size_t i = 0; i < n; ++i) {
      (*inX)[i] = u(rng) * ctx.sys.box.lx;
      (*inY)[i] = u(rng) * ctx.sys.box.ly;
      (*inZ)[i] = u(rng) * ctx.sys.box.lz;
    }
    auto wsS = std::make_shared<std::array<PaddedRealArray, 3>>();
    auto wsV = std::make_shared<std::array<PaddedRealArray, 3>>();
    run_s = [&, inX, inY, inZ, wsS] {
      (*wsS)[0] = *inX;
      (*wsS)[1] = *inY;
      (*wsS)[2] = *inZ;
      minimum_image_loop_reference((*wsS)[0], (*wsS)[1], (*wsS)[2], ctx.sys.box);
    };
    run_v = [&, inX, inY, inZ, wsV] {
      (*wsV)[0] = *inX;
      (*wsV)[1] = *inY;
      (*wsV)[2] = *inZ;
      minimum_image_batch((*wsV)[0], (*wsV)[1], (*wsV)[2], ctx.sys.box);
    };
    auto grab = [n](const std::array<PaddedRealArray, 3>& w) {
      std::vector<double> c;
      for (const auto& arr : w) c.insert(c.end(), arr.data(), arr.data() + n);
      return c;
    };
    comps_s = [wsS, grab] { return grab(*wsS); };
    comps_v = [wsV, grab] { return grab(*wsV); };
  } else if (name == "neighbor_build") {
    const double lc = cfg.params.lj_cutoff + cfg.params.list_skin;
    auto grid = std::make_shared<CellGrid>(build_cell_grid(ctx.sys, lc));
    auto tabS = std::make_shared<NeighborTable>();
    auto tabV = std::make_shared<NeighborTable>();
    run_s = [&, grid, tabS, lc] {
      *tabS = build_neighbor_table_reference(ctx.sys, *grid, lc);
    };
    run_v = [&, grid, tabV, lc] {
      *tabV = build_neighbor_table(ctx.sys, *grid, lc);
    };
    comps_s = [tabS] {
      std::vector<double> c;
      for (auto& pr : table_pairs(*tabS)) {
        c.push_back(pr.first);
        c.push_back(pr.second);
      }
      return c;
    };
    comps_v = [tabV] {
      std::vector<double> c;
      for (auto& pr : table_pairs(*tabV)) {
        c.push_back(pr.first);
        c.push_back(pr.second);
      }
      return c;
    };
  } else {
    throw ContractViolation("unknown kernel: " + name);
  }

  // verification pass (independent of `repeats`)
  std::optional<double> e_rel, f_rel;
  if (want_s && want_v) {
    run_s();
    run_v();
    auto cs = comps_s();
    auto cv = comps_v();
    if (cfg.debug_perturb_vectorized != 0.0 && !cv.empty()) {
      cv[0] += cfg.debug_perturb_vectorized;
    }
    if (cs.size() != cv.size()) {
      f_rel = 1.0;
    } else {
      f_rel = rel_comp_delta(cs, cv);
    }
    if (energy_s && energy_v) {
      double ev = energy_v() + cfg.debug_perturb_vectorized;
      e_rel = rel_energy_delta(energy_s(), ev);
    }
  }

  std::vector<double> ts, tv;
  if (timing) {
    if (want_s && want_v) {
      // interleave the timed runs so slow system phases hit both paths
      // instead of skewing the boost quotient
      for (std::size_t w = 0; w < cfg.warmup; ++w) {
        run_s();
        run_v();
      }
      ts.reserve(cfg.repeats);
      tv.reserve(cfg.repeats);
      for (std::size_t r = 0; r < cfg.repeats; ++r) {
        auto t0 = std::chrono::steady_clock::now();
        run_s();
        auto t1 = std::chrono::steady_clock::now();
        run_v();
        auto t2 = std::chrono::steady_clock::now();
        ts.push_back(std::chrono::duration<double>(t1 - t0).count());
        tv.push_back(std::chrono::duration<double>(t2 - t1).count());
      }
    } else if (want_s) {
      ts = time_runs(run_s, cfg.repeats, cfg.warmup);
    } else if (want_v) {
      tv = time_runs(run_v, cfg.repeats, cfg.warmup);
    }
  }
  return make_bench_row(name, n, (timing && want_s) ? &ts : nullptr,
                        (timing && want_v) ? &tv : nullptr, e_rel, f_rel,
                        kEnergyTol, kForceTol);
}

std::string environment_string(const LaneConfig& lanes) {
  std::ostringstream os;
  os << "real_lane=" << lanes.real_lane << " int_lane=" << lanes.int_lane;
#if defined(__GNUC__)
  os << " gcc=" << __GNUC__ << "." << __GNUC_MINOR__;
#endif
  os << " avx2=" << (__builtin_cpu_supports("avx2") ? "yes" : "no");
  os << " avx512f=" << (__builtin_cpu_supports("avx512f") ? "yes" : "no");
  os << " (wall-clock per kernel call; no integrator, ns/day not reported)";
  return os.str();
}

BenchRow merge_shard_rows(const std::vector<BenchRow>& shard_rows) {
  BenchRow m = shard_rows.front();
  double ts = 0, tv = 0;
  int nts = 0, ntv = 0;
  for (const auto& r : shard_rows) {
    if (r.t_scalar_s) {
      ts += *r.t_scalar_s;
      ++nts;
    }
    if (r.t_vec_s) {
      tv += *r.t_vec_s;
      ++ntv;
    }
    if (r.max_energy_rel) {
      m.max_energy_rel = std::max(m.max_energy_rel.value_or(0.0), *r.max_energy_rel);
    }
    if (r.max_force_rel) {
      m.max_force_rel = std::max(m.max_force_rel.value_or(0.0), *r.max_force_rel);
    }
    if (r.status != "ok") m.status = r.status;
  }
  if (nts > 0) m.t_scalar_s = ts / nts;
  if (ntv > 0) m.t_vec_s = tv / ntv;
  if (nts > 0 && ntv > 0 && *m.t_vec_s > 0) {
    m.boost = *m.t_scalar_s / *m.t_vec_s;
  }
  return m;
}

BenchReport run_impl(const BenchConfig& cfg, bool timing) {
  cfg.validate();
  if (cfg.shards > 1) {
    std::vector<BenchReport> reports(cfg.shards);
    std::vector<std::thread> threads;
    std::vector<std::exception_ptr> errors(cfg.shards);
    for (std::size_t s = 0; s < cfg.shards; ++s) {
      threads.emplace_back([&, s] {
        try {
          BenchConfig sub = cfg;
          sub.shards = 1;
          sub.seed = cfg.seed + s;
          reports[s] = run_impl(sub, timing);
        } catch (...) {
          errors[s] = std::current_exception();
        }
      });
    }
    for (auto& t : threads) t.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
    BenchReport merged;
    merged.environment = reports[0].environment + " shards=" + std::to_string(cfg.shards);
    for (std::size_t k = 0; k < reports[0].rows.size(); ++k) {
      std::vector<BenchRow> shard_rows;
      for (const auto& r : reports) shard_rows.push_back(r.rows[k]);
      merged.rows.push_back(merge_shard_rows(shard_rows));
    }
    return merged;
  }

  RunContext ctx(cfg);
  BenchReport report;
  report.environment = environment_string(cfg.lanes);
  for (const auto& name : cfg.kernels) {
    report.rows.push_back(bench_kernel(ctx, name, timing));
  }
  return report;
}

}  // namespace

void BenchConfig::validate() const {
  box.validate();
  lanes.validate();
  if (n_sites < 2) throw ContractViolation("BenchConfig: n_sites must be >= 2");
  if (repeats < 3) throw ContractViolation("BenchConfig: repeats must be >= 3");
  if (shards < 1) throw ContractViolation("BenchConfig: shards must be >= 1");
  if (kernels.empty()) throw ContractViolation("BenchConfig: no kernels requested");
  const double half = 0.5 * box.min_edge();
  for (const auto& k : kernels) {
    const double c = cutoff_for(k, params);  // also rejects unknown names
    if (c > 0 && c + params.list_skin > half) {
      throw ContractViolation("BenchConfig: cutoff + skin exceeds half the box for " + k);
    }
  }
}

double trimmed_mean(std::vector<double> samples) {
  if (samples.size() < 3) {
    throw ContractViolation("trimmed_mean: need at least 3 samples");
  }
  std::sort(samples.begin(), samples.end());
  return std::accumulate(samples.begin() + 1, samples.end() - 1, 0.0) /
         static_cast<double>(samples.size() - 2);
}

BenchRow make_bench_row(const std::string& kernel, std::size_t n_sites,
                        const std::vector<double>* scalar_times,
                        const std::vector<double>* vec_times,
                        std::optional<double> max_energy_rel,
                        std::optional<double> max_force_rel, double energy_tol,
                        double force_tol) {
  BenchRow row;
  row.kernel = kernel;
  row.n_sites = n_sites;
  if (scalar_times) row.t_scalar_s = trimmed_mean(*scalar_times);
  if (vec_times) row.t_vec_s = trimmed_mean(*vec_times);
  if (row.t_scalar_s && row.t_vec_s && *row.t_vec_s > 0) {
    row.boost = *row.t_scalar_s / *row.t_vec_s;
  }
  row.max_energy_rel = max_energy_rel;
  row.max_force_rel = max_force_rel;
  if ((max_energy_rel && *max_energy_rel > energy_tol) ||
      (max_force_rel && *max_force_rel > force_tol)) {
    row.status = "FAILED";
  }
  return row;
}

ParticleSystem generate_system(const BenchConfig& config) {
  return generate_system(config.kind, config.n_sites, config.box, config.seed);
}

BenchReport run_bench(const BenchConfig& config) { return run_impl(config, true); }

BenchReport run_verify(const BenchConfig& config) { return run_impl(config, false); }

BenchConfig load_config_json(const std::string& json_text) {
  json j = json::parse(json_text);
  BenchConfig c;
  if (j.contains("kind")) {
    std::string k = j["kind"];
    if (k == "lattice-water-like") c.kind = SystemKind::kLatticeWaterLike;
    else if (k == "uniform-random") c.kind = SystemKind::kUniformRandom;
    else throw ContractViolation("config: unknown system kind " + k);
  }
  if (j.contains("n_sites")) c.n_sites = j["n_sites"];
  if (j.contains("box")) {
    c.box.lx = j["box"].value("lx", 0.0);
    c.box.ly = j["box"].value("ly", 0.0);
    c.box.lz = j["box"].value("lz", 0.0);
  }
  if (j.contains("seed")) c.seed = j["seed"];
  if (j.contains("kernels")) c.kernels = j["kernels"].get<std::vector<std::string>>();
  if (j.contains("repeats")) c.repeats = j["repeats"];
  if (j.contains("warmup")) c.warmup = j["warmup"];
  if (j.contains("shards")) c.shards = j["shards"];
  if (j.contains("paths")) {
    std::string p = j["paths"];
    if (p == "both") c.paths = BenchPaths::kBoth;
    else if (p == "scalar") c.paths = BenchPaths::kScalarOnly;
    else if (p == "vec") c.paths = BenchPaths::kVectorOnly;
    else throw ContractViolation("config: unknown paths value " + p);
  }
  if (j.contains("lanes")) {
    c.lanes.real_lane = j["lanes"].value("real", 8);
    c.lanes.int_lane = j["lanes"].value("int", 16);
  }
  if (j.contains("debug_perturb_vectorized")) {
    c.debug_perturb_vectorized = j["debug_perturb_vectorized"];
  }
  if (j.contains("params")) {
    const json& p = j["params"];
    KernelParamsConfig& kp = c.params;
    kp.list_skin = p.value("list_skin", kp.list_skin);
    kp.lj_cutoff = p.value("lj_cutoff", kp.lj_cutoff);
    kp.lj_shift = p.value("lj_shift", kp.lj_shift);
    kp.ewald_cutoff = p.value("ewald_cutoff", kp.ewald_cutoff);
    kp.ewald_alpha = p.value("ewald_alpha", kp.ewald_alpha);
    kp.halgren_cutoff = p.value("halgren_cutoff", kp.halgren_cutoff);
    kp.halgren_delta = p.value("halgren_delta", kp.halgren_delta);
    kp.halgren_gamma = p.value("halgren_gamma", kp.halgren_gamma);
    kp.polar_cutoff = p.value("polar_cutoff", kp.polar_cutoff);
    kp.thole_a = p.value("thole_a", kp.thole_a);
  }
  return c;
}

namespace {

json row_to_json(const BenchRow& r) {
  json j;
  j["kernel"] = r.kernel;
  j["n_sites"] = r.n_sites;
  j["t_scalar_s"] = r.t_scalar_s ? json(*r.t_scalar_s) : json(nullptr);
  j["t_vec_s"] = r.t_vec_s ? json(*r.t_vec_s) : json(nullptr);
  j["boost"] = r.boost ? json(*r.boost) : json(nullptr);
  j["max_energy_rel"] = r.max_energy_rel ? json(*r.max_energy_rel) : json(nullptr);
  j["max_force_rel"] = r.max_force_rel ? json(*r.max_force_rel) : json(nullptr);
  j["status"] = r.status;
  return j;
}

std::string fmt_opt(const std::optional<double>& v, const char* fmt) {
  if (!v) return "";
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, *v);
  return buf;
}

}  // namespace

std::string emit_report(const BenchReport& report, ReportFormat format) {
  if (format == ReportFormat::kJson) {
    json j;
    j["environment"] = report.environment;
    j["rows"] = json::array();
    for (const auto& r : report.rows) j["rows"].push_back(row_to_json(r));
    return j.dump(2) + "\n";
  }
  if (format == ReportFormat::kCsv) {
    std::ostringstream os;
    os << "kernel,n_sites,t_scalar_s,t_vec_s,boost,max_energy_rel,max_force_rel,status\n";
    for (const auto& r : report.rows) {
      os << r.kernel << ',' << r.n_sites << ',' << fmt_opt(r.t_scalar_s, "%.9e")
         << ',' << fmt_opt(r.t_vec_s, "%.9e") << ',' << fmt_opt(r.boost, "%.4f")
         << ',' << fmt_opt(r.max_energy_rel, "%.3e") << ','
         << fmt_opt(r.max_force_rel, "%.3e") << ',' << r.status << '\n';
    }
    return os.str();
  }
  // human
  std::ostringstream os;
  os << "# " << report.environment << "\n";
  os << std::left << std::setw(16) << "kernel" << std::right << std::setw(9)
     << "n_sites" << std::setw(14) << "t_scalar_s" << std::setw(14) << "t_vec_s"
     << std::setw(10) << "boost" << std::setw(12) << "max_e_rel" << std::setw(12)
     << "max_f_rel" << "  status\n";
  for (const auto& r : report.rows) {
    os << std::left << std::setw(16) << r.kernel << std::right << std::setw(9)
       << r.n_sites << std::setw(14) << fmt_opt(r.t_scalar_s, "%.4e")
       << std::setw(14) << fmt_opt(r.t_vec_s, "%.4e") << std::setw(10)
       << fmt_opt(r.boost, "%.4f") << std::setw(12)
       << fmt_opt(r.max_energy_rel, "%.2e") << std::setw(12)
       << fmt_opt(r.max_force_rel, "%.2e") << "  " << r.status << "\n";
  }
  return os.str();
}

std::string dump_system_json(const BenchConfig& config) {
  ParticleSystem s = generate_system(config);
  PolarizationState st = random_dipoles(s, config.seed);
  auto arr = [](const PaddedRealArray& a) {
    return std::vector<double>(a.data(), a.data() + a.logical_len());
  };
  json j;
  j["version"] = 1;
  j["seed"] = config.seed;
  j["kind"] = config.kind == SystemKind::kLatticeWaterLike ? "lattice-water-like"
                                                           : "uniform-random";
  j["box"] = {{"lx", s.box.lx}, {"ly", s.box.ly}, {"lz", s.box.lz}};
  j["n_sites"] = s.n_sites;
  j["x"] = arr(s.x);
  j["y"] = arr(s.y);
  j["z"] = arr(s.z);
  j["charge"] = arr(s.charge);
  j["lj_sigma"] = arr(s.lj_sigma);
  j["lj_epsilon"] = arr(s.lj_epsilon);
  j["hal_r0"] = arr(s.hal_r0);
  j["hal_epsilon"] = arr(s.hal_epsilon);
  j["polarizability"] = arr(s.polarizability);
  j["mu_x"] = arr(st.mu_x);
  j["mu_y"] = arr(st.mu_y);
  j["mu_z"] = arr(st.mu_z);
  return j.dump(2) + "\n";
}

}  // namespace mdvec
