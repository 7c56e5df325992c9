#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "mdvec/bench.hpp"

using namespace mdvec;

TEST_CASE("trimmed mean drops one min and one max") {
  CHECK(trimmed_mean({3.0, 1.0, 2.0}) == 2.0);
  CHECK(trimmed_mean({5.0, 5.0, 5.0}) == 5.0);
  CHECK(trimmed_mean({100.0, 1.0, 2.0, 3.0}) == 2.5);
  // repeats = 10: mean of the middle 8
  std::vector<double> t{10, 1, 2, 3, 4, 5, 6, 7, 8, 0.5};
  CHECK(trimmed_mean(t) == doctest::Approx(36.0 / 8.0).epsilon(1e-15));
  CHECK_THROWS_AS(trimmed_mean({1.0, 2.0}), ContractViolation);
}

TEST_CASE("bench row assembly and the boost quotient") {
  std::vector<double> ts{0.9, 1.0, 1.1};  // trimmed mean 1.0
  std::vector<double> tv{0.3, 0.5, 0.4};  // trimmed mean 0.4
  BenchRow r = make_bench_row("lj", 500, &ts, &tv, 1e-12, 1e-11, 1e-10, 1e-9);
  CHECK(*r.t_scalar_s == doctest::Approx(1.0));
  CHECK(*r.t_vec_s == doctest::Approx(0.4));
  CHECK(*r.boost == doctest::Approx(1.0 / 0.4));
  CHECK(r.status == "ok");

  BenchRow bad_e = make_bench_row("lj", 500, &ts, &tv, 1e-9, 1e-11, 1e-10, 1e-9);
  CHECK(bad_e.status == "FAILED");
  BenchRow bad_f = make_bench_row("lj", 500, &ts, &tv, 1e-12, 1e-8, 1e-10, 1e-9);
  CHECK(bad_f.status == "FAILED");

  BenchRow no_time = make_bench_row("lj", 500, nullptr, nullptr, 1e-12, 1e-12,
                                    1e-10, 1e-9);
  CHECK(!no_time.t_scalar_s);
  CHECK(!no_time.boost);
}

TEST_CASE("config JSON parsing") {
  BenchConfig c = load_config_json(R"({
    "kind": "lattice-water-like",
    "n_sites": 96000,
    "box": {"lx": 46.0, "ly": 46.0, "lz": 46.0},
    "seed": 12,
    "kernels": ["lj", "halgren"],
    "repeats": 5,
    "warmup": 1,
    "shards": 2,
    "paths": "both",
    "lanes": {"real": 4, "int": 8},
    "params": {"lj_cutoff": 2.5, "list_skin": 0.5, "ewald_alpha": 0.3}
  })");
  CHECK(c.kind == SystemKind::kLatticeWaterLike);
  CHECK(c.n_sites == 96000);
  CHECK(c.box.lx == 46.0);
  CHECK(c.seed == 12);
  CHECK(c.kernels == std::vector<std::string>{"lj", "halgren"});
  CHECK(c.repeats == 5);
  CHECK(c.warmup == 1);
  CHECK(c.shards == 2);
  CHECK(c.lanes.real_lane == 4);
  CHECK(c.lanes.int_lane == 8);
  CHECK(c.params.lj_cutoff == 2.5);
  CHECK(c.params.list_skin == 0.5);
  CHECK(c.params.ewald_alpha == 0.3);
  CHECK(c.params.ewald_cutoff == 3.0);  // untouched default

  CHECK_THROWS_AS(load_config_json(R"({"kind": "nope"})"), ContractViolation);
  CHECK_THROWS(load_config_json("not json"));
}

TEST_CASE("config validation") {
  BenchConfig c;
  c.n_sites = 64;
  c.box = {12, 12, 12};
  c.validate();

  BenchConfig small = c;
  small.repeats = 2;
  CHECK_THROWS_AS(small.validate(), ContractViolation);

  BenchConfig badk = c;
  badk.kernels = {"nosuch"};
  CHECK_THROWS_AS(badk.validate(), ContractViolation);

  BenchConfig tight = c;
  tight.box = {6, 6, 6};  // cutoff 3 + skin 0.7 > half edge 3
  CHECK_THROWS_AS(tight.validate(), ContractViolation);
}

TEST_CASE("verification passes on a clean run for every kernel") {
  BenchConfig c;
  c.n_sites = 120;
  c.box = {12, 12, 12};
  c.seed = 5;
  BenchReport r = run_verify(c);
  REQUIRE(r.rows.size() == 7);
  for (const auto& row : r.rows) {
    INFO(row.kernel);
    CHECK(row.status == "ok");
    REQUIRE(row.max_force_rel.has_value());
    CHECK(*row.max_force_rel <= 1e-9);
    CHECK(!row.t_scalar_s);  // verify mode never times
  }
  CHECK(!r.any_failed());
}

TEST_CASE("injected vectorized perturbation is detected") {
  BenchConfig c;
  c.n_sites = 64;
  c.box = {12, 12, 12};
  c.kernels = {"lj"};
  c.debug_perturb_vectorized = 0.5;
  BenchReport r = run_verify(c);
  REQUIRE(r.rows.size() == 1);
  CHECK(r.rows[0].status == "FAILED");
  CHECK(r.any_failed());
}

TEST_CASE("timing runs produce positive times and the boost quotient") {
  BenchConfig c;
  c.n_sites = 64;
  c.box = {12, 12, 12};
  c.kernels = {"lj"};
  c.repeats = 3;
  c.warmup = 0;
  BenchReport r = run_bench(c);
  REQUIRE(r.rows.size() == 1);
  const BenchRow& row = r.rows[0];
  REQUIRE(row.t_scalar_s.has_value());
  REQUIRE(row.t_vec_s.has_value());
  CHECK(*row.t_scalar_s > 0);
  CHECK(*row.t_vec_s > 0);
  CHECK(*row.boost == *row.t_scalar_s / *row.t_vec_s);
}

TEST_CASE("single-path runs skip verification") {
  BenchConfig c;
  c.n_sites = 64;
  c.box = {12, 12, 12};
  c.kernels = {"lj"};
  c.repeats = 3;
  c.warmup = 0;
  c.paths = BenchPaths::kScalarOnly;
  BenchReport r = run_bench(c);
  CHECK(r.rows[0].t_scalar_s.has_value());
  CHECK(!r.rows[0].t_vec_s.has_value());
  CHECK(!r.rows[0].boost.has_value());
  CHECK(!r.rows[0].max_force_rel.has_value());
  CHECK(r.rows[0].status == "ok");
}

TEST_CASE("sharded verification merges rows") {
  BenchConfig c;
  c.n_sites = 48;
  c.box = {12, 12, 12};
  c.kernels = {"lj", "image"};
  c.shards = 3;
  BenchReport r = run_verify(c);
  REQUIRE(r.rows.size() == 2);
  for (const auto& row : r.rows) CHECK(row.status == "ok");
  CHECK(r.environment.find("shards=3") != std::string::npos);
}

TEST_CASE("report formats") {
  BenchReport rep;
  rep.environment = "unit";
  BenchRow row;
  row.kernel = "lj";
  row.n_sites = 500;
  row.t_scalar_s = 1.0;
  row.t_vec_s = 0.5;
  row.boost = 2.0;
  row.max_energy_rel = 1e-12;
  row.max_force_rel = 2e-11;
  rep.rows.push_back(row);

  std::string csv = emit_report(rep, ReportFormat::kCsv);
  std::istringstream is(csv);
  std::string header, line;
  std::getline(is, header);
  CHECK(header ==
        "kernel,n_sites,t_scalar_s,t_vec_s,boost,max_energy_rel,max_force_rel,status");
  std::getline(is, line);
  CHECK(line.find("lj,500,") == 0);
  CHECK(line.find("2.0000") != std::string::npos);
  CHECK(line.find(",ok") != std::string::npos);

  std::string j = emit_report(rep, ReportFormat::kJson);
  CHECK(j.find("\"boost\": 2.0") != std::string::npos);
  CHECK(j.find("\"environment\": \"unit\"") != std::string::npos);

  std::string h = emit_report(rep, ReportFormat::kHuman);
  CHECK(h.find("boost") != std::string::npos);
  CHECK(h.find("2.0000") != std::string::npos);
}

TEST_CASE("reports are deterministic for a fixed config") {
  BenchConfig c;
  c.n_sites = 80;
  c.box = {12, 12, 12};
  c.kernels = {"lj", "ewald_real", "tmatxb"};
  std::string a = emit_report(run_verify(c), ReportFormat::kCsv);
  std::string b = emit_report(run_verify(c), ReportFormat::kCsv);
  CHECK(a == b);
}

TEST_CASE("system dump is valid JSON with all site arrays") {
  BenchConfig c;
  c.n_sites = 16;
  c.box = {10, 10, 10};
  std::string s = dump_system_json(c);
  for (const char* key :
       {"\"version\"", "\"x\"", "\"y\"", "\"z\"", "\"charge\"", "\"lj_sigma\"",
        "\"lj_epsilon\"", "\"hal_r0\"", "\"hal_epsilon\"", "\"polarizability\"",
        "\"mu_x\"", "\"mu_y\"", "\"mu_z\""}) {
    CHECK(s.find(key) != std::string::npos);
  }
}

TEST_CASE("generated systems are valid and neutral") {
  for (auto kind : {SystemKind::kUniformRandom, SystemKind::kLatticeWaterLike}) {
    BenchConfig c;
    c.kind = kind;
    c.n_sites = 200;
    c.box = {14, 14, 14};
    c.seed = 9;
    ParticleSystem s = generate_system(c);
    s.validate();
    CHECK(s.n_sites == 200);
    double q = 0;
    for (std::size_t i = 0; i < s.n_sites; ++i) q += s.charge[i];
    CHECK(std::abs(q) <= 1e-10);
    // minimum separation honored
    double min_r2 = 1e300;
    for (std::size_t i = 0; i < s.n_sites; ++i) {
      for (std::size_t j = i + 1; j < s.n_sites; ++j) {
        double dx = s.x[i] - s.x[j], dy = s.y[i] - s.y[j], dz = s.z[i] - s.z[j];
        minimum_image_scalar(dx, dy, dz, s.box);
        min_r2 = std::min(min_r2, pbc::dist2(dx, dy, dz));
      }
    }
    CHECK(min_r2 >= 0.8 * 0.8 * (1.0 - 1e-12));
  }
}

TEST_CASE("overdense generation requests fail loudly") {
  CHECK_THROWS_AS(
      generate_system(SystemKind::kUniformRandom, 5000, {5.0, 5.0, 5.0}, 1),
      GenerationError);
}
