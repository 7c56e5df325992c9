#ifndef MDVEC_BENCH_HPP
#define MDVEC_BENCH_HPP

#include <optional>
#include <string>
#include <vector>

#include "mdvec/polar.hpp"

namespace mdvec {

enum class ReportFormat { kJson, kCsv, kHuman };
enum class BenchPaths { kBoth, kScalarOnly, kVectorOnly };

struct KernelParamsConfig {
  double list_skin = 0.7;
  double lj_cutoff = 3.0;
  bool lj_shift = false;
  double ewald_cutoff = 3.0;
  double ewald_alpha = 0.4;
  double halgren_cutoff = 3.0;
  double halgren_delta = 0.07;
  double halgren_gamma = 0.12;
  double polar_cutoff = 3.0;
  double thole_a = 0.39;
};

struct BenchConfig {
  SystemKind kind = SystemKind::kUniformRandom;
  std::size_t n_sites = 500;
  OrthorhombicBox box{20, 20, 20};
  std::uint64_t seed = 1;
  std::vector<std::string> kernels = {"lj",        "ewald_real", "halgren",
                                      "tmatxb",    "perm_field", "image",
                                      "neighbor_build"};
  std::size_t repeats = 10;
  std::size_t warmup = 2;
  KernelParamsConfig params;
  LaneConfig lanes;
  BenchPaths paths = BenchPaths::kBoth;
  std::size_t shards = 1;
  // Test hook: added to the vectorized energy/field before verification so
  // the failure path (exit code 2) can be exercised.
  double debug_perturb_vectorized = 0.0;

  void validate() const;
};

struct BenchRow {
  std::string kernel;
  std::size_t n_sites = 0;
  std::optional<double> t_scalar_s;
  std::optional<double> t_vec_s;
  std::optional<double> boost;  // t_scalar / t_vec
  std::optional<double> max_energy_rel;
  std::optional<double> max_force_rel;
  std::string status = "ok";
};

struct BenchReport {
  std::string environment;
  std::vector<BenchRow> rows;

  bool any_failed() const {
    for (const auto& r : rows) {
      if (r.status != "ok") return true;
    }
    return false;
  }
};

// Mean after dropping one smallest and one biggest sample; needs >= 3.
double trimmed_mean(std::vector<double> samples);

// Assembles a row from raw timing sequences; exposed so the reporting
// protocol can be tested against synthetic timings.
BenchRow make_bench_row(const std::string& kernel, std::size_t n_sites,
                        const std::vector<double>* scalar_times,
                        const std::vector<double>* vec_times,
                        std::optional<double> max_energy_rel,
                        std::optional<double> max_force_rel,
                        double energy_tol, double force_tol);

BenchConfig load_config_json(const std::string& json_text);

ParticleSystem generate_system(const BenchConfig& config);

BenchReport run_bench(const BenchConfig& config);
// Verification only (single scalar + vectorized run per kernel, no timing).
BenchReport run_verify(const BenchConfig& config);

std::string emit_report(const BenchReport& report, ReportFormat format);

std::string dump_system_json(const BenchConfig& config);

// Reference (unvectorized) batch minimum image used as the scalar side of
// the image bench entry; bit-identical to minimum_image_batch.
void minimum_image_loop_reference(PaddedRealArray& dxs, PaddedRealArray& dys,
                                  PaddedRealArray& dzs, const OrthorhombicBox& box);

}  // namespace mdvec

#endif
