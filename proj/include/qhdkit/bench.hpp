#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qhdkit/evolve.hpp"
#include "qhdkit/refine.hpp"

namespace qhdkit {

enum class InstanceSource { BuiltinNlp, BuiltinDemo, GeneratedExp, GeneratedQp, UserFile };

std::string source_name(InstanceSource s);

/// A problem with optional reference optimum and its provenance.
struct InstanceSpec {
    std::string id;
    InstanceSource source = InstanceSource::UserFile;
    Problem problem;  // original bounds; pipelines normalize internally
    std::optional<double> f_star;
    std::string f_star_provenance;  // "reference" for bundled values, "multistart" for derived
};

/// The five bundled nonlinear instances (nlp1..nlp5) with their reference
/// optima, plus the two worked demos (demo-qp, demo-exp).
std::vector<InstanceSpec> builtin_instances();
InstanceSpec builtin_instance(const std::string& id);

/// Random instance of the exponential family
///   f(x) = 1/2 sum_ij Q_ij e^{x_i} e^{x_j} + sum_i b_i e^{-x_i}
/// with a sparse symmetric Q (expected off-diagonal fill = `sparsity`,
/// entries uniform in [-1,1]) on the unit box. f_star comes from a
/// seeded multi-start refinement and is tagged as derived.
InstanceSpec generate_exp_instance(int dim, double sparsity, std::uint64_t seed,
                                   int fstar_starts = 10000);

/// Random sparse box-QP instance under the same conventions.
InstanceSpec generate_qp_instance(int dim, double sparsity, std::uint64_t seed,
                                  int fstar_starts = 10000);

/// The exact Q/b draw behind the generators: diagonal first, then the
/// upper triangle row-major (keep decision, then value), then b, all from
/// one mt19937_64 stream.
void generated_matrices(int dim, double sparsity, std::uint64_t seed,
                        std::vector<std::vector<double>>& Q, std::vector<double>& b);

/// Fraction of refined objective values within `tol` of f_star.
double success_probability(const std::vector<double>& refined_f, double f_star,
                           double tol = 1e-3);

/// Expected runtime to reach 99% cumulative success probability:
/// t0 for p_s >= 0.99, +inf for p_s = 0, else t0 * ceil(ln(0.01)/ln(1-p_s)).
double tts(double t0_seconds, double p_s);

struct PipelineConfig {
    Backend backend = Backend::Embedded;
    Scheme scheme = Scheme::Unary;
    int resolution = 5;  // sites per variable (embedded)
    int grid_points = 17;  // per dimension (direct)
    double gamma = 1.0;
    double total_time = 10.0;
    int steps = 400;
    int shots = 1000;
    std::uint64_t seed = 0;
    DecodePolicy policy = DecodePolicy::Lenient;
    RefineConfig refine;
    kernels::Exec exec = kernels::Exec::Parallel;

    Schedule schedule() const { return Schedule::smooth_log(gamma, total_time); }
    /// Grid size implied by the backend (embedded: from scheme/resolution).
    int effective_grid(Scheme s) const;
};

struct SampleRecord {
    std::uint64_t outcome = 0;      // basis index
    std::string bitstring;          // embedded backend only
    bool accepted = false;
    std::vector<double> decoded;    // unit-box coordinates when accepted
    std::vector<double> refined_x;  // unit-box coordinates
    double refined_f = 0.0;
    int refine_iterations = 0;
    bool refine_converged = false;
    bool success = false;
};

struct RunTimings {
    double evolve_seconds = 0.0;
    double decode_seconds = 0.0;
    double refine_seconds_total = 0.0;
    double refine_seconds_mean = 0.0;
    double t0_seconds = 0.0;  // simulated per-shot cost
    double tts_seconds = 0.0;
};

struct RunReport {
    std::string instance_id;
    std::string mode;  // "quantum" or "baseline"
    PipelineConfig config;
    std::vector<SampleRecord> samples;
    double rejection_rate = 0.0;
    std::optional<double> p_s;
    std::optional<double> f_star;
    double best_f = 0.0;
    std::vector<double> best_x;           // unit-box coordinates
    std::vector<double> best_x_original;  // user coordinates
    RunTimings timings;
};

/// Full pipeline: normalize, discretize, (embed,) evolve, sample, decode,
/// refine, and score. All randomness is seeded through cfg.seed.
RunReport run_instance(const InstanceSpec& spec, const PipelineConfig& cfg);

/// Classical multi-start baseline from uniformly random points in the box.
RunReport run_baseline(const InstanceSpec& spec, int starts, std::uint64_t seed,
                       const RefineConfig& refine_cfg = {},
                       kernels::Exec exec = kernels::Exec::Parallel);

/// The three solution-quality distributions of the warm-start protocol:
/// objective values at uniform random points, at decoded samples before
/// refinement, and at refined samples.
struct WarmstartReport {
    std::string instance_id;
    std::vector<double> random_f;
    std::vector<double> decoded_f;
    std::vector<double> refined_f;
    double median_random = 0.0;
    double median_decoded = 0.0;
    double median_refined = 0.0;
};
WarmstartReport warmstart_comparison(const InstanceSpec& spec, const PipelineConfig& cfg);

double median(std::vector<double> values);

}  // namespace qhdkit
