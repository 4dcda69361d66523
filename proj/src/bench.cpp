#include "qhdkit/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>

namespace qhdkit {

std::string source_name(InstanceSource s) {
    switch (s) {
        case InstanceSource::BuiltinNlp: return "builtin-nlp";
        case InstanceSource::BuiltinDemo: return "builtin-demo";
        case InstanceSource::GeneratedExp: return "generated-exp";
        case InstanceSource::GeneratedQp: return "generated-qp";
        case InstanceSource::UserFile: return "user-file";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Instance library
// ---------------------------------------------------------------------------

namespace {

InstanceSpec nlp_instance(const std::string& id, const std::string& text,
                          const std::vector<std::string>& vars, double f_star) {
    InstanceSpec spec;
    spec.id = id;
    spec.source = InstanceSource::BuiltinNlp;
    spec.problem = from_expr(parse(text, vars), BoxBounds::unit(static_cast<int>(vars.size())));
    spec.f_star = f_star;
    spec.f_star_provenance = "reference";
    return spec;
}

}  // namespace

std::vector<InstanceSpec> builtin_instances() {
    std::vector<InstanceSpec> out;
    out.push_back(nlp_instance("nlp1", "-4*x^2 + 3*x*y - 2*y^2 + 3*x - y", {"x", "y"}, -3.0));
    out.push_back(nlp_instance(
        "nlp2",
        "-2*(x - 1/3)^2 + y^2 - (1/3)*y*log(3*x + 1/2) + 5*(x^2 - y^2 - x - 1/2)^2",
        {"x", "y"}, 0.354));
    out.push_back(nlp_instance("nlp3", "y^1.5 - exp(4*x)*(y - 0.75)", {"x", "y"}, -12.650));
    out.push_back(nlp_instance(
        "nlp4", "(2*y - 1)^2*(z - 2/5) - (2*x - 1)*z + y*(2*x - 3/2)^2", {"x", "y", "z"},
        -0.882));
    out.push_back(nlp_instance(
        "nlp5",
        "2*exp(-x)*(2*z - 1)^2 - 3*(2*y - 7/10)^2*exp(-z) + log(x + 1)*(y - 4/5)",
        {"x", "y", "z"}, -4.196));

    {
        InstanceSpec qp;
        qp.id = "demo-qp";
        qp.source = InstanceSource::BuiltinDemo;
        QPData data;
        data.Q = {{-2.0, 1.0}, {1.0, -1.0}};
        data.b = {0.75, -0.25};
        qp.problem = from_qp(data, BoxBounds::unit(2));
        qp.f_star = -0.75;  // concave quadratic; best corner is (0,1)
        qp.f_star_provenance = "analytic";
        out.push_back(std::move(qp));
    }
    {
        InstanceSpec ex;
        ex.id = "demo-exp";
        ex.source = InstanceSource::BuiltinDemo;
        ex.problem = from_expr(parse("y^1.5 - exp(4*x)*(y - 0.75)", {"x", "y"}),
                               BoxBounds::unit(2));
        ex.f_star = -12.650;
        ex.f_star_provenance = "reference";
        out.push_back(std::move(ex));
    }
    return out;
}

InstanceSpec builtin_instance(const std::string& id) {
    for (auto& spec : builtin_instances())
        if (spec.id == id) return spec;
    throw BenchError("unknown builtin instance '" + id + "'");
}

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

namespace {

double unif(std::mt19937_64& rng, double lo, double hi) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
}

struct RandomQp {
    std::vector<std::vector<double>> Q;
    std::vector<double> b;
};

// Draw order is fixed: diagonal entries first (row order), then the upper
// triangle row-major (keep decision, then value), then b.
RandomQp random_sparse_qp(int dim, double sparsity, std::uint64_t seed) {
    if (dim < 2) throw BenchError("generated instances need at least 2 variables");
    if (!(sparsity > 0.0 && sparsity <= 1.0)) throw BenchError("sparsity must be in (0,1]");
    std::mt19937_64 rng(seed);
    RandomQp out;
    out.Q.assign(static_cast<std::size_t>(dim), std::vector<double>(static_cast<std::size_t>(dim), 0.0));
    for (int i = 0; i < dim; ++i)
        out.Q[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = unif(rng, -1.0, 1.0);
    for (int i = 0; i < dim; ++i)
        for (int j = i + 1; j < dim; ++j) {
            const bool keep = unif(rng, 0.0, 1.0) < sparsity;
            const double v = keep ? unif(rng, -1.0, 1.0) : 0.0;
            if (keep) {
                out.Q[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = v;
                out.Q[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = v;
            }
        }
    out.b.resize(static_cast<std::size_t>(dim));
    for (int i = 0; i < dim; ++i) out.b[static_cast<std::size_t>(i)] = unif(rng, -1.0, 1.0);
    return out;
}

}  // namespace

void generated_matrices(int dim, double sparsity, std::uint64_t seed,
                        std::vector<std::vector<double>>& Q, std::vector<double>& b) {
    const RandomQp qp = random_sparse_qp(dim, sparsity, seed);
    Q = qp.Q;
    b = qp.b;
}

namespace {

double multistart_fstar(const Problem& p, int starts, std::uint64_t seed) {
    ObjectiveEvaluator f(p.objective);
    RefineConfig cfg;
    cfg.tol = 1e-12;
    cfg.max_iters = 2000;
    std::mt19937_64 rng(seed ^ 0x517cc1b727220a95ULL);
    double best = std::numeric_limits<double>::infinity();
    std::vector<double> x0(static_cast<std::size_t>(p.dimension()));
    for (int s = 0; s < starts; ++s) {
        for (auto& xi : x0) xi = unif(rng, 0.0, 1.0);
        const auto res = refine(f, x0, cfg);
        best = std::min(best, res.f);
    }
    return best;
}

}  // namespace

InstanceSpec generate_exp_instance(int dim, double sparsity, std::uint64_t seed,
                                   int fstar_starts) {
    const RandomQp qp = random_sparse_qp(dim, sparsity, seed);

    SeparableObjective obj;
    obj.n = dim;
    for (int i = 0; i < dim; ++i) {
        Expr xi = Expr::variable(i);
        // b_i e^{-x_i} + (Q_ii/2) e^{2 x_i}
        Expr g = Expr::constant(qp.b[static_cast<std::size_t>(i)]) * Expr::exp(-xi) +
                 Expr::constant(0.5 * qp.Q[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)]) *
                     Expr::exp(Expr::constant(2.0) * xi);
        if (!(g.is_constant() && g.constant_value() == 0.0)) obj.univariate.push_back({i, g});
    }
    for (int i = 0; i < dim; ++i)
        for (int j = i + 1; j < dim; ++j) {
            const double qij = qp.Q[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            if (qij == 0.0) continue;
            SeparableObjective::Bivariate bv;
            bv.var_a = i;
            bv.var_b = j;
            bv.p = Expr::constant(qij) * Expr::exp(Expr::variable(i));
            bv.q = Expr::exp(Expr::variable(j));
            obj.bivariate.push_back(std::move(bv));
        }

    InstanceSpec spec;
    spec.id = "exp-d" + std::to_string(dim) + "-s" + std::to_string(seed);
    spec.source = InstanceSource::GeneratedExp;
    spec.problem.objective = std::move(obj);
    spec.problem.bounds = BoxBounds::unit(dim);
    spec.problem.to_original.assign(static_cast<std::size_t>(dim), AffineMap{});
    if (fstar_starts > 0) {
        spec.f_star = multistart_fstar(spec.problem, fstar_starts, seed);
        spec.f_star_provenance = "multistart";
    }
    return spec;
}

InstanceSpec generate_qp_instance(int dim, double sparsity, std::uint64_t seed,
                                  int fstar_starts) {
    const RandomQp qp = random_sparse_qp(dim, sparsity, seed);
    QPData data;
    data.Q = qp.Q;
    data.b = qp.b;

    InstanceSpec spec;
    spec.id = "qp-d" + std::to_string(dim) + "-s" + std::to_string(seed);
    spec.source = InstanceSource::GeneratedQp;
    spec.problem = from_qp(data, BoxBounds::unit(dim));
    if (fstar_starts > 0) {
        spec.f_star = multistart_fstar(spec.problem, fstar_starts, seed);
        spec.f_star_provenance = "multistart";
    }
    return spec;
}

// ---------------------------------------------------------------------------
// Metrics
// ---------------------------------------------------------------------------

double success_probability(const std::vector<double>& refined_f, double f_star, double tol) {
    if (refined_f.empty()) throw BenchError("success probability is undefined without samples");
    std::size_t hits = 0;
    for (double f : refined_f)
        if (f - f_star < tol) ++hits;
    return static_cast<double>(hits) / static_cast<double>(refined_f.size());
}

double tts(double t0_seconds, double p_s) {
    if (!(t0_seconds > 0.0)) throw BenchError("t0 must be positive");
    if (p_s < 0.0 || p_s > 1.0) throw BenchError("success probability must lie in [0,1]");
    if (p_s >= 0.99) return t0_seconds;
    if (p_s == 0.0) return std::numeric_limits<double>::infinity();
    const double repeats = std::ceil(std::log(0.01) / std::log1p(-p_s));
    return t0_seconds * repeats;
}

double median(std::vector<double> values) {
    if (values.empty()) throw BenchError("median of an empty set");
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

int PipelineConfig::effective_grid(Scheme s) const {
    if (backend == Backend::Direct) return grid_points;
    return s == Scheme::OneHot ? resolution : resolution + 1;
}

// ---------------------------------------------------------------------------
// Pipeline
// ---------------------------------------------------------------------------

namespace {

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point t0) {
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

}  // namespace

RunReport run_instance(const InstanceSpec& spec, const PipelineConfig& cfg) {
    if (cfg.shots < 1)
        throw BenchError("shots must be at least 1; success probability is undefined otherwise");

    const Problem p = normalize_to_unit_box(spec.problem);
    const int N = cfg.effective_grid(cfg.scheme);
    const DiscretizedHamiltonian dh = assemble_discretized(p, N);

    EvolveConfig ecfg;
    ecfg.steps = cfg.steps;
    ecfg.shots = cfg.shots;
    ecfg.seed = cfg.seed;
    ecfg.exec = cfg.exec;
    const Schedule schedule = cfg.schedule();

    RunReport report;
    report.instance_id = spec.id;
    report.mode = "quantum";
    report.config = cfg;
    report.f_star = spec.f_star;

    auto t_start = clock_type::now();
    StateVector psi;
    std::optional<CodewordMap> map;
    if (cfg.backend == Backend::Direct) {
        psi = evolve(dh, schedule, ecfg);
    } else {
        const HamiltonianIR ir = assemble_embedding(dh, cfg.scheme);
        map.emplace(cfg.scheme, ir.r);
        psi = evolve(ir, schedule, ecfg);
    }
    report.timings.evolve_seconds = seconds_since(t_start);

    const auto outcomes = sample(psi, cfg.shots, cfg.seed);

    // decode
    t_start = clock_type::now();
    report.samples.reserve(outcomes.size());
    std::size_t rejected = 0;
    for (const auto idx : outcomes) {
        SampleRecord rec;
        rec.outcome = idx;
        if (cfg.backend == Backend::Direct) {
            const auto multi = outcome_multi_index(idx, dh.n, N);
            rec.accepted = true;
            rec.decoded.reserve(multi.size());
            for (int k : multi) rec.decoded.push_back(dh.grid.node(k));
        } else {
            rec.bitstring = outcome_bitstring(idx, psi.basis.n_qubits);
            const Decoded dec = decode(rec.bitstring, *map, cfg.policy);
            rec.accepted = dec.accepted;
            rec.decoded = dec.coords;
            if (!dec.accepted) ++rejected;
        }
        report.samples.push_back(std::move(rec));
    }
    report.timings.decode_seconds = seconds_since(t_start);
    report.rejection_rate =
        static_cast<double>(rejected) / static_cast<double>(outcomes.size());

    // refine; samples are independent, so this is the parallel axis
    const ObjectiveEvaluator f(p.objective);
    t_start = clock_type::now();
    const std::int64_t total = static_cast<std::int64_t>(report.samples.size());
#pragma omp parallel for schedule(dynamic, 16) if (cfg.exec == kernels::Exec::Parallel)
    for (std::int64_t s = 0; s < total; ++s) {
        auto& rec = report.samples[static_cast<std::size_t>(s)];
        if (!rec.accepted) continue;
        try {
            const auto res = refine(f, rec.decoded, cfg.refine);
            rec.refined_x = res.x;
            rec.refined_f = res.f;
            rec.refine_iterations = res.iterations;
            rec.refine_converged = res.converged;
        } catch (const DomainError&) {
            // objective undefined at the decoded point; keep the sample but
            // exclude it from scoring
            rec.refined_x = rec.decoded;
            rec.refined_f = std::numeric_limits<double>::quiet_NaN();
            rec.refine_converged = false;
        }
    }
    std::vector<double> refined_values;
    std::size_t refined_count = 0;
    for (const auto& rec : report.samples) {
        if (!rec.accepted || std::isnan(rec.refined_f)) continue;
        refined_values.push_back(rec.refined_f);
        ++refined_count;
    }
    report.timings.refine_seconds_total = seconds_since(t_start);
    report.timings.refine_seconds_mean =
        refined_count ? report.timings.refine_seconds_total / static_cast<double>(refined_count)
                      : 0.0;

    if (refined_values.empty())
        throw BenchError("every sample was rejected; nothing to refine");

    // best refined solution; exact-tie handling keeps the earliest sample
    report.best_f = std::numeric_limits<double>::infinity();
    for (const auto& rec : report.samples) {
        if (!rec.accepted) continue;
        if (rec.refined_f < report.best_f - 1e-12) {
            report.best_f = rec.refined_f;
            report.best_x = rec.refined_x;
        }
    }
    report.best_x_original = p.unnormalize(report.best_x);

    if (spec.f_star) {
        const double ps = success_probability(refined_values, *spec.f_star);
        report.p_s = ps;
        for (auto& rec : report.samples)
            if (rec.accepted) rec.success = (rec.refined_f - *spec.f_star < 1e-3);
    }

    // per-shot cost of the simulated pipeline; not comparable to hardware
    // access times
    report.timings.t0_seconds =
        report.timings.evolve_seconds / static_cast<double>(cfg.shots) +
        report.timings.refine_seconds_mean;
    report.timings.tts_seconds =
        report.p_s ? tts(report.timings.t0_seconds, *report.p_s)
                   : std::numeric_limits<double>::quiet_NaN();
    return report;
}

RunReport run_baseline(const InstanceSpec& spec, int starts, std::uint64_t seed,
                       const RefineConfig& refine_cfg, kernels::Exec exec) {
    if (starts < 1) throw BenchError("baseline needs at least one start");
    const Problem p = normalize_to_unit_box(spec.problem);
    const ObjectiveEvaluator f(p.objective);

    RunReport report;
    report.instance_id = spec.id;
    report.mode = "baseline";
    report.config.backend = Backend::Direct;
    report.config.shots = starts;
    report.config.seed = seed;
    report.config.refine = refine_cfg;
    report.config.exec = exec;
    report.f_star = spec.f_star;

    // start points drawn sequentially so the seed fixes them; refinement
    // itself runs on the parallel axis
    std::mt19937_64 rng(seed);
    for (int s = 0; s < starts; ++s) {
        SampleRecord rec;
        rec.outcome = static_cast<std::uint64_t>(s);
        rec.accepted = true;
        rec.decoded.resize(static_cast<std::size_t>(p.dimension()));
        for (auto& xi : rec.decoded) xi = unif(rng, 0.0, 1.0);
        report.samples.push_back(std::move(rec));
    }
    const auto t_start = clock_type::now();
    const std::int64_t total = static_cast<std::int64_t>(report.samples.size());
#pragma omp parallel for schedule(dynamic, 16) if (exec == kernels::Exec::Parallel)
    for (std::int64_t s = 0; s < total; ++s) {
        auto& rec = report.samples[static_cast<std::size_t>(s)];
        const auto res = refine(f, rec.decoded, refine_cfg);
        rec.refined_x = res.x;
        rec.refined_f = res.f;
        rec.refine_iterations = res.iterations;
        rec.refine_converged = res.converged;
    }
    std::vector<double> refined_values;
    for (const auto& rec : report.samples) refined_values.push_back(rec.refined_f);
    report.timings.refine_seconds_total = seconds_since(t_start);
    report.timings.refine_seconds_mean =
        report.timings.refine_seconds_total / static_cast<double>(starts);

    report.best_f = std::numeric_limits<double>::infinity();
    for (const auto& rec : report.samples) {
        if (rec.refined_f < report.best_f - 1e-12) {
            report.best_f = rec.refined_f;
            report.best_x = rec.refined_x;
        }
    }
    report.best_x_original = p.unnormalize(report.best_x);

    if (spec.f_star) {
        report.p_s = success_probability(refined_values, *spec.f_star);
        for (auto& rec : report.samples)
            rec.success = (rec.refined_f - *spec.f_star < 1e-3);
    }
    report.timings.t0_seconds = report.timings.refine_seconds_mean;
    report.timings.tts_seconds =
        report.p_s ? tts(report.timings.t0_seconds, *report.p_s)
                   : std::numeric_limits<double>::quiet_NaN();
    return report;
}

WarmstartReport warmstart_comparison(const InstanceSpec& spec, const PipelineConfig& cfg) {
    const RunReport quantum = run_instance(spec, cfg);
    const Problem p = normalize_to_unit_box(spec.problem);
    const ObjectiveEvaluator f(p.objective);

    WarmstartReport out;
    out.instance_id = spec.id;

    std::mt19937_64 rng(cfg.seed ^ 0xa0761d6478bd642fULL);
    std::vector<double> x(static_cast<std::size_t>(p.dimension()));
    for (int s = 0; s < cfg.shots; ++s) {
        for (auto& xi : x) xi = unif(rng, 0.0, 1.0);
        out.random_f.push_back(f.value(x));
    }
    for (const auto& rec : quantum.samples) {
        if (!rec.accepted) continue;
        out.decoded_f.push_back(f.value(rec.decoded));
        out.refined_f.push_back(rec.refined_f);
    }
    if (out.decoded_f.empty()) throw BenchError("no accepted samples to compare");

    out.median_random = median(out.random_f);
    out.median_decoded = median(out.decoded_f);
    out.median_refined = median(out.refined_f);
    return out;
}

}  // namespace qhdkit
