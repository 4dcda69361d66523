// Command-line front end: solve / bench / embed / export-annealer / compare.

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "qhdkit/bench.hpp"
#include "qhdkit/json_io.hpp"

using namespace qhdkit;

namespace {

struct CommonOpts {
    std::string input;
    std::string backend = "embedded";
    std::string scheme = "unary";
    int resolution = 5;
    int grid = 17;
    double gamma = 1.0;
    double total_time = 10.0;
    int steps = 400;
    int shots = 1000;
    std::uint64_t seed = 0;
    std::string refine = "pg";
    std::string policy = "lenient";
};

void add_pipeline_options(CLI::App* cmd, CommonOpts& o, bool with_input = true,
                          bool with_backend = true) {
    if (with_input)
        cmd->add_option("--input", o.input, "problem JSON file, or builtin:<id>")->required();
    if (with_backend)
        cmd->add_option("--backend", o.backend, "direct|embedded")
            ->check(CLI::IsMember({"direct", "embedded"}));
    cmd->add_option("--scheme", o.scheme, "unary|onehot|hamming")
        ->check(CLI::IsMember({"unary", "onehot", "hamming"}));
    cmd->add_option("--resolution", o.resolution, "sites per variable (embedded)");
    cmd->add_option("--grid", o.grid, "grid points per dimension (direct)");
    cmd->add_option("--gamma", o.gamma, "schedule growth rate");
    cmd->add_option("--time", o.total_time, "total evolution time");
    cmd->add_option("--steps", o.steps, "integrator steps");
    cmd->add_option("--shots", o.shots, "measurement shots");
    cmd->add_option("--seed", o.seed, "RNG seed (QHDKIT_SEED overrides)");
    cmd->add_option("--refine", o.refine, "pg|tn")->check(CLI::IsMember({"pg", "tn"}));
    cmd->add_option("--policy", o.policy, "strict|lenient")
        ->check(CLI::IsMember({"strict", "lenient"}));
}

PipelineConfig to_config(const CommonOpts& o) {
    PipelineConfig cfg;
    cfg.backend = o.backend == "direct" ? Backend::Direct : Backend::Embedded;
    cfg.scheme = scheme_from_name(o.scheme);
    cfg.resolution = o.resolution;
    cfg.grid_points = o.grid;
    cfg.gamma = o.gamma;
    cfg.total_time = o.total_time;
    cfg.steps = o.steps;
    cfg.shots = o.shots;
    cfg.seed = o.seed;
    cfg.policy = o.policy == "strict" ? DecodePolicy::Strict : DecodePolicy::Lenient;
    cfg.refine.method = o.refine == "tn" ? RefineMethod::TruncatedNewton
                                         : RefineMethod::ProjectedGradient;
    if (const char* env = std::getenv("QHDKIT_SEED")) cfg.seed = std::strtoull(env, nullptr, 10);
    return cfg;
}

InstanceSpec load_instance(const std::string& input) {
    if (input.rfind("builtin:", 0) == 0) return builtin_instance(input.substr(8));
    InstanceSpec spec;
    spec.id = std::filesystem::path(input).stem().string();
    spec.source = InstanceSource::UserFile;
    spec.problem = problem_from_file(input);
    return spec;
}

std::string csv_path_for(const std::string& json_path) {
    std::filesystem::path p(json_path);
    p.replace_extension(".csv");
    return p.string();
}

HamiltonianIR build_ir(const InstanceSpec& spec, const PipelineConfig& cfg) {
    const Problem p = normalize_to_unit_box(spec.problem);
    const DiscretizedHamiltonian dh = assemble_discretized(p, cfg.effective_grid(cfg.scheme));
    return assemble_embedding(dh, cfg.scheme);
}

int cmd_solve(const CommonOpts& o, const std::string& out) {
    const InstanceSpec spec = load_instance(o.input);
    const PipelineConfig cfg = to_config(o);
    const RunReport report = run_instance(spec, cfg);
    write_report_json(report, out);
    write_report_csv(report, csv_path_for(out));
    std::cout << "instance " << report.instance_id << ": best f = " << report.best_f;
    if (report.p_s) std::cout << ", p_s = " << *report.p_s;
    std::cout << "\nreport written to " << out << "\n";
    return 0;
}

int cmd_bench(const std::string& suite, const std::string& outdir, const CommonOpts& o,
              int dim, double sparsity, int count) {
    std::filesystem::create_directories(outdir);
    std::vector<InstanceSpec> specs;
    if (suite == "builtin") {
        specs = builtin_instances();
    } else {
        for (int s = 0; s < count; ++s)
            specs.push_back(
                generate_exp_instance(dim, sparsity, o.seed + static_cast<std::uint64_t>(s)));
    }

    for (const auto& spec : specs) {
        CommonOpts direct = o;
        direct.backend = "direct";
        const RunReport dreport = run_instance(spec, to_config(direct));
        write_report_json(dreport, outdir + "/" + spec.id + ".direct.report.json");
        write_report_csv(dreport, outdir + "/" + spec.id + ".direct.report.csv");
        std::cout << spec.id << " [direct]   best f = " << dreport.best_f;
        if (dreport.p_s) std::cout << ", p_s = " << *dreport.p_s;
        std::cout << "\n";

        if (spec.problem.dimension() == 2) {
            CommonOpts embedded = o;
            embedded.backend = "embedded";
            const RunReport ereport = run_instance(spec, to_config(embedded));
            write_report_json(ereport, outdir + "/" + spec.id + ".embedded.report.json");
            write_report_csv(ereport, outdir + "/" + spec.id + ".embedded.report.csv");
            std::cout << spec.id << " [embedded] best f = " << ereport.best_f;
            if (ereport.p_s) std::cout << ", p_s = " << *ereport.p_s;
            std::cout << "\n";
        }
    }
    write_bench_readme(outdir);
    std::cout << "wrote " << outdir << "/README.md\n";
    return 0;
}

int cmd_embed(const CommonOpts& o, const std::string& dump) {
    const InstanceSpec spec = load_instance(o.input);
    PipelineConfig cfg = to_config(o);
    cfg.backend = Backend::Embedded;
    const HamiltonianIR ir = build_ir(spec, cfg);
    std::ofstream out(dump);
    if (!out) throw Error("cannot open " + dump + " for writing");
    out << ir_to_json(ir) << "\n";
    std::cout << "IR with " << ir.num_qubits << " sites written to " << dump << "\n";
    return 0;
}

int cmd_export(const CommonOpts& o, const std::string& out_path, double anneal_us) {
    const InstanceSpec spec = load_instance(o.input);
    PipelineConfig cfg = to_config(o);
    cfg.backend = Backend::Embedded;
    const HamiltonianIR ir = build_ir(spec, cfg);
    std::ofstream out(out_path);
    if (!out) throw Error("cannot open " + out_path + " for writing");
    out << export_annealer(ir, cfg.schedule(), anneal_us) << "\n";
    std::cout << "annealer document written to " << out_path << "\n";
    return 0;
}

int cmd_compare(const CommonOpts& o, const std::string& out_path) {
    const InstanceSpec spec = load_instance(o.input);
    const PipelineConfig cfg = to_config(o);
    const WarmstartReport report = warmstart_comparison(spec, cfg);
    std::ofstream out(out_path);
    if (!out) throw Error("cannot open " + out_path + " for writing");
    out << warmstart_to_json(report) << "\n";
    std::cout << "medians: random " << report.median_random << ", decoded "
              << report.median_decoded << ", refined " << report.median_refined << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"box-constrained nonlinear optimization via simulated quantum dynamics"};
    app.require_subcommand(1);

    CommonOpts solve_opts;
    std::string solve_out = "report.json";
    auto* solve = app.add_subcommand("solve", "run the full pipeline on one problem");
    add_pipeline_options(solve, solve_opts);
    solve->add_option("--out", solve_out, "report JSON path (CSV written alongside)");

    CommonOpts bench_opts;
    std::string bench_suite = "builtin";
    std::string bench_out = "bench-out";
    int bench_dim = 3;
    double bench_sparsity = 0.5;
    int bench_count = 3;
    auto* bench = app.add_subcommand("bench", "run an instance suite and emit reports");
    bench->add_option("--suite", bench_suite, "builtin|exp")
        ->check(CLI::IsMember({"builtin", "exp"}));
    bench->add_option("--out", bench_out, "output directory");
    bench->add_option("--dim", bench_dim, "generated-instance dimension");
    bench->add_option("--sparsity", bench_sparsity, "generated off-diagonal fill");
    bench->add_option("--count", bench_count, "number of generated instances");
    add_pipeline_options(bench, bench_opts, /*with_input=*/false, /*with_backend=*/false);

    CommonOpts embed_opts;
    std::string embed_dump = "ir.json";
    auto* embed = app.add_subcommand("embed", "dump the qubit-level IR");
    add_pipeline_options(embed, embed_opts, true, /*with_backend=*/false);
    embed->add_option("--dump", embed_dump, "IR JSON path");

    CommonOpts export_opts;
    std::string export_out = "anneal.json";
    double anneal_us = 20.0;
    auto* exporter =
        app.add_subcommand("export-annealer", "emit the two-local annealer document");
    add_pipeline_options(exporter, export_opts, true, /*with_backend=*/false);
    exporter->add_option("--out", export_out, "annealer JSON path");
    exporter->add_option("--anneal-time-us", anneal_us, "annealing time in microseconds");

    CommonOpts compare_opts;
    std::string compare_out = "compare.json";
    auto* compare = app.add_subcommand(
        "compare", "warm-start quality comparison (random vs decoded vs refined)");
    add_pipeline_options(compare, compare_opts);
    compare->add_option("--out", compare_out, "comparison JSON path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed()) return cmd_solve(solve_opts, solve_out);
        if (bench->parsed())
            return cmd_bench(bench_suite, bench_out, bench_opts, bench_dim, bench_sparsity,
                             bench_count);
        if (embed->parsed()) return cmd_embed(embed_opts, embed_dump);
        if (exporter->parsed()) return cmd_export(export_opts, export_out, anneal_us);
        if (compare->parsed()) return cmd_compare(compare_opts, compare_out);
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    }
    return 0;
}
