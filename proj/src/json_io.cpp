#include "qhdkit/json_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace qhdkit {

using nlohmann::json;

namespace {

BoxBounds bounds_from_json(const json& doc, int n) {
    if (!doc.contains("bounds")) return BoxBounds::unit(n);
    BoxBounds b;
    for (const auto& iv : doc.at("bounds"))
        b.intervals.push_back({iv.at(0).get<double>(), iv.at(1).get<double>()});
    b.validate();
    return b;
}

}  // namespace

Problem problem_from_json(const std::string& text) {
    json doc = json::parse(text);
    if (doc.contains("Q")) {
        QPData qp;
        qp.Q = doc.at("Q").get<std::vector<std::vector<double>>>();
        qp.b = doc.at("b").get<std::vector<double>>();
        return from_qp(qp, bounds_from_json(doc, qp.size()));
    }
    if (doc.contains("expr")) {
        const auto vars = doc.at("vars").get<std::vector<std::string>>();
        const Expr e = parse(doc.at("expr").get<std::string>(), vars);
        return from_expr(e, static_cast<int>(vars.size()),
                         bounds_from_json(doc, static_cast<int>(vars.size())));
    }
    throw Error("problem JSON must contain either \"Q\"/\"b\" or \"vars\"/\"expr\"");
}

Problem problem_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return problem_from_json(ss.str());
}

namespace {

json config_to_json(const PipelineConfig& cfg) {
    return json{{"backend", cfg.backend == Backend::Direct ? "direct" : "embedded"},
                {"scheme", scheme_name(cfg.scheme)},
                {"resolution", cfg.resolution},
                {"grid", cfg.grid_points},
                {"gamma", cfg.gamma},
                {"time", cfg.total_time},
                {"steps", cfg.steps},
                {"shots", cfg.shots},
                {"seed", cfg.seed},
                {"policy", cfg.policy == DecodePolicy::Strict ? "strict" : "lenient"},
                {"refine",
                 cfg.refine.method == RefineMethod::ProjectedGradient ? "pg" : "tn"}};
}

json coords_to_json(const std::vector<double>& v) {
    json arr = json::array();
    for (double x : v) arr.push_back(x);
    return arr;
}

}  // namespace

std::string report_to_json(const RunReport& report) {
    json samples = json::array();
    for (const auto& rec : report.samples) {
        json s;
        if (!rec.bitstring.empty())
            s["bitstring"] = rec.bitstring;
        else
            s["outcome"] = rec.outcome;
        s["accepted"] = rec.accepted;
        if (rec.accepted) {
            s["decoded"] = coords_to_json(rec.decoded);
            s["refined"] = coords_to_json(rec.refined_x);
            s["f"] = rec.refined_f;
            s["iterations"] = rec.refine_iterations;
            s["converged"] = rec.refine_converged;
            s["success"] = rec.success;
        }
        samples.push_back(std::move(s));
    }

    json canonical;
    canonical["instance"] = report.instance_id;
    canonical["mode"] = report.mode;
    canonical["config"] = config_to_json(report.config);
    canonical["samples"] = std::move(samples);
    canonical["rejection_rate"] = report.rejection_rate;
    if (report.p_s) canonical["p_s"] = *report.p_s;
    if (report.f_star) canonical["f_star"] = *report.f_star;
    canonical["best_f"] = report.best_f;
    canonical["best_x"] = coords_to_json(report.best_x);
    canonical["best_x_original"] = coords_to_json(report.best_x_original);

    json timing;
    timing["t0_semantics"] = "simulated";  // wall time, not hardware access time
    timing["evolve_seconds"] = report.timings.evolve_seconds;
    timing["decode_seconds"] = report.timings.decode_seconds;
    timing["refine_seconds_total"] = report.timings.refine_seconds_total;
    timing["refine_seconds_mean"] = report.timings.refine_seconds_mean;
    timing["t0_seconds"] = report.timings.t0_seconds;
    if (report.p_s) {
        if (std::isinf(report.timings.tts_seconds))
            timing["tts_seconds"] = "inf";
        else
            timing["tts_seconds"] = report.timings.tts_seconds;
    }

    json doc;
    doc["canonical"] = std::move(canonical);
    doc["timing"] = std::move(timing);
    return doc.dump(2);
}

void write_report_json(const RunReport& report, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path + " for writing");
    out << report_to_json(report) << "\n";
}

std::string report_to_csv(const RunReport& report) {
    const int n = report.best_x.empty() ? 0 : static_cast<int>(report.best_x.size());
    std::ostringstream os;
    os.precision(17);
    os << "sample,outcome";
    for (int i = 0; i < n; ++i) os << ",decoded_" << i;
    for (int i = 0; i < n; ++i) os << ",refined_" << i;
    os << ",f,success\n";
    for (std::size_t s = 0; s < report.samples.size(); ++s) {
        const auto& rec = report.samples[s];
        os << s << ",";
        os << (rec.bitstring.empty() ? std::to_string(rec.outcome) : rec.bitstring);
        if (rec.accepted) {
            for (double v : rec.decoded) os << "," << v;
            for (double v : rec.refined_x) os << "," << v;
            os << "," << rec.refined_f << "," << (rec.success ? 1 : 0);
        } else {
            for (int i = 0; i < 2 * n; ++i) os << ",";
            os << ",,0";
        }
        os << "\n";
    }
    return os.str();
}

void write_report_csv(const RunReport& report, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path + " for writing");
    out << report_to_csv(report);
}

std::string warmstart_to_json(const WarmstartReport& report) {
    json doc;
    doc["instance"] = report.instance_id;
    doc["random_f"] = coords_to_json(report.random_f);
    doc["decoded_f"] = coords_to_json(report.decoded_f);
    doc["refined_f"] = coords_to_json(report.refined_f);
    doc["median_random"] = report.median_random;
    doc["median_decoded"] = report.median_decoded;
    doc["median_refined"] = report.median_refined;
    return doc.dump(2);
}

std::string bench_readme_text() {
    return
        "# Benchmark output\n"
        "\n"
        "This directory was produced by `qhdkit bench`. Each instance yields a\n"
        "`<id>.report.json` / `<id>.report.csv` pair; the JSON `canonical`\n"
        "section is byte-stable for a fixed seed, while `timing` carries\n"
        "wall-clock readings from this machine.\n"
        "\n"
        "## Scope of the desk-scale suite\n"
        "\n"
        "All runs here use the built-in state-vector simulator. Per-shot cost\n"
        "(`t0`) is simulated wall time, so time-to-solution figures are NOT\n"
        "comparable to numbers measured on annealing or trapped-ion hardware,\n"
        "where t0 is dominated by device access time.\n"
        "\n"
        "The 50-variable instances of the exponential family are NOT\n"
        "reproduced here and cannot be: with the unary encoding at r = 8 they\n"
        "would require a state vector of dimension 2^400, far beyond any\n"
        "classical simulation. The suite instead covers the small instances\n"
        "exactly and verifies the embedding, decoding, and metric machinery\n"
        "by construction-level identities; results on the large instances\n"
        "require real quantum hardware via the annealer export.\n";
}

void write_bench_readme(const std::string& dir) {
    std::ofstream out(dir + "/README.md");
    if (!out) throw Error("cannot open " + dir + "/README.md for writing");
    out << bench_readme_text();
}

}  // namespace qhdkit
