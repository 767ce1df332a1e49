#include "cli.hpp"

#include "l1tucker/error.hpp"
#include "l1tucker/harness/idx.hpp"
#include "l1tucker/lt1_io.hpp"
#include "l1tucker/model_io.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>

namespace l1tucker::cli {

using nlohmann::json;

namespace {

std::string fmt(double v) { return harness::format_number(v); }

/// Reads fields of one JSON object and rejects keys nobody asked for.
class ObjectReader {
public:
    ObjectReader(const json& j, std::string context) : j_(j), context_(std::move(context)) {
        if (!j_.is_object()) throw FormatError(context_ + ": expected a JSON object");
    }

    [[nodiscard]] bool has(const std::string& key) const { return j_.contains(key); }

    const json* field(const std::string& key) {
        seen_.insert(key);
        auto it = j_.find(key);
        return it == j_.end() ? nullptr : &*it;
    }

    void get(const std::string& key, double& out) {
        if (const json* v = field(key)) {
            if (!v->is_number()) bad(key, "a number");
            out = v->get<double>();
        }
    }
    void get(const std::string& key, std::size_t& out) {
        if (const json* v = field(key)) {
            if (!v->is_number_unsigned()) bad(key, "a non-negative integer");
            out = v->get<std::size_t>();
        }
    }
    void get(const std::string& key, int& out) {
        if (const json* v = field(key)) {
            if (!v->is_number_integer()) bad(key, "an integer");
            out = v->get<int>();
        }
    }
    void get(const std::string& key, std::string& out) {
        if (const json* v = field(key)) {
            if (!v->is_string()) bad(key, "a string");
            out = v->get<std::string>();
        }
    }
    void get(const std::string& key, std::vector<std::size_t>& out) {
        if (const json* v = field(key)) {
            if (!v->is_array()) bad(key, "an array of non-negative integers");
            out.clear();
            for (const json& e : *v) {
                if (!e.is_number_unsigned()) bad(key, "an array of non-negative integers");
                out.push_back(e.get<std::size_t>());
            }
        }
    }
    void get(const std::string& key, std::vector<double>& out) {
        if (const json* v = field(key)) {
            if (!v->is_array()) bad(key, "an array of numbers");
            out.clear();
            for (const json& e : *v) {
                if (!e.is_number()) bad(key, "an array of numbers");
                out.push_back(e.get<double>());
            }
        }
    }
    void get(const std::string& key, std::vector<std::string>& out) {
        if (const json* v = field(key)) {
            if (!v->is_array()) bad(key, "an array of strings");
            out.clear();
            for (const json& e : *v) {
                if (!e.is_string()) bad(key, "an array of strings");
                out.push_back(e.get<std::string>());
            }
        }
    }

    [[nodiscard]] std::string path(const std::string& key) const { return context_ + "." + key; }

    void finish() const {
        for (const auto& [key, value] : j_.items()) {
            if (!seen_.contains(key)) throw FormatError(context_ + ": unknown key '" + key + "'");
        }
    }

private:
    [[noreturn]] void bad(const std::string& key, const char* expected) const {
        throw FormatError(path(key) + ": expected " + expected);
    }

    const json& j_;
    std::string context_;
    std::set<std::string> seen_;
};

std::string init_name(TuckerInit init) {
    switch (init) {
        case TuckerInit::Auto: return "auto";
        case TuckerInit::Hosvd: return "hosvd";
        case TuckerInit::L1Hosvd: return "l1-hosvd";
        case TuckerInit::Random: return "random";
    }
    return "auto";
}

TuckerInit parse_init(const std::string& name) {
    if (name == "auto") return TuckerInit::Auto;
    if (name == "hosvd") return TuckerInit::Hosvd;
    if (name == "l1-hosvd") return TuckerInit::L1Hosvd;
    if (name == "random") return TuckerInit::Random;
    throw ArgumentError("unknown init '" + name + "' (expected auto, hosvd, l1-hosvd or random)");
}

HooiConfig parse_solver_config(const json& j, const std::string& context) {
    HooiConfig cfg;
    ObjectReader r(j, context);
    r.get("tol", cfg.tol);
    r.get("max_outer_iters", cfg.max_outer_iters);
    std::string init = init_name(cfg.init);
    r.get("init", init);
    cfg.init = parse_init(init);
    r.get("seed", cfg.seed);
    if (const json* inner = r.field("inner")) {
        ObjectReader ir(*inner, r.path("inner"));
        ir.get("tol", cfg.inner.tol);
        if (ir.has("max_iters")) {
            int iters = 0;
            ir.get("max_iters", iters);
            cfg.inner.max_iters = iters;
        }
        ir.finish();
    }
    r.finish();
    cfg.validate();
    return cfg;
}

json solver_config_json(const HooiConfig& cfg) {
    json inner = {{"tol", cfg.inner.tol}};
    if (cfg.inner.max_iters) inner["max_iters"] = *cfg.inner.max_iters;
    return {{"tol", cfg.tol},
            {"max_outer_iters", cfg.max_outer_iters},
            {"init", init_name(cfg.init)},
            {"seed", cfg.seed},
            {"inner", inner}};
}

std::vector<double> arithmetic(double first, double step, int count) {
    std::vector<double> v;
    for (int i = 0; i < count; ++i) v.push_back(first + step * i);
    return v;
}

void write_csv(const std::string& path, std::ostream& out, const std::string& body) {
    if (path == "-") {
        out << body;
        return;
    }
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open '" + path + "' for writing");
    f << body;
    f.flush();
    if (!f) throw IoError("failed writing '" + path + "'");
}

std::string results_csv(const harness::ResultTable& table, const std::vector<std::string>& comments) {
    std::ostringstream s;
    harness::write_results(s, table, comments);
    return s.str();
}

}  // namespace

const std::vector<DefaultEntry>& defaults_table() {
    static const std::vector<DefaultEntry> table = [] {
        const HooiConfig h;
        const harness::ReconExperimentSpec r = harness::ReconExperimentSpec::desk();
        const harness::ClassifyExperimentSpec c;
        const harness::SyntheticDigitsConfig s;
        auto dims = [](const std::vector<std::size_t>& v) {
            std::string out;
            for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "x" : "") + std::to_string(v[i]);
            return out;
        };
        return std::vector<DefaultEntry>{
            {"solver.tol", fmt(h.tol), "outer relative-increase stop threshold"},
            {"solver.max_outer_iters", std::to_string(h.max_outer_iters), "outer iteration cap"},
            {"solver.inner.tol", fmt(h.inner.tol), "L1-PCA relative-increase stop threshold"},
            {"solver.inner.max_iters", "min(100*rows,1000)", "L1-PCA iteration cap"},
            {"solver.init", init_name(h.init), "initialization"},
            {"solver.seed", std::to_string(h.seed), "seed for random initialization"},
            {"rank_tolerance", fmt(kRankTolerance), "relative singular value cutoff"},
            {"recon.shape", dims(r.shape), "tensor dimensions"},
            {"recon.ranks", dims(r.ranks), "Tucker ranks"},
            {"recon.core_std", fmt(r.core_std), "core entry standard deviation"},
            {"recon.awgn_std", fmt(r.awgn_std), "dense noise standard deviation"},
            {"recon.outlier_count", std::to_string(r.outlier_count), "outlier entries per tensor"},
            {"recon.outlier_std", fmt(r.outlier_std), "outlier standard deviation"},
            {"recon.trials", std::to_string(r.trials), "Monte-Carlo trials"},
            {"recon.seed", std::to_string(r.seed), "master seed"},
            {"classify.classes", std::to_string(c.classes), "number of classes"},
            {"classify.samples_per_class", std::to_string(c.samples_per_class), "training images per class"},
            {"classify.test_per_class", std::to_string(c.test_per_class), "test images per class"},
            {"classify.image_dim", std::to_string(c.image_dim), "image side length"},
            {"classify.rank", std::to_string(c.rank), "feature-mode rank"},
            {"classify.alpha", fmt(c.alpha), "image corruption probability"},
            {"classify.beta", fmt(c.beta), "pixel corruption probability"},
            {"classify.noise_ratio", fmt(c.noise_ratio), "clean rms over noise rms"},
            {"classify.trials", std::to_string(c.trials), "Monte-Carlo trials"},
            {"classify.seed", std::to_string(c.seed), "master seed"},
            {"synthetic.per_class", std::to_string(s.per_class), "synthetic images per class"},
            {"synthetic.seed", std::to_string(s.seed), "synthetic dataset seed"},
        };
    }();
    return table;
}

std::vector<std::string> provenance_comments(const std::string& command, const json& effective) {
    std::vector<std::string> lines{"l1tucker " + command};
    for (const DefaultEntry& e : defaults_table()) lines.push_back("default " + e.name + "=" + e.value);
    lines.push_back("config " + effective.dump());
    return lines;
}

json load_json(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open '" + path + "'");
    std::ostringstream s;
    s << f.rdbuf();
    try {
        return json::parse(s.str());
    } catch (const json::parse_error& e) {
        throw FormatError(path + ": invalid JSON: " + e.what(), e.byte);
    }
}

Ranks parse_ranks(const std::string& text) {
    Ranks ranks;
    std::stringstream s(text);
    std::string item;
    while (std::getline(s, item, ',')) {
        std::size_t pos = 0;
        unsigned long long v = 0;
        try {
            v = std::stoull(item, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos == 0 || pos != item.size() || item.front() == '-' || v == 0) {
            throw ArgumentError("invalid rank list '" + text + "'");
        }
        ranks.push_back(static_cast<std::size_t>(v));
    }
    if (ranks.empty() || text.back() == ',') throw ArgumentError("invalid rank list '" + text + "'");
    return ranks;
}

ReconConfig parse_recon_config(const json& j) {
    ObjectReader r(j, "config");
    std::string preset = "desk";
    r.get("preset", preset);
    ReconConfig c;
    if (preset == "desk") {
        c.spec = harness::ReconExperimentSpec::desk();
    } else if (preset == "full") {
        c.spec = harness::ReconExperimentSpec::full();
    } else {
        throw ArgumentError("unknown preset '" + preset + "' (expected desk or full)");
    }
    r.get("shape", c.spec.shape);
    r.get("ranks", c.spec.ranks);
    r.get("core_std", c.spec.core_std);
    r.get("awgn_std", c.spec.awgn_std);
    r.get("outlier_count", c.spec.outlier_count);
    r.get("outlier_std", c.spec.outlier_std);
    r.get("trials", c.spec.trials);
    r.get("seed", c.spec.seed);
    if (r.has("solvers")) {
        std::vector<std::string> names;
        r.get("solvers", names);
        c.spec.solvers.clear();
        for (const auto& n : names) c.spec.solvers.push_back(parse_solver(n));
    }
    if (const json* s = r.field("solver_config")) c.spec.solver_config = parse_solver_config(*s, r.path("solver_config"));
    c.grid = harness::SweepGrid{harness::SweepParam::OutlierStd, arithmetic(0.0, 4.0, 8)};
    if (const json* s = r.field("sweep")) {
        ObjectReader sr(*s, r.path("sweep"));
        std::string param = harness::sweep_param_name(c.grid.param);
        sr.get("param", param);
        c.grid.param = harness::parse_sweep_param(param);
        sr.get("values", c.grid.values);
        sr.finish();
    }
    r.finish();
    c.spec.validate();
    if (c.grid.values.empty()) throw ArgumentError("sweep.values is empty");
    return c;
}

json to_json(const ReconConfig& c) {
    json solvers = json::array();
    for (Solver s : c.spec.solvers) solvers.push_back(solver_name(s));
    return {{"shape", c.spec.shape},
            {"ranks", c.spec.ranks},
            {"core_std", c.spec.core_std},
            {"awgn_std", c.spec.awgn_std},
            {"outlier_count", c.spec.outlier_count},
            {"outlier_std", c.spec.outlier_std},
            {"trials", c.spec.trials},
            {"seed", c.spec.seed},
            {"solvers", solvers},
            {"solver_config", solver_config_json(c.spec.solver_config)},
            {"sweep", {{"param", harness::sweep_param_name(c.grid.param)}, {"values", c.grid.values}}}};
}

ClassifyConfig parse_classify_config(const json& j) {
    ObjectReader r(j, "config");
    ClassifyConfig c;
    auto& s = c.spec;
    r.get("classes", s.classes);
    r.get("samples_per_class", s.samples_per_class);
    r.get("image_dim", s.image_dim);
    r.get("rank", s.rank);
    r.get("alpha", s.alpha);
    r.get("beta", s.beta);
    r.get("noise_ratio", s.noise_ratio);
    r.get("test_per_class", s.test_per_class);
    r.get("trials", s.trials);
    r.get("seed", s.seed);
    if (r.has("methods")) {
        std::vector<std::string> names;
        r.get("methods", names);
        s.methods.clear();
        for (const auto& n : names) s.methods.push_back(harness::parse_method(n));
    }
    if (const json* sc = r.field("solver_config")) s.solver_config = parse_solver_config(*sc, r.path("solver_config"));
    c.sweep = harness::ClassSweep{harness::ClassSweepParam::Alpha, {0.0, 0.1, 0.2, 0.3}};
    if (const json* sw = r.field("sweep")) {
        ObjectReader sr(*sw, r.path("sweep"));
        std::string param = harness::class_sweep_param_name(c.sweep.param);
        sr.get("param", param);
        c.sweep.param = harness::parse_class_sweep_param(param);
        sr.get("values", c.sweep.values);
        sr.finish();
    }
    c.synthetic.classes = s.classes;
    c.synthetic.image_dim = s.image_dim;
    if (const json* sy = r.field("synthetic")) {
        ObjectReader yr(*sy, r.path("synthetic"));
        yr.get("per_class", c.synthetic.per_class);
        yr.get("seed", c.synthetic.seed);
        yr.finish();
    }
    r.finish();
    s.validate();
    if (c.sweep.values.empty()) throw ArgumentError("sweep.values is empty");
    return c;
}

json to_json(const ClassifyConfig& c) {
    const auto& s = c.spec;
    json methods = json::array();
    for (auto m : s.methods) methods.push_back(harness::method_name(m));
    return {{"classes", s.classes},
            {"samples_per_class", s.samples_per_class},
            {"image_dim", s.image_dim},
            {"rank", s.rank},
            {"alpha", s.alpha},
            {"beta", s.beta},
            {"noise_ratio", s.noise_ratio},
            {"test_per_class", s.test_per_class},
            {"trials", s.trials},
            {"seed", s.seed},
            {"methods", methods},
            {"solver_config", solver_config_json(s.solver_config)},
            {"sweep", {{"param", harness::class_sweep_param_name(c.sweep.param)}, {"values", c.sweep.values}}},
            {"synthetic", {{"per_class", c.synthetic.per_class}, {"seed", c.synthetic.seed}}}};
}

namespace {

struct SolverFlags {
    std::string ranks;
    std::vector<std::string> solvers;
    double tol = HooiConfig{}.tol;
    int max_iters = HooiConfig{}.max_outer_iters;
    std::uint64_t seed = HooiConfig{}.seed;
    std::string init = "auto";

    [[nodiscard]] HooiConfig config() const {
        HooiConfig cfg;
        cfg.with_tol(tol);
        cfg.max_outer_iters = max_iters;
        cfg.seed = seed;
        cfg.init = parse_init(init);
        cfg.validate();
        return cfg;
    }
    [[nodiscard]] json to_json() const {
        return {{"ranks", ranks}, {"solvers", solvers}, {"tol", tol}, {"max_iters", max_iters}, {"seed", seed}, {"init", init}};
    }
};

void add_solver_flags(CLI::App* cmd, SolverFlags& f, bool many) {
    if (many) {
        cmd->add_option("--solver", f.solvers, "Solvers to trace (repeatable; default all)")
            ->check(CLI::IsMember({"hosvd", "hooi", "l1-hosvd", "l1-hooi"}));
    } else {
        f.solvers = {"l1-hooi"};
        cmd->add_option("--solver", f.solvers, "hosvd | hooi | l1-hosvd | l1-hooi")
            ->expected(1)
            ->check(CLI::IsMember({"hosvd", "hooi", "l1-hosvd", "l1-hooi"}))
            ->capture_default_str();
    }
    cmd->add_option("--tol", f.tol, "Relative-increase stop threshold (outer and inner)")->capture_default_str();
    cmd->add_option("--max-iters", f.max_iters, "Outer iteration cap")->capture_default_str();
    cmd->add_option("--seed", f.seed, "Seed for random initialization")->capture_default_str();
    cmd->add_option("--init", f.init, "auto | hosvd | l1-hosvd | random")
        ->check(CLI::IsMember({"auto", "hosvd", "l1-hosvd", "random"}))
        ->capture_default_str();
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"L1-norm Tucker decomposition and robustness experiments", "l1tucker"};
    app.require_subcommand(1, 1);
    app.fallthrough();

    unsigned threads = 0;
    std::string format = "csv";
    app.add_option("--threads", threads, "Worker threads for experiments (0 = auto)")->capture_default_str();
    app.add_option("--format", format, "Output format")->check(CLI::IsMember({"csv"}))->capture_default_str();

    SolverFlags dflags;
    std::string input, output;
    auto* decompose_cmd = app.add_subcommand("decompose", "Decompose an LT1 tensor and write a model file");
    decompose_cmd->add_option("--input", input, "LT1 tensor file")->required();
    decompose_cmd->add_option("--ranks", dflags.ranks, "Comma-separated ranks d1,d2,...")->required();
    decompose_cmd->add_option("--output", output, "Model file to write")->required();
    add_solver_flags(decompose_cmd, dflags, false);

    std::string config_path, out_path = "-";
    auto* recon_cmd = app.add_subcommand("recon-sweep", "Monte-Carlo reconstruction sweep over outlier settings");
    recon_cmd->add_option("--config", config_path, "JSON experiment config")->required();
    recon_cmd->add_option("--out", out_path, "Output CSV ('-' for stdout)")->capture_default_str();

    std::string mnist_dir;
    bool synthetic = false;
    auto* classify_cmd = app.add_subcommand("classify", "Monte-Carlo classification under corrupted training data");
    classify_cmd->add_option("--config", config_path, "JSON experiment config")->required();
    auto* mnist_opt = classify_cmd->add_option("--mnist-dir", mnist_dir, "Directory with MNIST IDX files");
    auto* synth_opt = classify_cmd->add_flag("--synthetic", synthetic, "Use the synthetic digit dataset");
    mnist_opt->excludes(synth_opt);
    classify_cmd->add_option("--out", out_path, "Output CSV ('-' for stdout)")->capture_default_str();

    SolverFlags tflags;
    std::string trace_input;
    std::size_t trace_trial = 0;
    auto* trace_cmd = app.add_subcommand("trace", "Per-iteration metric trace of each solver");
    auto* tin = trace_cmd->add_option("--input", trace_input, "LT1 tensor file");
    auto* tcfg = trace_cmd->add_option("--config", config_path, "Reconstruction JSON config generating the tensor");
    tin->excludes(tcfg);
    trace_cmd->add_option("--ranks", tflags.ranks, "Comma-separated ranks (required with --input)");
    trace_cmd->add_option("--trial", trace_trial, "Trial index used with --config")->capture_default_str();
    trace_cmd->add_option("--out", out_path, "Output CSV ('-' for stdout)")->capture_default_str();
    add_solver_flags(trace_cmd, tflags, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e, out, err);
        err << "error[2]: " << e.what() << "\n";
        return 2;
    }

    try {
        const json global = {{"threads", threads}, {"format", format}};
        if (decompose_cmd->parsed()) {
            const Ranks ranks = parse_ranks(dflags.ranks);
            const HooiConfig cfg = dflags.config();
            const Solver solver = parse_solver(dflags.solvers.at(0));
            const DenseTensor x = load_lt1(input);
            Decomposition d = decompose(solver, x, ranks, cfg);
            d.model.materialize_core(x);
            save_model(output, d.model);
            out << "solver=" << solver_name(solver) << " iterations=" << d.trace.iterations
                << " converged=" << (d.trace.converged ? "true" : "false")
                << " metric=" << fmt(d.trace.metric_per_outer_iter.back()) << "\n";
        } else if (recon_cmd->parsed()) {
            const ReconConfig c = parse_recon_config(load_json(config_path));
            const auto table = harness::run_reconstruction_sweep(c.spec, c.grid, threads);
            json eff = to_json(c);
            eff["cli"] = global;
            write_csv(out_path, out, results_csv(table, provenance_comments("recon-sweep", eff)));
        } else if (classify_cmd->parsed()) {
            if (mnist_dir.empty() && !synthetic) throw ArgumentError("classify needs --mnist-dir or --synthetic");
            const ClassifyConfig c = parse_classify_config(load_json(config_path));
            const harness::LabeledImages data =
                synthetic ? harness::synthetic_digits(c.synthetic) : harness::load_mnist_dir(mnist_dir);
            const auto table = harness::run_classification(c.spec, c.sweep, data, threads);
            json eff = to_json(c);
            eff["cli"] = global;
            eff["dataset"] = synthetic ? "synthetic" : "mnist";
            write_csv(out_path, out, results_csv(table, provenance_comments("classify", eff)));
        } else if (trace_cmd->parsed()) {
            std::optional<DenseTensor> x;
            Ranks ranks;
            json eff = tflags.to_json();
            if (!trace_input.empty()) {
                if (tflags.ranks.empty()) throw ArgumentError("trace --input needs --ranks");
                ranks = parse_ranks(tflags.ranks);
                x = load_lt1(trace_input);
                eff["input"] = trace_input;
            } else if (!config_path.empty()) {
                const ReconConfig c = parse_recon_config(load_json(config_path));
                Rng data = Rng::for_stream(c.spec.seed, trace_trial, Stream::Data);
                const harness::TuckerSample sample = harness::gen_tucker_tensor(c.spec, data);
                auto streams = harness::CorruptionStreams::for_trial(c.spec.seed, trace_trial);
                x = harness::corrupt(sample.x, c.spec, streams);
                ranks = tflags.ranks.empty() ? c.spec.ranks : parse_ranks(tflags.ranks);
                eff["recon"] = to_json(c);
                eff["trial"] = trace_trial;
            } else {
                throw ArgumentError("trace needs --input or --config");
            }
            const HooiConfig cfg = tflags.config();
            std::vector<Solver> solvers;
            if (tflags.solvers.empty()) solvers.assign(std::begin(kAllSolvers), std::end(kAllSolvers));
            for (const auto& n : tflags.solvers) solvers.push_back(parse_solver(n));
            eff["cli"] = global;

            std::ostringstream s;
            for (const std::string& line : provenance_comments("trace", eff)) s << "# " << line << "\n";
            s << "solver,iteration,metric\n";
            for (Solver solver : solvers) {
                const Decomposition d = decompose(solver, *x, ranks, cfg);
                const auto& tr = d.trace.metric_per_outer_iter;
                for (std::size_t q = 0; q < tr.size(); ++q) {
                    s << solver_name(solver) << "," << q << "," << fmt(tr[q]) << "\n";
                }
            }
            write_csv(out_path, out, s.str());
        }
    } catch (const Error& e) {
        err << "error[" << e.exit_code() << "]: " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        err << "error[4]: " << e.what() << "\n";
        return 4;
    }
    return 0;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv{"l1tucker"};
    for (const auto& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace l1tucker::cli
