// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of criteria whose outcome differs from expectation (see
// --expect-fail).

#include "cli.hpp"

#include "l1tucker/harness/classify.hpp"
#include "l1tucker/harness/digits.hpp"
#include "l1tucker/harness/idx.hpp"
#include "l1tucker/harness/recon.hpp"
#include "l1tucker/harness/results.hpp"
#include "l1tucker/l1pca.hpp"
#include "l1tucker/lt1_io.hpp"
#include "l1tucker/tucker.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>

using namespace l1tucker;
using namespace l1tucker::harness;
namespace fs = std::filesystem;

namespace {

// Pinned tolerances and workloads.
constexpr double kOracleTol = 1e-9;
constexpr int kOracleInstances = 200;
constexpr int kAoRestarts = 10;
constexpr double kAoQuality = 0.99;
constexpr double kAoSuccessRate = 0.90;
constexpr double kMonotoneSlack = 1e-9;
constexpr double kBoundSlack = 1e-9;
constexpr double kDominanceSlack = 1e-9;
constexpr int kTensorInstances = 100;
constexpr double kCleanRatio = 1.5;
constexpr double kRobustRatio = 0.5;
constexpr double kStructuralTol = 1e-10;
constexpr double kSignificance = 2.0;
constexpr std::size_t kClassifyTrials = 50;
// Noise rms is ten times the clean pixel rms; see README, "Classification noise level".
constexpr double kClassifyNoiseRatio = 0.1;

struct Outcome {
    bool pass = true;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string num(double v) {
    std::ostringstream s;
    s.precision(6);
    s << v;
    return s.str();
}

DenseTensor gaussian_tensor(const Shape& shape, Rng& rng) {
    std::vector<double> v(shape_volume(shape));
    for (double& x : v) x = rng.gaussian();
    return DenseTensor(shape, std::move(v));
}

double sqrt_p(const Ranks& r) {
    double p = 1.0;
    for (auto d : r) p *= static_cast<double>(d);
    return std::sqrt(p);
}

// ---------------------------------------------------------------- criterion 1
Outcome oracle_equivalence() {
    Outcome o;
    const auto t0 = Clock::now();
    double worst_identity = 0.0;
    int good = 0, above_exact = 0;
    for (int k = 0; k < kOracleInstances; ++k) {
        Rng rng = Rng::for_stream(101, static_cast<std::uint64_t>(k), Stream::Data);
        const auto d1 = static_cast<Index>(1 + rng.below(4));
        const auto d2 = static_cast<Index>(1 + rng.below(6));
        const auto rank = static_cast<Index>(1 + rng.below(static_cast<std::uint64_t>(std::min<Index>(2, d1))));
        const Matrix x = gaussian_matrix(d1, d2, rng);

        const L1PcaExactResult exact = l1pca_exact(x, rank);
        const double lhs = l1_norm(Matrix(x.transpose() * exact.basis.matrix()));
        const double rhs = nuclear_norm(x * exact.sign_pattern);
        worst_identity = std::max(worst_identity, std::abs(lhs - rhs));

        L1PcaConfig cfg;
        cfg.init = L1PcaInit::SvdInit;
        double best = l1pca_ao(x, rank, cfg).metric;
        Rng init = Rng::for_stream(101, static_cast<std::uint64_t>(k), Stream::Init);
        for (int r = 0; r < kAoRestarts; ++r) best = std::max(best, l1pca_ao(x, random_stiefel(d1, rank, init)).metric);
        if (best >= kAoQuality * exact.metric) ++good;
        if (best > exact.metric + kOracleTol) ++above_exact;
    }
    const double rate = static_cast<double>(good) / kOracleInstances;
    const double secs = seconds_since(t0);
    o.pass = worst_identity <= kOracleTol && rate >= kAoSuccessRate && above_exact == 0 && secs < 60.0;
    o.detail = "max |‖XᵀU‖₁ - ‖XB‖_*| = " + num(worst_identity) + " (tol " + num(kOracleTol) + "); AO ≥ 99% of exact on " +
               num(100.0 * rate) + "% of " + std::to_string(kOracleInstances) + " (need ≥ 90%); AO above exact: " +
               std::to_string(above_exact) + "; " + num(secs) + " s";
    return o;
}

// ------------------------------------------------------------ criteria 2 to 4
struct TensorSuite {
    int monotone_violations = 0;
    double worst_monotone = 0.0;
    int bound_violations = 0;
    double worst_bound_ratio = 0.0;
    int dominance_violations = 0;
    double worst_l2_gap = 0.0;
    double worst_l1_gap = 0.0;
    std::size_t traces = 0;
    double seconds = 0.0;
};

void check_monotone(const std::vector<double>& trace, TensorSuite& s) {
    ++s.traces;
    for (std::size_t t = 1; t < trace.size(); ++t) {
        const double drop = trace[t - 1] - trace[t];
        s.worst_monotone = std::max(s.worst_monotone, drop);
        if (drop > kMonotoneSlack) ++s.monotone_violations;
    }
}

void check_bound(double metric, double bound, TensorSuite& s) {
    s.worst_bound_ratio = std::max(s.worst_bound_ratio, metric / bound);
    if (metric > bound + kBoundSlack) ++s.bound_violations;
}

TensorSuite run_tensor_suite() {
    TensorSuite s;
    const auto t0 = Clock::now();
    for (int k = 0; k < kTensorInstances; ++k) {
        Rng rng = Rng::for_stream(202, static_cast<std::uint64_t>(k), Stream::Data);
        Shape shape(2 + rng.below(4));
        for (auto& d : shape) d = 2 + rng.below(9);
        Ranks ranks;
        for (auto d : shape) ranks.push_back(1 + rng.below(d));
        const DenseTensor x = gaussian_tensor(shape, rng);

        // AO traces of L1-HOSVD, mode by mode from the HOSVD start.
        for (std::size_t n = 0; n < shape.size(); ++n) {
            const Matrix a = unfold(x, n).data;
            check_monotone(l1pca_ao(a, top_d_left_basis(a, static_cast<Index>(ranks[n]))).trace, s);
        }

        HooiConfig cfg;
        cfg.record_inner = true;
        const Decomposition l1 = l1_hooi(x, ranks, cfg);
        const double bound = sqrt_p(ranks) * frobenius_norm(x);
        check_monotone(l1.trace.metric_per_outer_iter, s);
        for (const auto& inner : l1.trace.inner_traces) {
            check_monotone(inner, s);
            for (double m : inner) check_bound(m, bound, s);
        }
        for (double m : l1.trace.metric_per_outer_iter) check_bound(m, bound, s);
        for (const auto& sweep : l1.trace.mode_metrics) {
            for (double m : sweep) check_bound(m, bound, s);
        }

        const double l1_hosvd_metric = tucker_metric_l1(x, l1_hosvd(x, ranks).bases);
        const double l1_hooi_metric = tucker_metric_l1(x, l1.model.bases);
        const double hosvd_metric = tucker_metric_l2(x, hosvd(x, ranks).bases);
        const double hooi_metric = tucker_metric_l2(x, hooi(x, ranks).model.bases);
        s.worst_l2_gap = std::max(s.worst_l2_gap, hosvd_metric - hooi_metric);
        s.worst_l1_gap = std::max(s.worst_l1_gap, l1_hosvd_metric - l1_hooi_metric);
        if (hooi_metric < hosvd_metric - kDominanceSlack) ++s.dominance_violations;
        if (l1_hooi_metric < l1_hosvd_metric - kDominanceSlack) ++s.dominance_violations;
    }
    s.seconds = seconds_since(t0);
    return s;
}

Outcome monotonicity(const TensorSuite& s) {
    return {s.monotone_violations == 0 && s.seconds < 120.0,
            std::to_string(s.traces) + " traces, " + std::to_string(s.monotone_violations) +
                " violations, largest decrease " + num(s.worst_monotone) + " (slack " + num(kMonotoneSlack) + "); " +
                num(s.seconds) + " s for criteria 2-4"};
}

Outcome bound(const TensorSuite& s) {
    return {s.bound_violations == 0, std::to_string(s.bound_violations) + " violations; largest metric / (√p‖X‖_F) = " +
                                         num(s.worst_bound_ratio)};
}

Outcome dominance(const TensorSuite& s) {
    return {s.dominance_violations == 0,
            std::to_string(s.dominance_violations) + " violations; worst HOSVD-HOOI L2 gap " + num(s.worst_l2_gap) +
                ", worst L1-HOSVD-L1-HOOI L1 gap " + num(s.worst_l1_gap) + " (slack " + num(kDominanceSlack) + ")"};
}

// ---------------------------------------------------------------- criterion 5
double lookup(const ResultTable& t, const std::string& solver, double param) {
    for (const auto& r : t.rows) {
        if (r.solver == solver && r.param_value == param) return r.metric;
    }
    throw std::runtime_error("missing result row " + solver);
}

Outcome reconstruction(unsigned threads) {
    const auto t0 = Clock::now();
    ReconExperimentSpec spec = ReconExperimentSpec::desk();
    spec.trials = 50;
    const SweepGrid grid{SweepParam::OutlierStd, {0, 4, 8, 12, 16, 20, 24, 28}};
    const ResultTable t = run_reconstruction_sweep(spec, grid, threads);
    const double secs = seconds_since(t0);

    const double h0 = lookup(t, "hosvd", 0), o0 = lookup(t, "hooi", 0);
    const double lh0 = lookup(t, "l1-hosvd", 0), lo0 = lookup(t, "l1-hooi", 0);
    const double h28 = lookup(t, "hosvd", 28), o28 = lookup(t, "hooi", 28);
    const double lh28 = lookup(t, "l1-hosvd", 28), lo28 = lookup(t, "l1-hooi", 28);
    const bool a_hosvd = lh0 <= kCleanRatio * h0, a_hooi = lo0 <= kCleanRatio * o0;
    const bool b_hosvd = lh28 < kRobustRatio * h28, b_hooi = lo28 < kRobustRatio * o28;
    std::size_t failures = 0;
    for (const auto& r : t.rows) failures += r.failures;

    Outcome o;
    o.pass = a_hosvd && a_hooi && b_hosvd && b_hooi && failures == 0 && secs < 900.0;
    o.detail = "N_o=" + std::to_string(spec.outlier_count) + ", 50 trials; σ_o=0: L1-HOSVD/HOSVD " + num(lh0 / h0) +
               (a_hosvd ? " ok" : " FAIL") + ", L1-HOOI/HOOI " + num(lo0 / o0) + (a_hooi ? " ok" : " FAIL") +
               " (need ≤ 1.5); σ_o=28: L1-HOSVD/HOSVD " + num(lh28 / h28) + (b_hosvd ? " ok" : " FAIL") +
               ", L1-HOOI/HOOI " + num(lo28 / o28) + (b_hooi ? " ok" : " FAIL") + " (need < 0.5); MNSE at 28: hosvd " +
               num(h28) + ", hooi " + num(o28) + ", l1-hosvd " + num(lh28) + ", l1-hooi " + num(lo28) + "; " +
               num(secs) + " s";
    return o;
}

// Same comparison at the full-size tensor, fewer trials. Informational only.
std::string reconstruction_full_size(unsigned threads) {
    const auto t0 = Clock::now();
    ReconExperimentSpec spec = ReconExperimentSpec::full();
    spec.trials = 50;
    const ResultTable t = run_reconstruction_sweep(spec, {SweepParam::OutlierStd, {0, 28}}, threads);
    return "dims 10x15x10x15x10, ranks 6,6,4,4,4, N_o=300, 50 trials; σ_o=28 MNSE: hosvd " + num(lookup(t, "hosvd", 28)) +
           ", hooi " + num(lookup(t, "hooi", 28)) + ", l1-hosvd " + num(lookup(t, "l1-hosvd", 28)) + ", l1-hooi " +
           num(lookup(t, "l1-hooi", 28)) + "; σ_o=0: hooi " + num(lookup(t, "hooi", 0)) + ", l1-hooi " +
           num(lookup(t, "l1-hooi", 0)) + "; " + num(seconds_since(t0)) + " s";
}

// ---------------------------------------------------------------- criterion 6
Outcome classification(unsigned threads, const std::string& mnist_dir) {
    const auto t0 = Clock::now();
    LabeledImages data;
    std::string source;
    if (!mnist_dir.empty()) {
        data = load_mnist_dir(mnist_dir);
        source = "MNIST";
    } else {
        SyntheticDigitsConfig dcfg;
        data = synthetic_digits(dcfg);
        source = "synthetic digits";
    }
    ClassifyExperimentSpec spec;
    spec.classes = 5;
    spec.samples_per_class = 10;
    spec.rank = 5;
    spec.beta = 0.8;
    spec.test_per_class = 100;
    spec.trials = kClassifyTrials;
    spec.noise_ratio = kClassifyNoiseRatio;
    spec.methods = {ClassMethod::Hooi, ClassMethod::L1Hooi};
    const ResultTable t = run_classification(spec, {ClassSweepParam::Alpha, {0.0, 0.1, 0.2, 0.3}}, data, threads);
    const double secs = seconds_since(t0);

    auto row = [&](const std::string& m, double a) -> const ResultRow& {
        for (const auto& r : t.rows) {
            if (r.solver == m && r.param_value == a) return r;
        }
        throw std::runtime_error("missing classification row");
    };
    bool ordered = true;
    std::string detail = source + ", " + std::to_string(kClassifyTrials) + " trials; accuracy hooi / l1-hooi:";
    for (double a : {0.0, 0.1, 0.2, 0.3}) {
        const double h = row("hooi", a).metric, l = row("l1-hooi", a).metric;
        if (a >= 0.1 && l < h) ordered = false;
        detail += " α=" + num(a) + " " + num(h) + "/" + num(l);
    }
    const ResultRow& h3 = row("hooi", 0.3);
    const ResultRow& l3 = row("l1-hooi", 0.3);
    const double gap = l3.metric - h3.metric;
    const double se = std::sqrt(h3.std_error * h3.std_error + l3.std_error * l3.std_error);
    const bool significant = gap > kSignificance * se;
    detail += "; gap at 0.3 = " + num(gap) + " = " + num(se > 0 ? gap / se : 0.0) + " combined SE (need > 2); " +
              num(secs) + " s";
    return {ordered && significant && secs < 1200.0, detail};
}

// ---------------------------------------------------------------- criterion 7
Outcome structural() {
    Rng rng(707);
    double worst = 0.0;
    bool exact = true;
    auto track = [&](double v) { worst = std::max(worst, v); };
    auto diff = [](const DenseTensor& a, const DenseTensor& b) {
        double m = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
        return m;
    };
    for (int k = 0; k < 50; ++k) {
        Shape shape(1 + rng.below(5));
        for (auto& d : shape) d = 1 + rng.below(6);
        const DenseTensor x = gaussian_tensor(shape, rng);
        const std::size_t order = shape.size();

        for (std::size_t n = 0; n < order; ++n) exact = exact && fold(unfold(x, n), shape) == x;

        Bases bases;
        Ranks ranks;
        for (auto d : shape) {
            ranks.push_back(1 + rng.below(d));
            bases.push_back(random_stiefel(static_cast<Index>(d), static_cast<Index>(ranks.back()), rng));
        }
        if (order >= 2) {
            const Matrix a = bases[0].matrix().transpose();
            const Matrix b = bases[1].matrix().transpose();
            track(diff(mode_product(mode_product(x, a, 0), b, 1), mode_product(mode_product(x, b, 1), a, 0)));
        }

        TuckerModel model{bases, ranks, std::nullopt};
        model.materialize_core(x);
        track(diff(reconstruct(x, model), expand_core(*model.core, bases)));

        const double metric = tucker_metric_l1(x, bases);
        for (std::size_t m = 0; m < order; ++m) {
            track(std::abs(l1_norm(Matrix(bases[m].matrix().transpose() * projected_unfolding(x, bases, m))) - metric));
        }

        const Ranks full(shape.begin(), shape.end());
        for (Solver s : kAllSolvers) track(nse(x, reconstruct(x, decompose(s, x, full).model)));

        std::stringstream lt1;
        write_lt1(lt1, x);
        exact = exact && read_lt1(lt1) == x;
    }

    ResultTable t;
    for (int k = 0; k < 20; ++k) {
        t.rows.push_back({k % 2 ? "hooi" : "l1-hooi", "outlier_std", rng.uniform(0, 30), rng.gaussian(),
                          std::abs(rng.gaussian()) * 1e-3, 50, 0});
    }
    std::stringstream csv1;
    write_results(csv1, t);
    std::stringstream reread(csv1.str());
    ResultTable back = read_results(reread);
    t.sort();
    for (auto& r : back.rows) r.failures = 0;
    std::stringstream csv2;
    write_results(csv2, back);
    exact = exact && back == t && csv1.str() == csv2.str();

    return {exact && worst <= kStructuralTol,
            std::string("bijection, LT1 and CSV round-trips ") + (exact ? "exact" : "NOT exact") +
                "; largest deviation across commutation, two-path reconstruction, per-mode metric identity and "
                "full-rank NSE = " +
                num(worst) + " (tol " + num(kStructuralTol) + ")"};
}

// ---------------------------------------------------------------- criterion 8
std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

int run_binary(const std::string& args) {
    const std::string cmd = std::string("\"") + L1TUCKER_BIN + "\" " + args + " >/dev/null 2>&1";
    return std::system(cmd.c_str());
}

Outcome determinism() {
    const fs::path dir = fs::temp_directory_path() / "l1tucker_acceptance";
    fs::remove_all(dir);
    fs::create_directories(dir);
    {
        std::ofstream(dir / "recon.json") << R"({"shape":[6,7,5,6],"ranks":[3,3,2,2],"outlier_count":5,"trials":6,
            "sweep":{"param":"outlier_std","values":[0,12,28]}})";
        std::ofstream(dir / "classify.json") << R"({"image_dim":16,"rank":4,"samples_per_class":6,"test_per_class":20,
            "trials":4,"noise_ratio":0.1,"synthetic":{"per_class":40}})";
        Rng rng(808);
        save_lt1(dir / "x.lt1", gaussian_tensor({7, 6, 5}, rng));
    }
    const std::vector<std::pair<std::string, std::string>> commands{
        {"decompose", "decompose --input x.lt1 --ranks 3,2,2 --solver l1-hooi --output OUT"},
        {"recon-sweep", "recon-sweep --config recon.json --out OUT"},
        {"classify", "classify --config classify.json --synthetic --out OUT"},
        {"trace", "trace --input x.lt1 --ranks 3,2,2 --out OUT"},
        {"trace --config", "trace --config recon.json --solver l1-hooi --solver hooi --out OUT"},
    };
    bool pass = true;
    std::string detail;
    for (const auto& [name, args] : commands) {
        std::string outs[2];
        bool ok = true;
        for (int rep = 0; rep < 2; ++rep) {
            const fs::path out = dir / (std::to_string(rep) + ".out");
            std::string line = args;
            for (const char* f : {"x.lt1", "recon.json", "classify.json"}) {
                const auto pos = line.find(f);
                if (pos != std::string::npos) line.replace(pos, std::string(f).size(), (dir / f).string());
            }
            line.replace(line.find("OUT"), 3, out.string());
            ok = ok && run_binary(line) == 0;
            outs[rep] = slurp(out);
        }
        const bool same = ok && !outs[0].empty() && outs[0] == outs[1];
        pass = pass && same;
        detail += (detail.empty() ? "" : ", ") + name + (same ? " identical" : " DIFFERENT");
    }
    return {pass, detail};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"L1-Tucker acceptance suite"};
    std::vector<int> expect_fail;
    unsigned threads = 0;
    std::string mnist_dir;
    bool full_size = true;
    app.add_option("--expect-fail", expect_fail, "Criteria known to fail; an unexpected pass is reported");
    app.add_option("--threads", threads, "Worker threads (0 = auto)");
    app.add_option("--mnist-dir", mnist_dir, "Use MNIST IDX files instead of synthetic digits");
    app.add_flag("!--skip-full-size", full_size, "Skip the informational full-size reconstruction run");
    CLI11_PARSE(app, argc, argv);
    if (mnist_dir.empty()) {
        if (const char* env = std::getenv("L1TUCKER_MNIST_DIR")) mnist_dir = env;
    }
    const std::set<int> expected(expect_fail.begin(), expect_fail.end());

    int unexpected = 0;
    auto report = [&](int id, const std::string& title, const Outcome& o) {
        const bool xfail = expected.contains(id);
        std::string tag = o.pass ? "PASS" : "FAIL";
        if (xfail) tag += o.pass ? " (unexpected pass)" : " (expected)";
        if (o.pass == xfail) ++unexpected;
        std::cout << "[" << tag << "] criterion " << id << " " << title << ": " << o.detail << std::endl;
    };

    report(1, "oracle equivalence", oracle_equivalence());
    const TensorSuite suite = run_tensor_suite();
    report(2, "monotone traces", monotonicity(suite));
    report(3, "L1 metric bound", bound(suite));
    report(4, "HOOI dominance", dominance(suite));
    report(5, "reconstruction robustness", reconstruction(threads));
    if (full_size) std::cout << "[INFO] full-size reconstruction: " << reconstruction_full_size(threads) << std::endl;
    report(6, "classification robustness", classification(threads, mnist_dir));
    report(7, "structural suite", structural());
    report(8, "CLI determinism", determinism());

    std::cout << "acceptance: " << (unexpected == 0 ? "all outcomes as expected" : std::to_string(unexpected) + " unexpected outcome(s)")
              << std::endl;
    return unexpected;
}
