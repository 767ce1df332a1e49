#include "l1tucker/tucker.hpp"

#include "l1tucker/error.hpp"
#include "l1tucker/rng.hpp"

#include <string>

namespace l1tucker {

namespace {

void check_bases(const DenseTensor& x, const Bases& bases) {
    if (bases.size() != x.order()) {
        throw ArgumentError("expected " + std::to_string(x.order()) + " bases, got " + std::to_string(bases.size()));
    }
    for (std::size_t n = 0; n < bases.size(); ++n) {
        if (static_cast<std::size_t>(bases[n].rows()) != x.dim(n)) {
            throw ArgumentError("basis " + std::to_string(n) + " has " + std::to_string(bases[n].rows()) +
                                " rows, mode dimension is " + std::to_string(x.dim(n)));
        }
    }
}

Bases random_bases(const DenseTensor& x, const Ranks& ranks, std::uint64_t seed) {
    Rng rng = Rng::for_stream(seed, 0, Stream::Init);
    Bases out;
    for (std::size_t n = 0; n < ranks.size(); ++n) {
        out.push_back(random_stiefel(static_cast<Index>(x.dim(n)), static_cast<Index>(ranks[n]), rng));
    }
    return out;
}

Bases initial_bases(const DenseTensor& x, const Ranks& ranks, const HooiConfig& cfg, TuckerInit fallback) {
    const TuckerInit init = cfg.init == TuckerInit::Auto ? fallback : cfg.init;
    switch (init) {
        case TuckerInit::Hosvd: return hosvd(x, ranks).bases;
        case TuckerInit::L1Hosvd: return l1_hosvd(x, ranks, cfg.inner).bases;
        case TuckerInit::Random: return random_bases(x, ranks, cfg.seed);
        case TuckerInit::Auto: break;
    }
    throw ArgumentError("unresolved Tucker initialization");
}

bool outer_converged(double previous, double current, double tol) {
    const double gain = current - previous;
    return previous > 0.0 ? gain / previous < tol : gain < L1PcaConfig::kAbsoluteTol;
}

}  // namespace

Shape TuckerModel::dims() const {
    Shape s;
    for (const auto& b : bases) s.push_back(static_cast<std::size_t>(b.rows()));
    return s;
}

void TuckerModel::materialize_core(const DenseTensor& x) { core = project_core(x, bases); }

void HooiConfig::validate() const {
    if (!(tol > 0.0)) throw ArgumentError("tolerance must be positive");
    if (max_outer_iters < 1) throw ArgumentError("outer iteration cap must be at least 1");
    inner.validate();
}

void validate_ranks(const Shape& shape, const Ranks& ranks) {
    if (ranks.size() != shape.size()) {
        throw ArgumentError("expected " + std::to_string(shape.size()) + " ranks, got " + std::to_string(ranks.size()));
    }
    for (std::size_t n = 0; n < ranks.size(); ++n) {
        if (ranks[n] == 0 || ranks[n] > shape[n]) {
            throw ArgumentError("rank " + std::to_string(ranks[n]) + " for mode " + std::to_string(n) +
                                " must lie in [1, " + std::to_string(shape[n]) + "]");
        }
    }
}

DenseTensor project_core(const DenseTensor& x, const Bases& bases) {
    check_bases(x, bases);
    std::vector<std::pair<std::size_t, Matrix>> factors;
    for (std::size_t n = 0; n < bases.size(); ++n) factors.emplace_back(n, bases[n].matrix().transpose());
    return multi_mode_product(x, factors);
}

DenseTensor expand_core(const DenseTensor& core, const Bases& bases) {
    if (bases.size() != core.order()) throw ArgumentError("core order does not match basis count");
    std::vector<std::pair<std::size_t, Matrix>> factors;
    for (std::size_t n = 0; n < bases.size(); ++n) {
        if (static_cast<std::size_t>(bases[n].cols()) != core.dim(n)) {
            throw ArgumentError("basis " + std::to_string(n) + " does not match core dimension");
        }
        factors.emplace_back(n, bases[n].matrix());
    }
    return multi_mode_product(core, factors);
}

double tucker_metric_l2(const DenseTensor& x, const Bases& bases) {
    const double f = frobenius_norm(project_core(x, bases));
    return f * f;
}

double tucker_metric_l1(const DenseTensor& x, const Bases& bases) { return l1_norm(project_core(x, bases)); }

Matrix projected_unfolding(const DenseTensor& x, const Bases& bases, std::size_t mode) {
    check_bases(x, bases);
    std::vector<std::pair<std::size_t, Matrix>> factors;
    for (std::size_t m = 0; m < bases.size(); ++m) {
        if (m != mode) factors.emplace_back(m, bases[m].matrix().transpose());
    }
    return unfold(multi_mode_product(x, factors), mode).data;
}

TuckerModel hosvd(const DenseTensor& x, const Ranks& ranks) {
    validate_ranks(x.shape(), ranks);
    TuckerModel model{{}, ranks, std::nullopt};
    for (std::size_t n = 0; n < x.order(); ++n) {
        model.bases.push_back(top_d_left_basis(unfold(x, n).data, static_cast<Index>(ranks[n])));
    }
    return model;
}

TuckerModel l1_hosvd(const DenseTensor& x, const Ranks& ranks, const L1PcaConfig& cfg) {
    validate_ranks(x.shape(), ranks);
    cfg.validate();
    TuckerModel model{{}, ranks, std::nullopt};
    for (std::size_t n = 0; n < x.order(); ++n) {
        const Matrix a = unfold(x, n).data;
        const StiefelBasis start = top_d_left_basis(a, static_cast<Index>(ranks[n]));
        model.bases.push_back(l1pca_ao(a, start, cfg).basis);
    }
    return model;
}

Decomposition hooi(const DenseTensor& x, const Ranks& ranks, const HooiConfig& cfg) {
    validate_ranks(x.shape(), ranks);
    cfg.validate();
    Bases bases = initial_bases(x, ranks, cfg, TuckerInit::Hosvd);

    DecompTrace trace;
    double metric = tucker_metric_l2(x, bases);
    trace.metric_per_outer_iter.push_back(metric);
    if (frobenius_norm(x) == 0.0) {
        trace.converged = true;
        return {TuckerModel{std::move(bases), ranks, std::nullopt}, std::move(trace)};
    }

    for (int q = 1; q <= cfg.max_outer_iters; ++q) {
        std::vector<double> before(x.order()), after(x.order());
        for (std::size_t n = 0; n < x.order(); ++n) {
            const Matrix a = projected_unfolding(x, bases, n);
            before[n] = (bases[n].matrix().transpose() * a).squaredNorm();
            bases[n] = top_d_left_basis(a, static_cast<Index>(ranks[n]));
            after[n] = (bases[n].matrix().transpose() * a).squaredNorm();
        }
        const double next = after.back();
        trace.mode_metrics.push_back(std::move(after));
        trace.mode_metrics_before.push_back(std::move(before));
        trace.metric_per_outer_iter.push_back(next);
        trace.iterations = q;
        const bool done = outer_converged(metric, next, cfg.tol);
        metric = next;
        if (done) {
            trace.converged = true;
            break;
        }
    }
    return {TuckerModel{std::move(bases), ranks, std::nullopt}, std::move(trace)};
}

Decomposition l1_hooi(const DenseTensor& x, const Ranks& ranks, const HooiConfig& cfg) {
    validate_ranks(x.shape(), ranks);
    cfg.validate();
    Bases bases = initial_bases(x, ranks, cfg, TuckerInit::L1Hosvd);

    DecompTrace trace;
    double metric = tucker_metric_l1(x, bases);
    trace.metric_per_outer_iter.push_back(metric);
    if (frobenius_norm(x) == 0.0) {
        trace.converged = true;
        return {TuckerModel{std::move(bases), ranks, std::nullopt}, std::move(trace)};
    }

    for (int q = 1; q <= cfg.max_outer_iters; ++q) {
        std::vector<double> before(x.order()), after(x.order());
        for (std::size_t n = 0; n < x.order(); ++n) {
            const Matrix a = projected_unfolding(x, bases, n);
            L1PcaResult r = l1pca_ao(a, bases[n], cfg.inner);
            before[n] = r.trace.front();
            after[n] = r.metric;
            if (cfg.record_inner) trace.inner_traces.push_back(std::move(r.trace));
            bases[n] = std::move(r.basis);
        }
        // ||U_N^T A_N||_1 is the L1 norm of the mode-N unfolded core.
        const double next = after.back();
        trace.mode_metrics.push_back(std::move(after));
        trace.mode_metrics_before.push_back(std::move(before));
        trace.metric_per_outer_iter.push_back(next);
        trace.iterations = q;
        const bool done = outer_converged(metric, next, cfg.tol);
        metric = next;
        if (done) {
            trace.converged = true;
            break;
        }
    }
    return {TuckerModel{std::move(bases), ranks, std::nullopt}, std::move(trace)};
}

DenseTensor reconstruct(const DenseTensor& x, const TuckerModel& model) {
    check_bases(x, model.bases);
    std::vector<std::pair<std::size_t, Matrix>> factors;
    for (std::size_t n = 0; n < model.bases.size(); ++n) {
        const Matrix& u = model.bases[n].matrix();
        factors.emplace_back(n, u * u.transpose());
    }
    return multi_mode_product(x, factors);
}

std::string solver_name(Solver s) {
    switch (s) {
        case Solver::Hosvd: return "hosvd";
        case Solver::Hooi: return "hooi";
        case Solver::L1Hosvd: return "l1-hosvd";
        case Solver::L1Hooi: return "l1-hooi";
    }
    return "unknown";
}

Solver parse_solver(std::string_view name) {
    for (Solver s : kAllSolvers) {
        if (solver_name(s) == name) return s;
    }
    throw ArgumentError("unknown solver '" + std::string(name) + "' (expected hosvd, hooi, l1-hosvd or l1-hooi)");
}

Decomposition decompose(Solver solver, const DenseTensor& x, const Ranks& ranks, const HooiConfig& cfg) {
    auto single_pass = [&](TuckerModel model, double metric) {
        DecompTrace trace;
        trace.metric_per_outer_iter = {metric};
        trace.converged = true;
        trace.iterations = 1;
        return Decomposition{std::move(model), std::move(trace)};
    };
    switch (solver) {
        case Solver::Hosvd: {
            auto m = hosvd(x, ranks);
            const double metric = tucker_metric_l2(x, m.bases);
            return single_pass(std::move(m), metric);
        }
        case Solver::L1Hosvd: {
            cfg.validate();
            auto m = l1_hosvd(x, ranks, cfg.inner);
            const double metric = tucker_metric_l1(x, m.bases);
            return single_pass(std::move(m), metric);
        }
        case Solver::Hooi: return hooi(x, ranks, cfg);
        case Solver::L1Hooi: return l1_hooi(x, ranks, cfg);
    }
    throw ArgumentError("unknown solver");
}

}  // namespace l1tucker
