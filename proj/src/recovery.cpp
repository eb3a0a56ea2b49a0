#include "dynspec/recovery.hpp"

#include <stdexcept>

#include "dynspec/lowrank.hpp"

namespace dynspec {

Method parse_method(const std::string& s) {
    if (s == "proposed") return Method::proposed;
    if (s == "cadzow") return Method::cadzow;
    throw std::invalid_argument("method must be proposed or cadzow");
}

std::string to_string(Method m) { return m == Method::proposed ? "proposed" : "cadzow"; }

CadzowResult cadzow_denoise(const cvec& seq, int K, int r, int iters, double tol, bool fast_svd) {
    if (r < 1 || r >= K) throw std::invalid_argument("rank must satisfy 1 <= r < K");
    HankelRankProjector proj(K, r, !fast_svd);
    CadzowResult out;
    out.sequence = seq.head(2 * K - 1);
    for (int it = 1; it <= iters; ++it) {
        const cvec next = proj.project(out.sequence);
        const double scale = std::max(next.cwiseAbs().maxCoeff(), 1e-300);
        const double change = (next - out.sequence).cwiseAbs().maxCoeff() / scale;
        out.sequence = next;
        out.iterations = it;
        out.log.push_back({it, change, tol, 0});
        if (change <= tol) {
            out.converged = true;
            break;
        }
    }
    return out;
}

RecoveryOutput recover_all_channels(const std::vector<HankelChannel>& channels, int m, const RecoveryParams& params,
                                    Method method) {
    if (channels.empty()) throw std::invalid_argument("no channels");
    const int K = channels[0].K;
    RecoveryOutput out;
    out.cleaned = channels;
    auto rank_of = [&](int j) {
        if (j == 0) return params.rank0 > 0 ? params.rank0 : theoretical_rank(m, 0);
        return params.rankj > 0 ? params.rankj : theoretical_rank(m, j);
    };

    if (method == Method::cadzow) {
        out.detector = "none";
        for (std::size_t j = 0; j < channels.size(); ++j) {
            const CadzowResult cz = cadzow_denoise(channels[j].sequence, K, rank_of(int(j)), params.max_iters,
                                                   params.tol, params.fast_svd);
            out.cleaned[j].sequence = cz.sequence;
            out.channel_iterations.push_back(cz.iterations);
            out.converged = out.converged && cz.converged;
        }
        return out;
    }

    const DetectionResult det = detect_outliers(channels[0].sequence, K, rank_of(0), params);
    out.estimated_support = det.support;
    out.sparse_component = det.sparse;
    out.iteration_log = det.log;
    out.detector = det.source;
    out.converged = det.converged;
    for (std::size_t j = 0; j < channels.size(); ++j) {
        const CompletionResult cr = complete_channel(channels[j].sequence, det.support, K, rank_of(int(j)), params);
        out.cleaned[j].sequence = cr.sequence;
        out.channel_iterations.push_back(cr.iterations);
    }
    return out;
}

void write_iteration_log_csv(std::ostream& os, const std::vector<IterationRecord>& log) {
    os << "iteration,residual,threshold,support_size\n";
    char buf[128];
    for (const auto& r : log) {
        std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%d\n", r.iteration, r.residual, r.threshold, r.support_size);
        os << buf;
    }
}

}  // namespace dynspec
