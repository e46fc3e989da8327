#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "graph.hpp"

namespace nest {

enum class CentralityKind { PageRank, Eigenvector, Katz, Authority, Hub };

enum class VectorNorm { One, Two, Raw };

struct CentralityVector {
    std::vector<double> values;
    CentralityKind kind = CentralityKind::PageRank;
    VectorNorm norm = VectorNorm::Raw;
    std::size_t iterations_used = 0;
    double residual = 0.0; // final sum-absolute-difference between successive iterates
};

// Raw iterate sequence x^(0)..x^(T) of a power iteration, no convergence
// shortcuts, no normalization beyond what the iteration itself prescribes.
struct IterationTrace {
    std::vector<std::vector<double>> iterates;
};

inline constexpr double kDefaultAlpha = 0.85;
inline constexpr double kDefaultTol = 1e-15;
inline constexpr std::size_t kDefaultMaxIter = 100000;

namespace detail {

inline double sum_abs_diff(const std::vector<double>& x, const std::vector<double>& y) {
    double s = 0;
    for (std::size_t i = 0; i < x.size(); ++i) s += std::abs(x[i] - y[i]);
    return s;
}

inline double norm1(const std::vector<double>& x) {
    double s = 0;
    for (double v : x) s += std::abs(v);
    return s;
}

inline double norm2(const std::vector<double>& x) {
    double s = 0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

// out[v] = sum of x over v's in-neighbors: one application of A^T (for
// undirected graphs, of A).
inline void apply_transposed(const Graph& g, const std::vector<double>& x, std::vector<double>& out) {
    out.assign(g.n(), 0.0);
    for (NodeId v = 0; v < g.n(); ++v) {
        double acc = 0;
        for (NodeId u : g.in_neighbors(v)) acc += x[u];
        out[v] = acc;
    }
}

inline void apply_plain(const Graph& g, const std::vector<double>& x, std::vector<double>& out) {
    out.assign(g.n(), 0.0);
    for (NodeId v = 0; v < g.n(); ++v) {
        double acc = 0;
        for (NodeId u : g.out_neighbors(v)) acc += x[u];
        out[v] = acc;
    }
}

// The PageRank transition: out = alpha * (A-bar)^T D^-1 x + (1-alpha)/n * 1,
// where A-bar links every zero-out-degree node to all nodes (itself included).
// The dangling correction is applied implicitly; A-bar is never materialized.
class PageRankOperator {
public:
    PageRankOperator(const Graph& g, double alpha) : g_(g), alpha_(alpha) {
        inv_outdeg_.resize(g.n());
        for (NodeId v = 0; v < g.n(); ++v) {
            const std::size_t d = g.out_neighbors(v).size();
            if (d == 0)
                dangling_.push_back(v);
            else
                inv_outdeg_[v] = 1.0 / static_cast<double>(d);
        }
    }

    void step(const std::vector<double>& x, std::vector<double>& out) const {
        const std::size_t n = g_.n();
        scaled_.resize(n);
        for (std::size_t u = 0; u < n; ++u) scaled_[u] = x[u] * inv_outdeg_[u];
        double dangling_mass = 0;
        for (NodeId u : dangling_) dangling_mass += x[u];
        const double base =
            (alpha_ * dangling_mass + (1.0 - alpha_)) / static_cast<double>(n);
        for (NodeId v = 0; v < g_.n(); ++v) {
            double acc = 0;
            for (NodeId u : g_.in_neighbors(v)) acc += scaled_[u];
            out[v] = alpha_ * acc + base;
        }
    }

private:
    const Graph& g_;
    double alpha_;
    std::vector<double> inv_outdeg_;
    std::vector<NodeId> dangling_;
    mutable std::vector<double> scaled_;
};

inline void require_nonempty(const Graph& g, const char* what) {
    if (g.n() == 0) throw error(std::string(what) + " is undefined for an empty graph (n=0)");
}

} // namespace detail

inline CentralityVector pagerank(const Graph& g, double alpha = kDefaultAlpha,
                                 double tol = kDefaultTol, std::size_t max_iter = kDefaultMaxIter,
                                 IterationTrace* trace = nullptr) {
    detail::require_nonempty(g, "pagerank");
    if (!(alpha >= 0.0 && alpha < 1.0)) throw error("damping factor must lie in [0,1)");
    const std::size_t n = g.n();
    const detail::PageRankOperator op(g, alpha);
    std::vector<double> x(n, 1.0 / static_cast<double>(n)), next(n);
    if (trace) trace->iterates.assign(1, x);
    double resid = std::numeric_limits<double>::infinity();
    std::size_t it = 0;
    while (it < max_iter) {
        op.step(x, next);
        ++it;
        resid = detail::sum_abs_diff(next, x);
        x.swap(next);
        if (trace) trace->iterates.push_back(x);
        if (resid < tol) break;
    }
    if (!(resid < tol))
        throw error("pagerank did not converge within " + std::to_string(max_iter) +
                    " iterations (residual " + std::to_string(resid) + ")");
    // guard against drift; the iteration preserves total mass up to rounding
    const double s = detail::norm1(x);
    for (double& v : x) v /= s;
    return {std::move(x), CentralityKind::PageRank, VectorNorm::One, it, resid};
}

// Spectral-radius estimate by plain power steps on A^T: geometric mean of the
// norm growth factors over the trailing window. The window length is a
// multiple of 12, so oscillations of period 2, 3, 4, and 6 average out
// exactly over whole cycles.
inline double spectral_radius_estimate(const Graph& g, std::size_t steps = 200) {
    detail::require_nonempty(g, "spectral radius");
    if (g.m() == 0) return 0.0;
    std::vector<double> z(g.n(), 1.0), next(g.n());
    const double z0 = detail::norm2(z);
    for (double& v : z) v /= z0;
    std::vector<double> factors;
    factors.reserve(steps);
    for (std::size_t i = 0; i < steps; ++i) {
        detail::apply_transposed(g, z, next);
        const double nn = detail::norm2(next);
        if (nn == 0.0) return 0.0; // nilpotent: every long enough walk dies out
        for (double& v : next) v /= nn;
        z.swap(next);
        factors.push_back(nn);
    }
    std::size_t window = (steps / 2 / 12) * 12;
    if (window == 0) window = steps;
    double log_sum = 0;
    for (std::size_t i = factors.size() - window; i < factors.size(); ++i)
        log_sum += std::log(factors[i]);
    return std::exp(log_sum / static_cast<double>(window));
}

namespace detail {

// Power iteration with per-step normalization plus a running endpoint-corrected
// average of the normalized iterates:
//   T_m = (sum_{i=0..m} z_i - (z_0 + z_m)/2) / m.
// If the iterates settle, the current iterate is the answer. If they oscillate
// between two accumulation points (dominant eigenvalues +/-lambda, e.g.
// bipartite graphs), T_m equals their midpoint exactly at every m, which is
// the averaged limit the Cesaro definition prescribes.
class AveragedPowerIteration {
public:
    explicit AveragedPowerIteration(std::vector<double> start) : z_(std::move(start)) {
        const double nn = norm2(z_);
        for (double& v : z_) v /= nn;
        first_ = z_;
        sum_ = z_;
    }

    // feeds the next un-normalized iterate; returns the step's SAE between
    // successive normalized iterates, or an error message via throw on zero
    double advance(std::vector<double>&& raw, const char* zero_msg) {
        const double nn = norm2(raw);
        if (nn == 0.0) throw error(zero_msg);
        for (double& v : raw) v /= nn;
        const double fast = sum_abs_diff(raw, z_);
        z_ = std::move(raw);
        for (std::size_t i = 0; i < sum_.size(); ++i) sum_[i] += z_[i];
        ++m_;
        return fast;
    }

    const std::vector<double>& iterate() const { return z_; }

    std::vector<double> readout() const {
        std::vector<double> r(sum_.size());
        for (std::size_t i = 0; i < r.size(); ++i) {
            const double v = (sum_[i] - 0.5 * (first_[i] + z_[i])) / static_cast<double>(m_);
            r[i] = v > 0.0 ? v : 0.0; // rounding can leave tiny negatives
        }
        const double nn = norm2(r);
        for (double& v : r) v /= nn;
        return r;
    }

private:
    std::vector<double> z_;
    std::vector<double> first_;
    std::vector<double> sum_; // sum of z_0..z_m
    std::size_t m_ = 0;
};

// Successive endpoint-corrected averages differ by rounding noise once the
// oscillation is balanced; the stop threshold gets a floor scaled to n so
// accumulated ulps cannot stall convergence.
inline double cesaro_stop(double tol, std::size_t n) {
    return std::max(tol, 32.0 * static_cast<double>(n) * std::numeric_limits<double>::epsilon());
}

} // namespace detail

inline CentralityVector eigenvector_centrality(const Graph& g, double tol = kDefaultTol,
                                               std::size_t max_iter = kDefaultMaxIter) {
    detail::require_nonempty(g, "eigenvector centrality");
    if (g.m() == 0) throw error("eigenvector centrality undefined: graph has no edges");
    detail::AveragedPowerIteration avg(std::vector<double>(g.n(), 1.0));
    const double stop = detail::cesaro_stop(tol, g.n());
    std::vector<double> prev_readout, next;
    for (std::size_t it = 1; it <= max_iter; ++it) {
        detail::apply_transposed(g, avg.iterate(), next);
        const double fast = avg.advance(
            std::move(next), "eigenvector centrality undefined: spectral radius is zero");
        next = {};
        if (fast < tol)
            return {avg.iterate(), CentralityKind::Eigenvector, VectorNorm::Two, it, fast};
        std::vector<double> r = avg.readout();
        if (!prev_readout.empty()) {
            const double diff = detail::sum_abs_diff(r, prev_readout);
            if (diff < stop)
                return {std::move(r), CentralityKind::Eigenvector, VectorNorm::Two, it, diff};
        }
        prev_readout = std::move(r);
    }
    throw error("eigenvector centrality did not converge within " + std::to_string(max_iter) +
                " iterations");
}

inline CentralityVector katz(const Graph& g, std::optional<double> attenuation = std::nullopt,
                             double tol = kDefaultTol, std::size_t max_iter = kDefaultMaxIter) {
    detail::require_nonempty(g, "katz centrality");
    const double radius = spectral_radius_estimate(g);
    const double a = attenuation ? *attenuation : (radius > 0.0 ? 0.5 / radius : 0.5);
    if (!(a > 0.0)) throw error("attenuation must be positive");
    if (a * radius >= 1.0)
        throw error("attenuation too large: a = " + std::to_string(a) +
                    " with spectral radius estimate " + std::to_string(radius) +
                    " makes the series divergent");
    std::vector<double> sum(g.n(), 1.0), term(g.n(), 1.0), next(g.n());
    double increment = detail::norm1(term);
    std::size_t it = 0;
    while (increment >= tol && it < max_iter) {
        detail::apply_transposed(g, term, next);
        for (double& v : next) v *= a;
        term.swap(next);
        for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += term[i];
        increment = detail::norm1(term);
        ++it;
    }
    if (increment >= tol)
        throw error("katz series did not converge within " + std::to_string(max_iter) +
                    " terms (increment " + std::to_string(increment) + ")");
    return {std::move(sum), CentralityKind::Katz, VectorNorm::Raw, it, increment};
}

// Alternating authority/hub iteration from an all-ones start, each half-step
// normalized. A^T A is positive semidefinite, so the iterates themselves
// converge; the averaged readout is kept as a fallback stop for degenerate
// spectra.
inline std::pair<CentralityVector, CentralityVector> hits(const Graph& g, double tol = kDefaultTol,
                                                          std::size_t max_iter = kDefaultMaxIter) {
    detail::require_nonempty(g, "hits");
    if (g.m() == 0) throw error("hits undefined: graph has no edges");
    detail::AveragedPowerIteration auth(std::vector<double>(g.n(), 1.0));
    detail::AveragedPowerIteration hub(std::vector<double>(g.n(), 1.0));
    const double stop = detail::cesaro_stop(tol, g.n());
    std::vector<double> next, prev_a, prev_h;
    for (std::size_t it = 1; it <= max_iter; ++it) {
        detail::apply_transposed(g, hub.iterate(), next);
        const double fa = auth.advance(std::move(next), "hits undefined: zero authority iterate");
        next = {};
        detail::apply_plain(g, auth.iterate(), next);
        const double fh = hub.advance(std::move(next), "hits undefined: zero hub iterate");
        next = {};
        const double fast = std::max(fa, fh);
        if (fast < tol)
            return {{auth.iterate(), CentralityKind::Authority, VectorNorm::Two, it, fast},
                    {hub.iterate(), CentralityKind::Hub, VectorNorm::Two, it, fast}};
        std::vector<double> ra = auth.readout(), rh = hub.readout();
        if (!prev_a.empty()) {
            const double diff = std::max(detail::sum_abs_diff(ra, prev_a),
                                         detail::sum_abs_diff(rh, prev_h));
            if (diff < stop)
                return {{std::move(ra), CentralityKind::Authority, VectorNorm::Two, it, diff},
                        {std::move(rh), CentralityKind::Hub, VectorNorm::Two, it, diff}};
        }
        prev_a = std::move(ra);
        prev_h = std::move(rh);
    }
    throw error("hits did not converge within " + std::to_string(max_iter) + " iterations");
}

// Iteration selector for exact traces: the PageRank transition (with its
// dangling augmentation and fixed teleport term) or the plain x -> A^T x map.
struct PowerKind {
    enum class Kind { PageRank, Eigenvector };
    Kind kind = Kind::Eigenvector;
    double alpha = kDefaultAlpha;

    static PowerKind pagerank_kind(double alpha = kDefaultAlpha) {
        return {Kind::PageRank, alpha};
    }
    static PowerKind eigenvector_kind() { return {Kind::Eigenvector, 0.0}; }
};

inline IterationTrace power_iterates(const Graph& g, const PowerKind& kind, std::size_t t_max,
                                     const std::vector<double>& start) {
    detail::require_nonempty(g, "power iteration");
    if (start.size() != g.n()) throw error("start vector length does not match graph");
    for (double v : start)
        if (!(v >= 0.0) || !std::isfinite(v)) throw error("start vector must be nonnegative and finite");
    IterationTrace trace;
    trace.iterates.reserve(t_max + 1);
    trace.iterates.push_back(start);
    if (kind.kind == PowerKind::Kind::PageRank) {
        if (!(kind.alpha >= 0.0 && kind.alpha < 1.0)) throw error("damping factor must lie in [0,1)");
        const detail::PageRankOperator op(g, kind.alpha);
        std::vector<double> next(g.n());
        for (std::size_t t = 0; t < t_max; ++t) {
            op.step(trace.iterates.back(), next);
            trace.iterates.push_back(next);
        }
    } else {
        std::vector<double> next(g.n());
        for (std::size_t t = 0; t < t_max; ++t) {
            detail::apply_transposed(g, trace.iterates.back(), next);
            trace.iterates.push_back(next);
        }
    }
    return trace;
}

// Uniform starting vector with unit 1-norm: the start the experiment protocol
// prescribes for PageRank traces.
inline std::vector<double> uniform_start(const Graph& g) {
    detail::require_nonempty(g, "start vector");
    return std::vector<double>(g.n(), 1.0 / static_cast<double>(g.n()));
}

} // namespace nest
