#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ringgesn/errors.hpp"
#include "ringgesn/graph.hpp"
#include "ringgesn/kernels.hpp"
#include "ringgesn/matrix.hpp"
#include "ringgesn/parallel.hpp"
#include "ringgesn/pi_digits.hpp"
#include "ringgesn/random.hpp"

namespace ringgesn {

enum class Family { GESN, GRN, MGN };

inline std::string_view to_string(Family f) {
    switch (f) {
        case Family::GESN: return "GESN";
        case Family::GRN: return "GRN";
        case Family::MGN: return "MGN";
    }
    return "?";
}

struct ReservoirConfig {
    Family family = Family::GESN;
    std::size_t hidden_units = 0;      // N_H
    std::size_t input_dim = 0;         // N_I
    double input_scaling = 0.0;        // omega
    double spectral_radius = 0.0;      // effective radius rho = rho(W) * k
    std::size_t degree = 1;            // k
    std::uint64_t seed = 0;            // ignored by MGN

    void validate() const {
        if (hidden_units == 0 || input_dim == 0 || degree == 0)
            throw ConfigError("reservoir: hidden_units, input_dim and degree must be >= 1");
        if (!(input_scaling > 0.0 && input_scaling < 1.0))
            throw ConfigError("reservoir: input scaling must lie in (0,1)");
        if (!(spectral_radius > 0.0 && spectral_radius < 1.0))
            throw ConfigError("reservoir: effective spectral radius must lie in (0,1)");
    }
};

/// Untrained reservoir: dense input matrix V (N_H x N_I) and one-hop recurrent W.
struct ReservoirWeights {
    DenseMatrix input;
    SparseOneHop recurrent;

    std::size_t hidden_units() const noexcept { return input.rows(); }
    std::size_t input_dim() const noexcept { return input.cols(); }

    bool operator==(const ReservoirWeights&) const = default;
};

struct StopRule {
    double epsilon = 1e-3;
    std::size_t max_iterations = 50;

    void validate() const {
        if (!(epsilon > 0.0)) throw ConfigError("stop rule: epsilon must be > 0");
        if (max_iterations == 0) throw ConfigError("stop rule: max_iterations must be >= 1");
    }
};

struct EmbeddingResult {
    DenseMatrix states;            // N_H x N_g
    std::vector<double> pooled;    // row sums of states
    std::size_t iterations_used = 0;
    bool converged = false;
};

namespace detail {

inline DenseMatrix random_input_matrix(Rng& rng, std::size_t rows, std::size_t cols, double scale) {
    DenseMatrix v(rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) v(r, c) = rng.uniform(-scale, scale);
    return v;
}

inline double nonzero_uniform(Rng& rng) {
    double w = 0.0;
    while (w == 0.0) w = rng.uniform(-1.0, 1.0);
    return w;
}

inline void require_family(const ReservoirConfig& c, Family f) {
    c.validate();
    if (c.family != f)
        throw ConfigError("reservoir: expected family " + std::string(to_string(f)) + ", got " +
                          std::string(to_string(c.family)));
}

}  // namespace detail

/// GESN: V ~ U[-omega, omega], W with one random entry per row, raw weights
/// ~ U[-1, 1], rescaled so that rho(W) * k equals the configured radius.
///
/// Random draws, in order: V row-major, then W weights row by row, then W
/// columns row by row (redrawn, up to 100 times, while W has no cycle).
inline ReservoirWeights build_gesn(const ReservoirConfig& config) {
    detail::require_family(config, Family::GESN);
    const std::size_t n = config.hidden_units;
    Rng rng(config.seed);
    ReservoirWeights w{detail::random_input_matrix(rng, n, config.input_dim, config.input_scaling),
                       SparseOneHop(n)};
    std::vector<double> weights(n);
    for (auto& x : weights) x = detail::nonzero_uniform(rng);

    double raw_radius = 0.0;
    for (int attempt = 0; attempt < 100 && raw_radius == 0.0; ++attempt) {
        for (std::size_t i = 0; i < n; ++i)
            w.recurrent.set(i, static_cast<std::uint32_t>(rng.below(n)), weights[i]);
        raw_radius = spectral_radius_one_hop(w.recurrent);
    }
    if (raw_radius == 0.0) {
        // Unreachable with nonzero weights (a total map has a cycle); kept as a hard guarantee.
        if (n == 1) {
            w.recurrent.set(0, 0, weights[0]);
        } else {
            w.recurrent.set(0, 1, weights[0]);
            w.recurrent.set(1, 0, weights[1]);
        }
        raw_radius = spectral_radius_one_hop(w.recurrent);
    }
    w.recurrent.scale(config.spectral_radius /
                      (raw_radius * static_cast<double>(config.degree)));
    return w;
}

/// GRN: V as in GESN, W = (rho / k) P with P the ring permutation.
inline ReservoirWeights build_grn(const ReservoirConfig& config) {
    detail::require_family(config, Family::GRN);
    Rng rng(config.seed);
    const double lambda = config.spectral_radius / static_cast<double>(config.degree);
    return {detail::random_input_matrix(rng, config.hidden_units, config.input_dim, config.input_scaling),
            SparseOneHop::ring(config.hidden_units, lambda)};
}

/// MGN: V = omega * Pi (signs from the digits of pi), W = (rho / k) P. No randomness.
inline ReservoirWeights build_mgn(const ReservoirConfig& config) {
    detail::require_family(config, Family::MGN);
    DenseMatrix v = pi_sign_matrix(config.hidden_units, config.input_dim);
    for (std::size_t r = 0; r < v.rows(); ++r)
        for (auto& x : v.row(r)) x *= config.input_scaling;
    const double lambda = config.spectral_radius / static_cast<double>(config.degree);
    return {std::move(v), SparseOneHop::ring(config.hidden_units, lambda)};
}

inline ReservoirWeights build_reservoir(const ReservoirConfig& config) {
    switch (config.family) {
        case Family::GESN: return build_gesn(config);
        case Family::GRN: return build_grn(config);
        case Family::MGN: return build_mgn(config);
    }
    throw ConfigError("reservoir: unknown family");
}

/// Iterates X <- tanh(V U + W X A) from `initial` (zero when absent) until the
/// Frobenius distance between successive states drops below epsilon or
/// max_iterations is reached. `graph_index` only labels errors.
inline EmbeddingResult encode_graph(const ReservoirWeights& weights, const Graph& graph,
                                    const StopRule& stop,
                                    const DenseMatrix* initial = nullptr,
                                    std::size_t graph_index = 0) {
    stop.validate();
    if (graph.input_dim() != weights.input_dim())
        throw DimensionError("encode_graph: graph labels have size " + std::to_string(graph.input_dim()) +
                             ", reservoir expects " + std::to_string(weights.input_dim()));
    const std::size_t nh = weights.hidden_units();
    const std::size_t nv = graph.num_vertices();
    if (initial && (initial->rows() != nh || initial->cols() != nv))
        throw DimensionError("encode_graph: initial state has wrong shape");

    const DenseMatrix drive = multiply(weights.input, graph.labels());
    const AdjacencyCSR& adj = graph.adjacency();
    EmbeddingResult result;
    DenseMatrix x = initial ? *initial : DenseMatrix(nh, nv);
    DenseMatrix next(nh, nv);

    for (std::size_t t = 0; t < stop.max_iterations; ++t) {
        // Row i of W X A is w_i times the neighbour sums of row column(i) of X.
        double dist2 = 0.0;
        for (std::size_t i = 0; i < nh; ++i) {
            const double* in = drive.row(i).data();
            const double* old = x.row(i).data();
            double* out = next.row(i).data();
            const auto& e = weights.recurrent.entry(i);
            if (e) {
                const double* src = x.row(e->column).data();
                for (std::size_t v = 0; v < nv; ++v) {
                    double acc = 0.0;
                    for (auto u : adj.neighbors(v)) acc += src[u];
                    out[v] = std::tanh(in[v] + e->weight * acc);
                }
            } else {
                for (std::size_t v = 0; v < nv; ++v) out[v] = std::tanh(in[v]);
            }
            for (std::size_t v = 0; v < nv; ++v) {
                const double d = out[v] - old[v];
                dist2 += d * d;
            }
        }
        std::swap(x, next);
        result.iterations_used = t + 1;
        const double dist = std::sqrt(dist2);
        if (!std::isfinite(dist))
            throw EncodingError("encode_graph: non-finite reservoir state on graph " +
                                    std::to_string(graph_index),
                                graph_index);
        if (dist < stop.epsilon) {
            result.converged = true;
            break;
        }
    }
    result.pooled.assign(nh, 0.0);
    for (std::size_t i = 0; i < nh; ++i)
        for (double s : x.row(i)) result.pooled[i] += s;
    result.states = std::move(x);
    return result;
}

/// Encodes every graph; results keep the input order. Independent across
/// graphs, so `jobs` > 1 does not change any value.
inline std::vector<EmbeddingResult> encode_dataset(const ReservoirWeights& weights,
                                                   std::span<const Graph> graphs,
                                                   const StopRule& stop, std::size_t jobs = 1) {
    std::vector<EmbeddingResult> out(graphs.size());
    parallel_for(graphs.size(), jobs, [&](std::size_t i) {
        out[i] = encode_graph(weights, graphs[i], stop, nullptr, i);
    });
    return out;
}

}  // namespace ringgesn
