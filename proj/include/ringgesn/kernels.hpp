#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "ringgesn/errors.hpp"
#include "ringgesn/matrix.hpp"

namespace ringgesn {

/// out = states * A, i.e. column v of `out` is the sum of the state columns of N(v).
inline void propagate_into(const DenseMatrix& states, const AdjacencyCSR& adjacency,
                           DenseMatrix& out) {
    if (states.cols() != adjacency.num_vertices())
        throw DimensionError("propagate: states.cols != adjacency.num_vertices");
    if (out.rows() != states.rows() || out.cols() != states.cols())
        out = DenseMatrix(states.rows(), states.cols());
    const std::size_t n = adjacency.num_vertices();
    for (std::size_t h = 0; h < states.rows(); ++h) {
        const double* src = states.row(h).data();
        double* dst = out.row(h).data();
        for (std::size_t v = 0; v < n; ++v) {
            double acc = 0.0;
            for (auto u : adjacency.neighbors(v)) acc += src[u];
            dst[v] = acc;
        }
    }
}

inline DenseMatrix propagate(const DenseMatrix& states, const AdjacencyCSR& adjacency) {
    DenseMatrix out;
    propagate_into(states, adjacency, out);
    return out;
}

/// W * m for a one-nonzero-per-row W.
inline DenseMatrix apply_one_hop(const SparseOneHop& w, const DenseMatrix& m) {
    if (w.num_rows() != m.rows()) throw DimensionError("apply_one_hop: w.num_rows != m.rows");
    DenseMatrix out(m.rows(), m.cols());
    for (std::size_t i = 0; i < w.num_rows(); ++i) {
        const auto& e = w.entry(i);
        if (!e) continue;
        auto src = m.row(e->column);
        auto dst = out.row(i);
        for (std::size_t j = 0; j < dst.size(); ++j) dst[j] = e->weight * src[j];
    }
    return out;
}

/// Exact spectral radius of a one-nonzero-per-row matrix.
///
/// The entries define a partial map i -> column(i). Nodes on trees feeding a
/// cycle only contribute zero eigenvalues, so the spectrum is the union of the
/// cycles' spectra: a cycle of length L with weights w_1..w_L has eigenvalues
/// of modulus |w_1 ... w_L|^(1/L). Runs in O(n).
inline double spectral_radius_one_hop(const SparseOneHop& w) {
    const std::size_t n = w.num_rows();
    constexpr std::uint32_t unvisited = std::numeric_limits<std::uint32_t>::max();
    std::vector<std::uint32_t> walk_id(n, unvisited);
    std::vector<std::size_t> position(n, 0);
    std::vector<std::size_t> path;
    double radius = 0.0;

    for (std::size_t start = 0; start < n; ++start) {
        if (walk_id[start] != unvisited) continue;
        path.clear();
        std::size_t node = start;
        const auto id = static_cast<std::uint32_t>(start);
        while (true) {
            if (walk_id[node] != unvisited) {
                if (walk_id[node] == id) {
                    // Closed a new cycle: path[position[node]..] are its members.
                    double log_sum = 0.0;
                    bool zero = false;
                    const std::size_t first = position[node];
                    for (std::size_t p = first; p < path.size(); ++p) {
                        const double a = std::abs(w.entry(path[p])->weight);
                        if (a == 0.0) {
                            zero = true;
                            break;
                        }
                        log_sum += std::log(a);
                    }
                    if (!zero) {
                        const double len = static_cast<double>(path.size() - first);
                        radius = std::max(radius, std::exp(log_sum / len));
                    }
                }
                break;
            }
            walk_id[node] = id;
            position[node] = path.size();
            path.push_back(node);
            const auto& e = w.entry(node);
            if (!e) break;
            node = e->column;
        }
    }
    return radius;
}

inline double frobenius_distance(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw DimensionError("frobenius_distance: shape mismatch");
    const double* pa = a.data();
    const double* pb = b.data();
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = pa[i] - pb[i];
        acc += d * d;
    }
    return std::sqrt(acc);
}

inline double frobenius_norm(const DenseMatrix& a) {
    double acc = 0.0;
    for (double v : a.values()) acc += v * v;
    return std::sqrt(acc);
}

}  // namespace ringgesn
