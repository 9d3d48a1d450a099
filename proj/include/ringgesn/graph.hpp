#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ringgesn/errors.hpp"
#include "ringgesn/matrix.hpp"

namespace ringgesn {

using Edge = std::pair<std::uint32_t, std::uint32_t>;

/// Undirected, vertex-labelled graph. Immutable after construction.
///
/// Edges are stored once per unordered pair with first < second. Vertex
/// labels are the columns of an N_I x N_g matrix (U).
class Graph {
public:
    Graph(std::size_t num_vertices, std::vector<Edge> edges, DenseMatrix labels)
        : labels_(std::move(labels)) {
        if (num_vertices == 0) throw MalformedDatasetError("graph has no vertices");
        if (labels_.cols() != num_vertices)
            throw MalformedDatasetError("graph: label matrix has " + std::to_string(labels_.cols()) +
                                        " columns for " + std::to_string(num_vertices) + " vertices");
        if (labels_.rows() == 0) throw MalformedDatasetError("graph: input labels are empty");
        for (auto& [a, b] : edges) {
            if (a >= num_vertices || b >= num_vertices)
                throw MalformedDatasetError("graph: edge endpoint out of range");
            if (a == b) throw MalformedDatasetError("graph: self-loop on vertex " + std::to_string(a));
            if (a > b) std::swap(a, b);
        }
        std::sort(edges.begin(), edges.end());
        if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
            throw MalformedDatasetError("graph: duplicate edge");
        edges_ = std::move(edges);
        adjacency_ = AdjacencyCSR(num_vertices, edges_);
    }

    std::size_t num_vertices() const noexcept { return labels_.cols(); }
    std::size_t input_dim() const noexcept { return labels_.rows(); }
    const std::vector<Edge>& edges() const noexcept { return edges_; }
    const AdjacencyCSR& adjacency() const noexcept { return adjacency_; }
    const DenseMatrix& labels() const noexcept { return labels_; }

    std::vector<double> label(std::size_t v) const {
        std::vector<double> u(input_dim());
        for (std::size_t i = 0; i < u.size(); ++i) u[i] = labels_(i, v);
        return u;
    }

    std::size_t max_degree() const { return adjacency_.max_degree(); }

private:
    std::vector<Edge> edges_;
    DenseMatrix labels_;
    AdjacencyCSR adjacency_;
};

/// Maximum neighbourhood size over the given graphs.
inline std::size_t compute_degree(std::span<const Graph> graphs) {
    std::size_t k = 0;
    for (const auto& g : graphs) k = std::max(k, g.max_degree());
    return k;
}

/// Maximum neighbourhood size over a subset of graphs.
inline std::size_t compute_degree(std::span<const Graph> graphs,
                                  std::span<const std::size_t> indices) {
    std::size_t k = 0;
    for (auto i : indices) k = std::max(k, graphs[i].max_degree());
    return k;
}

/// Graph classification dataset with contiguous class indices 0..num_classes-1.
class Dataset {
public:
    Dataset(std::string name, std::vector<Graph> graphs, std::vector<std::size_t> targets,
            std::size_t num_classes)
        : name_(std::move(name)),
          graphs_(std::move(graphs)),
          targets_(std::move(targets)),
          num_classes_(num_classes) {
        if (graphs_.empty()) throw MalformedDatasetError(name_ + ": dataset has no graphs");
        if (targets_.size() != graphs_.size())
            throw MalformedDatasetError(name_ + ": targets length differs from graph count");
        if (num_classes_ < 2) throw MalformedDatasetError(name_ + ": need at least two classes");
        std::vector<std::size_t> counts(num_classes_, 0);
        for (auto t : targets_) {
            if (t >= num_classes_) throw MalformedDatasetError(name_ + ": class index out of range");
            ++counts[t];
        }
        for (std::size_t c = 0; c < num_classes_; ++c)
            if (counts[c] == 0)
                throw MalformedDatasetError(name_ + ": class " + std::to_string(c) + " never occurs");
        input_dim_ = graphs_.front().input_dim();
        for (const auto& g : graphs_)
            if (g.input_dim() != input_dim_)
                throw MalformedDatasetError(name_ + ": graphs have different input label sizes");
        degree_ = ringgesn::compute_degree(graphs_);
    }

    const std::string& name() const noexcept { return name_; }
    const std::vector<Graph>& graphs() const noexcept { return graphs_; }
    const std::vector<std::size_t>& targets() const noexcept { return targets_; }
    std::size_t size() const noexcept { return graphs_.size(); }
    std::size_t num_classes() const noexcept { return num_classes_; }
    std::size_t input_dim() const noexcept { return input_dim_; }
    std::size_t degree() const noexcept { return degree_; }

    std::size_t total_vertices() const {
        std::size_t n = 0;
        for (const auto& g : graphs_) n += g.num_vertices();
        return n;
    }

    std::vector<std::size_t> class_counts() const {
        std::vector<std::size_t> counts(num_classes_, 0);
        for (auto t : targets_) ++counts[t];
        return counts;
    }

private:
    std::string name_;
    std::vector<Graph> graphs_;
    std::vector<std::size_t> targets_;
    std::size_t num_classes_;
    std::size_t input_dim_ = 0;
    std::size_t degree_ = 0;
};

inline std::size_t compute_degree(const Dataset& dataset) {
    return compute_degree(std::span<const Graph>(dataset.graphs()));
}

/// Targets in -1/+1 form: one output for two classes, one-hot otherwise.
struct TargetEncoding {
    std::size_t num_classes = 0;
    /// N_O x M, one column per graph.
    DenseMatrix encoded;

    std::size_t outputs() const noexcept { return encoded.rows(); }

    std::vector<double> target(std::size_t graph) const {
        std::vector<double> t(encoded.rows());
        for (std::size_t o = 0; o < t.size(); ++o) t[o] = encoded(o, graph);
        return t;
    }
};

inline std::size_t num_outputs(std::size_t num_classes) { return num_classes == 2 ? 1 : num_classes; }

inline TargetEncoding encode_targets(std::span<const std::size_t> targets, std::size_t num_classes) {
    if (num_classes < 2) throw ConfigError("encode_targets: need at least two classes");
    TargetEncoding enc{num_classes, DenseMatrix(num_outputs(num_classes), targets.size(), -1.0)};
    for (std::size_t m = 0; m < targets.size(); ++m) {
        if (targets[m] >= num_classes) throw ConfigError("encode_targets: class index out of range");
        if (num_classes == 2)
            enc.encoded(0, m) = targets[m] == 1 ? 1.0 : -1.0;
        else
            enc.encoded(targets[m], m) = 1.0;
    }
    return enc;
}

inline TargetEncoding encode_targets(const Dataset& dataset) {
    return encode_targets(dataset.targets(), dataset.num_classes());
}

}  // namespace ringgesn
