#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ringgesn/errors.hpp"
#include "ringgesn/graph.hpp"

namespace ringgesn {

namespace detail {

/// Reads a TUDataset text file: one record per line, integers separated by a
/// comma and optional spaces. Blank lines are skipped.
inline std::vector<std::vector<std::int64_t>> read_int_rows(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw LoadError("cannot open dataset file " + path.string());
    std::vector<std::vector<std::int64_t>> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::vector<std::int64_t> row;
        std::string_view rest(line);
        while (true) {
            const auto start = rest.find_first_not_of(" \t\r");
            if (start == std::string_view::npos) break;
            rest.remove_prefix(start);
            std::int64_t value = 0;
            const auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), value);
            if (ec != std::errc{})
                throw MalformedDatasetError(path.filename().string() + ":" + std::to_string(line_no) +
                                            ": expected an integer");
            row.push_back(value);
            rest.remove_prefix(static_cast<std::size_t>(ptr - rest.data()));
            const auto next = rest.find_first_not_of(" \t\r");
            if (next == std::string_view::npos) break;
            if (rest[next] != ',')
                throw MalformedDatasetError(path.filename().string() + ":" + std::to_string(line_no) +
                                            ": expected ','");
            rest.remove_prefix(next + 1);
        }
        if (!row.empty()) rows.push_back(std::move(row));
    }
    return rows;
}

inline std::filesystem::path require_file(const std::filesystem::path& dir, const std::string& file) {
    auto p = dir / file;
    if (!std::filesystem::is_regular_file(p)) throw LoadError("missing dataset file " + p.string());
    return p;
}

}  // namespace detail

/// Directory holding `<name>_*.txt` inside a data root.
inline std::filesystem::path dataset_directory(const std::filesystem::path& root, const std::string& name) {
    return root / name;
}

inline bool dataset_present(const std::filesystem::path& root, const std::string& name) {
    return std::filesystem::is_regular_file(dataset_directory(root, name) / (name + "_A.txt"));
}

/// Loads `<root>/<name>_{A,graph_indicator,graph_labels[,node_labels]}.txt`.
///
/// Vertex ids in the files are 1-based and global; they become 0-based ids
/// local to each graph, in order of appearance in the indicator file. Edge
/// directions collapse into one undirected edge, self-loops are dropped.
/// Node labels are one-hot over the sorted distinct values; without a node
/// label file every vertex gets the constant label [1]. Graph labels map to
/// 0..C-1 by ascending raw value.
inline Dataset parse_tudataset(const std::filesystem::path& root, const std::string& name) {
    const auto edges_path = detail::require_file(root, name + "_A.txt");
    const auto indicator_path = detail::require_file(root, name + "_graph_indicator.txt");
    const auto labels_path = detail::require_file(root, name + "_graph_labels.txt");
    const auto node_labels_path = root / (name + "_node_labels.txt");

    const auto indicator_rows = detail::read_int_rows(indicator_path);
    const auto label_rows = detail::read_int_rows(labels_path);
    const std::size_t num_graphs = label_rows.size();
    if (num_graphs == 0) throw MalformedDatasetError(name + ": no graph labels");

    // Global vertex -> (graph, local index).
    const std::size_t num_vertices = indicator_rows.size();
    std::vector<std::uint32_t> graph_of(num_vertices);
    std::vector<std::uint32_t> local_of(num_vertices);
    std::vector<std::size_t> graph_sizes(num_graphs, 0);
    for (std::size_t v = 0; v < num_vertices; ++v) {
        const auto g = indicator_rows[v].front();
        if (g < 1 || static_cast<std::size_t>(g) > num_graphs)
            throw MalformedDatasetError(name + ": graph indicator " + std::to_string(g) +
                                        " outside 1.." + std::to_string(num_graphs));
        graph_of[v] = static_cast<std::uint32_t>(g - 1);
        local_of[v] = static_cast<std::uint32_t>(graph_sizes[g - 1]++);
    }
    for (std::size_t g = 0; g < num_graphs; ++g)
        if (graph_sizes[g] == 0)
            throw MalformedDatasetError(name + ": graph " + std::to_string(g + 1) + " has no vertices");

    std::vector<std::vector<Edge>> edges(num_graphs);
    for (const auto& row : detail::read_int_rows(edges_path)) {
        if (row.size() != 2) throw MalformedDatasetError(name + "_A.txt: expected two vertex ids per line");
        const auto a = row[0], b = row[1];
        if (a < 1 || b < 1 || static_cast<std::size_t>(a) > num_vertices ||
            static_cast<std::size_t>(b) > num_vertices)
            throw MalformedDatasetError(name + "_A.txt: vertex id out of range");
        const auto ga = graph_of[a - 1], gb = graph_of[b - 1];
        if (ga != gb)
            throw MalformedDatasetError(name + "_A.txt: edge (" + std::to_string(a) + ", " +
                                        std::to_string(b) + ") joins different graphs");
        auto la = local_of[a - 1], lb = local_of[b - 1];
        if (la == lb) continue;
        if (la > lb) std::swap(la, lb);
        edges[ga].emplace_back(la, lb);
    }
    for (auto& e : edges) {
        std::sort(e.begin(), e.end());
        e.erase(std::unique(e.begin(), e.end()), e.end());
    }

    // Per-vertex one-hot position, or nullopt for the constant label.
    std::optional<std::vector<std::size_t>> label_slot;
    std::size_t input_dim = 1;
    if (std::filesystem::is_regular_file(node_labels_path)) {
        const auto node_rows = detail::read_int_rows(node_labels_path);
        if (node_rows.size() != num_vertices)
            throw MalformedDatasetError(name + "_node_labels.txt: " + std::to_string(node_rows.size()) +
                                        " labels for " + std::to_string(num_vertices) + " vertices");
        std::map<std::int64_t, std::size_t> vocabulary;
        for (const auto& r : node_rows) vocabulary.emplace(r.front(), 0);
        std::size_t slot = 0;
        for (auto& [value, index] : vocabulary) index = slot++;
        input_dim = vocabulary.size();
        label_slot.emplace(num_vertices);
        for (std::size_t v = 0; v < num_vertices; ++v) (*label_slot)[v] = vocabulary[node_rows[v].front()];
    }

    std::vector<DenseMatrix> labels;
    labels.reserve(num_graphs);
    for (std::size_t g = 0; g < num_graphs; ++g)
        labels.emplace_back(input_dim, graph_sizes[g], label_slot ? 0.0 : 1.0);
    if (label_slot)
        for (std::size_t v = 0; v < num_vertices; ++v)
            labels[graph_of[v]]((*label_slot)[v], local_of[v]) = 1.0;

    std::map<std::int64_t, std::size_t> classes;
    for (const auto& r : label_rows) classes.emplace(r.front(), 0);
    std::size_t next_class = 0;
    for (auto& [raw, index] : classes) index = next_class++;
    std::vector<std::size_t> targets;
    targets.reserve(num_graphs);
    for (const auto& r : label_rows) targets.push_back(classes[r.front()]);

    std::vector<Graph> graphs;
    graphs.reserve(num_graphs);
    for (std::size_t g = 0; g < num_graphs; ++g)
        graphs.emplace_back(graph_sizes[g], std::move(edges[g]), std::move(labels[g]));
    return Dataset(name, std::move(graphs), std::move(targets), classes.size());
}

}  // namespace ringgesn
