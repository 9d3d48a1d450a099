#pragma once

#include <algorithm>
#include <cassert>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ringgesn/errors.hpp"

namespace ringgesn {

/// Row-major dense matrix of doubles.
class DenseMatrix {
public:
    DenseMatrix() = default;

    DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    DenseMatrix(std::initializer_list<std::initializer_list<double>> rows) {
        rows_ = rows.size();
        cols_ = rows_ ? rows.begin()->size() : 0;
        data_.reserve(rows_ * cols_);
        for (const auto& r : rows) {
            if (r.size() != cols_) throw DimensionError("DenseMatrix: ragged initializer");
            data_.insert(data_.end(), r.begin(), r.end());
        }
    }

    static DenseMatrix identity(std::size_t n) {
        DenseMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    double& operator()(std::size_t r, std::size_t c) {
        assert(r < rows_ && c < cols_);
        return data_[r * cols_ + c];
    }
    double operator()(std::size_t r, std::size_t c) const {
        assert(r < rows_ && c < cols_);
        return data_[r * cols_ + c];
    }

    std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

    double* data() noexcept { return data_.data(); }
    const double* data() const noexcept { return data_.data(); }
    std::span<const double> values() const noexcept { return data_; }

    void fill(double v) { std::fill(data_.begin(), data_.end(), v); }

    bool operator==(const DenseMatrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

inline DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols() != b.rows()) throw DimensionError("multiply: inner dimensions differ");
    DenseMatrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        auto dst = out.row(i);
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            auto src = b.row(k);
            for (std::size_t j = 0; j < dst.size(); ++j) dst[j] += aik * src[j];
        }
    }
    return out;
}

inline DenseMatrix transpose(const DenseMatrix& a) {
    DenseMatrix t(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
    return t;
}

/// Square matrix with at most one nonzero per row.
///
/// Row i reads from column `column(i)` with weight `weight(i)`; an empty row
/// contributes nothing. The ring permutation is the case column(i) = (i-1) mod n.
class SparseOneHop {
public:
    struct Entry {
        std::uint32_t column;
        double weight;
        bool operator==(const Entry&) const = default;
    };

    SparseOneHop() = default;
    explicit SparseOneHop(std::size_t n) : entries_(n) {}

    /// Ring permutation scaled by `lambda`: unit subdiagonal plus top-right corner.
    static SparseOneHop ring(std::size_t n, double lambda = 1.0) {
        SparseOneHop w(n);
        for (std::size_t i = 0; i < n; ++i)
            w.set(i, static_cast<std::uint32_t>((i + n - 1) % n), lambda);
        return w;
    }

    std::size_t num_rows() const noexcept { return entries_.size(); }

    void set(std::size_t row, std::uint32_t column, double weight) {
        if (row >= entries_.size() || column >= entries_.size())
            throw DimensionError("SparseOneHop::set: index out of range");
        entries_[row] = Entry{column, weight};
    }
    void clear(std::size_t row) { entries_.at(row).reset(); }

    const std::optional<Entry>& entry(std::size_t row) const { return entries_[row]; }

    /// Multiplies every stored weight by `factor`.
    void scale(double factor) {
        for (auto& e : entries_)
            if (e) e->weight *= factor;
    }

    DenseMatrix to_dense() const {
        DenseMatrix d(num_rows(), num_rows());
        for (std::size_t i = 0; i < num_rows(); ++i)
            if (entries_[i]) d(i, entries_[i]->column) = entries_[i]->weight;
        return d;
    }

    bool operator==(const SparseOneHop&) const = default;

private:
    std::vector<std::optional<Entry>> entries_;
};

/// Symmetric adjacency in compressed sparse row layout. No self entries.
class AdjacencyCSR {
public:
    AdjacencyCSR() : offsets_{0} {}

    /// Builds from undirected edges given as 0-based pairs; each pair yields two arcs.
    AdjacencyCSR(std::size_t num_vertices,
                 std::span<const std::pair<std::uint32_t, std::uint32_t>> edges)
        : offsets_(num_vertices + 1, 0) {
        for (auto [a, b] : edges) {
            if (a >= num_vertices || b >= num_vertices)
                throw DimensionError("AdjacencyCSR: edge endpoint out of range");
            if (a == b) throw DimensionError("AdjacencyCSR: self-loop");
            ++offsets_[a + 1];
            ++offsets_[b + 1];
        }
        for (std::size_t v = 0; v < num_vertices; ++v) offsets_[v + 1] += offsets_[v];
        neighbors_.resize(offsets_.back());
        std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
        for (auto [a, b] : edges) {
            neighbors_[cursor[a]++] = b;
            neighbors_[cursor[b]++] = a;
        }
        for (std::size_t v = 0; v < num_vertices; ++v)
            std::sort(neighbors_.begin() + static_cast<std::ptrdiff_t>(offsets_[v]),
                      neighbors_.begin() + static_cast<std::ptrdiff_t>(offsets_[v + 1]));
    }

    std::size_t num_vertices() const noexcept { return offsets_.size() - 1; }
    std::size_t num_arcs() const noexcept { return neighbors_.size(); }

    std::span<const std::uint32_t> neighbors(std::size_t v) const {
        return {neighbors_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
    }
    std::size_t degree(std::size_t v) const { return offsets_[v + 1] - offsets_[v]; }

    std::size_t max_degree() const {
        std::size_t k = 0;
        for (std::size_t v = 0; v < num_vertices(); ++v) k = std::max(k, degree(v));
        return k;
    }

    DenseMatrix to_dense() const {
        DenseMatrix d(num_vertices(), num_vertices());
        for (std::size_t v = 0; v < num_vertices(); ++v)
            for (auto u : neighbors(v)) d(v, u) = 1.0;
        return d;
    }

private:
    std::vector<std::size_t> offsets_;
    std::vector<std::uint32_t> neighbors_;
};

}  // namespace ringgesn
