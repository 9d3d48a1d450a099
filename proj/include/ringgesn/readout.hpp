#pragma once

#include <cmath>
#include <numeric>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "ringgesn/errors.hpp"
#include "ringgesn/graph.hpp"
#include "ringgesn/matrix.hpp"
#include "ringgesn/ridge.hpp"

namespace ringgesn {

/// Linear readout on sum-pooled embeddings. The last weight column is the bias.
struct Readout {
    DenseMatrix weights;  // N_O x (N_H + 1)
    std::size_t num_classes = 2;
    double beta = 0.0;

    std::size_t hidden_units() const noexcept { return weights.cols() - 1; }
};

inline std::vector<double> predict_scores(const Readout& readout, std::span<const double> embedding) {
    if (embedding.size() + 1 != readout.weights.cols())
        throw DimensionError("predict_scores: embedding has length " + std::to_string(embedding.size()) +
                             ", readout expects " + std::to_string(readout.hidden_units()));
    std::vector<double> scores(readout.weights.rows());
    for (std::size_t o = 0; o < scores.size(); ++o) {
        auto w = readout.weights.row(o);
        double s = w[embedding.size()];
        for (std::size_t j = 0; j < embedding.size(); ++j) s += w[j] * embedding[j];
        scores[o] = s;
    }
    return scores;
}

/// Binary: class 1 when the score is >= 0. Multi-class: argmax, lowest index on ties.
inline std::size_t decode(std::size_t num_classes, std::span<const double> scores) {
    if (num_classes == 2) return scores[0] >= 0.0 ? 1 : 0;
    std::size_t best = 0;
    for (std::size_t c = 1; c < scores.size(); ++c)
        if (scores[c] > scores[best]) best = c;
    return best;
}

inline std::size_t decode(const Readout& readout, std::span<const double> scores) {
    if (scores.size() != readout.weights.rows()) throw DimensionError("decode: wrong number of scores");
    return decode(readout.num_classes, scores);
}

/// Ridge readout problem on a subset of pooled embeddings. The factorization
/// is shared by every regularizer value.
class ReadoutSolver {
public:
    ReadoutSolver(std::span<const std::vector<double>> pooled, std::span<const std::size_t> indices,
                  const TargetEncoding& targets)
        : num_classes_(targets.num_classes), system_(build(pooled, indices, targets)) {}

    Readout solve(double beta) const {
        return Readout{system_.solve(beta), num_classes_, beta};
    }

    /// Weights as an Eigen matrix, avoiding the DenseMatrix copy in hot loops.
    Eigen::MatrixXd solve_eigen(double beta) const { return system_.solve_eigen(beta); }

private:
    static RidgeSystem build(std::span<const std::vector<double>> pooled,
                             std::span<const std::size_t> indices, const TargetEncoding& targets) {
        if (indices.empty()) throw DimensionError("readout: no training samples");
        const auto d = static_cast<Eigen::Index>(pooled[indices[0]].size() + 1);
        const auto m = static_cast<Eigen::Index>(indices.size());
        const auto outputs = static_cast<Eigen::Index>(targets.outputs());
        Eigen::MatrixXd z(d, m);
        Eigen::MatrixXd y(outputs, m);
        for (Eigen::Index s = 0; s < m; ++s) {
            const auto& e = pooled[indices[static_cast<std::size_t>(s)]];
            if (static_cast<Eigen::Index>(e.size()) + 1 != d)
                throw DimensionError("readout: embeddings have different lengths");
            for (Eigen::Index j = 0; j + 1 < d; ++j) z(j, s) = e[static_cast<std::size_t>(j)];
            z(d - 1, s) = 1.0;
            for (Eigen::Index o = 0; o < outputs; ++o)
                y(o, s) = targets.encoded(static_cast<std::size_t>(o), indices[static_cast<std::size_t>(s)]);
        }
        Eigen::MatrixXd gram = z * z.transpose();
        Eigen::MatrixXd cross = y * z.transpose();
        return RidgeSystem(gram, cross);
    }

    std::size_t num_classes_;
    RidgeSystem system_;
};

/// Trains on all embeddings: feature matrix [embeddings; 1] and -1/+1 targets.
inline Readout train_readout(std::span<const std::vector<double>> embeddings,
                             const TargetEncoding& targets, double beta) {
    if (embeddings.size() != targets.encoded.cols())
        throw DimensionError("train_readout: embeddings and targets are not aligned");
    std::vector<std::size_t> all(embeddings.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    return ReadoutSolver(embeddings, all, targets).solve(beta);
}

/// Fraction of `indices` whose decoded prediction equals the class target.
inline double accuracy(const Readout& readout, std::span<const std::vector<double>> pooled,
                       std::span<const std::size_t> indices, std::span<const std::size_t> classes) {
    if (indices.empty()) return 0.0;
    std::size_t hits = 0;
    for (auto i : indices) hits += decode(readout, predict_scores(readout, pooled[i])) == classes[i];
    return static_cast<double>(hits) / static_cast<double>(indices.size());
}

}  // namespace ringgesn
