#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ringgesn/errors.hpp"
#include "ringgesn/random.hpp"

namespace ringgesn {

/// K-fold partition of positions 0..M-1.
struct FoldPlan {
    std::size_t num_items = 0;
    std::vector<std::vector<std::size_t>> test;   // sorted positions per fold
    std::vector<std::string> warnings;

    std::size_t num_folds() const noexcept { return test.size(); }

    /// Complement of test(fold), sorted.
    std::vector<std::size_t> train(std::size_t fold) const {
        std::vector<bool> held(num_items, false);
        for (auto i : test.at(fold)) held[i] = true;
        std::vector<std::size_t> out;
        out.reserve(num_items - test[fold].size());
        for (std::size_t i = 0; i < num_items; ++i)
            if (!held[i]) out.push_back(i);
        return out;
    }

    bool operator==(const FoldPlan&) const = default;
};

/// Stratified folds: within each class (ascending class order) the positions
/// are shuffled with Rng(seed) and dealt round-robin, the dealing cursor
/// continuing from one class to the next so fold sizes stay balanced.
inline FoldPlan stratified_folds(std::span<const std::size_t> classes, std::size_t num_folds,
                                 std::uint64_t seed) {
    if (num_folds < 2) throw ConfigError("stratified_folds: need at least 2 folds");
    if (num_folds > classes.size())
        throw ConfigError("stratified_folds: " + std::to_string(num_folds) + " folds for " +
                          std::to_string(classes.size()) + " items");
    std::size_t num_classes = 0;
    for (auto c : classes) num_classes = std::max(num_classes, c + 1);
    std::vector<std::vector<std::size_t>> members(num_classes);
    for (std::size_t i = 0; i < classes.size(); ++i) members[classes[i]].push_back(i);

    FoldPlan plan;
    plan.num_items = classes.size();
    plan.test.resize(num_folds);
    Rng rng(seed);
    std::size_t cursor = 0;
    for (std::size_t c = 0; c < num_classes; ++c) {
        auto& m = members[c];
        if (!m.empty() && m.size() < num_folds)
            plan.warnings.push_back("class " + std::to_string(c) + " has " + std::to_string(m.size()) +
                                    " members for " + std::to_string(num_folds) + " folds");
        rng.shuffle(std::span<std::size_t>(m));
        for (auto i : m) {
            plan.test[cursor].push_back(i);
            cursor = (cursor + 1) % num_folds;
        }
    }
    for (auto& f : plan.test) std::sort(f.begin(), f.end());
    return plan;
}

}  // namespace ringgesn
