#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include <Eigen/Dense>

#include "ringgesn/errors.hpp"
#include "ringgesn/folds.hpp"
#include "ringgesn/graph.hpp"
#include "ringgesn/parallel.hpp"
#include "ringgesn/random.hpp"
#include "ringgesn/readout.hpp"
#include "ringgesn/reservoir.hpp"
#include "ringgesn/search.hpp"

namespace ringgesn {

/// Which part of the protocol touches a set of graphs.
enum class Phase {
    Selection,  // inner cross-validation on the outer-training split
    Refit,      // retraining the selected model on the outer-training split
    Test,       // encoding and scoring the outer-test split
};

/// Instrumentation hook for data access. Implementations must be thread-safe.
class AccessObserver {
public:
    virtual ~AccessObserver() = default;
    virtual void on_degree(std::size_t /*fold*/, std::span<const std::size_t> /*graphs*/) {}
    virtual void on_encode(Phase, std::size_t /*fold*/, std::span<const std::size_t> /*graphs*/) {}
    virtual void on_train(Phase, std::size_t /*fold*/, std::span<const std::size_t> /*graphs*/) {}
    virtual void on_score(Phase, std::size_t /*fold*/, std::span<const std::size_t> /*graphs*/) {}
    /// One call per reservoir built during model selection.
    virtual void on_build(Phase, std::size_t /*fold*/, const ReservoirConfig&) {}
};

struct EvalOptions {
    std::size_t jobs = 1;
    AccessObserver* observer = nullptr;
    std::function<void(const std::string&)> log;
};

/// Train/validation pair of dataset indices.
struct Split {
    std::vector<std::size_t> train;
    std::vector<std::size_t> validation;
};

/// Result of one reservoir guess scored on several splits and regularizers.
struct GuessOutcome {
    std::vector<double> accuracy;  // splits x betas, row-major
    bool overflow = false;
    std::size_t encodings = 0;
    std::size_t non_converged = 0;
    std::size_t iterations = 0;
};

/// Pooled embeddings shared between calls with the same reservoir and degree.
class EncodingCache {
public:
    struct Slot {
        explicit Slot(std::size_t n) : pooled(n) {}
        std::mutex mutex;
        std::vector<std::optional<std::vector<double>>> pooled;
    };

    /// Returns the slot for `config`, creating it with `num_graphs` empty entries.
    std::shared_ptr<Slot> slot(const ReservoirConfig& c, std::size_t num_graphs) {
        const Key key{static_cast<int>(c.family), c.hidden_units, c.input_dim, c.degree,
                      c.family == Family::MGN ? 0 : c.seed, c.input_scaling, c.spectral_radius};
        std::lock_guard lock(mutex_);
        auto& entry = entries_[key];
        if (!entry) entry = std::make_shared<Slot>(num_graphs);
        return entry;
    }

    std::size_t size() const {
        std::lock_guard lock(mutex_);
        return entries_.size();
    }

private:
    using Key = std::tuple<int, std::size_t, std::size_t, std::size_t, std::uint64_t, double, double>;
    mutable std::mutex mutex_;
    std::map<Key, std::shared_ptr<Slot>> entries_;
};

namespace detail {

inline double chance_level(std::size_t num_classes) { return 1.0 / static_cast<double>(num_classes); }

inline std::size_t count_hits(const Eigen::MatrixXd& w, std::size_t num_classes,
                              std::span<const std::vector<double>> pooled,
                              std::span<const std::size_t> indices,
                              std::span<const std::size_t> classes, std::vector<double>& scores) {
    const auto d = w.cols();
    scores.resize(static_cast<std::size_t>(w.rows()));
    std::size_t hits = 0;
    for (auto i : indices) {
        const auto& e = pooled[i];
        for (Eigen::Index o = 0; o < w.rows(); ++o) {
            double s = w(o, d - 1);
            for (Eigen::Index j = 0; j + 1 < d; ++j) s += w(o, j) * e[static_cast<std::size_t>(j)];
            scores[static_cast<std::size_t>(o)] = s;
        }
        hits += decode(num_classes, scores) == classes[i];
    }
    return hits;
}

/// Builds one reservoir, encodes `encode_idx`, then for every split and beta
/// trains a readout on the split's training part and scores its validation part.
inline GuessOutcome evaluate_guess(const ReservoirConfig& config, const Dataset& dataset,
                                   const TargetEncoding& targets,
                                   std::span<const std::size_t> encode_idx,
                                   std::span<const Split> splits, std::span<const double> betas,
                                   const StopRule& stop, Phase phase, std::size_t fold,
                                   AccessObserver* observer, EncodingCache* cache = nullptr) {
    GuessOutcome out;
    out.accuracy.assign(splits.size() * betas.size(), chance_level(dataset.num_classes()));
    std::vector<std::vector<double>> pooled(dataset.size());
    std::shared_ptr<EncodingCache::Slot> slot;
    if (cache) {
        slot = cache->slot(config, dataset.size());
        std::lock_guard lock(slot->mutex);
        for (auto i : encode_idx)
            if (slot->pooled[i]) pooled[i] = *slot->pooled[i];
    }

    std::optional<ReservoirWeights> weights;
    if (observer) observer->on_encode(phase, fold, encode_idx);
    try {
        for (auto i : encode_idx) {
            if (!pooled[i].empty()) continue;
            if (!weights) {
                weights = build_reservoir(config);
                if (observer) observer->on_build(phase, fold, config);
            }
            auto r = encode_graph(*weights, dataset.graphs()[i], stop, nullptr, i);
            ++out.encodings;
            out.iterations += r.iterations_used;
            if (!r.converged) ++out.non_converged;
            pooled[i] = std::move(r.pooled);
        }
    } catch (const EncodingError&) {
        out.overflow = true;
        return out;
    }
    if (slot) {
        std::lock_guard lock(slot->mutex);
        for (auto i : encode_idx)
            if (!slot->pooled[i]) slot->pooled[i] = pooled[i];
    }

    std::vector<double> scores;
    for (std::size_t s = 0; s < splits.size(); ++s) {
        if (observer) {
            observer->on_train(phase, fold, splits[s].train);
            observer->on_score(phase, fold, splits[s].validation);
        }
        ReadoutSolver solver(pooled, splits[s].train, targets);
        for (std::size_t b = 0; b < betas.size(); ++b) {
            const Eigen::MatrixXd w = solver.solve_eigen(betas[b]);
            const auto hits = count_hits(w, dataset.num_classes(), pooled, splits[s].validation,
                                         dataset.targets(), scores);
            out.accuracy[s * betas.size() + b] =
                splits[s].validation.empty()
                    ? 0.0
                    : static_cast<double>(hits) / static_cast<double>(splits[s].validation.size());
        }
    }
    return out;
}

}  // namespace detail

/// Mean validation accuracy per beta, averaged over the sample's guesses.
/// Overflowing guesses score chance level.
inline std::vector<double> evaluate_config(const ConfigSample& sample, std::span<const double> betas,
                                           std::span<const std::size_t> train_idx,
                                           std::span<const std::size_t> val_idx, const Dataset& dataset,
                                           const StopRule& stop, EncodingCache* cache = nullptr,
                                           AccessObserver* observer = nullptr, std::size_t fold = 0) {
    const auto targets = encode_targets(dataset);
    Split split{{train_idx.begin(), train_idx.end()}, {val_idx.begin(), val_idx.end()}};
    std::vector<std::size_t> encode_idx = split.train;
    encode_idx.insert(encode_idx.end(), val_idx.begin(), val_idx.end());
    std::sort(encode_idx.begin(), encode_idx.end());
    encode_idx.erase(std::unique(encode_idx.begin(), encode_idx.end()), encode_idx.end());

    std::vector<double> mean(betas.size(), 0.0);
    for (std::size_t g = 0; g < sample.guess_seeds.size(); ++g) {
        const auto o = detail::evaluate_guess(sample.for_guess(g), dataset, targets, encode_idx,
                                              std::span<const Split>(&split, 1), betas, stop,
                                              Phase::Selection, fold, observer, cache);
        for (std::size_t b = 0; b < betas.size(); ++b) mean[b] += o.accuracy[b];
    }
    for (auto& m : mean) m /= static_cast<double>(sample.guess_seeds.size());
    return mean;
}

/// Best setting of one reservoir size inside one outer fold.
struct SizeBest {
    std::size_t hidden_units = 0;
    std::size_t config_index = 0;
    double omega = 0.0;
    double rho = 0.0;
    double beta = 0.0;
    double val_acc = 0.0;
};

struct FoldResult {
    std::size_t fold = 0;
    std::size_t degree = 0;
    std::size_t train_size = 0;
    std::size_t test_size = 0;
    SizeBest selected;
    double test_acc = 0.0;
    double seconds = 0.0;
    std::vector<SizeBest> per_size;
    // Model selection bookkeeping.
    std::size_t networks_built = 0;
    std::size_t encodings = 0;
    std::size_t non_converged = 0;
    std::size_t overflow_guesses = 0;
    // Refit of the selected setting (all its guesses).
    std::size_t refit_guesses = 0;
    std::size_t refit_overflow = 0;
    double refit_mean_iterations = 0.0;
    double refit_converged_fraction = 0.0;
};

struct SweepRow {
    std::size_t hidden_units = 0;
    double mean_val_acc = 0.0;
    double std_val_acc = 0.0;
    std::vector<double> per_fold;
};

struct FamilyReport {
    Family family = Family::GESN;
    MgnMode mgn_mode = MgnMode::Reduced;  // meaningful for MGN only
    std::vector<FoldResult> folds;
    double mean_test_acc = 0.0;
    double std_test_acc = 0.0;
    double mean_val_acc = 0.0;
    double std_val_acc = 0.0;
    std::vector<SweepRow> size_sweep;

    std::string label() const {
        std::string s(to_string(family));
        if (family == Family::MGN) s += "(" + std::string(to_string(mgn_mode)) + ")";
        return s;
    }
};

struct EvaluationReport {
    std::string dataset;
    std::size_t num_graphs = 0;
    std::size_t num_classes = 0;
    std::size_t input_dim = 0;
    SearchSpace space;
    std::vector<FamilyReport> families;
    std::vector<std::string> warnings;
};

/// Mean and population standard deviation.
inline std::pair<double, double> mean_std(std::span<const double> v) {
    if (v.empty()) return {0.0, 0.0};
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double var = 0.0;
    for (double x : v) var += (x - mean) * (x - mean);
    return {mean, std::sqrt(var / static_cast<double>(v.size()))};
}

namespace detail {

inline constexpr std::uint64_t kOuterTag = 0x6f75746572ULL;  // "outer"
inline constexpr std::uint64_t kInnerTag = 0x696e6e6572ULL;  // "inner"

inline std::vector<std::size_t> gather(std::span<const std::size_t> base,
                                       std::span<const std::size_t> positions) {
    std::vector<std::size_t> out;
    out.reserve(positions.size());
    for (auto p : positions) out.push_back(base[p]);
    return out;
}

/// Strict "better" for model selection: higher accuracy, then smaller N_H,
/// then smaller beta, then earlier configuration.
inline bool better(const SizeBest& a, const SizeBest& b) {
    if (a.val_acc != b.val_acc) return a.val_acc > b.val_acc;
    if (a.hidden_units != b.hidden_units) return a.hidden_units < b.hidden_units;
    if (a.beta != b.beta) return a.beta < b.beta;
    return a.config_index < b.config_index;
}

inline FoldResult run_outer_fold(const Dataset& dataset, const TargetEncoding& targets,
                                 const SearchSpace& space, Family family, const FoldPlan& outer,
                                 std::size_t fold, const EvalOptions& opt) {
    const auto t0 = std::chrono::steady_clock::now();
    AccessObserver* obs = opt.observer;
    FoldResult res;
    res.fold = fold;
    const std::vector<std::size_t> test = outer.test[fold];
    const std::vector<std::size_t> train = outer.train(fold);
    res.train_size = train.size();
    res.test_size = test.size();

    if (obs) obs->on_degree(fold, train);
    res.degree = std::max<std::size_t>(1, compute_degree(std::span<const Graph>(dataset.graphs()), train));

    const auto inner_classes = gather(dataset.targets(), train);
    const FoldPlan inner =
        stratified_folds(inner_classes, space.num_folds, derive_seed(space.protocol_seed, {kInnerTag, fold}));
    std::vector<Split> splits;
    for (std::size_t i = 0; i < inner.num_folds(); ++i)
        splits.push_back({gather(train, inner.train(i)), gather(train, inner.test[i])});

    const auto& betas = space.betas;
    SizeBest best;
    bool have_best = false;
    std::vector<ConfigSample> best_cell;

    for (auto hidden : space.hidden_sizes) {
        const auto cell = sample_cell(space, family, hidden, dataset.input_dim(), res.degree);
        const std::size_t guesses = cell.front().guess_seeds.size();
        std::vector<GuessOutcome> outcomes(cell.size() * guesses);
        parallel_for(outcomes.size(), opt.jobs, [&](std::size_t t) {
            const auto& sample = cell[t / guesses];
            outcomes[t] = evaluate_guess(sample.for_guess(t % guesses), dataset, targets, train, splits,
                                         betas, space.stop, Phase::Selection, fold, obs);
        });

        SizeBest cell_best;
        bool have_cell = false;
        for (std::size_t c = 0; c < cell.size(); ++c) {
            for (std::size_t b = 0; b < betas.size(); ++b) {
                double acc = 0.0;
                for (std::size_t g = 0; g < guesses; ++g) {
                    const auto& o = outcomes[c * guesses + g];
                    double inner_mean = 0.0;
                    for (std::size_t s = 0; s < splits.size(); ++s) inner_mean += o.accuracy[s * betas.size() + b];
                    acc += inner_mean / static_cast<double>(splits.size());
                }
                acc /= static_cast<double>(guesses);
                const SizeBest cand{hidden, c, cell[c].base.input_scaling, cell[c].base.spectral_radius,
                                    betas[b], acc};
                if (!have_cell || better(cand, cell_best)) {
                    cell_best = cand;
                    have_cell = true;
                }
            }
        }
        for (const auto& o : outcomes) {
            res.encodings += o.encodings;
            res.non_converged += o.non_converged;
            res.overflow_guesses += o.overflow ? 1 : 0;
        }
        res.networks_built += outcomes.size();
        res.per_size.push_back(cell_best);
        if (!have_best || better(cell_best, best)) {
            best = cell_best;
            have_best = true;
            best_cell = cell;
        }
    }
    res.selected = best;

    // Refit the selected setting on the whole outer-training split; each guess
    // is scored on the outer-test split and the accuracies are averaged.
    const auto& chosen = best_cell[best.config_index];
    const std::size_t guesses = chosen.guess_seeds.size();
    std::vector<double> beta_one{best.beta};
    std::vector<GuessOutcome> refit(guesses);
    std::vector<double> test_acc(guesses, chance_level(dataset.num_classes()));
    parallel_for(guesses, opt.jobs, [&](std::size_t g) {
        const auto config = chosen.for_guess(g);
        const ReservoirWeights weights = build_reservoir(config);
        auto& o = refit[g];
        try {
            if (obs) obs->on_encode(Phase::Refit, fold, train);
            std::vector<std::vector<double>> pooled(dataset.size());
            for (auto i : train) {
                auto r = encode_graph(weights, dataset.graphs()[i], space.stop, nullptr, i);
                ++o.encodings;
                o.iterations += r.iterations_used;
                if (!r.converged) ++o.non_converged;
                pooled[i] = std::move(r.pooled);
            }
            if (obs) {
                obs->on_train(Phase::Refit, fold, train);
                obs->on_encode(Phase::Test, fold, test);
            }
            const ReadoutSolver solver(pooled, train, targets);
            const Eigen::MatrixXd w = solver.solve_eigen(best.beta);
            for (auto i : test) {
                auto r = encode_graph(weights, dataset.graphs()[i], space.stop, nullptr, i);
                ++o.encodings;
                o.iterations += r.iterations_used;
                if (!r.converged) ++o.non_converged;
                pooled[i] = std::move(r.pooled);
            }
            if (obs) obs->on_score(Phase::Test, fold, test);
            std::vector<double> scores;
            const auto hits = count_hits(w, dataset.num_classes(), pooled, test, dataset.targets(), scores);
            test_acc[g] = static_cast<double>(hits) / static_cast<double>(test.size());
        } catch (const EncodingError&) {
            o.overflow = true;
        }
    });
    double acc = 0.0, iterations = 0.0, encodings = 0.0, converged = 0.0;
    for (std::size_t g = 0; g < guesses; ++g) {
        acc += test_acc[g];
        iterations += static_cast<double>(refit[g].iterations);
        encodings += static_cast<double>(refit[g].encodings);
        converged += static_cast<double>(refit[g].encodings - refit[g].non_converged);
        res.refit_overflow += refit[g].overflow ? 1 : 0;
    }
    res.refit_guesses = guesses;
    res.test_acc = acc / static_cast<double>(guesses);
    res.refit_mean_iterations = encodings > 0 ? iterations / encodings : 0.0;
    res.refit_converged_fraction = encodings > 0 ? converged / encodings : 0.0;
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

inline void summarize(FamilyReport& fr, std::span<const std::size_t> sizes) {
    std::vector<double> test, val;
    for (const auto& f : fr.folds) {
        test.push_back(f.test_acc);
        val.push_back(f.selected.val_acc);
    }
    std::tie(fr.mean_test_acc, fr.std_test_acc) = mean_std(test);
    std::tie(fr.mean_val_acc, fr.std_val_acc) = mean_std(val);
    fr.size_sweep.clear();
    for (std::size_t s = 0; s < sizes.size(); ++s) {
        SweepRow row;
        row.hidden_units = sizes[s];
        for (const auto& f : fr.folds) row.per_fold.push_back(f.per_size[s].val_acc);
        std::tie(row.mean_val_acc, row.std_val_acc) = mean_std(row.per_fold);
        fr.size_sweep.push_back(std::move(row));
    }
}

}  // namespace detail

/// Stratified outer K-fold cross-validation with nested inner K-fold random
/// search, selected independently for every requested family.
///
/// Per outer fold: the degree k comes from the outer-training graphs; every
/// (N_H, configuration, beta) is scored by its inner-validation accuracy
/// averaged over inner folds and guesses; the best setting is refit on the
/// outer-training split with the same guess seeds and scored on the outer-test
/// split. Results do not depend on `opt.jobs`.
inline EvaluationReport nested_cross_validate(const Dataset& dataset, const SearchSpace& space,
                                              const EvalOptions& opt = {}) {
    space.validate();
    EvaluationReport report;
    report.dataset = dataset.name();
    report.num_graphs = dataset.size();
    report.num_classes = dataset.num_classes();
    report.input_dim = dataset.input_dim();
    report.space = space;

    const auto targets = encode_targets(dataset);
    const FoldPlan outer = stratified_folds(dataset.targets(), space.num_folds,
                                            derive_seed(space.protocol_seed, {detail::kOuterTag}));
    report.warnings = outer.warnings;
    const std::size_t folds = space.max_outer_folds ? std::min(space.max_outer_folds, outer.num_folds())
                                                    : outer.num_folds();
    for (auto family : space.families) {
        FamilyReport fr;
        fr.family = family;
        fr.mgn_mode = space.mgn_mode;
        for (std::size_t f = 0; f < folds; ++f) {
            fr.folds.push_back(detail::run_outer_fold(dataset, targets, space, family, outer, f, opt));
            if (opt.log) {
                const auto& r = fr.folds.back();
                opt.log(fr.label() + " fold " + std::to_string(f) + ": N_H=" +
                        std::to_string(r.selected.hidden_units) + " val=" + std::to_string(r.selected.val_acc) +
                        " test=" + std::to_string(r.test_acc));
            }
        }
        detail::summarize(fr, space.hidden_sizes);
        report.families.push_back(std::move(fr));
    }
    return report;
}

/// Per-(family, N_H) validation accuracy table: mean and std over outer folds
/// of the accuracy selected inside each size.
inline std::vector<std::pair<std::string, SweepRow>> size_sweep(const EvaluationReport& report) {
    std::vector<std::pair<std::string, SweepRow>> rows;
    for (const auto& f : report.families)
        for (const auto& r : f.size_sweep) rows.emplace_back(f.label(), r);
    return rows;
}

inline std::vector<std::pair<std::string, SweepRow>> size_sweep(const Dataset& dataset,
                                                                const SearchSpace& space,
                                                                const EvalOptions& opt = {}) {
    return size_sweep(nested_cross_validate(dataset, space, opt));
}

}  // namespace ringgesn
