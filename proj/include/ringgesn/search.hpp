#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "ringgesn/errors.hpp"
#include "ringgesn/random.hpp"
#include "ringgesn/reservoir.hpp"

namespace ringgesn {

enum class MgnMode { Complete, Reduced };

inline std::string_view to_string(MgnMode m) { return m == MgnMode::Complete ? "complete" : "reduced"; }

/// Regularizer grid 1e-10, 1e-9, ..., 1e5.
inline std::vector<double> default_beta_grid() {
    std::vector<double> grid;
    for (int e = -10; e <= 5; ++e) grid.push_back(std::pow(10.0, e));
    return grid;
}

struct SearchSpace {
    std::vector<Family> families{Family::GESN};
    std::vector<std::size_t> hidden_sizes{5, 10, 30, 50};
    std::size_t num_configs = 50;   // C
    std::size_t num_guesses = 50;   // R
    std::vector<double> betas = default_beta_grid();
    MgnMode mgn_mode = MgnMode::Reduced;
    StopRule stop{};
    std::size_t num_folds = 10;
    /// Seeds reservoir guesses (GESN/GRN weights). MGN results do not depend on it.
    std::uint64_t seed = 1;
    /// Seeds fold shuffling and the (omega, rho) random search.
    std::uint64_t protocol_seed = 0;
    /// Evaluate only the first n outer folds (0 = all). Used for smoke runs.
    std::size_t max_outer_folds = 0;

    void validate() const {
        if (families.empty()) throw ConfigError("search space: no model family");
        if (hidden_sizes.empty()) throw ConfigError("search space: no reservoir size");
        for (auto n : hidden_sizes)
            if (n == 0) throw ConfigError("search space: reservoir size must be >= 1");
        if (num_configs == 0 || num_guesses == 0)
            throw ConfigError("search space: configs and guesses must be >= 1");
        if (betas.empty()) throw ConfigError("search space: empty regularizer grid");
        for (double b : betas)
            if (!(b >= 0.0) || !std::isfinite(b)) throw ConfigError("search space: invalid regularizer");
        if (num_folds < 2) throw ConfigError("search space: need at least 2 folds");
        stop.validate();
    }
};

/// One sampled (omega, rho) point of a (family, N_H) cell and the seeds of its guesses.
struct ConfigSample {
    ReservoirConfig base;                  // seed field = first guess seed
    std::vector<std::uint64_t> guess_seeds;

    ReservoirConfig for_guess(std::size_t g) const {
        ReservoirConfig c = base;
        c.seed = guess_seeds.at(g);
        return c;
    }
};

namespace detail {
inline constexpr std::uint64_t kConfigTag = 0x636f6e666967ULL;  // "config"
inline constexpr std::uint64_t kGuessTag = 0x6775657373ULL;     // "guess"
}  // namespace detail

/// Number of sampled configurations and guesses per configuration of a cell.
/// GESN/GRN: C x R. MGN reduced: C x 1. MGN complete: (C*R) x 1.
inline std::pair<std::size_t, std::size_t> cell_shape(const SearchSpace& space, Family family) {
    if (family != Family::MGN) return {space.num_configs, space.num_guesses};
    if (space.mgn_mode == MgnMode::Reduced) return {space.num_configs, 1};
    return {space.num_configs * space.num_guesses, 1};
}

/// Samples the configurations of one (family, N_H) cell. omega and rho are
/// i.i.d. U(0,1) from a generator seeded by the protocol seed and the cell;
/// guess seeds derive from the reservoir seed.
inline std::vector<ConfigSample> sample_cell(const SearchSpace& space, Family family,
                                             std::size_t hidden_units, std::size_t input_dim,
                                             std::size_t degree) {
    const auto [count, guesses] = cell_shape(space, family);
    const auto fam = static_cast<std::uint64_t>(family);
    Rng rng(derive_seed(space.protocol_seed, {detail::kConfigTag, fam, hidden_units}));
    std::vector<ConfigSample> out;
    out.reserve(count);
    for (std::size_t c = 0; c < count; ++c) {
        ConfigSample s;
        s.base.family = family;
        s.base.hidden_units = hidden_units;
        s.base.input_dim = input_dim;
        s.base.degree = degree;
        s.base.input_scaling = rng.open01();
        s.base.spectral_radius = rng.open01();
        for (std::size_t g = 0; g < guesses; ++g)
            s.guess_seeds.push_back(derive_seed(space.seed, {detail::kGuessTag, fam, hidden_units, c, g}));
        s.base.seed = s.guess_seeds.front();
        out.push_back(std::move(s));
    }
    return out;
}

/// All cells, families outermost then hidden sizes in the order given.
inline std::vector<ConfigSample> sample_configs(const SearchSpace& space, std::size_t input_dim,
                                                std::size_t degree) {
    space.validate();
    std::vector<ConfigSample> all;
    for (auto f : space.families)
        for (auto n : space.hidden_sizes) {
            auto cell = sample_cell(space, f, n, input_dim, degree);
            all.insert(all.end(), cell.begin(), cell.end());
        }
    return all;
}

}  // namespace ringgesn
