#pragma once

#include <charconv>
#include <ostream>
#include <string>

#include <nlohmann/json.hpp>

#include "ringgesn/evaluation.hpp"
#include "ringgesn/random.hpp"

namespace ringgesn {

inline constexpr int kReportSchemaVersion = 1;

/// Shortest decimal text that round-trips to the same double.
inline std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

inline nlohmann::json to_json(const SizeBest& s) {
    return {{"N_H", s.hidden_units}, {"config_index", s.config_index}, {"omega", s.omega},
            {"rho", s.rho},          {"beta", s.beta},                 {"val_acc", s.val_acc}};
}

inline nlohmann::json to_json(const FoldResult& f) {
    nlohmann::json per_size = nlohmann::json::array();
    for (const auto& s : f.per_size) per_size.push_back(to_json(s));
    return {
        {"fold", f.fold},
        {"degree", f.degree},
        {"train_size", f.train_size},
        {"test_size", f.test_size},
        {"selected", to_json(f.selected)},
        {"val_acc", f.selected.val_acc},
        {"test_acc", f.test_acc},
        {"seconds", f.seconds},
        {"per_size", per_size},
        {"selection",
         {{"networks_built", f.networks_built},
          {"encodings", f.encodings},
          {"non_converged", f.non_converged},
          {"overflow_guesses", f.overflow_guesses}}},
        {"refit",
         {{"guesses", f.refit_guesses},
          {"overflow_guesses", f.refit_overflow},
          {"mean_iterations", f.refit_mean_iterations},
          {"converged_fraction", f.refit_converged_fraction}}},
    };
}

inline nlohmann::json to_json(const EvaluationReport& r) {
    const auto& s = r.space;
    nlohmann::json families = nlohmann::json::array();
    for (const auto& f : r.families) {
        nlohmann::json folds = nlohmann::json::array();
        for (const auto& fold : f.folds) folds.push_back(to_json(fold));
        nlohmann::json sweep = nlohmann::json::array();
        for (const auto& row : f.size_sweep)
            sweep.push_back({{"N_H", row.hidden_units},
                             {"mean_val_acc", row.mean_val_acc},
                             {"std_val_acc", row.std_val_acc},
                             {"per_fold", row.per_fold}});
        nlohmann::json fam = {{"family", std::string(to_string(f.family))},
                              {"label", f.label()},
                              {"folds", folds},
                              {"mean_test_acc", f.mean_test_acc},
                              {"std_test_acc", f.std_test_acc},
                              {"mean_val_acc", f.mean_val_acc},
                              {"std_val_acc", f.std_val_acc},
                              {"size_sweep", sweep}};
        fam["mgn_mode"] = f.family == Family::MGN ? nlohmann::json(std::string(to_string(f.mgn_mode)))
                                                  : nlohmann::json(nullptr);
        families.push_back(std::move(fam));
    }
    nlohmann::json family_names = nlohmann::json::array();
    for (auto f : s.families) family_names.push_back(std::string(to_string(f)));
    return {
        {"schema_version", kReportSchemaVersion},
        {"dataset",
         {{"name", r.dataset},
          {"num_graphs", r.num_graphs},
          {"num_classes", r.num_classes},
          {"input_dim", r.input_dim}}},
        {"protocol",
         {{"families", family_names},
          {"hidden_sizes", s.hidden_sizes},
          {"num_configs", s.num_configs},
          {"num_guesses", s.num_guesses},
          {"betas", s.betas},
          {"mgn_mode", std::string(to_string(s.mgn_mode))},
          {"epsilon", s.stop.epsilon},
          {"max_iterations", s.stop.max_iterations},
          {"num_folds", s.num_folds},
          {"outer_folds_evaluated", r.families.empty() ? 0 : r.families.front().folds.size()},
          {"seed", s.seed},
          {"protocol_seed", s.protocol_seed},
          {"rng", std::string(kRngScheme)},
          {"degree_split", "outer-train"},
          {"selection_tie_break", "smaller N_H, then smaller beta, then earlier config"},
          {"refit", "selected setting retrained on the outer-training split with the same guess seeds"},
          {"convergence_norm", "frobenius"}}},
        {"families", families},
        {"warnings", r.warnings},
    };
}

/// One row per outer fold per family.
inline void write_folds_csv(std::ostream& out, const EvaluationReport& r) {
    out << "fold,family,N_H,omega,rho,beta,val_acc,test_acc,seconds\n";
    for (const auto& f : r.families)
        for (const auto& fold : f.folds)
            out << fold.fold << ',' << f.label() << ',' << fold.selected.hidden_units << ','
                << format_double(fold.selected.omega) << ',' << format_double(fold.selected.rho) << ','
                << format_double(fold.selected.beta) << ',' << format_double(fold.selected.val_acc) << ','
                << format_double(fold.test_acc) << ',' << format_double(fold.seconds) << '\n';
}

inline void write_size_sweep_csv(std::ostream& out, const EvaluationReport& r) {
    out << "family,N_H,mean_val_acc,std_val_acc\n";
    for (const auto& [label, row] : size_sweep(r))
        out << label << ',' << row.hidden_units << ',' << format_double(row.mean_val_acc) << ','
            << format_double(row.std_val_acc) << '\n';
}

}  // namespace ringgesn
