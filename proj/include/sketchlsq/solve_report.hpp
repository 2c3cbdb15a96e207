#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace sketchlsq {

enum class Termination { Tolerance, MaxIter, Breakdown };

inline std::string to_string(Termination t) {
    switch (t) {
        case Termination::Tolerance: return "tolerance";
        case Termination::MaxIter: return "maxiter";
        case Termination::Breakdown: return "breakdown";
    }
    return "unknown";
}

/// Per-solve record: iteration histories, synchronization counts, timing.
struct SolveReport {
    // ||A (x_star - x_t)|| per iteration (index 0 = initial guess); filled
    // only when the caller supplies x_star.
    std::vector<double> iterates_error;
    // LSQR's running residual estimate phi_bar_{t+1}; nonincreasing.
    std::vector<double> residual_estimate;
    // ||b - A x_t|| recomputed directly, when instrumentation is on.
    std::vector<double> residual_true;

    long iterations = 0;
    Termination termination = Termination::MaxIter;

    // Synchronization accounting (distributed backends; zero in serial).
    long sync_count = 0;        // reductions, the paper's synchronization unit
    long broadcasts = 0;
    long init_reductions = 0;   // portion incurred before the first iteration
    long init_broadcasts = 0;

    double wall_time = 0.0;  // seconds

    double reductions_per_iteration() const {
        return iterations > 0 ? static_cast<double>(sync_count - init_reductions) / iterations : 0.0;
    }
    double broadcasts_per_iteration() const {
        return iterations > 0 ? static_cast<double>(broadcasts - init_broadcasts) / iterations : 0.0;
    }
};

inline nlohmann::json to_json(const SolveReport& r) {
    nlohmann::json j;
    j["iterations"] = r.iterations;
    j["termination"] = to_string(r.termination);
    j["sync_count"] = r.sync_count;
    j["broadcasts"] = r.broadcasts;
    j["init_reductions"] = r.init_reductions;
    j["init_broadcasts"] = r.init_broadcasts;
    j["reductions_per_iteration"] = r.reductions_per_iteration();
    j["broadcasts_per_iteration"] = r.broadcasts_per_iteration();
    j["wall_time"] = r.wall_time;
    j["residual_estimate"] = r.residual_estimate;
    if (!r.iterates_error.empty()) j["iterates_error"] = r.iterates_error;
    if (!r.residual_true.empty()) j["residual_true"] = r.residual_true;
    return j;
}

}  // namespace sketchlsq
