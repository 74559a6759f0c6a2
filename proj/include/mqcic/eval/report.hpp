#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mqcic/core/run_record.hpp"
#include "mqcic/eval/metrics.hpp"

namespace mqcic::eval {

struct CellKey {
    std::string model;
    Method method = Method::Standard;
    int shots = 0;

    bool operator==(const CellKey&) const = default;
};

/// One (model, method, shots) row. Error rates are fractions of all scored
/// records; total is their sum, so A+B+C = total holds by construction.
struct CellScore {
    CellKey key;
    std::size_t n_instances = 0;
    int n_runs = 1;
    std::optional<double> accuracy;
    std::optional<double> fc;
    std::optional<double> ff;
    std::optional<double> rate_fact;       // Type A
    std::optional<double> rate_reasoning;  // Type B
    std::optional<double> rate_other;      // Type C
    std::optional<double> rate_total;
    std::size_t unresolved = 0;
    std::size_t judge_gaps = 0;  // instances whose FC/FF could not be scored
    long total_latency_ms = 0;
    bool absent = false;  // cell planned but not run (missing fixtures etc.)
};

CellScore summarize_scores(const CellKey& key, const std::vector<InstanceScore>& scores,
                           long total_latency_ms = 0);

/// Mean over per-run cells of one key (experiments run N times, averaged).
CellScore average_cells(const std::vector<CellScore>& runs);

struct ReportTable {
    std::vector<CellScore> rows;

    std::string render_csv() const;
    std::string render_markdown() const;
    std::string render_text() const { return render_markdown(); }
};

/// Deterministic row order: model, then method, then shots. Empty groups are
/// dropped (callers warn).
ReportTable build_report(std::vector<CellScore> cells);

}  // namespace mqcic::eval
