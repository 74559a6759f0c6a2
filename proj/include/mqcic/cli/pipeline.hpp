#pragma once

#include <string>
#include <vector>

#include "mqcic/cli/config.hpp"
#include "mqcic/engine/engine.hpp"
#include "mqcic/eval/report.hpp"

namespace mqcic::cli {

/// One full experiment sweep: for every (method, shots, run) cell produce
/// RunRecords and scores under out_dir, then regenerate the report. Failed
/// cells are isolated and marked absent.
struct PipelineSpec {
    AppConfig config;
    std::string indicators_path;
    std::string instances_path;
    std::string exemplars_path;  // optional
    std::vector<Method> methods;
    std::vector<int> shots_list = {0};
    engine::ReasoningMode reasoning = engine::ReasoningMode::Symbolic;
    std::string model;
    int runs = 1;
    std::string seed_salt;
    std::string out_dir;
};

/// Layout written under out_dir:
///   manifest.json
///   cells/<model>__<method>__s<shots>/run<k>.records.jsonl
///   cells/<...>/run<k>.scores.json
///   cells/<...>/cell.json
///   report.csv, report.md
void run_pipeline(const PipelineSpec& spec);

/// Re-read the per-cell summaries of a run directory (report regeneration).
std::vector<eval::CellScore> load_cells(const std::string& run_dir);

nlohmann::json cell_to_json(const eval::CellScore& c);
eval::CellScore cell_from_json(const nlohmann::json& j);

std::string sanitize_component(const std::string& s);

}  // namespace mqcic::cli
