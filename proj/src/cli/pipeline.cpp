#include "mqcic/cli/pipeline.hpp"

#include <filesystem>
#include <fstream>

#include "mqcic/core/io.hpp"
#include "mqcic/eval/judge.hpp"
#include "mqcic/llm/errors.hpp"
#include "mqcic/util/log.hpp"
#include "mqcic/util/parallel.hpp"

namespace fs = std::filesystem;

namespace mqcic::cli {

namespace {

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError(path.string(), "cannot open for writing");
    out << content;
}

std::optional<double> opt_of(const nlohmann::json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return j.at(key).get<double>();
}

nlohmann::json opt_json(const std::optional<double>& v) {
    if (!v) return nullptr;
    return *v;
}

}  // namespace

std::string sanitize_component(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s)
        out.push_back(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '.' ? c : '_');
    return out.empty() ? "_" : out;
}

nlohmann::json cell_to_json(const eval::CellScore& c) {
    return nlohmann::json{{"model", c.key.model},
                          {"method", to_string(c.key.method)},
                          {"shots", c.key.shots},
                          {"n_instances", c.n_instances},
                          {"n_runs", c.n_runs},
                          {"accuracy", opt_json(c.accuracy)},
                          {"fc", opt_json(c.fc)},
                          {"ff", opt_json(c.ff)},
                          {"rate_fact", opt_json(c.rate_fact)},
                          {"rate_reasoning", opt_json(c.rate_reasoning)},
                          {"rate_other", opt_json(c.rate_other)},
                          {"rate_total", opt_json(c.rate_total)},
                          {"unresolved", c.unresolved},
                          {"judge_gaps", c.judge_gaps},
                          {"total_latency_ms", c.total_latency_ms},
                          {"absent", c.absent}};
}

eval::CellScore cell_from_json(const nlohmann::json& j) {
    eval::CellScore c;
    c.key.model = j.at("model").get<std::string>();
    c.key.method = method_from_string(j.at("method").get<std::string>());
    c.key.shots = j.at("shots").get<int>();
    c.n_instances = j.value("n_instances", 0u);
    c.n_runs = j.value("n_runs", 1);
    c.accuracy = opt_of(j, "accuracy");
    c.fc = opt_of(j, "fc");
    c.ff = opt_of(j, "ff");
    c.rate_fact = opt_of(j, "rate_fact");
    c.rate_reasoning = opt_of(j, "rate_reasoning");
    c.rate_other = opt_of(j, "rate_other");
    c.rate_total = opt_of(j, "rate_total");
    c.unresolved = j.value("unresolved", 0u);
    c.judge_gaps = j.value("judge_gaps", 0u);
    c.total_latency_ms = j.value("total_latency_ms", 0L);
    c.absent = j.value("absent", false);
    return c;
}

std::vector<eval::CellScore> load_cells(const std::string& run_dir) {
    const fs::path cells_dir = fs::path(run_dir) / "cells";
    if (!fs::is_directory(cells_dir)) throw IoError(cells_dir.string(), "no cells directory");
    std::vector<fs::path> paths;
    for (const auto& entry : fs::directory_iterator(cells_dir)) {
        if (entry.is_directory() && fs::exists(entry.path() / "cell.json"))
            paths.push_back(entry.path() / "cell.json");
    }
    std::sort(paths.begin(), paths.end());
    std::vector<eval::CellScore> cells;
    for (const auto& p : paths) {
        std::ifstream in(p);
        nlohmann::json j;
        in >> j;
        cells.push_back(cell_from_json(j));
    }
    return cells;
}

void run_pipeline(const PipelineSpec& spec) {
    spec.config.validate();
    if (spec.model.empty()) throw ConfigError("pipeline needs a model id");
    if (spec.out_dir.empty()) throw ConfigError("pipeline needs an output directory");
    if (spec.methods.empty()) throw ConfigError("pipeline needs at least one method");

    const auto indicators = load_indicators(spec.indicators_path);
    const auto instances = load_instances(spec.instances_path);
    validate_corpus(indicators, instances);
    const auto imap = eval::index_instances(instances);

    engine::ExemplarStore exemplars;
    if (!spec.exemplars_path.empty()) {
        exemplars = engine::ExemplarStore::load(spec.exemplars_path);
        exemplars.check_disjoint(instances);
    }

    const auto prompts = enhance::PromptLibrary::load(spec.config.prompt_dir);
    llm::Gateway gateway = make_gateway(spec.config);
    engine::Engine engine(gateway, prompts);
    std::unique_ptr<eval::BinaryJudge> judge;
    if (!spec.config.judge_model.empty())
        judge = std::make_unique<eval::LlmJudge>(gateway, spec.config.judge_model, prompts);

    fs::create_directories(fs::path(spec.out_dir) / "cells");

    std::vector<eval::CellScore> cells;
    for (Method method : spec.methods) {
        for (int shots : spec.shots_list) {
            eval::CellKey key{spec.model, method, shots};
            const std::string cell_name = sanitize_component(spec.model) + "__" +
                                          to_string(method) + "__s" + std::to_string(shots);
            const fs::path cell_dir = fs::path(spec.out_dir) / "cells" / cell_name;
            fs::create_directories(cell_dir);

            engine::MethodConfig mc;
            mc.method = method;
            mc.shots = shots;
            mc.reasoning_mode = spec.reasoning;
            mc.model_id = spec.model;

            std::vector<eval::CellScore> run_scores;
            bool cell_failed = false;
            for (int run = 0; run < spec.runs && !cell_failed; ++run) {
                if (spec.runs > 1 || !spec.seed_salt.empty())
                    gateway.set_run_tag(spec.seed_salt + "#" + std::to_string(run));
                try {
                    std::vector<RunRecord> records;
                    records.reserve(instances.size());
                    std::ofstream rec_out(cell_dir / ("run" + std::to_string(run) +
                                                      ".records.jsonl"),
                                          std::ios::trunc);
                    // Chunked so interrupted runs leave complete, flushed lines.
                    const std::size_t chunk = std::max<std::size_t>(1, spec.config.width);
                    for (std::size_t base = 0; base < instances.size(); base += chunk) {
                        const std::size_t end = std::min(instances.size(), base + chunk);
                        std::vector<const PatientInstance*> slice;
                        for (std::size_t i = base; i < end; ++i) slice.push_back(&instances[i]);
                        auto done = util::parallel_map(
                            slice, spec.config.width, [&](const PatientInstance* inst) {
                                const Indicator* ind =
                                    find_indicator_for_instance(indicators, inst->unique_id);
                                return engine.run_instance(*inst, *ind, mc,
                                                           exemplars.size() ? &exemplars : nullptr);
                            });
                        for (auto& r : done) {
                            rec_out << run_record_to_json(r).dump() << "\n";
                            rec_out.flush();
                            records.push_back(std::move(r));
                        }
                    }

                    auto scores = eval::score_records(records, imap, judge.get());
                    if (judge) {
                        // Persisted records carry a class exactly when incorrect.
                        eval::apply_error_classes(records, scores);
                        save_run_records((cell_dir / ("run" + std::to_string(run) +
                                                      ".records.jsonl"))
                                             .string(),
                                         records);
                    }
                    nlohmann::json sj = nlohmann::json::array();
                    for (const auto& s : scores) sj.push_back(eval::score_to_json(s));
                    write_file(cell_dir / ("run" + std::to_string(run) + ".scores.json"),
                               sj.dump(2) + "\n");

                    long latency = 0;
                    for (const auto& r : records) latency += r.latency_ms;
                    run_scores.push_back(eval::summarize_scores(key, scores, latency));
                } catch (const Error& e) {
                    util::log_warn("cell " + cell_name + " run " + std::to_string(run) +
                                   " failed: " + e.what());
                    cell_failed = true;
                }
            }
            gateway.set_run_tag(spec.config.run_tag);

            eval::CellScore cell;
            if (cell_failed || run_scores.empty()) {
                cell.key = key;
                cell.absent = true;
            } else {
                cell = eval::average_cells(run_scores);
            }
            write_file(cell_dir / "cell.json", cell_to_json(cell).dump(2) + "\n");
            cells.push_back(std::move(cell));
        }
    }

    const eval::ReportTable table = eval::build_report(cells);
    write_file(fs::path(spec.out_dir) / "report.csv", table.render_csv());
    write_file(fs::path(spec.out_dir) / "report.md", table.render_markdown());

    // Everything needed to re-derive the report numbers: config snapshot,
    // prompt-asset hashes, corpus facts.
    nlohmann::json manifest;
    manifest["model"] = spec.model;
    nlohmann::json methods = nlohmann::json::array();
    for (Method m : spec.methods) methods.push_back(to_string(m));
    manifest["methods"] = methods;
    manifest["shots"] = spec.shots_list;
    manifest["reasoning"] = engine::to_string(spec.reasoning);
    manifest["runs"] = spec.runs;
    manifest["seed_salt"] = spec.seed_salt;
    manifest["replay_only"] = spec.config.replay_only;
    manifest["indicators"] = spec.indicators_path;
    manifest["instances"] = spec.instances_path;
    manifest["judge_model"] = spec.config.judge_model;
    manifest["prompt_hashes"] = prompts.hashes();
    const CorpusStats stats = corpus_stats(instances);
    manifest["corpus"] = {{"indicators", indicators.size()},
                          {"instances", stats.count},
                          {"avg_facts", stats.avg_facts}};
    write_file(fs::path(spec.out_dir) / "manifest.json", manifest.dump(2) + "\n");
}

}  // namespace mqcic::cli
