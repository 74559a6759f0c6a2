#include "mqcic/cli/app.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "mqcic/cli/config.hpp"
#include "mqcic/cli/pipeline.hpp"
#include "mqcic/core/io.hpp"
#include "mqcic/enhance/enhancer.hpp"
#include "mqcic/engine/engine.hpp"
#include "mqcic/eval/judge.hpp"
#include "mqcic/eval/metrics.hpp"
#include "mqcic/eval/report.hpp"
#include "mqcic/llm/errors.hpp"
#include "mqcic/util/log.hpp"
#include "mqcic/util/parallel.hpp"

namespace fs = std::filesystem;

namespace mqcic::cli {

namespace {

struct GlobalFlags {
    std::optional<std::string> config_file;
    std::optional<std::string> backend_url;
    std::optional<std::string> api_key;
    std::optional<std::string> model;
    std::optional<std::string> judge_model;
    std::optional<std::string> cache_dir;
    std::optional<std::string> prompt_dir;
    std::optional<int> width;
    bool replay_only = false;
    std::optional<std::string> run_tag;
};

AppConfig build_config(const GlobalFlags& flags) {
    AppConfig cfg;
    if (flags.config_file) cfg = load_config_file(*flags.config_file);
    apply_env_overrides(cfg);
    if (flags.backend_url) cfg.backend_url = *flags.backend_url;
    if (flags.api_key) cfg.api_key = *flags.api_key;
    if (flags.model) cfg.model = *flags.model;
    if (flags.judge_model) cfg.judge_model = *flags.judge_model;
    if (flags.cache_dir) cfg.cache_dir = *flags.cache_dir;
    if (flags.prompt_dir) cfg.prompt_dir = *flags.prompt_dir;
    if (flags.width) cfg.width = *flags.width;
    if (flags.replay_only) cfg.replay_only = true;
    if (flags.run_tag) cfg.run_tag = *flags.run_tag;
    cfg.validate();
    return cfg;
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::trunc);
    if (!out) throw IoError(out_path, "cannot open for writing");
    out << text;
}

Method parse_method(const std::string& s) { return method_from_string(s); }

int cmd_ingest(const GlobalFlags&, const std::string& indicators_path,
               const std::string& instances_path, const std::string& out_indicators,
               const std::string& out_instances) {
    const auto indicators = load_indicators(indicators_path);
    const auto instances = load_instances(instances_path);
    validate_corpus(indicators, instances);
    const CorpusStats stats = corpus_stats(instances);
    std::size_t enhanced = 0;
    for (const auto& ind : indicators)
        if (ind.enhanced()) ++enhanced;
    nlohmann::json j{{"indicators", indicators.size()},
                     {"enhanced_indicators", enhanced},
                     {"instances", instances.size()},
                     {"stats",
                      {{"count", stats.count},
                       {"avg_note_tokens", stats.avg_note_tokens},
                       {"min_facts", stats.min_facts},
                       {"max_facts", stats.max_facts},
                       {"avg_facts", stats.avg_facts}}}};
    std::cout << j.dump(2) << "\n";
    if (!out_indicators.empty()) save_indicators(out_indicators, indicators);
    if (!out_instances.empty()) save_instances(out_instances, instances);
    return 0;
}

int cmd_enhance(const GlobalFlags& flags, const std::string& mode_str,
                const std::string& indicators_path, std::string drafts_path,
                const std::string& out_indicators) {
    const AppConfig cfg = build_config(flags);
    if (cfg.model.empty()) throw ConfigError("enhance needs a model (--model or config)");
    const auto mode = mode_str == "auto" ? enhance::EnhanceMode::Auto
                      : mode_str == "semi" ? enhance::EnhanceMode::SemiAuto
                                           : throw ConfigError("mode must be semi or auto");

    auto indicators = load_indicators(indicators_path);
    const auto prompts = enhance::PromptLibrary::load(cfg.prompt_dir);
    llm::Gateway gateway = make_gateway(cfg);
    enhance::Enhancer enhancer(gateway, prompts, cfg.model);

    if (drafts_path.empty()) drafts_path = indicators_path + ".drafts.json";
    std::vector<enhance::EnhancementDraft> drafts;
    std::size_t failures = 0;
    for (auto& ind : indicators) {
        try {
            enhance::EnhancementDraft d = enhancer.enhance_indicator(ind, mode);
            if (d.status == enhance::DraftStatus::Approved)
                enhance::apply_draft_to_indicator(ind, d);
            drafts.push_back(std::move(d));
        } catch (const Error& e) {
            ++failures;
            util::log_warn("indicator '" + ind.id + "': " + e.what());
        }
    }
    enhance::save_drafts(drafts_path, drafts);
    util::log_info("wrote " + std::to_string(drafts.size()) + " draft(s) to " + drafts_path +
                   (failures ? " (" + std::to_string(failures) + " failed)" : ""));
    if (!out_indicators.empty()) save_indicators(out_indicators, indicators);
    return drafts.empty() && failures ? 1 : 0;
}

void print_draft(const enhance::EnhancementDraft& d) {
    std::cout << "indicator: " << d.indicator_id << "  [" << to_string(d.status) << ", "
              << to_string(d.mode) << "]\n";
    if (!d.knowledge.empty()) std::cout << "knowledge:\n  " << d.knowledge << "\n";
    std::cout << "rules:\n";
    for (std::size_t i = 0; i < d.decomposed_nl.size(); ++i) {
        std::cout << "  " << (i + 1) << ". NL: " << d.decomposed_nl[i] << "\n";
        std::cout << "     SY: " << d.decomposed_sy[i] << "\n";
    }
    std::cout << "templates:\n";
    for (const auto& f : d.templated_facts)
        std::cout << "  " << templated_fact_to_json(f).dump() << "\n";
}

int cmd_review(const GlobalFlags&, const std::string& drafts_path,
               const std::string& indicators_path, bool list_only, const std::string& approve_id,
               const std::string& reject_id, const std::string& edit_id,
               const std::string& edited_path, const std::string& note,
               std::string out_indicators) {
    auto drafts = enhance::load_drafts(drafts_path);
    auto indicators = load_indicators(indicators_path);
    if (out_indicators.empty()) out_indicators = indicators_path;

    auto find_draft = [&](const std::string& id) -> enhance::EnhancementDraft& {
        for (auto& d : drafts)
            if (d.indicator_id == id) return d;
        throw Error("no draft for indicator '" + id + "'");
    };
    auto find_indicator = [&](const std::string& id) -> Indicator& {
        for (auto& ind : indicators)
            if (ind.id == id) return ind;
        throw Error("no indicator '" + id + "'");
    };

    auto decide = [&](const std::string& id, const enhance::ReviewDecision& decision) {
        enhance::EnhancementDraft& d = find_draft(id);
        d = enhance::apply_review(d, decision, note);
        if (d.status == enhance::DraftStatus::Approved ||
            d.status == enhance::DraftStatus::Edited)
            enhance::apply_draft_to_indicator(find_indicator(id), d);
        util::log_info("draft '" + id + "' -> " + to_string(d.status));
    };

    if (list_only) {
        for (const auto& d : drafts) print_draft(d);
        return 0;
    }

    if (!approve_id.empty() || !reject_id.empty() || !edit_id.empty()) {
        if (!approve_id.empty()) decide(approve_id, enhance::ReviewDecision::approve());
        if (!reject_id.empty()) decide(reject_id, enhance::ReviewDecision::reject());
        if (!edit_id.empty()) {
            if (edited_path.empty()) throw ConfigError("--edit needs --edited <draft.json>");
            std::ifstream in(edited_path);
            if (!in) throw IoError(edited_path, "cannot open");
            nlohmann::json j;
            in >> j;
            decide(edit_id, enhance::ReviewDecision::edit(enhance::draft_from_json(j)));
        }
    } else {
        // Interactive pass over Pending drafts.
        for (auto& d : drafts) {
            if (d.status != enhance::DraftStatus::Pending) continue;
            print_draft(d);
            std::cout << "[a]pprove / [e]dit / [r]eject / [s]kip / [q]uit? " << std::flush;
            std::string choice;
            if (!std::getline(std::cin, choice)) break;
            if (choice == "q") break;
            if (choice == "s" || choice.empty()) continue;
            if (choice == "a") decide(d.indicator_id, enhance::ReviewDecision::approve());
            else if (choice == "r") decide(d.indicator_id, enhance::ReviewDecision::reject());
            else if (choice == "e") {
                std::cout << "path to edited draft JSON: " << std::flush;
                std::string path;
                if (!std::getline(std::cin, path)) break;
                std::ifstream in(path);
                if (!in) throw IoError(path, "cannot open");
                nlohmann::json j;
                in >> j;
                decide(d.indicator_id, enhance::ReviewDecision::edit(enhance::draft_from_json(j)));
            }
        }
    }

    enhance::save_drafts(drafts_path, drafts);
    save_indicators(out_indicators, indicators);
    return 0;
}

int cmd_run(const GlobalFlags& flags, const std::string& method_str, int shots,
            const std::string& reasoning_str, const std::string& indicators_path,
            const std::string& instances_path, const std::string& exemplars_path, int runs,
            const std::string& seed_salt, const std::string& out_path) {
    AppConfig cfg = build_config(flags);
    if (cfg.model.empty()) throw ConfigError("run needs a model (--model or config)");

    const auto indicators = load_indicators(indicators_path);
    const auto instances = load_instances(instances_path);
    validate_corpus(indicators, instances);

    engine::ExemplarStore exemplars;
    if (!exemplars_path.empty()) {
        exemplars = engine::ExemplarStore::load(exemplars_path);
        exemplars.check_disjoint(instances);
    }

    const auto prompts = enhance::PromptLibrary::load(cfg.prompt_dir);
    llm::Gateway gateway = make_gateway(cfg);
    engine::Engine engine(gateway, prompts);

    engine::MethodConfig mc;
    mc.method = parse_method(method_str);
    mc.shots = shots;
    mc.reasoning_mode = engine::reasoning_mode_from_string(reasoning_str);
    mc.model_id = cfg.model;

    std::ostringstream lines;
    for (int run = 0; run < runs; ++run) {
        if (runs > 1 || !seed_salt.empty())
            gateway.set_run_tag(seed_salt + "#" + std::to_string(run));
        const std::size_t chunk = std::max<std::size_t>(1, cfg.width);
        for (std::size_t base = 0; base < instances.size(); base += chunk) {
            const std::size_t end = std::min(instances.size(), base + chunk);
            std::vector<const PatientInstance*> slice;
            for (std::size_t i = base; i < end; ++i) slice.push_back(&instances[i]);
            auto records = util::parallel_map(slice, cfg.width, [&](const PatientInstance* inst) {
                const Indicator* ind = find_indicator_for_instance(indicators, inst->unique_id);
                return engine.run_instance(*inst, *ind, mc,
                                           exemplars.size() ? &exemplars : nullptr);
            });
            for (const auto& r : records) lines << run_record_to_json(r).dump() << "\n";
        }
    }
    emit(lines.str(), out_path);
    util::log_info("backend calls: " + std::to_string(gateway.backend_calls()) +
                   ", cache hits: " + std::to_string(gateway.cache_hits()));
    return 0;
}

int cmd_eval(const GlobalFlags& flags, const std::string& records_path,
             const std::string& indicators_path, const std::string& instances_path,
             bool no_classify, const std::string& out_path, const std::string& out_records) {
    AppConfig cfg = build_config(flags);
    auto records = load_run_records(records_path);
    if (records.empty()) throw eval::EmptySetError();
    const auto instances = load_instances(instances_path);
    if (!indicators_path.empty()) {
        const auto indicators = load_indicators(indicators_path);
        validate_corpus(indicators, instances);
    }
    const auto imap = eval::index_instances(instances);

    std::unique_ptr<llm::Gateway> gateway;
    std::unique_ptr<eval::BinaryJudge> judge;
    std::unique_ptr<enhance::PromptLibrary> prompts;
    if (!cfg.judge_model.empty()) {
        prompts = std::make_unique<enhance::PromptLibrary>(
            enhance::PromptLibrary::load(cfg.prompt_dir));
        gateway = std::make_unique<llm::Gateway>(make_gateway(cfg));
        judge = std::make_unique<eval::LlmJudge>(*gateway, cfg.judge_model, *prompts);
    }

    eval::ScoreOptions opts;
    opts.classify_errors = !no_classify;
    const auto scores = eval::score_records(records, imap, judge.get(), opts);
    if (!out_records.empty()) {
        eval::apply_error_classes(records, scores);
        save_run_records(out_records, records);
    }

    eval::CellKey key{records.front().model_id, records.front().method, records.front().shots};
    long latency = 0;
    for (const auto& r : records) latency += r.latency_ms;
    const eval::CellScore cell = eval::summarize_scores(key, scores, latency);

    nlohmann::json sj = nlohmann::json::array();
    for (const auto& s : scores) sj.push_back(eval::score_to_json(s));
    nlohmann::json j{{"summary", cell_to_json(cell)},
                     {"scores", std::move(sj)},
                     {"judge_unparseable", judge ? judge->unparseable_count() : 0}};
    emit(j.dump(2) + "\n", out_path);
    return 0;
}

int cmd_aggregate(const GlobalFlags&, const std::string& indicator_id,
                  const std::string& records_path, const std::string& instances_path,
                  const std::string& indicators_path) {
    const auto records = load_run_records(records_path);
    const auto instances = load_instances(instances_path);
    Indicator indicator;
    if (!indicators_path.empty()) {
        const auto indicators = load_indicators(indicators_path);
        const Indicator* found = nullptr;
        for (const auto& ind : indicators)
            if (ind.id == indicator_id) found = &ind;
        if (!found) throw Error("no indicator '" + indicator_id + "' in " + indicators_path);
        indicator = *found;
    } else {
        indicator.id = indicator_id;
        indicator.rule = "(unspecified)";
    }
    const auto agg = eval::aggregate_indicator(records, instances, indicator);
    nlohmann::json j{{"indicator", indicator_id},
                     {"numerator", agg.numerator},
                     {"denominator", agg.denominator},
                     {"proportion", agg.proportion ? nlohmann::json(*agg.proportion)
                                                   : nlohmann::json(nullptr)}};
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_report(const GlobalFlags&, const std::string& run_dir, const std::string& format,
               const std::string& out_path) {
    auto cells = load_cells(run_dir);
    for (const auto& c : cells)
        if (c.absent)
            util::log_warn("cell " + c.key.model + "/" + to_string(c.key.method) + "/s" +
                           std::to_string(c.key.shots) + " is absent");
    const eval::ReportTable table = eval::build_report(std::move(cells));
    if (format == "csv") emit(table.render_csv(), out_path);
    else if (format == "md") emit(table.render_markdown(), out_path);
    else throw ConfigError("format must be csv or md");
    return 0;
}

int cmd_pipeline(const GlobalFlags& flags, const std::string& methods_csv,
                 const std::string& shots_csv, const std::string& reasoning_str,
                 const std::string& indicators_path, const std::string& instances_path,
                 const std::string& exemplars_path, int runs, const std::string& seed_salt,
                 const std::string& out_dir) {
    PipelineSpec spec;
    spec.config = build_config(flags);
    spec.indicators_path = indicators_path;
    spec.instances_path = instances_path;
    spec.exemplars_path = exemplars_path;
    spec.model = spec.config.model;
    spec.reasoning = engine::reasoning_mode_from_string(reasoning_str);
    spec.runs = runs;
    spec.seed_salt = seed_salt;
    spec.out_dir = out_dir;

    std::stringstream ms(methods_csv);
    std::string token;
    while (std::getline(ms, token, ',')) spec.methods.push_back(parse_method(token));
    spec.shots_list.clear();
    std::stringstream ss(shots_csv);
    while (std::getline(ss, token, ',')) spec.shots_list.push_back(std::stoi(token));

    run_pipeline(spec);
    util::log_info("pipeline complete: " + out_dir);
    return 0;
}

}  // namespace

int dispatch(int argc, const char* const* argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return dispatch(args);
}

int dispatch(const std::vector<std::string>& args) {
    CLI::App app{"medical quality-control indicator calculation over EMR text"};
    app.require_subcommand(1);

    GlobalFlags flags;
    app.add_option("--config", flags.config_file, "config file (key = value)");
    app.add_option("--backend-url", flags.backend_url, "chat-completions base URL");
    app.add_option("--api-key", flags.api_key, "backend API key");
    app.add_option("--model", flags.model, "model id");
    app.add_option("--judge-model", flags.judge_model, "judge model id");
    app.add_option("--cache-dir", flags.cache_dir, "response cache / fixture directory");
    app.add_option("--prompt-dir", flags.prompt_dir, "prompt asset directory");
    app.add_option("--width", flags.width, "parallelism width");
    app.add_flag("--replay-only", flags.replay_only, "serve everything from the fixture store");
    app.add_option("--run-tag", flags.run_tag, "cache salt for independent reruns");
    app.fallthrough();

    int rc = 0;

    // ingest
    auto* ingest = app.add_subcommand("ingest", "load, validate and summarize a corpus");
    std::string in_indicators, in_instances, out_indicators, out_instances;
    ingest->add_option("--indicators", in_indicators, "indicator file")->required();
    ingest->add_option("--instances", in_instances, "instance file")->required();
    ingest->add_option("--out-indicators", out_indicators, "write normalized indicators");
    ingest->add_option("--out-instances", out_instances, "write normalized instances");
    ingest->callback(
        [&] { rc = cmd_ingest(flags, in_indicators, in_instances, out_indicators, out_instances); });

    // enhance
    auto* enh = app.add_subcommand("enhance", "rule representation enhancement (3 steps)");
    std::string enh_mode = "semi", enh_indicators, enh_drafts, enh_out;
    enh->add_option("--mode", enh_mode, "semi | auto")->required();
    enh->add_option("--indicators", enh_indicators, "indicator file")->required();
    enh->add_option("--drafts", enh_drafts, "draft output file (default <indicators>.drafts.json)");
    enh->add_option("--out-indicators", enh_out, "write indicators with applied drafts");
    enh->callback([&] { rc = cmd_enhance(flags, enh_mode, enh_indicators, enh_drafts, enh_out); });

    // review
    auto* rev = app.add_subcommand("review", "review pending enhancement drafts");
    std::string rev_drafts, rev_indicators, rev_approve, rev_reject, rev_edit, rev_edited,
        rev_note, rev_out;
    bool rev_list = false;
    rev->add_option("--drafts", rev_drafts, "draft file")->required();
    rev->add_option("--indicators", rev_indicators, "indicator file")->required();
    rev->add_flag("--list", rev_list, "print drafts and exit");
    rev->add_option("--approve", rev_approve, "approve the draft for this indicator id");
    rev->add_option("--reject", rev_reject, "reject the draft for this indicator id");
    rev->add_option("--edit", rev_edit, "replace the draft for this indicator id");
    rev->add_option("--edited", rev_edited, "edited draft JSON (with --edit)");
    rev->add_option("--note", rev_note, "reviewer note");
    rev->add_option("--out-indicators", rev_out, "where to write updated indicators");
    rev->callback([&] {
        rc = cmd_review(flags, rev_drafts, rev_indicators, rev_list, rev_approve, rev_reject,
                        rev_edit, rev_edited, rev_note, rev_out);
    });

    // run
    auto* run = app.add_subcommand("run", "run a prompt strategy over a corpus");
    std::string run_method, run_reasoning = "symbolic", run_indicators, run_instances,
                run_exemplars, run_salt, run_out;
    int run_shots = 0, run_runs = 1;
    run->add_option("--method", run_method, "standard | cot | cfir | acfir")->required();
    run->add_option("--shots", run_shots, "0 | 1");
    run->add_option("--reasoning", run_reasoning, "llm-nl | llm-sy | symbolic");
    run->add_option("--indicators", run_indicators, "indicator file")->required();
    run->add_option("--instances", run_instances, "instance file")->required();
    run->add_option("--exemplars", run_exemplars, "exemplar file (one-shot)");
    run->add_option("--runs", run_runs, "number of independent runs");
    run->add_option("--seed-salt", run_salt, "salt for per-run cache isolation");
    run->add_option("--out", run_out, "records JSONL (default stdout)");
    run->callback([&] {
        rc = cmd_run(flags, run_method, run_shots, run_reasoning, run_indicators, run_instances,
                     run_exemplars, run_runs, run_salt, run_out);
    });

    // eval
    auto* ev = app.add_subcommand("eval", "score run records (accuracy, FC/FF, error classes)");
    std::string ev_records, ev_indicators, ev_instances, ev_out, ev_out_records;
    bool ev_no_classify = false;
    ev->add_option("--records", ev_records, "records JSONL")->required();
    ev->add_option("--indicators", ev_indicators, "indicator file");
    ev->add_option("--instances", ev_instances, "instance file")->required();
    ev->add_flag("--no-classify", ev_no_classify, "skip error classification");
    ev->add_option("--out", ev_out, "scores JSON (default stdout)");
    ev->add_option("--out-records", ev_out_records, "rewrite records with error classes");
    ev->callback([&] {
        rc = cmd_eval(flags, ev_records, ev_indicators, ev_instances, ev_no_classify, ev_out,
                      ev_out_records);
    });

    // aggregate
    auto* agg = app.add_subcommand("aggregate", "numerator/denominator proportion per indicator");
    std::string agg_indicator, agg_records, agg_instances, agg_indicators;
    agg->add_option("--indicator", agg_indicator, "indicator id")->required();
    agg->add_option("--records", agg_records, "records JSONL")->required();
    agg->add_option("--instances", agg_instances, "instance file")->required();
    agg->add_option("--indicators", agg_indicators, "indicator file (optional)");
    agg->callback(
        [&] { rc = cmd_aggregate(flags, agg_indicator, agg_records, agg_instances, agg_indicators); });

    // report
    auto* rep = app.add_subcommand("report", "render a report from a pipeline run directory");
    std::string rep_dir, rep_format = "md", rep_out;
    rep->add_option("--run-dir", rep_dir, "pipeline output directory")->required();
    rep->add_option("--format", rep_format, "csv | md");
    rep->add_option("--out", rep_out, "output file (default stdout)");
    rep->callback([&] { rc = cmd_report(flags, rep_dir, rep_format, rep_out); });

    // pipeline
    auto* pipe = app.add_subcommand("pipeline", "full experiment sweep with report");
    std::string pipe_methods, pipe_shots = "0", pipe_reasoning = "symbolic", pipe_indicators,
                pipe_instances, pipe_exemplars, pipe_salt, pipe_out;
    int pipe_runs = 1;
    pipe->add_option("--methods", pipe_methods, "comma list: standard,cot,cfir,acfir")->required();
    pipe->add_option("--shots", pipe_shots, "comma list: 0,1");
    pipe->add_option("--reasoning", pipe_reasoning, "llm-nl | llm-sy | symbolic");
    pipe->add_option("--indicators", pipe_indicators, "indicator file")->required();
    pipe->add_option("--instances", pipe_instances, "instance file")->required();
    pipe->add_option("--exemplars", pipe_exemplars, "exemplar file");
    pipe->add_option("--runs", pipe_runs, "independent runs per cell");
    pipe->add_option("--seed-salt", pipe_salt, "salt for per-run cache isolation");
    pipe->add_option("--out-dir", pipe_out, "run directory")->required();
    pipe->callback([&] {
        rc = cmd_pipeline(flags, pipe_methods, pipe_shots, pipe_reasoning, pipe_indicators,
                          pipe_instances, pipe_exemplars, pipe_runs, pipe_salt, pipe_out);
    });

    try {
        app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const Error& e) {
        util::log_error(e.what());
        return 1;
    } catch (const std::exception& e) {
        util::log_error(std::string("unexpected: ") + e.what());
        return 1;
    }
    return rc;
}

}  // namespace mqcic::cli
