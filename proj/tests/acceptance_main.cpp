// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Runs offline end to end (scripted backends and fixture stores).

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <vector>

#include "mqcic/cli/pipeline.hpp"
#include "mqcic/core/io.hpp"
#include "mqcic/dsl/errors.hpp"
#include "mqcic/dsl/eval.hpp"
#include "mqcic/dsl/parser.hpp"
#include "mqcic/dsl/printer.hpp"
#include "mqcic/enhance/enhancer.hpp"
#include "mqcic/enhance/errors.hpp"
#include "mqcic/engine/engine.hpp"
#include "mqcic/eval/judge.hpp"
#include "mqcic/eval/metrics.hpp"
#include "mqcic/eval/report.hpp"
#include "support/fixtures.hpp"
#include "support/kleene_oracle.hpp"
#include "support/rule_gen.hpp"
#include "support/scripted_backend.hpp"

using namespace mqcic;
namespace fs = std::filesystem;

namespace {

struct Failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void expect(bool cond, const std::string& what) {
    if (!cond) throw Failure(what);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    expect(in.good(), "cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// ---------------------------------------------------------------------------
// C1: exhaustive + randomized oracle equivalence
// ---------------------------------------------------------------------------

struct PoolEntry {
    dsl::ExprPtr expr;
    int leaves = 0;
    unsigned mask = 0;  // bit per fact id in {a, b, c, d}
};

struct EquivalenceCounter {
    long long exprs = 0;
    long long evaluations = 0;
    long long disagreements = 0;
    std::string first_bad;
};

void check_expr_all_assignments(const PoolEntry& entry, EquivalenceCounter& counter) {
    static const char* kFacts[4] = {"a", "b", "c", "d"};
    std::vector<const char*> used;
    for (int f = 0; f < 4; ++f)
        if (entry.mask & (1u << f)) used.push_back(kFacts[f]);

    long combos = 1;
    for (std::size_t i = 0; i < used.size(); ++i) combos *= 3;

    // Facts absent from the expression cannot change its value, so sweeping
    // the occurring facts is the full 3^4 sweep.
    for (long c = 0; c < combos; ++c) {
        dsl::Bindings b;
        long rest = c;
        for (const char* fact : used) {
            const int v = rest % 3;
            rest /= 3;
            if (v == 0) b.set(fact, FactValue::boolean(false));
            else if (v == 2) b.set(fact, FactValue::boolean(true));
            else b.set(fact, FactValue::unknown());
        }
        const TruthValue got = dsl::evaluate(entry.expr, b);
        const TruthValue want = test::brute_force_oracle(entry.expr, b);
        ++counter.evaluations;
        if (got != want) {
            ++counter.disagreements;
            if (counter.first_bad.empty())
                counter.first_bad = dsl::to_canonical_string(entry.expr);
        }
    }
    ++counter.exprs;
}

std::string criterion_oracle_equivalence() {
    const auto started = std::chrono::steady_clock::now();

    std::vector<TemplatedFact> bool_facts = {
        {"a", "", AnswerSetSpec::boolean(), true},
        {"b", "", AnswerSetSpec::boolean(), true},
        {"c", "", AnswerSetSpec::boolean(), true},
        {"d", "", AnswerSetSpec::boolean(), true},
    };

    EquivalenceCounter counter;

    // Pool of all expressions of depth <= 2 over the four facts (binary
    // AND/OR, unary NOT), each with at most 4 fact-leaf occurrences.
    std::vector<PoolEntry> atoms;
    for (int f = 0; f < 4; ++f) {
        PoolEntry e;
        e.expr = dsl::bind_and_check(dsl::Expr::make_ref(bool_facts[f].fact_id), bool_facts);
        e.leaves = 1;
        e.mask = 1u << f;
        atoms.push_back(e);
    }

    auto combine = [](const PoolEntry& x, const PoolEntry& y, bool is_and) {
        PoolEntry e;
        e.expr = is_and ? dsl::Expr::make_and({x.expr, y.expr})
                        : dsl::Expr::make_or({x.expr, y.expr});
        e.leaves = x.leaves + y.leaves;
        e.mask = x.mask | y.mask;
        return e;
    };
    auto negate = [](const PoolEntry& x) {
        PoolEntry e;
        e.expr = dsl::Expr::make_not(x.expr);
        e.leaves = x.leaves;
        e.mask = x.mask;
        return e;
    };

    std::vector<PoolEntry> cumulative = atoms;
    std::vector<PoolEntry> previous = atoms;
    for (int depth = 1; depth <= 2; ++depth) {
        std::vector<PoolEntry> next;
        for (const auto& x : cumulative) next.push_back(negate(x));
        for (const auto& x : cumulative)
            for (const auto& y : cumulative) {
                if (x.leaves + y.leaves > 4) continue;
                next.push_back(combine(x, y, true));
                next.push_back(combine(x, y, false));
            }
        for (const auto& e : next) check_expr_all_assignments(e, counter);
        cumulative.insert(cumulative.end(), next.begin(), next.end());
        previous = std::move(next);
    }
    for (const auto& e : atoms) check_expr_all_assignments(e, counter);

    // Depth-3 layer, generated on the fly (children from the depth <= 2 pool).
    for (const auto& x : cumulative) check_expr_all_assignments(negate(x), counter);
    for (const auto& x : cumulative) {
        for (const auto& y : cumulative) {
            if (x.leaves + y.leaves > 4) continue;
            check_expr_all_assignments(combine(x, y, true), counter);
            check_expr_all_assignments(combine(x, y, false), counter);
        }
    }

    // Flat 3- and 4-way AND/OR chains over atoms and negated atoms.
    std::vector<PoolEntry> units = atoms;
    for (const auto& a : atoms) units.push_back(negate(a));
    for (std::size_t i = 0; i < units.size(); ++i)
        for (std::size_t j = 0; j < units.size(); ++j)
            for (std::size_t k = 0; k < units.size(); ++k) {
                PoolEntry e3;
                e3.expr = dsl::Expr::make_and({units[i].expr, units[j].expr, units[k].expr});
                e3.leaves = 3;
                e3.mask = units[i].mask | units[j].mask | units[k].mask;
                check_expr_all_assignments(e3, counter);
                e3.expr = dsl::Expr::make_or({units[i].expr, units[j].expr, units[k].expr});
                check_expr_all_assignments(e3, counter);
                for (std::size_t l = 0; l < units.size(); ++l) {
                    PoolEntry e4;
                    e4.expr = dsl::Expr::make_and(
                        {units[i].expr, units[j].expr, units[k].expr, units[l].expr});
                    e4.leaves = 4;
                    e4.mask = e3.mask | units[l].mask;
                    check_expr_all_assignments(e4, counter);
                    e4.expr = dsl::Expr::make_or(
                        {units[i].expr, units[j].expr, units[k].expr, units[l].expr});
                    check_expr_all_assignments(e4, counter);
                }
            }

    // Randomized sweep including numeric and enum comparisons.
    test::RuleGen gen(20250808);
    long long random_pairs = 0;
    for (int i = 0; i < 10000; ++i) {
        const dsl::ExprPtr e = gen.gen_expr(1 + static_cast<int>(gen.pick(5)));
        const dsl::Bindings b = gen.gen_bindings();
        TruthValue got;
        try {
            got = dsl::evaluate(e, b);
        } catch (const dsl::UnitMismatchError&) {
            bool oracle_threw = false;
            try {
                (void)test::brute_force_oracle(e, b);
            } catch (const dsl::UnitMismatchError&) {
                oracle_threw = true;
            }
            if (!oracle_threw) {
                ++counter.disagreements;
                if (counter.first_bad.empty())
                    counter.first_bad = dsl::to_canonical_string(e);
            }
            ++random_pairs;
            continue;
        }
        const TruthValue want = test::brute_force_oracle(e, b);
        ++random_pairs;
        ++counter.evaluations;
        if (got != want) {
            ++counter.disagreements;
            if (counter.first_bad.empty()) counter.first_bad = dsl::to_canonical_string(e);
        }
    }

    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    std::ostringstream detail;
    detail << counter.exprs << " exhaustive exprs (depth<=3, <=4 bool fact leaves), "
           << random_pairs << " randomized pairs, " << counter.evaluations
           << " evaluator comparisons, " << counter.disagreements << " disagreements, "
           << std::fixed << std::setprecision(1) << seconds << "s";
    expect(counter.disagreements == 0, "disagreement on " + counter.first_bad);
    expect(seconds < 30.0, "runtime exceeded 30s: " + detail.str());
    return detail.str();
}

// ---------------------------------------------------------------------------
// C2: Kleene monotonicity + De Morgan
// ---------------------------------------------------------------------------

std::string criterion_kleene_properties() {
    test::RuleGen gen(424242);
    long checked_mono = 0, violations = 0;
    for (int i = 0; i < 10000; ++i) {
        const dsl::ExprPtr e = gen.gen_expr(3);
        const dsl::Bindings b = gen.gen_bindings(0.5);
        TruthValue v;
        try {
            v = dsl::evaluate(e, b);
        } catch (const dsl::UnitMismatchError&) {
            continue;
        }
        ++checked_mono;
        if (v == TruthValue::Unknown) continue;
        for (int k = 0; k < 2; ++k) {
            if (dsl::evaluate(e, gen.refine(b)) != v) ++violations;
        }
    }

    long checked_dm = 0;
    for (int i = 0; i < 10000; ++i) {
        const dsl::ExprPtr a = gen.gen_expr(2);
        const dsl::ExprPtr b = gen.gen_expr(2);
        const dsl::Bindings bind = gen.gen_bindings();
        try {
            const TruthValue lhs =
                dsl::evaluate(dsl::Expr::make_not(dsl::Expr::make_and({a, b})), bind);
            const TruthValue rhs = dsl::evaluate(
                dsl::Expr::make_or({dsl::Expr::make_not(a), dsl::Expr::make_not(b)}), bind);
            ++checked_dm;
            if (lhs != rhs) ++violations;
        } catch (const dsl::UnitMismatchError&) {
            continue;
        }
    }

    std::ostringstream detail;
    detail << checked_mono << " monotonicity cases, " << checked_dm << " De Morgan cases, "
           << violations << " violations";
    expect(violations == 0, detail.str());
    return detail.str();
}

// ---------------------------------------------------------------------------
// C3: stent/TIMI-II end to end through symbolic CF-IR
// ---------------------------------------------------------------------------

std::string criterion_timi_case() {
    test::TempDir tmp;
    auto backend = std::make_shared<test::ScriptedBackend>();
    backend->respond_when("procedure:", "Reasoning: stent implantation documented.\nAnswer: stent");
    backend->respond_when("residual_stenosis:",
                          "Reasoning: no significant residual stenosis.\nAnswer: 0%");
    backend->respond_when("timi_grade:", "Reasoning: TIMI grade II.\nAnswer: 2");
    llm::Gateway gateway(backend, tmp.str());
    const auto prompts = enhance::PromptLibrary::load(test::prompt_dir());
    engine::Engine eng(gateway, prompts);

    const Indicator ind = test::coronary_indicator();
    const PatientInstance inst = test::coronary_timi2_instance();
    engine::MethodConfig cfg;
    cfg.method = Method::CFIR;
    cfg.model_id = "fixture-model";
    cfg.reasoning_mode = engine::ReasoningMode::Symbolic;

    const auto facts = eng.verify_all_facts(inst, ind, cfg);
    expect(facts.bindings.get_or_unknown("procedure") == FactValue::enumerated("stent"),
           "procedure verification");
    expect(facts.bindings.get_or_unknown("residual_stenosis") == FactValue::number(0, "%"),
           "stenosis verification");
    expect(facts.bindings.get_or_unknown("timi_grade") == FactValue::number(2, ""),
           "grade verification");

    const auto reasoning =
        eng.reason_rules(facts.bindings, ind, engine::ReasoningMode::Symbolic, cfg);
    expect(reasoning.per_rule.size() == 2, "two rules expected");
    expect(reasoning.per_rule[0] == TruthValue::True, "stenosis rule should hold");
    expect(reasoning.per_rule[1] == TruthValue::False, "TIMI conjunct must be identified False");

    const dsl::FinalAnswer fa = dsl::final_answer(reasoning.per_rule);
    expect(fa.answer == false && fa.definite == true, "final answer must be definite False");

    const RunRecord record = eng.run_instance(inst, ind, cfg);
    expect(record.parsed_answer == TruthValue::False, "record answer must be False");
    expect(record.rule_trace.has_value() &&
               record.rule_trace->find("timi_grade") != std::string::npos,
           "trace names the failing conjunct");
    return "fact stage (stent, 0%, TIMI 2); rules [True, False]; final False (definite)";
}

// ---------------------------------------------------------------------------
// C4: metric arithmetic
// ---------------------------------------------------------------------------

std::string criterion_metric_arithmetic() {
    PatientInstance four = test::make_instance("m_1", "note", true);
    for (int i = 0; i < 4; ++i)
        four.gold_facts.push_back({"f" + std::to_string(i), "span", FactValue::boolean(true)});
    RunRecord r;
    r.instance_id = "m_1";
    r.raw_response = "resp";
    r.parsed_answer = TruthValue::True;

    auto seq = [](std::vector<int> verdicts) {
        auto remaining = std::make_shared<std::vector<int>>(std::move(verdicts));
        return eval::ScriptedJudge(
            [remaining](const std::string&, const std::string&) -> std::optional<int> {
                const int v = remaining->front();
                remaining->erase(remaining->begin());
                return v;
            });
    };

    auto fc_judge = seq({1, 1, 0, 1});
    const auto fc = eval::fact_correctness(r, four, fc_judge);
    expect(fc.has_value() && *fc == 0.75, "FC [1,1,0,1] must be exactly 0.75");

    PatientInstance two = test::make_instance("m_2", "note", true);
    two.gold_facts = {{"g0", "s", FactValue::boolean(true)},
                      {"g1", "s", FactValue::boolean(true)}};
    RunRecord r2 = r;
    r2.instance_id = "m_2";
    auto ff_judge = seq({1, 0});
    const auto ff = eval::fact_faithfulness(r2, two, ff_judge);
    expect(ff.has_value() && *ff == 0.5, "FF [1,0] must be exactly 0.5");

    // Scripted 10-instance corpus: 7 correct answers by construction.
    std::vector<PatientInstance> insts;
    std::vector<RunRecord> records;
    for (int i = 0; i < 10; ++i) {
        const bool label = i % 2 == 0;
        PatientInstance inst = test::make_instance("acc_" + std::to_string(i), "note", label);
        RunRecord rec;
        rec.instance_id = inst.unique_id;
        const bool answer_correctly = i < 7;
        rec.parsed_answer = truth_of(answer_correctly ? label : !label);
        rec.raw_response = "scripted";
        insts.push_back(std::move(inst));
        records.push_back(std::move(rec));
    }
    const double acc = eval::accuracy(records, eval::index_instances(insts));
    expect(acc == 0.7, "micro accuracy over 10 scripted instances must be exactly 0.7");
    return "FC 0.75, FF 0.5, accuracy 7/10 = 0.7, all exact";
}

// ---------------------------------------------------------------------------
// C5: error taxonomy partition
// ---------------------------------------------------------------------------

std::string criterion_error_taxonomy() {
    // 30 incorrect records with known classes: 10 A, 12 B, 8 C. Half of the A
    // and B cases go through the judge path (no recorded verifications).
    std::vector<PatientInstance> insts;
    std::vector<RunRecord> records;
    std::vector<ErrorClass> want;
    int n = 0;
    auto fresh = [&](bool label) {
        PatientInstance inst = test::make_instance("e_" + std::to_string(n++), "note", label);
        inst.gold_facts = {{"f0", "span", FactValue::boolean(true)},
                           {"f1", "span", FactValue::number(3, "")}};
        return inst;
    };
    auto gold_verifs = [](const PatientInstance& inst) {
        std::vector<FactVerification> v;
        for (const auto& gf : inst.gold_facts) v.push_back({gf.fact_id, gf.gold_value, "gold"});
        return v;
    };

    for (int i = 0; i < 10; ++i) {  // Type A
        PatientInstance inst = fresh(true);
        RunRecord r;
        r.instance_id = inst.unique_id;
        r.parsed_answer = TruthValue::False;
        if (i < 5) {
            auto v = gold_verifs(inst);
            v[i % 2].value = i % 3 == 0 ? FactValue::unknown() : FactValue::boolean(false);
            if (i % 2 == 1) v[1].value = FactValue::number(9, "");
            r.fact_verifications = std::move(v);
            r.raw_response = "stated facts disagree";
        } else {
            r.raw_response = "CONTRADICTS: the note never documents f0";
        }
        want.push_back(ErrorClass::A);
        insts.push_back(std::move(inst));
        records.push_back(std::move(r));
    }
    for (int i = 0; i < 12; ++i) {  // Type B
        PatientInstance inst = fresh(true);
        RunRecord r;
        r.instance_id = inst.unique_id;
        r.parsed_answer = TruthValue::False;  // wrong conclusion
        if (i < 6) {
            r.fact_verifications = gold_verifs(inst);
            r.raw_response = "facts fine, rule misapplied. Answer: No";
        } else {
            r.raw_response = "FAITHFUL summary but the threshold was misread. Answer: No";
        }
        want.push_back(ErrorClass::B);
        insts.push_back(std::move(inst));
        records.push_back(std::move(r));
    }
    for (int i = 0; i < 8; ++i) {  // Type C
        PatientInstance inst = fresh(true);
        RunRecord r;
        r.instance_id = inst.unique_id;
        r.parsed_answer = TruthValue::Unknown;
        if (i < 4) {
            r.raw_response = "";  // refusal / format break
        } else {
            r.fact_verifications = gold_verifs(inst);
            r.raw_response = "FAITHFUL but I will not commit to a verdict.";
        }
        want.push_back(ErrorClass::C);
        insts.push_back(std::move(inst));
        records.push_back(std::move(r));
    }

    eval::ScriptedJudge judge([](const std::string& criterion, const std::string& subject) {
        if (criterion == eval::kJudgeFactContradiction)
            return std::optional<int>(subject.find("CONTRADICTS") != std::string::npos ? 1 : 0);
        return std::optional<int>(1);
    });

    const auto imap = eval::index_instances(insts);
    int matched = 0, a = 0, b = 0, c = 0;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto cls = eval::classify_error(records[i], insts[i], judge);
        expect(cls.has_value(), "classification must resolve under fixture judges");
        if (*cls == want[i]) ++matched;
        if (*cls == ErrorClass::A) ++a;
        if (*cls == ErrorClass::B) ++b;
        if (*cls == ErrorClass::C) ++c;
    }
    expect(matched == 30, "expected 30/30, got " + std::to_string(matched));
    expect(a + b + c == 30, "classes must partition the incorrect records");

    // Table layout check: per-class rates over 100 records sum to the total.
    std::vector<eval::InstanceScore> scores(100);
    for (int i = 0; i < 100; ++i) {
        scores[i].instance_id = "t_" + std::to_string(i);
        if (i < 17) scores[i].error_class = ErrorClass::A;
        else if (i < 22) scores[i].error_class = ErrorClass::B;
        else scores[i].correct = true;
    }
    const eval::CellScore cell =
        eval::summarize_scores({"model", Method::CFIR, 1}, scores);
    expect(std::abs(*cell.rate_fact - 0.17) < 1e-12, "fact rate 0.17");
    expect(std::abs(*cell.rate_reasoning - 0.05) < 1e-12, "reasoning rate 0.05");
    expect(std::abs(*cell.rate_other - 0.00) < 1e-12, "other rate 0.00");
    expect(std::abs(*cell.rate_total - 0.22) < 1e-12, "total must be 0.17+0.05+0.00 = 0.22");
    const eval::ReportTable table = eval::build_report({cell});
    expect(table.render_markdown().find("| 0.22 |") != std::string::npos,
           "rendered total must read 0.22");
    return "30/30 classified, partition holds, 0.17+0.05+0.00 -> 0.22";
}

// ---------------------------------------------------------------------------
// C6: determinism, replay isolation, prompt-hash sensitivity
// ---------------------------------------------------------------------------

void prime_fixture_store(const std::string& cache_dir, const std::string& model,
                         const std::string& indicators_path, const std::string& instances_path,
                         const std::string& prompt_dir) {
    auto backend = std::make_shared<test::ScriptedBackend>();
    backend->respond_when("procedure:", "Answer: stent");
    backend->respond_when("residual_stenosis:", "Answer: 0%");
    backend->respond_when("timi_grade:", "Answer: 2");
    backend->respond_when("anxiety_screening:", "Answer: True");
    backend->respond_when("depression_screening:", "Answer: True");
    backend->respond_when("gcs_admission:", "Answer: 8");
    backend->respond_when("gcs_discharge:", "Answer: 13");
    backend->respond_when("nihss", "Answer: Not sure");
    llm::Gateway gw(backend, cache_dir);
    const auto prompts = enhance::PromptLibrary::load(prompt_dir);
    engine::Engine eng(gw, prompts);
    const auto indicators = load_indicators(indicators_path);
    const auto instances = load_instances(instances_path);
    engine::MethodConfig cfg;
    cfg.method = Method::CFIR;
    cfg.model_id = model;
    cfg.reasoning_mode = engine::ReasoningMode::Symbolic;

    auto backend2 = std::make_shared<test::ScriptedBackend>();
    backend2->respond_when("procedure:", "Answer: PTCA");
    backend2->respond_when("residual_stenosis:", "Answer: 30%");
    backend2->respond_when("timi_grade:", "Answer: 3");
    backend2->respond_when("gcs_admission:", "Answer: 12");
    backend2->respond_when("gcs_discharge:", "Answer: 7");
    backend2->respond_when("nihss_admission:", "Answer: 6");
    backend2->respond_when("nihss_discharge:", "Answer: 15");
    llm::Gateway gw2(backend2, cache_dir);
    engine::Engine eng2(gw2, prompts);

    for (const auto& inst : instances) {
        const Indicator* ind = find_indicator_for_instance(indicators, inst.unique_id);
        const bool alt = inst.unique_id == "pci_success_002" || inst.unique_id == "ich_improve_002";
        (alt ? eng2 : eng).run_instance(inst, *ind, cfg);
    }
}

std::string criterion_determinism_replay() {
    const char* env = std::getenv("MQCIC_TESTDATA");
    const std::string td = env ? env : "testdata";
    test::TempDir tmp;
    const std::string cache = tmp.file("cache");
    const std::string prompt_dir = test::prompt_dir();
    prime_fixture_store(cache, "fx-model", td + "/indicators.json", td + "/instances.json",
                        prompt_dir);

    cli::PipelineSpec spec;
    spec.config.replay_only = true;
    spec.config.cache_dir = cache;
    spec.config.prompt_dir = prompt_dir;
    spec.config.width = 4;
    spec.indicators_path = td + "/indicators.json";
    spec.instances_path = td + "/instances.json";
    spec.methods = {Method::CFIR};
    spec.shots_list = {0};
    spec.reasoning = engine::ReasoningMode::Symbolic;
    spec.model = "fx-model";

    spec.out_dir = tmp.file("run_a");
    cli::run_pipeline(spec);
    spec.out_dir = tmp.file("run_b");
    cli::run_pipeline(spec);

    for (const char* name : {"/report.csv", "/report.md", "/manifest.json",
                             "/cells/fx-model__CFIR__s0/run0.records.jsonl",
                             "/cells/fx-model__CFIR__s0/cell.json"}) {
        expect(read_file(tmp.file("run_a") + name) == read_file(tmp.file("run_b") + name),
               std::string("replay runs diverge in ") + name);
    }

    // Zero network: a replay gateway drives the same corpus without a backend.
    {
        llm::Gateway gw = llm::Gateway::replay_only(cache);
        const auto prompts = enhance::PromptLibrary::load(prompt_dir);
        engine::Engine eng(gw, prompts);
        const auto indicators = load_indicators(td + "/indicators.json");
        const auto instances = load_instances(td + "/instances.json");
        engine::MethodConfig cfg;
        cfg.method = Method::CFIR;
        cfg.model_id = "fx-model";
        cfg.reasoning_mode = engine::ReasoningMode::Symbolic;
        for (const auto& inst : instances)
            eng.run_instance(inst, *find_indicator_for_instance(indicators, inst.unique_id), cfg);
        expect(gw.backend_calls() == 0, "replay run must make zero backend calls");
    }

    // Flipping one character of a prompt asset changes the affected cache key
    // and leaves unrelated requests untouched.
    const auto prompts = enhance::PromptLibrary::load(prompt_dir);
    std::string flipped_text = prompts.get("fact_verification");
    flipped_text[flipped_text.find("clinical")] = 'C';
    auto flipped = enhance::PromptLibrary::from_map(
        {{"fact_verification", flipped_text}, {"standard", prompts.get("standard")}});

    const Indicator ind = test::coronary_indicator();
    const PatientInstance inst = test::coronary_timi2_instance();
    auto request_of = [&](const enhance::PromptLibrary& lib, const std::string& asset) {
        llm::ChatRequest req;
        req.model_id = "fx-model";
        std::map<std::string, std::string> vars = {
            {"note", inst.patient_note},
            {"question", ind.rule},
            {"fact_description", "procedure: type"},
            {"answer_spec", "one of: stent, PTCA"},
            {"answer_hint", "value"},
            {"instruction", "inst"}};
        req.messages = {{"user", lib.render(asset, vars)}};
        return req;
    };
    expect(llm::cache_key(request_of(prompts, "fact_verification")) !=
               llm::cache_key(request_of(flipped, "fact_verification")),
           "prompt flip must change the affected cache key");
    expect(llm::cache_key(request_of(prompts, "standard")) ==
               llm::cache_key(request_of(flipped, "standard")),
           "unrelated prompts must keep their cache keys");
    expect(prompts.hashes().at("fact_verification") !=
               flipped.hashes().at("fact_verification"),
           "asset hash must change");
    return "two replay pipelines byte-identical, zero backend calls, prompt flip isolates";
}

// ---------------------------------------------------------------------------
// C7: enhancement coverage and rejection errors
// ---------------------------------------------------------------------------

std::string criterion_enhancement_coverage() {
    // Scripted decompositions per fixture indicator.
    auto responder = [](const llm::ChatRequest& req) -> std::string {
        const std::string& p = req.messages.back().content;
        const bool decompose = p.find("Respond with one JSON object") != std::string::npos;
        const bool templatize = p.find("Respond with one JSON array") != std::string::npos;
        if (p.find("coronary intervention") != std::string::npos) {
            if (decompose)
                return R"json({"natural_language": ["Stenosis under threshold for the procedure.", "TIMI grade is 3."],
                    "symbolic": ["(procedure == \"stent\" AND residual_stenosis < 20) OR (procedure == \"PTCA\" AND residual_stenosis < 50)", "timi_grade == 3"]})json";
            if (templatize)
                return R"json([{"fact_id": "procedure", "answer_set": {"kind": "enum", "values": ["stent", "PTCA"]}},
                    {"fact_id": "residual_stenosis", "answer_set": {"kind": "num", "unit": "%"}},
                    {"fact_id": "timi_grade", "answer_set": {"kind": "num", "unit": ""}}])json";
        }
        if (p.find("anxiety and depression") != std::string::npos) {
            if (decompose)
                return R"json({"natural_language": ["Anxiety screening done.", "Depression screening done."],
                    "symbolic": ["anxiety_screening", "depression_screening"]})json";
            if (templatize)
                return R"json([{"fact_id": "anxiety_screening", "answer_set": {"kind": "bool"}},
                    {"fact_id": "depression_screening", "answer_set": {"kind": "bool"}}])json";
        }
        if (p.find("improved or stable at discharge") != std::string::npos) {
            if (decompose)
                return R"json({"natural_language": ["Discharge scores no worse than admission."],
                    "symbolic": ["gcs_discharge >= gcs_admission OR nihss_discharge <= nihss_admission"]})json";
            if (templatize)
                return R"json([{"fact_id": "gcs_admission", "answer_set": {"kind": "num", "unit": ""}},
                    {"fact_id": "gcs_discharge", "answer_set": {"kind": "num", "unit": ""}},
                    {"fact_id": "nihss_admission", "answer_set": {"kind": "num", "unit": ""}},
                    {"fact_id": "nihss_discharge", "answer_set": {"kind": "num", "unit": ""}}])json";
        }
        return "K";
    };

    test::TempDir tmp;
    auto backend = std::make_shared<test::ScriptedBackend>(responder);
    llm::Gateway gw(backend, tmp.str());
    const auto prompts = enhance::PromptLibrary::load(test::prompt_dir());
    enhance::Enhancer enhancer(gw, prompts, "fx-model");

    int approved = 0;
    for (const auto& fixture : test::fixture_indicators()) {
        const Indicator bare = test::unenhanced(fixture);
        const enhance::EnhancementDraft draft =
            enhancer.enhance_indicator(bare, enhance::EnhanceMode::Auto);
        expect(draft.status == enhance::DraftStatus::Approved, "auto drafts self-approve");

        std::set<std::string> referenced;
        for (const auto& sy : draft.decomposed_sy)
            for (const auto& id : dsl::collect_fact_refs(dsl::parse_rule_unbound(sy)))
                referenced.insert(id);
        std::set<std::string> declared;
        for (const auto& tf : draft.templated_facts) declared.insert(tf.fact_id);
        expect(referenced == declared,
               "fact-id set must equal template-id set for " + fixture.id);
        ++approved;
    }

    // Rejections: vacuous decomposition, uncovered fact, kind conflict.
    auto bad_backend = std::make_shared<test::ScriptedBackend>();
    bad_backend->respond_when("Respond with one JSON object",
                              R"json({"natural_language": ["always"], "symbolic": ["true"]})json");
    llm::Gateway bad_gw(bad_backend, std::nullopt);
    enhance::Enhancer bad_enhancer(bad_gw, prompts, "fx-model");
    bool vacuous_rejected = false;
    try {
        bad_enhancer.decompose_rules(test::unenhanced(test::coronary_indicator()), "");
    } catch (const enhance::DecompositionUnparseableError&) {
        vacuous_rejected = true;
    }
    expect(vacuous_rejected, "vacuous decomposition must raise DecompositionUnparseable");

    enhance::EnhancementDraft uncovered;
    uncovered.indicator_id = "pci_success";
    uncovered.decomposed_nl = {"grade"};
    uncovered.decomposed_sy = {"timi_grade == 3"};
    bool uncovered_rejected = false;
    try {
        enhance::validate_draft(uncovered);
    } catch (const enhance::UncoveredFactError& e) {
        uncovered_rejected = e.fact_id == "timi_grade";
    }
    expect(uncovered_rejected, "missing template must raise UncoveredFact");

    enhance::EnhancementDraft conflicted;
    conflicted.indicator_id = "pci_success";
    conflicted.decomposed_nl = {"a", "b"};
    conflicted.decomposed_sy = {"procedure == \"stent\"", "procedure < 3"};
    conflicted.templated_facts = {
        {"procedure", "", AnswerSetSpec::enumeration({"stent", "PTCA"}), true}};
    bool conflict_rejected = false;
    try {
        enhance::validate_draft(conflicted);
    } catch (const enhance::KindConflictError&) {
        conflict_rejected = true;
    }
    expect(conflict_rejected, "conflicting usage must raise KindConflict");

    return std::to_string(approved) + " drafts approved with exact coverage; vacuous/uncovered/"
                                      "conflicting drafts rejected with the specified errors";
}

// ---------------------------------------------------------------------------
// C8: schema fidelity + exact corpus stats
// ---------------------------------------------------------------------------

std::string criterion_schema_fidelity() {
    const char* env = std::getenv("MQCIC_TESTDATA");
    const std::string td = env ? env : "testdata";
    test::TempDir tmp;

    const auto indicators = load_indicators(td + "/indicators.json");
    const auto instances = load_instances(td + "/instances.json");
    expect(indicators.size() == 3 && instances.size() == 5, "fixture corpus shape");

    save_indicators(tmp.file("ind.json"), indicators);
    save_instances(tmp.file("inst.json"), instances);

    nlohmann::json ind_json, inst_json;
    {
        std::ifstream i1(tmp.file("ind.json")), i2(tmp.file("inst.json"));
        i1 >> ind_json;
        i2 >> inst_json;
    }
    for (const char* field : {"definition", "formula", "significance", "other",
                              "instruction_standard", "numerator", "denominator", "rule",
                              "facts", "logical_rules"})
        expect(ind_json.at(0).contains(field), std::string("indicator field lost: ") + field);
    for (const char* field : {"unique_id", "patient note", "label", "facts", "logic"})
        expect(inst_json.at(0).contains(field), std::string("instance field lost: ") + field);
    expect(inst_json.at(0).contains("explaination"),
           "paper spelling 'explaination' must survive the round trip");
    expect(inst_json.at(0).contains("icd10"), "extra fields must survive the round trip");

    const auto reloaded_ind = load_indicators(tmp.file("ind.json"));
    const auto reloaded_inst = load_instances(tmp.file("inst.json"));
    for (std::size_t i = 0; i < indicators.size(); ++i)
        expect(indicator_to_json(indicators[i]) == indicator_to_json(reloaded_ind[i]),
               "indicator round trip must be structurally equal");
    for (std::size_t i = 0; i < instances.size(); ++i)
        expect(instance_to_json(instances[i]) == instance_to_json(reloaded_inst[i]),
               "instance round trip must be structurally equal");

    // Synthetic corpus with known fact counts: 2, 3, 7.
    std::vector<PatientInstance> synth;
    int counts[] = {2, 3, 7};
    for (int i = 0; i < 3; ++i) {
        PatientInstance p = test::make_instance("s_" + std::to_string(i), "one two three", true);
        for (int k = 0; k < counts[i]; ++k)
            p.gold_facts.push_back({"f" + std::to_string(k), "", FactValue::boolean(true)});
        synth.push_back(std::move(p));
    }
    const CorpusStats stats = corpus_stats(synth);
    expect(stats.count == 3, "count 3");
    expect(stats.min_facts == 2 && stats.max_facts == 7, "min 2, max 7");
    expect(stats.avg_facts == 4.0, "avg exactly (2+3+7)/3 = 4");
    expect(stats.avg_note_tokens == 3.0, "token stat exact on synthetic notes");
    return "all schema fields preserved (incl. 'patient note', 'explaination'), stats exact";
}

}  // namespace

int main() {
    struct Criterion {
        int number;
        const char* name;
        std::function<std::string()> body;
    };
    const std::vector<Criterion> criteria = {
        {1, "rule-DSL oracle equivalence", criterion_oracle_equivalence},
        {2, "Kleene monotonicity and De Morgan", criterion_kleene_properties},
        {3, "stent/TIMI-II symbolic CF-IR end-to-end", criterion_timi_case},
        {4, "metric arithmetic", criterion_metric_arithmetic},
        {5, "error-taxonomy partition", criterion_error_taxonomy},
        {6, "determinism and replay", criterion_determinism_replay},
        {7, "enhancement coverage", criterion_enhancement_coverage},
        {8, "schema fidelity", criterion_schema_fidelity},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        try {
            const std::string detail = c.body();
            std::printf("[PASS] C%d %s: %s\n", c.number, c.name, detail.c_str());
        } catch (const std::exception& e) {
            ++failures;
            std::printf("[FAIL] C%d %s: %s\n", c.number, c.name, e.what());
        }
        std::fflush(stdout);
    }
    if (failures) std::printf("%d criterion(s) failed\n", failures);
    else std::printf("all %zu criteria passed\n", criteria.size());
    return failures == 0 ? 0 : 1;
}
