#pragma once

// Shared fixture corpus for tests: three indicators (coronary intervention
// success, Parkinson mood screening, ICH improvement at discharge) plus
// instance builders and a temp dir helper.

#include <atomic>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "mqcic/core/types.hpp"

namespace mqcic::test {

class TempDir {
public:
    explicit TempDir(const std::string& tag = "mqcic") {
        static std::atomic<int> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                (tag + "_" + std::to_string(::getpid()) + "_" +
                 std::to_string(counter.fetch_add(1)));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    const std::filesystem::path& path() const { return path_; }
    std::string str() const { return path_.string(); }
    std::string file(const std::string& name) const { return (path_ / name).string(); }

private:
    std::filesystem::path path_;
};

inline void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::trunc);
    out << content;
}

inline Indicator coronary_indicator() {
    Indicator ind;
    ind.id = "pci_success";
    ind.definition = "Share of coronary interventions meeting post-operative success criteria.";
    ind.formula = "numerator / denominator";
    ind.rule =
        "Please assess if the patient's coronary intervention meets post-operative success "
        "criteria: residual stenosis <20% after stenting or <50% after PTCA, with a TIMI "
        "grade of 3.";
    ind.numerator = "interventions meeting the success criteria";
    ind.denominator = "all coronary interventions";
    ind.facts = {
        {"procedure", "type of coronary intervention performed",
         AnswerSetSpec::enumeration({"stent", "PTCA"}), true},
        {"residual_stenosis", "residual stenosis after the procedure",
         AnswerSetSpec::numeric("%"), true},
        {"timi_grade", "post-procedure TIMI flow grade", AnswerSetSpec::numeric(""), true},
    };
    ind.logical_rules.natural_language = {
        "Residual stenosis is below 20% after stenting, or below 50% after PTCA.",
        "The post-procedure TIMI flow grade is 3.",
    };
    ind.logical_rules.symbolic = {
        "(procedure == \"stent\" AND residual_stenosis < 20) OR (procedure == \"PTCA\" AND "
        "residual_stenosis < 50)",
        "timi_grade == 3",
    };
    return ind;
}

inline Indicator screening_indicator() {
    Indicator ind;
    ind.id = "pd_screening";
    ind.definition = "Completeness of mood screening for hospitalized Parkinson's patients.";
    ind.rule =
        "Can the screening for anxiety and depression symptoms be considered complete based "
        "on the medical records of hospitalized Parkinson's disease patients?";
    ind.facts = {
        {"anxiety_screening", "anxiety symptom screening was performed",
         AnswerSetSpec::boolean(), true},
        {"depression_screening", "depression symptom screening was performed",
         AnswerSetSpec::boolean(), true},
    };
    ind.logical_rules.natural_language = {
        "Anxiety symptom screening was performed.",
        "Depression symptom screening was performed.",
    };
    ind.logical_rules.symbolic = {"anxiety_screening", "depression_screening"};
    return ind;
}

inline Indicator ich_indicator() {
    Indicator ind;
    ind.id = "ich_improve";
    ind.definition = "ICH improvement or stabilization at discharge.";
    ind.rule =
        "Is the patient improved or stable at discharge: discharge GCS not lower than "
        "admission GCS, or discharge NIHSS not higher than admission NIHSS?";
    ind.facts = {
        {"gcs_admission", "GCS at admission", AnswerSetSpec::numeric(""), true},
        {"gcs_discharge", "GCS at discharge", AnswerSetSpec::numeric(""), true},
        {"nihss_admission", "NIHSS at admission", AnswerSetSpec::numeric(""), false},
        {"nihss_discharge", "NIHSS at discharge", AnswerSetSpec::numeric(""), false},
    };
    ind.logical_rules.natural_language = {
        "Discharge GCS is at least admission GCS, or discharge NIHSS is at most admission "
        "NIHSS.",
    };
    ind.logical_rules.symbolic = {
        "gcs_discharge >= gcs_admission OR nihss_discharge <= nihss_admission",
    };
    return ind;
}

inline std::vector<Indicator> fixture_indicators() {
    return {coronary_indicator(), screening_indicator(), ich_indicator()};
}

inline PatientInstance make_instance(std::string unique_id, std::string note, bool label,
                                     std::vector<GoldFact> gold_facts = {},
                                     std::vector<GoldLogic> gold_logic = {}) {
    PatientInstance inst;
    inst.unique_id = std::move(unique_id);
    inst.patient_note = std::move(note);
    inst.label = label;
    inst.gold_facts = std::move(gold_facts);
    inst.gold_logic = std::move(gold_logic);
    return inst;
}

/// The stent/TIMI-II case: facts verify to (stent, 0%, TIMI 2), so the second
/// rule fails and the answer is False.
inline PatientInstance coronary_timi2_instance() {
    return make_instance(
        "pci_success_001",
        "Treatment Process: coronary angiography followed by stent implantation. "
        "Post-stent implantation, there was no significant residual stenosis at the LAD "
        "lesion and TIMI grade II.",
        false,
        {{"procedure", "stent implantation", FactValue::enumerated("stent")},
         {"residual_stenosis", "no significant residual stenosis at the LAD lesion",
          FactValue::number(0, "%")},
         {"timi_grade", "TIMI grade II", FactValue::number(2, "")}},
        {{0, TruthValue::True}, {1, TruthValue::False}});
}

inline PatientInstance coronary_success_instance() {
    return make_instance(
        "pci_success_002",
        "Treatment Process: PTCA performed. Residual stenosis 30%, TIMI grade 3 flow "
        "restored.",
        true,
        {{"procedure", "PTCA performed", FactValue::enumerated("PTCA")},
         {"residual_stenosis", "Residual stenosis 30%", FactValue::number(30, "%")},
         {"timi_grade", "TIMI grade 3", FactValue::number(3, "")}},
        {{0, TruthValue::True}, {1, TruthValue::True}});
}

/// The Parkinson screening case: HAMD/BDI scores in the note mean depression
/// screening happened; PDSS and HAMA cover anxiety.
inline PatientInstance screening_instance() {
    return make_instance(
        "pd_screening_001",
        "On the initial visit and the 34th day after treatment, the patient's H-Y stage "
        "decreased from stage 3 to 2.5, the HAMD score dropped from 23 to 2, the Beck "
        "Depression Inventory (BDI) score decreased from 14 to 4, the PDSS-2 score dropped "
        "from 10 to 2, and the HAMA score fell from 18 to 5. 患者情绪平稳。",
        true,
        {{"anxiety_screening", "the HAMA score fell from 18 to 5", FactValue::boolean(true)},
         {"depression_screening", "the HAMD score dropped from 23 to 2",
          FactValue::boolean(true)}},
        {{0, TruthValue::True}, {1, TruthValue::True}});
}

inline PatientInstance ich_instance(bool improved) {
    if (improved) {
        return make_instance(
            "ich_improve_001",
            "Admission GCS 8, NIHSS 18. After treatment of the intracerebral hemorrhage the "
            "patient recovered steadily. Discharge GCS 13, NIHSS 9.",
            true,
            {{"gcs_admission", "Admission GCS 8", FactValue::number(8, "")},
             {"gcs_discharge", "Discharge GCS 13", FactValue::number(13, "")},
             {"nihss_admission", "NIHSS 18", FactValue::number(18, "")},
             {"nihss_discharge", "NIHSS 9", FactValue::number(9, "")}},
            {{0, TruthValue::True}});
    }
    return make_instance(
        "ich_improve_002",
        "Admission GCS 12, NIHSS 6. Course complicated by rebleeding. Discharge GCS 7, "
        "NIHSS 15.",
        false,
        {{"gcs_admission", "Admission GCS 12", FactValue::number(12, "")},
         {"gcs_discharge", "Discharge GCS 7", FactValue::number(7, "")},
         {"nihss_admission", "NIHSS 6", FactValue::number(6, "")},
         {"nihss_discharge", "NIHSS 15", FactValue::number(15, "")}},
        {{0, TruthValue::False}});
}

inline std::vector<PatientInstance> fixture_instances() {
    return {coronary_timi2_instance(), coronary_success_instance(), screening_instance(),
            ich_instance(true), ich_instance(false)};
}

/// Strip the enhancement so the indicator carries only its prose rule.
inline Indicator unenhanced(Indicator ind) {
    ind.facts.clear();
    ind.logical_rules = {};
    return ind;
}

inline std::string prompt_dir() {
    if (const char* env = std::getenv("MQCIC_PROMPT_DIR")) return env;
    return "assets/prompts";
}

}  // namespace mqcic::test
