#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mqcic/core/types.hpp"

namespace mqcic::engine {

/// One worked example per indicator, authored outside the evaluation corpus
/// and human-reviewed. worked_output feeds one-shot Standard/CoT prompts; the
/// optional per-stage fields feed one-shot CF-IR so fact prompts never see
/// the rule set.
struct Exemplar {
    std::string indicator_id;
    std::string example_id;  // must not collide with any evaluated instance
    std::string worked_output;
    std::string fact_example;
    std::string reasoning_example;
};

class ExemplarStore {
public:
    ExemplarStore() = default;
    static ExemplarStore load(const std::string& path);

    void add(Exemplar e);
    const Exemplar* find(const std::string& indicator_id) const;

    /// Exemplar instances must stay outside the evaluation corpus.
    void check_disjoint(const std::vector<PatientInstance>& corpus) const;

    std::size_t size() const { return exemplars_.size(); }

private:
    std::vector<Exemplar> exemplars_;
};

}  // namespace mqcic::engine
