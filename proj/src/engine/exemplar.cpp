#include "mqcic/engine/exemplar.hpp"

#include <fstream>

#include <json.hpp>

#include "mqcic/engine/errors.hpp"

namespace mqcic::engine {

ExemplarStore ExemplarStore::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError(path, "cannot open");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw IoError(path, std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_array()) throw IoError(path, "expected a top-level JSON array");
    ExemplarStore store;
    for (const auto& ej : j) {
        Exemplar e;
        e.indicator_id = ej.at("indicator_id").get<std::string>();
        e.example_id = ej.value("example_id", std::string{});
        e.worked_output = ej.value("worked_output", std::string{});
        e.fact_example = ej.value("fact_example", std::string{});
        e.reasoning_example = ej.value("reasoning_example", std::string{});
        store.add(std::move(e));
    }
    return store;
}

void ExemplarStore::add(Exemplar e) { exemplars_.push_back(std::move(e)); }

const Exemplar* ExemplarStore::find(const std::string& indicator_id) const {
    for (const auto& e : exemplars_)
        if (e.indicator_id == indicator_id) return &e;
    return nullptr;
}

void ExemplarStore::check_disjoint(const std::vector<PatientInstance>& corpus) const {
    for (const auto& e : exemplars_) {
        if (e.example_id.empty()) continue;
        for (const auto& inst : corpus) {
            if (inst.unique_id == e.example_id)
                throw MethodConfigError("exemplar '" + e.example_id +
                                        "' is part of the evaluation corpus");
        }
    }
}

}  // namespace mqcic::engine
