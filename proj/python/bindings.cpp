#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mqcic/core/errors.hpp"
#include "mqcic/core/io.hpp"
#include "mqcic/core/run_record.hpp"
#include "mqcic/core/types.hpp"
#include "mqcic/dsl/eval.hpp"
#include "mqcic/dsl/parser.hpp"
#include "mqcic/dsl/printer.hpp"
#include "mqcic/llm/answer_extract.hpp"
#include "mqcic/llm/cache.hpp"
#include "mqcic/llm/types.hpp"

namespace py = pybind11;
using namespace mqcic;

namespace {

// Python value -> FactValue: bool, (value, unit) tuple, number, str, None.
FactValue fact_value_of(const py::handle& obj) {
    if (obj.is_none()) return FactValue::unknown();
    if (py::isinstance<FactValue>(obj)) return obj.cast<FactValue>();
    if (py::isinstance<py::bool_>(obj)) return FactValue::boolean(obj.cast<bool>());
    if (py::isinstance<py::tuple>(obj)) {
        auto t = obj.cast<py::tuple>();
        return FactValue::number(t[0].cast<double>(), t[1].cast<std::string>());
    }
    if (py::isinstance<py::int_>(obj) || py::isinstance<py::float_>(obj))
        return FactValue::number(obj.cast<double>());
    if (py::isinstance<py::str>(obj)) return FactValue::enumerated(obj.cast<std::string>());
    throw py::type_error("cannot convert value to a clinical fact value");
}

dsl::Bindings bindings_of(const py::dict& d) {
    dsl::Bindings b;
    for (const auto& item : d)
        b.set(item.first.cast<std::string>(), fact_value_of(item.second));
    return b;
}

/// A parsed, bound symbolic rule ready to evaluate.
struct Rule {
    dsl::ExprPtr expr;
    std::vector<TemplatedFact> facts;
};

}  // namespace

PYBIND11_MODULE(_mqcic, m) {
    m.doc() = "medical quality-control indicator calculation core";

    py::enum_<TruthValue>(m, "TruthValue")
        .value("TRUE", TruthValue::True)
        .value("FALSE", TruthValue::False)
        .value("UNKNOWN", TruthValue::Unknown);

    py::class_<FactValue>(m, "FactValue")
        .def_static("boolean", &FactValue::boolean)
        .def_static("number", &FactValue::number, py::arg("value"), py::arg("unit") = "")
        .def_static("enumerated", &FactValue::enumerated)
        .def_static("unknown", &FactValue::unknown)
        .def("is_unknown", &FactValue::is_unknown)
        .def("__eq__", [](const FactValue& a, const FactValue& b) { return a == b; })
        .def("__repr__", [](const FactValue& v) { return "FactValue(" + v.to_display() + ")"; })
        .def("__str__", &FactValue::to_display);

    py::class_<TemplatedFact>(m, "TemplatedFact")
        .def_readonly("fact_id", &TemplatedFact::fact_id)
        .def_readonly("description", &TemplatedFact::description)
        .def_readonly("required", &TemplatedFact::required)
        .def("__repr__",
             [](const TemplatedFact& f) { return "TemplatedFact(" + f.fact_id + ")"; });

    m.def("bool_fact", [](const std::string& id, const std::string& desc) {
        return TemplatedFact{id, desc, AnswerSetSpec::boolean(), true};
    }, py::arg("fact_id"), py::arg("description") = "");
    m.def("num_fact", [](const std::string& id, const std::string& desc, const std::string& unit) {
        return TemplatedFact{id, desc, AnswerSetSpec::numeric(unit), true};
    }, py::arg("fact_id"), py::arg("description") = "", py::arg("unit") = "");
    m.def("enum_fact",
          [](const std::string& id, const std::string& desc, std::vector<std::string> values) {
              return TemplatedFact{id, desc, AnswerSetSpec::enumeration(std::move(values)), true};
          },
          py::arg("fact_id"), py::arg("description"), py::arg("values"));

    py::class_<Indicator>(m, "Indicator")
        .def_readonly("id", &Indicator::id)
        .def_readonly("rule", &Indicator::rule)
        .def_readonly("facts", &Indicator::facts)
        .def_property_readonly(
            "symbolic_rules",
            [](const Indicator& i) { return i.logical_rules.symbolic; })
        .def_property_readonly(
            "natural_language_rules",
            [](const Indicator& i) { return i.logical_rules.natural_language; })
        .def("enhanced", &Indicator::enhanced)
        .def("__repr__", [](const Indicator& i) { return "Indicator(" + i.id + ")"; });

    py::class_<PatientInstance>(m, "PatientInstance")
        .def_readonly("unique_id", &PatientInstance::unique_id)
        .def_readonly("patient_note", &PatientInstance::patient_note)
        .def_readonly("question", &PatientInstance::question)
        .def_readonly("explanation", &PatientInstance::explanation)
        .def_readonly("label", &PatientInstance::label)
        .def_property_readonly("gold_facts",
                               [](const PatientInstance& p) {
                                   py::list out;
                                   for (const auto& gf : p.gold_facts)
                                       out.append(py::make_tuple(gf.fact_id, gf.original_text,
                                                                 gf.gold_value));
                                   return out;
                               })
        .def("__repr__",
             [](const PatientInstance& p) { return "PatientInstance(" + p.unique_id + ")"; });

    m.def("load_indicators", &load_indicators, py::arg("path"));
    m.def("load_instances", &load_instances, py::arg("path"));
    m.def("corpus_stats", [](const std::vector<PatientInstance>& instances) {
        const CorpusStats s = corpus_stats(instances);
        py::dict d;
        d["count"] = s.count;
        d["avg_note_tokens"] = s.avg_note_tokens;
        d["min_facts"] = s.min_facts;
        d["max_facts"] = s.max_facts;
        d["avg_facts"] = s.avg_facts;
        return d;
    });

    py::class_<Rule>(m, "Rule")
        .def("evaluate",
             [](const Rule& r, const py::dict& bindings) {
                 return dsl::evaluate(r.expr, bindings_of(bindings));
             })
        .def("canonical", [](const Rule& r) { return dsl::to_canonical_string(r.expr); })
        .def("fact_ids", [](const Rule& r) { return dsl::collect_fact_refs(r.expr); })
        .def("__repr__", [](const Rule& r) {
            return "Rule(" + dsl::to_canonical_string(r.expr) + ")";
        });

    m.def("parse_rule", [](const std::string& source, std::vector<TemplatedFact> facts) {
        Rule r;
        r.facts = std::move(facts);
        r.expr = dsl::parse_rule(source, r.facts);
        return r;
    }, py::arg("source"), py::arg("facts"));

    m.def("final_answer", [](const std::vector<TruthValue>& per_rule) {
        const dsl::FinalAnswer fa = dsl::final_answer(per_rule);
        return py::make_tuple(fa.answer, fa.definite);
    });

    m.def("parse_final_answer", &llm::extract_final_truth, py::arg("text"));
    m.def("extract_binary_judgment", [](const std::string& text) -> py::object {
        const auto v = llm::extract_binary_judgment(text);
        if (!v) return py::none();
        return py::int_(*v);
    });

    m.def("default_params", [] {
        const llm::GenerationParams p = llm::default_params();
        py::dict d;
        d["max_new_tokens"] = p.max_new_tokens;
        d["repetition_penalty"] = p.repetition_penalty;
        d["temperature"] = p.temperature;
        return d;
    });

    m.def("cache_key", [](const std::string& model_id,
                          const std::vector<std::pair<std::string, std::string>>& messages) {
        llm::ChatRequest req;
        req.model_id = model_id;
        for (const auto& [role, content] : messages) req.messages.push_back({role, content});
        return llm::cache_key(req);
    }, py::arg("model_id"), py::arg("messages"));

    py::register_exception<mqcic::Error>(m, "MqcicError");
}
