#pragma once

// Hand-rolled generators for property tests over the rule DSL.

#include <random>
#include <vector>

#include "mqcic/core/types.hpp"
#include "mqcic/dsl/ast.hpp"
#include "mqcic/dsl/eval.hpp"
#include "mqcic/dsl/parser.hpp"

namespace mqcic::test {

class RuleGen {
public:
    explicit RuleGen(std::uint64_t seed) : rng_(seed) {
        facts_.push_back({"a", "bool a", AnswerSetSpec::boolean(), true});
        facts_.push_back({"b", "bool b", AnswerSetSpec::boolean(), true});
        facts_.push_back({"c", "bool c", AnswerSetSpec::boolean(), true});
        facts_.push_back({"d", "bool d", AnswerSetSpec::boolean(), true});
        facts_.push_back({"x", "percent x", AnswerSetSpec::numeric("%"), true});
        facts_.push_back({"x2", "percent x2", AnswerSetSpec::numeric("%"), true});
        facts_.push_back({"y", "dose y", AnswerSetSpec::numeric("mg"), true});
        facts_.push_back({"z", "grade z", AnswerSetSpec::numeric(""), true});
        facts_.push_back({"p", "procedure", AnswerSetSpec::enumeration({"stent", "PTCA"}), true});
        facts_.push_back({"q", "level", AnswerSetSpec::enumeration({"low", "mid", "high"}), true});
    }

    const std::vector<TemplatedFact>& facts() const { return facts_; }

    dsl::ExprPtr gen_expr(int depth) { return dsl::bind_and_check(gen_raw(depth), facts_); }

    /// Boolean-facts-only expression (for the exhaustive-vs-random split).
    dsl::ExprPtr gen_bool_expr(int depth) {
        return dsl::bind_and_check(gen_raw_bool(depth), facts_);
    }

    dsl::Bindings gen_bindings(double unknown_p = 0.25) {
        dsl::Bindings b;
        for (const auto& f : facts_) {
            const double roll = uniform();
            if (roll < unknown_p * 0.5) continue;  // missing key and explicit Unknown both occur
            if (roll < unknown_p) {
                b.set(f.fact_id, FactValue::unknown());
                continue;
            }
            b.set(f.fact_id, random_value(f));
        }
        return b;
    }

    /// Refine: replace Unknown/missing bindings with definite values, leave
    /// definite ones untouched (for the monotonicity property).
    dsl::Bindings refine(const dsl::Bindings& b) {
        dsl::Bindings out;
        for (const auto& f : facts_) {
            const FactValue v = b.get_or_unknown(f.fact_id);
            out.set(f.fact_id, v.is_unknown() ? random_value(f) : v);
        }
        return out;
    }

    FactValue random_value(const TemplatedFact& f) {
        switch (f.answer_set.kind) {
            case AnswerKind::Boolean: return FactValue::boolean(pick(2) == 0);
            case AnswerKind::Numeric: {
                const double v = num_grid_[pick(num_grid_.size())];
                // Sometimes bind without a unit: a bare value adopts the template's.
                return FactValue::number(v, pick(4) == 0 ? "" : f.answer_set.unit);
            }
            case AnswerKind::Enum:
                return FactValue::enumerated(
                    f.answer_set.values[pick(f.answer_set.values.size())]);
        }
        return FactValue::unknown();
    }

    std::uint64_t pick(std::uint64_t n) { return rng_() % n; }
    double uniform() { return std::uniform_real_distribution<double>(0, 1)(rng_); }

private:
    std::mt19937_64 rng_;
    std::vector<TemplatedFact> facts_;
    std::vector<double> num_grid_ = {0, 1, 2, 3, 3.5, 10, 20, 50};

    const TemplatedFact& fact_of_kind(AnswerKind k) {
        for (;;) {
            const auto& f = facts_[pick(facts_.size())];
            if (f.answer_set.kind == k) return f;
        }
    }

    dsl::ExprPtr gen_cmp() {
        switch (pick(4)) {
            case 0: {  // bool fact == literal
                const auto& f = fact_of_kind(AnswerKind::Boolean);
                return dsl::Expr::make_cmp(pick(2) ? dsl::CmpOp::Eq : dsl::CmpOp::Ne,
                                           dsl::Operand::ref(f.fact_id),
                                           dsl::Operand::lit(FactValue::boolean(pick(2) == 0)));
            }
            case 1: {  // numeric fact vs literal, any comparison
                const auto& f = fact_of_kind(AnswerKind::Numeric);
                static const dsl::CmpOp ops[] = {dsl::CmpOp::Lt, dsl::CmpOp::Le, dsl::CmpOp::Gt,
                                                 dsl::CmpOp::Ge, dsl::CmpOp::Eq, dsl::CmpOp::Ne};
                const double v = num_grid_[pick(num_grid_.size())];
                const std::string unit = pick(2) ? f.answer_set.unit : std::string{};
                return dsl::Expr::make_cmp(ops[pick(6)], dsl::Operand::ref(f.fact_id),
                                           dsl::Operand::lit(FactValue::number(v, unit)));
            }
            case 2: {  // same-unit fact vs fact
                const char* pair[2];
                if (pick(2)) { pair[0] = "x"; pair[1] = "x2"; }
                else { pair[0] = "x2"; pair[1] = "x"; }
                static const dsl::CmpOp ops[] = {dsl::CmpOp::Lt, dsl::CmpOp::Le, dsl::CmpOp::Gt,
                                                 dsl::CmpOp::Ge, dsl::CmpOp::Eq, dsl::CmpOp::Ne};
                return dsl::Expr::make_cmp(ops[pick(6)], dsl::Operand::ref(pair[0]),
                                           dsl::Operand::ref(pair[1]));
            }
            default: {  // enum fact == allowed value
                const auto& f = fact_of_kind(AnswerKind::Enum);
                return dsl::Expr::make_cmp(
                    pick(2) ? dsl::CmpOp::Eq : dsl::CmpOp::Ne, dsl::Operand::ref(f.fact_id),
                    dsl::Operand::lit(FactValue::enumerated(
                        f.answer_set.values[pick(f.answer_set.values.size())])));
            }
        }
    }

    dsl::ExprPtr gen_leaf() {
        if (pick(2) == 0) {
            const auto& f = fact_of_kind(AnswerKind::Boolean);
            return dsl::Expr::make_ref(f.fact_id);
        }
        return gen_cmp();
    }

    dsl::ExprPtr gen_raw(int depth) {
        if (depth <= 0) return gen_leaf();
        switch (pick(5)) {
            case 0: return gen_leaf();
            case 1: return dsl::Expr::make_not(gen_raw(depth - 1));
            case 2:
            case 3: {
                std::vector<dsl::ExprPtr> cs;
                const std::size_t arity = 2 + pick(2);
                for (std::size_t i = 0; i < arity; ++i) cs.push_back(gen_raw(depth - 1));
                return pick(2) ? dsl::Expr::make_and(std::move(cs))
                               : dsl::Expr::make_or(std::move(cs));
            }
            default: return gen_cmp();
        }
    }

    dsl::ExprPtr gen_raw_bool(int depth) {
        if (depth <= 0) {
            const auto& f = fact_of_kind(AnswerKind::Boolean);
            return dsl::Expr::make_ref(f.fact_id);
        }
        switch (pick(4)) {
            case 0: {
                const auto& f = fact_of_kind(AnswerKind::Boolean);
                return dsl::Expr::make_ref(f.fact_id);
            }
            case 1: return dsl::Expr::make_not(gen_raw_bool(depth - 1));
            default: {
                std::vector<dsl::ExprPtr> cs;
                const std::size_t arity = 2 + pick(2);
                for (std::size_t i = 0; i < arity; ++i) cs.push_back(gen_raw_bool(depth - 1));
                return pick(2) ? dsl::Expr::make_and(std::move(cs))
                               : dsl::Expr::make_or(std::move(cs));
            }
        }
    }
};

}  // namespace mqcic::test
