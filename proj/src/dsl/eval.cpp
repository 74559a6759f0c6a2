#include "mqcic/dsl/eval.hpp"

#include "mqcic/dsl/errors.hpp"

namespace mqcic::dsl {

TruthValue kleene_not(TruthValue v) {
    switch (v) {
        case TruthValue::True: return TruthValue::False;
        case TruthValue::False: return TruthValue::True;
        default: return TruthValue::Unknown;
    }
}

TruthValue kleene_and(TruthValue a, TruthValue b) {
    if (a == TruthValue::False || b == TruthValue::False) return TruthValue::False;
    if (a == TruthValue::Unknown || b == TruthValue::Unknown) return TruthValue::Unknown;
    return TruthValue::True;
}

TruthValue kleene_or(TruthValue a, TruthValue b) {
    if (a == TruthValue::True || b == TruthValue::True) return TruthValue::True;
    if (a == TruthValue::Unknown || b == TruthValue::Unknown) return TruthValue::Unknown;
    return TruthValue::False;
}

namespace {

// Resolve an operand to a concrete value. A bound Num with an irreconcilable
// unit is an error (silent coercion would hide clinical mistakes); a bound
// value of the wrong kind resolves to Unknown like any unverifiable fact.
FactValue resolve(const Operand& o, const Bindings& b) {
    if (!o.is_ref) return o.literal;
    if (!o.bound) throw Error("evaluate() called on an unbound expression");
    FactValue v = b.get_or_unknown(o.fact_id);
    if (v.is_unknown()) return v;
    const FactKind expected = o.declared.kind == AnswerKind::Boolean  ? FactKind::Bool
                              : o.declared.kind == AnswerKind::Numeric ? FactKind::Num
                                                                       : FactKind::Enum;
    if (v.kind != expected) return FactValue::unknown();
    if (v.kind == FactKind::Num) {
        if (!unit_matches(o.declared.unit, v.unit))
            throw UnitMismatchError(o.fact_id, o.declared.unit, v.unit);
        v.unit = o.declared.unit;
    }
    return v;
}

TruthValue compare(CmpOp op, const FactValue& l, const FactValue& r) {
    if (l.is_unknown() || r.is_unknown()) return TruthValue::Unknown;
    switch (op) {
        case CmpOp::Eq: return truth_of(l == r);
        case CmpOp::Ne: return truth_of(l != r);
        default: break;
    }
    // Ordering: typechecked Numeric-only at parse time.
    if (l.kind != FactKind::Num || r.kind != FactKind::Num) return TruthValue::Unknown;
    switch (op) {
        case CmpOp::Lt: return truth_of(l.num < r.num);
        case CmpOp::Le: return truth_of(l.num <= r.num);
        case CmpOp::Gt: return truth_of(l.num > r.num);
        default: return truth_of(l.num >= r.num);
    }
}

}  // namespace

TruthValue evaluate(const ExprPtr& expr, const Bindings& b) {
    switch (expr->kind) {
        case Expr::Kind::Or: {
            TruthValue acc = TruthValue::False;
            for (const auto& c : expr->children) acc = kleene_or(acc, evaluate(c, b));
            return acc;
        }
        case Expr::Kind::And: {
            TruthValue acc = TruthValue::True;
            for (const auto& c : expr->children) acc = kleene_and(acc, evaluate(c, b));
            return acc;
        }
        case Expr::Kind::Not:
            return kleene_not(evaluate(expr->children[0], b));
        case Expr::Kind::Cmp: {
            // Units of a bare numeric literal follow the fact it is compared to.
            FactValue l = resolve(expr->lhs, b);
            FactValue r = resolve(expr->rhs, b);
            if (l.kind == FactKind::Num && r.kind == FactKind::Num) {
                if (l.unit.empty()) l.unit = r.unit;
                if (r.unit.empty()) r.unit = l.unit;
            }
            return compare(expr->op, l, r);
        }
        case Expr::Kind::Ref: {
            if (!expr->bound) throw Error("evaluate() called on an unbound expression");
            Operand o = Operand::ref(expr->fact_id);
            o.declared = expr->declared;
            o.bound = true;
            const FactValue v = resolve(o, b);
            if (v.is_unknown()) return TruthValue::Unknown;
            return truth_of(v.b);
        }
        case Expr::Kind::Lit:
            if (expr->literal.kind == FactKind::Bool) return truth_of(expr->literal.b);
            return TruthValue::Unknown;
    }
    return TruthValue::Unknown;
}

FinalAnswer final_answer(const std::vector<TruthValue>& per_rule) {
    if (per_rule.empty()) throw Error("final_answer over an empty rule list");
    TruthValue acc = TruthValue::True;
    for (TruthValue v : per_rule) acc = kleene_and(acc, v);
    switch (acc) {
        case TruthValue::True: return {true, true};
        case TruthValue::False: return {false, true};
        default: return {false, false};  // unverifiable criterion is unmet, flagged
    }
}

}  // namespace mqcic::dsl
