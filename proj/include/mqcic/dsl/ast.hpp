#pragma once

#include <memory>
#include <set>
#include <string>
#include <vector>

#include "mqcic/core/fact_value.hpp"
#include "mqcic/core/types.hpp"

namespace mqcic::dsl {

enum class CmpOp { Lt, Le, Gt, Ge, Eq, Ne };

const char* to_string(CmpOp op);

/// One side of a comparison: a fact reference or a literal (never Unknown,
/// never a nested boolean expression). Bound references carry the declared
/// answer set so evaluation needs no external fact table.
struct Operand {
    bool is_ref = false;
    std::string fact_id;     // ref
    FactValue literal;       // literal
    AnswerSetSpec declared;  // ref, after binding
    bool bound = false;

    static Operand ref(std::string id) {
        Operand o;
        o.is_ref = true;
        o.fact_id = std::move(id);
        return o;
    }
    static Operand lit(FactValue v) {
        Operand o;
        o.literal = std::move(v);
        return o;
    }
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Immutable AST node. Or/And hold two or more children (syntactic chains
/// are flattened; parenthesized groups stay nested), Not holds one.
struct Expr {
    enum class Kind { Or, And, Not, Cmp, Ref, Lit };

    Kind kind = Kind::Lit;
    std::vector<ExprPtr> children;  // Or, And, Not
    CmpOp op = CmpOp::Eq;           // Cmp
    Operand lhs, rhs;               // Cmp
    std::string fact_id;            // Ref
    AnswerSetSpec declared;         // Ref, after binding
    bool bound = false;             // Ref
    FactValue literal;              // Lit

    static ExprPtr make_or(std::vector<ExprPtr> cs);
    static ExprPtr make_and(std::vector<ExprPtr> cs);
    static ExprPtr make_not(ExprPtr c);
    static ExprPtr make_cmp(CmpOp op, Operand lhs, Operand rhs);
    static ExprPtr make_ref(std::string fact_id);
    static ExprPtr make_lit(FactValue v);
};

bool structurally_equal(const ExprPtr& a, const ExprPtr& b);

/// All fact ids referenced anywhere in the expression.
std::set<std::string> collect_fact_refs(const ExprPtr& e);

}  // namespace mqcic::dsl
