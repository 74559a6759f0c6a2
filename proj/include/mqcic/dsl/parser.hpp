#pragma once

#include <map>
#include <string>
#include <vector>

#include "mqcic/core/types.hpp"
#include "mqcic/dsl/ast.hpp"

namespace mqcic::dsl {

// Grammar (precedence NOT > AND > OR; comparisons bind tighter than NOT):
//
//   expr   := and_expr (OR and_expr)*
//   and_expr := not_expr (AND not_expr)*
//   not_expr := NOT not_expr | atom
//   atom   := '(' expr ')'                 -- boolean group
//           | operand (cmpop operand)?     -- comparison, fact ref or literal
//   operand := identifier | number[unit] | string | TRUE | FALSE
//
// Comparison operands are fact refs or literals only; a parenthesized group
// followed by a comparison operator is a parse error.

/// Parse and bind: every fact reference must name a declared template, and
/// operand kinds must agree (ordering comparisons are Numeric-only, enum
/// literals must be members of the template's allowed set).
ExprPtr parse_rule(const std::string& source, const std::vector<TemplatedFact>& facts);

/// Parse without a fact table (enhancement step 2 runs before templates
/// exist). Fact refs stay unbound; bind_and_check finishes the job.
ExprPtr parse_rule_unbound(const std::string& source);

/// Bind fact refs to their templates and typecheck. Returns a new tree.
ExprPtr bind_and_check(const ExprPtr& e, const std::vector<TemplatedFact>& facts);

/// How an unbound rule uses each fact, inferred from context. Conflicting
/// uses (ordering comparison and string equality, say) raise TypeCheckError.
enum class UsageKind { Boolean, Numeric, EnumLike, Any };

struct FactUsage {
    UsageKind kind = UsageKind::Any;
    std::string unit;  // from united literals in ordering/equality comparisons
};

std::map<std::string, FactUsage> infer_usage(const ExprPtr& e);

}  // namespace mqcic::dsl
