#pragma once

#include <string>

#include "mqcic/dsl/ast.hpp"

namespace mqcic::dsl {

/// Fully parenthesized, single-space-separated normal form. Defines the
/// on-disk spelling of symbolic rules: parse(to_canonical_string(e)) is
/// structurally equal to e.
std::string to_canonical_string(const ExprPtr& e);

}  // namespace mqcic::dsl
