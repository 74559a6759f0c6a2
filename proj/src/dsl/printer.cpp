#include "mqcic/dsl/printer.hpp"

#include <sstream>

namespace mqcic::dsl {

namespace {

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

std::string literal_str(const FactValue& v) {
    switch (v.kind) {
        case FactKind::Bool: return v.b ? "TRUE" : "FALSE";
        case FactKind::Num: return v.to_display();  // unit glued: 20%
        case FactKind::Enum: return quote(v.enum_value);
        default: return "UNKNOWN";
    }
}

std::string operand_str(const Operand& o) {
    return o.is_ref ? o.fact_id : literal_str(o.literal);
}

void print(const ExprPtr& e, std::ostringstream& os) {
    switch (e->kind) {
        case Expr::Kind::Or:
        case Expr::Kind::And: {
            const char* sep = e->kind == Expr::Kind::Or ? " OR " : " AND ";
            os << "(";
            for (std::size_t i = 0; i < e->children.size(); ++i) {
                if (i) os << sep;
                print(e->children[i], os);
            }
            os << ")";
            break;
        }
        case Expr::Kind::Not:
            os << "(NOT ";
            print(e->children[0], os);
            os << ")";
            break;
        case Expr::Kind::Cmp:
            os << "(" << operand_str(e->lhs) << " " << to_string(e->op) << " "
               << operand_str(e->rhs) << ")";
            break;
        case Expr::Kind::Ref:
            os << e->fact_id;
            break;
        case Expr::Kind::Lit:
            os << literal_str(e->literal);
            break;
    }
}

}  // namespace

std::string to_canonical_string(const ExprPtr& e) {
    std::ostringstream os;
    print(e, os);
    return os.str();
}

}  // namespace mqcic::dsl
