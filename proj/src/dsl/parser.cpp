#include "mqcic/dsl/parser.hpp"

#include <cassert>

#include "mqcic/dsl/errors.hpp"
#include "mqcic/dsl/lexer.hpp"

namespace mqcic::dsl {

const char* to_string(CmpOp op) {
    switch (op) {
        case CmpOp::Lt: return "<";
        case CmpOp::Le: return "<=";
        case CmpOp::Gt: return ">";
        case CmpOp::Ge: return ">=";
        case CmpOp::Eq: return "==";
        default: return "!=";
    }
}

ExprPtr Expr::make_or(std::vector<ExprPtr> cs) {
    assert(cs.size() >= 2);
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Or;
    e->children = std::move(cs);
    return e;
}

ExprPtr Expr::make_and(std::vector<ExprPtr> cs) {
    assert(cs.size() >= 2);
    auto e = std::make_shared<Expr>();
    e->kind = Kind::And;
    e->children = std::move(cs);
    return e;
}

ExprPtr Expr::make_not(ExprPtr c) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Not;
    e->children = {std::move(c)};
    return e;
}

ExprPtr Expr::make_cmp(CmpOp op, Operand lhs, Operand rhs) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Cmp;
    e->op = op;
    e->lhs = std::move(lhs);
    e->rhs = std::move(rhs);
    return e;
}

ExprPtr Expr::make_ref(std::string fact_id) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Ref;
    e->fact_id = std::move(fact_id);
    return e;
}

ExprPtr Expr::make_lit(FactValue v) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Lit;
    e->literal = std::move(v);
    return e;
}

namespace {

bool operand_equal(const Operand& a, const Operand& b) {
    if (a.is_ref != b.is_ref) return false;
    if (a.is_ref) return a.fact_id == b.fact_id;
    return a.literal == b.literal;
}

bool is_cmp_token(TokenKind k) {
    switch (k) {
        case TokenKind::Lt:
        case TokenKind::Le:
        case TokenKind::Gt:
        case TokenKind::Ge:
        case TokenKind::Eq:
        case TokenKind::Ne: return true;
        default: return false;
    }
}

CmpOp cmp_op_of(TokenKind k) {
    switch (k) {
        case TokenKind::Lt: return CmpOp::Lt;
        case TokenKind::Le: return CmpOp::Le;
        case TokenKind::Gt: return CmpOp::Gt;
        case TokenKind::Ge: return CmpOp::Ge;
        case TokenKind::Eq: return CmpOp::Eq;
        default: return CmpOp::Ne;
    }
}

class Parser {
public:
    explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

    ExprPtr parse() {
        ExprPtr e = parse_or();
        expect(TokenKind::End, "end of input");
        return e;
    }

private:
    const Token& peek() const { return toks_[i_]; }
    const Token& advance() { return toks_[i_++]; }
    void expect(TokenKind k, const std::string& what) {
        if (peek().kind != k) throw ParseError(peek().pos, what);
        advance();
    }

    ExprPtr parse_or() {
        std::vector<ExprPtr> cs{parse_and()};
        while (peek().kind == TokenKind::Or) {
            advance();
            cs.push_back(parse_and());
        }
        return cs.size() == 1 ? cs[0] : Expr::make_or(std::move(cs));
    }

    ExprPtr parse_and() {
        std::vector<ExprPtr> cs{parse_not()};
        while (peek().kind == TokenKind::And) {
            advance();
            cs.push_back(parse_not());
        }
        return cs.size() == 1 ? cs[0] : Expr::make_and(std::move(cs));
    }

    ExprPtr parse_not() {
        if (peek().kind == TokenKind::Not) {
            advance();
            return Expr::make_not(parse_not());
        }
        return parse_atom();
    }

    ExprPtr parse_atom() {
        if (peek().kind == TokenKind::LParen) {
            advance();
            ExprPtr inner = parse_or();
            expect(TokenKind::RParen, "')'");
            if (is_cmp_token(peek().kind))
                throw ParseError(peek().pos, "comparison operands must be facts or literals");
            return inner;
        }
        const std::size_t pos = peek().pos;
        Operand lhs = parse_operand();
        if (is_cmp_token(peek().kind)) {
            const CmpOp op = cmp_op_of(advance().kind);
            Operand rhs = parse_operand();
            return Expr::make_cmp(op, std::move(lhs), std::move(rhs));
        }
        // Bare operand in boolean position: a fact reference or boolean literal.
        if (lhs.is_ref) return Expr::make_ref(std::move(lhs.fact_id));
        if (lhs.literal.kind == FactKind::Bool) return Expr::make_lit(lhs.literal);
        throw ParseError(pos, "a boolean expression (got a bare literal)");
    }

    Operand parse_operand() {
        const Token& t = peek();
        switch (t.kind) {
            case TokenKind::Identifier: {
                advance();
                return Operand::ref(t.text);
            }
            case TokenKind::Number: {
                advance();
                return Operand::lit(FactValue::number(t.number, t.unit));
            }
            case TokenKind::String: {
                advance();
                return Operand::lit(FactValue::enumerated(t.text));
            }
            case TokenKind::True: {
                advance();
                return Operand::lit(FactValue::boolean(true));
            }
            case TokenKind::False: {
                advance();
                return Operand::lit(FactValue::boolean(false));
            }
            default:
                throw ParseError(t.pos, "a fact reference or literal");
        }
    }

    std::vector<Token> toks_;
    std::size_t i_ = 0;
};

const TemplatedFact& lookup(const std::vector<TemplatedFact>& facts, const std::string& id) {
    for (const auto& f : facts)
        if (f.fact_id == id) return f;
    throw UnknownFactError(id);
}

FactKind kind_of_declared(AnswerKind k) {
    switch (k) {
        case AnswerKind::Boolean: return FactKind::Bool;
        case AnswerKind::Numeric: return FactKind::Num;
        default: return FactKind::Enum;
    }
}

Operand bind_operand(const Operand& o, const std::vector<TemplatedFact>& facts) {
    if (!o.is_ref) return o;
    Operand out = o;
    out.declared = lookup(facts, o.fact_id).answer_set;
    out.bound = true;
    return out;
}

FactKind operand_kind(const Operand& o) {
    return o.is_ref ? kind_of_declared(o.declared.kind) : o.literal.kind;
}

std::string operand_name(const Operand& o) {
    return o.is_ref ? o.fact_id : o.literal.to_display();
}

void check_cmp(CmpOp op, const Operand& lhs, const Operand& rhs) {
    const FactKind lk = operand_kind(lhs);
    const FactKind rk = operand_kind(rhs);
    const bool ordering = op == CmpOp::Lt || op == CmpOp::Le || op == CmpOp::Gt || op == CmpOp::Ge;
    if (ordering) {
        if (lk != FactKind::Num) throw TypeCheckError(operand_name(lhs), "a Numeric operand");
        if (rk != FactKind::Num) throw TypeCheckError(operand_name(lhs), "a Numeric operand");
    } else if (lk != rk) {
        throw TypeCheckError(operand_name(lhs.is_ref ? lhs : rhs), "operands of the same kind");
    }
    // Static unit agreement between declared units and united literals.
    if (lk == FactKind::Num && rk == FactKind::Num) {
        const std::string lu = lhs.is_ref ? lhs.declared.unit : lhs.literal.unit;
        const std::string ru = rhs.is_ref ? rhs.declared.unit : rhs.literal.unit;
        const bool ok = lhs.is_ref && !rhs.is_ref   ? unit_matches(lu, ru)
                        : !lhs.is_ref && rhs.is_ref ? unit_matches(ru, lu)
                                                    : normalize_unit(lu) == normalize_unit(ru) ||
                                                          lu.empty() || ru.empty();
        if (!ok)
            throw TypeCheckError(operand_name(lhs.is_ref ? lhs : rhs),
                                 "matching units ('" + lu + "' vs '" + ru + "')");
    }
    // Enum literals must come from the template's allowed set.
    auto check_member = [](const Operand& ref, const Operand& lit) {
        if (!ref.is_ref || ref.declared.kind != AnswerKind::Enum || lit.is_ref) return;
        for (const auto& v : ref.declared.values)
            if (v == lit.literal.enum_value) return;
        throw TypeCheckError(ref.fact_id,
                             "enum value in the allowed set (got \"" + lit.literal.enum_value + "\")");
    };
    check_member(lhs, rhs);
    check_member(rhs, lhs);
}

}  // namespace

ExprPtr bind_and_check(const ExprPtr& e, const std::vector<TemplatedFact>& facts) {
    switch (e->kind) {
        case Expr::Kind::Or: {
            std::vector<ExprPtr> cs;
            cs.reserve(e->children.size());
            for (const auto& c : e->children) cs.push_back(bind_and_check(c, facts));
            return Expr::make_or(std::move(cs));
        }
        case Expr::Kind::And: {
            std::vector<ExprPtr> cs;
            cs.reserve(e->children.size());
            for (const auto& c : e->children) cs.push_back(bind_and_check(c, facts));
            return Expr::make_and(std::move(cs));
        }
        case Expr::Kind::Not:
            return Expr::make_not(bind_and_check(e->children[0], facts));
        case Expr::Kind::Cmp: {
            Operand lhs = bind_operand(e->lhs, facts);
            Operand rhs = bind_operand(e->rhs, facts);
            check_cmp(e->op, lhs, rhs);
            return Expr::make_cmp(e->op, std::move(lhs), std::move(rhs));
        }
        case Expr::Kind::Ref: {
            const TemplatedFact& f = lookup(facts, e->fact_id);
            if (f.answer_set.kind != AnswerKind::Boolean)
                throw TypeCheckError(e->fact_id, "a Boolean fact in boolean position");
            auto out = std::make_shared<Expr>(*e);
            out->declared = f.answer_set;
            out->bound = true;
            return out;
        }
        case Expr::Kind::Lit:
            return e;
    }
    throw Error("unreachable expression kind");
}

ExprPtr parse_rule_unbound(const std::string& source) {
    if (source.empty()) throw ParseError(0, "a non-empty rule");
    return Parser(lex(source)).parse();
}

ExprPtr parse_rule(const std::string& source, const std::vector<TemplatedFact>& facts) {
    return bind_and_check(parse_rule_unbound(source), facts);
}

bool structurally_equal(const ExprPtr& a, const ExprPtr& b) {
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case Expr::Kind::Or:
        case Expr::Kind::And:
        case Expr::Kind::Not: {
            if (a->children.size() != b->children.size()) return false;
            for (std::size_t i = 0; i < a->children.size(); ++i)
                if (!structurally_equal(a->children[i], b->children[i])) return false;
            return true;
        }
        case Expr::Kind::Cmp:
            return a->op == b->op && operand_equal(a->lhs, b->lhs) && operand_equal(a->rhs, b->rhs);
        case Expr::Kind::Ref:
            return a->fact_id == b->fact_id;
        case Expr::Kind::Lit:
            return a->literal == b->literal;
    }
    return false;
}

std::set<std::string> collect_fact_refs(const ExprPtr& e) {
    std::set<std::string> out;
    auto walk = [&out](auto&& self, const ExprPtr& node) -> void {
        switch (node->kind) {
            case Expr::Kind::Or:
            case Expr::Kind::And:
            case Expr::Kind::Not:
                for (const auto& c : node->children) self(self, c);
                break;
            case Expr::Kind::Cmp:
                if (node->lhs.is_ref) out.insert(node->lhs.fact_id);
                if (node->rhs.is_ref) out.insert(node->rhs.fact_id);
                break;
            case Expr::Kind::Ref:
                out.insert(node->fact_id);
                break;
            case Expr::Kind::Lit:
                break;
        }
    };
    walk(walk, e);
    return out;
}

namespace {

void merge_usage(std::map<std::string, FactUsage>& usages, const std::string& id, UsageKind k,
                 const std::string& unit) {
    auto& u = usages[id];
    if (u.kind == UsageKind::Any) {
        u.kind = k;
    } else if (k != UsageKind::Any && u.kind != k) {
        throw TypeCheckError(id, "consistent usage across rules");
    }
    if (!unit.empty()) {
        if (u.unit.empty()) u.unit = unit;
        else if (normalize_unit(u.unit) != normalize_unit(unit))
            throw TypeCheckError(id, "a single unit ('" + u.unit + "' vs '" + unit + "')");
    }
}

void infer_into(const ExprPtr& e, std::map<std::string, FactUsage>& usages) {
    switch (e->kind) {
        case Expr::Kind::Or:
        case Expr::Kind::And:
        case Expr::Kind::Not:
            for (const auto& c : e->children) infer_into(c, usages);
            break;
        case Expr::Kind::Ref:
            merge_usage(usages, e->fact_id, UsageKind::Boolean, {});
            break;
        case Expr::Kind::Lit:
            break;
        case Expr::Kind::Cmp: {
            const bool ordering = e->op == CmpOp::Lt || e->op == CmpOp::Le || e->op == CmpOp::Gt ||
                                  e->op == CmpOp::Ge;
            auto side = [&](const Operand& self, const Operand& other) {
                if (!self.is_ref) return;
                UsageKind k = UsageKind::Any;
                std::string unit;
                if (ordering) {
                    k = UsageKind::Numeric;
                    if (!other.is_ref && other.literal.kind == FactKind::Num)
                        unit = other.literal.unit;
                } else if (!other.is_ref) {
                    switch (other.literal.kind) {
                        case FactKind::Bool: k = UsageKind::Boolean; break;
                        case FactKind::Num:
                            k = UsageKind::Numeric;
                            unit = other.literal.unit;
                            break;
                        case FactKind::Enum: k = UsageKind::EnumLike; break;
                        default: break;
                    }
                }
                merge_usage(usages, self.fact_id, k, unit);
            };
            side(e->lhs, e->rhs);
            side(e->rhs, e->lhs);
            break;
        }
    }
}

}  // namespace

std::map<std::string, FactUsage> infer_usage(const ExprPtr& e) {
    std::map<std::string, FactUsage> usages;
    infer_into(e, usages);
    return usages;
}

}  // namespace mqcic::dsl
