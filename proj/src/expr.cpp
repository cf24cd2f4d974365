#include "volterra/expr.hpp"

#include <cctype>
#include <sstream>

#include "volterra/errors.hpp"

namespace volterra {

namespace {

std::string describe(const std::vector<std::string>& expected) {
    std::string s;
    for (std::size_t i = 0; i < expected.size(); ++i) s += (i ? ", " : "") + expected[i];
    return s;
}

enum class Tok { Ident, Plus, Star, Compose, LParen, RParen, End, Invalid };

struct Token {
    Tok kind;
    std::string text;
    std::size_t offset;
};

class Lexer {
public:
    explicit Lexer(const std::string& src) : src_(src) {}

    Token next() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        const std::size_t at = pos_;
        if (pos_ >= src_.size()) return {Tok::End, "end of input", at};
        const char c = src_[pos_];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) ++pos_;
            return {Tok::Ident, src_.substr(at, pos_ - at), at};
        }
        ++pos_;
        switch (c) {
        case '+': return {Tok::Plus, "+", at};
        case '*': return {Tok::Star, "*", at};
        case '(': return {Tok::LParen, "(", at};
        case ')': return {Tok::RParen, ")", at};
        case '<':
            if (pos_ < src_.size() && src_[pos_] == '|') {
                ++pos_;
                return {Tok::Compose, "<|", at};
            }
            return {Tok::Invalid, "<", at};
        default: return {Tok::Invalid, std::string(1, c), at};
        }
    }

private:
    const std::string& src_;
    std::size_t pos_ = 0;
};

class Parser {
public:
    explicit Parser(const std::string& text) : lex_(text) { advance(); }

    ExprPtr parse_all() {
        ExprPtr e = expr();
        if (cur_.kind != Tok::End) fail({"'+'", "'*'", "'<|'", "end of input"});
        return e;
    }

private:
    void advance() { cur_ = lex_.next(); }

    [[noreturn]] void fail(std::vector<std::string> expected) {
        if (depth_ > 0) {
            for (auto& e : expected)
                if (e == "end of input") e = "')'";
        }
        throw ParseError(cur_.offset, std::move(expected), cur_.text);
    }

    ExprPtr expr() {
        ExprPtr lhs = term();
        while (cur_.kind == Tok::Plus) {
            advance();
            lhs = ExprNode::binary(ExprNode::Kind::Sum, lhs, term());
        }
        return lhs;
    }

    ExprPtr term() {
        ExprPtr lhs = factor();
        while (cur_.kind == Tok::Star) {
            advance();
            lhs = ExprNode::binary(ExprNode::Kind::Product, lhs, factor());
        }
        return lhs;
    }

    ExprPtr factor() {
        ExprPtr lhs = atom();
        while (cur_.kind == Tok::Compose) {
            advance();
            lhs = ExprNode::binary(ExprNode::Kind::Compose, lhs, atom());
        }
        return lhs;
    }

    ExprPtr atom() {
        if (cur_.kind == Tok::Ident) {
            ExprPtr e = ExprNode::ref(cur_.text);
            advance();
            return e;
        }
        if (cur_.kind == Tok::LParen) {
            advance();
            ++depth_;
            ExprPtr e = expr();
            if (cur_.kind != Tok::RParen) fail({"'+'", "'*'", "'<|'", "')'"});
            --depth_;
            advance();
            return e;
        }
        fail({"identifier", "'('"});
    }

    Lexer lex_;
    Token cur_{Tok::End, "", 0};
    int depth_ = 0;
};

int precedence(ExprNode::Kind k) {
    switch (k) {
    case ExprNode::Kind::Sum: return 1;
    case ExprNode::Kind::Product: return 2;
    case ExprNode::Kind::Compose: return 3;
    case ExprNode::Kind::Name: return 4;
    }
    return 4;
}

const char* symbol(ExprNode::Kind k) {
    switch (k) {
    case ExprNode::Kind::Sum: return " + ";
    case ExprNode::Kind::Product: return " * ";
    case ExprNode::Kind::Compose: return " <| ";
    default: return "";
    }
}

}  // namespace

ParseError::ParseError(std::size_t offset, std::vector<std::string> expected, const std::string& found)
    : std::runtime_error("syntax error at byte " + std::to_string(offset) + ": expected " + describe(expected) +
                         ", found '" + found + "'"),
      offset_(offset),
      expected_(std::move(expected)) {}

ExprPtr ExprNode::ref(std::string name) {
    auto n = std::make_shared<ExprNode>();
    n->kind = Kind::Name;
    n->name = std::move(name);
    return n;
}

ExprPtr ExprNode::binary(Kind kind, ExprPtr lhs, ExprPtr rhs) {
    if (kind == Kind::Name || !lhs || !rhs) throw ContractViolation("binary expression needs an operator and two operands");
    auto n = std::make_shared<ExprNode>();
    n->kind = kind;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return n;
}

bool same_tree(const ExprNode& a, const ExprNode& b) {
    if (a.kind != b.kind) return false;
    if (a.kind == ExprNode::Kind::Name) return a.name == b.name;
    return same_tree(*a.lhs, *b.lhs) && same_tree(*a.rhs, *b.rhs);
}

ExprPtr parse(const std::string& text) { return Parser(text).parse_all(); }

std::string print(const ExprNode& node) {
    if (node.kind == ExprNode::Kind::Name) return node.name;
    const int p = precedence(node.kind);
    std::string left = print(*node.lhs);
    std::string right = print(*node.rhs);
    if (precedence(node.lhs->kind) < p) left = "(" + left + ")";
    if (precedence(node.rhs->kind) <= p) right = "(" + right + ")";
    return left + symbol(node.kind) + right;
}

AlgebraResult build(const ExprNode& node, const Bindings& bindings, const AlgebraOptions& opts) {
    if (node.kind == ExprNode::Kind::Name) {
        auto it = bindings.find(node.name);
        if (it != bindings.end()) return {it->second, {}};
        if (node.name == "Id") return {identity_series(), {}};
        throw UnboundName(node.name);
    }
    AlgebraResult lhs = build(*node.lhs, bindings, opts);
    AlgebraResult rhs = build(*node.rhs, bindings, opts);
    AlgebraResult out;
    switch (node.kind) {
    case ExprNode::Kind::Sum: out = {sum_series(lhs.series, rhs.series), {}}; break;
    case ExprNode::Kind::Product: out = product_series(lhs.series, rhs.series, opts); break;
    case ExprNode::Kind::Compose: out = compose_series(lhs.series, rhs.series, opts); break;
    case ExprNode::Kind::Name: break;
    }
    std::vector<Truncation> all = lhs.truncations;
    all.insert(all.end(), rhs.truncations.begin(), rhs.truncations.end());
    all.insert(all.end(), out.truncations.begin(), out.truncations.end());
    out.truncations = std::move(all);
    return out;
}

}  // namespace volterra
