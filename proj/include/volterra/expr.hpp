#pragma once

#include <map>
#include <memory>
#include <string>

#include "volterra/algebra.hpp"

namespace volterra {

// Interconnection expressions over named series:
//   expr   := term ('+' term)*
//   term   := factor ('*' factor)*
//   factor := atom ('<|' atom)*
//   atom   := identifier | '(' expr ')'
// All three operators associate to the left; '<|' binds tightest.
struct ExprNode;
using ExprPtr = std::shared_ptr<const ExprNode>;

struct ExprNode {
    enum class Kind { Name, Sum, Product, Compose };

    Kind kind = Kind::Name;
    std::string name;
    ExprPtr lhs;
    ExprPtr rhs;

    static ExprPtr ref(std::string name);
    static ExprPtr binary(Kind kind, ExprPtr lhs, ExprPtr rhs);
};

bool same_tree(const ExprNode& a, const ExprNode& b);

ExprPtr parse(const std::string& text);
// Fully determined text with the fewest parentheses the grammar needs.
std::string print(const ExprNode& node);

using Bindings = std::map<std::string, VolterraSeries>;

// Names not present in `bindings` resolve to built-ins ("Id" is the identity
// series) or raise UnboundName.
AlgebraResult build(const ExprNode& node, const Bindings& bindings, const AlgebraOptions& opts = {});

}  // namespace volterra
