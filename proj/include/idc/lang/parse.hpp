#pragma once

#include <string>
#include <string_view>

#include "idc/lang/ast.hpp"

namespace idc::lang {

// Parses a full program source (UTF-8, .idp). Total: returns an error
// rather than throwing or hanging on arbitrary input.
ParseResult parse(std::string_view source);

// Parses a single expression against an ambient scope ("context" plus
// `bound`). Used by tests.
ParseResult parse_expression_source(std::string_view source, Expr& out,
                                    const std::vector<std::string>& bound = {});

// Source text that re-parses to a structurally equal AST.
std::string unparse(const ProgramAst& ast);
std::string unparse_expr(const Expr& expr);

}  // namespace idc::lang
