// Text form of mapping class expressions:
//   T[a1] * BP[c1,c1']^-2 * SEP[1]^3 * (T[b1]*T[a2])^-1
// "1" or the empty string is the identity. Parenthesized groups are expanded.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "w3/surface.hpp"

namespace w3 {

// Throws std::invalid_argument with the offending position.
MappingClassExpr parse_expr(const std::string& text);
std::string to_string(const MappingClassExpr& e);
MappingClassExpr inverse(const MappingClassExpr& e);

// One expression per line, '#' comments, optional "signature = g,n" header.
struct ExprList {
    std::optional<SurfaceSig> sig;
    std::vector<std::string> source;
    std::vector<MappingClassExpr> exprs;
};
ExprList parse_expr_list(const std::string& text);
ExprList load_expr_list(const std::string& path);
std::string torelli_list_path(SurfaceSig sig, const std::string& data_dir);

}  // namespace w3
