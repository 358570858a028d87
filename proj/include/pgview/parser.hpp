#pragma once

#include <string>

#include "pgview/ast.hpp"

namespace pgview {

/// Parses one statement. Throws Error(SyntaxError) with line/column context,
/// Error(UnboundVariable) for variables used outside any binding clause.
/// Placeholder tokens are accepted anywhere the grammar allows them; whether
/// a statement may still contain them is the caller's concern.
Statement parse(const std::string& text);

/// Renders a statement to canonical single-line text. parse(render(s)) is
/// structurally equal to s for any s produced by parse or by the template
/// generator.
std::string render(const Statement& stmt);

std::string render(const QueryStatement& stmt);
std::string render(const PatternPath& path);

}  // namespace pgview
