#pragma once

#include <iosfwd>

#include "pgview/database.hpp"

namespace pgview {

/// Interactive statement loop. Statements end with ';' and may span lines.
/// Meta commands (one line each): :views, :explain <stmt>, :profile <stmt>,
/// :verify, :quit. Errors print and the loop continues. Returns 0 at EOF or
/// :quit.
int repl(Database& db, std::istream& in, std::ostream& out);

}  // namespace pgview
