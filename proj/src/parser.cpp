#include "pgview/parser.hpp"

#include <cctype>
#include <charconv>
#include <cstdlib>
#include <map>
#include <set>

#include "pgview/errors.hpp"

namespace pgview {

namespace {

enum class Tok {
  End, Ident, AtVar, Placeholder, Integer, Float, String,
  LParen, RParen, LBracket, RBracket, LBrace, RBrace,
  Colon, Comma, Dot, DotDot, Star, Eq, Lt, Gt, Minus,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;     // Ident/AtVar/String payload
  std::int64_t ival = 0;
  double fval = 0;
  Placeholder ph = Placeholder::L;
  int line = 1;
  int col = 1;
};

[[noreturn]] void fail(int line, int col, const std::string& msg) {
  throw Error(ErrorCode::SyntaxError,
              msg + " at line " + std::to_string(line) + ", column " + std::to_string(col));
}

class Lexer {
 public:
  explicit Lexer(const std::string& text) : s_(text) {}

  Token next() {
    skip_ws();
    Token t;
    t.line = line_;
    t.col = col_;
    if (pos_ >= s_.size()) return t;
    char c = s_[pos_];

    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      t.kind = Tok::Ident;
      t.text = read_ident();
      return t;
    }
    if (c == '@') {
      advance();
      if (pos_ >= s_.size() || !(std::isalpha(static_cast<unsigned char>(s_[pos_])) ||
                                 s_[pos_] == '_'))
        fail(t.line, t.col, "expected identifier after '@'");
      t.kind = Tok::AtVar;
      t.text = "@" + read_ident();
      return t;
    }
    if (c == '$') {
      advance();
      std::string name = read_ident();
      static const std::map<std::string, Placeholder> kMap = {
          {"L", Placeholder::L},   {"K", Placeholder::K},   {"V", Placeholder::V},
          {"SL", Placeholder::SL}, {"SK", Placeholder::SK}, {"SV", Placeholder::SV},
          {"DL", Placeholder::DL}, {"DK", Placeholder::DK}, {"DV", Placeholder::DV},
          {"RID", Placeholder::RID}};
      auto it = kMap.find(name);
      if (it == kMap.end()) fail(t.line, t.col, "unknown placeholder '$" + name + "'");
      t.kind = Tok::Placeholder;
      t.ph = it->second;
      return t;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      read_number(t);
      return t;
    }
    if (c == '\'' || c == '"') {
      t.kind = Tok::String;
      t.text = read_string(c);
      return t;
    }

    advance();
    switch (c) {
      case '(': t.kind = Tok::LParen; return t;
      case ')': t.kind = Tok::RParen; return t;
      case '[': t.kind = Tok::LBracket; return t;
      case ']': t.kind = Tok::RBracket; return t;
      case '{': t.kind = Tok::LBrace; return t;
      case '}': t.kind = Tok::RBrace; return t;
      case ':': t.kind = Tok::Colon; return t;
      case ',': t.kind = Tok::Comma; return t;
      case '*': t.kind = Tok::Star; return t;
      case '=': t.kind = Tok::Eq; return t;
      case '<': t.kind = Tok::Lt; return t;
      case '>': t.kind = Tok::Gt; return t;
      case '-': t.kind = Tok::Minus; return t;
      case ';': t.kind = Tok::End; return t;  // statement terminator is optional
      case '.':
        if (pos_ < s_.size() && s_[pos_] == '.') {
          advance();
          t.kind = Tok::DotDot;
        } else {
          t.kind = Tok::Dot;
        }
        return t;
    }
    fail(t.line, t.col, std::string("unexpected character '") + c + "'");
  }

 private:
  void advance() {
    if (s_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) advance();
  }

  std::string read_ident() {
    std::string out;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) ||
                                s_[pos_] == '_')) {
      out.push_back(s_[pos_]);
      advance();
    }
    return out;
  }

  void read_number(Token& t) {
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) advance();
    // "1..3" is integer-dotdot-integer, "1.5" is a float
    bool is_float = pos_ + 1 < s_.size() && s_[pos_] == '.' &&
                    std::isdigit(static_cast<unsigned char>(s_[pos_ + 1]));
    if (is_float) {
      advance();
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) advance();
      t.kind = Tok::Float;
      t.fval = std::strtod(s_.c_str() + start, nullptr);
    } else {
      t.kind = Tok::Integer;
      std::from_chars(s_.data() + start, s_.data() + pos_, t.ival);
    }
  }

  std::string read_string(char quote) {
    int sl = line_, sc = col_;
    advance();  // opening quote
    std::string out;
    while (pos_ < s_.size() && s_[pos_] != quote) {
      char c = s_[pos_];
      if (c == '\\') {
        advance();
        if (pos_ >= s_.size()) break;
        char e = s_[pos_];
        switch (e) {
          case 'n': out.push_back('\n'); break;
          case 't': out.push_back('\t'); break;
          case '\\': out.push_back('\\'); break;
          case '\'': out.push_back('\''); break;
          case '"': out.push_back('"'); break;
          default: fail(line_, col_, std::string("bad escape '\\") + e + "'");
        }
        advance();
      } else {
        out.push_back(c);
        advance();
      }
    }
    if (pos_ >= s_.size()) fail(sl, sc, "unterminated string");
    advance();  // closing quote
    return out;
  }

  const std::string& s_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

bool ieq(const std::string& a, const char* b) {
  std::size_t n = 0;
  for (; b[n]; ++n) {
    if (n >= a.size()) return false;
    if (std::toupper(static_cast<unsigned char>(a[n])) !=
        std::toupper(static_cast<unsigned char>(b[n])))
      return false;
  }
  return n == a.size();
}

class Parser {
 public:
  explicit Parser(const std::string& text) : lex_(text) { shift(); }

  Statement parse_statement() {
    Statement stmt;
    if (is_kw("CREATE") && peek_is_kw("VIEW")) {
      stmt.node = parse_create_view();
    } else if (is_kw("DROP")) {
      shift();
      expect_kw("VIEW");
      stmt.node = DropViewStatement{expect_name()};
    } else if (is_kw("SHOW")) {
      shift();
      expect_kw("VIEWS");
      stmt.node = ShowViewsStatement{};
    } else {
      std::vector<QueryStatement> parts;
      parts.push_back(parse_query());
      while (is_kw("UNION")) {
        shift();
        parts.push_back(parse_query());
      }
      validate_union(parts);
      stmt.node = std::move(parts);
    }
    if (cur_.kind != Tok::End) fail(cur_.line, cur_.col, "trailing input");
    return stmt;
  }

 private:
  // -- token plumbing ----------------------------------------------------

  void shift() {
    cur_ = have_peek_ ? peek_ : lex_.next();
    have_peek_ = false;
  }

  const Token& peek() {
    if (!have_peek_) {
      peek_ = lex_.next();
      have_peek_ = true;
    }
    return peek_;
  }

  bool is_kw(const char* kw) const { return cur_.kind == Tok::Ident && ieq(cur_.text, kw); }
  bool peek_is_kw(const char* kw) {
    const Token& t = peek();
    return t.kind == Tok::Ident && ieq(t.text, kw);
  }

  void expect_kw(const char* kw) {
    if (!is_kw(kw)) fail(cur_.line, cur_.col, std::string("expected '") + kw + "'");
    shift();
  }

  void expect(Tok kind, const char* what) {
    if (cur_.kind != kind) fail(cur_.line, cur_.col, std::string("expected ") + what);
    shift();
  }

  std::string expect_name() {
    if (cur_.kind != Tok::Ident) fail(cur_.line, cur_.col, "expected identifier");
    std::string name = cur_.text;
    shift();
    return name;
  }

  bool is_reserved(const std::string& word) const {
    static const char* kReserved[] = {"MATCH", "WHERE",  "WITH", "RETURN", "CREATE", "DELETE",
                                      "VIEW",  "VIEWS",  "AS",   "DROP",   "UNION",  "SHOW",
                                      "AND",   "CONSTRUCT"};
    for (const char* kw : kReserved)
      if (ieq(word, kw)) return true;
    return false;
  }

  // -- statements ----------------------------------------------------------

  CreateViewStatement parse_create_view() {
    expect_kw("CREATE");
    expect_kw("VIEW");
    CreateViewStatement cv;
    cv.def.name = expect_name();
    expect_kw("AS");
    expect(Tok::LParen, "'('");
    expect_kw("CONSTRUCT");
    cv.def.construct = parse_path();
    expect_kw("MATCH");
    cv.def.match_path = parse_path();
    expect(Tok::RParen, "')'");
    return cv;
  }

  QueryStatement parse_query() {
    QueryStatement q;
    Stage stage;
    int clause = 0;
    bool saw_clause = false;
    for (;;) {
      if (is_kw("MATCH")) {
        shift();
        saw_clause = true;
        stage.paths.push_back(parse_path());
        stage.path_clause.push_back(clause);
        while (cur_.kind == Tok::Comma) {
          shift();
          stage.paths.push_back(parse_path());
          stage.path_clause.push_back(clause);
        }
        ++clause;
      } else if (is_kw("WHERE")) {
        shift();
        saw_clause = true;
        stage.where.push_back(parse_predicate());
        while (is_kw("AND")) {
          shift();
          stage.where.push_back(parse_predicate());
        }
      } else if (is_kw("WITH")) {
        shift();
        saw_clause = true;
        q.stages.push_back(std::move(stage));
        stage = Stage{};
        clause = 0;
        std::vector<std::string> vars;
        vars.push_back(parse_var());
        while (cur_.kind == Tok::Comma) {
          shift();
          vars.push_back(parse_var());
        }
        q.with_vars.push_back(std::move(vars));
      } else if (is_kw("RETURN")) {
        shift();
        q.action = QueryStatement::Action::Return;
        q.return_items.push_back(parse_return_item());
        while (cur_.kind == Tok::Comma) {
          shift();
          q.return_items.push_back(parse_return_item());
        }
        break;
      } else if (is_kw("DELETE")) {
        shift();
        q.action = QueryStatement::Action::Delete;
        q.delete_vars.push_back(parse_var());
        while (cur_.kind == Tok::Comma) {
          shift();
          q.delete_vars.push_back(parse_var());
        }
        break;
      } else if (is_kw("CREATE")) {
        shift();
        q.action = QueryStatement::Action::Create;
        q.create_paths.push_back(parse_path());
        while (cur_.kind == Tok::Comma) {
          shift();
          q.create_paths.push_back(parse_path());
        }
        break;
      } else {
        if (!saw_clause) fail(cur_.line, cur_.col, "expected a clause keyword");
        fail(cur_.line, cur_.col, "expected RETURN, DELETE or CREATE");
      }
    }
    q.stages.push_back(std::move(stage));
    validate_query(q);
    return q;
  }

  std::string parse_var() {
    if (cur_.kind == Tok::AtVar) {
      std::string v = cur_.text;
      shift();
      return v;
    }
    if (cur_.kind != Tok::Ident || is_reserved(cur_.text))
      fail(cur_.line, cur_.col, "expected variable");
    std::string v = cur_.text;
    shift();
    return v;
  }

  ReturnItem parse_return_item() {
    if (is_kw("COUNT")) {
      shift();
      expect(Tok::LParen, "'('");
      expect(Tok::Star, "'*'");
      expect(Tok::RParen, "')'");
      return ReturnItem{ReturnItem::Kind::CountStar, ""};
    }
    return ReturnItem{ReturnItem::Kind::Variable, parse_var()};
  }

  Predicate parse_predicate() {
    Predicate p;
    if (is_kw("ID") && peek().kind == Tok::LParen) {
      shift();
      shift();
      p.kind = Predicate::Kind::IdEquals;
      p.variable = parse_var();
      expect(Tok::RParen, "')'");
      expect(Tok::Eq, "'='");
      if (cur_.kind == Tok::Placeholder && cur_.ph == Placeholder::RID) {
        p.value.v = Placeholder::RID;
        shift();
      } else if (cur_.kind == Tok::Integer) {
        p.value.v = PropertyValue(cur_.ival);
        shift();
      } else {
        fail(cur_.line, cur_.col, "expected integer or $RID");
      }
      return p;
    }
    p.kind = Predicate::Kind::PropEquals;
    p.variable = parse_var();
    expect(Tok::Dot, "'.'");
    p.property = expect_name();
    expect(Tok::Eq, "'='");
    p.value = parse_value_ref();
    return p;
  }

  ValueRef parse_value_ref() {
    ValueRef v;
    if (cur_.kind == Tok::Placeholder) {
      v.v = cur_.ph;
      shift();
      return v;
    }
    v.v = parse_literal();
    return v;
  }

  PropertyValue parse_literal() {
    bool neg = false;
    if (cur_.kind == Tok::Minus) {
      neg = true;
      shift();
    }
    if (cur_.kind == Tok::Integer) {
      PropertyValue out(neg ? -cur_.ival : cur_.ival);
      shift();
      return out;
    }
    if (cur_.kind == Tok::Float) {
      PropertyValue out(neg ? -cur_.fval : cur_.fval);
      shift();
      return out;
    }
    if (neg) fail(cur_.line, cur_.col, "expected number after '-'");
    if (cur_.kind == Tok::String) {
      PropertyValue out(cur_.text);
      shift();
      return out;
    }
    if (is_kw("TRUE")) {
      shift();
      return PropertyValue(true);
    }
    if (is_kw("FALSE")) {
      shift();
      return PropertyValue(false);
    }
    fail(cur_.line, cur_.col, "expected literal");
  }

  // -- patterns ------------------------------------------------------------

  PatternPath parse_path() {
    PatternPath path;
    path.nodes.push_back(parse_node());
    while (cur_.kind == Tok::Minus || cur_.kind == Tok::Lt) {
      path.edges.push_back(parse_rel());
      path.nodes.push_back(parse_node());
    }
    return path;
  }

  NodePattern parse_node() {
    NodePattern n;
    expect(Tok::LParen, "'('");
    if (cur_.kind == Tok::Ident && !is_reserved(cur_.text)) {
      n.variable = cur_.text;
      shift();
    } else if (cur_.kind == Tok::AtVar) {
      fail(cur_.line, cur_.col, "template variables name edges, not nodes");
    }
    while (cur_.kind == Tok::Colon) {
      shift();
      n.labels.push_back(parse_label_ref());
    }
    if (cur_.kind == Tok::LBrace) n.props = parse_props();
    expect(Tok::RParen, "')'");
    return n;
  }

  LabelRef parse_label_ref() {
    LabelRef l;
    if (cur_.kind == Tok::Placeholder) {
      l.v = cur_.ph;
      shift();
      return l;
    }
    l.v = expect_name();
    return l;
  }

  std::vector<PropEntry> parse_props() {
    std::vector<PropEntry> props;
    expect(Tok::LBrace, "'{'");
    for (;;) {
      PropEntry e;
      if (cur_.kind == Tok::Placeholder) {
        e.key.v = cur_.ph;
        shift();
      } else {
        e.key.v = expect_name();
      }
      expect(Tok::Colon, "':'");
      e.value = parse_value_ref();
      props.push_back(std::move(e));
      if (cur_.kind != Tok::Comma) break;
      shift();
    }
    expect(Tok::RBrace, "'}'");
    return props;
  }

  RelPattern parse_rel() {
    RelPattern r;
    int rl = cur_.line, rc = cur_.col;
    bool left_arrow = false;
    if (cur_.kind == Tok::Lt) {
      left_arrow = true;
      shift();
    }
    expect(Tok::Minus, "'-'");

    bool bracketed = cur_.kind == Tok::LBracket;
    if (bracketed) {
      shift();
      if (cur_.kind == Tok::AtVar || (cur_.kind == Tok::Ident && !is_reserved(cur_.text))) {
        r.variable = cur_.text;
        shift();
      }
      if (cur_.kind == Tok::Colon) {
        shift();
        r.type = parse_label_ref();
      }
      if (cur_.kind == Tok::Star) {
        shift();
        r.range = parse_range(rl, rc);
      }
      if (cur_.kind == Tok::LBrace) r.props = parse_props();
      if (is_kw("NODUPEDGE")) {
        shift();
        r.no_dup_edge = true;
      }
      expect(Tok::RBracket, "']'");
    }

    expect(Tok::Minus, "'-'");
    if (cur_.kind == Tok::Gt) {
      if (left_arrow) fail(cur_.line, cur_.col, "edge cannot point both ways");
      shift();
      r.dir = EdgeDir::Right;
    } else {
      r.dir = left_arrow ? EdgeDir::Left : EdgeDir::Undirected;
    }
    return r;
  }

  RangeSpec parse_range(int line, int col) {
    RangeSpec range;
    range.has_range = true;
    range.min = 1;
    range.max.reset();  // bare '*' spans 1..unbounded
    if (cur_.kind == Tok::Integer) {
      range.min = static_cast<std::uint32_t>(cur_.ival);
      range.max = range.min;
      shift();
      if (cur_.kind == Tok::DotDot) {
        shift();
        range.max.reset();
        if (cur_.kind == Tok::Integer) {
          range.max = static_cast<std::uint32_t>(cur_.ival);
          shift();
        }
      }
    } else if (cur_.kind == Tok::DotDot) {
      shift();
      if (cur_.kind == Tok::Integer) {
        range.max = static_cast<std::uint32_t>(cur_.ival);
        shift();
      }
    }
    if (range.max && *range.max < range.min)
      fail(line, col, "range minimum exceeds maximum");
    return range;
  }

  // -- validation ------------------------------------------------------------

  struct VarKinds {
    std::set<std::string> nodes;
    std::set<std::string> rels;
  };

  void collect_path_vars(const PatternPath& path, VarKinds& kinds, std::set<std::string>& scope) {
    for (const NodePattern& n : path.nodes) {
      if (!n.variable) continue;
      if (kinds.rels.count(*n.variable))
        throw Error(ErrorCode::SyntaxError,
                    "variable '" + *n.variable + "' used as both node and edge");
      kinds.nodes.insert(*n.variable);
      scope.insert(*n.variable);
    }
    for (const RelPattern& r : path.edges) {
      if (!r.variable) continue;
      if (kinds.nodes.count(*r.variable))
        throw Error(ErrorCode::SyntaxError,
                    "variable '" + *r.variable + "' used as both node and edge");
      if (!kinds.rels.insert(*r.variable).second)
        throw Error(ErrorCode::SyntaxError, "edge variable '" + *r.variable + "' bound twice");
      scope.insert(*r.variable);
    }
  }

  void require_bound(const std::set<std::string>& scope, const std::string& var,
                     const char* where) {
    if (!scope.count(var))
      throw Error(ErrorCode::UnboundVariable,
                  "variable '" + var + "' in " + where + " is not bound");
  }

  void validate_query(const QueryStatement& q) {
    VarKinds kinds;
    std::set<std::string> scope;
    for (std::size_t i = 0; i < q.stages.size(); ++i) {
      if (i > 0) {
        std::set<std::string> projected;
        for (const std::string& v : q.with_vars[i - 1]) {
          require_bound(scope, v, "WITH");
          projected.insert(v);
        }
        scope = std::move(projected);
      }
      for (const PatternPath& p : q.stages[i].paths) collect_path_vars(p, kinds, scope);
      for (const Predicate& pred : q.stages[i].where)
        require_bound(scope, pred.variable, "WHERE");
    }
    switch (q.action) {
      case QueryStatement::Action::Return:
        for (const ReturnItem& item : q.return_items)
          if (item.kind == ReturnItem::Kind::Variable)
            require_bound(scope, item.variable, "RETURN");
        break;
      case QueryStatement::Action::Delete:
        for (const std::string& v : q.delete_vars) require_bound(scope, v, "DELETE");
        break;
      case QueryStatement::Action::Create:
        for (const PatternPath& p : q.create_paths) {
          for (const NodePattern& n : p.nodes) {
            bool bound = n.variable && scope.count(*n.variable);
            if (!bound && n.labels.empty())
              throw Error(ErrorCode::UnboundVariable,
                          "CREATE node " + (n.variable ? "'" + *n.variable + "'" : "pattern") +
                              " is neither bound nor labeled");
          }
          for (const RelPattern& r : p.edges) {
            if (r.range.has_range && !r.range.fixed_hop())
              throw Error(ErrorCode::SyntaxError, "CREATE edges must be single-hop");
            if (r.dir == EdgeDir::Undirected)
              throw Error(ErrorCode::SyntaxError, "CREATE edges must be directed");
            if (!r.type) throw Error(ErrorCode::SyntaxError, "CREATE edges must carry a type");
          }
          // new node variables become visible to later create paths
          collect_path_vars(p, kinds, scope);
        }
        break;
      case QueryStatement::Action::None:
        throw Error(ErrorCode::SyntaxError, "statement has no RETURN, DELETE or CREATE");
    }
  }

  void validate_union(const std::vector<QueryStatement>& parts) {
    if (parts.size() < 2) return;
    for (const QueryStatement& q : parts)
      if (q.action != QueryStatement::Action::Return)
        throw Error(ErrorCode::SyntaxError, "UNION parts must end in RETURN");
    for (std::size_t i = 1; i < parts.size(); ++i)
      if (parts[i].return_items.size() != parts[0].return_items.size())
        throw Error(ErrorCode::SyntaxError, "UNION parts return different arities");
  }

  Lexer lex_;
  Token cur_;
  Token peek_;
  bool have_peek_ = false;
};

}  // namespace

Statement parse(const std::string& text) { return Parser(text).parse_statement(); }

}  // namespace pgview
