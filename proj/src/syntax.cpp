#include "origami/syntax.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <memory>
#include <sstream>

namespace origami {

namespace {

std::string escape_char(char32_t c, char quote) {
  switch (c) {
    case '\n':
      return "\\n";
    case '\t':
      return "\\t";
    case '\r':
      return "\\r";
    case '\\':
      return "\\\\";
    default:
      break;
  }
  if (c == static_cast<char32_t>(quote)) return std::string("\\") + quote;
  if (c >= 0x20 && c < 0x7F) return std::string(1, static_cast<char>(c));
  std::ostringstream os;
  os << "\\u{" << std::hex << static_cast<std::uint32_t>(c) << "}";
  return os.str();
}

bool is_char_list(const Value& v) {
  if (v.kind() != ValueKind::List || v.as_list().empty()) return false;
  for (const Value& e : v.as_list())
    if (e.kind() != ValueKind::Char) return false;
  return true;
}

std::string render_number(std::string s) {
  if (!s.empty() && s[0] == '-') return "(" + s + ")";
  return s;
}

}  // namespace

std::string render_literal(const Value& v, SemType t) {
  switch (t.kind()) {
    case TypeKind::Int:
      return render_number(std::to_string(v.as_int()));
    case TypeKind::Float:
      return render_number(show_float(v.as_float()));
    case TypeKind::Bool:
      return v.as_bool() ? "True" : "False";
    case TypeKind::Char:
      return "'" + escape_char(v.as_char(), '\'') + "'";
    case TypeKind::List: {
      if (t.is_string()) {
        std::string s = "\"";
        for (const Value& c : v.as_list()) s += escape_char(c.as_char(), '"');
        return s + "\"";
      }
      if (v.as_list().empty()) return "([] :: " + t.str() + ")";
      std::string s = "[";
      bool first = true;
      for (const Value& e : v.as_list()) {
        if (!first) s += ", ";
        first = false;
        s += render_literal(e, t.elem());
      }
      return s + "]";
    }
    case TypeKind::Pair:
      return "(" + render_literal(v.as_pair().first, t.first()) + ", " +
             render_literal(v.as_pair().second, t.second()) + ")";
    case TypeKind::Map: {
      std::string s = "({";
      bool first = true;
      for (const auto& [k, val] : v.as_map()) {
        if (!first) s += ", ";
        first = false;
        s += render_literal(k, t.key()) + " => " + render_literal(val, t.val());
      }
      return s + "} :: " + t.str() + ")";
    }
    case TypeKind::Fun:
    case TypeKind::Var:
      break;
  }
  return "<" + t.str() + ">";
}

std::string render_value(const Value& v) {
  switch (v.kind()) {
    case ValueKind::Int:
      return std::to_string(v.as_int());
    case ValueKind::Float:
      return show_float(v.as_float());
    case ValueKind::Bool:
      return v.as_bool() ? "True" : "False";
    case ValueKind::Char:
      return "'" + escape_char(v.as_char(), '\'') + "'";
    case ValueKind::List: {
      if (is_char_list(v)) {
        std::string s = "\"";
        for (const Value& c : v.as_list()) s += escape_char(c.as_char(), '"');
        return s + "\"";
      }
      std::string s = "[";
      for (std::size_t i = 0; i < v.as_list().size(); ++i) s += (i ? ", " : "") + render_value(v.as_list()[i]);
      return s + "]";
    }
    case ValueKind::Pair:
      return "(" + render_value(v.as_pair().first) + ", " + render_value(v.as_pair().second) + ")";
    case ValueKind::Map: {
      std::string s = "{";
      bool first = true;
      for (const auto& [k, val] : v.as_map()) {
        if (!first) s += ", ";
        first = false;
        s += render_value(k) + " => " + render_value(val);
      }
      return s + "}";
    }
    case ValueKind::Fun:
      return "<function>";
  }
  return "?";
}

namespace {

std::string render(const Expr& e, const Registry& reg, bool atom) {
  switch (e.kind()) {
    case NodeKind::Var:
      return e.name();
    case NodeKind::Const:
      return render_literal(e.constant_value(), e.type());
    case NodeKind::App: {
      std::string s = reg.at(e.prim()).name;
      for (const Expr& a : e.args()) s += " " + render(a, reg, true);
      return atom ? "(" + s + ")" : s;
    }
    case NodeKind::Partial: {
      std::string s = "(" + reg.at(e.prim()).name;
      for (const Expr& a : e.args()) s += " " + render(a, reg, true);
      return s + " :: " + e.type().str() + ")";
    }
  }
  return "?";
}

}  // namespace

std::string render_expr(const Expr& e, const Registry& reg) { return render(e, reg, false); }

// ---------------------------------------------------------------------------
// Parsing

namespace {

enum class Tok { End, Ident, Int, Float, Char, String, Punct };

struct Token {
  Tok kind = Tok::End;
  std::string text;  // identifier / punctuation / raw number
  std::u32string str;  // decoded char or string literal
  std::size_t begin = 0;
  std::size_t end = 0;
};

struct PNode;
using PNodePtr = std::unique_ptr<PNode>;

struct PNode {
  enum Kind { Ident, IntLit, FloatLit, CharLit, StrLit, ListLit, PairLit, MapLit, App, Annot } kind;
  std::string name;
  std::int64_t i = 0;
  double f = 0;
  std::u32string s;
  std::vector<PNodePtr> kids;  // list/pair/map(k,v,k,v..)/app(head, args..)/annot(inner)
  SemType annot;
  std::size_t pos = 0;
};

bool is_reserved(const std::string& id) {
  return id == "then" || id == "else" || id == "where" || id == "in" || id == "let" || id == "of" ||
         id == "case";
}

class Lexer {
 public:
  Lexer(std::string_view s, std::size_t pos) : s_(s), pos_(pos) {}

  std::size_t pos() const { return pos_; }
  void reset(std::size_t p) { pos_ = p; }

  [[noreturn]] void fail(std::size_t at, const std::string& what) const {
    throw ParseError("parse error at offset " + std::to_string(at) + ": " + what + " in `" +
                     std::string(s_.substr(std::min(at, s_.size()), 40)) + "`");
  }

  Token peek() {
    std::size_t save = pos_;
    Token t = next();
    pos_ = save;
    return t;
  }

  Token next() {
    skip_ws();
    Token t;
    t.begin = pos_;
    if (pos_ >= s_.size()) {
      t.end = pos_;
      return t;
    }
    char c = s_[pos_];
    auto at = [&](std::size_t k) -> char { return pos_ + k < s_.size() ? s_[pos_ + k] : '\0'; };
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t b = pos_;
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_' || s_[pos_] == '\''))
        ++pos_;
      t.kind = Tok::Ident;
      t.text = std::string(s_.substr(b, pos_ - b));
    } else if (std::isdigit(static_cast<unsigned char>(c)) ||
               (c == '-' && std::isdigit(static_cast<unsigned char>(at(1))))) {
      lex_number(t);
    } else if (c == '\'') {
      ++pos_;
      t.kind = Tok::Char;
      t.str.push_back(lex_char_body('\''));
      if (pos_ >= s_.size() || s_[pos_] != '\'') fail(t.begin, "unterminated char literal");
      ++pos_;
    } else if (c == '"') {
      ++pos_;
      t.kind = Tok::String;
      while (pos_ < s_.size() && s_[pos_] != '"') t.str.push_back(lex_char_body('"'));
      if (pos_ >= s_.size()) fail(t.begin, "unterminated string literal");
      ++pos_;
    } else {
      static const char* multi[] = {"::", "->", "=>"};
      t.kind = Tok::Punct;
      for (const char* m : multi)
        if (s_.substr(pos_, 2) == m) {
          t.text = m;
          pos_ += 2;
          t.end = pos_;
          return t;
        }
      t.text = std::string(1, c);
      ++pos_;
    }
    t.end = pos_;
    return t;
  }

 private:
  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  void lex_number(Token& t) {
    std::size_t b = pos_;
    if (s_[pos_] == '-') ++pos_;
    bool is_float = false;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (pos_ + 1 < s_.size() && s_[pos_] == '.' && std::isdigit(static_cast<unsigned char>(s_[pos_ + 1]))) {
      is_float = true;
      ++pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      std::size_t save = pos_;
      ++pos_;
      if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) ++pos_;
      if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
        is_float = true;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      } else {
        pos_ = save;
      }
    }
    t.kind = is_float ? Tok::Float : Tok::Int;
    t.text = std::string(s_.substr(b, pos_ - b));
  }

  char32_t lex_char_body(char quote) {
    if (pos_ >= s_.size()) fail(pos_, "unexpected end in literal");
    char c = s_[pos_];
    if (c != '\\') {
      // Decode one UTF-8 scalar.
      std::size_t len = 1;
      auto b = static_cast<unsigned char>(c);
      if (b >= 0xF0)
        len = 4;
      else if (b >= 0xE0)
        len = 3;
      else if (b >= 0xC0)
        len = 2;
      std::u32string u = from_utf8(s_.substr(pos_, len));
      pos_ += len;
      if (u.size() != 1) fail(pos_, "bad character");
      return u[0];
    }
    ++pos_;
    if (pos_ >= s_.size()) fail(pos_, "dangling escape");
    char e = s_[pos_++];
    switch (e) {
      case 'n':
        return '\n';
      case 't':
        return '\t';
      case 'r':
        return '\r';
      case '\\':
        return '\\';
      case '\'':
        return '\'';
      case '"':
        return '"';
      case 'u': {
        if (pos_ >= s_.size() || s_[pos_] != '{') fail(pos_, "expected '{' after \\u");
        std::size_t close = s_.find('}', pos_);
        if (close == std::string_view::npos) fail(pos_, "unterminated \\u escape");
        std::uint32_t cp = 0;
        auto r = std::from_chars(s_.data() + pos_ + 1, s_.data() + close, cp, 16);
        if (r.ec != std::errc() || r.ptr != s_.data() + close) fail(pos_, "bad \\u escape");
        pos_ = close + 1;
        return static_cast<char32_t>(cp);
      }
      default:
        (void)quote;
        fail(pos_ - 1, std::string("unknown escape \\") + e);
    }
  }

  std::string_view s_;
  std::size_t pos_;
};

class Parser {
 public:
  Parser(std::string_view text, std::size_t pos, const ScopeTypes& scope, const Registry& reg)
      : lex_(text, pos), scope_(scope), reg_(reg) {}

  std::size_t pos() const { return lex_.pos(); }

  PNodePtr parse_app() {
    std::size_t start = lex_.peek().begin;
    PNodePtr head = parse_atom();
    if (!head) lex_.fail(start, "expected an expression");
    std::vector<PNodePtr> args;
    while (true) {
      std::size_t save = lex_.pos();
      PNodePtr a = parse_atom();
      if (!a) {
        lex_.reset(save);
        break;
      }
      args.push_back(std::move(a));
    }
    if (args.empty()) return head;
    auto n = std::make_unique<PNode>();
    n->kind = PNode::App;
    n->pos = start;
    n->kids.push_back(std::move(head));
    for (auto& a : args) n->kids.push_back(std::move(a));
    return n;
  }

  // Expression possibly followed by an annotation (only inside brackets).
  PNodePtr parse_annotated() {
    PNodePtr e = parse_app();
    Token t = lex_.peek();
    if (t.kind == Tok::Punct && t.text == "::") {
      lex_.next();
      std::size_t b = lex_.pos();
      // The annotation extends to the closing bracket at this nesting level.
      std::string_view rest = remaining();
      std::size_t depth = 0, k = 0;
      for (; k < rest.size(); ++k) {
        char c = rest[k];
        if (c == '(' || c == '[') ++depth;
        if (c == ')' || c == ']') {
          if (depth == 0) break;
          --depth;
        }
        if (c == ',' && depth == 0) break;
      }
      SemType ty;
      try {
        ty = parse_type(rest.substr(0, k));
      } catch (const TypeError& err) {
        lex_.fail(b, err.what());
      }
      lex_.reset(b + k);
      auto n = std::make_unique<PNode>();
      n->kind = PNode::Annot;
      n->pos = e->pos;
      n->annot = ty;
      n->kids.push_back(std::move(e));
      return n;
    }
    return e;
  }

  std::string_view remaining() const { return text().substr(lex_.pos()); }
  std::string_view text() const { return text_; }
  void set_text(std::string_view t) { text_ = t; }

  // Returns nullptr (without consuming) if no atom starts here.
  PNodePtr parse_atom() {
    std::size_t save = lex_.pos();
    Token t = lex_.next();
    auto n = std::make_unique<PNode>();
    n->pos = t.begin;
    switch (t.kind) {
      case Tok::End:
        lex_.reset(save);
        return nullptr;
      case Tok::Ident:
        if (is_reserved(t.text)) {
          lex_.reset(save);
          return nullptr;
        }
        n->kind = PNode::Ident;
        n->name = t.text;
        return n;
      case Tok::Int: {
        n->kind = PNode::IntLit;
        auto r = std::from_chars(t.text.data(), t.text.data() + t.text.size(), n->i);
        if (r.ec != std::errc()) lex_.fail(t.begin, "integer literal out of range");
        return n;
      }
      case Tok::Float:
        n->kind = PNode::FloatLit;
        n->f = std::strtod(t.text.c_str(), nullptr);
        return n;
      case Tok::Char:
        n->kind = PNode::CharLit;
        n->s = t.str;
        return n;
      case Tok::String:
        n->kind = PNode::StrLit;
        n->s = t.str;
        return n;
      case Tok::Punct:
        break;
    }
    if (t.text == "(") {
      PNodePtr first = parse_annotated();
      Token c = lex_.next();
      if (c.kind == Tok::Punct && c.text == ")") return first;
      if (c.kind == Tok::Punct && c.text == ",") {
        PNodePtr second = parse_annotated();
        expect(")");
        n->kind = PNode::PairLit;
        n->kids.push_back(std::move(first));
        n->kids.push_back(std::move(second));
        return n;
      }
      lex_.fail(c.begin, "expected ')' or ','");
    }
    if (t.text == "[") {
      n->kind = PNode::ListLit;
      Token c = lex_.peek();
      if (c.kind == Tok::Punct && c.text == "]") {
        lex_.next();
        return n;
      }
      while (true) {
        n->kids.push_back(parse_annotated());
        Token d = lex_.next();
        if (d.kind == Tok::Punct && d.text == "]") return n;
        if (!(d.kind == Tok::Punct && d.text == ",")) lex_.fail(d.begin, "expected ',' or ']'");
      }
    }
    if (t.text == "{") {
      n->kind = PNode::MapLit;
      Token c = lex_.peek();
      if (c.kind == Tok::Punct && c.text == "}") {
        lex_.next();
        return n;
      }
      while (true) {
        n->kids.push_back(parse_annotated());
        expect("=>");
        n->kids.push_back(parse_annotated());
        Token d = lex_.next();
        if (d.kind == Tok::Punct && d.text == "}") return n;
        if (!(d.kind == Tok::Punct && d.text == ",")) lex_.fail(d.begin, "expected ',' or '}'");
      }
    }
    lex_.reset(save);
    return nullptr;
  }

  void expect(const char* p) {
    Token t = lex_.next();
    if (!(t.kind == Tok::Punct && t.text == p)) lex_.fail(t.begin, std::string("expected '") + p + "'");
  }

  // ---- elaboration ----

  struct TNode {
    NodeKind kind = NodeKind::Const;
    std::string var;
    PrimId prim = 0;
    Value value;
    SemType type;
    std::vector<TNode> args;
  };

  TNode elaborate(const PNode& p) {
    switch (p.kind) {
      case PNode::Ident: {
        for (const auto& b : scope_)
          if (b.name == p.name) return TNode{NodeKind::Var, p.name, 0, Value(), b.type, {}};
        if (p.name == "True" || p.name == "False")
          return constant(Value::of_bool(p.name == "True"), SemType::bool_type());
        if (p.name == "NaN") return constant(Value::of_float(std::nan("")), SemType::float_type());
        if (p.name == "Infinity")
          return constant(Value::of_float(HUGE_VAL), SemType::float_type());
        const Primitive* prim = reg_.find(p.name);
        if (!prim) lex_.fail(p.pos, "unknown identifier '" + p.name + "'");
        if (prim->arity() != 1) lex_.fail(p.pos, "'" + p.name + "' needs arguments");
        auto [params, ret] = fresh(*prim);
        return TNode{NodeKind::Partial, "", prim->id, Value(), SemType::fun(params[0], ret), {}};
      }
      case PNode::App: {
        const PNode& head = *p.kids[0];
        if (head.kind != PNode::Ident) lex_.fail(p.pos, "only primitives can be applied");
        const Primitive* prim = reg_.find(head.name);
        if (!prim) lex_.fail(head.pos, "'" + head.name + "' is not a primitive");
        std::size_t n = p.kids.size() - 1;
        if (n > prim->arity()) lex_.fail(p.pos, "too many arguments to " + prim->name);
        if (n + 1 < prim->arity()) lex_.fail(p.pos, "too few arguments to " + prim->name);
        auto [params, ret] = fresh(*prim);
        TNode out;
        out.prim = prim->id;
        for (std::size_t i = 0; i < n; ++i) {
          TNode a = elaborate(*p.kids[i + 1]);
          constrain(params[i], a.type, p.kids[i + 1]->pos);
          out.args.push_back(std::move(a));
        }
        if (n == prim->arity()) {
          out.kind = NodeKind::App;
          out.type = ret;
        } else {
          out.kind = NodeKind::Partial;
          out.type = SemType::fun(params.back(), ret);
        }
        return out;
      }
      case PNode::Annot: {
        TNode inner = elaborate(*p.kids[0]);
        constrain(p.annot, inner.type, p.pos);
        return inner;
      }
      default: {
        auto [v, t] = literal(p);
        return constant(std::move(v), t);
      }
    }
  }

  std::pair<Value, SemType> literal(const PNode& p) {
    switch (p.kind) {
      case PNode::IntLit:
        return {Value::of_int(p.i), SemType::int_type()};
      case PNode::FloatLit:
        return {Value::of_float(p.f), SemType::float_type()};
      case PNode::CharLit:
        return {Value::of_char(p.s[0]), SemType::char_type()};
      case PNode::StrLit:
        return {Value::of_string(std::u32string_view(p.s)), SemType::string_type()};
      case PNode::Ident:
        if (p.name == "True" || p.name == "False") return {Value::of_bool(p.name == "True"), SemType::bool_type()};
        if (p.name == "NaN") return {Value::of_float(std::nan("")), SemType::float_type()};
        if (p.name == "Infinity") return {Value::of_float(HUGE_VAL), SemType::float_type()};
        break;
      case PNode::Annot: {
        auto [v, t] = literal(*p.kids[0]);
        constrain(p.annot, t, p.pos);
        return {v, p.annot};
      }
      case PNode::ListLit: {
        SemType elem = fresh_var();
        ValueList vals;
        for (const auto& k : p.kids) {
          auto [v, t] = literal(*k);
          constrain(elem, t, k->pos);
          vals.push_back(std::move(v));
        }
        return {Value::of_list(std::move(vals)), SemType::list(elem)};
      }
      case PNode::PairLit: {
        auto [a, ta] = literal(*p.kids[0]);
        auto [b, tb] = literal(*p.kids[1]);
        return {Value::of_pair(a, b), SemType::pair(ta, tb)};
      }
      case PNode::MapLit: {
        SemType kt = fresh_var(), vt = fresh_var();
        ValueMap m;
        for (std::size_t i = 0; i + 1 < p.kids.size(); i += 2) {
          auto [k, tk] = literal(*p.kids[i]);
          auto [v, tv] = literal(*p.kids[i + 1]);
          constrain(kt, tk, p.kids[i]->pos);
          constrain(vt, tv, p.kids[i + 1]->pos);
          m.emplace_back(std::move(k), std::move(v));
        }
        std::stable_sort(m.begin(), m.end(), [](const auto& x, const auto& y) { return compare(x.first, y.first) < 0; });
        return {Value::of_map(std::move(m)), SemType::map(kt, vt)};
      }
      default:
        break;
    }
    lex_.fail(p.pos, "literal lists, pairs and maps may only contain constants");
  }

  void constrain(SemType want, SemType got, std::size_t pos) {
    auto s = unify(want, got, subst_);
    if (!s) lex_.fail(pos, "type mismatch: expected " + substitute(subst_, want).str() + ", got " +
                               substitute(subst_, got).str());
    subst_ = std::move(*s);
  }

  Expr build(const TNode& t, std::size_t pos) {
    SemType ty = substitute(subst_, t.type);
    if (ty.has_vars()) lex_.fail(pos, "ambiguous type " + ty.str() + "; add an annotation");
    switch (t.kind) {
      case NodeKind::Var:
        return Expr::var(t.var, ty);
      case NodeKind::Const:
        return Expr::constant(t.value, ty);
      case NodeKind::App:
      case NodeKind::Partial: {
        std::vector<Expr> args;
        for (const TNode& a : t.args) args.push_back(build(a, pos));
        if (t.kind == NodeKind::App) return Expr::app(t.prim, std::move(args), ty);
        return Expr::partial(t.prim, std::move(args), ty);
      }
    }
    return {};
  }

  Expr finish(const PNode& root, std::optional<SemType> expected) {
    TNode t = elaborate(root);
    if (expected) constrain(*expected, t.type, root.pos);
    return build(t, root.pos);
  }

 private:
  TNode constant(Value v, SemType t) { return TNode{NodeKind::Const, "", 0, std::move(v), t, {}}; }

  SemType fresh_var() { return SemType::var("_t" + std::to_string(counter_++)); }

  std::pair<std::vector<SemType>, SemType> fresh(const Primitive& p) {
    std::vector<std::string> vars;
    for (const SemType& t : p.params) free_vars(t, vars);
    Substitution ren;
    for (const auto& v : vars) ren[v] = fresh_var();
    std::vector<SemType> params;
    for (const SemType& t : p.params) params.push_back(substitute(ren, t));
    return {params, substitute(ren, p.ret)};
  }

  Lexer lex_;
  std::string_view text_;
  const ScopeTypes& scope_;
  const Registry& reg_;
  Substitution subst_;
  int counter_ = 0;
};

}  // namespace

Expr parse_expr_at(std::string_view text, std::size_t& pos, const ScopeTypes& scope,
                   std::optional<SemType> expected, const Registry& reg) {
  Parser p(text, pos, scope, reg);
  p.set_text(text);
  PNodePtr root = p.parse_app();
  Expr e = p.finish(*root, expected);
  pos = p.pos();
  return e;
}

Expr parse_expr(std::string_view text, const ScopeTypes& scope, std::optional<SemType> expected,
                const Registry& reg) {
  std::size_t pos = 0;
  Expr e = parse_expr_at(text, pos, scope, expected, reg);
  while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  if (pos != text.size())
    throw ParseError("unexpected trailing input at offset " + std::to_string(pos) + ": `" +
                     std::string(text.substr(pos)) + "`");
  return e;
}

}  // namespace origami
