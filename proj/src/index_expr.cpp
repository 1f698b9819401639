#include "geoinv/index_expr.hpp"

#include <cctype>

namespace geoinv::expr {

namespace {

enum class Tok { Number, Name, Plus, Minus, Star, Slash, LParen, RParen, LBrace, RBrace, Semi, Comma, End };

struct Token {
  Tok kind;
  std::string text;
  Pos pos;
};

std::string describe(Tok t)
{
  switch (t) {
    case Tok::Number: return "number";
    case Tok::Name: return "name";
    case Tok::Plus: return "'+'";
    case Tok::Minus: return "'-'";
    case Tok::Star: return "'*'";
    case Tok::Slash: return "'/'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::Semi: return "';'";
    case Tok::Comma: return "','";
    case Tok::End: return "end of input";
  }
  return "?";
}

std::vector<Token> lex(std::string_view s)
{
  std::vector<Token> out;
  Pos pos;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (s[i] == '\n') {
        ++pos.line;
        pos.column = 1;
      } else {
        ++pos.column;
      }
    }
  };
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    const Pos start = pos;
    if (std::isdigit(static_cast<unsigned char>(c)) || (c == '.' && i + 1 < s.size() && std::isdigit(static_cast<unsigned char>(s[i + 1])))) {
      std::size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      if (j < s.size() && s[j] == '.') {
        ++j;
        while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      }
      out.push_back({Tok::Number, std::string(s.substr(i, j - i)), start});
      advance(j - i);
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
      out.push_back({Tok::Name, std::string(s.substr(i, j - i)), start});
      advance(j - i);
      continue;
    }
    Tok t;
    switch (c) {
      case '+': t = Tok::Plus; break;
      case '-': t = Tok::Minus; break;
      case '*': t = Tok::Star; break;
      case '/': t = Tok::Slash; break;
      case '(': t = Tok::LParen; break;
      case ')': t = Tok::RParen; break;
      case '{': t = Tok::LBrace; break;
      case '}': t = Tok::RBrace; break;
      case ';': t = Tok::Semi; break;
      case ',': t = Tok::Comma; break;
      default:
        throw ParseError(std::string("unexpected character '") + c + "'", start.line, start.column);
    }
    out.push_back({t, std::string(1, c), start});
    advance(1);
  }
  out.push_back({Tok::End, "", pos});
  return out;
}

struct Info {
  std::string upper;
  std::string lower;
  std::string dummies;
};

bool has(const std::string& s, char c) { return s.find(c) != std::string::npos; }

[[noreturn]] void index_error(const Pos& p, const std::string& msg) { throw ParseError(msg, p.line, p.column); }

// Combines the index sets of two factors (or of the slots of one reference).
Info combine(const Info& x, const Info& y, const Pos& pos)
{
  Info out{x.upper, x.lower, x.dummies + y.dummies};
  for (char c : y.dummies)
    if (has(x.upper, c) || has(x.lower, c) || has(x.dummies, c))
      index_error(pos, std::string("index '") + c + "' appears more than twice");
  for (char c : x.dummies)
    if (has(y.upper, c) || has(y.lower, c)) index_error(pos, std::string("index '") + c + "' appears more than twice");
  auto take = [&](char c, bool up) {
    std::string& same_kind = up ? out.upper : out.lower;
    std::string& other = up ? out.lower : out.upper;
    if (has(same_kind, c)) index_error(pos, std::string("index '") + c + "' repeated in the same position");
    if (has(other, c)) {
      other.erase(other.find(c), 1);
      out.dummies += c;
    } else {
      same_kind += c;
    }
  };
  for (char c : y.upper) take(c, true);
  for (char c : y.lower) take(c, false);
  return out;
}

bool same_set(std::string a, std::string b)
{
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

Info analyse(const Node& e)
{
  switch (e.kind) {
    case Kind::Number:
      return {};
    case Kind::Ref: {
      Info out;
      for (char c : e.upper) out = combine(out, Info{std::string(1, c), "", ""}, e.pos);
      for (char c : e.lower) out = combine(out, Info{"", std::string(1, c), ""}, e.pos);
      return out;
    }
    case Kind::Add:
    case Kind::Sub: {
      const Info x = analyse(*e.args[0]);
      const Info y = analyse(*e.args[1]);
      if (!same_set(x.upper, y.upper) || !same_set(x.lower, y.lower))
        index_error(e.pos, "unbalanced indices: {" + x.upper + ";" + x.lower + "} against {" + y.upper + ";" + y.lower + "}");
      Info out = x;
      for (char c : y.dummies)
        if (!has(out.dummies, c)) out.dummies += c;
      return out;
    }
    case Kind::Mul:
      return combine(analyse(*e.args[0]), analyse(*e.args[1]), e.pos);
    case Kind::Div: {
      const Info y = analyse(*e.args[1]);
      if (!y.upper.empty() || !y.lower.empty()) index_error(e.pos, "divisor has free indices");
      return combine(analyse(*e.args[0]), Info{"", "", y.dummies}, e.pos);
    }
    case Kind::Neg:
      return analyse(*e.args[0]);
    case Kind::Alt:
    case Kind::Sym: {
      const Info x = analyse(*e.args[0]);
      const bool up = has(x.upper, e.a) && has(x.upper, e.b);
      const bool lo = has(x.lower, e.a) && has(x.lower, e.b);
      if (e.a == e.b || (!up && !lo))
        index_error(e.pos, std::string("indices '") + e.a + "' and '" + e.b + "' must be two distinct free indices in the same position");
      return x;
    }
    case Kind::Cd: {
      const Info x = analyse(*e.args[0]);
      return combine(x, Info{"", std::string(1, e.a), ""}, e.pos);
    }
  }
  return {};
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  NodePtr parse_all()
  {
    auto e = expression();
    if (peek().kind != Tok::End) unexpected({"'+'", "'-'", "'*'", "'/'", "end of input"});
    return e;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  Token next() { return toks_[pos_++]; }

  [[noreturn]] void unexpected(std::vector<std::string> expected) const
  {
    const auto& t = peek();
    const std::string got = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    throw ParseError("unexpected " + got, t.pos.line, t.pos.column, std::move(expected));
  }

  Token expect(Tok kind)
  {
    if (peek().kind != kind) unexpected({describe(kind)});
    return next();
  }

  static NodePtr make(Kind k, Pos p, std::vector<NodePtr> args)
  {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->pos = p;
    n->args = std::move(args);
    return n;
  }

  NodePtr expression()
  {
    auto lhs = term();
    while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
      const Token op = next();
      auto rhs = term();
      lhs = make(op.kind == Tok::Plus ? Kind::Add : Kind::Sub, op.pos, {lhs, rhs});
    }
    return lhs;
  }

  NodePtr term()
  {
    auto lhs = factor();
    while (peek().kind == Tok::Star || peek().kind == Tok::Slash) {
      const Token op = next();
      auto rhs = factor();
      lhs = make(op.kind == Tok::Star ? Kind::Mul : Kind::Div, op.pos, {lhs, rhs});
    }
    return lhs;
  }

  char index_char()
  {
    const Token t = peek();
    if (t.kind != Tok::Name || t.text.size() != 1) unexpected({"index"});
    next();
    return t.text[0];
  }

  // Index letters inside braces lex as names or numbers; split them into characters.
  std::string index_run()
  {
    std::string out;
    while (peek().kind == Tok::Name || peek().kind == Tok::Number) {
      const Token t = next();
      for (char c : t.text)
        if (!std::isalnum(static_cast<unsigned char>(c))) index_error(t.pos, std::string("bad index character '") + c + "'");
      out += t.text;
    }
    return out;
  }

  NodePtr factor()
  {
    const Token t = peek();
    switch (t.kind) {
      case Tok::Number: {
        next();
        auto n = std::make_shared<Node>();
        n->kind = Kind::Number;
        n->pos = t.pos;
        n->text = t.text;
        return n;
      }
      case Tok::Minus: {
        next();
        return make(Kind::Neg, t.pos, {factor()});
      }
      case Tok::LParen: {
        next();
        auto e = expression();
        expect(Tok::RParen);
        return e;
      }
      case Tok::Name: {
        next();
        if (peek().kind == Tok::LParen) return call(t);
        if (peek().kind != Tok::LBrace) unexpected({"'{'", "'('"});
        next();
        auto n = std::make_shared<Node>();
        n->kind = Kind::Ref;
        n->pos = t.pos;
        n->text = t.text;
        n->upper = index_run();
        if (peek().kind == Tok::Semi) {
          next();
          n->lower = index_run();
        }
        if (peek().kind != Tok::RBrace) unexpected({"index", "';'", "'}'"});
        next();
        return n;
      }
      default:
        unexpected({"number", "name", "'('", "'-'"});
    }
  }

  NodePtr call(const Token& name)
  {
    Kind k;
    if (name.text == "alt")
      k = Kind::Alt;
    else if (name.text == "sym")
      k = Kind::Sym;
    else if (name.text == "cd")
      k = Kind::Cd;
    else
      throw ParseError("unknown function '" + name.text + "'", name.pos.line, name.pos.column, {"alt", "sym", "cd"});
    expect(Tok::LParen);
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->pos = name.pos;
    n->args = {expression()};
    if (peek().kind != Tok::Semi) unexpected({"';'", "'+'", "'-'", "'*'", "'/'"});
    next();
    n->a = index_char();
    if (k != Kind::Cd) {
      expect(Tok::Comma);
      n->b = index_char();
    }
    expect(Tok::RParen);
    return n;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

int precedence(const Node& e)
{
  switch (e.kind) {
    case Kind::Add:
    case Kind::Sub: return 1;
    case Kind::Mul:
    case Kind::Div: return 2;
    case Kind::Neg: return 3;
    default: return 4;
  }
}

void emit(const Node& e, std::string& out);

void emit_at(const Node& e, int min_prec, std::string& out)
{
  if (precedence(e) < min_prec) {
    out += '(';
    emit(e, out);
    out += ')';
  } else {
    emit(e, out);
  }
}

void emit(const Node& e, std::string& out)
{
  switch (e.kind) {
    case Kind::Number:
      out += e.text;
      return;
    case Kind::Ref:
      out += e.text + "{" + e.upper;
      if (!e.lower.empty()) out += ";" + e.lower;
      out += "}";
      return;
    case Kind::Add:
    case Kind::Sub:
      emit_at(*e.args[0], 1, out);
      out += e.kind == Kind::Add ? " + " : " - ";
      emit_at(*e.args[1], 2, out);
      return;
    case Kind::Mul:
    case Kind::Div:
      emit_at(*e.args[0], 2, out);
      out += e.kind == Kind::Mul ? "*" : "/";
      emit_at(*e.args[1], 3, out);
      return;
    case Kind::Neg:
      out += "-";
      emit_at(*e.args[0], 3, out);
      return;
    case Kind::Alt:
    case Kind::Sym:
    case Kind::Cd:
      out += e.kind == Kind::Alt ? "alt(" : e.kind == Kind::Sym ? "sym(" : "cd(";
      emit(*e.args[0], out);
      out += "; ";
      out += e.a;
      if (e.kind != Kind::Cd) {
        out += ",";
        out += e.b;
      }
      out += ")";
      return;
  }
}

}  // namespace

bool same(const Node& x, const Node& y)
{
  if (x.kind != y.kind || x.text != y.text || x.upper != y.upper || x.lower != y.lower || x.a != y.a || x.b != y.b ||
      x.args.size() != y.args.size())
    return false;
  for (std::size_t k = 0; k < x.args.size(); ++k)
    if (!same(*x.args[k], *y.args[k])) return false;
  return true;
}

NodePtr parse(std::string_view source)
{
  Parser p(lex(source));
  auto e = p.parse_all();
  analyse(*e);
  return e;
}

std::string print(const Node& e)
{
  std::string out;
  emit(e, out);
  return out;
}

Indices free_indices(const Node& e)
{
  const Info i = analyse(e);
  return {i.upper, i.lower};
}

}  // namespace geoinv::expr
