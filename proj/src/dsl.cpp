#include "c2ka/dsl.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace c2ka {

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  if (in.bad()) throw IoError("cannot read '" + path + "'");
  return os.str();
}

DependenceRelation ModelDocument::relation() const {
  if (closure) return bilinear_closure(model.cka(), dependence);
  return DependenceRelation(model.cka().size(), dependence);
}

AgentSystem ModelDocument::system() const {
  return AgentSystem(model, agents, relation());
}

namespace {

std::string describe(std::size_t line, std::size_t column, const std::string& message) {
  return "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message;
}

}  // namespace

ParseError::ParseError(std::size_t line, std::size_t column, std::string message,
                       std::string token, std::vector<std::string> expected)
    : StructuralError(describe(line, column, message)),
      line_(line),
      column_(column),
      message_(std::move(message)),
      token_(std::move(token)),
      expected_(std::move(expected)) {}

namespace {

constexpr std::string_view kDeactivationGlyph = "\xF0\x9D\x94\xA1";  // U+1D521
constexpr std::string_view kNeutralGlyph = "\xF0\x9D\x94\xAB";       // U+1D52B
constexpr std::string_view kOplusGlyph = "\xE2\x8A\x95";             // U+2295
constexpr std::string_view kOdotGlyph = "\xE2\x8A\x99";              // U+2299

const std::set<std::string, std::less<>> kKeywords{
    "stimuli", "behaviours", "actions", "agents", "dependence", "elements",
    "deactivation", "neutral", "zero", "one", "table", "row", "act", "out",
    "on", "by", "of", "under", "depends", "closure", "seq-star", "par-star"};

const std::vector<std::string> kSections{"stimuli", "behaviours", "actions", "agents",
                                         "dependence"};

bool is_word_byte(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
         c == '_' || c == '\'' || c == '-' || c >= 0x80;
}

bool starts_with_glyph(std::string_view s, std::size_t i) {
  return s.substr(i, 3) == kOplusGlyph || s.substr(i, 3) == kOdotGlyph;
}

std::string normalize_symbol(std::string_view s) {
  if (s == kDeactivationGlyph) return "D";
  if (s == kNeutralGlyph) return "N";
  return std::string(s);
}

bool is_symbol(std::string_view s) {
  if (s.empty() || kKeywords.count(s)) return false;
  for (std::size_t i = 0; i < s.size(); ++i)
    if (!is_word_byte(static_cast<unsigned char>(s[i])) || starts_with_glyph(s, i)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Lexer

struct Pos {
  std::size_t line = 0;
  std::size_t col = 0;
  auto operator<=>(const Pos&) const = default;
};

enum class Tk { word, lbrace, rbrace, eq, colon, op };

struct Token {
  Tk kind;
  std::string text;
  Pos pos;
};

struct Error {
  Pos pos;
  std::string message;
  std::string token;
  std::vector<std::string> expected;
};

/// Tokens of one line; a lexical error is returned instead of thrown so the
/// caller can still weigh it against earlier resolution errors.
std::vector<Token> lex_line(std::string_view line, std::size_t lineno, std::optional<Error>& err) {
  std::vector<Token> out;
  std::size_t col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < line.size(); ++k, ++i)
      if ((static_cast<unsigned char>(line[i]) & 0xC0) != 0x80) ++col;
  };
  while (i < line.size()) {
    const unsigned char c = static_cast<unsigned char>(line[i]);
    const Pos pos{lineno, col};
    if (c == ' ' || c == '\t' || c == '\r') {
      advance(1);
    } else if (c == '#') {
      break;
    } else if (c == '{' || c == '}' || c == '=' || c == ':') {
      const Tk k = c == '{' ? Tk::lbrace : c == '}' ? Tk::rbrace : c == '=' ? Tk::eq : Tk::colon;
      out.push_back({k, std::string(1, static_cast<char>(c)), pos});
      advance(1);
    } else if (c == '+' || c == ';' || c == '*') {
      out.push_back({Tk::op, std::string(1, static_cast<char>(c)), pos});
      advance(1);
    } else if (line.substr(i, 3) == "(+)" || line.substr(i, 3) == "(.)") {
      out.push_back({Tk::op, std::string(line.substr(i, 3)), pos});
      advance(3);
    } else if (starts_with_glyph(line, i)) {
      out.push_back({Tk::op, line.substr(i, 3) == kOplusGlyph ? "(+)" : "(.)", pos});
      advance(3);
    } else if (is_word_byte(c)) {
      const std::size_t start = i;
      while (i < line.size() && is_word_byte(static_cast<unsigned char>(line[i])) &&
             !starts_with_glyph(line, i))
        advance(1);
      out.push_back({Tk::word, normalize_symbol(line.substr(start, i - start)), pos});
    } else {
      std::string shown = c < 0x20 ? "\\x" + std::to_string(c) : std::string(1, static_cast<char>(c));
      err = Error{pos, "unexpected character '" + shown + "'", shown, {}};
      return out;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Syntax tree

struct Sym {
  std::string name;
  Pos pos;
};

struct TableEntry {
  std::optional<Sym> row;
  Sym col;
  Sym value;
  Pos stmt;
};

struct TableRow {
  std::optional<Sym> key;
  std::vector<Sym> values;
  Pos stmt;
};

struct TableAst {
  Pos header;
  std::vector<TableEntry> entries;
  std::vector<TableRow> rows;
};

struct CarrierAst {
  Pos header;
  std::vector<std::pair<Pos, std::vector<Sym>>> elements;
  std::map<std::string, std::vector<std::pair<Pos, Sym>>> designations;
  std::map<std::string, TableAst> tables;
};

struct ActEntry {
  bool is_out;
  Sym s;
  Sym a;
  Sym value;
  Pos stmt;
};

struct ActRow {
  bool is_out;
  Sym s;
  std::vector<Sym> values;
  Pos stmt;
};

struct ActionsAst {
  Pos header;
  std::vector<ActEntry> entries;
  std::vector<ActRow> rows;
};

struct AgentAst {
  Sym name;
  Sym behaviour;
  Pos stmt;
};

struct AgentsAst {
  Pos header;
  std::vector<AgentAst> agents;
};

struct DependenceAst {
  Pos header;
  std::vector<std::pair<Sym, Sym>> pairs;
  bool closure = false;
};

struct FileAst {
  std::optional<CarrierAst> stimuli;
  std::optional<CarrierAst> behaviours;
  std::optional<ActionsAst> actions;
  std::optional<AgentsAst> agents;
  std::optional<DependenceAst> dependence;
  Pos end;
};

// ---------------------------------------------------------------------------
// Statement matching

struct SyntaxFail {
  std::size_t index;
  std::vector<std::string> expected;
};

class Cursor {
 public:
  explicit Cursor(const std::vector<Token>& toks) : t_(toks) {}

  bool at_end() const { return i_ == t_.size(); }
  bool next_is(Tk k) const { return !at_end() && t_[i_].kind == k; }
  bool next_is_word(std::string_view w) const {
    return next_is(Tk::word) && t_[i_].text == w;
  }

  Sym symbol(std::string what = "symbol") {
    if (!next_is(Tk::word) || kKeywords.count(t_[i_].text)) fail({std::move(what)});
    const Token& t = t_[i_++];
    return {t.text, t.pos};
  }
  void keyword(std::string_view w) {
    if (!next_is_word(w)) fail({std::string(w)});
    ++i_;
  }
  void punct(Tk k, std::string_view shown) {
    if (!next_is(k)) fail({std::string(shown)});
    ++i_;
  }
  /// One of `ops`; returns the canonical spelling.
  std::string op(const std::vector<std::string>& ops) {
    if (next_is(Tk::op) || next_is(Tk::word))
      for (const auto& o : ops)
        if (t_[i_].text == o) return t_[i_++].text;
    fail(ops);
  }
  std::vector<Sym> symbols() {
    std::vector<Sym> out;
    while (!at_end()) out.push_back(symbol());
    return out;
  }
  void end() {
    if (!at_end()) fail({"end of line"});
  }
  [[noreturn]] void fail(std::vector<std::string> expected) const {
    throw SyntaxFail{i_, std::move(expected)};
  }

 private:
  const std::vector<Token>& t_;
  std::size_t i_ = 0;
};

std::string quote_list(const std::vector<std::string>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) s += i + 1 == xs.size() ? " or " : ", ";
    s += "'" + xs[i] + "'";
  }
  return s;
}

enum class Ctx { top, stimuli, behaviours, actions, agents, dependence, table };

const std::vector<std::string> kStimulusTables{"(+)", "(.)"};
const std::vector<std::string> kBehaviourTables{"+", ";", "*", "seq-star", "par-star"};

bool is_unary_table(const std::string& op) { return op == "seq-star" || op == "par-star"; }

class SyntaxPass {
 public:
  SyntaxPass(std::string_view text, std::vector<Error>& errors) : text_(text), errors_(errors) {}

  /// Returns false when parsing stopped at a syntax error.
  bool run(FileAst& file) {
    std::size_t lineno = 0;
    std::size_t start = 0;
    if (text_.substr(0, 3) == "\xEF\xBB\xBF") start = 3;
    while (start <= text_.size()) {
      const std::size_t nl = text_.find('\n', start);
      const std::string_view line =
          text_.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
      ++lineno;
      std::optional<Error> lex_error;
      const auto toks = lex_line(line, lineno, lex_error);
      if (lex_error) {
        errors_.push_back(*lex_error);
        return false;
      }
      if (!toks.empty()) {
        try {
          statement(file, toks);
        } catch (const SyntaxFail& f) {
          report(toks, f);
          return false;
        }
      }
      if (nl == std::string_view::npos) break;
      start = nl + 1;
    }
    file.end = Pos{lineno + 1, 1};
    if (ctx_ != Ctx::top) {
      const Pos open = ctx_ == Ctx::table ? table_->header : section_header_;
      errors_.push_back({open,
                         (ctx_ == Ctx::table ? "table '" + table_op_ + "'" : "section '" + section_ + "'") +
                             " is never closed",
                         "",
                         {"}"}});
      return false;
    }
    return true;
  }

 private:
  void report(const std::vector<Token>& toks, const SyntaxFail& f) {
    const std::string found = f.index < toks.size() ? toks[f.index].text : "";
    std::string what = "malformed " + statement_kind();
    what += ": expected " + quote_list(f.expected) + ", found " +
            (found.empty() ? std::string("end of line") : "'" + found + "'");
    // A statement that runs on past a complete form is blamed as a whole.
    Pos at = toks.front().pos;
    if (f.expected == std::vector<std::string>{"end of line"}) {
      what += " at column " + std::to_string(toks[f.index].pos.col);
    } else if (f.index < toks.size()) {
      at = toks[f.index].pos;
    } else {
      // Just past the last token on the line.
      const Token& last = toks.back();
      at = last.pos;
      for (unsigned char ch : last.text) at.col += (ch & 0xC0) != 0x80;
    }
    errors_.push_back({at, what, found, f.expected});
  }

  std::string statement_kind() const {
    switch (ctx_) {
      case Ctx::top: return "section header";
      case Ctx::table: return "entry in table '" + table_op_ + "'";
      default: return "statement in section '" + section_ + "'";
    }
  }

  void statement(FileAst& file, const std::vector<Token>& toks) {
    Cursor c(toks);
    if (ctx_ != Ctx::top && c.next_is(Tk::rbrace)) {
      c.punct(Tk::rbrace, "}");
      c.end();
      ctx_ = ctx_ == Ctx::table ? section_ctx_ : Ctx::top;
      return;
    }
    switch (ctx_) {
      case Ctx::top: return header(file, c, toks.front().pos);
      case Ctx::stimuli: return carrier_stmt(*file.stimuli, c, toks.front().pos, true);
      case Ctx::behaviours: return carrier_stmt(*file.behaviours, c, toks.front().pos, false);
      case Ctx::table: return table_stmt(c, toks.front().pos);
      case Ctx::actions: return action_stmt(*file.actions, c, toks.front().pos);
      case Ctx::agents: {
        Sym name = c.symbol("agent name");
        c.punct(Tk::eq, "=");
        Sym beh = c.symbol("behaviour");
        c.end();
        file.agents->agents.push_back({std::move(name), std::move(beh), toks.front().pos});
        return;
      }
      case Ctx::dependence: {
        if (c.next_is_word("closure")) {
          c.keyword("closure");
          c.end();
          file.dependence->closure = true;
          return;
        }
        Sym b = c.symbol("behaviour or 'closure'");
        c.keyword("depends");
        c.keyword("on");
        Sym a = c.symbol("behaviour");
        c.end();
        file.dependence->pairs.emplace_back(std::move(b), std::move(a));
        return;
      }
    }
  }

  template <class Ast>
  void open(std::optional<Ast>& slot, Pos pos) {
    if (slot) {
      errors_.push_back({slot->header,
                         "section '" + section_ + "' is declared again at line " +
                             std::to_string(pos.line),
                         section_,
                         {}});
    } else {
      slot.emplace();
      slot->header = pos;
    }
  }

  void header(FileAst& file, Cursor& c, Pos pos) {
    std::string name;
    for (const auto& s : kSections)
      if (c.next_is_word(s)) name = s;
    if (name.empty()) c.fail(kSections);
    c.keyword(name);
    c.punct(Tk::lbrace, "{");
    c.end();
    section_ = name;
    section_header_ = pos;
    if (name == "stimuli") {
      open(file.stimuli, pos);
      ctx_ = Ctx::stimuli;
    } else if (name == "behaviours") {
      open(file.behaviours, pos);
      ctx_ = Ctx::behaviours;
    } else if (name == "actions") {
      open(file.actions, pos);
      ctx_ = Ctx::actions;
    } else if (name == "agents") {
      open(file.agents, pos);
      ctx_ = Ctx::agents;
    } else {
      open(file.dependence, pos);
      ctx_ = Ctx::dependence;
    }
  }

  void carrier_stmt(CarrierAst& ast, Cursor& c, Pos pos, bool stimuli) {
    const std::vector<std::string> designations =
        stimuli ? std::vector<std::string>{"deactivation", "neutral"}
                : std::vector<std::string>{"zero", "one"};
    if (c.next_is_word("elements")) {
      c.keyword("elements");
      auto syms = c.symbols();
      if (syms.empty()) c.fail({"symbol"});
      ast.elements.emplace_back(pos, std::move(syms));
      return;
    }
    for (const auto& d : designations)
      if (c.next_is_word(d)) {
        c.keyword(d);
        c.punct(Tk::eq, "=");
        Sym s = c.symbol();
        c.end();
        ast.designations[d].emplace_back(pos, std::move(s));
        return;
      }
    if (c.next_is_word("table")) {
      c.keyword("table");
      const std::string op = c.op(stimuli ? kStimulusTables : kBehaviourTables);
      c.punct(Tk::lbrace, "{");
      c.end();
      auto [it, fresh] = ast.tables.try_emplace(op);
      if (fresh) it->second.header = pos;
      table_ = &it->second;
      table_op_ = op;
      section_ctx_ = ctx_;
      ctx_ = Ctx::table;
      return;
    }
    std::vector<std::string> expected{"elements"};
    expected.insert(expected.end(), designations.begin(), designations.end());
    expected.push_back("table");
    expected.push_back("}");
    c.fail(expected);
  }

  void table_stmt(Cursor& c, Pos pos) {
    const bool unary = is_unary_table(table_op_);
    if (c.next_is_word("row")) {
      c.keyword("row");
      TableRow row;
      row.stmt = pos;
      if (!unary) row.key = c.symbol("row element");
      c.punct(Tk::colon, ":");
      row.values = c.symbols();
      if (row.values.empty()) c.fail({"symbol"});
      table_->rows.push_back(std::move(row));
      return;
    }
    if (!c.next_is(Tk::word)) c.fail({"row", "symbol", "}"});
    TableEntry e;
    e.stmt = pos;
    if (unary) {
      e.col = c.symbol();
    } else {
      e.row = c.symbol();
      c.op({table_op_});
      e.col = c.symbol();
    }
    c.punct(Tk::eq, "=");
    e.value = c.symbol();
    c.end();
    table_->entries.push_back(std::move(e));
  }

  void action_stmt(ActionsAst& ast, Cursor& c, Pos pos) {
    if (c.next_is_word("row")) {
      c.keyword("row");
      ActRow row;
      row.stmt = pos;
      if (c.next_is_word("act")) {
        c.keyword("act");
        row.is_out = false;
      } else if (c.next_is_word("out")) {
        c.keyword("out");
        row.is_out = true;
      } else {
        c.fail({"act", "out"});
      }
      row.s = c.symbol("stimulus");
      c.punct(Tk::colon, ":");
      row.values = c.symbols();
      if (row.values.empty()) c.fail({"symbol"});
      ast.rows.push_back(std::move(row));
      return;
    }
    ActEntry e;
    e.stmt = pos;
    if (c.next_is_word("act")) {
      // act s on a = b | act on a by s = b
      c.keyword("act");
      e.is_out = false;
      if (c.next_is_word("on")) {
        c.keyword("on");
        e.a = c.symbol("behaviour");
        c.keyword("by");
        e.s = c.symbol("stimulus");
      } else {
        e.s = c.symbol("stimulus or 'on'");
        c.keyword("on");
        e.a = c.symbol("behaviour");
      }
    } else if (c.next_is_word("out")) {
      // out of a under s = t | out under s of a = t
      c.keyword("out");
      e.is_out = true;
      if (c.next_is_word("of")) {
        c.keyword("of");
        e.a = c.symbol("behaviour");
        c.keyword("under");
        e.s = c.symbol("stimulus");
      } else if (c.next_is_word("under")) {
        c.keyword("under");
        e.s = c.symbol("stimulus");
        c.keyword("of");
        e.a = c.symbol("behaviour");
      } else {
        c.fail({"of", "under"});
      }
    } else {
      c.fail({"act", "out", "row", "}"});
    }
    c.punct(Tk::eq, "=");
    e.value = c.symbol();
    c.end();
    ast.entries.push_back(std::move(e));
  }

  std::string_view text_;
  std::vector<Error>& errors_;
  Ctx ctx_ = Ctx::top;
  Ctx section_ctx_ = Ctx::top;
  std::string section_;
  Pos section_header_;
  TableAst* table_ = nullptr;
  std::string table_op_;
};

// ---------------------------------------------------------------------------
// Resolution

using Default = std::function<std::optional<Element>(Element, Element)>;

struct Assign {
  Element r;
  Element c;
  Element v;
  Pos stmt;
  Pos at;
};

class Resolver {
 public:
  Resolver(std::vector<Error>& errors, bool partial) : errors_(errors), partial_(partial) {}

  std::optional<ModelDocument> run(const FileAst& f) {
    if (!partial_) {
      if (!f.stimuli) error(f.end, "missing section 'stimuli'", "", {"stimuli"});
      if (!f.behaviours) error(f.end, "missing section 'behaviours'", "", {"behaviours"});
    }
    std::optional<Carrier> S = f.stimuli ? carrier(*f.stimuli, "stimuli") : std::nullopt;
    std::optional<Carrier> K = f.behaviours ? carrier(*f.behaviours, "behaviours") : std::nullopt;
    const Carrier* sp = S ? &*S : nullptr;
    const Carrier* kp = K ? &*K : nullptr;

    std::optional<Element> D, N, Z, O;
    if (f.stimuli) {
      D = designation(*f.stimuli, "deactivation", sp);
      N = designation(*f.stimuli, "neutral", sp);
    }
    if (f.behaviours) {
      Z = designation(*f.behaviours, "zero", kp);
      O = designation(*f.behaviours, "one", kp);
    }

    // Default rules; zero-preserving rules come first so they win.
    auto table = [&](const std::optional<CarrierAst>& sec, const std::string& op,
                     const Carrier* car, Default def, Pos fallback) {
      const TableAst* ast = nullptr;
      if (sec) {
        auto it = sec->tables.find(op);
        if (it != sec->tables.end()) ast = &it->second;
      }
      const bool unary = is_unary_table(op);
      std::vector<Assign> assigns;
      if (ast) collect(*ast, unary ? nullptr : car, car, car, unary, assigns);
      return finish(
          "table '" + op + "'", unary ? 1 : (car ? car->size() : 0), car ? car->size() : 0,
          std::move(assigns), def,
          ast ? ast->header : fallback,
          [&, op, unary](Element r, Element c) {
            return unary ? car->name(c) + " = ?"
                         : car->name(r) + " " + op + " " + car->name(c) + " = ?";
          },
          car != nullptr);
    };
    const Pos spos = f.stimuli ? f.stimuli->header : f.end;
    const Pos kpos = f.behaviours ? f.behaviours->header : f.end;
    auto ok = [](std::optional<Element> e) { return e.has_value(); };

    auto s_choice = table(f.stimuli, "(+)", sp,
                          [&](Element x, Element y) -> std::optional<Element> {
                            if (ok(D) && x == *D) return y;
                            if (ok(D) && y == *D) return x;
                            if (x == y) return x;
                            return std::nullopt;
                          },
                          spos);
    auto s_compose = table(f.stimuli, "(.)", sp,
                           [&](Element x, Element y) -> std::optional<Element> {
                             if (ok(D) && (x == *D || y == *D)) return *D;
                             if (ok(N) && x == *N) return y;
                             if (ok(N) && y == *N) return x;
                             return std::nullopt;
                           },
                           spos);
    auto k_choice = table(f.behaviours, "+", kp,
                          [&](Element x, Element y) -> std::optional<Element> {
                            if (ok(Z) && x == *Z) return y;
                            if (ok(Z) && y == *Z) return x;
                            if (x == y) return x;
                            return std::nullopt;
                          },
                          kpos);
    Default mult = [&](Element x, Element y) -> std::optional<Element> {
      if (ok(Z) && (x == *Z || y == *Z)) return *Z;
      if (ok(O) && x == *O) return y;
      if (ok(O) && y == *O) return x;
      return std::nullopt;
    };
    auto k_seq = table(f.behaviours, ";", kp, mult, kpos);
    auto k_par = table(f.behaviours, "*", kp, mult, kpos);
    Default star = [&](Element, Element x) -> std::optional<Element> {
      if (ok(O) && ((ok(Z) && x == *Z) || x == *O)) return *O;
      return std::nullopt;
    };
    auto k_sst = table(f.behaviours, "seq-star", kp, star, kpos);
    auto k_pst = table(f.behaviours, "par-star", kp, star, kpos);

    // actions
    ActionsAst empty_actions;
    empty_actions.header = f.end;
    const ActionsAst& acts = f.actions ? *f.actions : empty_actions;
    std::vector<Assign> act_assigns, out_assigns;
    for (const auto& e : acts.entries) {
      auto s = lookup(sp, e.s, "stimulus");
      auto a = lookup(kp, e.a, "behaviour");
      auto v = lookup(e.is_out ? sp : kp, e.value, e.is_out ? "stimulus" : "behaviour");
      if (s && a && v) (e.is_out ? out_assigns : act_assigns).push_back({*s, *a, *v, e.stmt, e.stmt});
    }
    for (const auto& row : acts.rows) {
      auto s = lookup(sp, row.s, "stimulus");
      if (kp && row.values.size() != kp->size())
        error(row.stmt,
              "row has " + std::to_string(row.values.size()) + " entries, expected " +
                  std::to_string(kp->size()) + " (one per behaviour)",
              row.s.name, {});
      for (std::size_t j = 0; j < row.values.size(); ++j) {
        auto v = lookup(row.is_out ? sp : kp, row.values[j], row.is_out ? "stimulus" : "behaviour");
        if (s && v && kp && j < kp->size())
          (row.is_out ? out_assigns : act_assigns).push_back({*s, j, *v, row.stmt, row.values[j].pos});
      }
    }
    const bool both = sp && kp;
    auto act = finish(
        "next-behaviour mapping", sp ? sp->size() : 0, kp ? kp->size() : 0, std::move(act_assigns),
        [&](Element s, Element a) -> std::optional<Element> {
          if (ok(D) && s == *D && ok(Z)) return *Z;
          if (ok(Z) && a == *Z) return *Z;
          if (ok(N) && s == *N) return a;
          return std::nullopt;
        },
        acts.header,
        [&](Element s, Element a) { return "act " + sp->name(s) + " on " + kp->name(a) + " = ?"; },
        both);
    auto out = finish(
        "next-stimulus mapping", sp ? sp->size() : 0, kp ? kp->size() : 0, std::move(out_assigns),
        [&](Element s, Element a) -> std::optional<Element> {
          if (ok(Z) && a == *Z && ok(D)) return *D;
          if (ok(D) && s == *D) return *D;
          if (ok(O) && a == *O) return s;
          return std::nullopt;
        },
        acts.header,
        [&](Element s, Element a) { return "out of " + kp->name(a) + " under " + sp->name(s) + " = ?"; },
        both);

    // agents
    std::vector<Agent> agents;
    if (f.agents) {
      std::map<std::string, std::pair<const AgentAst*, Element>> seen;
      for (const auto& ag : f.agents->agents) {
        auto b = lookup(kp, ag.behaviour, "behaviour");
        if (!b) continue;
        auto [it, fresh] = seen.try_emplace(ag.name.name, &ag, *b);
        if (fresh) {
          agents.push_back({ag.name.name, *b});
        } else if (it->second.second != *b) {
          error(it->second.first->stmt,
                "agent '" + ag.name.name + "' is bound again at line " +
                    std::to_string(ag.stmt.line) + " to a different behaviour",
                ag.name.name, {});
        }
      }
    }

    // dependence
    std::vector<std::pair<Element, Element>> dep;
    bool closure = false;
    if (f.dependence) {
      closure = f.dependence->closure;
      for (const auto& [b, a] : f.dependence->pairs) {
        auto eb = lookup(kp, b, "behaviour");
        auto ea = lookup(kp, a, "behaviour");
        if (eb && ea) dep.emplace_back(*eb, *ea);
      }
      std::sort(dep.begin(), dep.end());
      dep.erase(std::unique(dep.begin(), dep.end()), dep.end());
    }

    if (partial_ || !errors_.empty()) return std::nullopt;
    StimulusStructure stim(*S, BinOpTable(S->size(), *s_choice), BinOpTable(S->size(), *s_compose),
                           *D, *N);
    CkaStructure cka(*K, BinOpTable(K->size(), *k_choice), BinOpTable(K->size(), *k_seq),
                     BinOpTable(K->size(), *k_par), UnaryOpTable(K->size(), *k_sst),
                     UnaryOpTable(K->size(), *k_pst), *Z, *O);
    const std::size_t ns = S->size(), nk = K->size();
    C2kaModel model(std::move(cka), std::move(stim), ActionTable(ns, nk, nk, std::move(*act)),
                    ActionTable(ns, nk, ns, std::move(*out)));
    return ModelDocument{std::move(model), std::move(agents), std::move(dep), closure};
  }

 private:
  void error(Pos pos, std::string message, std::string token, std::vector<std::string> expected) {
    errors_.push_back({pos, std::move(message), std::move(token), std::move(expected)});
  }

  std::optional<Carrier> carrier(const CarrierAst& ast, const std::string& section) {
    if (ast.elements.empty()) {
      if (!partial_)
        error(ast.header, "section '" + section + "' declares no elements", section, {"elements"});
      return std::nullopt;
    }
    const auto& [pos, syms] = ast.elements.front();
    bool bad = false;
    for (std::size_t k = 1; k < ast.elements.size(); ++k) {
      const auto& other = ast.elements[k].second;
      bool same = other.size() == syms.size();
      for (std::size_t i = 0; same && i < syms.size(); ++i) same = other[i].name == syms[i].name;
      if (!same) {
        error(pos,
              "elements of '" + section + "' are declared differently at line " +
                  std::to_string(ast.elements[k].first.line),
              "elements", {});
        bad = true;
        break;
      }
    }
    std::map<std::string, Pos> first;
    std::vector<std::string> names;
    for (const auto& s : syms) {
      auto [it, fresh] = first.try_emplace(s.name, s.pos);
      if (!fresh) {
        error(it->second, "element '" + s.name + "' is declared twice", s.name, {});
        bad = true;
      }
      names.push_back(s.name);
    }
    if (bad) return std::nullopt;
    return Carrier(std::move(names));
  }

  std::optional<Element> lookup(const Carrier* car, const Sym& s, const std::string& what) {
    if (!car) return std::nullopt;
    if (auto e = car->find(s.name)) return e;
    error(s.pos, "undefined " + what + " '" + s.name + "'", s.name, car->names());
    return std::nullopt;
  }

  std::optional<Element> designation(const CarrierAst& ast, const std::string& key,
                                     const Carrier* car) {
    auto it = ast.designations.find(key);
    if (it == ast.designations.end()) {
      if (!partial_) error(ast.header, "missing designation '" + key + " = ...'", "", {key});
      return std::nullopt;
    }
    std::optional<Element> value;
    for (const auto& [pos, sym] : it->second) {
      auto e = lookup(car, sym, "element");
      if (!e) continue;
      if (value && *value != *e) {
        error(it->second.front().first,
              "'" + key + "' is designated differently at line " + std::to_string(pos.line),
              key, {});
        return std::nullopt;
      }
      value = e;
    }
    return value;
  }

  void collect(const TableAst& ast, const Carrier* rows, const Carrier* cols, const Carrier* values,
               bool unary, std::vector<Assign>& out) {
    for (const auto& e : ast.entries) {
      std::optional<Element> r = unary ? std::optional<Element>(0) : lookup(rows, *e.row, "element");
      auto c = lookup(cols, e.col, "element");
      auto v = lookup(values, e.value, "element");
      if (r && c && v) out.push_back({*r, *c, *v, e.stmt, e.stmt});
    }
    for (const auto& row : ast.rows) {
      std::optional<Element> r = unary ? std::optional<Element>(0) : lookup(rows, *row.key, "element");
      if (cols && row.values.size() != cols->size())
        error(row.stmt,
              "row has " + std::to_string(row.values.size()) + " entries, expected " +
                  std::to_string(cols->size()),
              row.key ? row.key->name : "row", {});
      for (std::size_t j = 0; j < row.values.size(); ++j) {
        auto v = lookup(values, row.values[j], "element");
        if (r && v && cols && j < cols->size()) out.push_back({*r, j, *v, row.stmt, row.values[j].pos});
      }
    }
  }

  /// Fills a rows x cols grid: explicit entries, then defaults, then a
  /// totality check. Conflicts are reported at the first occurrence.
  std::optional<std::vector<Element>> finish(const std::string& label, std::size_t nrows,
                                             std::size_t ncols, std::vector<Assign> assigns,
                                             const Default& def, Pos header,
                                             const std::function<std::string(Element, Element)>& show,
                                             bool resolvable) {
    if (!resolvable) return std::nullopt;
    std::stable_sort(assigns.begin(), assigns.end(), [](const Assign& x, const Assign& y) {
      return std::tie(x.stmt, x.at) < std::tie(y.stmt, y.at);
    });
    std::vector<std::optional<Assign>> cells(nrows * ncols);
    bool bad = false;
    for (const auto& a : assigns) {
      auto& cell = cells[a.r * ncols + a.c];
      if (!cell) {
        cell = a;
      } else if (cell->v != a.v) {
        error(cell->stmt,
              "conflicting entries in " + label + " (again at line " + std::to_string(a.stmt.line) +
                  ")",
              "", {});
        bad = true;
      }
    }
    if (bad || partial_) return std::nullopt;
    std::vector<Element> out(nrows * ncols);
    for (Element r = 0; r < nrows; ++r)
      for (Element c = 0; c < ncols; ++c) {
        const auto& cell = cells[r * ncols + c];
        if (cell) {
          out[r * ncols + c] = cell->v;
        } else if (auto d = def ? def(r, c) : std::nullopt) {
          out[r * ncols + c] = *d;
        } else {
          error(header, label + " is not total: no entry for '" + show(r, c) + "'", "", {});
          return std::nullopt;
        }
      }
    return out;
  }

  std::vector<Error>& errors_;
  bool partial_;
};

}  // namespace

ModelDocument parse_model(std::string_view text) {
  std::vector<Error> errors;
  FileAst file;
  const bool complete = SyntaxPass(text, errors).run(file);
  std::optional<ModelDocument> doc;
  // Two stages: with a syntax error the tree is partial, so only
  // statement-local checks run and the earliest error wins.
  doc = Resolver(errors, !complete).run(file);
  if (!errors.empty()) {
    const auto it = std::min_element(errors.begin(), errors.end(),
                                     [](const Error& x, const Error& y) { return x.pos < y.pos; });
    throw ParseError(it->pos.line, it->pos.col, it->message, it->token, it->expected);
  }
  return std::move(*doc);
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

void write_row(std::ostringstream& os, const std::string& head, const Carrier& values,
               std::span<const Element> cells) {
  os << head << ':';
  for (Element v : cells) os << ' ' << values.name(v);
  os << '\n';
}

void write_binary(std::ostringstream& os, const std::string& op, const Carrier& c,
                  const BinOpTable& t) {
  os << "  table " << op << " {\n";
  for (Element r = 0; r < c.size(); ++r)
    write_row(os, "    row " + c.name(r), c, t.cells().subspan(r * c.size(), c.size()));
  os << "  }\n";
}

void write_unary(std::ostringstream& os, const std::string& op, const Carrier& c,
                 const UnaryOpTable& t) {
  os << "  table " << op << " {\n";
  write_row(os, "    row", c, t.cells());
  os << "  }\n";
}

}  // namespace

std::string serialize_model(const ModelDocument& doc) {
  const C2kaModel& m = doc.model;
  const Carrier& S = m.stim().carrier();
  const Carrier& K = m.cka().carrier();
  std::ostringstream os;

  os << "stimuli {\n  elements";
  for (const auto& n : S.names()) os << ' ' << n;
  os << "\n  deactivation = " << S.name(m.stim().deactivation()) << '\n';
  os << "  neutral = " << S.name(m.stim().neutral()) << '\n';
  write_binary(os, "(+)", S, m.stim().choice());
  write_binary(os, "(.)", S, m.stim().compose());
  os << "}\n\n";

  os << "behaviours {\n  elements";
  for (const auto& n : K.names()) os << ' ' << n;
  os << "\n  zero = " << K.name(m.cka().zero()) << '\n';
  os << "  one = " << K.name(m.cka().one()) << '\n';
  write_binary(os, "+", K, m.cka().choice());
  write_binary(os, ";", K, m.cka().seq());
  write_binary(os, "*", K, m.cka().par());
  write_unary(os, "seq-star", K, m.cka().seq_star());
  write_unary(os, "par-star", K, m.cka().par_star());
  os << "}\n\n";

  os << "actions {\n";
  for (Element s = 0; s < S.size(); ++s)
    write_row(os, "  row act " + S.name(s), K,
              m.act_table().cells().subspan(s * K.size(), K.size()));
  for (Element s = 0; s < S.size(); ++s)
    write_row(os, "  row out " + S.name(s), S,
              m.out_table().cells().subspan(s * K.size(), K.size()));
  os << "}\n";

  if (!doc.agents.empty()) {
    os << "\nagents {\n";
    for (const auto& a : doc.agents) os << "  " << a.name << " = " << K.name(a.behaviour) << '\n';
    os << "}\n";
  }
  if (!doc.dependence.empty() || doc.closure) {
    os << "\ndependence {\n";
    for (auto [b, a] : doc.dependence)
      os << "  " << K.name(b) << " depends on " << K.name(a) << '\n';
    if (doc.closure) os << "  closure\n";
    os << "}\n";
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// JSON

namespace {

using ojson = nlohmann::ordered_json;

class JsonReader {
 public:
  const ojson& field(const ojson& obj, const std::string& key, const std::string& ptr) {
    auto it = obj.find(key);
    if (it == obj.end()) throw JsonError(ptr, "missing key '" + key + "'");
    return *it;
  }
  const ojson& object(const ojson& j, const std::string& ptr,
                      std::initializer_list<std::string_view> allowed) {
    if (!j.is_object()) throw JsonError(ptr, "expected an object");
    for (auto it = j.begin(); it != j.end(); ++it)
      if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
        throw JsonError(ptr + "/" + escape(it.key()), "unknown key");
    return j;
  }
  const ojson& array(const ojson& j, const std::string& ptr, std::optional<std::size_t> size = {}) {
    if (!j.is_array()) throw JsonError(ptr, "expected an array");
    if (size && j.size() != *size)
      throw JsonError(ptr, "expected " + std::to_string(*size) + " items, got " +
                               std::to_string(j.size()));
    return j;
  }
  std::string symbol(const ojson& j, const std::string& ptr) {
    if (!j.is_string()) throw JsonError(ptr, "expected a string");
    std::string s = normalize_symbol(j.get<std::string>());
    if (!is_symbol(s)) throw JsonError(ptr, "'" + s + "' is not a valid symbol");
    return s;
  }
  Element element(const ojson& j, const Carrier& c, const std::string& ptr) {
    const std::string s = symbol(j, ptr);
    if (auto e = c.find(s)) return *e;
    throw JsonError(ptr, "undefined element '" + s + "'");
  }
  Carrier carrier(const ojson& j, const std::string& ptr) {
    array(j, ptr);
    if (j.empty()) throw JsonError(ptr, "carrier must not be empty");
    std::vector<std::string> names;
    for (std::size_t i = 0; i < j.size(); ++i) {
      std::string s = symbol(j[i], ptr + "/" + std::to_string(i));
      if (std::find(names.begin(), names.end(), s) != names.end())
        throw JsonError(ptr + "/" + std::to_string(i), "element '" + s + "' is declared twice");
      names.push_back(std::move(s));
    }
    return Carrier(std::move(names));
  }
  std::vector<Element> matrix(const ojson& j, std::size_t rows, std::size_t cols,
                              const Carrier& values, const std::string& ptr) {
    array(j, ptr, rows);
    std::vector<Element> out;
    for (std::size_t r = 0; r < rows; ++r) {
      const std::string rp = ptr + "/" + std::to_string(r);
      array(j[r], rp, cols);
      for (std::size_t c = 0; c < cols; ++c)
        out.push_back(element(j[r][c], values, rp + "/" + std::to_string(c)));
    }
    return out;
  }
  std::vector<Element> vec(const ojson& j, std::size_t n, const Carrier& values,
                           const std::string& ptr) {
    array(j, ptr, n);
    std::vector<Element> out;
    for (std::size_t i = 0; i < n; ++i)
      out.push_back(element(j[i], values, ptr + "/" + std::to_string(i)));
    return out;
  }

  static std::string escape(const std::string& key) {
    std::string out;
    for (char c : key) {
      if (c == '~') out += "~0";
      else if (c == '/') out += "~1";
      else out += c;
    }
    return out;
  }
};

ojson names_of(const Carrier& c, std::span<const Element> cells) {
  ojson out = ojson::array();
  for (Element e : cells) out.push_back(c.name(e));
  return out;
}

ojson matrix_of(const Carrier& values, std::span<const Element> cells, std::size_t cols) {
  ojson out = ojson::array();
  for (std::size_t r = 0; r * cols < cells.size(); ++r)
    out.push_back(names_of(values, cells.subspan(r * cols, cols)));
  return out;
}

}  // namespace

ModelDocument import_json(std::string_view text) {
  ojson root;
  try {
    root = ojson::parse(text);
  } catch (const ojson::parse_error& e) {
    throw JsonError("", std::string("malformed JSON: ") + e.what());
  }
  JsonReader rd;
  rd.object(root, "", {"stimuli", "behaviours", "actions", "agents", "dependence"});

  const ojson& js = rd.object(rd.field(root, "stimuli", ""), "/stimuli",
                              {"elements", "deactivation", "neutral", "choice", "compose"});
  Carrier S = rd.carrier(rd.field(js, "elements", "/stimuli"), "/stimuli/elements");
  const std::size_t ns = S.size();
  StimulusStructure stim(
      S, BinOpTable(ns, rd.matrix(rd.field(js, "choice", "/stimuli"), ns, ns, S, "/stimuli/choice")),
      BinOpTable(ns, rd.matrix(rd.field(js, "compose", "/stimuli"), ns, ns, S, "/stimuli/compose")),
      rd.element(rd.field(js, "deactivation", "/stimuli"), S, "/stimuli/deactivation"),
      rd.element(rd.field(js, "neutral", "/stimuli"), S, "/stimuli/neutral"));

  const ojson& jb =
      rd.object(rd.field(root, "behaviours", ""), "/behaviours",
                {"elements", "zero", "one", "choice", "seq", "par", "seq_star", "par_star"});
  Carrier K = rd.carrier(rd.field(jb, "elements", "/behaviours"), "/behaviours/elements");
  const std::size_t nk = K.size();
  auto bin = [&](const char* key) {
    return BinOpTable(nk, rd.matrix(rd.field(jb, key, "/behaviours"), nk, nk, K,
                                    std::string("/behaviours/") + key));
  };
  auto un = [&](const char* key) {
    return UnaryOpTable(
        nk, rd.vec(rd.field(jb, key, "/behaviours"), nk, K, std::string("/behaviours/") + key));
  };
  CkaStructure cka(K, bin("choice"), bin("seq"), bin("par"), un("seq_star"), un("par_star"),
                   rd.element(rd.field(jb, "zero", "/behaviours"), K, "/behaviours/zero"),
                   rd.element(rd.field(jb, "one", "/behaviours"), K, "/behaviours/one"));

  const ojson& ja = rd.object(rd.field(root, "actions", ""), "/actions", {"act", "out"});
  ActionTable act(ns, nk, nk, rd.matrix(rd.field(ja, "act", "/actions"), ns, nk, K, "/actions/act"));
  ActionTable out(ns, nk, ns, rd.matrix(rd.field(ja, "out", "/actions"), ns, nk, S, "/actions/out"));

  std::vector<Agent> agents;
  if (auto it = root.find("agents"); it != root.end()) {
    rd.array(*it, "/agents");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const std::string p = "/agents/" + std::to_string(i);
      const ojson& ja2 = rd.object((*it)[i], p, {"name", "behaviour"});
      std::string name = rd.symbol(rd.field(ja2, "name", p), p + "/name");
      for (const auto& a : agents)
        if (a.name == name) throw JsonError(p + "/name", "duplicate agent '" + name + "'");
      agents.push_back({std::move(name), rd.element(rd.field(ja2, "behaviour", p), K, p + "/behaviour")});
    }
  }

  std::vector<std::pair<Element, Element>> dep;
  bool closure = false;
  if (auto it = root.find("dependence"); it != root.end()) {
    rd.object(*it, "/dependence", {"pairs", "closure"});
    if (auto c = it->find("closure"); c != it->end()) {
      if (!c->is_boolean()) throw JsonError("/dependence/closure", "expected a boolean");
      closure = c->get<bool>();
    }
    if (auto ps = it->find("pairs"); ps != it->end()) {
      rd.array(*ps, "/dependence/pairs");
      for (std::size_t i = 0; i < ps->size(); ++i) {
        const std::string p = "/dependence/pairs/" + std::to_string(i);
        rd.array((*ps)[i], p, 2);
        dep.emplace_back(rd.element((*ps)[i][0], K, p + "/0"), rd.element((*ps)[i][1], K, p + "/1"));
      }
    }
    std::sort(dep.begin(), dep.end());
    dep.erase(std::unique(dep.begin(), dep.end()), dep.end());
  }

  C2kaModel model(std::move(cka), std::move(stim), std::move(act), std::move(out));
  return ModelDocument{std::move(model), std::move(agents), std::move(dep), closure};
}

std::string export_json(const ModelDocument& doc) {
  const C2kaModel& m = doc.model;
  const Carrier& S = m.stim().carrier();
  const Carrier& K = m.cka().carrier();
  ojson root;
  root["stimuli"] = {
      {"elements", S.names()},
      {"deactivation", S.name(m.stim().deactivation())},
      {"neutral", S.name(m.stim().neutral())},
      {"choice", matrix_of(S, m.stim().choice().cells(), S.size())},
      {"compose", matrix_of(S, m.stim().compose().cells(), S.size())},
  };
  root["behaviours"] = {
      {"elements", K.names()},
      {"zero", K.name(m.cka().zero())},
      {"one", K.name(m.cka().one())},
      {"choice", matrix_of(K, m.cka().choice().cells(), K.size())},
      {"seq", matrix_of(K, m.cka().seq().cells(), K.size())},
      {"par", matrix_of(K, m.cka().par().cells(), K.size())},
      {"seq_star", names_of(K, m.cka().seq_star().cells())},
      {"par_star", names_of(K, m.cka().par_star().cells())},
  };
  root["actions"] = {
      {"act", matrix_of(K, m.act_table().cells(), K.size())},
      {"out", matrix_of(S, m.out_table().cells(), K.size())},
  };
  ojson agents = ojson::array();
  for (const auto& a : doc.agents) agents.push_back({{"name", a.name}, {"behaviour", K.name(a.behaviour)}});
  root["agents"] = std::move(agents);
  ojson pairs = ojson::array();
  for (auto [b, a] : doc.dependence) pairs.push_back({K.name(b), K.name(a)});
  root["dependence"] = {{"pairs", std::move(pairs)}, {"closure", doc.closure}};
  return root.dump(2) + "\n";
}

}  // namespace c2ka
