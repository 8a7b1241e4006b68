#pragma once

#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "chp/net.hpp"
#include "chp/testing.hpp"

namespace chp {

struct Diagnostic {
  int line = 0;
  int col = 0;
  std::string message;
};

// A parsed .chp file: named nets and tests plus warning-level diagnostics.
struct Document {
  std::vector<Net> nets;
  std::vector<Test> tests;
  std::vector<Diagnostic> warnings;

  const Net* find_net(const std::string& name) const {
    for (const auto& n : nets)
      if (n.name == name) return &n;
    return nullptr;
  }
  const Test* find_test(const std::string& name) const {
    for (const auto& t : tests)
      if (t.net.name == name) return &t;
    return nullptr;
  }
  const Net& net(const std::string& name) const {
    if (const Net* n = find_net(name)) return *n;
    throw StructureError("no net named \"" + name + "\" in document");
  }
  const Test& test(const std::string& name) const {
    if (const Test* t = find_test(name)) return *t;
    throw StructureError("no test named \"" + name + "\" in document");
  }
};

namespace textio_detail {

enum class Tok { Ident, LBrace, RBrace, Semi, Colon, Comma, Dash, Arrow, End };

struct Token {
  Tok kind;
  std::string text;
  int line, col;
};

inline bool ident_start(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
}
inline bool ident_tail(char c) { return ident_start(c) || c == '\'' || c == '.' || c == '@'; }

class Lexer {
public:
  explicit Lexer(const std::string& text) : s_(text) { advance(); }

  const Token& peek() const { return tok_; }

  Token take() {
    Token t = tok_;
    advance();
    return t;
  }

private:
  void advance() {
    while (pos_ < s_.size()) {
      char c = s_[pos_];
      if (c == '#') {
        while (pos_ < s_.size() && s_[pos_] != '\n') ++pos_;
      } else if (c == '\n') {
        ++pos_;
        ++line_;
        col_ = 1;
      } else if (c == ' ' || c == '\t' || c == '\r') {
        ++pos_;
        ++col_;
      } else {
        break;
      }
    }
    tok_.line = line_;
    tok_.col = col_;
    if (pos_ >= s_.size()) {
      tok_ = {Tok::End, "", line_, col_};
      return;
    }
    char c = s_[pos_];
    auto single = [&](Tok k) {
      tok_ = {k, std::string(1, c), line_, col_};
      ++pos_;
      ++col_;
    };
    switch (c) {
      case '{': single(Tok::LBrace); return;
      case '}': single(Tok::RBrace); return;
      case ';': single(Tok::Semi); return;
      case ':': single(Tok::Colon); return;
      case ',': single(Tok::Comma); return;
      case '-':
        if (pos_ + 1 < s_.size() && s_[pos_ + 1] == '>') {
          tok_ = {Tok::Arrow, "->", line_, col_};
          pos_ += 2;
          col_ += 2;
        } else {
          single(Tok::Dash);
        }
        return;
      default: break;
    }
    if (!ident_start(c)) throw ParseError(line_, col_, "unexpected character '" + std::string(1, c) + "'");
    std::size_t start = pos_;
    while (pos_ < s_.size() && ident_tail(s_[pos_])) {
      ++pos_;
      ++col_;
    }
    tok_ = {Tok::Ident, s_.substr(start, pos_ - start), line_, tok_.col};
  }

  const std::string& s_;
  std::size_t pos_ = 0;
  int line_ = 1, col_ = 1;
  Token tok_;
};

inline const std::set<std::string>& reserved_words() {
  static const std::set<std::string> words{"net", "test", "alphabet", "places", "initial",
                                           "trans", "tick", "tau"};
  return words;
}

class Parser {
public:
  explicit Parser(const std::string& text) : lex_(text) {}

  Document run() {
    Document doc;
    std::set<std::string> names;
    while (lex_.peek().kind != Tok::End) {
      Token kw = expect_ident();
      bool is_test = kw.text == "test";
      if (!is_test && kw.text != "net")
        throw ParseError(kw.line, kw.col, "expected \"net\" or \"test\", got \"" + kw.text + "\"");
      Token name = expect_ident();
      check_name(name);
      if (!names.insert(name.text).second)
        throw ParseError(name.line, name.col, "duplicate declaration \"" + name.text + "\"");
      if (is_test)
        doc.tests.push_back(parse_body_test(name, doc));
      else
        doc.nets.push_back(parse_body_net(name, doc));
    }
    return doc;
  }

private:
  Token expect(Tok k, const std::string& what) {
    Token t = lex_.take();
    if (t.kind != k) throw ParseError(t.line, t.col, "expected " + what + ", got \"" + t.text + "\"");
    return t;
  }

  Token expect_ident() { return expect(Tok::Ident, "identifier"); }

  void check_name(const Token& t) {
    if (reserved_words().count(t.text))
      throw ParseError(t.line, t.col, "\"" + t.text + "\" is a reserved word");
  }

  Token expect_keyword(const std::string& kw) {
    Token t = expect_ident();
    if (t.text != kw) throw ParseError(t.line, t.col, "expected \"" + kw + "\", got \"" + t.text + "\"");
    return t;
  }

  std::vector<Token> ident_list_until_semi(std::size_t min_count, const std::string& what) {
    std::vector<Token> out;
    while (lex_.peek().kind == Tok::Ident) out.push_back(lex_.take());
    Token semi = expect(Tok::Semi, "';'");
    if (out.size() < min_count)
      throw ParseError(semi.line, semi.col, "expected at least " + std::to_string(min_count) + " " + what);
    return out;
  }

  struct RawBody {
    Token name;
    std::vector<Token> alphabet, places, initial, tick;
    struct RawTrans {
      Token id;
      std::vector<Token> pre, post;
      std::vector<Token> labels;  // one, or the braced shorthand list
    };
    std::vector<RawTrans> trans;
    bool has_tick = false;
  };

  RawBody parse_body(const Token& name, bool is_test) {
    RawBody raw;
    raw.name = name;
    expect(Tok::LBrace, "'{'");
    expect_keyword("alphabet");
    raw.alphabet = ident_list_until_semi(1, "alphabet labels");
    expect_keyword("places");
    raw.places = ident_list_until_semi(1, "places");
    expect_keyword("initial");
    raw.initial = ident_list_until_semi(1, "initial places");
    while (lex_.peek().kind == Tok::Ident && lex_.peek().text == "trans") {
      lex_.take();
      RawBody::RawTrans t;
      t.id = expect_ident();
      check_name(t.id);
      expect(Tok::Colon, "':'");
      expect(Tok::LBrace, "'{'");
      while (lex_.peek().kind == Tok::Ident) t.pre.push_back(lex_.take());
      expect(Tok::RBrace, "'}'");
      expect(Tok::Dash, "'-'");
      if (lex_.peek().kind == Tok::LBrace) {
        lex_.take();
        t.labels.push_back(expect_ident());
        while (lex_.peek().kind == Tok::Comma) {
          lex_.take();
          t.labels.push_back(expect_ident());
        }
        expect(Tok::RBrace, "'}'");
      } else {
        t.labels.push_back(expect_ident());
      }
      expect(Tok::Arrow, "'->'");
      expect(Tok::LBrace, "'{'");
      while (lex_.peek().kind == Tok::Ident) t.post.push_back(lex_.take());
      expect(Tok::RBrace, "'}'");
      expect(Tok::Semi, "';'");
      if (t.pre.empty()) throw ParseError(t.id.line, t.id.col, "transition with empty preset");
      if (t.post.empty()) throw ParseError(t.id.line, t.id.col, "transition with empty postset");
      raw.trans.push_back(std::move(t));
    }
    if (lex_.peek().kind == Tok::Ident && lex_.peek().text == "tick") {
      Token tk = lex_.take();
      if (!is_test) throw ParseError(tk.line, tk.col, "tick places in a plain net");
      raw.has_tick = true;
      while (lex_.peek().kind == Tok::Ident) raw.tick.push_back(lex_.take());
      expect(Tok::Semi, "';'");
    } else if (is_test) {
      Token t = lex_.peek();
      throw ParseError(t.line, t.col, "test without a tick clause");
    }
    expect(Tok::RBrace, "'}'");
    return raw;
  }

  Net build_net(const RawBody& raw, Document& doc) {
    NetBuilder b(raw.name.text);
    std::set<std::string> alpha;
    for (const auto& tok : raw.alphabet) {
      if (tok.text == "tau") throw ParseError(tok.line, tok.col, "tau in alphabet");
      try {
        b.letter(tok.text);
      } catch (const StructureError& e) {
        throw ParseError(tok.line, tok.col, e.what());
      }
      if (!alpha.insert(tok.text).second)
        throw ParseError(tok.line, tok.col, "duplicate alphabet label \"" + tok.text + "\"");
    }
    std::set<std::string> declared;
    for (const auto& tok : raw.places) {
      check_name(tok);
      if (!declared.insert(tok.text).second)
        throw ParseError(tok.line, tok.col, "duplicate place \"" + tok.text + "\"");
      b.place(tok.text);
    }
    auto resolve_places = [&](const std::vector<Token>& toks) {
      std::vector<std::string> out;
      for (const auto& tok : toks) {
        if (!declared.count(tok.text))
          throw ParseError(tok.line, tok.col, "undeclared place \"" + tok.text + "\"");
        out.push_back(tok.text);
      }
      return out;
    };
    b.initial(resolve_places(raw.initial));

    std::set<std::string> ids;
    std::set<std::tuple<std::vector<std::string>, std::string, std::vector<std::string>>> triples;
    for (const auto& t : raw.trans) {
      auto pre = resolve_places(t.pre);
      auto post = resolve_places(t.post);
      const bool shorthand = t.labels.size() > 1;
      for (const auto& lab : t.labels) {
        if (lab.text != "tau" && !alpha.count(lab.text))
          throw ParseError(lab.line, lab.col, "label \"" + lab.text + "\" not in alphabet");
        std::string id = shorthand ? t.id.text + "@" + lab.text : t.id.text;
        if (!ids.insert(id).second)
          throw ParseError(t.id.line, t.id.col, "duplicate transition id \"" + id + "\"");
        auto spre = pre, spost = post;
        std::sort(spre.begin(), spre.end());
        std::sort(spost.begin(), spost.end());
        if (!triples.insert({spre, lab.text, spost}).second) {
          doc.warnings.push_back({lab.line, lab.col,
                                  raw.name.text + ": duplicate transition (pre," + lab.text +
                                      ",post) merged into the earlier one"});
          continue;
        }
        b.trans(id, pre, lab.text, post);
      }
    }
    Net net;
    try {
      net = b.build();
    } catch (const StructureError& e) {
      throw ParseError(raw.name.line, raw.name.col, e.what());
    }
    auto cf = is_contact_free(net);
    if (!cf.ok)
      throw ParseError(raw.name.line, raw.name.col,
                       "net " + net.name + " is not contact-free (transition " +
                           cf.witness->transition_id + ")");
    return net;
  }

  Net parse_body_net(const Token& name, Document& doc) { return build_net(parse_body(name, false), doc); }

  Test parse_body_test(const Token& name, Document& doc) {
    RawBody raw = parse_body(name, true);
    Test t;
    t.net = build_net(raw, doc);
    t.tick = IndexSet(t.net.place_count());
    for (const auto& tok : raw.tick) {
      auto idx = t.net.find_place(tok.text);
      if (!idx) throw ParseError(tok.line, tok.col, "undeclared tick place \"" + tok.text + "\"");
      t.tick.set(*idx);
    }
    if (t.tick.empty())
      doc.warnings.push_back({raw.name.line, raw.name.col,
                              t.net.name + ": no tick places, every finite run of a composition fails"});
    return t;
  }

  Lexer lex_;
};

}  // namespace textio_detail

inline Document parse(const std::string& text) { return textio_detail::Parser(text).run(); }

namespace textio_detail {

inline void serialize_body(const Net& n, const IndexSet* tick, std::string& out) {
  out += "  alphabet";
  for (const auto& a : n.alphabet) out += " " + a.name();
  out += ";\n  places";
  for (const auto& p : n.places) out += " " + p;
  out += ";\n  initial";
  n.initial.for_each([&](std::size_t i) { out += " " + n.places[i]; });
  out += ";\n";
  for (const auto& t : n.transitions) {
    out += "  trans " + t.id + ": {";
    bool first = true;
    t.pre.for_each([&](std::size_t i) {
      out += (first ? "" : " ") + n.places[i];
      first = false;
    });
    out += "} -" + t.label.name() + "-> {";
    first = true;
    t.post.for_each([&](std::size_t i) {
      out += (first ? "" : " ") + n.places[i];
      first = false;
    });
    out += "};\n";
  }
  if (tick) {
    out += "  tick";
    tick->for_each([&](std::size_t i) { out += " " + n.places[i]; });
    out += ";\n";
  }
}

}  // namespace textio_detail

inline std::string serialize(const Document& doc) {
  std::string out;
  for (const auto& n : doc.nets) {
    out += "net " + n.name + " {\n";
    textio_detail::serialize_body(n, nullptr, out);
    out += "}\n";
  }
  for (const auto& t : doc.tests) {
    out += "test " + t.net.name + " {\n";
    textio_detail::serialize_body(t.net, &t.tick, out);
    out += "}\n";
  }
  return out;
}

inline bool structurally_equal(const Document& a, const Document& b) {
  if (a.nets.size() != b.nets.size() || a.tests.size() != b.tests.size()) return false;
  for (std::size_t i = 0; i < a.nets.size(); ++i)
    if (!structurally_equal(a.nets[i], b.nets[i])) return false;
  for (std::size_t i = 0; i < a.tests.size(); ++i)
    if (!structurally_equal(a.tests[i].net, b.tests[i].net) || !(a.tests[i].tick == b.tests[i].tick))
      return false;
  return true;
}

}  // namespace chp
