#pragma once

// Standalone LP-format grammar checker used to validate exported model
// files. Deliberately independent of the writer: it tokenizes the text from
// scratch and accepts the CPLEX LP dialect subset
//   Maximize|Minimize  [label:] expr
//   Subject To         (label: expr sense number)*
//   [Bounds]           (num <= var <= num | var <= num | var = num | var free)*
//   [Generals|Binaries names...]*
//   End
// Throws std::runtime_error on any grammar violation.

#include <cctype>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace lpcheck {

struct Term {
  double coef = 1.0;
  std::string var;
};

struct Constraint {
  std::string name;
  std::vector<Term> terms;
  std::string sense;  // "<=", ">=", "="
  double rhs = 0.0;
};

struct LpModel {
  bool maximize = false;
  std::vector<Term> objective;
  std::vector<Constraint> constraints;
  std::map<std::string, std::pair<double, double>> bounds;
  std::set<std::string> generals;
  std::set<std::string> binaries;

  std::set<std::string> variables() const {
    std::set<std::string> out;
    for (const auto& t : objective) out.insert(t.var);
    for (const auto& c : constraints)
      for (const auto& t : c.terms) out.insert(t.var);
    return out;
  }
};

namespace detail {

struct Token {
  enum Kind { word, number, punct, end } kind = end;
  std::string text;
  double value = 0.0;
};

inline std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

inline bool is_keyword(const Token& t) {
  if (t.kind != Token::word) return false;
  static const std::set<std::string> kw = {"subject", "st",     "bounds", "generals",
                                           "general", "binaries", "binary", "end",
                                           "free"};
  return kw.count(lower(t.text)) > 0;
}

inline bool word_is(const Token& t, const std::string& w) {
  return t.kind == Token::word && lower(t.text) == w;
}

class Parser {
 public:
  explicit Parser(const std::string& text) : text_(text) { advance(); }

  LpModel parse() {
    LpModel model;
    if (word_is(tok_, "maximize") || word_is(tok_, "max")) {
      model.maximize = true;
    } else if (word_is(tok_, "minimize") || word_is(tok_, "min")) {
      model.maximize = false;
    } else {
      fail("expected Maximize or Minimize first");
    }
    advance();

    // optional objective label
    if (tok_.kind == Token::word && !is_keyword(tok_) && peek_is_colon()) {
      advance();  // label
      advance();  // ':'
    }
    model.objective = parse_expr();
    if (model.objective.empty()) fail("empty objective");

    if (word_is(tok_, "subject")) {
      advance();
      if (!word_is(tok_, "to")) fail("expected 'Subject To'");
      advance();
    } else if (word_is(tok_, "st")) {
      advance();
    } else {
      fail("expected 'Subject To' after the objective");
    }

    while (tok_.kind == Token::word && !is_keyword(tok_)) {
      Constraint c;
      c.name = tok_.text;
      advance();
      if (!punct(":")) fail("constraint '" + c.name + "' is missing ':'");
      advance();
      c.terms = parse_expr();
      if (c.terms.empty()) fail("constraint '" + c.name + "' has no terms");
      if (punct("<=") || punct("<"))
        c.sense = "<=";
      else if (punct(">=") || punct(">"))
        c.sense = ">=";
      else if (punct("="))
        c.sense = "=";
      else
        fail("constraint '" + c.name + "' is missing its sense");
      advance();
      c.rhs = parse_signed_number("rhs of '" + c.name + "'");
      model.constraints.push_back(std::move(c));
    }

    if (word_is(tok_, "bounds")) {
      advance();
      while (tok_.kind != Token::end && !section_start()) parse_bound_line(model);
    }

    while (tok_.kind != Token::end && !word_is(tok_, "end")) {
      if (word_is(tok_, "generals") || word_is(tok_, "general")) {
        advance();
        while (tok_.kind == Token::word && !section_start()) {
          model.generals.insert(tok_.text);
          advance();
        }
      } else if (word_is(tok_, "binaries") || word_is(tok_, "binary")) {
        advance();
        while (tok_.kind == Token::word && !section_start()) {
          model.binaries.insert(tok_.text);
          advance();
        }
      } else {
        fail("unexpected token '" + tok_.text + "' before End");
      }
    }
    if (!word_is(tok_, "end")) fail("missing End marker");
    return model;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw std::runtime_error("lp: " + msg); }

  bool punct(const std::string& p) const { return tok_.kind == Token::punct && tok_.text == p; }

  bool section_start() const { return is_keyword(tok_) && !word_is(tok_, "free"); }

  // Sum of optionally signed, optionally coefficiented variables; stops at a
  // sense token, a keyword, a number that ends the expression, or EOF.
  std::vector<Term> parse_expr() {
    std::vector<Term> terms;
    while (true) {
      double sign = 1.0;
      bool saw_sign = false;
      while (punct("+") || punct("-")) {
        if (punct("-")) sign = -sign;
        saw_sign = true;
        advance();
      }
      bool have_coef = false;
      double coef = 1.0;
      if (tok_.kind == Token::number) {
        have_coef = true;
        coef = tok_.value;
        advance();
      }
      if (tok_.kind == Token::word && !is_keyword(tok_)) {
        terms.push_back({sign * coef, tok_.text});
        advance();
        continue;
      }
      if (have_coef) fail("dangling number in expression");
      if (saw_sign) fail("dangling sign in expression");
      return terms;
    }
  }

  double parse_signed_number(const std::string& what) {
    double sign = 1.0;
    while (punct("+") || punct("-")) {
      if (punct("-")) sign = -sign;
      advance();
    }
    if (tok_.kind != Token::number) fail(what + " is not a number");
    double v = sign * tok_.value;
    advance();
    return v;
  }

  void parse_bound_line(LpModel& model) {
    double lo = 0.0;
    bool have_lo = false;
    if (tok_.kind == Token::number || punct("+") || punct("-")) {
      lo = parse_signed_number("lower bound");
      have_lo = true;
      if (!punct("<=")) fail("bound line expects '<=' after the lower bound");
      advance();
    }
    if (tok_.kind != Token::word || is_keyword(tok_)) fail("bound line without a variable");
    std::string var = tok_.text;
    advance();
    double hi = std::numeric_limits<double>::infinity();
    if (punct("<=")) {
      advance();
      hi = parse_signed_number("upper bound of '" + var + "'");
    } else if (punct("=")) {
      advance();
      hi = parse_signed_number("fixed value of '" + var + "'");
      lo = hi;
      have_lo = true;
    } else if (word_is(tok_, "free")) {
      lo = -std::numeric_limits<double>::infinity();
      have_lo = true;
      advance();
    }
    model.bounds[var] = {have_lo ? lo : 0.0, hi};
  }

  bool peek_is_colon() {
    std::size_t save_pos = pos_;
    Token save_tok = tok_;
    advance();
    bool colon = punct(":");
    pos_ = save_pos;
    tok_ = save_tok;
    return colon;
  }

  void advance() { tok_ = next_token(); }

  Token next_token() {
    skip();
    if (pos_ >= text_.size()) return {Token::end, "", 0.0};
    char c = text_[pos_];
    if (c == '<' || c == '>' || c == '=' || c == '+' || c == '-' || c == ':') {
      std::size_t start = pos_++;
      if ((c == '<' || c == '>') && pos_ < text_.size() && text_[pos_] == '=') ++pos_;
      return {Token::punct, text_.substr(start, pos_ - start), 0.0};
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.' ||
              text_[pos_] == 'e' || text_[pos_] == 'E' ||
              ((text_[pos_] == '+' || text_[pos_] == '-') && pos_ > start &&
               (text_[pos_ - 1] == 'e' || text_[pos_ - 1] == 'E'))))
        ++pos_;
      std::string s = text_.substr(start, pos_ - start);
      try {
        return {Token::number, s, std::stod(s)};
      } catch (...) {
        throw std::runtime_error("lp: bad number '" + s + "'");
      }
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                                     text_[pos_] == '_' || text_[pos_] == '.'))
        ++pos_;
      return {Token::word, text_.substr(start, pos_ - start), 0.0};
    }
    throw std::runtime_error(std::string("lp: unexpected character '") + c + "'");
  }

  void skip() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '\\') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        return;
      }
    }
  }

  const std::string& text_;
  std::size_t pos_ = 0;
  Token tok_;
};

}  // namespace detail

inline LpModel parse_lp(const std::string& text) { return detail::Parser(text).parse(); }

}  // namespace lpcheck
