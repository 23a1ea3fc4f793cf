#include "sinefactor/parse.hpp"

#include <cctype>
#include <cmath>
#include <set>

#include "sinefactor/errors.hpp"

namespace sinefactor {

namespace {

enum class Tok { Number, Ident, Plus, Minus, Star, Caret, Slash, LParen, RParen, End };

struct Token {
  Tok kind;
  std::string text;
  size_t pos;
};

std::vector<Token> tokenize(const std::string& s) {
  std::vector<Token> out;
  size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    size_t start = i;
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && i + 1 < s.size() && std::isdigit(static_cast<unsigned char>(s[i + 1])))) {
      while (i < s.size() && (std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '.')) ++i;
      if (i < s.size() && (s[i] == 'e' || s[i] == 'E') && i + 1 < s.size() &&
          (std::isdigit(static_cast<unsigned char>(s[i + 1])) || s[i + 1] == '+' ||
           s[i + 1] == '-')) {
        ++i;
        if (s[i] == '+' || s[i] == '-') ++i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      }
      out.push_back({Tok::Number, s.substr(start, i - start), start});
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (i < s.size() &&
             (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_'))
        ++i;
      out.push_back({Tok::Ident, s.substr(start, i - start), start});
      continue;
    }
    Tok k;
    switch (c) {
      case '+': k = Tok::Plus; break;
      case '-': k = Tok::Minus; break;
      case '*': k = Tok::Star; break;
      case '^': k = Tok::Caret; break;
      case '/': k = Tok::Slash; break;
      case '(': k = Tok::LParen; break;
      case ')': k = Tok::RParen; break;
      default:
        throw SyntaxError(std::string("unexpected character '") + c + "'", start);
    }
    out.push_back({k, s.substr(start, 1), start});
    ++i;
  }
  out.push_back({Tok::End, "", s.size()});
  return out;
}

bool is_reserved(const std::string& name) {
  return name == "z" || name == "i" || name == "sin" || name == "cos" || name == "exp";
}

class Parser {
 public:
  Parser(std::vector<Token> toks, BasisPtr basis) : toks_(std::move(toks)), basis_(std::move(basis)) {}

  ExpSum parse() {
    ExpSum r = parse_sum();
    expect(Tok::End, "end of input");
    return r;
  }

 private:
  const Token& cur() const { return toks_[idx_]; }
  void advance() { ++idx_; }
  bool accept(Tok k) {
    if (cur().kind == k) {
      advance();
      return true;
    }
    return false;
  }
  void expect(Tok k, const std::string& what) {
    if (cur().kind != k)
      throw SyntaxError("expected " + what + ", got '" + cur().text + "'", cur().pos);
    advance();
  }
  bool accept_ident(const std::string& name) {
    if (cur().kind == Tok::Ident && cur().text == name) {
      advance();
      return true;
    }
    return false;
  }

  ExpSum constant(Complex c) {
    return ExpSum::make_allow_empty(basis_, {{FreqVector(basis_->size()), c}});
  }

  ExpSum parse_sum() {
    bool neg = accept(Tok::Minus);
    ExpSum acc = parse_prod();
    if (neg) acc = acc.scaled(-1.0);
    for (;;) {
      if (accept(Tok::Plus))
        acc = acc.plus(parse_prod());
      else if (accept(Tok::Minus))
        acc = acc.plus(parse_prod().scaled(-1.0));
      else
        return acc;
    }
  }

  ExpSum parse_prod() {
    ExpSum acc = parse_pow();
    while (accept(Tok::Star)) acc = acc.multiply(parse_pow());
    return acc;
  }

  ExpSum parse_pow() {
    ExpSum base = parse_atom();
    if (accept(Tok::Caret)) {
      const Token& t = cur();
      expect(Tok::Number, "an integer exponent");
      if (t.text.find('.') != std::string::npos || t.text.find('e') != std::string::npos)
        throw SyntaxError("exponent must be a plain integer", t.pos);
      long long e = std::stoll(t.text);
      if (e < 0 || e > 64) throw SyntaxError("exponent out of range 0..64", t.pos);
      ExpSum acc = constant(Complex(1.0, 0.0));
      for (long long k = 0; k < e; ++k) acc = acc.multiply(base);
      return acc;
    }
    return base;
  }

  ExpSum parse_atom() {
    const Token& t = cur();
    if (t.kind == Tok::LParen) {
      advance();
      ExpSum inner = parse_sum();
      expect(Tok::RParen, "')'");
      return inner;
    }
    if (t.kind == Tok::Number) {
      advance();
      double v = std::stod(t.text);
      if (accept_ident("i")) return constant(Complex(0.0, v));
      return constant(Complex(v, 0.0));
    }
    if (t.kind == Tok::Ident) {
      if (t.text == "i") {
        advance();
        return constant(Complex(0.0, 1.0));
      }
      if (t.text == "sin" || t.text == "cos") return parse_trig(t.text == "sin");
      if (t.text == "exp") return parse_exponential();
      throw SyntaxError("basis constant '" + t.text + "' cannot stand alone; use it inside a "
                        "sin/cos/exp frequency",
                        t.pos);
    }
    throw SyntaxError("expected a term, got '" + t.text + "'", t.pos);
  }

  // rational token with optional sign, optionally NUMBER '/' NUMBER
  Rational parse_rational() {
    bool neg = accept(Tok::Minus);
    const Token& t = cur();
    expect(Tok::Number, "a rational number");
    if (t.text.find('e') != std::string::npos || t.text.find('E') != std::string::npos)
      throw SyntaxError("exponent notation is not allowed in an exact frequency", t.pos);
    Rational r = Rational::parse(t.text);
    if (cur().kind == Tok::Slash) {
      advance();
      const Token& d = cur();
      expect(Tok::Number, "a denominator");
      if (d.text.find('.') != std::string::npos)
        throw SyntaxError("denominator must be an integer", d.pos);
      r = r / Rational::parse(d.text);
    }
    return neg ? -r : r;
  }

  // coefficient of z inside sin/cos: rationals and basis names joined by '*',
  // ending right before "* z"
  struct SineCoef {
    Rational rational{1};
    std::vector<std::string> names;
  };

  SineCoef parse_sine_coef() {
    SineCoef c;
    for (;;) {
      const Token& t = cur();
      if (t.kind == Tok::Number) {
        c.rational = c.rational * parse_rational();
      } else if (t.kind == Tok::Ident && !is_reserved(t.text)) {
        c.names.push_back(t.text);
        advance();
      } else if (t.kind == Tok::Ident && t.text == "z") {
        throw SyntaxError("frequency must come before '*z'", t.pos);
      } else {
        throw SyntaxError(
            "frequency must be a real rational optionally times basis constants, got '" + t.text +
                "'",
            t.pos);
      }
      if (cur().kind == Tok::Star && toks_[idx_ + 1].kind == Tok::Ident &&
          toks_[idx_ + 1].text == "z") {
        advance();  // '*'
        advance();  // 'z'
        return c;
      }
      expect(Tok::Star, "'*'");
    }
  }

  // frequency vector for sin(arg*z): arg/(2*pi) must reduce to
  // (rational/2) * (one basis entry or the implicit unit)
  FreqVector sine_frequency(SineCoef c, size_t err_pos) {
    auto pi_it = std::find(c.names.begin(), c.names.end(), "pi");
    if (pi_it == c.names.end())
      throw SyntaxError(
          "sine/cosine frequency needs a factor 'pi' so that alpha/(2*pi) stays in the basis",
          err_pos);
    c.names.erase(pi_it);
    if (c.names.size() > 1)
      throw SyntaxError("sine/cosine frequency may use at most one basis constant besides pi",
                        err_pos);
    std::string name = c.names.empty() ? "one" : c.names.front();
    auto index = basis_->index_of(name);
    if (!index)
      throw BasisMismatch("frequency constant '" + name + "' is not in the declared basis");
    return FreqVector::unit(basis_->size(), *index, c.rational * Rational(1, 2));
  }

  ExpSum parse_trig(bool is_sin) {
    advance();  // sin / cos
    size_t pos = cur().pos;
    expect(Tok::LParen, "'('");
    SineCoef coef = parse_sine_coef();
    if (coef.rational.num <= 0)
      throw BadFactor("sine/cosine frequency must be positive");
    double beta = 0.0;
    if (cur().kind == Tok::Plus || cur().kind == Tok::Minus) {
      bool minus = cur().kind == Tok::Minus;
      advance();
      const Token& b = cur();
      expect(Tok::Number, "a real offset");
      beta = std::stod(b.text) * (minus ? -1.0 : 1.0);
      if (cur().kind == Tok::Ident && cur().text == "i")
        throw SyntaxError("offset must be real", cur().pos);
    }
    expect(Tok::RParen, "')'");

    FreqVector omega = sine_frequency(std::move(coef), pos);
    Complex eib = std::exp(Complex(0.0, beta));
    if (is_sin) {
      const Complex inv_2i(0.0, -0.5);
      return ExpSum::make(basis_, {{omega, eib * inv_2i}, {-omega, -std::conj(eib) * inv_2i}});
    }
    return ExpSum::make(basis_, {{omega, eib * 0.5}, {-omega, std::conj(eib) * 0.5}});
  }

  ExpSum parse_exponential() {
    advance();  // exp
    expect(Tok::LParen, "'('");
    const Token& two = cur();
    expect(Tok::Number, "'2'");
    if (two.text != "2") throw SyntaxError("exp argument must start with '2*pi*i*'", two.pos);
    expect(Tok::Star, "'*'");
    if (!accept_ident("pi")) throw SyntaxError("exp argument must start with '2*pi*i*'", cur().pos);
    expect(Tok::Star, "'*'");
    if (!accept_ident("i")) throw SyntaxError("exp argument must start with '2*pi*i*'", cur().pos);
    expect(Tok::Star, "'*'");

    Rational r(1);
    std::string name;
    if (cur().kind == Tok::Number || cur().kind == Tok::Minus) {
      r = parse_rational();
      if (accept(Tok::Star) && !(cur().kind == Tok::Ident && cur().text == "z")) {
        const Token& t = cur();
        if (t.kind != Tok::Ident || is_reserved(t.text))
          throw SyntaxError("expected a basis constant in the exp frequency", t.pos);
        name = t.text;
        advance();
        expect(Tok::Star, "'*'");
      }
    } else if (cur().kind == Tok::Ident && !is_reserved(cur().text)) {
      name = cur().text;
      advance();
      expect(Tok::Star, "'*'");
    } else {
      throw SyntaxError("expected a rational or basis constant in the exp frequency", cur().pos);
    }
    if (!accept_ident("z")) throw SyntaxError("exp argument must end with '*z'", cur().pos);
    expect(Tok::RParen, "')'");

    std::string entry = name.empty() ? "one" : name;
    auto index = basis_->index_of(entry);
    if (!index)
      throw BasisMismatch("frequency constant '" + entry + "' is not in the declared basis");
    FreqVector omega = FreqVector::unit(basis_->size(), *index, r);
    return ExpSum::make(basis_, {{omega, Complex(1.0, 0.0)}});
  }

  std::vector<Token> toks_;
  BasisPtr basis_;
  size_t idx_ = 0;
};

}  // namespace

ExpSum parse_expression(const std::string& text, const ParseOptions& opts) {
  std::vector<Token> toks = tokenize(text);

  // assemble the basis: implicit "one", declared entries, then referenced builtins
  std::vector<std::pair<std::string, std::string>> entries;
  std::set<std::string> have;
  auto push = [&](const std::string& name, const std::string& decimal) {
    if (have.insert(name).second) entries.emplace_back(name, decimal);
  };
  push("one", "1");
  for (const auto& [name, decimal] : opts.basis_decls) push(name, decimal);
  for (const auto& t : toks) {
    if (t.kind != Tok::Ident || is_reserved(t.text) || have.count(t.text)) continue;
    if (is_builtin_constant(t.text))
      push(t.text, builtin_constant_decimal(t.text));
    else
      throw SyntaxError("unknown name '" + t.text + "'; declare it with --basis " + t.text +
                            "=<decimal>",
                        t.pos);
  }
  BasisPtr basis = make_basis(std::move(entries), true, opts.precision);
  ExpSum result = Parser(std::move(toks), std::move(basis)).parse();
  if (result.empty()) throw EmptySum("expression cancels to the zero sum");
  return result;
}

}  // namespace sinefactor
