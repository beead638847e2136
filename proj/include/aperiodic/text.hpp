#pragma once

// Text forms for exact values.
//
//   GoldenInt   "m+n*t"          e.g. "3+2*t", "-1+1*t"
//   GoldenNum   "a+b*s5"         e.g. "1/2+1/2*s5"
//   pretty      tau basis        e.g. "t-1", "2-t", "1/2+3/2*t"
//   Window      "(-1,t-1]", "[0, 5)"
//
// The parser accepts any expression built from rationals, t (tau), s5 (sqrt 5),
// + - * / and parentheses, so each printed form parses back to the same value.

#include "golden.hpp"
#include "interval.hpp"

#include <cctype>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace aperiodic {

struct ParseError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

namespace detail {

class ExprParser {
 public:
  explicit ExprParser(std::string_view s) : s_(s) {}

  GoldenNum parse_all() {
    GoldenNum v = expr();
    skip();
    if (pos_ != s_.size()) fail("trailing characters");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("cannot parse '" + std::string(s_) + "': " + what);
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  bool eat_word(std::string_view w) {
    skip();
    if (s_.substr(pos_, w.size()) != w) return false;
    const std::size_t end = pos_ + w.size();
    if (end < s_.size() && std::isalnum(static_cast<unsigned char>(s_[end]))) return false;
    pos_ = end;
    return true;
  }
  bool starts_factor() {
    skip();
    if (pos_ >= s_.size()) return false;
    const char c = s_[pos_];
    return std::isdigit(static_cast<unsigned char>(c)) || c == '(' || c == 't' || c == 's' || c == '.';
  }

  GoldenNum expr() {
    GoldenNum v = term();
    for (;;) {
      if (eat('+')) {
        v += term();
      } else if (eat('-')) {
        v -= term();
      } else {
        return v;
      }
    }
  }

  GoldenNum term() {
    GoldenNum v = unary();
    for (;;) {
      if (eat('*')) {
        v *= unary();
      } else if (eat('/')) {
        GoldenNum d = unary();
        if (d.is_zero()) fail("division by zero");
        v /= d;
      } else if (starts_factor()) {
        v *= factor();  // juxtaposition: "2t"
      } else {
        return v;
      }
    }
  }

  GoldenNum unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return factor();
  }

  GoldenNum factor() {
    skip();
    if (eat('(')) {
      GoldenNum v = expr();
      if (!eat(')')) fail("missing ')'");
      return v;
    }
    if (eat_word("tau") || eat_word("t")) return GoldenNum::tau();
    if (eat_word("sqrt5") || eat_word("s5")) return GoldenNum::sqrt5();
    return number();
  }

  GoldenNum number() {
    skip();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    std::string digits(s_.substr(start, pos_ - start));
    Integer den = 1;
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      const std::size_t fstart = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      const std::string frac(s_.substr(fstart, pos_ - fstart));
      digits += frac;
      for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    }
    if (digits.empty()) fail("expected a number");
    return GoldenNum(Rational(Integer(digits), den));
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

inline std::string rational_text(const Rational& r) {
  std::ostringstream os;
  os << boost::multiprecision::numerator(r);
  if (boost::multiprecision::denominator(r) != 1) os << '/' << boost::multiprecision::denominator(r);
  return os.str();
}

// "c*sym" with the coefficient 1 suppressed.
inline std::string coefficient_term(const Rational& c, const char* sym) {
  const Rational a = c < 0 ? Rational(-c) : c;
  return a == 1 ? std::string(sym) : rational_text(a) + "*" + sym;
}

}  // namespace detail

inline GoldenNum parse_golden(std::string_view s) { return detail::ExprParser(s).parse_all(); }

inline GoldenInt parse_golden_int(std::string_view s) {
  auto v = parse_golden(s).to_golden_int();
  if (!v) throw ParseError("'" + std::string(s) + "' is not an element of Z[tau]");
  return *v;
}

/// Canonical "m+n*t".
inline std::string format_golden_int(GoldenInt x) {
  const Integer n = x.n();
  std::ostringstream os;
  os << x.m() << (n < 0 ? "-" : "+") << (n < 0 ? Integer(-n) : n) << "*t";
  return os.str();
}

/// Canonical "a+b*s5".
inline std::string format_golden(const GoldenNum& v) {
  const Rational& b = v.sqrt5_part();
  return detail::rational_text(v.rational_part()) + (b < 0 ? "-" : "+") +
         detail::rational_text(b < 0 ? Rational(-b) : b) + "*s5";
}

/// Short tau-basis form: "t-1", "2-t", "1/2+3/2*t", "0".
inline std::string format_pretty(const GoldenNum& v) {
  auto [p, q] = v.tau_coefficients();
  if (q == 0) return detail::rational_text(p);
  const std::string tau_term = detail::coefficient_term(q, "t");
  if (p == 0) return (q < 0 ? "-" : "") + tau_term;
  if (p < 0 && q > 0) return tau_term + "-" + detail::rational_text(-p);
  return detail::rational_text(p) + (q < 0 ? "-" : "+") + tau_term;
}

inline std::string format_pretty(GoldenInt x) { return format_pretty(GoldenNum(x)); }

inline Window parse_window(std::string_view s) {
  std::string t;
  for (char c : s) {
    if (!std::isspace(static_cast<unsigned char>(c))) t.push_back(c);
  }
  if (t.size() < 5) throw ParseError("window '" + std::string(s) + "' is too short");
  const char open = t.front();
  const char close = t.back();
  if ((open != '(' && open != '[') || (close != ')' && close != ']')) {
    throw ParseError("window '" + std::string(s) + "' needs bracket ends");
  }
  const std::string body = t.substr(1, t.size() - 2);
  int depth = 0;
  std::size_t comma = std::string::npos;
  for (std::size_t i = 0; i < body.size(); ++i) {
    if (body[i] == '(') ++depth;
    if (body[i] == ')') --depth;
    if (body[i] == ',' && depth == 0) {
      if (comma != std::string::npos) throw ParseError("window has more than two ends");
      comma = i;
    }
  }
  if (comma == std::string::npos) throw ParseError("window '" + std::string(s) + "' needs a comma");
  GoldenNum lo = parse_golden(body.substr(0, comma));
  GoldenNum hi = parse_golden(body.substr(comma + 1));
  if (!(lo < hi)) throw ParseError("window '" + std::string(s) + "' has lo >= hi");
  return {lo, hi, open == '[', close == ']'};
}

inline std::string format_window(const Window& w) {
  return std::string(w.lo_closed() ? "[" : "(") + format_pretty(w.lo()) + "," + format_pretty(w.hi()) +
         (w.hi_closed() ? "]" : ")");
}

}  // namespace aperiodic
