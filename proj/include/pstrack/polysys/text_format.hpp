#pragma once

// Plain-text system and point files.
//
//   n 2 d 8
//   # comment
//   (1,0)*x0^2*x1 - 2.5*x1 + {(0,0),(1,0)};
//   x0 + x1*t^2 - 1;
//
// One polynomial per ';'-terminated statement. A term is a product of
// factors: a complex literal (re,im), a real literal, t or t^k, a variable
// xi or xi^e, or a coefficient series {(c0),(c1),...} in t. Every term is one
// monomial (terms are not merged). The header degree d fixes the length of
// every coefficient series.
//
// Point files hold a header `n <count>` followed by n complex literals.

#include <cctype>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "pstrack/errors.hpp"
#include "pstrack/polysys/system.hpp"
#include "pstrack/xprec.hpp"

namespace pstrack {

namespace detail {

class text_cursor {
 public:
  explicit text_cursor(std::string_view text) : text_(text) {}

  void skip_space() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  bool at_end() {
    skip_space();
    return pos_ >= text_.size();
  }

  char peek() {
    skip_space();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  bool accept(char c) {
    if (peek() != c) return false;
    advance();
    return true;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  [[noreturn]] void fail(const std::string& what) const { throw parse_error(what, line_, column_); }

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

  std::uint64_t integer() {
    skip_space();
    const std::size_t start = pos_;
    std::uint64_t v = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      v = v * 10 + static_cast<std::uint64_t>(text_[pos_] - '0');
      if (v > (std::uint64_t{1} << 40)) fail("integer too large");
      advance();
    }
    if (pos_ == start) fail("expected an integer");
    return v;
  }

  /// A decimal literal, optionally signed, returned as text.
  std::string_view number_token(bool allow_sign) {
    skip_space();
    const std::size_t start = pos_;
    auto digit = [&] { return pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])); };
    if (allow_sign && pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) advance();
    if (text_.substr(pos_, 3) == "inf" || text_.substr(pos_, 3) == "nan") {
      for (int k = 0; k < 3; ++k) advance();
      return text_.substr(start, pos_ - start);
    }
    while (digit()) advance();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      advance();
      while (digit()) advance();
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      advance();
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) advance();
      while (digit()) advance();
    }
    if (pos_ == start) fail("expected a number");
    return text_.substr(start, pos_ - start);
  }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

template <xprec::working_real R>
R parse_real_at(text_cursor& in, bool allow_sign) {
  const std::size_t line = in.line();
  const std::size_t column = in.column();
  const std::string_view tok = in.number_token(allow_sign);
  try {
    return xprec::parse_real<R>(tok);
  } catch (const domain_error&) {
    throw parse_error("malformed number '" + std::string(tok) + "'", line, column);
  }
}

/// (re,im)
template <xprec::working_real R>
xprec::xcomplex<R> parse_complex(text_cursor& in) {
  in.expect('(');
  const R re = parse_real_at<R>(in, true);
  in.expect(',');
  const R im = parse_real_at<R>(in, true);
  in.expect(')');
  return {re, im};
}

template <xprec::working_real R>
std::string format_complex(const xprec::xcomplex<R>& z) {
  return "(" + xprec::to_string(z.re) + "," + xprec::to_string(z.im) + ")";
}

template <xprec::working_real R>
monomial<R> parse_term(text_cursor& in, std::size_t n, std::size_t degree, bool negate) {
  using C = xprec::xcomplex<R>;
  truncated_series<R> coefficient = truncated_series<R>::constant(C(R(negate ? -1.0 : 1.0)), degree);
  std::vector<std::uint32_t> e(n, 0);
  do {
    const char c = in.peek();
    if (c == '(') {
      coefficient *= parse_complex<R>(in);
    } else if (c == '{') {
      in.expect('{');
      truncated_series<R> s(degree);
      std::size_t k = 0;
      do {
        if (k > degree) in.fail("coefficient series longer than degree + 1");
        s[k++] = parse_complex<R>(in);
      } while (in.accept(','));
      in.expect('}');
      coefficient = convolve(coefficient, s);
    } else if (c == 't') {
      in.advance();
      std::uint64_t k = 1;
      if (in.accept('^')) k = in.integer();
      truncated_series<R> shifted(degree);
      for (std::size_t j = 0; j + k <= degree; ++j) shifted[j + k] = coefficient[j];
      coefficient = std::move(shifted);
    } else if (c == 'x') {
      in.advance();
      const std::size_t line = in.line();
      const std::size_t column = in.column();
      const std::uint64_t index = in.integer();
      if (index >= n)
        throw parse_error("variable x" + std::to_string(index) + " out of range for n = " + std::to_string(n), line,
                          column);
      std::uint64_t power = 1;
      if (in.accept('^')) power = in.integer();
      e[index] += static_cast<std::uint32_t>(power);
    } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      coefficient *= parse_real_at<R>(in, false);
    } else {
      in.fail(c == '\0' ? "unexpected end of input" : std::string("unexpected character '") + c + "'");
    }
  } while (in.accept('*'));
  return monomial<R>::from_exponents(std::move(coefficient), e);
}

}  // namespace detail

/// Parses the text format described at the top of this header.
template <xprec::working_real R>
sparse_system<R> parse_system(std::string_view text) {
  detail::text_cursor in(text);
  if (!in.accept('n')) in.fail("expected header 'n <count> d <degree>'");
  const std::uint64_t n = in.integer();
  if (n == 0) in.fail("variable count must be positive");
  std::uint64_t degree = 0;
  if (in.accept('d')) degree = in.integer();
  std::vector<polynomial<R>> polys;
  while (!in.at_end()) {
    polynomial<R> p;
    bool negate = false;
    if (in.accept('-'))
      negate = true;
    else
      in.accept('+');
    while (true) {
      p.push_back(detail::parse_term<R>(in, n, degree, negate));
      if (in.accept(';')) break;
      if (in.accept('+'))
        negate = false;
      else if (in.accept('-'))
        negate = true;
      else
        in.fail("expected '+', '-' or ';'");
    }
    polys.push_back(std::move(p));
  }
  return sparse_system<R>(n, degree, std::move(polys));
}

/// Writes a system so that parse_system reproduces it bitwise.
template <xprec::working_real R>
std::string format_system(const sparse_system<R>& sys) {
  std::ostringstream out;
  out << "n " << sys.variables() << " d " << sys.degree() << "\n";
  for (const auto& p : sys.polynomials()) {
    bool first = true;
    for (const auto& m : p) {
      if (!first) out << " + ";
      first = false;
      if (m.coefficient.is_constant()) {
        out << detail::format_complex(m.coefficient[0]);
      } else {
        out << "{";
        for (std::size_t k = 0; k <= m.coefficient.degree(); ++k)
          out << (k ? "," : "") << detail::format_complex(m.coefficient[k]);
        out << "}";
      }
      for (std::size_t k = 0; k < m.support.size(); ++k) {
        out << "*x" << m.support[k];
        if (m.exponents[k] != 1) out << "^" << m.exponents[k];
      }
    }
    out << ";\n";
  }
  return out.str();
}

template <xprec::working_real R>
std::vector<xprec::xcomplex<R>> parse_point(std::string_view text) {
  detail::text_cursor in(text);
  if (!in.accept('n')) in.fail("expected header 'n <count>'");
  const std::uint64_t n = in.integer();
  std::vector<xprec::xcomplex<R>> x;
  x.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    if (in.at_end()) in.fail("point has fewer than " + std::to_string(n) + " coordinates");
    x.push_back(detail::parse_complex<R>(in));
  }
  if (!in.at_end()) in.fail("trailing text after the last coordinate");
  return x;
}

template <xprec::working_real R>
std::string format_point(std::span<const xprec::xcomplex<R>> x) {
  std::string out = "n " + std::to_string(x.size()) + "\n";
  for (const auto& z : x) out += detail::format_complex(z) + "\n";
  return out;
}

}  // namespace pstrack
