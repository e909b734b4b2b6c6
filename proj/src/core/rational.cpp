#include "rational.hpp"

#include <cctype>
#include <limits>

#include "error.hpp"

namespace wfalab {
namespace {

constexpr __int128 kMax = std::numeric_limits<std::int64_t>::max();

__int128 gcd128(__int128 a, __int128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    const __int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

std::int64_t gcd64(std::int64_t a, std::int64_t b) {
  std::uint64_t x = a < 0 ? 0 - static_cast<std::uint64_t>(a) : a;
  std::uint64_t y = b < 0 ? 0 - static_cast<std::uint64_t>(b) : b;
  while (y != 0) {
    const std::uint64_t t = x % y;
    x = y;
    y = t;
  }
  return static_cast<std::int64_t>(x);
}

}  // namespace

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid argument";
    case ErrorCode::kDomain: return "domain error";
    case ErrorCode::kOverflow: return "overflow";
    case ErrorCode::kParse: return "parse error";
    case ErrorCode::kIo: return "i/o error";
    case ErrorCode::kPrecondition: return "precondition violated";
    case ErrorCode::kGuard: return "size guard exceeded";
    case ErrorCode::kUnbounded: return "unbounded";
    case ErrorCode::kInternal: return "internal error";
  }
  return "unknown error";
}

Rational::Rational(std::int64_t n, std::int64_t d) {
  if (d == 0) fail(ErrorCode::kDomain, "rational with zero denominator");
  *this = from_wide(n, d);
}

Rational Rational::from_wide(__int128 n, __int128 d) {
  if (d < 0) {
    n = -n;
    d = -d;
  }
  const __int128 g = gcd128(n, d);
  if (g > 1) {
    n /= g;
    d /= g;
  }
  if (n > kMax || n < -kMax || d > kMax) {
    fail(ErrorCode::kOverflow, "rational arithmetic exceeds 64-bit range");
  }
  Rational r;
  r.num_ = static_cast<std::int64_t>(n);
  r.den_ = static_cast<std::int64_t>(d);
  return r;
}

Rational Rational::abs() const {
  Rational r = *this;
  if (r.num_ < 0) r.num_ = -r.num_;
  return r;
}

Rational Rational::operator-() const {
  Rational r = *this;
  r.num_ = -r.num_;
  return r;
}

Rational& Rational::operator+=(const Rational& o) {
  if (den_ == 1 && o.den_ == 1) {
    std::int64_t s;
    if (!__builtin_add_overflow(num_, o.num_, &s)) {
      num_ = s;
      return *this;
    }
  }
  if (den_ == o.den_) {
    *this = from_wide(static_cast<__int128>(num_) + o.num_, den_);
    return *this;
  }
  const std::int64_t g = gcd64(den_, o.den_);
  const __int128 n = static_cast<__int128>(num_) * (o.den_ / g) +
                     static_cast<__int128>(o.num_) * (den_ / g);
  const __int128 d = static_cast<__int128>(den_) * (o.den_ / g);
  *this = from_wide(n, d);
  return *this;
}

Rational& Rational::operator-=(const Rational& o) { return *this += -o; }

Rational& Rational::operator*=(const Rational& o) {
  if (den_ == 1 && o.den_ == 1) {
    std::int64_t p;
    if (!__builtin_mul_overflow(num_, o.num_, &p)) {
      num_ = p;
      return *this;
    }
  }
  if (num_ == 0 || o.num_ == 0) {
    num_ = 0;
    den_ = 1;
    return *this;
  }
  const std::int64_t g1 = gcd64(num_, o.den_);
  const std::int64_t g2 = gcd64(o.num_, den_);
  const __int128 n = static_cast<__int128>(num_ / g1) * (o.num_ / g2);
  const __int128 d = static_cast<__int128>(den_ / g2) * (o.den_ / g1);
  if (n > kMax || n < -kMax || d > kMax) {
    fail(ErrorCode::kOverflow, "rational arithmetic exceeds 64-bit range");
  }
  num_ = static_cast<std::int64_t>(n);
  den_ = static_cast<std::int64_t>(d);
  return *this;
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.num_ == 0) fail(ErrorCode::kDomain, "division by zero");
  Rational inv;
  inv.num_ = o.num_ < 0 ? -o.den_ : o.den_;
  inv.den_ = o.num_ < 0 ? -o.num_ : o.num_;
  return *this *= inv;
}

std::string Rational::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

std::int64_t ceil(const Rational& r) {
  std::int64_t q = r.num() / r.den();
  if (r.num() % r.den() != 0 && r.num() > 0) ++q;
  return q;
}

Rational Rational::parse(std::string_view text) {
  auto bad = [&]() -> Rational {
    fail(ErrorCode::kParse, "not a rational number: '" + std::string(text) + "'");
  };
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) return bad();

  auto parse_int = [&](std::string_view s, bool allow_sign) -> __int128 {
    bool neg = false;
    if (allow_sign && !s.empty() && (s.front() == '-' || s.front() == '+')) {
      neg = s.front() == '-';
      s.remove_prefix(1);
    }
    if (s.empty()) bad();
    __int128 v = 0;
    for (char c : s) {
      if (!std::isdigit(static_cast<unsigned char>(c))) bad();
      v = v * 10 + (c - '0');
      if (v > kMax) fail(ErrorCode::kOverflow, "rational literal too large: '" + std::string(text) + "'");
    }
    return neg ? -v : v;
  };

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    const __int128 n = parse_int(text.substr(0, slash), true);
    const __int128 d = parse_int(text.substr(slash + 1), false);
    if (d == 0) fail(ErrorCode::kDomain, "rational with zero denominator");
    return from_wide(n, d);
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view ip = text.substr(0, dot);
    std::string_view fp = text.substr(dot + 1);
    bool neg = !ip.empty() && ip.front() == '-';
    if (!ip.empty() && (ip.front() == '-' || ip.front() == '+')) ip.remove_prefix(1);
    const __int128 whole = ip.empty() ? 0 : parse_int(ip, false);
    if (fp.empty() || fp.size() > 17) bad();
    const __int128 frac = parse_int(fp, false);
    __int128 scale = 1;
    for (std::size_t i = 0; i < fp.size(); ++i) scale *= 10;
    __int128 n = whole * scale + frac;
    return from_wide(neg ? -n : n, scale);
  }
  return from_wide(parse_int(text, true), 1);
}

}  // namespace wfalab
