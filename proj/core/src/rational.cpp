#include "gwhk/rational.hpp"

#include <charconv>
#include <limits>
#include <numeric>
#include <ostream>

#include "gwhk/error.hpp"

namespace gwhk {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument: return "invalid-argument";
    case ErrorKind::kParse: return "parse-error";
    case ErrorKind::kRejectionBudgetExhausted: return "rejection-budget-exhausted";
    case ErrorKind::kDepthExceeded: return "depth-exceeded";
    case ErrorKind::kClippedIsland: return "clipped-island";
    case ErrorKind::kSubsetTooLarge: return "subset-too-large";
    case ErrorKind::kInfeasibleSize: return "infeasible-size";
    case ErrorKind::kUnknownVertex: return "unknown-vertex";
    case ErrorKind::kSingularSolve: return "singular-solve";
    case ErrorKind::kBudgetExceeded: return "budget-exceeded";
    case ErrorKind::kNonConvergence: return "non-convergence";
    case ErrorKind::kDegenerateFit: return "degenerate-fit";
  }
  return "unknown";
}

namespace {

__extension__ using Wide = __int128;

std::int64_t narrow(Wide v) {
  if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min()) {
    throw Error(ErrorKind::kInvalidArgument, "rational overflow");
  }
  return static_cast<std::int64_t>(v);
}

Wide gcd_wide(Wide a, Wide b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    Wide t = a % b;
    a = b;
    b = t;
  }
  return a;
}

Rational make(Wide num, Wide den) {
  if (den == 0) throw Error(ErrorKind::kInvalidArgument, "rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  Wide g = gcd_wide(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  return Rational(narrow(num), narrow(den));
}

std::int64_t parse_int(std::string_view s) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw Error(ErrorKind::kParse, "not an integer: '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw Error(ErrorKind::kInvalidArgument, "rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  std::int64_t g = std::gcd(num, den);
  num_ = num / g;
  den_ = den / g;
}

Rational Rational::parse(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (text.empty()) throw Error(ErrorKind::kParse, "empty rational");

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    return Rational(parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1)));
  }
  auto dot = text.find('.');
  if (dot == std::string_view::npos) return Rational(parse_int(text));

  bool negative = !text.empty() && text.front() == '-';
  std::string_view int_part = text.substr(0, dot);
  std::string_view frac = text.substr(dot + 1);
  if (negative) int_part.remove_prefix(1);
  if (frac.size() > 17) throw Error(ErrorKind::kParse, "too many decimals: '" + std::string(text) + "'");
  for (char c : frac) {
    if (c < '0' || c > '9') throw Error(ErrorKind::kParse, "bad decimal: '" + std::string(text) + "'");
  }
  Wide den = 1;
  for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
  Wide ip = int_part.empty() ? 0 : parse_int(int_part);
  Wide fp = frac.empty() ? 0 : parse_int(frac);
  Wide num = ip * den + fp;
  return make(negative ? -num : num, den);
}

std::string Rational::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational operator+(const Rational& a, const Rational& b) {
  return make(Wide(a.num_) * b.den_ + Wide(b.num_) * a.den_, Wide(a.den_) * b.den_);
}
Rational operator-(const Rational& a, const Rational& b) {
  return make(Wide(a.num_) * b.den_ - Wide(b.num_) * a.den_, Wide(a.den_) * b.den_);
}
Rational operator*(const Rational& a, const Rational& b) {
  return make(Wide(a.num_) * b.num_, Wide(a.den_) * b.den_);
}
Rational operator/(const Rational& a, const Rational& b) {
  return make(Wide(a.num_) * b.den_, Wide(a.den_) * b.num_);
}
Rational Rational::operator-() const { return make(-Wide(num_), den_); }

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  Wide lhs = Wide(a.num_) * b.den_;
  Wide rhs = Wide(b.num_) * a.den_;
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

}  // namespace gwhk
