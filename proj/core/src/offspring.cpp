#include "gwhk/offspring.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <iomanip>
#include <string>

#include "gwhk/error.hpp"

namespace gwhk {

namespace {

constexpr double kSumTolerance = 1e-12;

std::vector<OffspringDistribution::Atom> normalise_atoms(std::vector<OffspringDistribution::Atom> atoms) {
  std::erase_if(atoms, [](const auto& a) { return a.prob == 0.0; });
  if (atoms.empty()) throw Error(ErrorKind::kInvalidArgument, "offspring distribution has no mass");
  std::sort(atoms.begin(), atoms.end(), [](const auto& a, const auto& b) { return a.count < b.count; });
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (!(atoms[i].prob > 0.0) || !std::isfinite(atoms[i].prob) || atoms[i].prob > 1.0) {
      throw Error(ErrorKind::kInvalidArgument, "offspring probability out of range");
    }
    if (i > 0 && atoms[i].count == atoms[i - 1].count) {
      throw Error(ErrorKind::kInvalidArgument, "duplicate offspring count " + std::to_string(atoms[i].count));
    }
  }
  return atoms;
}

}  // namespace

OffspringDistribution::OffspringDistribution(std::vector<Atom> atoms) : atoms_(normalise_atoms(std::move(atoms))) {
  double total = 0.0;
  for (const auto& a : atoms_) {
    total += a.prob;
    cdf_.push_back(total);
    mean_ += a.count * a.prob;
  }
  if (std::abs(total - 1.0) > kSumTolerance) {
    std::ostringstream msg;
    msg << std::setprecision(17) << "offspring probabilities sum to " << total << ", expected 1";
    throw Error(ErrorKind::kInvalidArgument, msg.str());
  }
  cdf_.back() = 1.0;
}

OffspringDistribution OffspringDistribution::from_rationals(
    const std::vector<std::pair<std::uint32_t, Rational>>& atoms) {
  Rational total(0);
  std::vector<Atom> plain;
  for (const auto& [count, p] : atoms) {
    if (p < Rational(0) || p > Rational(1)) throw Error(ErrorKind::kInvalidArgument, "offspring probability out of range");
    total += p;
    plain.push_back({count, p.to_double()});
  }
  if (total != Rational(1)) {
    throw Error(ErrorKind::kInvalidArgument, "offspring probabilities sum to " + total.str() + ", expected 1");
  }
  OffspringDistribution dist(std::move(plain));
  std::vector<std::pair<std::uint32_t, Rational>> sorted;
  for (const auto& atom : atoms) {
    if (atom.second != Rational(0)) sorted.push_back(atom);
  }
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<Rational> exact;
  for (const auto& atom : sorted) exact.push_back(atom.second);
  dist.exact_ = std::move(exact);
  return dist;
}

OffspringDistribution OffspringDistribution::parse(std::string_view text) {
  std::vector<std::pair<std::uint32_t, Rational>> atoms;
  while (!text.empty()) {
    auto comma = text.find(',');
    std::string_view item = text.substr(0, comma);
    auto colon = item.find(':');
    if (colon == std::string_view::npos) {
      throw Error(ErrorKind::kParse, "distribution item '" + std::string(item) + "' lacks ':'");
    }
    Rational count = Rational::parse(item.substr(0, colon));
    if (count.den() != 1 || count.num() < 0 || count.num() > (1ll << 31)) {
      throw Error(ErrorKind::kParse, "bad offspring count in '" + std::string(item) + "'");
    }
    atoms.emplace_back(static_cast<std::uint32_t>(count.num()), Rational::parse(item.substr(colon + 1)));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  if (atoms.empty()) throw Error(ErrorKind::kParse, "empty distribution");
  return from_rationals(atoms);
}

OffspringDistribution OffspringDistribution::from_unbounded(const std::function<double(std::uint32_t)>& pmf,
                                                            std::uint32_t max_count) {
  std::vector<Atom> atoms;
  double mass = 0.0;
  for (std::uint32_t j = 0; j <= max_count; ++j) {
    const double p = pmf(j);
    if (p < 0.0 || !std::isfinite(p)) throw Error(ErrorKind::kInvalidArgument, "pmf returned an invalid value");
    if (p > 0.0) atoms.push_back({j, p});
    mass += p;
    if (mass > 1.0 - kSumTolerance) break;
  }
  if (!(mass > 1.0 - kSumTolerance)) {
    throw Error(ErrorKind::kInvalidArgument, "pmf tail mass not exhausted by max_count");
  }
  for (auto& a : atoms) a.prob /= mass;
  return OffspringDistribution(std::move(atoms));
}

double OffspringDistribution::prob(std::uint32_t count) const {
  for (const auto& a : atoms_) {
    if (a.count == count) return a.prob;
  }
  return 0.0;
}

double OffspringDistribution::pgf(double s) const {
  double value = 0.0;
  for (const auto& a : atoms_) value += a.prob * std::pow(s, static_cast<double>(a.count));
  return value;
}

std::uint32_t OffspringDistribution::draw(double u) const {
  auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  if (it == cdf_.end()) --it;
  return atoms_[static_cast<std::size_t>(it - cdf_.begin())].count;
}

std::string OffspringDistribution::str() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    if (i > 0) out << ',';
    out << atoms_[i].count << ':';
    if (exact_) {
      out << (*exact_)[i].str();
    } else {
      out << std::setprecision(17) << atoms_[i].prob;
    }
  }
  return out.str();
}

ExtinctionResult extinction_probability(const OffspringDistribution& dist) {
  const double p1 = dist.prob(1);
  if (dist.prob(0) == 0.0) return {0.0, 1.0};
  if (dist.mean() <= 1.0 && p1 != 1.0) return {1.0, 0.0};

  // Monotone iteration s_{n+1} = f(s_n) from 0 increases to the smallest
  // fixed point. The step threshold sits well below the 1e-12 target since the
  // remaining error is step * f'(s*) / (1 - f'(s*)).
  constexpr double kStep = 1e-15;
  double s = 0.0;
  for (long iter = 0; iter < 100'000'000; ++iter) {
    const double next = dist.pgf(s);
    if (std::abs(next - s) < kStep) {
      s = next;
      break;
    }
    s = next;
  }
  return {s, 1.0 - s};
}

}  // namespace gwhk
