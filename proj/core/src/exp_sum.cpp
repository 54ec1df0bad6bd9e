#include "parisian/exp_sum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <utility>

#include "parisian/errors.hpp"
#include "parisian/numerics.hpp"

namespace parisian {

namespace {

// Relative size below which a merged coefficient counts as an exact cancellation.
constexpr double kCancellation = 1e-11;

// Rates closer than this (relative) are treated as coinciding in convolve().
constexpr double kCoincidentRates = 1e-10;

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

}  // namespace

ExpSum::ExpSum(std::vector<ExpTerm> terms) {
  struct Acc {
    double sum = 0.0;
    double magnitude = 0.0;
    int count = 0;
  };
  std::map<std::pair<double, int>, Acc> merged;
  for (const auto& t : terms) {
    if (!std::isfinite(t.coef) || !std::isfinite(t.rate)) {
      throw ConsistencyError("ExpSum: non-finite term");
    }
    if (t.power < 0) throw ConsistencyError("ExpSum: negative power");
    if (t.coef == 0.0) continue;
    auto& acc = merged[{t.rate, t.power}];
    acc.sum += t.coef;
    acc.magnitude += std::abs(t.coef);
    ++acc.count;
  }
  for (const auto& [key, acc] : merged) {
    if (acc.sum == 0.0) continue;
    if (acc.count > 1 && std::abs(acc.sum) <= kCancellation * acc.magnitude) continue;
    terms_.push_back({acc.sum, key.first, key.second});
  }
}

ExpSum ExpSum::constant(double c) { return ExpSum({{c, 0.0, 0}}); }

ExpSum ExpSum::exponential(double coef, double rate) { return ExpSum({{coef, rate, 0}}); }

double ExpSum::operator()(double x) const {
  double s = 0.0;
  for (const auto& t : terms_) {
    double v = t.coef * std::exp(t.rate * x);
    if (t.power > 0) v *= std::pow(x, t.power);
    s += v;
  }
  return s;
}

double ExpSum::increment(double x, double x0) const {
  const double dx = x - x0;
  double s = 0.0;
  for (const auto& t : terms_) {
    if (t.power == 0) {
      s += t.coef * std::exp(t.rate * x0) * std::expm1(t.rate * dx);
    } else {
      s += t.coef * (std::pow(x, t.power) * std::exp(t.rate * x) -
                     std::pow(x0, t.power) * std::exp(t.rate * x0));
    }
  }
  return s;
}

ExpSum ExpSum::derivative() const {
  std::vector<ExpTerm> out;
  out.reserve(2 * terms_.size());
  for (const auto& t : terms_) {
    if (t.rate != 0.0) out.push_back({t.coef * t.rate, t.rate, t.power});
    if (t.power > 0) out.push_back({t.coef * t.power, t.rate, t.power - 1});
  }
  return ExpSum(std::move(out));
}

ExpSum ExpSum::antiderivative() const {
  std::vector<ExpTerm> out;
  for (const auto& t : terms_) {
    if (t.rate == 0.0) {
      out.push_back({t.coef / (t.power + 1), 0.0, t.power + 1});
      continue;
    }
    // int_0^x y^k e^{ay} dy = sum_{j=0}^k (-1)^{k-j} k!/(j! a^{k-j+1}) x^j e^{ax}
    //                         - (-1)^k k!/a^{k+1}
    const int k = t.power;
    const double a = t.rate;
    for (int j = 0; j <= k; ++j) {
      const double sign = ((k - j) % 2 == 0) ? 1.0 : -1.0;
      const double c = sign * factorial(k) / (factorial(j) * std::pow(a, k - j + 1));
      out.push_back({t.coef * c, a, j});
    }
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    out.push_back({-t.coef * sign * factorial(k) / std::pow(a, k + 1), 0.0, 0});
  }
  return ExpSum(std::move(out));
}

ExpSum ExpSum::shifted(double a) const {
  std::vector<ExpTerm> out;
  for (const auto& t : terms_) {
    const double base = t.coef * std::exp(t.rate * a);
    for (int j = 0; j <= t.power; ++j) {
      out.push_back({base * binomial(t.power, j) * std::pow(a, t.power - j), t.rate, j});
    }
  }
  return ExpSum(std::move(out));
}

ExpSum ExpSum::scaled(double s) const {
  std::vector<ExpTerm> out(terms_.begin(), terms_.end());
  for (auto& t : out) t.coef *= s;
  return ExpSum(std::move(out));
}

ExpSum ExpSum::convolve(const ExpSum& g) const {
  std::vector<ExpTerm> out;
  for (const auto& f : terms_) {
    for (const auto& h : g.terms_) {
      if (f.power != 0 || h.power != 0) {
        throw ConsistencyError("ExpSum::convolve supports pure exponentials only");
      }
      const double prod = f.coef * h.coef;
      const double gap = f.rate - h.rate;
      const double scale = std::max({1.0, std::abs(f.rate), std::abs(h.rate)});
      if (std::abs(gap) <= kCoincidentRates * scale) {
        out.push_back({prod, 0.5 * (f.rate + h.rate), 1});
      } else {
        out.push_back({prod / gap, f.rate, 0});
        out.push_back({-prod / gap, h.rate, 0});
      }
    }
  }
  return ExpSum(std::move(out));
}

double ExpSum::laplace(double s) const {
  double total = 0.0;
  for (const auto& t : terms_) {
    if (!(s > t.rate)) throw ConsistencyError("ExpSum::laplace: transform diverges");
    total += t.coef * factorial(t.power) / std::pow(s - t.rate, t.power + 1);
  }
  return total;
}

double ExpSum::max_rate() const {
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& t : terms_) m = std::max(m, t.rate);
  return m;
}

double ExpSum::coefficient(double rate) const {
  for (const auto& t : terms_) {
    if (t.rate == rate && t.power == 0) return t.coef;
  }
  return 0.0;
}

ExpSum operator+(const ExpSum& a, const ExpSum& b) {
  std::vector<ExpTerm> all(a.terms_.begin(), a.terms_.end());
  all.insert(all.end(), b.terms_.begin(), b.terms_.end());
  return ExpSum(std::move(all));
}

ExpSum operator-(const ExpSum& a, const ExpSum& b) { return a + b.scaled(-1.0); }

}  // namespace parisian
