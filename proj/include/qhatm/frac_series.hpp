#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <compare>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "qhatm/errors.hpp"
#include "qhatm/factors.hpp"
#include "qhatm/special_functions.hpp"

namespace qhatm {

/// Exponent p + q*gamma over the single fractional-order symbol gamma. Equality
/// is exact on the integer pair; the numeric value only matters at use sites.
struct AffineExponent {
  int p = 0;
  int q = 0;

  constexpr double value(double gamma_num) const noexcept {
    return static_cast<double>(p) + static_cast<double>(q) * gamma_num;
  }

  friend constexpr AffineExponent operator+(AffineExponent a, AffineExponent b) noexcept {
    return {a.p + b.p, a.q + b.q};
  }
  friend constexpr AffineExponent operator-(AffineExponent a, AffineExponent b) noexcept {
    return {a.p - b.p, a.q - b.q};
  }
  friend constexpr auto operator<=>(const AffineExponent&, const AffineExponent&) = default;
};

inline std::string to_string(AffineExponent e) {
  if (e.q == 0) return std::to_string(e.p);
  std::string s;
  if (e.p != 0) s = std::to_string(e.p) + (e.q > 0 ? "+" : "");
  if (e.q == -1) {
    s += "-g";
  } else if (e.q != 1) {
    s += std::to_string(e.q) + "g";
  } else {
    s += "g";
  }
  return s;
}

struct Term {
  double coeff = 0.0;
  AffineExponent exponent;
  std::size_t factor = 0;
};

/// Relative pruning threshold applied against the largest |coeff| of a series.
inline constexpr double kPruneRelative = 1e-14;
/// Absolute slack for numeric exponent and branch comparisons.
inline constexpr double kExponentSlack = 1e-12;

/// Sort by (p, q, factor), merge like terms, prune float dust.
inline std::vector<Term> canonical_terms(std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) {
    if (a.exponent != b.exponent) return a.exponent < b.exponent;
    return a.factor < b.factor;
  });
  std::vector<Term> merged;
  merged.reserve(terms.size());
  for (const auto& term : terms) {
    if (!merged.empty() && merged.back().exponent == term.exponent &&
        merged.back().factor == term.factor) {
      merged.back().coeff += term.coeff;
    } else {
      merged.push_back(term);
    }
  }
  double max_abs = 0.0;
  for (const auto& term : merged) max_abs = std::max(max_abs, std::abs(term.coeff));
  const double cutoff = kPruneRelative * max_abs;
  std::erase_if(merged, [&](const Term& t) { return t.coeff == 0.0 || std::abs(t.coeff) < cutoff; });
  return merged;
}

/// Finite sum of coeff * z^(p + q*gamma) * factor, kept in canonical form.
/// Immutable: every operation returns a new series.
class FracSeries {
 public:
  FracSeries() : catalog_(std::make_shared<const FactorCatalog>()) {}

  explicit FracSeries(std::shared_ptr<const FactorCatalog> catalog, std::vector<Term> terms = {})
      : catalog_(std::move(catalog)) {
    if (!catalog_) throw SpecError("series requires a factor catalog");
    for (const auto& term : terms) {
      if (!std::isfinite(term.coeff)) throw Error("non-finite series coefficient");
      if (term.factor >= catalog_->size()) {
        throw SpecError("factor index " + std::to_string(term.factor) + " outside catalog");
      }
    }
    terms_ = canonical_terms(std::move(terms));
  }

  static FracSeries zero(std::shared_ptr<const FactorCatalog> catalog) {
    return FracSeries(std::move(catalog));
  }

  const std::vector<Term>& terms() const noexcept { return terms_; }
  const std::shared_ptr<const FactorCatalog>& catalog() const noexcept { return catalog_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  std::size_t size() const noexcept { return terms_.size(); }

  bool same_catalog(const FracSeries& other) const {
    return catalog_ == other.catalog_ || *catalog_ == *other.catalog_;
  }

  /// Exact structural equality: same exponents, factors and coefficients.
  friend bool operator==(const FracSeries& a, const FracSeries& b) {
    if (!a.same_catalog(b) || a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t i = 0; i < a.terms_.size(); ++i) {
      const auto& x = a.terms_[i];
      const auto& y = b.terms_[i];
      if (x.exponent != y.exponent || x.factor != y.factor || x.coeff != y.coeff) return false;
    }
    return true;
  }

 private:
  std::shared_ptr<const FactorCatalog> catalog_;
  std::vector<Term> terms_;
};

/// Same term set with coefficients equal to within rel_tol (relative to the
/// larger magnitude of each pair).
inline bool terms_match(const FracSeries& a, const FracSeries& b, double rel_tol) {
  if (!a.same_catalog(b) || a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto& x = a.terms()[i];
    const auto& y = b.terms()[i];
    if (x.exponent != y.exponent || x.factor != y.factor) return false;
    const double scale = std::max(std::abs(x.coeff), std::abs(y.coeff));
    if (std::abs(x.coeff - y.coeff) > rel_tol * scale) return false;
  }
  return true;
}

inline FracSeries add(const FracSeries& a, const FracSeries& b) {
  if (!a.same_catalog(b)) throw CatalogMismatch();
  std::vector<Term> terms = a.terms();
  terms.insert(terms.end(), b.terms().begin(), b.terms().end());
  return FracSeries(a.catalog(), std::move(terms));
}

inline FracSeries scale(const FracSeries& a, double c) {
  if (!std::isfinite(c)) throw Error("non-finite scale factor");
  std::vector<Term> terms = a.terms();
  for (auto& term : terms) term.coeff *= c;
  return FracSeries(a.catalog(), std::move(terms));
}

inline FracSeries operator+(const FracSeries& a, const FracSeries& b) { return add(a, b); }
inline FracSeries operator-(const FracSeries& a, const FracSeries& b) { return add(a, scale(b, -1.0)); }
inline FracSeries operator*(double c, const FracSeries& a) { return scale(a, c); }

/// Caputo derivative of affine order, applied term-wise with the power rule
///   D^a z^b = Gamma(b+1)/Gamma(b-a+1) z^(b-a)  if b > n-1,  0 otherwise,
/// where n = ceil(a). The branch test uses the numeric order.
inline FracSeries caputo(const FracSeries& a, AffineExponent order, double gamma_num) {
  const double alpha = order.value(gamma_num);
  if (!(alpha > 0.0)) throw Error("caputo: order must be positive, got " + std::to_string(alpha));
  const double n = std::ceil(alpha - kExponentSlack);

  std::vector<Term> out;
  out.reserve(a.size());
  for (const auto& term : a.terms()) {
    const double beta = term.exponent.value(gamma_num);
    if (beta < -kExponentSlack) {
      throw ExponentUnderflow("caputo: input exponent " + std::to_string(beta) + " is negative");
    }
    if (beta <= n - 1.0 + kExponentSlack) continue;
    const double target = beta - alpha + 1.0;
    // beta > n-1 >= alpha-1 keeps the lower Gamma argument off its poles.
    assert(target > 0.0);
    if (!(target > 0.0)) throw Error("caputo: internal pole at Gamma(" + std::to_string(target) + ")");
    if (beta - alpha < -kExponentSlack) {
      throw ExponentUnderflow("caputo: result exponent " + std::to_string(beta - alpha) +
                              " is negative");
    }
    out.push_back({term.coeff * gamma_ratio(beta + 1.0, target), term.exponent - order, term.factor});
  }
  return FracSeries(a.catalog(), std::move(out));
}

/// Riemann-Liouville integral: J^a z^b = Gamma(b+1)/Gamma(a+b+1) z^(a+b).
inline FracSeries rl_integral(const FracSeries& a, AffineExponent order, double gamma_num) {
  const double alpha = order.value(gamma_num);
  if (!(alpha > 0.0)) throw Error("rl_integral: order must be positive, got " + std::to_string(alpha));

  std::vector<Term> out;
  out.reserve(a.size());
  for (const auto& term : a.terms()) {
    const double beta = term.exponent.value(gamma_num);
    if (beta < -kExponentSlack) {
      throw ExponentUnderflow("rl_integral: input exponent " + std::to_string(beta) + " is negative");
    }
    const double b = std::max(beta, 0.0);
    out.push_back({term.coeff * gamma_ratio(b + 1.0, b + alpha + 1.0), term.exponent + order, term.factor});
  }
  return FracSeries(a.catalog(), std::move(out));
}

/// Square real matrix over a factor basis; column j is the image of factor j.
class FactorMatrix {
 public:
  FactorMatrix() = default;
  explicit FactorMatrix(std::size_t dim, double fill = 0.0) : dim_(dim), data_(dim * dim, fill) {}

  static FactorMatrix identity(std::size_t dim) {
    FactorMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
  }

  /// Builds from row-major nested rows; throws DimensionError when not square.
  static FactorMatrix from_rows(const std::vector<std::vector<double>>& rows) {
    FactorMatrix m(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != rows.size()) {
        throw DimensionError("bracket matrix is not square: row " + std::to_string(i) + " has " +
                             std::to_string(rows[i].size()) + " entries, expected " +
                             std::to_string(rows.size()));
      }
      for (std::size_t j = 0; j < rows.size(); ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  std::vector<std::vector<double>> rows() const {
    std::vector<std::vector<double>> out(dim_, std::vector<double>(dim_));
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = 0; j < dim_; ++j) out[i][j] = (*this)(i, j);
    return out;
  }

  std::size_t dim() const noexcept { return dim_; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * dim_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * dim_ + j]; }

  bool is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](double v) { return v == 0.0; });
  }

  friend bool operator==(const FactorMatrix&, const FactorMatrix&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<double> data_;
};

inline FracSeries apply_matrix(const FracSeries& a, const FactorMatrix& m) {
  if (m.dim() != a.catalog()->size()) {
    throw DimensionError("matrix dimension " + std::to_string(m.dim()) + " does not match catalog size " +
                         std::to_string(a.catalog()->size()));
  }
  std::vector<Term> out;
  for (const auto& term : a.terms()) {
    for (std::size_t i = 0; i < m.dim(); ++i) {
      const double entry = m(i, term.factor);
      if (entry != 0.0) out.push_back({entry * term.coeff, term.exponent, i});
    }
  }
  return FracSeries(a.catalog(), std::move(out));
}

/// Sum of coeff * z^(p+q*gamma) * factor(coords), with 0^0 = 1.
inline double evaluate(const FracSeries& a, double z, double gamma_num, const Point& coords) {
  if (z < 0.0) throw Error("evaluate: evolution value must be non-negative");
  double sum = 0.0;
  for (const auto& term : a.terms()) {
    const double e = term.exponent.value(gamma_num);
    const double power = (std::abs(e) <= kExponentSlack) ? 1.0 : std::pow(z, e);
    sum += term.coeff * power * a.catalog()->evaluate(term.factor, coords);
  }
  return sum;
}

/// Substitutes a numeric order whose exponents all land on integers, giving
/// a series with q = 0 exponents. Used to compare against ordinary Taylor
/// polynomials at classical order.
inline FracSeries collapse_to_integer_powers(const FracSeries& a, double gamma_num) {
  std::vector<Term> out;
  out.reserve(a.size());
  for (const auto& term : a.terms()) {
    const double e = term.exponent.value(gamma_num);
    const double rounded = std::round(e);
    if (std::abs(e - rounded) > 1e-9) {
      throw Error("exponent " + std::to_string(e) + " is not an integer at this order");
    }
    out.push_back({term.coeff, {static_cast<int>(rounded), 0}, term.factor});
  }
  return FracSeries(a.catalog(), std::move(out));
}

/// Terms with numeric evolution degree <= max_degree.
inline FracSeries truncate_degree(const FracSeries& a, double gamma_num, double max_degree) {
  std::vector<Term> out;
  for (const auto& term : a.terms()) {
    if (term.exponent.value(gamma_num) <= max_degree + kExponentSlack) out.push_back(term);
  }
  return FracSeries(a.catalog(), std::move(out));
}

}  // namespace qhatm
