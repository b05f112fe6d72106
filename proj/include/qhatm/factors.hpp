#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qhatm/errors.hpp"

namespace qhatm {

/// Named coordinate values, e.g. {x: 1.5, t: 0.01}.
using Point = std::map<std::string, double, std::less<>>;

inline double coordinate(const Point& point, std::string_view name) {
  auto it = point.find(name);
  if (it == point.end()) {
    throw MissingCoordinate(std::string(name));
  }
  return it->second;
}

/// Separable functions of the non-evolution variables. The set is closed:
/// custom problems combine these instead of parsing expressions.
enum class FactorKind { one, t, exp_x, exp_x_plus_y, sinh_xyz, exp_neg_t };

struct FactorInfo {
  FactorKind kind;
  std::string_view id;
  std::string_view description;
  std::vector<std::string_view> reads;
};

inline const std::array<FactorInfo, 6>& factor_table() {
  static const std::array<FactorInfo, 6> table = {{
      {FactorKind::one, "one", "1", {}},
      {FactorKind::t, "t", "t", {"t"}},
      {FactorKind::exp_x, "exp_x", "e^x", {"x"}},
      {FactorKind::exp_x_plus_y, "exp_x_plus_y", "e^(x+y)", {"x", "y"}},
      {FactorKind::sinh_xyz, "sinh_xyz", "sinh(x) sinh(y) sinh(z)", {"x", "y", "z"}},
      {FactorKind::exp_neg_t, "exp_neg_t", "e^(-t)", {"t"}},
  }};
  return table;
}

inline const FactorInfo& factor_info(FactorKind kind) {
  return factor_table()[static_cast<std::size_t>(kind)];
}

inline std::optional<FactorKind> factor_from_id(std::string_view id) {
  for (const auto& info : factor_table()) {
    if (info.id == id) return info.kind;
  }
  return std::nullopt;
}

inline double evaluate_factor(FactorKind kind, const Point& p) {
  switch (kind) {
    case FactorKind::one:
      return 1.0;
    case FactorKind::t:
      return coordinate(p, "t");
    case FactorKind::exp_x:
      return std::exp(coordinate(p, "x"));
    case FactorKind::exp_x_plus_y:
      return std::exp(coordinate(p, "x") + coordinate(p, "y"));
    case FactorKind::sinh_xyz:
      return std::sinh(coordinate(p, "x")) * std::sinh(coordinate(p, "y")) *
             std::sinh(coordinate(p, "z"));
    case FactorKind::exp_neg_t:
      return std::exp(-coordinate(p, "t"));
  }
  return 0.0;
}

/// Ordered basis of factor functions; a series term refers to its factor by
/// index into this list.
class FactorCatalog {
 public:
  FactorCatalog() = default;
  explicit FactorCatalog(std::vector<FactorKind> kinds) : kinds_(std::move(kinds)) {
    for (std::size_t i = 0; i < kinds_.size(); ++i) {
      for (std::size_t j = i + 1; j < kinds_.size(); ++j) {
        if (kinds_[i] == kinds_[j]) {
          throw SpecError("duplicate factor '" + std::string(factor_info(kinds_[i]).id) + "'");
        }
      }
    }
  }

  std::size_t size() const noexcept { return kinds_.size(); }
  FactorKind kind(std::size_t index) const { return kinds_.at(index); }
  const std::vector<FactorKind>& kinds() const noexcept { return kinds_; }
  std::string_view id(std::size_t index) const { return factor_info(kind(index)).id; }

  std::optional<std::size_t> index_of(std::string_view id) const {
    for (std::size_t i = 0; i < kinds_.size(); ++i) {
      if (factor_info(kinds_[i]).id == id) return i;
    }
    return std::nullopt;
  }

  double evaluate(std::size_t index, const Point& p) const {
    return evaluate_factor(kind(index), p);
  }

  friend bool operator==(const FactorCatalog&, const FactorCatalog&) = default;

 private:
  std::vector<FactorKind> kinds_;
};

}  // namespace qhatm
