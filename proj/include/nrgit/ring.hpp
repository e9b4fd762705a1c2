#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace nrgit {

using Exponents = std::vector<int>;

enum class OrderKind { degrevlex, lex, weighted };

inline std::string to_string(OrderKind k) {
  switch (k) {
    case OrderKind::degrevlex: return "degrevlex";
    case OrderKind::lex: return "lex";
    case OrderKind::weighted: return "weighted";
  }
  return "?";
}

inline OrderKind parse_order_kind(const std::string& s) {
  if (s == "degrevlex") return OrderKind::degrevlex;
  if (s == "lex") return OrderKind::lex;
  if (s == "weighted") return OrderKind::weighted;
  throw std::invalid_argument("unknown monomial order: " + s);
}

// Matrix order: integer weight rows compared first, then a base order.
// Every row must be nonnegative for the order to be a well-order.
class MonomialOrder {
 public:
  enum class Base { degrevlex, lex };

  MonomialOrder() = default;
  MonomialOrder(std::vector<std::vector<long>> rows, Base base) : rows_(std::move(rows)), base_(base) {}

  const std::vector<std::vector<long>>& rows() const { return rows_; }
  Base base() const { return base_; }

  // Returns <0, 0, >0 like strcmp; larger means bigger in the order.
  int compare(const Exponents& a, const Exponents& b) const {
    for (const auto& row : rows_) {
      long sa = 0, sb = 0;
      for (size_t i = 0; i < a.size(); ++i) {
        sa += row[i] * a[i];
        sb += row[i] * b[i];
      }
      if (sa != sb) return sa < sb ? -1 : 1;
    }
    if (base_ == Base::lex) {
      for (size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
      return 0;
    }
    long da = 0, db = 0;
    for (size_t i = 0; i < a.size(); ++i) {
      da += a[i];
      db += b[i];
    }
    if (da != db) return da < db ? -1 : 1;
    for (size_t i = a.size(); i-- > 0;)
      if (a[i] != b[i]) return a[i] > b[i] ? -1 : 1;
    return 0;
  }

  bool operator==(const MonomialOrder& o) const { return rows_ == o.rows_ && base_ == o.base_; }

 private:
  std::vector<std::vector<long>> rows_;
  Base base_ = Base::degrevlex;
};

class GradedRing;
using RingPtr = std::shared_ptr<const GradedRing>;

// Variables with integer lambda-weights and a monomial order. Variables
// flagged as tags encode free-module basis vectors: every term of a module
// element carries exactly one tag to the first power.
class GradedRing {
 public:
  GradedRing(std::vector<std::string> names, std::vector<int> weights, OrderKind kind = OrderKind::degrevlex)
      : names_(std::move(names)), weights_(std::move(weights)), kind_(kind), tags_(names_.size(), false) {
    if (names_.size() != weights_.size()) throw std::invalid_argument("names/weights length mismatch");
    for (size_t i = 0; i < names_.size(); ++i)
      for (size_t j = i + 1; j < names_.size(); ++j)
        if (names_[i] == names_[j]) throw std::invalid_argument("duplicate variable name: " + names_[i]);
    order_ = named_order(kind_, weights_);
  }

  static RingPtr make(std::vector<std::string> names, std::vector<int> weights,
                      OrderKind kind = OrderKind::degrevlex) {
    return std::make_shared<const GradedRing>(std::move(names), std::move(weights), kind);
  }

  // Same variables, explicit order and tag flags.
  static RingPtr make_custom(std::vector<std::string> names, std::vector<int> weights, MonomialOrder order,
                             std::vector<bool> tags) {
    auto r = std::make_shared<GradedRing>(std::move(names), std::move(weights), OrderKind::degrevlex);
    r->order_ = std::move(order);
    r->tags_ = std::move(tags);
    r->custom_ = true;
    return r;
  }

  size_t nvars() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& name(size_t i) const { return names_[i]; }
  const std::vector<int>& weights() const { return weights_; }
  int weight(size_t i) const { return weights_[i]; }
  OrderKind kind() const { return kind_; }
  const MonomialOrder& order() const { return order_; }
  bool is_tag(size_t i) const { return tags_[i]; }
  bool has_tags() const { return std::find(tags_.begin(), tags_.end(), true) != tags_.end(); }
  bool custom() const { return custom_; }

  std::optional<size_t> index_of(const std::string& n) const {
    for (size_t i = 0; i < names_.size(); ++i)
      if (names_[i] == n) return i;
    return std::nullopt;
  }

  bool all_weights_nonpositive() const {
    return std::all_of(weights_.begin(), weights_.end(), [](int w) { return w <= 0; });
  }

  // Structural equality: same variables, weights, order and tags.
  bool same_as(const GradedRing& o) const {
    return names_ == o.names_ && weights_ == o.weights_ && order_ == o.order_ && tags_ == o.tags_;
  }

  static MonomialOrder named_order(OrderKind kind, const std::vector<int>& weights) {
    switch (kind) {
      case OrderKind::lex: return MonomialOrder({}, MonomialOrder::Base::lex);
      case OrderKind::weighted: {
        std::vector<long> row;
        for (int w : weights) {
          if (w > 0) throw std::invalid_argument("weighted order needs all weights <= 0");
          row.push_back(-w);
        }
        return MonomialOrder({row}, MonomialOrder::Base::degrevlex);
      }
      case OrderKind::degrevlex: break;
    }
    return MonomialOrder({}, MonomialOrder::Base::degrevlex);
  }

 private:
  std::vector<std::string> names_;
  std::vector<int> weights_;
  OrderKind kind_;
  MonomialOrder order_;
  std::vector<bool> tags_;
  bool custom_ = false;
};

inline bool same_ring(const RingPtr& a, const RingPtr& b) { return a == b || a->same_as(*b); }

inline bool divides(const Exponents& a, const Exponents& b) {
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

inline Exponents exp_lcm(const Exponents& a, const Exponents& b) {
  Exponents r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = std::max(a[i], b[i]);
  return r;
}

inline Exponents exp_add(const Exponents& a, const Exponents& b) {
  Exponents r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline Exponents exp_sub(const Exponents& a, const Exponents& b) {
  Exponents r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline bool coprime(const Exponents& a, const Exponents& b) {
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] > 0 && b[i] > 0) return false;
  return true;
}

inline int total_degree(const Exponents& a) {
  int d = 0;
  for (int x : a) d += x;
  return d;
}

}  // namespace nrgit
