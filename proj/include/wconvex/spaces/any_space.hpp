#pragma once

// Type-erased space, for spaces chosen at run time (scenario files).
// `AnySpace` itself models ConvexMetricSpace, so every verifier, set and
// solver works on it unchanged, and products of erased spaces nest freely.

#include <any>
#include <memory>
#include <optional>
#include <string>
#include <typeinfo>
#include <utility>

#include "wconvex/core.hpp"

namespace wconvex {

class AnyPoint {
 public:
  AnyPoint() = default;
  template <class P, class = std::enable_if_t<!std::is_same_v<std::decay_t<P>, AnyPoint>>>
  explicit AnyPoint(P&& p) : value_(std::forward<P>(p)) {}

  template <class P>
  const P& as() const {
    if (const P* p = std::any_cast<P>(&value_)) return *p;
    throw type_error(std::string("point payload is not a ") + typeid(P).name());
  }

  bool has_value() const { return value_.has_value(); }
  const std::type_info& type() const { return value_.type(); }

 private:
  std::any value_;
};

class AnySpace {
 public:
  using point_type = AnyPoint;

  template <class S>
    requires(!std::is_same_v<std::remove_cvref_t<S>, AnySpace> && ConvexMetricSpace<S>)
  explicit AnySpace(S space) : self_(std::make_shared<Model<S>>(std::move(space))) {}

  double distance(const AnyPoint& a, const AnyPoint& b) const { return self_->distance(a, b); }
  AnyPoint combine(const AnyPoint& x, const AnyPoint& y, double t) const {
    return self_->combine(x, y, t);
  }
  std::optional<AnyPoint> extend(const AnyPoint& y, const AnyPoint& x, double lambda) const {
    return self_->extend(y, x, lambda);
  }
  bool supports_extend() const { return self_->supports_extend(); }
  AnyPoint sample(Rng& rng) const { return self_->sample(rng); }
  std::string describe() const { return self_->describe(); }
  std::size_t dim_hint() const { return self_->dim_hint(); }
  json to_json(const AnyPoint& p) const { return self_->to_json(p); }
  AnyPoint from_json(const json& j) const { return self_->from_json(j); }

  /// The wrapped space when it has type S, else nullptr.
  template <class S>
  const S* target() const {
    if (auto* m = dynamic_cast<const Model<S>*>(self_.get())) return &m->space;
    return nullptr;
  }

  bool operator==(const AnySpace& o) const {
    return self_ == o.self_ || describe() == o.describe();
  }

 private:
  struct Concept {
    virtual ~Concept() = default;
    virtual double distance(const AnyPoint&, const AnyPoint&) const = 0;
    virtual AnyPoint combine(const AnyPoint&, const AnyPoint&, double) const = 0;
    virtual std::optional<AnyPoint> extend(const AnyPoint&, const AnyPoint&, double) const = 0;
    virtual bool supports_extend() const = 0;
    virtual AnyPoint sample(Rng&) const = 0;
    virtual std::string describe() const = 0;
    virtual std::size_t dim_hint() const = 0;
    virtual json to_json(const AnyPoint&) const = 0;
    virtual AnyPoint from_json(const json&) const = 0;
  };

  template <class S>
  struct Model final : Concept {
    using P = point_t<S>;
    explicit Model(S s) : space(std::move(s)) {}

    double distance(const AnyPoint& a, const AnyPoint& b) const override {
      return space.distance(a.as<P>(), b.as<P>());
    }
    AnyPoint combine(const AnyPoint& x, const AnyPoint& y, double t) const override {
      return AnyPoint(space.combine(x.as<P>(), y.as<P>(), t));
    }
    std::optional<AnyPoint> extend(const AnyPoint& y, const AnyPoint& x, double lambda) const override {
      auto xi = wconvex::extend(space, y.as<P>(), x.as<P>(), lambda);
      if (!xi) return std::nullopt;
      return AnyPoint(std::move(*xi));
    }
    bool supports_extend() const override { return wconvex::supports_extend(space); }
    AnyPoint sample(Rng& rng) const override { return AnyPoint(space.sample(rng)); }
    std::string describe() const override { return space.describe(); }
    std::size_t dim_hint() const override { return space.dim_hint(); }
    json to_json(const AnyPoint& p) const override { return space.to_json(p.as<P>()); }
    AnyPoint from_json(const json& j) const override { return AnyPoint(space.from_json(j)); }

    S space;
  };

  std::shared_ptr<const Concept> self_;
};

}  // namespace wconvex
