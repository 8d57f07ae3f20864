#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dotcover/gf.hpp"

namespace dotcover {

/// A point of F_q^d as its coordinate tuple.
using VecFq = std::vector<Elem>;

/// Flat index of a point: sum coords[i].idx * q^i.
using PointIndex = std::uint64_t;

/// The ambient vector space F_q^d. Cheap to copy; shares the field.
class Space {
 public:
  Space(FieldPtr field, int dim);

  const Field& field() const noexcept { return *field_; }
  const FieldPtr& field_ptr() const noexcept { return field_; }
  int dim() const noexcept { return dim_; }
  std::uint32_t q() const noexcept { return field_->q(); }
  /// q^d.
  std::uint64_t size() const noexcept { return size_; }
  /// q^i for i in [0, d].
  std::uint64_t stride(int axis) const noexcept { return strides_[axis]; }

  VecFq coords(PointIndex flat) const;
  PointIndex flat(std::span<const Elem> coords) const;
  Elem coord(PointIndex flat, int axis) const noexcept {
    return Elem{static_cast<std::uint32_t>((flat / strides_[axis]) % field_->q())};
  }

  PointIndex add(PointIndex x, PointIndex y) const noexcept;
  PointIndex sub(PointIndex x, PointIndex y) const noexcept;
  PointIndex scale(Elem s, PointIndex x) const noexcept;
  Elem dot(PointIndex x, PointIndex y) const noexcept;

  friend bool operator==(const Space& a, const Space& b) noexcept {
    return a.field_ == b.field_ && a.dim_ == b.dim_;
  }

 private:
  FieldPtr field_;
  int dim_;
  std::uint64_t size_;
  std::vector<std::uint64_t> strides_;
};

/// Field dot product sum x_i y_i. Throws DimensionMismatch.
Elem dot(const Field& field, std::span<const Elem> x, std::span<const Elem> y);

}  // namespace dotcover
