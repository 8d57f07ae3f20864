#include "dotcover/space.hpp"

#include <string>

#include "dotcover/error.hpp"

namespace dotcover {

Space::Space(FieldPtr field, int dim) : field_(std::move(field)), dim_(dim), size_(1) {
  if (dim < 1) throw Error(ErrorCode::BadArity, "dimension must be >= 1, got " + std::to_string(dim));
  strides_.reserve(static_cast<std::size_t>(dim) + 1);
  for (int i = 0; i < dim; ++i) {
    strides_.push_back(size_);
    if (size_ > (std::uint64_t{1} << 40) / field_->q())
      throw Error(ErrorCode::FieldTooLarge, "q^d exceeds 2^40 points");
    size_ *= field_->q();
  }
  strides_.push_back(size_);
}

VecFq Space::coords(PointIndex flat) const {
  VecFq out(static_cast<std::size_t>(dim_));
  const std::uint32_t q = field_->q();
  for (auto& c : out) {
    c = Elem{static_cast<std::uint32_t>(flat % q)};
    flat /= q;
  }
  return out;
}

PointIndex Space::flat(std::span<const Elem> coords) const {
  if (coords.size() != static_cast<std::size_t>(dim_))
    throw Error(ErrorCode::DimensionMismatch, "expected " + std::to_string(dim_) + " coordinates");
  PointIndex out = 0;
  for (std::size_t i = coords.size(); i-- > 0;) out = out * field_->q() + coords[i].idx;
  return out;
}

PointIndex Space::add(PointIndex x, PointIndex y) const noexcept {
  const std::uint32_t q = field_->q();
  PointIndex out = 0;
  for (int i = 0; i < dim_; ++i) {
    const Elem a{static_cast<std::uint32_t>(x % q)};
    const Elem b{static_cast<std::uint32_t>(y % q)};
    out += field_->add(a, b).idx * strides_[i];
    x /= q;
    y /= q;
  }
  return out;
}

PointIndex Space::sub(PointIndex x, PointIndex y) const noexcept {
  const std::uint32_t q = field_->q();
  PointIndex out = 0;
  for (int i = 0; i < dim_; ++i) {
    const Elem a{static_cast<std::uint32_t>(x % q)};
    const Elem b{static_cast<std::uint32_t>(y % q)};
    out += field_->sub(a, b).idx * strides_[i];
    x /= q;
    y /= q;
  }
  return out;
}

PointIndex Space::scale(Elem s, PointIndex x) const noexcept {
  const std::uint32_t q = field_->q();
  PointIndex out = 0;
  for (int i = 0; i < dim_; ++i) {
    out += field_->mul(s, Elem{static_cast<std::uint32_t>(x % q)}).idx * strides_[i];
    x /= q;
  }
  return out;
}

Elem Space::dot(PointIndex x, PointIndex y) const noexcept {
  const std::uint32_t q = field_->q();
  Elem acc{0};
  for (int i = 0; i < dim_; ++i) {
    const Elem a{static_cast<std::uint32_t>(x % q)};
    const Elem b{static_cast<std::uint32_t>(y % q)};
    acc = field_->add(acc, field_->mul(a, b));
    x /= q;
    y /= q;
  }
  return acc;
}

Elem dot(const Field& field, std::span<const Elem> x, std::span<const Elem> y) {
  if (x.size() != y.size())
    throw Error(ErrorCode::DimensionMismatch,
                std::to_string(x.size()) + " vs " + std::to_string(y.size()) + " coordinates");
  Elem acc{0};
  for (std::size_t i = 0; i < x.size(); ++i) acc = field.add(acc, field.mul(x[i], y[i]));
  return acc;
}

}  // namespace dotcover
