// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <utility>
#include <variant>

namespace isync {

/// Minimal value-or-error holder (std::expected is C++23).
template <typename T, typename E>
class Expected {
 public:
  Expected(T value) : v_(std::in_place_index<0>, std::move(value)) {}
  Expected(E error) : v_(std::in_place_index<1>, std::move(error)) {}

  bool ok() const { return v_.index() == 0; }
  explicit operator bool() const { return ok(); }

  T& value() {
    if (!ok()) throw std::logic_error("Expected: value() on error");
    return std::get<0>(v_);
  }
  const T& value() const {
    if (!ok()) throw std::logic_error("Expected: value() on error");
    return std::get<0>(v_);
  }
  E& error() {
    if (ok()) throw std::logic_error("Expected: error() on value");
    return std::get<1>(v_);
  }
  const E& error() const {
    if (ok()) throw std::logic_error("Expected: error() on value");
    return std::get<1>(v_);
  }

 private:
  std::variant<T, E> v_;
};

}  // namespace isync
