#pragma once

#include "lorentz/vec.hpp"

#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace lorentz {

/// Closed-form scalar expression in t, x1, x2, x3 with constants pi and T.
///
/// Grammar: + - * / ^, unary minus, parentheses, |expr| for absolute value,
/// and the functions sin cos exp log sqrt abs pow(a, b). The unicode
/// operators U+00D7, U+00F7 and U+2212 are accepted as *, / and -.
class Expression {
 public:
  /// Throws Error(ConfigError) with the offending column on malformed input.
  static Expression parse(std::string_view text);

  double evaluate(double t, const Vec3& x, double period) const;
  const std::string& source() const { return source_; }

  struct Node;

 private:
  std::string source_;
  std::shared_ptr<const std::vector<Node>> nodes_;
  int root_ = -1;
};

}  // namespace lorentz
