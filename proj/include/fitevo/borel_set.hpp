#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace fitevo {

/// One interval component of a BorelSet. A singleton {x} is lo = hi with both
/// ends closed.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool lo_closed = true;
  bool hi_closed = true;

  bool contains(double x) const {
    return (lo_closed ? x >= lo : x > lo) && (hi_closed ? x <= hi : x < hi);
  }
  bool is_empty() const {
    return lo > hi || (lo == hi && !(lo_closed && hi_closed));
  }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Finite union of disjoint intervals in [0,1], sorted by lower end.
///
/// This is the only set algebra the model needs: every observable region and
/// every set in the shape/killing formulas is a finite interval union.
class BorelSet {
 public:
  /// The empty set.
  BorelSet() = default;

  /// Validates: components nonempty, inside [0,1], sorted and disjoint.
  explicit BorelSet(std::vector<Interval> components);

  static BorelSet empty() { return BorelSet(); }
  static BorelSet unit() { return closed(0.0, 1.0); }
  static BorelSet closed(double lo, double hi);
  static BorelSet singleton(double x);
  static BorelSet interval(double lo, double hi, bool lo_closed, bool hi_closed);
  /// [0,f] when `include_f`, else [0,f).
  static BorelSet left(double f, bool include_f);

  /// Parses "[0,0.5)", "(0.5,1]", "{0.5}", "[0,0.1]U(0.4,0.5)", "{}" / "empty".
  static BorelSet parse(std::string_view text);

  bool contains(double x) const;
  bool is_empty() const { return components_.empty(); }
  const std::vector<Interval>& components() const { return components_; }

  /// Intersection with a single interval.
  BorelSet intersect(const Interval& other) const;

  std::string to_string() const;

  friend bool operator==(const BorelSet&, const BorelSet&) = default;

 private:
  std::vector<Interval> components_;
};

}  // namespace fitevo
