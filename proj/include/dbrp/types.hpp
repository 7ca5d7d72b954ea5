#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace dbrp {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

inline double euclidean(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

/// Functional object groups. Stacking stability is decided per group, never per instance.
enum class Category { PrimaryBase, SecondaryBase, LowMass, HighMass };

inline constexpr std::array<Category, 4> kAllCategories{
    Category::PrimaryBase, Category::SecondaryBase, Category::LowMass, Category::HighMass};

/// Fixed stacking-stability lookup indexed by (top, base).
///
///   primary base   <- secondary base, low-mass, high-mass
///   secondary base <- low-mass
///   low-mass, high-mass support nothing
class CategoryTable {
 public:
  constexpr bool stackable(Category top, Category base) const {
    return table_[index(top)][index(base)];
  }

 private:
  static constexpr std::size_t index(Category c) { return static_cast<std::size_t>(c); }

  // rows: top, columns: base (Primary, Secondary, LowMass, HighMass)
  std::array<std::array<bool, 4>, 4> table_{{
      {false, false, false, false},  // PrimaryBase on ...
      {true, false, false, false},   // SecondaryBase on ...
      {true, true, false, false},    // LowMass on ...
      {true, false, false, false},   // HighMass on ...
  }};
};

inline constexpr CategoryTable kCategoryTable{};

constexpr bool stackable(Category top, Category base) { return kCategoryTable.stackable(top, base); }

std::string_view to_string(Category c);
std::optional<Category> parse_category(std::string_view s);

/// Which stacking primitives a planner may use.
///   None    - move only
///   Static  - stacks allowed, but a base that supports something is locked in place
///   Dynamic - stacks allowed and bases carry their cargo when moved
enum class StackingMode { None, Static, Dynamic };

struct Table {
  double width = 1.0;
  double height = 1.0;

  friend bool operator==(const Table&, const Table&) = default;
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidAction : public Error {
 public:
  using Error::Error;
};
class InvalidPlan : public Error {
 public:
  using Error::Error;
};
class InvalidScene : public Error {
 public:
  using Error::Error;
};
class ResolutionTooCoarse : public Error {
 public:
  using Error::Error;
};
class CountMismatch : public Error {
 public:
  using Error::Error;
};
class GenerationFailed : public Error {
 public:
  using Error::Error;
};
class NoPlanFound : public Error {
 public:
  using Error::Error;
};
class NoActions : public Error {
 public:
  using Error::Error;
};
class ZeroSuccess : public Error {
 public:
  using Error::Error;
};
class EmptySet : public Error {
 public:
  using Error::Error;
};

}  // namespace dbrp
