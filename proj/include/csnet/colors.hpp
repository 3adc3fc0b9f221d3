#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace csnet {

class ColorValue;

// A token type. The four kinds keep every color domain finite and
// enumerable: unit, a closed integer interval, a named symbol set, or a
// product of previously declared colorsets (referenced by name).
struct ColorSet {
  enum class Kind { Unit, IntRange, Enum, Product };

  std::string name;
  Kind kind = Kind::Unit;
  std::int64_t lo = 0;
  std::int64_t hi = 0;                  // IntRange: [lo, hi]
  std::vector<std::string> symbols;     // Enum, in declaration order
  std::vector<std::string> components;  // Product, colorset names

  static ColorSet unit(std::string name = "unit");
  static ColorSet int_range(std::string name, std::int64_t lo, std::int64_t hi);
  static ColorSet enumeration(std::string name, std::vector<std::string> symbols);
  static ColorSet product(std::string name, std::vector<std::string> components);

  // Declaration index of an enum symbol, -1 if absent.
  int symbol_index(const std::string& symbol) const;
  // A Sym value of this enum with its declaration index resolved; throws on
  // non-members or non-enum colorsets.
  ColorValue sym_value(const std::string& symbol) const;

  bool operator==(const ColorSet&) const = default;
};

using ColorSetRegistry = std::map<std::string, ColorSet>;

// A concrete token. Sym values carry the declaration index of their symbol
// so multisets of one enum sort in declaration order; equality ignores the
// index and compares by name.
class ColorValue {
 public:
  enum class Kind { Unit, Int, Sym, Tuple };

  ColorValue() : kind_(Kind::Unit) {}

  static ColorValue unit() { return ColorValue(); }
  static ColorValue of_int(std::int64_t v);
  static ColorValue sym(std::string name, int index = -1);
  static ColorValue tuple(std::vector<ColorValue> elements);

  Kind kind() const { return kind_; }
  std::int64_t int_value() const { return int_; }
  const std::string& symbol() const { return sym_; }
  int symbol_index() const { return sym_index_; }
  const std::vector<ColorValue>& elements() const { return elems_; }

  bool operator==(const ColorValue& other) const;
  bool operator!=(const ColorValue& other) const { return !(*this == other); }
  // Total order: Unit < Int < Sym < Tuple; Int by value, Sym by declaration
  // index then name, Tuple lexicographic.
  bool operator<(const ColorValue& other) const;

  // Canonical text: "()", "42", "'red", "(1, 'red)".
  std::string to_text() const;

 private:
  Kind kind_;
  std::int64_t int_ = 0;
  std::string sym_;
  int sym_index_ = -1;
  std::vector<ColorValue> elems_;
};

// Structural violations found by validators; `detail` is human-readable and
// machine-splittable after the stable `code`.
struct Violation {
  std::string code;
  std::string detail;
  bool operator==(const Violation&) const = default;
};

// Checks the colorset declarations themselves (ranges, enum symbol lists,
// product references and reference cycles).
std::vector<Violation> validate_colorsets(const ColorSetRegistry& registry);

// Value/colorset conformance. The registry resolves product components.
bool conforms(const ColorValue& value, const ColorSet& cs, const ColorSetRegistry& registry);

// Same check, but returns the value with enum declaration indices filled in
// (recursively); nullopt when the value does not conform.
std::optional<ColorValue> canonicalize(const ColorValue& value, const ColorSet& cs,
                                       const ColorSetRegistry& registry);

}  // namespace csnet
