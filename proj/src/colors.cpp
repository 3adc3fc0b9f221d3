#include "csnet/colors.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "csnet/errors.hpp"

namespace csnet {

ColorSet ColorSet::unit(std::string name) {
  ColorSet cs;
  cs.name = std::move(name);
  cs.kind = Kind::Unit;
  return cs;
}

ColorSet ColorSet::int_range(std::string name, std::int64_t lo, std::int64_t hi) {
  ColorSet cs;
  cs.name = std::move(name);
  cs.kind = Kind::IntRange;
  cs.lo = lo;
  cs.hi = hi;
  return cs;
}

ColorSet ColorSet::enumeration(std::string name, std::vector<std::string> symbols) {
  ColorSet cs;
  cs.name = std::move(name);
  cs.kind = Kind::Enum;
  cs.symbols = std::move(symbols);
  return cs;
}

ColorSet ColorSet::product(std::string name, std::vector<std::string> components) {
  ColorSet cs;
  cs.name = std::move(name);
  cs.kind = Kind::Product;
  cs.components = std::move(components);
  return cs;
}

int ColorSet::symbol_index(const std::string& symbol) const {
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    if (symbols[i] == symbol) return static_cast<int>(i);
  }
  return -1;
}

ColorValue ColorSet::sym_value(const std::string& symbol) const {
  if (kind != Kind::Enum) throw Error("colorset " + name + " is not an enum");
  int idx = symbol_index(symbol);
  if (idx < 0) throw Error("symbol " + symbol + " is not a member of enum " + name);
  return ColorValue::sym(symbol, idx);
}

ColorValue ColorValue::of_int(std::int64_t v) {
  ColorValue cv;
  cv.kind_ = Kind::Int;
  cv.int_ = v;
  return cv;
}

ColorValue ColorValue::sym(std::string name, int index) {
  ColorValue cv;
  cv.kind_ = Kind::Sym;
  cv.sym_ = std::move(name);
  cv.sym_index_ = index;
  return cv;
}

ColorValue ColorValue::tuple(std::vector<ColorValue> elements) {
  ColorValue cv;
  cv.kind_ = Kind::Tuple;
  cv.elems_ = std::move(elements);
  return cv;
}

bool ColorValue::operator==(const ColorValue& other) const {
  if (kind_ != other.kind_) return false;
  switch (kind_) {
    case Kind::Unit:
      return true;
    case Kind::Int:
      return int_ == other.int_;
    case Kind::Sym:
      return sym_ == other.sym_;
    case Kind::Tuple:
      return elems_ == other.elems_;
  }
  return false;
}

bool ColorValue::operator<(const ColorValue& other) const {
  if (kind_ != other.kind_) return static_cast<int>(kind_) < static_cast<int>(other.kind_);
  switch (kind_) {
    case Kind::Unit:
      return false;
    case Kind::Int:
      return int_ < other.int_;
    case Kind::Sym:
      if (sym_index_ != other.sym_index_) return sym_index_ < other.sym_index_;
      return sym_ < other.sym_;
    case Kind::Tuple:
      return std::lexicographical_compare(elems_.begin(), elems_.end(), other.elems_.begin(),
                                          other.elems_.end());
  }
  return false;
}

std::string ColorValue::to_text() const {
  switch (kind_) {
    case Kind::Unit:
      return "()";
    case Kind::Int:
      return std::to_string(int_);
    case Kind::Sym:
      return "'" + sym_;
    case Kind::Tuple: {
      std::ostringstream out;
      out << "(";
      for (std::size_t i = 0; i < elems_.size(); ++i) {
        if (i) out << ", ";
        out << elems_[i].to_text();
      }
      out << ")";
      return out.str();
    }
  }
  return "";
}

namespace {

// Cycle check over product component references. `state`: 0 unseen, 1 on
// stack, 2 done.
bool has_cycle(const std::string& name, const ColorSetRegistry& registry,
               std::map<std::string, int>& state) {
  auto it = registry.find(name);
  if (it == registry.end()) return false;  // dangling reported separately
  int& st = state[name];
  if (st == 1) return true;
  if (st == 2) return false;
  st = 1;
  if (it->second.kind == ColorSet::Kind::Product) {
    for (const auto& comp : it->second.components) {
      if (has_cycle(comp, registry, state)) return true;
    }
  }
  st = 2;
  return false;
}

}  // namespace

std::vector<Violation> validate_colorsets(const ColorSetRegistry& registry) {
  std::vector<Violation> out;
  for (const auto& [name, cs] : registry) {
    if (cs.name != name) {
      out.push_back({"COLORSET_NAME", name + " registered under a different key"});
    }
    switch (cs.kind) {
      case ColorSet::Kind::Unit:
        break;
      case ColorSet::Kind::IntRange:
        if (cs.lo > cs.hi) {
          out.push_back({"COLORSET_RANGE", name + " has lo " + std::to_string(cs.lo) +
                                               " > hi " + std::to_string(cs.hi)});
        }
        break;
      case ColorSet::Kind::Enum: {
        if (cs.symbols.empty()) {
          out.push_back({"COLORSET_EMPTY_ENUM", name + " declares no symbols"});
        }
        std::set<std::string> seen;
        for (const auto& s : cs.symbols) {
          if (!seen.insert(s).second) {
            out.push_back({"COLORSET_DUP_SYMBOL", name + " repeats symbol " + s});
          }
        }
        break;
      }
      case ColorSet::Kind::Product:
        for (const auto& comp : cs.components) {
          if (!registry.count(comp)) {
            out.push_back({"COLORSET_DANGLING_REF", name + " references unknown colorset " + comp});
          }
        }
        break;
    }
  }
  std::map<std::string, int> state;
  for (const auto& [name, cs] : registry) {
    if (cs.kind == ColorSet::Kind::Product && state[name] == 0) {
      if (has_cycle(name, registry, state)) {
        out.push_back({"COLORSET_CYCLE", "product colorset cycle through " + name});
      }
    }
  }
  return out;
}

bool conforms(const ColorValue& value, const ColorSet& cs, const ColorSetRegistry& registry) {
  return canonicalize(value, cs, registry).has_value();
}

std::optional<ColorValue> canonicalize(const ColorValue& value, const ColorSet& cs,
                                       const ColorSetRegistry& registry) {
  switch (cs.kind) {
    case ColorSet::Kind::Unit:
      if (value.kind() != ColorValue::Kind::Unit) return std::nullopt;
      return value;
    case ColorSet::Kind::IntRange:
      if (value.kind() != ColorValue::Kind::Int) return std::nullopt;
      if (value.int_value() < cs.lo || value.int_value() > cs.hi) return std::nullopt;
      return value;
    case ColorSet::Kind::Enum: {
      if (value.kind() != ColorValue::Kind::Sym) return std::nullopt;
      int idx = cs.symbol_index(value.symbol());
      if (idx < 0) return std::nullopt;
      return ColorValue::sym(value.symbol(), idx);
    }
    case ColorSet::Kind::Product: {
      if (value.kind() != ColorValue::Kind::Tuple) return std::nullopt;
      if (value.elements().size() != cs.components.size()) return std::nullopt;
      std::vector<ColorValue> elems;
      elems.reserve(value.elements().size());
      for (std::size_t i = 0; i < cs.components.size(); ++i) {
        auto comp = registry.find(cs.components[i]);
        if (comp == registry.end()) return std::nullopt;
        auto canon = canonicalize(value.elements()[i], comp->second, registry);
        if (!canon) return std::nullopt;
        elems.push_back(std::move(*canon));
      }
      return ColorValue::tuple(std::move(elems));
    }
  }
  return std::nullopt;
}

}  // namespace csnet
