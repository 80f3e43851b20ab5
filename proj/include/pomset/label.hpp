#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>

#include "pomset/errors.hpp"

namespace pomset {

enum class LoadTag : std::uint8_t { none, acquire };
enum class StoreTag : std::uint8_t { none, release };

// Uninterpreted alphabet symbol.
struct Opaque {
  std::string token;
  auto operator<=>(const Opaque&) const = default;
};

// `reg := [addr]_tag`
struct Load {
  LoadTag tag = LoadTag::none;
  std::string reg;
  std::string addr;
  auto operator<=>(const Load&) const = default;
};

// `[addr]_tag := bit`
struct Store {
  StoreTag tag = StoreTag::none;
  std::string addr;
  int bit = 0;
  auto operator<=>(const Store&) const = default;
};

class Label {
 public:
  using Variant = std::variant<Opaque, Load, Store>;

  Label() : value_(Opaque{}) {}
  Label(Opaque o) : value_(std::move(o)) {}
  Label(Load l) : value_(std::move(l)) {}
  Label(Store s) : value_(std::move(s)) {
    const auto& st = std::get<Store>(value_);
    if (st.bit != 0 && st.bit != 1)
      throw InvalidArgument("store bit must be 0 or 1, got " + std::to_string(st.bit));
  }

  static Label opaque(std::string token) { return Opaque{std::move(token)}; }
  static Label load(LoadTag tag, std::string reg, std::string addr) {
    return Load{tag, std::move(reg), std::move(addr)};
  }
  static Label acquire(std::string reg, std::string addr) {
    return Load{LoadTag::acquire, std::move(reg), std::move(addr)};
  }
  static Label store(StoreTag tag, std::string addr, int bit) {
    return Store{tag, std::move(addr), bit};
  }
  static Label release(std::string addr, int bit = 1) {
    return Store{StoreTag::release, std::move(addr), bit};
  }

  const Variant& value() const noexcept { return value_; }

  bool is_opaque() const noexcept { return std::holds_alternative<Opaque>(value_); }
  bool is_load() const noexcept { return std::holds_alternative<Load>(value_); }
  bool is_store() const noexcept { return std::holds_alternative<Store>(value_); }
  bool is_memory_access() const noexcept { return !is_opaque(); }

  const Load* as_load() const noexcept { return std::get_if<Load>(&value_); }
  const Store* as_store() const noexcept { return std::get_if<Store>(&value_); }
  const Opaque* as_opaque() const noexcept { return std::get_if<Opaque>(&value_); }

  bool is_acquire() const noexcept {
    const auto* l = as_load();
    return l && l->tag == LoadTag::acquire;
  }
  bool is_release() const noexcept {
    const auto* s = as_store();
    return s && s->tag == StoreTag::release;
  }
  bool is_synchronizing() const noexcept { return is_acquire() || is_release(); }

  // Address of a memory access; nullopt for opaque labels.
  std::optional<std::string> address() const {
    if (const auto* l = as_load()) return l->addr;
    if (const auto* s = as_store()) return s->addr;
    return std::nullopt;
  }

  friend bool operator==(const Label&, const Label&) = default;
  friend auto operator<=>(const Label& a, const Label& b) { return a.value_ <=> b.value_; }

  // Notation used in diagnostics: `r0 := [b]_acquire`, `[a]_none := 1`.
  std::string to_string() const {
    std::ostringstream os;
    if (const auto* o = as_opaque()) {
      os << o->token;
    } else if (const auto* l = as_load()) {
      os << l->reg << " := [" << l->addr << "]_" << (l->tag == LoadTag::acquire ? "acquire" : "none");
    } else if (const auto* s = as_store()) {
      os << "[" << s->addr << "]_" << (s->tag == StoreTag::release ? "release" : "none") << " := " << s->bit;
    }
    return os.str();
  }

 private:
  Variant value_;
};

inline std::ostream& operator<<(std::ostream& os, const Label& l) { return os << l.to_string(); }

}  // namespace pomset
