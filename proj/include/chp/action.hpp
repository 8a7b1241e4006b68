#pragma once

#include <compare>
#include <string>

#include "chp/errors.hpp"

namespace chp {

// Transition label: either the internal action tau or a visible name over
// [a-zA-Z0-9_']. "tau" is reserved and never appears in an alphabet.
class Action {
public:
  Action() : tau_(true), name_("tau") {}

  static Action tau() { return Action(); }

  static Action visible(std::string name) {
    if (name.empty()) throw StructureError("empty action label");
    if (name == "tau") throw StructureError("label \"tau\" is reserved for the internal action");
    for (char c : name) {
      if (!valid_char(c))
        throw StructureError("invalid character '" + std::string(1, c) + "' in label \"" + name + "\"");
    }
    Action a;
    a.tau_ = false;
    a.name_ = std::move(name);
    return a;
  }

  bool is_tau() const { return tau_; }
  const std::string& name() const { return name_; }

  friend bool operator==(const Action& a, const Action& b) {
    return a.tau_ == b.tau_ && a.name_ == b.name_;
  }
  friend std::strong_ordering operator<=>(const Action& a, const Action& b) {
    // tau sorts before every visible label
    if (a.tau_ != b.tau_) return a.tau_ ? std::strong_ordering::less : std::strong_ordering::greater;
    return a.name_ <=> b.name_;
  }

  static bool valid_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
           c == '_' || c == '\'';
  }

private:
  bool tau_;
  std::string name_;
};

struct ActionHash {
  std::size_t operator()(const Action& a) const {
    return std::hash<std::string>()(a.name()) ^ (a.is_tau() ? 0x9e3779b9u : 0u);
  }
};

}  // namespace chp
