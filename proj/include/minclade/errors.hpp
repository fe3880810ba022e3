#pragma once

#include <stdexcept>
#include <string>

namespace minclade {

// Argument outside the mathematical domain of an operation (e.g. n < 2 for X_n).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A configured size cap was exceeded. The message names the cap.
class SizeError : public std::length_error {
 public:
  SizeError(const std::string& cap_name, long cap_value, long requested)
      : std::length_error("size cap '" + cap_name + "' = " + std::to_string(cap_value) +
                          " exceeded (requested " + std::to_string(requested) + ")"),
        cap_name_(cap_name), cap_value_(cap_value) {}

  auto cap_name() const -> const std::string& { return cap_name_; }
  auto cap_value() const -> long { return cap_value_; }

 private:
  std::string cap_name_;
  long cap_value_;
};

// Floating-point result left the representable range.
class OverflowError : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

// A statistical test cannot be carried out on the supplied data.
class TestInapplicable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace minclade
