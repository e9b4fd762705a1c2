#pragma once

#include <stdexcept>
#include <string>

namespace nrgit {

// A mathematical precondition does not hold (CLI exit status 1).
struct Refusal : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A search ran out of its configured bound (CLI exit status 3).
struct BoundExhausted : std::runtime_error {
  int bound = 0;
  BoundExhausted(const std::string& msg, int b) : std::runtime_error(msg), bound(b) {}
};

// A computed certificate failed its exact re-check.
struct VerificationFailure : std::logic_error {
  using std::logic_error::logic_error;
};

}  // namespace nrgit
