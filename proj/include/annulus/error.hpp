#pragma once

#include <stdexcept>
#include <string>

namespace annulus {

// Every failure carries a stable code (e.g. "NotConnected") plus a human message.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& msg)
      : std::runtime_error(code + ": " + msg), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

  // Codes that can only fire when an implementation invariant is broken.
  bool internal() const {
    return code_ == "NoMoveFound" || code_ == "CompletionStuck" || code_ == "Internal";
  }

 private:
  std::string code_;
};

[[noreturn]] inline void fail(const std::string& code, const std::string& msg) {
  throw Error(code, msg);
}

}  // namespace annulus
