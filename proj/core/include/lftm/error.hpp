#pragma once

#include <stdexcept>
#include <string>

namespace lftm {

enum class ErrorKind {
  Input,        // unreadable files, bad flags, malformed data
  EmptyResult,  // preprocessing removed every document
  Mismatch,     // model, corpus and embeddings disagree
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace lftm
