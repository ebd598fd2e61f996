#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace causkit {

enum class ErrorKind {
  BackendMismatch,
  ShapeMismatch,
  DuplicateLabel,
  InvalidPermutation,
  NoSuchWire,
  CyclicWiring,
  NotOneWay,
  UnsupportedBackend,
  SyntaxError,
  EmbedMismatch,
  NotFirstOrderBased,
  UnsupportedIso,
  UnsupportedType,
  BadPartition,
  UnknownEvent,
  TooManyEvents,
  CombinatorialBlowup,
  UnsupportedConnective,
  BudgetExceeded,
  NotCausalInput,
  UnsupportedCombination,
  InvalidData,
};

std::string_view to_string(ErrorKind kind);

/**
 * Every failure raised by the library. The kind is stable and is what tests
 * and the CLI switch on; the message is for humans.
 **/
class CausError : public std::runtime_error {
 public:
  CausError(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace causkit
