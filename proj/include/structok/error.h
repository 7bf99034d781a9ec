// Error type shared by all structok modules.

#ifndef STRUCTOK_ERROR_H_
#define STRUCTOK_ERROR_H_

#include <stdexcept>
#include <string>

namespace structok {

enum class ErrorCode {
  MalformedVlq,
  UnexpectedEof,
  UnsupportedDivision,
  UnsupportedFormat,
  MalformedInput,
  EmptyCorpus,
  InsufficientContent,
  BandEmpty,
  TooShort,
  InsufficientCorpus,
  UndefinedImprovement,
  InvalidArgument,
  IoError,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

const char* errorCodeName(ErrorCode code);

}  // namespace structok

#endif  // STRUCTOK_ERROR_H_
