#include "structok/error.h"

namespace structok {

const char* errorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedVlq: return "MalformedVlq";
    case ErrorCode::UnexpectedEof: return "UnexpectedEof";
    case ErrorCode::UnsupportedDivision: return "UnsupportedDivision";
    case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::MalformedInput: return "MalformedInput";
    case ErrorCode::EmptyCorpus: return "EmptyCorpus";
    case ErrorCode::InsufficientContent: return "InsufficientContent";
    case ErrorCode::BandEmpty: return "BandEmpty";
    case ErrorCode::TooShort: return "TooShort";
    case ErrorCode::InsufficientCorpus: return "InsufficientCorpus";
    case ErrorCode::UndefinedImprovement: return "UndefinedImprovement";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace structok
