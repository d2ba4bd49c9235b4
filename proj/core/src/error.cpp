#include "cpdsss/error.hpp"

namespace cpdsss {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidLength: return "invalid length";
    case ErrorCode::InvalidRoot: return "invalid root";
    case ErrorCode::LengthMismatch: return "length mismatch";
    case ErrorCode::DimensionMismatch: return "dimension mismatch";
    case ErrorCode::ImpulseTooLong: return "impulse longer than frame";
    case ErrorCode::IndexOutOfRange: return "index out of range";
    case ErrorCode::WindowOverrun: return "window overrun";
    case ErrorCode::MissingEstimate: return "missing channel estimate";
    case ErrorCode::EmptyStream: return "empty stream";
    case ErrorCode::InvalidConfig: return "invalid config";
    case ErrorCode::Io: return "i/o error";
  }
  return "unknown error";
}

}  // namespace cpdsss
