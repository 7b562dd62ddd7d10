#ifndef LATMOVE_ERRORS_HPP
#define LATMOVE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace latmove {

// Error taxonomy shared by every module. Each failure carries a stable code
// so CLI layers can map it to an exit status without string matching.
enum class ErrorCode {
    InvalidInput,
    NotFullDimensional,
    NotAVertex,
    IllegalMove,
    OutOfBox,
    Unsupported,
    NotASimplex,
    NotInConvexPosition,
    NotAPentagon,
    NotFlat,
    NotStronglyFlat,
    TooLarge,
    UnknownNode,
    ParseError,
    Internal,
};

inline const char* error_code_name(ErrorCode c) {
    switch (c) {
        case ErrorCode::InvalidInput: return "InvalidInput";
        case ErrorCode::NotFullDimensional: return "NotFullDimensional";
        case ErrorCode::NotAVertex: return "NotAVertex";
        case ErrorCode::IllegalMove: return "IllegalMove";
        case ErrorCode::OutOfBox: return "OutOfBox";
        case ErrorCode::Unsupported: return "Unsupported";
        case ErrorCode::NotASimplex: return "NotASimplex";
        case ErrorCode::NotInConvexPosition: return "NotInConvexPosition";
        case ErrorCode::NotAPentagon: return "NotAPentagon";
        case ErrorCode::NotFlat: return "NotFlat";
        case ErrorCode::NotStronglyFlat: return "NotStronglyFlat";
        case ErrorCode::TooLarge: return "TooLarge";
        case ErrorCode::UnknownNode: return "UnknownNode";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::Internal: return "Internal";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

    ErrorCode code() const { return code_; }

  private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace latmove

#endif
