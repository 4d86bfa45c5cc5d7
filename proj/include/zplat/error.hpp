#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace zplat {

enum class ErrorCode {
  InvalidArgument,
  OrderNotPPower,
  OrderCapExceeded,
  NotAGroup,
  NotASubgroup,
  NotNormal,
  WrongOrder,
  GroupMismatch,
  NotAHomomorphism,
  NotIdempotentModP,
  PrecisionExhausted,
  NotIndecomposable,
  CandidateInvalid,
  PreconditionFailed,
  InternalInconsistency,
  Schema,
};

std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::OrderNotPPower: return "OrderNotPPower";
    case ErrorCode::OrderCapExceeded: return "OrderCapExceeded";
    case ErrorCode::NotAGroup: return "NotAGroup";
    case ErrorCode::NotASubgroup: return "NotASubgroup";
    case ErrorCode::NotNormal: return "NotNormal";
    case ErrorCode::WrongOrder: return "WrongOrder";
    case ErrorCode::GroupMismatch: return "GroupMismatch";
    case ErrorCode::NotAHomomorphism: return "NotAHomomorphism";
    case ErrorCode::NotIdempotentModP: return "NotIdempotentModP";
    case ErrorCode::PrecisionExhausted: return "PrecisionExhausted";
    case ErrorCode::NotIndecomposable: return "NotIndecomposable";
    case ErrorCode::CandidateInvalid: return "CandidateInvalid";
    case ErrorCode::PreconditionFailed: return "PreconditionFailed";
    case ErrorCode::InternalInconsistency: return "InternalInconsistency";
    case ErrorCode::Schema: return "Schema";
  }
  return "Unknown";
}

}  // namespace zplat
