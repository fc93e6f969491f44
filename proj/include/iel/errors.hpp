#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "iel/types.hpp"

namespace iel {

/// Exit codes reported by the CLI; exceptions carry the matching code.
enum class ErrorCode : int {
  generic = 1,
  config_invalid = 2,
  uncoverable = 3,
  non_hyperbolic = 4,
  no_pass = 5,
  state_escaped = 6,
  non_finite = 7,
  domain = 8,
  empty = 9,
  insufficient_data = 10,
  internal = 12,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

#define IEL_DEFINE_ERROR(Name, Code) \
  struct Name : Error {              \
    explicit Name(const std::string& m) : Error(ErrorCode::Code, m) {} \
  }

IEL_DEFINE_ERROR(StateEscaped, state_escaped);
IEL_DEFINE_ERROR(NonFinite, non_finite);
IEL_DEFINE_ERROR(DomainError, domain);
IEL_DEFINE_ERROR(EmptyInput, empty);
IEL_DEFINE_ERROR(EmptyResult, empty);
IEL_DEFINE_ERROR(InvalidDim, domain);
IEL_DEFINE_ERROR(OrbitNotClosed, domain);
IEL_DEFINE_ERROR(NonHyperbolic, non_hyperbolic);
IEL_DEFINE_ERROR(UntrustedSplitting, non_hyperbolic);
IEL_DEFINE_ERROR(InsufficientData, insufficient_data);
IEL_DEFINE_ERROR(NoPass, no_pass);
IEL_DEFINE_ERROR(InitialStateOutsideK, domain);
IEL_DEFINE_ERROR(ReferenceFailed, generic);
IEL_DEFINE_ERROR(InternalError, internal);

#undef IEL_DEFINE_ERROR

/// Some K-cells admit no covering candidate signal.
struct Uncoverable : Error {
  Uncoverable(std::vector<Index> bad_cells, const std::string& m)
      : Error(ErrorCode::uncoverable, m), cells(std::move(bad_cells)) {}
  std::vector<Index> cells;
};

/// Config rejected by schema validation; pointers name the offending fields.
struct ConfigInvalid : Error {
  ConfigInvalid(std::vector<std::string> ptrs, const std::string& m)
      : Error(ErrorCode::config_invalid, m), pointers(std::move(ptrs)) {}
  std::vector<std::string> pointers;
};

}  // namespace iel
