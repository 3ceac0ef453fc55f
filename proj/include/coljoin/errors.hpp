#pragma once

#include <stdexcept>
#include <string>

namespace coljoin {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

#define COLJOIN_DEFINE_ERROR(NAME) \
  struct NAME : Error {            \
    using Error::Error;            \
  }

COLJOIN_DEFINE_ERROR(LengthMismatch);
COLJOIN_DEFINE_ERROR(KindError);
COLJOIN_DEFINE_ERROR(FanoutTooLarge);
COLJOIN_DEFINE_ERROR(IndexOutOfBounds);
COLJOIN_DEFINE_ERROR(EmptyInput);
COLJOIN_DEFINE_ERROR(NotSorted);
COLJOIN_DEFINE_ERROR(DuplicateBuildKeys);
COLJOIN_DEFINE_ERROR(FanoutMismatch);
COLJOIN_DEFINE_ERROR(CapacityExceeded);
COLJOIN_DEFINE_ERROR(TransformMismatch);
COLJOIN_DEFINE_ERROR(PhaseOrderViolation);
COLJOIN_DEFINE_ERROR(SpecInvalid);
COLJOIN_DEFINE_ERROR(UnknownShape);
COLJOIN_DEFINE_ERROR(SchemaError);
COLJOIN_DEFINE_ERROR(Unsupported);

#undef COLJOIN_DEFINE_ERROR

}  // namespace coljoin
