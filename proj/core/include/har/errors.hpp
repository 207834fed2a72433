#pragma once

#include <stdexcept>
#include <string>

namespace har {

// All recoverable failures carry a machine-parsable class name so the CLI
// can report them uniformly.
class Error : public std::runtime_error {
public:
  Error(std::string cls, const std::string& msg)
      : std::runtime_error(msg), cls_(std::move(cls)) {}
  const std::string& error_class() const { return cls_; }

private:
  std::string cls_;
};

#define HAR_DEFINE_ERROR(Name)                                    \
  class Name : public Error {                                     \
  public:                                                         \
    explicit Name(const std::string& msg) : Error(#Name, msg) {}  \
  }

HAR_DEFINE_ERROR(ZeroQuaternion);
HAR_DEFINE_ERROR(SpecMismatch);
HAR_DEFINE_ERROR(ShapeMismatch);
HAR_DEFINE_ERROR(MissingCache);
HAR_DEFINE_ERROR(DegenerateBatch);
HAR_DEFINE_ERROR(BadConfig);
HAR_DEFINE_ERROR(CorruptCheckpoint);
HAR_DEFINE_ERROR(RaggedMatrix);
HAR_DEFINE_ERROR(UnknownLabel);
HAR_DEFINE_ERROR(ChannelCountMismatch);
HAR_DEFINE_ERROR(ClassTooSmall);
HAR_DEFINE_ERROR(BadSpec);
HAR_DEFINE_ERROR(IoError);

#undef HAR_DEFINE_ERROR

}  // namespace har
