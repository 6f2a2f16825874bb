#pragma once

#include <stdexcept>
#include <string>

namespace gerbelab {

// Every failure raised by the library derives from Error; the name() tag is
// what the CLI prints and what tests match on.
class Error : public std::runtime_error {
 public:
  Error(std::string tag, const std::string& what)
      : std::runtime_error(tag + ": " + what), tag_(std::move(tag)) {}
  const std::string& name() const { return tag_; }

 private:
  std::string tag_;
};

#define GERBELAB_ERROR(Name)                                   \
  class Name : public Error {                                  \
   public:                                                     \
    explicit Name(const std::string& what) : Error(#Name, what) {} \
  };

GERBELAB_ERROR(ResolutionError)
GERBELAB_ERROR(EndpointMismatch)
GERBELAB_ERROR(NotOrientationPreserving)
GERBELAB_ERROR(AntipodeError)
GERBELAB_ERROR(CalibrationDiverged)
GERBELAB_ERROR(TranslationSearchFailed)
GERBELAB_ERROR(BoundaryMismatch)
GERBELAB_ERROR(SeamMismatch)
GERBELAB_ERROR(NotThin)
GERBELAB_ERROR(SupportOverlap)
GERBELAB_ERROR(StepTooLarge)
GERBELAB_ERROR(UnknownForm)
GERBELAB_ERROR(GridMismatch)
GERBELAB_ERROR(EndpointDrift)
GERBELAB_ERROR(SchemaError)
GERBELAB_ERROR(InvalidArgument)

#undef GERBELAB_ERROR

}  // namespace gerbelab
