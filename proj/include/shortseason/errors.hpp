#pragma once

#include <stdexcept>
#include <string>

namespace shortseason {

// Base class for every error thrown by the library. The CLI prefixes messages
// with module() so failures can be traced to the stage that raised them.
class Error : public std::runtime_error {
 public:
  Error(std::string module, const std::string& what)
      : std::runtime_error(what), module_(std::move(module)) {}
  const std::string& module() const { return module_; }

 private:
  std::string module_;
};

#define SHORTSEASON_DEFINE_ERROR(Name)                          \
  class Name : public Error {                                   \
   public:                                                      \
    explicit Name(const std::string& what,                      \
                  std::string module = #Name)                   \
        : Error(std::move(module), what) {}                     \
  };

SHORTSEASON_DEFINE_ERROR(FeasibilityError)
SHORTSEASON_DEFINE_ERROR(DimensionError)
SHORTSEASON_DEFINE_ERROR(DomainError)
SHORTSEASON_DEFINE_ERROR(DegenerateInstanceError)
SHORTSEASON_DEFINE_ERROR(DegenerateDataError)
SHORTSEASON_DEFINE_ERROR(DataError)
SHORTSEASON_DEFINE_ERROR(ConfigError)
SHORTSEASON_DEFINE_ERROR(KeyError)
SHORTSEASON_DEFINE_ERROR(IngestError)

#undef SHORTSEASON_DEFINE_ERROR

}  // namespace shortseason
