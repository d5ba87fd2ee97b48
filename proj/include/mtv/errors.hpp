#pragma once

#include <stdexcept>
#include <string>

namespace mtv {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error { using Error::Error; };
class InvertibilityError : public Error { using Error::Error; };
class RegularityError : public Error { using Error::Error; };
class SignatureError : public Error { using Error::Error; };
class LevelSetError : public Error { using Error::Error; };
class GluingError : public Error { using Error::Error; };
class DegeneracyError : public Error { using Error::Error; };
class ConditioningError : public Error { using Error::Error; };
class ValidationError : public Error { using Error::Error; };
class UsageError : public Error { using Error::Error; };

}  // namespace mtv
