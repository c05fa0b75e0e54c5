#pragma once

#include <stdexcept>
#include <string>

namespace nemsizer
{
    /// Base of every exception thrown by the library.
    class Error : public std::runtime_error
    {
      public:
        using std::runtime_error::runtime_error;
    };

    /// Malformed input or a violated model constraint (bad tariff, bad CSV
    /// row, inverted prices, ...).
    class ValidationError : public Error
    {
      public:
        using Error::Error;
    };

    /// A numerical routine produced a non-finite value or failed to converge.
    class NumericalError : public Error
    {
      public:
        using Error::Error;
    };
}
