#pragma once

#include <stdexcept>
#include <string>

namespace yardstick {

/// Base of every library error. `code()` is the stable, machine-readable
/// name printed by the CLI as `ERROR:<code>:`.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message);

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

#define YARDSTICK_DEFINE_ERROR(Name, Base)                                 \
    class Name : public Base {                                             \
    public:                                                                \
        explicit Name(const std::string& message) : Base(#Name, message) {} \
                                                                           \
    protected:                                                             \
        Name(std::string code, const std::string& message)                 \
            : Base(std::move(code), message) {}                            \
    }

YARDSTICK_DEFINE_ERROR(ParseError, Error);
YARDSTICK_DEFINE_ERROR(ValueError, Error);
YARDSTICK_DEFINE_ERROR(DuplicateDateError, Error);
// Too few rows, columns or observations; a ValueError for callers that
// only distinguish bad values from bad syntax.
YARDSTICK_DEFINE_ERROR(InsufficientDataError, ValueError);
YARDSTICK_DEFINE_ERROR(WindowNotReadyError, Error);
YARDSTICK_DEFINE_ERROR(EmptyResultError, Error);
YARDSTICK_DEFINE_ERROR(DimensionError, Error);
YARDSTICK_DEFINE_ERROR(ZeroVarianceError, Error);
YARDSTICK_DEFINE_ERROR(EmptySlabError, Error);
YARDSTICK_DEFINE_ERROR(SpecError, Error);
YARDSTICK_DEFINE_ERROR(ConfigError, Error);
YARDSTICK_DEFINE_ERROR(IoError, Error);

#undef YARDSTICK_DEFINE_ERROR

enum class Side { positive, negative };

/// Raised when a two-sided exponential fit lacks samples on one side.
class OneSidedFitError : public Error {
public:
    OneSidedFitError(Side side, std::size_t have, std::size_t need);

    Side side() const noexcept { return side_; }

private:
    Side side_;
};

}  // namespace yardstick
