#include "yardstick/errors.hpp"

namespace yardstick {

Error::Error(std::string code, const std::string& message)
    : std::runtime_error(message), code_(std::move(code)) {}

OneSidedFitError::OneSidedFitError(Side side, std::size_t have, std::size_t need)
    : Error("OneSidedFitError",
            std::string(side == Side::positive ? "positive" : "negative") +
                " side has " + std::to_string(have) + " values, need at least " +
                std::to_string(need)),
      side_(side) {}

}  // namespace yardstick
