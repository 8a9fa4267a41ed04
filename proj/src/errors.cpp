#include "hfric/errors.hpp"

namespace hfric {

ParseError::ParseError(const std::string& source, std::size_t line, const std::string& what)
    : InputError(source + ":" + std::to_string(line) + ": " + what), line_(line) {}

} // namespace hfric
