#pragma once

#include <stdexcept>
#include <string>

namespace planarprob {

// Bad input data: mismatched sizes, dangling endpoints, malformed encodings.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// A request exceeded a configured size limit; the message names the limit.
class ResourceError : public std::runtime_error {
public:
    explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace planarprob
