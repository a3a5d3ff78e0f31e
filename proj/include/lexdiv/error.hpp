#pragma once

#include <stdexcept>
#include <string>

namespace lexdiv {

struct parse_error : std::runtime_error {
    explicit parse_error(const std::string& msg) : std::runtime_error(msg) {}
};

struct validation_error : std::runtime_error {
    explicit validation_error(const std::string& msg) : std::runtime_error(msg) {}
};

struct argument_error : std::invalid_argument {
    explicit argument_error(const std::string& msg) : std::invalid_argument(msg) {}
};

struct io_error : std::runtime_error {
    explicit io_error(const std::string& msg) : std::runtime_error(msg) {}
};

struct lookup_error : std::runtime_error {
    explicit lookup_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace lexdiv
