#pragma once

#include <stdexcept>
#include <string>

namespace daeimp {

// Base for everything this library throws on purpose.
class imputer_error : public std::runtime_error {
public:
    explicit imputer_error(const std::string& what) : std::runtime_error(what) {}
};

// Matrix/layer dimension mismatches; message names both shapes.
class shape_error : public imputer_error {
public:
    using imputer_error::imputer_error;
};

// File reading/writing and malformed CSV/JSON inputs.
class io_error : public imputer_error {
public:
    using imputer_error::imputer_error;
};

// Bad configuration values or invalid schema declarations.
class config_error : public imputer_error {
public:
    using imputer_error::imputer_error;
};

// Degenerate data conditions: fully-missing columns, empty scoring masks,
// all-zero loss masks, undefined error ratios.
class data_error : public imputer_error {
public:
    using imputer_error::imputer_error;
};

// Non-finite loss or gradients during training; carries the epoch index.
class divergence_error : public imputer_error {
public:
    divergence_error(const std::string& what, std::size_t epoch)
        : imputer_error(what), epoch_(epoch) {}
    std::size_t epoch() const { return epoch_; }

private:
    std::size_t epoch_;
};

} // namespace daeimp
