#pragma once

#include <stdexcept>
#include <string>

namespace ecpe {

// Raised for malformed or inconsistent input data (files, records, shapes).
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace ecpe
