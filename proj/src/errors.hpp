#pragma once

#include <stdexcept>
#include <string>

namespace radar_ood {

// Error taxonomy mirrored by the CLI exit codes:
//   0 success, 2 I/O, 3 file/config format, 4 protocol violation, 5 degenerate data.

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Violations of the training/evaluation protocol (e.g. OOD frames in a training set).
class ProtocolError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Inputs that are structurally valid but unusable (empty lists, single-class score files).
class DegenerateDataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace radar_ood
