#pragma once

#include <stdexcept>
#include <string>

namespace fbdual {

// Base class for everything this library throws on purpose.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad values passed by the caller (non-finite, out of range, wrong shape).
struct invalid_input : error {
    using error::error;
};

// Parameter combinations or regimes the library deliberately does not handle.
struct unsupported : error {
    using error::error;
};

// Grid too coarse to resolve the requested feature.
struct resolution_error : error {
    using error::error;
};

// More levels requested than the discretization can represent.
struct capacity_error : error {
    using error::error;
};

// An energy scan found no sign change in the searched interval.
struct bracket_error : error {
    using error::error;
};

// An iterative solve failed to reach its tolerance.
struct convergence_error : error {
    using error::error;
};

// A wavefunction failed the parity check required by the operation.
struct sector_error : error {
    using error::error;
};

// Two solvers that must agree produced incompatible results.
struct solver_inconsistency : error {
    using error::error;
};

// A file could not be written or read back.
struct io_error : error {
    using error::error;
};

} // namespace fbdual
