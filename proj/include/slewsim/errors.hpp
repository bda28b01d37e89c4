#pragma once

#include <stdexcept>
#include <string>

namespace slewsim {

// Base class for all recoverable faults raised by the library.
struct SimError : std::runtime_error {
    explicit SimError(const std::string& msg) : std::runtime_error(msg) {}
};

// Rotation axis between two antiparallel unit vectors is undefined.
struct AntiparallelAxes : SimError {
    using SimError::SimError;
};

// A corner of the inertia uncertainty box makes (I + I*^-1 D) singular.
struct SingularPerturbation : SimError {
    using SimError::SimError;
};

// Cluster geometry produced a zero facet normal (collinear spin axes).
struct DegenerateGeometry : SimError {
    using SimError::SimError;
};

// Momentum envelope cannot absorb the disturbance accumulation.
struct InfeasibleActuation : SimError {
    using SimError::SimError;
};

// Torque budget fails the closed-form reaching-phase feasibility bound.
struct InfeasibleTorque : SimError {
    using SimError::SimError;
};

// Margin factor k lies outside its admissible interval.
struct InvalidMargin : SimError {
    using SimError::SimError;
};

// Forbidden zones too wide / too many for the requested spacing.
struct InfeasibleSpacing : SimError {
    using SimError::SimError;
};

// Boresight aligned with a forbidden axis: repulsion direction undefined.
struct BoresightOnForbiddenAxis : SimError {
    using SimError::SimError;
};

// Rejection sampling failed to draw an admissible sample.
struct RejectionExhausted : SimError {
    using SimError::SimError;
};

// Scenario file / override parsing problems.
struct ConfigError : SimError {
    using SimError::SimError;
};

// Filesystem failures, annotated with the offending path.
struct IoError : SimError {
    using SimError::SimError;
};

}  // namespace slewsim
