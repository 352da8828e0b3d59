#pragma once

#include <stdexcept>
#include <string>

namespace beamgap {

// Base class for all library failures. CLI maps these to exit code 1;
// anything the option parser rejects is exit code 2.
class error : public std::runtime_error {
public:
  explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

// Config file cannot be parsed or violates a graph invariant.
class config_error : public error {
public:
  using error::error;
};

// A constructed geometry is inadmissible (segment leaves the cell, bad angle).
class geometry_error : public error {
public:
  using error::error;
};

// Inconsistent periodic identifications or a disconnected stiff component.
class structure_error : public error {
public:
  using error::error;
};

// Closed-form evaluation requested at (or too close to) a resonance pole.
class pole_error : public error {
public:
  pole_error(const std::string& msg, double pole) : error(msg), pole_location(pole) {}
  double pole_location;
};

// Soft-component solve requested too close to a clamped eigenvalue.
class resonance_error : public error {
public:
  resonance_error(const std::string& msg, double nearest)
      : error(msg), nearest_eigenvalue(nearest) {}
  double nearest_eigenvalue;
};

// Solver breakdowns: eigensolver failure, tensor asymmetry beyond round-off,
// non-convergent fixed-point iterations.
class numeric_error : public error {
public:
  using error::error;
};

}  // namespace beamgap
