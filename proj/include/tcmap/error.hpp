#ifndef TCMAP_ERROR_HPP
#define TCMAP_ERROR_HPP

#include <stdexcept>
#include <string>

namespace tcmap {

// Every failure raised by the library derives from Error, so callers (the CLI
// in particular) can map any module failure onto a single exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed domain-spec text. Carries the 1-based line when known.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line = 0)
      : Error(line > 0 ? "parse error (line " + std::to_string(line) + "): " + what
                       : "parse error: " + what),
        line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

// Orientation, nesting or regularity checks on the input curves failed.
class GeometryError : public Error {
 public:
  explicit GeometryError(const std::string& what) : Error("geometry error: " + what) {}
};

// Argument outside the domain of a function (z = 0 for J, rho <= 1, a point
// outside the region, ...).
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error("domain error: " + what) {}
};

class BranchCutError : public DomainError {
 public:
  explicit BranchCutError(const std::string& what) : DomainError(what) {}
};

// Interior evaluation requested too close to the boundary nodes.
class NearBoundaryError : public Error {
 public:
  explicit NearBoundaryError(const std::string& what)
      : Error("near-boundary error: " + what + " (refine the boundary sampling)") {}
};

// A function that must be zero-free on the boundary is not.
class BoundaryZeroError : public Error {
 public:
  explicit BoundaryZeroError(const std::string& what) : Error("boundary-zero error: " + what) {}
};

// A computed quantity failed a consistency check (non-integer residue, ...).
class AccuracyError : public Error {
 public:
  explicit AccuracyError(const std::string& what) : Error("accuracy error: " + what) {}
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : Error("convergence error: " + what + " (residual " + std::to_string(residual) + ")"),
        residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

// Coincident roots where two distinct ones are required.
class DegeneracyError : public Error {
 public:
  explicit DegeneracyError(const std::string& what) : Error("degeneracy error: " + what) {}
};

class ConsistencyError : public Error {
 public:
  explicit ConsistencyError(const std::string& what) : Error("consistency error: " + what) {}
};

// Removable or genuine singularity hit by a pointwise formula.
class SingularityError : public Error {
 public:
  explicit SingularityError(const std::string& what) : Error("singularity error: " + what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error("I/O error: " + what) {}
};

}  // namespace tcmap

#endif  // TCMAP_ERROR_HPP
