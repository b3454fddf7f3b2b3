#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace bciphs {

using Index = Eigen::Index;

/// One sampled scalar field, one entry per grid node.
using Field = Eigen::VectorXd;

/// A stack of sampled fields: one row per grid node, one column per field.
using Fields = Eigen::MatrixXd;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InadmissibleState : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class InvalidParametrization : public Error {
 public:
  using Error::Error;
};

class SingularGram : public Error {
 public:
  using Error::Error;
};

class SingularP1 : public Error {
 public:
  using Error::Error;
};

class TooLarge : public Error {
 public:
  using Error::Error;
};

class StepRejected : public Error {
 public:
  using Error::Error;
};

class InvalidKinetics : public Error {
 public:
  using Error::Error;
};

struct Violation {
  std::string check;
  std::string message;
};

/// Accumulates validation failures. Validators never throw on a failed check;
/// they append here and the caller decides.
class ValidationReport {
 public:
  void add(std::string check, std::string message) {
    violations_.push_back({std::move(check), std::move(message)});
  }
  void merge(const ValidationReport& other) {
    violations_.insert(violations_.end(), other.violations_.begin(),
                       other.violations_.end());
  }
  bool ok() const { return violations_.empty(); }
  std::size_t size() const { return violations_.size(); }
  const std::vector<Violation>& violations() const { return violations_; }

  bool mentions(const std::string& needle) const {
    for (const auto& v : violations_) {
      if (v.check.find(needle) != std::string::npos ||
          v.message.find(needle) != std::string::npos) {
        return true;
      }
    }
    return false;
  }

 private:
  std::vector<Violation> violations_;
};

std::ostream& operator<<(std::ostream& os, const ValidationReport& report);

}  // namespace bciphs
