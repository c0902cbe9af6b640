#pragma once

#include <stdexcept>
#include <string>

namespace magflow {

// Shape or index mismatch between operators.
class StructuralError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Argument outside the domain of a special function or formula.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Spectra of two diagonal blocks are closer than the solver tolerance.
class GapViolation : public std::runtime_error {
 public:
  GapViolation(int n, int m, double distance);

  int n() const { return n_; }
  int m() const { return m_; }
  double distance() const { return distance_; }

 private:
  int n_;
  int m_;
  double distance_;
};

class SeriesDivergenceGuard : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotAntihermitian : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The phi-series update and explicit conjugation disagree.
class CrossCheckFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class OmegaImaginary : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class UnnormalizedState : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace magflow
