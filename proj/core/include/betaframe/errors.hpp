#pragma once

#include <stdexcept>

namespace betaframe {

// Base class for all library errors. The CLI maps subtypes onto exit codes:
// mathematical precondition violations -> 2, I/O failures -> 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Matrix has numerical rank below the number of columns (sigma_min fell
// under the relative rank tolerance), or a duality check failed.
class RankDeficientError : public Error {
 public:
  using Error::Error;
};

class BadShapeError : public Error {
 public:
  using Error::Error;
};

class DimMismatchError : public Error {
 public:
  using Error::Error;
};

// Brute-force enumeration guard tripped.
class TooLargeError : public Error {
 public:
  using Error::Error;
};

// (beta, delta) lies outside the stability region S_{mu,L}.
class NotAdmissibleError : public Error {
 public:
  using Error::Error;
};

class InputOutOfRangeError : public Error {
 public:
  using Error::Error;
};

class AlphaTooSmallError : public Error {
 public:
  using Error::Error;
};

class BadBetaError : public Error {
 public:
  using Error::Error;
};

class BadEpsError : public Error {
 public:
  using Error::Error;
};

class OddSizeError : public Error {
 public:
  using Error::Error;
};

class BadArgumentError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace betaframe
